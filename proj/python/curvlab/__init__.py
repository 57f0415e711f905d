"""Curvature, functional constants and isoperimetry on finite reversible Markov chains."""

from ._curvlab import *  # noqa: F401,F403
from ._curvlab import __version__, from_json, generate_json


def generate(family, seed=20240611, **params):
    """Build a chain from a generator family, e.g. ``generate("cycle", n=4)``."""
    return from_json(generate_json(family, {k: str(v) for k, v in params.items()}, seed))


def load(path):
    with open(path) as fh:
        return from_json(fh.read())
