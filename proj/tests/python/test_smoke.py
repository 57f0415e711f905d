import math

import numpy as np
import pytest

import curvlab


def test_two_point():
    c = curvlab.generate("path", n=2)
    assert c.size == 2
    assert curvlab.kappa(c, "a", "b") == pytest.approx(2.0)
    assert curvlab.eigenvalues(c) == pytest.approx([0.0, 2.0], abs=1e-12)
    assert curvlab.mixing_time(c) == pytest.approx(0.5, abs=1e-6)


def test_path_laplacian_and_separation():
    c = curvlab.generate("path", n=3)
    np.testing.assert_allclose(curvlab.laplacian(c, np.array([0.0, 1.0, 2.0])), [1.0, 0.0, -1.0])
    sol = curvlab.separate(c, ["a"], ["b"], ["c"])
    assert sol["converged"] and sol["verified"]
    np.testing.assert_allclose(sol["f"], [-1.0, 0.0, 1.0])


def test_cycle_isoperimetry():
    c = curvlab.generate("cycle", n=4)
    h, witness = curvlab.cheeger(c)
    assert h == pytest.approx(0.5)
    assert len(witness) == 2
    assert curvlab.obs_diameter(c, 0.125) == 2.0


def test_capacity_energy():
    c = curvlab.generate("path", n=3)
    value, u = curvlab.capacity(c, ["a"], ["c"])
    assert value == pytest.approx(1 / 6)
    assert curvlab.energy(c, u) == pytest.approx(value, abs=1e-12)


def test_counterexample_sweep():
    ratios = [curvlab.counterexample_ratio(10.0 ** -k) for k in range(1, 9)]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    g = curvlab.generate("counterexample", eps=0.1)
    assert curvlab.min_kappa(g) >= 1 - 1e-9


def test_verify_and_errors():
    spec = curvlab.generate_json("cycle", {"n": "4"})
    rows = curvlab.verify_json(spec, "T2")
    assert rows and rows[0]["status"] == "pass"
    assert rows[0]["lhs"] == pytest.approx(0.5 / 64)
    with pytest.raises(ValueError):
        curvlab.generate_json("nope", {})
    assert not math.isnan(curvlab.alpha_spectral(curvlab.generate("path", n=4)))
