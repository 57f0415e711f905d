#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

/// Raised by build_chain when a graph description does not define a valid
/// connected reversible metric Markov chain.
class InvalidChain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain (empty subset, non-lazy kernel
/// for a sectional quantity, nonpositive function for an entropy, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration refused because the chain exceeds the configured cap.
class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A numerical routine failed to reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace curvlab
