#pragma once

#include <stdexcept>
#include <string>

namespace fmpo {

/// Malformed input or a violated precondition (bad shapes, unknown labels,
/// mismatched spaces). Surfaces as exit code 2 at the command line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input was well-formed but a mathematical requirement failed
/// (non-semisimple algebra, singular fusion tensor, obstructed cocycle...).
/// Surfaces as exit code 1.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmpo
