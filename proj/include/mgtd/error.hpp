#pragma once

#include <stdexcept>
#include <string>

namespace mgtd {

// Malformed input, missing files, violated operation preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model persistence / compatibility failures (fingerprint, version).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant did not hold (e.g. featurizer leakage).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mgtd
