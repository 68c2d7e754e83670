#pragma once

#include <stdexcept>
#include <string>

namespace cyclotopo {

/// Bad arguments, malformed files, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular matrices, unstable filters, diverging simulations.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data does not have the graph structure a learner requires.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cyclotopo
