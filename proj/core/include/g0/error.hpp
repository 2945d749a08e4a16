#pragma once

#include <stdexcept>
#include <string>

namespace g0 {

// Thrown when an iterative numerical scheme fails to reach its target
// accuracy (series truncation, quadrature subdivision, ...). Domain and
// usage violations use std::domain_error / std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace g0
