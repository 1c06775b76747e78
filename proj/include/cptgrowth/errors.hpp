#pragma once

#include <stdexcept>
#include <string>

namespace cpt {

// Thrown when an iterative scheme fails to meet its residual target.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Configuration the solver deliberately refuses to extrapolate to.
class unsupported_configuration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpt
