#pragma once

#include <stdexcept>
#include <string>

namespace lpspec {

// A numerical procedure (quadrature, fit) failed to reach its tolerance.
// Invalid input is reported with std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

}  // namespace lpspec
