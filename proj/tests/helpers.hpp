#pragma once

#include <functional>

namespace improper::testing {

// central finite difference, the reference for every analytic derivative
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline bool close_rel(double a, double b, double tol) {
  const double scale = 1.0 + (std::abs(a) < std::abs(b) ? std::abs(b) : std::abs(a));
  return std::abs(a - b) <= tol * scale;
}

}  // namespace improper::testing
