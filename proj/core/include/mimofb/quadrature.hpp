#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace mfb {

// Raised when adaptive refinement cannot meet the requested tolerance
// within the interval-subdivision depth limit.  Integration failures are
// always reported; a silently wrong value is never returned.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b] to the given
// absolute tolerance.  Intervals whose K15-vs-G7 error estimate exceeds
// their tolerance share are bisected recursively; exceeding `max_depth`
// levels throws QuadratureError.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9, int max_depth = 48);

}  // namespace mfb
