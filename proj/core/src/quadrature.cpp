#include "mimofb/quadrature.hpp"

#include <cmath>

namespace mfb {

namespace {

// Kronrod 15-point nodes on [-1, 1] and weights; the odd-indexed nodes form
// the embedded 7-point Gauss rule.  Values from the QUADPACK tables.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr double kWeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr double kWeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double sum_k = kWeightK[7] * f(center);
  double sum_g = kWeightG[3] * f(center);
  for (int i = 0; i < 7; ++i) {
    const double lo = f(center - half * kNodes[i]);
    const double hi = f(center + half * kNodes[i]);
    sum_k += kWeightK[i] * (lo + hi);
    if (i % 2 == 1) sum_g += kWeightG[i / 2] * (lo + hi);
  }
  return {half * sum_k, std::abs(half * (sum_k - sum_g))};
}

double refine(const std::function<double(double)>& f, double a, double b,
              double tol, int depth, int max_depth) {
  const PanelResult panel = gauss_kronrod(f, a, b);
  if (!std::isfinite(panel.integral)) {
    throw QuadratureError("integrand produced a non-finite value in [" +
                          std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  if (panel.error <= tol) return panel.integral;
  if (depth >= max_depth) {
    throw QuadratureError("refinement depth limit reached near [" +
                          std::to_string(a) + ", " + std::to_string(b) +
                          "]; residual error estimate " + std::to_string(panel.error));
  }
  const double mid = 0.5 * (a + b);
  return refine(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         refine(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0)) throw QuadratureError("tolerance must be positive");
  if (a == b) return 0.0;
  const double sign = (a < b) ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return sign * refine(f, lo, hi, abs_tol, 0, max_depth);
}

}  // namespace mfb
