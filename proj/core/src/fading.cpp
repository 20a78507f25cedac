#include "mimofb/fading.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mimofb/quadrature.hpp"

namespace mfb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 2.9979e8;  // m/s

}  // namespace

FadingProcess FadingProcess::iid_block() {
  return {ProcessKind::IIDBlock, 0.0, 0.0};
}

FadingProcess FadingProcess::jakes(double F) {
  if (!(F > 0.0) || !(F < 0.5)) {
    throw std::domain_error("Jakes process requires 0 < F < 1/2, got F=" +
                            std::to_string(F));
  }
  return {ProcessKind::Jakes, F, 0.0};
}

FadingProcess FadingProcess::ar1(double r) {
  if (!(r >= 0.0) || !(r < 1.0)) {
    throw std::domain_error("AR1 process requires 0 <= r < 1, got r=" +
                            std::to_string(r));
  }
  return {ProcessKind::AR1, 0.0, r};
}

std::string FadingProcess::describe() const {
  switch (kind) {
    case ProcessKind::IIDBlock:
      return "iid";
    case ProcessKind::Jakes:
      return "jakes(F=" + std::to_string(F) + ")";
    case ProcessKind::AR1:
      return "ar1(r=" + std::to_string(r) + ")";
  }
  return "unknown";
}

double spectrum(const FadingProcess& process, double xi) {
  if (std::abs(xi) > 0.5) {
    throw std::domain_error("normalized frequency must lie in [-1/2, 1/2]");
  }
  switch (process.kind) {
    case ProcessKind::IIDBlock:
      return 1.0;
    case ProcessKind::Jakes: {
      const double F = process.F;
      if (std::abs(xi) >= F) return 0.0;
      return 1.0 / (kPi * std::sqrt(F * F - xi * xi));
    }
    case ProcessKind::AR1: {
      const double r = process.r;
      // (1 - r^2) / |1 - r e^{-i 2 pi xi}|^2
      const double denom = 1.0 + r * r - 2.0 * r * std::cos(2.0 * kPi * xi);
      return (1.0 - r * r) / denom;
    }
  }
  throw std::logic_error("unreachable process kind");
}

double autocorrelation(const FadingProcess& process, int tau) {
  const int lag = std::abs(tau);
  switch (process.kind) {
    case ProcessKind::IIDBlock:
      return lag == 0 ? 1.0 : 0.0;
    case ProcessKind::Jakes:
      return std::cyl_bessel_j(0, 2.0 * kPi * process.F * lag);
    case ProcessKind::AR1:
      return std::pow(process.r, lag);
  }
  throw std::logic_error("unreachable process kind");
}

double prediction_mmse(const FadingProcess& process, double delta) {
  if (!(delta > 0.0)) {
    throw std::domain_error("observation noise variance delta must be positive");
  }
  switch (process.kind) {
    case ProcessKind::IIDBlock:
      // exp(log(delta + 1)) - delta: a white process is unpredictable.
      return 1.0;
    case ProcessKind::Jakes: {
      // Split the log-spectrum integral at the band edge: outside [-F, F]
      // the spectrum vanishes and contributes (1 - 2F) log(delta); inside,
      // substitute xi = F sin(theta) to remove the 1/sqrt edge singularity:
      //   d(xi) = F cos(theta) d(theta),  S_h = 1/(pi F cos(theta)).
      const double F = process.F;
      const auto integrand = [&](double theta) {
        const double c = std::cos(theta);
        return std::log(delta + 1.0 / (kPi * F * c)) * F * c;
      };
      const double band = integrate(integrand, -0.5 * kPi, 0.5 * kPi, 1e-9);
      return std::pow(delta, 1.0 - 2.0 * F) * std::exp(band) - delta;
    }
    case ProcessKind::AR1: {
      const FadingProcess& p = process;
      const auto integrand = [&](double xi) { return std::log(delta + spectrum(p, xi)); };
      const double whole = integrate(integrand, -0.5, 0.5, 1e-9);
      return std::exp(whole) - delta;
    }
  }
  throw std::logic_error("unreachable process kind");
}

double filtering_mmse(double eps1, double delta) {
  if (!(eps1 > 0.0) || !(delta > 0.0)) {
    throw std::domain_error("filtering MMSE requires eps1 > 0 and delta > 0");
  }
  return delta * eps1 / (delta + eps1);
}

double jakes_log_spectrum_integral(double F) {
  if (!(F > 0.0) || !(F < 0.5)) {
    throw std::domain_error("log-spectrum integral requires 0 < F < 1/2");
  }
  // integral over [-F, F] of log(1/(pi sqrt(F^2 - xi^2))) d(xi)
  //   = -2F log(pi F) - 2 integral_0^F log sqrt(1 - (xi/F)^2) ... evaluated
  // in closed form via integral_0^1 log sqrt(1 - u^2) du = log(2/e):
  //   = -2F (log(2 pi F) - 1).
  return -2.0 * F * (std::log(2.0 * kPi * F) - 1.0);
}

DopplerEps1Bounds doppler_eps1_bounds(double F, double delta, double log_integral) {
  if (!(F > 0.0) || !(F < 0.5)) {
    throw std::domain_error("Doppler bounds require 0 < F < 1/2, got F=" +
                            std::to_string(F));
  }
  if (!(delta > 0.0)) {
    throw std::domain_error("Doppler bounds require delta > 0");
  }
  const double outer = std::pow(delta, 1.0 - 2.0 * F);
  const double edge = std::pow(delta, 2.0 * F);
  const double upper = outer * (std::pow(1.0 / (2.0 * F) + delta, 2.0 * F) - edge);
  const double lower = outer * (std::exp(log_integral) - edge);
  return {lower, upper};
}

double doppler_F(double v_mps, double fc_hz, double Tf_s) {
  if (!(v_mps > 0.0) || !(fc_hz > 0.0) || !(Tf_s > 0.0)) {
    throw std::domain_error("doppler_F requires positive speed, carrier and frame time");
  }
  const double F = v_mps * fc_hz * Tf_s / kSpeedOfLight;
  if (F >= 0.5) {
    throw std::domain_error("normalized Doppler F=" + std::to_string(F) +
                            " >= 1/2: the band-limited model does not apply");
  }
  return F;
}

double csit_error_variance_delayed(const FadingProcess& process, double beta,
                                   double snr, int delay) {
  if (!(beta >= 1.0)) throw std::domain_error("beta must be >= 1");
  if (!(snr > 0.0)) throw std::domain_error("snr must be positive");
  if (delay != 0 && delay != 1) throw std::domain_error("delay must be 0 or 1");

  const double delta = 1.0 / (beta * snr);
  const double eps1 = prediction_mmse(process, delta);
  return delay == 1 ? eps1 : filtering_mmse(eps1, delta);
}

}  // namespace mfb
