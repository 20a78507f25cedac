#pragma once

#include <string>

namespace mfb {

// Temporal correlation model of each scalar fading coefficient, described
// by its Doppler spectrum S_h(xi) on the normalized frequency interval
// [-1/2, 1/2].  All variants are unit power: the spectrum integrates to 1.
enum class ProcessKind {
  IIDBlock,  // white: new independent draw every frame
  Jakes,     // band-limited, S_h(xi) = 1/(pi sqrt(F^2 - xi^2)) for |xi| < F
  AR1,       // first-order Gauss-Markov with one-lag correlation r
};

struct FadingProcess {
  ProcessKind kind = ProcessKind::IIDBlock;
  double F = 0.0;  // Jakes: normalized maximum Doppler shift, 0 < F < 1/2
  double r = 0.0;  // AR1: one-lag correlation, 0 <= r < 1

  static FadingProcess iid_block();
  static FadingProcess jakes(double F);  // rejects F outside (0, 1/2)
  static FadingProcess ar1(double r);    // rejects r outside [0, 1)

  std::string describe() const;
};

// Doppler spectrum S_h(xi) for |xi| <= 1/2.
double spectrum(const FadingProcess& process, double xi);

// Autocorrelation E[h(t) h*(t-tau)] at integer lag tau: 1 at lag 0 for the
// white process (0 elsewhere), J_0(2 pi F tau) for Jakes, r^|tau| for AR1.
double autocorrelation(const FadingProcess& process, int tau);

// One-step prediction MMSE from the infinite past observed through noise of
// variance delta:
//   eps_1(delta) = exp( integral of log(delta + S_h(xi)) over [-1/2, 1/2] ) - delta.
// The band-limited Jakes integrand is smoothed with the substitution
// xi = F sin(theta) before adaptive quadrature; the white process returns 1
// in closed form.  Quadrature failure is reported via QuadratureError.
double prediction_mmse(const FadingProcess& process, double delta);

// Filtering MMSE from prediction MMSE: eps_0 = delta * eps_1 / (delta + eps_1).
double filtering_mmse(double eps1, double delta);

// Closed-form integral of log S_h over the Jakes band [-F, F]:
//   -2F (log(2 pi F) - 1).
// Evaluated analytically; the spectrum is log-integrable for all 0 < F < 1/2.
double jakes_log_spectrum_integral(double F);

struct DopplerEps1Bounds {
  double lower;
  double upper;
};

// Algebraic sandwich for the prediction MMSE of a band-limited process:
//   upper = delta^(1-2F) [ (1/(2F) + delta)^(2F) - delta^(2F) ]
//   lower = delta^(1-2F) [ exp(log_integral) - delta^(2F) ]
// where log_integral = integral of log S_h over [-F, F].
DopplerEps1Bounds doppler_eps1_bounds(double F, double delta, double log_integral);

// Normalized maximum Doppler shift F = v * fc * Tf / c for mobile speed v
// [m/s], carrier fc [Hz], and frame duration Tf [s], with
// c = 2.9979e8 m/s.  Rejects non-positive inputs and F >= 1/2 (the
// band-limited model is undefined there).
double doppler_F(double v_mps, double fc_hz, double Tf_s);

// CSIT error variance of analog feedback over a fading process with
// per-coefficient feedback redundancy beta at the given linear snr:
// the observation noise is delta = 1/(beta * snr), and the error is the
// prediction MMSE (delay = 1 frame) or the filtering MMSE (delay = 0).
// Reduces to 1/(1 + beta * snr) for the white process at delay 0.
double csit_error_variance_delayed(const FadingProcess& process, double beta,
                                   double snr, int delay);

}  // namespace mfb
