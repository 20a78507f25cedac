#pragma once

#include <string>
#include <vector>

namespace mfb {

// A per-SNR analytic curve, the counterpart of a simulated RateCurve.
// Values are rates or rate gaps in bits/s/Hz (all logs base 2).
struct BoundCurve {
  std::vector<double> snr_db;
  std::vector<double> value_bits;
  std::string label;
};

// Per-user ergodic rate gap of zero-forcing with CSIT error variance
// sigma_e_sq per channel entry against ideal-CSIT zero-forcing:
//   log2(1 + sigma_e_sq * snr * (M-1)/M).
double analog_gap_bound(double sigma_e_sq, double snr, int m);

// High-SNR ceiling of the analog-feedback gap, independent of SNR and M:
//   log2(1 + 1/beta).
double analog_gap_simple(double beta);

// Per-user rate gap of quantized (RVQ) feedback with B bits against
// ideal-CSIT zero-forcing:  log2(1 + snr * 2^(-B/(M-1))).
double rvq_gap_bound(int bits, int m, double snr);

// Gap of digital feedback whose bit budget scales with capacity,
// B = beta * M * log2(1 + snr):  log2(1 + snr / (1 + snr)^beta).
// Vanishes as snr grows iff beta > 1.
double digital_gap_capacity_fb(double beta, double snr);

// General imperfect-CSIR gap in terms of the receiver's own-coefficient
// error variance sigma_f_sq and the per-beam interference moment
// E|h_k^H v_j|^2:  log2(1 + (snr/M) (sigma_f_sq + (M-1) * moment)).
double csir_gap_general(double sigma_f_sq, double interference_moment, int m,
                        double snr);

// High-SNR gap of analog feedback with trained CSIR (channel-estimation
// redundancy beta1, dedicated training beta2, feedback redundancy beta):
//   log2(1 + 1/beta1 + 1/(M beta2) + 1/beta).
double analog_gap_csir(double beta, double beta1, double beta2, int m);

// Same with capacity-scaled digital feedback replacing the analog term:
//   log2(1 + 1/beta1 + 1/(M beta2) + snr/(1+snr)^beta).
double digital_gap_csir(double beta, double beta1, double beta2, int m, double snr);

// Symbol-error-probability bound for uncoded QAM feedback carrying
// B = alpha*M*log2(snr) bits in beta*M symbols (constellation size
// snr^(alpha/beta)):  min(1, 2 exp(-1.5 * snr^(1 - alpha/beta))).
double qam_ser_bound(double alpha, double beta, double snr);

// Probability that at least one of the beta*M QAM feedback symbols of one
// user is in error: 1 - (1 - P_s)^(beta*M).
double qam_feedback_error_prob(double p_symbol, double beta, int m);

// Achievable per-user rate with QAM feedback, from the ideal-CSIT ZF rate:
//   (1 - P_s)^(beta*M) * max(0, rzf - log2(1 + snr^(1-alpha))).
double qam_rate_lower(double rzf_per_user, double alpha, double beta, int m,
                      double snr);

// Sum-rate pre-log of delayed feedback over a band-limited Doppler process:
// M (1 - 2F).
double doppler_sum_rate_slope(int m, double F);

// Per-user rate ceiling under delayed feedback over an AR1 (regular)
// process, regardless of feedback quality:
//   log2(1/(1-r^2) + (M-1)) - psi(M)/ln 2 + (1/ln 2)(1/(2M-1) + 1/(2M-2)).
double regular_rate_upper(int m, double r);

// Digamma at integer argument via the harmonic-sum identity
// psi(M) = -gamma + sum_{i=1}^{M-1} 1/i.
double psi_integer(int m);

// Evaluates one of the named bounds over an SNR grid given in dB.
// Recognized names and their required parameters are listed by the CLI.
struct BoundParams {
  int m = 4;
  double beta = 1.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double alpha = 1.0;
  int bits = 0;
  double F = 0.0;
  double r = 0.0;
};

BoundCurve evaluate_bound(const std::string& name, const BoundParams& params,
                          const std::vector<double>& snr_db);

// Names accepted by evaluate_bound.
std::vector<std::string> bound_names();

}  // namespace mfb
