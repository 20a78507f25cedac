#include "mimofb/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mfb {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

double log2_1p(double x) { return std::log2(1.0 + x); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

double analog_gap_bound(double sigma_e_sq, double snr, int m) {
  require(sigma_e_sq >= 0.0 && sigma_e_sq <= 1.0, "sigma_e_sq must lie in [0, 1]");
  require(snr >= 0.0, "snr must be non-negative");
  require(m >= 2, "m must be >= 2");
  return log2_1p(sigma_e_sq * snr * (m - 1) / static_cast<double>(m));
}

double analog_gap_simple(double beta) {
  require(beta >= 1.0, "beta must be >= 1");
  return log2_1p(1.0 / beta);
}

double rvq_gap_bound(int bits, int m, double snr) {
  require(bits >= 1, "bits must be >= 1");
  require(m >= 2, "m must be >= 2");
  require(snr >= 0.0, "snr must be non-negative");
  return log2_1p(snr * std::exp2(-static_cast<double>(bits) / (m - 1)));
}

double digital_gap_capacity_fb(double beta, double snr) {
  require(beta >= 1.0, "beta must be >= 1");
  require(snr >= 0.0, "snr must be non-negative");
  return log2_1p(snr / std::pow(1.0 + snr, beta));
}

double csir_gap_general(double sigma_f_sq, double interference_moment, int m,
                        double snr) {
  require(sigma_f_sq >= 0.0, "sigma_f_sq must be non-negative");
  require(interference_moment >= 0.0, "interference moment must be non-negative");
  require(m >= 2, "m must be >= 2");
  require(snr >= 0.0, "snr must be non-negative");
  return log2_1p(snr / m * (sigma_f_sq + (m - 1) * interference_moment));
}

double analog_gap_csir(double beta, double beta1, double beta2, int m) {
  require(beta >= 1.0 && beta1 >= 1.0 && beta2 >= 1.0, "betas must be >= 1");
  require(m >= 2, "m must be >= 2");
  return log2_1p(1.0 / beta1 + 1.0 / (m * beta2) + 1.0 / beta);
}

double digital_gap_csir(double beta, double beta1, double beta2, int m, double snr) {
  require(beta >= 1.0 && beta1 >= 1.0 && beta2 >= 1.0, "betas must be >= 1");
  require(m >= 2, "m must be >= 2");
  require(snr >= 0.0, "snr must be non-negative");
  return log2_1p(1.0 / beta1 + 1.0 / (m * beta2) + snr / std::pow(1.0 + snr, beta));
}

double qam_ser_bound(double alpha, double beta, double snr) {
  require(alpha >= 1.0 && beta >= alpha, "need 1 <= alpha <= beta");
  require(snr > 0.0, "snr must be positive");
  const double bound = 2.0 * std::exp(-1.5 * std::pow(snr, 1.0 - alpha / beta));
  return std::min(1.0, bound);
}

double qam_feedback_error_prob(double p_symbol, double beta, int m) {
  require(p_symbol >= 0.0 && p_symbol <= 1.0, "symbol error probability in [0,1]");
  require(beta >= 1.0 && m >= 2, "need beta >= 1 and m >= 2");
  return 1.0 - std::pow(1.0 - p_symbol, beta * m);
}

double qam_rate_lower(double rzf_per_user, double alpha, double beta, int m,
                      double snr) {
  require(rzf_per_user >= 0.0, "ideal rate must be non-negative");
  const double ps = qam_ser_bound(alpha, beta, snr);
  const double keep = std::pow(1.0 - ps, beta * m);
  const double gap = log2_1p(std::pow(snr, 1.0 - alpha));
  return keep * std::max(0.0, rzf_per_user - gap);
}

double doppler_sum_rate_slope(int m, double F) {
  require(m >= 2, "m must be >= 2");
  require(F > 0.0 && F < 0.5, "need 0 < F < 1/2");
  return m * (1.0 - 2.0 * F);
}

double psi_integer(int m) {
  require(m >= 1, "psi_integer needs m >= 1");
  double harmonic = 0.0;
  for (int i = 1; i < m; ++i) harmonic += 1.0 / i;
  return -kEulerGamma + harmonic;
}

double regular_rate_upper(int m, double r) {
  require(m >= 2, "m must be >= 2");
  require(r >= 0.0 && r < 1.0, "need 0 <= r < 1");
  constexpr double ln2 = 0.6931471805599453;
  const double lead = std::log2(1.0 / (1.0 - r * r) + (m - 1));
  const double correction = (1.0 / (2.0 * m - 1) + 1.0 / (2.0 * m - 2)) / ln2;
  return lead - psi_integer(m) / ln2 + correction;
}

BoundCurve evaluate_bound(const std::string& name, const BoundParams& p,
                          const std::vector<double>& snr_db) {
  require(!snr_db.empty(), "snr grid is empty");
  BoundCurve curve;
  curve.label = name;
  curve.snr_db = snr_db;
  curve.value_bits.reserve(snr_db.size());

  for (double db : snr_db) {
    const double snr = db_to_linear(db);
    double value = 0.0;
    if (name == "analog-gap") {
      // Analog CSIT error variance for a white process with no delay.
      require(p.beta >= 1.0, "beta must be >= 1");
      value = analog_gap_bound(1.0 / (1.0 + p.beta * snr), snr, p.m);
    } else if (name == "analog-gap-simple") {
      value = analog_gap_simple(p.beta);
    } else if (name == "rvq-gap") {
      value = rvq_gap_bound(p.bits, p.m, snr);
    } else if (name == "digital-gap") {
      value = digital_gap_capacity_fb(p.beta, snr);
    } else if (name == "analog-gap-csir") {
      value = analog_gap_csir(p.beta, p.beta1, p.beta2, p.m);
    } else if (name == "digital-gap-csir") {
      value = digital_gap_csir(p.beta, p.beta1, p.beta2, p.m, snr);
    } else if (name == "qam-ser") {
      value = qam_ser_bound(p.alpha, p.beta, snr);
    } else if (name == "doppler-slope") {
      value = doppler_sum_rate_slope(p.m, p.F);
    } else if (name == "regular-rate-upper") {
      value = regular_rate_upper(p.m, p.r);
    } else {
      throw std::domain_error("unknown bound name '" + name + "'");
    }
    curve.value_bits.push_back(value);
  }
  return curve;
}

std::vector<std::string> bound_names() {
  return {"analog-gap",      "analog-gap-simple", "rvq-gap",
          "digital-gap",     "analog-gap-csir",   "digital-gap-csir",
          "qam-ser",         "doppler-slope",     "regular-rate-upper"};
}

}  // namespace mfb
