#include "mimofb/feedback.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mimofb/bounds.hpp"

namespace mfb {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

CVec gaussian_vector(int m, Rng& rng) {
  CVec g(m);
  for (int i = 0; i < m; ++i) g(i) = rng.cgauss();
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Analog feedback

void apply_analog_feedback(ChannelRealization& real, double beta, double snr,
                           int delay, const FadingProcess& process, Rng& rng,
                           double source_err_var) {
  require(source_err_var >= 0.0 && source_err_var < 1.0,
          "source error variance must lie in [0, 1)");
  const double w = csit_error_variance_delayed(process, beta, snr, delay);

  // Fully uninformative feedback (one-frame delay over block-i.i.d. fading
  // gives w = 1): the conditional mean is the zero matrix, which carries no
  // directions to beamform on.  Hand the transmitter an independent draw
  // instead — the beamformers are then independent of the true channel,
  // which is exactly the operating point this limit describes.
  if (w > 1.0 - 1e-12) {
    for (Eigen::Index col = 0; col < real.h_csit.cols(); ++col) {
      real.h_csit.col(col) = gaussian_vector(int(real.h_csit.rows()), rng);
    }
    real.err_csit_var = 1.0;
    return;
  }

  const double keep = 1.0 - w;
  const double noise_std = std::sqrt(w * keep * (1.0 - source_err_var));

  real.h_csit = keep * real.h_csir;
  for (Eigen::Index col = 0; col < real.h_csit.cols(); ++col) {
    for (Eigen::Index row = 0; row < real.h_csit.rows(); ++row) {
      real.h_csit(row, col) += noise_std * rng.cgauss();
    }
  }
  real.err_csit_var = source_err_var + w * (1.0 - source_err_var);
}

// ---------------------------------------------------------------------------
// RVQ feedback

std::vector<CVec> rvq_codebook(int bits, int m, Rng& rng) {
  require(bits >= 1, "codebook needs at least 1 bit");
  require(bits <= kMaxEnumeratedBits,
          "codebook of 2^" + std::to_string(bits) +
              " vectors exceeds the enumeration cap of 2^" +
              std::to_string(kMaxEnumeratedBits));
  require(m >= 2, "codebook needs m >= 2");

  const std::size_t size = std::size_t{1} << bits;
  std::vector<CVec> book;
  book.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    CVec g = gaussian_vector(m, rng);
    book.push_back(g / g.norm());
  }
  return book;
}

std::pair<int, CVec> rvq_quantize(const CVec& h, const std::vector<CVec>& codebook) {
  require(!codebook.empty(), "codebook is empty");
  require(h.norm() > 0.0, "cannot quantize the zero vector");

  int best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const double score = std::norm(h.dot(codebook[i]));
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return {best, codebook[static_cast<std::size_t>(best)]};
}

CVec rvq_quantize_streaming(const CVec& h, int bits, Rng& rng) {
  require(bits >= 1, "quantization needs at least 1 bit");
  require(bits <= kMaxEnumeratedBits,
          "streaming enumeration capped at 2^" + std::to_string(kMaxEnumeratedBits) +
              " codewords, got 2^" + std::to_string(bits));
  require(h.norm() > 0.0, "cannot quantize the zero vector");

  const int m = static_cast<int>(h.size());
  const std::uint64_t count = std::uint64_t{1} << bits;
  CVec best(m);
  double best_score = -1.0;
  CVec g(m);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (int row = 0; row < m; ++row) g(row) = rng.cgauss();
    // Candidate directions are normalized Gaussians; compare
    // |h^H g|^2 / |g|^2 so normalization happens once, for the winner.
    const double score = std::norm(h.dot(g)) / g.squaredNorm();
    if (score > best_score) {
      best_score = score;
      best = g;
    }
  }
  return best / best.norm();
}

CVec rvq_sample_quantized_direction(const CVec& h, int bits, Rng& rng) {
  require(bits >= 1, "quantization needs at least 1 bit");
  require(h.norm() > 0.0, "cannot quantize the zero vector");
  const int m = static_cast<int>(h.size());
  require(m >= 2, "quantization needs m >= 2");

  // The squared sine of a single random codeword's angle to h is
  // Beta(m-1, 1): P(sin^2 <= x) = x^(m-1).  The best of 2^B independent
  // codewords therefore satisfies P(sin^2 <= x) = 1 - (1 - x^(m-1))^(2^B);
  // inverting with u uniform on (0, 1] in log space stays stable for any B.
  const double log_u = std::log(rng.uniform_pos());
  const double sin_sq =
      std::pow(-std::expm1(std::exp2(-static_cast<double>(bits)) * log_u),
               1.0 / (m - 1));
  const double sin_theta = std::sqrt(sin_sq);
  const double cos_theta = std::sqrt(1.0 - sin_sq);

  const CVec h_dir = h / h.norm();

  // Conditioned on its angle, the winner is uniform on the cone: a uniform
  // phase along h plus a uniform direction in the orthogonal complement.
  CVec perp;
  do {
    CVec g = gaussian_vector(m, rng);
    perp = g - h_dir * h_dir.dot(g);
  } while (!(perp.norm() > 1e-12));
  perp /= perp.norm();

  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  const std::complex<double> rot{std::cos(phase), std::sin(phase)};
  return cos_theta * rot * h_dir + sin_theta * perp;
}

double rvq_sin2(const CVec& h, const CVec& w) {
  const double hn = h.squaredNorm();
  const double wn = w.squaredNorm();
  require(hn > 0.0 && wn > 0.0, "angle undefined for zero vectors");
  const double cos_sq = std::norm(h.dot(w)) / (hn * wn);
  return std::max(0.0, 1.0 - cos_sq);
}

int resolve_rvq_bits(const RvqScheme& scheme, int m, double snr) {
  require(m >= 2, "rvq needs m >= 2");
  if (scheme.bits.has_value()) {
    require(*scheme.bits >= 1, "explicit bit budget must be >= 1");
    return *scheme.bits;
  }
  require(scheme.beta >= 1.0, "capacity-scaled bits need beta >= 1");
  require(snr > 0.0, "capacity-scaled bits need snr > 0");
  const long bits = std::lround(scheme.beta * m * std::log2(1.0 + snr));
  return static_cast<int>(std::max(1l, bits));
}

bool rvq_uses_sampled_engine(const RvqScheme& scheme, int bits) {
  switch (scheme.engine) {
    case RvqEngine::Enumerated:
      return false;
    case RvqEngine::Sampled:
      return true;
    case RvqEngine::Auto:
      return bits > kAutoSampledBits;
  }
  return true;
}

CVec rvq_quantize_column(const CVec& h, const RvqScheme& scheme, int bits, Rng& rng) {
  if (rvq_uses_sampled_engine(scheme, bits)) {
    return rvq_sample_quantized_direction(h, bits, rng);
  }
  return rvq_quantize_streaming(h, bits, rng);
}

DigitalFeedbackInfo apply_digital_feedback(ChannelRealization& real,
                                           const RvqScheme& scheme, double snr,
                                           Rng& rng) {
  const int m = static_cast<int>(real.h_true.rows());
  const int bits = resolve_rvq_bits(scheme, m, snr);
  const double scale = std::sqrt(static_cast<double>(m));

  DigitalFeedbackInfo info;
  info.bits = bits;
  info.sampled_engine = rvq_uses_sampled_engine(scheme, bits);
  for (Eigen::Index col = 0; col < real.h_csit.cols(); ++col) {
    const CVec dir = rvq_quantize_column(real.h_csir.col(col), scheme, bits, rng);
    real.h_csit.col(col) = scale * dir;
  }
  return info;
}

// ---------------------------------------------------------------------------
// QAM feedback

CVec uniform_direction(int m, Rng& rng) {
  require(m >= 1, "direction needs m >= 1");
  CVec g;
  do {
    g = gaussian_vector(m, rng);
  } while (!(g.norm() > 1e-12));
  return g / g.norm();
}

int qam_constellation_size(double alpha, double beta, double snr) {
  require(alpha >= 1.0 && beta >= alpha, "need 1 <= alpha <= beta");
  require(snr > 1.0, "QAM feedback needs snr > 1");
  const double nominal = std::pow(snr, alpha / beta);
  // Largest square constellation with a power-of-two side that fits the
  // nominal size; QPSK at minimum.
  int side = 2;
  while (4.0 * side * side <= nominal && side < (1 << 14)) side *= 2;
  return side * side;
}

QamSerSimResult qam_ser_simulate(double alpha, double beta, double snr,
                                 long symbols, Rng& rng) {
  require(symbols >= 1, "need at least one symbol");
  const int constellation = qam_constellation_size(alpha, beta, snr);
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(constellation))));

  // PAM levels per axis: +-1, +-3, ..., +-(side-1), scaled for unit average
  // symbol energy.  Labels are Gray per axis, so a symbol error is simply a
  // wrong slice on either axis; the label permutation itself affects bit
  // errors only, which are not counted here.
  const double scale = std::sqrt(3.0 / (2.0 * (static_cast<double>(constellation) - 1.0)));
  const double noise_std_axis = std::sqrt(0.5 / snr);

  const auto level = [&](int idx) { return scale * (2 * idx - (side - 1)); };
  const auto slice = [&](double y) {
    const int idx = static_cast<int>(std::lround((y / scale + (side - 1)) / 2.0));
    return std::min(side - 1, std::max(0, idx));
  };

  long errors = 0;
  for (long s = 0; s < symbols; ++s) {
    // uniform() < 1 strictly, so the index never reaches `side`.
    const int i_idx = static_cast<int>(rng.uniform() * side);
    const int q_idx = static_cast<int>(rng.uniform() * side);
    const double yi = level(i_idx) + noise_std_axis * rng.gaussian();
    const double yq = level(q_idx) + noise_std_axis * rng.gaussian();
    if (slice(yi) != i_idx || slice(yq) != q_idx) ++errors;
  }
  return {static_cast<double>(errors) / static_cast<double>(symbols), symbols,
          constellation};
}

QamFeedbackInfo apply_qam_feedback(ChannelRealization& real, const QamScheme& scheme,
                                   double snr, Rng& rng, double p_symbol_override) {
  require(scheme.alpha >= 1.0 && scheme.beta >= scheme.alpha,
          "need 1 <= alpha <= beta");
  require(snr > 1.0, "QAM feedback needs snr > 1 (bit budget uses log2(snr))");
  const int m = static_cast<int>(real.h_true.rows());

  QamFeedbackInfo info;
  const long bits = std::lround(scheme.alpha * m * std::log2(snr));
  info.bits = static_cast<int>(std::max(1l, bits));
  info.p_symbol = (p_symbol_override >= 0.0)
                      ? p_symbol_override
                      : qam_ser_bound(scheme.alpha, scheme.beta, snr);
  info.p_feedback_error = qam_feedback_error_prob(info.p_symbol, scheme.beta, m);

  RvqScheme rvq;
  rvq.bits = info.bits;
  info.sampled_engine = rvq_uses_sampled_engine(rvq, info.bits);

  const double scale = std::sqrt(static_cast<double>(m));
  info.in_error.resize(static_cast<std::size_t>(real.h_csit.cols()));
  for (Eigen::Index col = 0; col < real.h_csit.cols(); ++col) {
    const bool err = rng.uniform() < info.p_feedback_error;
    info.in_error[static_cast<std::size_t>(col)] = err;
    const CVec dir = err ? uniform_direction(m, rng)
                         : rvq_quantize_column(real.h_csir.col(col), rvq, info.bits, rng);
    real.h_csit.col(col) = scale * dir;
  }
  return info;
}

// ---------------------------------------------------------------------------
// CSIR training

CsirTrainingResult apply_csir_training(ChannelRealization& real, double beta1,
                                       double beta2, double snr, Rng& rng) {
  require(beta1 >= 1.0 && beta2 >= 1.0, "training redundancies must be >= 1");
  require(snr > 0.0, "snr must be positive");

  CsirTrainingResult result;
  result.e1 = 1.0 / (1.0 + beta1 * snr);
  result.sigma_f_sq = 1.0 / (1.0 + beta2 * snr);

  const double keep = 1.0 - result.e1;
  const double noise_std = std::sqrt(result.e1 * keep);
  real.h_csir = keep * real.h_true;
  for (Eigen::Index col = 0; col < real.h_csir.cols(); ++col) {
    for (Eigen::Index row = 0; row < real.h_csir.rows(); ++row) {
      real.h_csir(row, col) += noise_std * rng.cgauss();
    }
  }
  return result;
}

std::complex<double> sample_estimated_coefficient(std::complex<double> a,
                                                  double sigma_f_sq, Rng& rng) {
  require(sigma_f_sq >= 0.0 && sigma_f_sq < 1.0, "sigma_f_sq must lie in [0, 1)");
  const double keep = 1.0 - sigma_f_sq;
  return keep * a + std::sqrt(sigma_f_sq * keep) * rng.cgauss();
}

}  // namespace mfb
