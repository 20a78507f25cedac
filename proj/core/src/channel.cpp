#include "mimofb/channel.hpp"

#include <cmath>

namespace mfb {

ChannelRealization sample_iid_channel(int m, int k, Rng& rng) {
  if (m != k) {
    throw std::domain_error("channel requires one user per antenna (m == k), got m=" +
                            std::to_string(m) + " k=" + std::to_string(k));
  }
  if (m < 2) {
    throw std::domain_error("channel requires at least 2 antennas, got m=" +
                            std::to_string(m));
  }
  ChannelRealization real;
  real.h_true.resize(m, k);
  for (int col = 0; col < k; ++col) {
    for (int row = 0; row < m; ++row) {
      real.h_true(row, col) = rng.cgauss();
    }
  }
  real.h_csit = real.h_true;
  real.h_csir = real.h_true;
  real.err_csit_var = 0.0;
  return real;
}

BeamformerSet zf_beamformer(const CMat& h) {
  const auto m = h.rows();
  if (h.cols() != m) {
    throw std::domain_error("zero-forcing needs a square channel matrix");
  }

  // Degeneracy gate: near-collinear user channels make every ZF direction
  // ill-conditioned, so reject the whole draw rather than emit garbage.
  Eigen::JacobiSVD<CMat> svd(h);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) < 1e-9 * sv(0)) {
    throw DegenerateChannelError("channel matrix is numerically rank-deficient");
  }

  BeamformerSet bf;
  bf.v.resize(m, m);
  CMat others(m, m - 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != k) others.col(at++) = h.col(j);
    }
    // Householder QR of the other users' channels; the final column of Q
    // completes the orthonormal basis, i.e. spans their orthogonal
    // complement.
    Eigen::HouseholderQR<CMat> qr(others);
    CMat q = qr.householderQ();
    CVec v = q.col(m - 1);

    // Phase convention: rotate so the own-channel inner product h_k^H v_k
    // is real and non-negative (rates are phase-invariant; this pins the
    // representative).
    const std::complex<double> z = h.col(k).dot(v);
    const double mag = std::abs(z);
    if (mag > 0.0) v *= std::conj(z) / mag;
    bf.v.col(k) = v;
  }
  return bf;
}

std::vector<SinrTerms> per_user_sinr_terms(const ChannelRealization& real,
                                           const BeamformerSet& bf, double snr) {
  const auto m = real.h_true.rows();
  if (bf.v.rows() != m || bf.v.cols() != real.h_true.cols()) {
    throw std::domain_error("beamformer dimensions do not match the channel");
  }
  if (snr < 0.0) throw std::domain_error("snr must be non-negative");

  // cross(k, j) = h_k^H v_j for all pairs at once.
  const CMat cross = real.h_true.adjoint() * bf.v;
  const double per_user_power = snr / static_cast<double>(m);

  std::vector<SinrTerms> terms(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    double interference = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != k) interference += std::norm(cross(k, j));
    }
    terms[static_cast<std::size_t>(k)] = {cross(k, k), 1.0 + per_user_power * interference};
  }
  return terms;
}

}  // namespace mfb
