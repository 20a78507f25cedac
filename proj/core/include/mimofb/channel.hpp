#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mimofb/rng.hpp"

namespace mfb {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// One channel draw of an M-antenna broadcast downlink with K = M single-
// antenna users.  Column k of h_true is user k's channel vector; h_csit and
// h_csir hold the transmitter- and receiver-side estimates that feedback
// and training models overwrite (both start equal to h_true).
struct ChannelRealization {
  CMat h_true;
  CMat h_csit;
  CMat h_csir;
  // Per-entry variance of h_true - h_csit under the active feedback model.
  double err_csit_var = 0.0;
};

// Unit-norm zero-forcing beamformers; column k is orthogonal to every other
// user's (estimated) channel vector.
struct BeamformerSet {
  CMat v;
};

// Thrown when a channel matrix is numerically rank-deficient (smallest
// singular value below 1e-9 of the largest) and no zero-forcing solution
// should be trusted.  Simulation loops resample the draw and count it; with
// continuous Gaussian entries this is a measure-zero event.
class DegenerateChannelError : public std::runtime_error {
 public:
  explicit DegenerateChannelError(const std::string& what) : std::runtime_error(what) {}
};

// Draws an m x k matrix of i.i.d. CN(0, 1) entries (unit variance per
// entry, so E[|h_k|^2] = m).  Requires m = k >= 2; the square symmetric
// configuration is the only one supported.
ChannelRealization sample_iid_channel(int m, int k, Rng& rng);

// Computes unit-norm zero-forcing beamformers for a square channel matrix:
// column k spans the one-dimensional orthogonal complement of the other
// columns, obtained by orthonormal-basis completion (Householder QR) rather
// than matrix inversion.  The phase is fixed so that h_k^H v_k is real and
// non-negative.  Throws DegenerateChannelError on near-collinear input.
BeamformerSet zf_beamformer(const CMat& h);

// Useful-signal coefficient and interference-plus-noise variance for one
// user under uniform power allocation P/M, with noise power normalized to
// N0 = 1 (snr is the linear ratio P/N0).
struct SinrTerms {
  std::complex<double> a;  // h_k^H v_k, true channel onto own beamformer
  double sigma;            // 1 + (snr/M) * sum_{j != k} |h_k^H v_j|^2
};

// Evaluates a_k and Sigma_k for every user from the true channel and the
// beamformers (which the caller computed from h_csit).
std::vector<SinrTerms> per_user_sinr_terms(const ChannelRealization& real,
                                           const BeamformerSet& bf, double snr);

}  // namespace mfb
