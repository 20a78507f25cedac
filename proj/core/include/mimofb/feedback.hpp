#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "mimofb/channel.hpp"
#include "mimofb/fading.hpp"
#include "mimofb/rng.hpp"

namespace mfb {

// Hard cap on the number of quantization bits the enumerated RVQ engine
// accepts: 2^24 codewords is the most a desk-scale run should ever stream
// through the argmax.  Larger budgets must use the sampled engine.
inline constexpr int kMaxEnumeratedBits = 24;

// Bit budget at which the automatic engine choice switches from enumerating
// codewords to sampling the quantization law directly (enumeration cost
// doubles per bit; 2^16 dot products per user per trial is the practical
// Monte Carlo limit on one core).
inline constexpr int kAutoSampledBits = 16;

enum class RvqEngine {
  Auto,        // enumerate up to kAutoSampledBits, sample beyond
  Enumerated,  // always stream the 2^B codewords (B <= kMaxEnumeratedBits)
  Sampled,     // always draw from the exact quantization-cell law
};

struct PerfectScheme {};

// Unquantized feedback of channel coefficients over an AWGN uplink using
// beta >= 1 channel uses per coefficient; `delay` frames of feedback
// latency over the given fading process (0 = filtering, 1 = prediction).
struct AnalogScheme {
  double beta = 1.0;
  int delay = 0;
  FadingProcess process = FadingProcess::iid_block();
};

// Random-vector-quantized feedback of the channel direction.  The bit
// budget is either explicit or scaled with capacity:
// B = round(beta * M * log2(1 + snr)).
struct RvqScheme {
  std::optional<int> bits;
  double beta = 1.0;
  RvqEngine engine = RvqEngine::Auto;
};

// RVQ bits carried over the feedback link by uncoded QAM: B =
// round(alpha * M * log2(snr)) bits in beta*M symbol periods.  A symbol
// error scrambles the whole index, leaving CSIT independent of the channel.
struct QamScheme {
  double alpha = 1.0;
  double beta = 1.0;
};

using FeedbackScheme = std::variant<PerfectScheme, AnalogScheme, RvqScheme, QamScheme>;

struct CsirPerfect {};

// Receiver-side channel knowledge acquired from downlink training: common
// pilots with redundancy beta1 give the channel estimate; dedicated pilots
// with redundancy beta2 give the estimate of the own beamformed
// coefficient a_k.
struct CsirTrained {
  double beta1 = 1.0;
  double beta2 = 1.0;
};

using CsirModel = std::variant<CsirPerfect, CsirTrained>;

// ---------------------------------------------------------------------------
// Analog feedback

// Overwrites h_csit with the transmitter's MMSE estimate of h_csir after
// analog feedback: h_csit = (1-w) h_csir + sqrt(w (1-w) (1-source_err_var)) G
// with w = csit_error_variance_delayed(process, beta, snr, delay).
// `source_err_var` is the per-entry error variance of h_csir vs. h_true
// (0 under perfect CSIR); err_csit_var becomes the cascaded total
// source_err_var + w * (1 - source_err_var).
void apply_analog_feedback(ChannelRealization& real, double beta, double snr,
                           int delay, const FadingProcess& process, Rng& rng,
                           double source_err_var = 0.0);

// ---------------------------------------------------------------------------
// RVQ feedback

// A materialized random codebook: 2^bits i.i.d. directions uniform on the
// complex unit sphere in C^m.  Memory is 16m bytes per codeword, so the
// enumerated cap applies; prefer rvq_quantize_streaming in hot loops.
std::vector<CVec> rvq_codebook(int bits, int m, Rng& rng);

// Returns (index, codeword) of the codebook entry maximizing |h^H w|^2,
// lowest index on ties.
std::pair<int, CVec> rvq_quantize(const CVec& h, const std::vector<CVec>& codebook);

// Same quantization law as rvq_codebook + rvq_quantize with a fresh random
// codebook, but streams the argmax over generated candidates in O(1)
// memory.  Requires bits <= kMaxEnumeratedBits.
CVec rvq_quantize_streaming(const CVec& h, int bits, Rng& rng);

// Draws the quantized direction from the exact conditional law of the
// winning codeword of a fresh 2^bits random codebook, without enumerating
// it: the minimum angle satisfies P(sin^2 <= x) = 1 - (1 - x^(m-1))^(2^B),
// and given the angle the winner is uniform on the cone around h.
// Distribution-identical to the enumerated engines for every B; the only
// engine that scales to large B.
CVec rvq_sample_quantized_direction(const CVec& h, int bits, Rng& rng);

// sin^2 of the principal angle between the directions of h and w.
double rvq_sin2(const CVec& h, const CVec& w);

// Resolved bit budget for a scheme at a given snr (explicit bits, or the
// capacity rule round(beta * m * log2(1 + snr)), at least 1).
int resolve_rvq_bits(const RvqScheme& scheme, int m, double snr);

// True if quantization at this bit budget runs on the sampled engine.
bool rvq_uses_sampled_engine(const RvqScheme& scheme, int bits);

// Quantizes one channel column to a unit direction with the engine chosen
// by the scheme.  Throws std::domain_error if an enumerated engine is
// forced beyond kMaxEnumeratedBits.
CVec rvq_quantize_column(const CVec& h, const RvqScheme& scheme, int bits, Rng& rng);

// Overwrites every h_csit column with its quantized direction scaled to
// norm sqrt(m) (zero-forcing depends on directions only).  Quantizes
// h_csir — the receiver can only feed back what it knows.
struct DigitalFeedbackInfo {
  int bits = 0;
  bool sampled_engine = false;
};
DigitalFeedbackInfo apply_digital_feedback(ChannelRealization& real,
                                           const RvqScheme& scheme, double snr,
                                           Rng& rng);

// ---------------------------------------------------------------------------
// QAM feedback

// Uniform random direction on the complex unit sphere in C^m.
CVec uniform_direction(int m, Rng& rng);

// Largest square QAM constellation (4, 16, 64, ...) not exceeding the
// nominal size snr^(alpha/beta), never below QPSK.  Rounding down keeps the
// simulated SER within the analytic bound at every snr.
int qam_constellation_size(double alpha, double beta, double snr);

// Monte Carlo symbol error rate of Gray-mapped square QAM over AWGN at the
// given linear snr, using the constellation picked by
// qam_constellation_size.
struct QamSerSimResult {
  double ser = 0.0;
  long symbols = 0;
  int constellation = 0;
};
QamSerSimResult qam_ser_simulate(double alpha, double beta, double snr,
                                 long symbols, Rng& rng);

// Applies RVQ-over-QAM feedback: with probability
// p_feedback_error = 1 - (1 - P_s)^(beta*m) a user's CSIT becomes an
// independent uniform direction; otherwise it is the RVQ quantization with
// B = round(alpha*m*log2(snr)) bits.  P_s defaults to the analytic SER
// bound; pass p_symbol_override >= 0 (e.g. a simulated SER) to replace it.
struct QamFeedbackInfo {
  int bits = 0;
  double p_symbol = 0.0;
  double p_feedback_error = 0.0;
  bool sampled_engine = false;
  std::vector<bool> in_error;
};
QamFeedbackInfo apply_qam_feedback(ChannelRealization& real, const QamScheme& scheme,
                                   double snr, Rng& rng,
                                   double p_symbol_override = -1.0);

// ---------------------------------------------------------------------------
// CSIR training

// Replaces h_csir by the receivers' MMSE channel estimate from downlink
// training: h_csir = (1-e1) h_true + sqrt(e1 (1-e1)) G with
// e1 = 1/(1 + beta1 * snr); returns e1 together with the dedicated-training
// error variance sigma_f_sq = 1/(1 + beta2 * snr).
struct CsirTrainingResult {
  double e1 = 0.0;
  double sigma_f_sq = 0.0;
};
CsirTrainingResult apply_csir_training(ChannelRealization& real, double beta1,
                                       double beta2, double snr, Rng& rng);

// Receiver's estimate of its own useful coefficient a_k after dedicated
// training: the MMSE conditional draw (1 - sigma_f_sq) a + CN(0,
// sigma_f_sq (1 - sigma_f_sq)) under the unit-variance coefficient model,
// so that a = a_hat + f with f independent of a_hat, Var f = sigma_f_sq.
std::complex<double> sample_estimated_coefficient(std::complex<double> a,
                                                  double sigma_f_sq, Rng& rng);

}  // namespace mfb
