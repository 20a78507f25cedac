#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace mfb {

// Advances `state` by the splitmix64 increment and returns the next mixed
// output word.  Used to derive independent generator states from seed
// material; the output sequence for state 0 matches the published reference
// vectors (0xE220A8397B1DCDAF, ...).
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic pseudo-random stream: xoshiro256++ seeded via splitmix64.
//
// Every stochastic operation in the library draws from an explicit Rng, and
// simulation code derives one stream per (seed, snr-index, trial-index[,
// user-index]) counter path with `from_path`.  That keeps trial results
// independent of scheduling: any worker can run any trial and obtain
// identical draws.
//
// Gaussians use the Box-Muller transform rather than
// std::normal_distribution, whose output sequence is implementation-defined
// and would break byte-reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derives an independent stream from a root seed plus a counter path,
  // e.g. Rng::from_path(seed, {snr_index, trial_index, user_index}).
  // Distinct paths yield statistically independent streams.
  static Rng from_path(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();

  // Standard normal N(0, 1).
  double gaussian();

  // Circularly symmetric complex Gaussian CN(0, 1): real and imaginary
  // parts are independent N(0, 1/2).
  std::complex<double> cgauss();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mfb
