#pragma once

#include <cmath>

namespace mfb {

// dB <-> linear power ratio conversions.  The library works in linear scale
// throughout; dB appears only at interface boundaries (CLI flags, CSV).
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace mfb
