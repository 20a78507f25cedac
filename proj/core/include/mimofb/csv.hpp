#pragma once

#include <string>

#include "mimofb/bounds.hpp"
#include "mimofb/montecarlo.hpp"

namespace mfb {

// Locale-independent number formatting for CSV cells: 12 significant
// digits, '.' decimal separator, no grouping.  Byte-stable across platforms
// for identical doubles.
std::string format_csv_value(double value);

// One bound curve: header `snr_db,value_bits`, LF line endings.
std::string bound_curve_csv(const BoundCurve& curve);

// One simulated curve: header `snr_db,sum_rate_bits,per_user_bits,std_err`.
std::string rate_curve_csv(const RateCurve& curve);

// All curves of a figure in long format:
// `curve,kind,snr_db,value_bits` with kind in {sum_rate_bits,
// per_user_bits, std_err} for simulations and {bound} for analytic curves.
std::string figure_long_csv(const FigureResult& figure);

// Plot-tool-neutral JSON descriptor for a figure: axes plus one entry per
// curve with its label, kind and per-curve CSV file name.
std::string figure_descriptor_json(const FigureResult& figure);

// Turns a curve label into a file-name-safe slug (lowercase alphanumerics,
// '.', '-'); used for per-curve CSV names.
std::string slugify(const std::string& label);

}  // namespace mfb
