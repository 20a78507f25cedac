#include "mimofb/csv.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

#include <json.hpp>

namespace mfb {

std::string format_csv_value(double value) {
  char buffer[40];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 12);
  if (result.ec != std::errc{}) {
    throw std::runtime_error("failed to format numeric CSV value");
  }
  return std::string(buffer, result.ptr);
}

std::string bound_curve_csv(const BoundCurve& curve) {
  std::string out = "snr_db,value_bits\n";
  for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
    out += format_csv_value(curve.snr_db[i]);
    out += ',';
    out += format_csv_value(curve.value_bits[i]);
    out += '\n';
  }
  return out;
}

std::string rate_curve_csv(const RateCurve& curve) {
  std::string out = "snr_db,sum_rate_bits,per_user_bits,std_err\n";
  for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
    out += format_csv_value(curve.snr_db[i]);
    out += ',';
    out += format_csv_value(curve.sum_rate_bits[i]);
    out += ',';
    out += format_csv_value(curve.per_user_rate_bits[i]);
    out += ',';
    out += format_csv_value(curve.std_err[i]);
    out += '\n';
  }
  return out;
}

std::string figure_long_csv(const FigureResult& figure) {
  std::string out = "curve,kind,snr_db,value_bits\n";
  const auto emit = [&out](const std::string& label, const char* kind, double snr_db,
                           double value) {
    out += label;
    out += ',';
    out += kind;
    out += ',';
    out += format_csv_value(snr_db);
    out += ',';
    out += format_csv_value(value);
    out += '\n';
  };
  for (const auto& [label, curve] : figure.curves) {
    for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
      emit(label, "sum_rate_bits", curve.snr_db[i], curve.sum_rate_bits[i]);
      emit(label, "per_user_bits", curve.snr_db[i], curve.per_user_rate_bits[i]);
      emit(label, "std_err", curve.snr_db[i], curve.std_err[i]);
    }
  }
  for (const auto& bound : figure.bounds) {
    for (std::size_t i = 0; i < bound.snr_db.size(); ++i) {
      emit(bound.label, "bound", bound.snr_db[i], bound.value_bits[i]);
    }
  }
  return out;
}

std::string slugify(const std::string& label) {
  std::string slug;
  bool pending_dash = false;
  for (char c : label) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || c == '.') {
      if (pending_dash && !slug.empty()) slug += '-';
      pending_dash = false;
      slug += static_cast<char>(std::tolower(uc));
    } else {
      pending_dash = true;
    }
  }
  return slug.empty() ? "curve" : slug;
}

std::string figure_descriptor_json(const FigureResult& figure) {
  nlohmann::json j;
  j["name"] = figure.name;
  j["axes"] = {{"x", "snr_db"}, {"y", "bits/s/Hz"}};
  auto& curves = j["curves"];
  curves = nlohmann::json::array();
  for (const auto& [label, curve] : figure.curves) {
    curves.push_back({{"label", label},
                      {"kind", "simulation"},
                      {"file", slugify(label) + ".csv"},
                      {"trials", curve.trials_used}});
  }
  for (const auto& bound : figure.bounds) {
    curves.push_back({{"label", bound.label},
                      {"kind", "bound"},
                      {"file", slugify(bound.label) + ".csv"}});
  }
  return j.dump(2) + "\n";
}

}  // namespace mfb
