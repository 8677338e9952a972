#include "sudler/csv.hpp"

#include <charconv>
#include <cmath>

namespace sudler::csv {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_profile(std::ostream& out, const std::vector<ProfileRow>& rows) {
  out << "k,P,logP\n";
  for (const auto& r : rows) out << r.k << ',' << shortest(r.value) << ',' << shortest(r.log_value) << '\n';
}

void write_cot_profile(std::ostream& out, const std::vector<CotProfileRow>& rows) {
  out << "k,partial\n";
  for (const auto& r : rows) out << r.k << ',' << shortest(r.partial) << '\n';
}

void write_power_law(std::ostream& out, const std::vector<PowerLawRow>& rows) {
  out << "k,logP_over_logk\n";
  for (const auto& r : rows) out << r.k << ',' << shortest(r.ratio) << '\n';
}

}  // namespace sudler::csv
