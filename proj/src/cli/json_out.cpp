#include "aim/cli/json_out.hpp"

#include <cmath>
#include <sstream>

namespace aim::cli {

nlohmann::json number(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  return x;
}

nlohmann::json number(const std::optional<double>& x) { return x ? number(*x) : nlohmann::json(nullptr); }

nlohmann::json numbers(const std::vector<double>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : xs) {
    out.push_back(number(x));
  }
  return out;
}

nlohmann::json complex_number(std::complex<double> z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

std::string serialize(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<nlohmann::json>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    os << (i ? "," : "") << header[i];
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      if (row[i].is_string()) {
        os << row[i].get<std::string>();
      } else if (!row[i].is_null()) {
        os << row[i].dump();
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace aim::cli
