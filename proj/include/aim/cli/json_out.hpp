#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace aim::cli {

/// Finite values as JSON numbers; inf, -inf and nan as the strings "inf", "-inf", "nan".
[[nodiscard]] nlohmann::json number(double x);
[[nodiscard]] nlohmann::json number(const std::optional<double>& x);
[[nodiscard]] nlohmann::json numbers(const std::vector<double>& xs);
[[nodiscard]] nlohmann::json complex_number(std::complex<double> z);

/// Sorted keys, two-space indent, shortest round-trip floats.
[[nodiscard]] std::string serialize(const nlohmann::json& j);

/// Comma-separated table; cells are formatted as their JSON scalars without quotes.
[[nodiscard]] std::string to_csv(const std::vector<std::string>& header,
                                 const std::vector<std::vector<nlohmann::json>>& rows);

}  // namespace aim::cli
