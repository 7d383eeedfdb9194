#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aim/aim_core.hpp"
#include "aim/analysis.hpp"
#include "json.hpp"

namespace aim::cli {

struct SearchBlock {
  double e_min = 0.0;
  double e_max = 12.0;
  int grid = 241;
  double tol = 1e-12;
};

/// Raw recurrence coefficients for `classify`, given as arrays or as
/// expressions in n evaluated for n = 0..levels-1.
struct SequenceBlock {
  std::vector<double> p;
  std::vector<double> q;
};

struct ProblemFile {
  std::optional<std::string> lambda0;
  std::optional<std::string> s0;
  std::string parameter = "E";
  double x0 = 0.0;
  int order = 80;
  int n_max = 40;
  SearchBlock search;
  std::optional<double> param_value;
  DeclaredData declared;
  std::optional<SequenceBlock> sequences;

  [[nodiscard]] bool has_equation() const { return lambda0.has_value() && s0.has_value(); }
  /// Parses and validates the equation part; throws InvalidSpec / ParseError.
  [[nodiscard]] ProblemSpec spec() const;
};

/// Throws ParseError on malformed JSON or wrongly typed fields, InvalidSpec on
/// inconsistent values.
[[nodiscard]] ProblemFile parse_problem(const nlohmann::json& doc);
[[nodiscard]] ProblemFile parse_problem_text(const std::string& text);
[[nodiscard]] ProblemFile load_problem_file(const std::string& path);

/// Echo of the effective problem, as written to result records.
[[nodiscard]] nlohmann::json to_json(const ProblemFile& problem);

}  // namespace aim::cli
