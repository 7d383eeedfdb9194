#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aim/cli/problem_file.hpp"
#include "json.hpp"

namespace aim::cli {

struct Sweep {
  double from;
  double to;
  int steps;
};

/// Parses "a:b:steps" with steps >= 1; throws InvalidArgument.
[[nodiscard]] Sweep parse_sweep(const std::string& text);

enum class Format { Json, Csv };

struct Flags {
  std::optional<int> order;
  std::optional<int> n;
  std::optional<double> x0;
  std::optional<double> param_value;
  std::optional<int> grid;
  std::optional<double> tol;
  Format format = Format::Json;
  std::uint64_t seed = 12345;
  std::optional<Sweep> sweep_x0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Problem with flag overrides applied and revalidated.
[[nodiscard]] ProblemFile apply_flags(ProblemFile problem, const Flags& flags);

/// Result record: command, inputs, outputs, warnings, seed.
struct Result {
  nlohmann::json record;
  std::string csv;  // table form for --format csv
};

[[nodiscard]] Result cmd_solve(const ProblemFile& problem, const Flags& flags);
[[nodiscard]] Result cmd_diagnose(const ProblemFile& problem, const Flags& flags);
[[nodiscard]] Result cmd_classify(const ProblemFile& problem, const Flags& flags);

/// Full command line entry point. Exit codes: 0 success, 2 input error, 3 numeric error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aim::cli
