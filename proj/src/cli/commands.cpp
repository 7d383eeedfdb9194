#include "aim/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "aim/analysis.hpp"
#include "aim/cf_engine.hpp"
#include "aim/cli/json_out.hpp"

namespace aim::cli {

namespace {

using nlohmann::json;

std::vector<double> sweep_points(const ProblemFile& problem, const Flags& flags) {
  if (!flags.sweep_x0) {
    return {problem.x0};
  }
  const Sweep& s = *flags.sweep_x0;
  std::vector<double> out;
  if (s.steps == 1) {
    out.push_back(s.from);
    return out;
  }
  for (int i = 0; i < s.steps; ++i) {
    out.push_back(s.from + (s.to - s.from) * i / (s.steps - 1));
  }
  return out;
}

json flags_json(const Flags& flags) {
  json j;
  j["format"] = flags.format == Format::Json ? "json" : "csv";
  if (flags.sweep_x0) {
    j["sweep_x0"] = {{"from", number(flags.sweep_x0->from)},
                     {"to", number(flags.sweep_x0->to)},
                     {"steps", flags.sweep_x0->steps}};
  }
  return j;
}

json make_record(const std::string& command, const ProblemFile& problem, const Flags& flags, json outputs,
                 const Warnings& warnings) {
  json r;
  r["command"] = command;
  r["inputs"] = {{"problem", to_json(problem)}, {"flags", flags_json(flags)}};
  r["outputs"] = std::move(outputs);
  r["warnings"] = warnings;
  r["seed"] = flags.seed;
  return r;
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::clamp(std::thread::hardware_concurrency(), 1U, 8U);
}

double require_param_value(const ProblemFile& problem, const std::string& command) {
  if (!problem.param_value) {
    throw Error(ErrorCode::InvalidSpec, command + " needs a parameter value (--param-value or \"param_value\")");
  }
  return *problem.param_value;
}

// ---------------------------------------------------------------------------

struct DiagnoseOutput {
  json data;
  std::vector<std::vector<json>> rows;
};

json convergence_json(const std::vector<double>& pvals, const std::vector<double>& qvals, Warnings& warnings,
                      json& bound_out) {
  bound_out = nullptr;
  UnitForm unit;
  try {
    unit = cf_equiv_unit(pvals, qvals);
  } catch (const Error& e) {
    return {{"applicable", false}, {"reason", e.what()}};
  }
  json j;
  j["unit_form"] = {{"prefactor", number(unit.prefactor)}, {"p_tilde", numbers(unit.p_tilde)}};
  try {
    const ConvergenceReport rep = stern_seidel(unit.p_tilde);
    j["applicable"] = true;
    j["verdict"] = to_string(rep.verdict);
    j["partial_sum"] = number(rep.partial_sum);
    j["product_bound"] = number(rep.product_bound);
    j["exp_bound"] = number(rep.exp_bound);
    j["mu"] = number(rep.mu);
  } catch (const Error& e) {
    j["applicable"] = false;
    j["reason"] = e.what();
  }
  try {
    const std::vector<double> ones(unit.p_tilde.size(), 1.0);
    const CFState st = cf_approximants(unit.p_tilde, ones, static_cast<int>(unit.p_tilde.size()) - 1);
    const auto rows = bound_check(st);
    const auto violations = std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return !r.pass; });
    bound_out = {{"rows", rows.size()}, {"violations", violations}};
    if (violations > 0) {
      warnings.push_back("difference bound violated at " + std::to_string(violations) + " levels");
    }
  } catch (const Error& e) {
    bound_out = {{"applicable", false}, {"reason", e.what()}};
  }
  return j;
}

DiagnoseOutput diagnose_at(const ProblemSpec& spec, double E, Warnings& warnings) {
  DiagnoseOutput out;
  json& d = out.data;
  d["x0"] = number(spec.x0());
  d["param_value"] = number(E);

  PQSequences pq = pq_iterate(spec, E);
  for (auto& w : pq.warnings) {
    warnings.push_back(w);
  }
  if (pq.stop) {
    d["ladder_stop"] = {{"level", pq.stop->level},
                        {"kind", pq.stop->kind == PQStop::Kind::ExactZero ? "ExactZero" : "SmallPivot"}};
  } else {
    d["ladder_stop"] = nullptr;
  }
  const auto term = detect_termination(pq);
  d["termination_level"] = term ? json(*term) : json(nullptr);
  if (term) {
    warnings.push_back("continued fraction terminates: q_" + std::to_string(*term) + " vanishes identically");
  }

  const CFState st = cf_state(pq);
  const DeterminantCheck det = cf_determinants(st);
  d["determinant_max_rel_error"] = number(det.max_rel_error);
  d["cf_limit"] = number(st.last_approximant());

  json table = json::array();
  for (int n = 0; n <= st.depth(); ++n) {
    const auto i = static_cast<std::size_t>(n);
    const auto c = st.approximant(n);
    const std::optional<double> prev = n > 0 ? st.approximant(n - 1) : std::optional<double>(0.0);
    const std::optional<double> diff = c && prev ? std::optional<double>(*c - *prev) : std::nullopt;
    const double bb = st.denominator(n) * st.denominator(n - 1);
    const std::optional<double> limit_term =
        bb != 0.0 ? std::optional<double>(det.product[i + 1] / bb) : std::nullopt;
    json row = {{"n", n},
                {"p", number(st.pvals[i])},
                {"q", number(st.qvals[i])},
                {"C", number(c)},
                {"dC", number(diff)},
                {"v", number(st.determinant(n))},
                {"product", number(det.product[i + 1])},
                {"limit_term", number(limit_term)}};
    out.rows.push_back({n, row["p"], row["q"], row["C"], row["dC"], row["v"], row["product"], row["limit_term"]});
    table.push_back(std::move(row));
  }
  d["table"] = std::move(table);

  json bound;
  d["convergence"] = convergence_json(st.pvals, st.qvals, warnings, bound);
  d["bound_check"] = std::move(bound);

  const AIMSequences seqs = aim_iterate(spec, E);
  for (const auto& w : seqs.warnings) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
      warnings.push_back(w);
    }
  }
  json delta = json::array();
  for (int n = 1; n <= seqs.depth(); ++n) {
    delta.push_back({{"n", n}, {"delta", number(delta_n(seqs, n))}, {"relative", number(relative_delta(seqs, n))}});
  }
  d["delta"] = std::move(delta);
  try {
    const GrowthFit fit = ratio_growth_fit(seqs);
    d["growth"] = {{"a0", number(fit.a0)}, {"a1", number(fit.a1)}, {"rho", number(fit.rho)}, {"samples", fit.samples}};
  } catch (const Error& e) {
    d["growth"] = nullptr;
    warnings.push_back(std::string("growth fit: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

json ba_json(const BirkhoffAdamsData& ba) {
  auto complex_list = [](const std::vector<Complex>& zs) {
    json out = json::array();
    for (const auto& z : zs) {
      out.push_back(complex_number(z));
    }
    return out;
  };
  json j;
  j["a_coeffs"] = numbers(ba.a_coeffs);
  j["b_coeffs"] = numbers(ba.b_coeffs);
  j["r_pm"] = {complex_number(ba.r_pm.first), complex_number(ba.r_pm.second)};
  j["distinct_roots"] = ba.distinct_roots;
  j["alpha_pm"] = ba.alpha_pm ? json{complex_number(ba.alpha_pm->first), complex_number(ba.alpha_pm->second)}
                              : json(nullptr);
  j["c_table"] = {{"plus", complex_list(ba.c_table.first)}, {"minus", complex_list(ba.c_table.second)}};
  if (ba.double_root) {
    const DoubleRootData& d = *ba.double_root;
    j["double_root"] = {{"r", complex_number(d.r)},
                        {"gamma", {complex_number(d.gamma.first), complex_number(d.gamma.second)}},
                        {"alpha_tilde", complex_number(d.alpha_tilde)},
                        {"c1", {complex_number(d.c1.first), complex_number(d.c1.second)}}};
  } else {
    j["double_root"] = nullptr;
  }
  if (ba.equal_exponent) {
    const EqualExponentData& e = *ba.equal_exponent;
    const char* sub = e.subcase == EqualExponentData::Subcase::NonIntegerGap ? "i"
                      : e.subcase == EqualExponentData::Subcase::IntegerGap  ? "ii"
                                                                             : "iii";
    j["equal_exponent"] = {{"r", complex_number(e.r)},
                           {"alpha", {complex_number(e.alpha.first), complex_number(e.alpha.second)}},
                           {"subcase", sub},
                           {"log_term", e.log_term}};
  } else {
    j["equal_exponent"] = nullptr;
  }
  return j;
}

json classification_json(const ClassificationReport& rep) {
  json j;
  j["q_limit"] = number(rep.q_limit);
  j["a_n_samples"] = numbers(rep.a_n_samples);
  j["roots"] = {complex_number(rep.roots.first), complex_number(rep.roots.second)};
  j["case_label"] = to_string(rep.case_label);
  if (rep.power_law) {
    j["power_law"] = {{"a", number(rep.power_law->a)},
                      {"sigma", number(rep.power_law->sigma)},
                      {"b", number(rep.power_law->b)},
                      {"tau", number(rep.power_law->tau)}};
  } else {
    j["power_law"] = nullptr;
  }
  if (rep.power_law_prediction) {
    const PowerLawPrediction& p = *rep.power_law_prediction;
    j["power_law_prediction"] = {{"minimal_formula", complex_number(p.minimal_formula)},
                                 {"minimal_alternative", complex_number(p.minimal_alternative)},
                                 {"dominant_formula", complex_number(p.dominant_formula)},
                                 {"dominant_alternative", complex_number(p.dominant_alternative)},
                                 {"minimal_selected", p.minimal_selected},
                                 {"dominant_selected", p.dominant_selected}};
  } else {
    j["power_law_prediction"] = nullptr;
  }
  j["ba_data"] = rep.ba_data ? ba_json(*rep.ba_data) : json(nullptr);
  j["minimal_exists"] = rep.minimal_exists;
  j["numeric_dominant_ratio"] = number(rep.numeric_dominant_ratio);
  j["numeric_minimal_ratio"] = number(rep.numeric_minimal_ratio);
  j["predicted_dominant_ratio"] = complex_number(rep.predicted_dominant_ratio);
  j["predicted_minimal_ratio"] = complex_number(rep.predicted_minimal_ratio);
  j["depth"] = rep.depth;
  j["consistency"] = rep.consistency;
  return j;
}

void csv_scalars(const json& obj, const std::string& prefix, std::vector<std::vector<json>>& rows) {
  for (const auto& [key, value] : obj.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      csv_scalars(value, name, rows);
    } else if (!value.is_array()) {
      rows.push_back({name, value});
    }
  }
}

}  // namespace

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    parts.push_back(item);
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::InvalidArgument, "--sweep-x0 expects \"a:b:steps\", got \"" + text + "\"");
  }
  try {
    std::size_t used = 0;
    Sweep s{};
    s.from = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    s.to = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    s.steps = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    if (s.steps < 1 || !std::isfinite(s.from) || !std::isfinite(s.to)) {
      throw std::invalid_argument(text);
    }
    return s;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "--sweep-x0 expects \"a:b:steps\" with steps >= 1, got \"" + text + "\"");
  }
}

ProblemFile apply_flags(ProblemFile problem, const Flags& flags) {
  if (flags.order) problem.order = *flags.order;
  if (flags.n) problem.n_max = *flags.n;
  if (flags.x0) problem.x0 = *flags.x0;
  if (flags.param_value) problem.param_value = *flags.param_value;
  if (flags.grid) problem.search.grid = *flags.grid;
  if (flags.tol) problem.search.tol = *flags.tol;
  if (problem.has_equation()) {
    (void)problem.spec();
  }
  return problem;
}

Result cmd_solve(const ProblemFile& problem, const Flags& flags) {
  const ProblemSpec spec = problem.spec();
  Warnings warnings;
  const EigenSearchOptions options{resolve_threads(flags.threads)};
  json sweep = json::array();
  std::vector<std::vector<json>> rows;
  for (double x0 : sweep_points(problem, flags)) {
    const ProblemSpec at = spec.with_x0(x0);
    const auto eig = find_eigenvalues(at, problem.search.e_min, problem.search.e_max, problem.search.grid,
                                      problem.n_max, problem.search.tol, &warnings, options);
    if (eig.empty()) {
      std::ostringstream os;
      os << "no eigenvalues found in [" << problem.search.e_min << ", " << problem.search.e_max << "] at x0 = " << x0;
      warnings.push_back(os.str());
    }
    json list = json::array();
    for (const auto& e : eig) {
      list.push_back({{"value", number(e.value)}, {"residual", number(e.residual)}, {"n_used", e.n_used}});
      rows.push_back({number(x0), number(e.value), number(e.residual), e.n_used});
    }
    sweep.push_back({{"x0", number(x0)}, {"eigenvalues", std::move(list)}});
  }
  json outputs;
  if (flags.sweep_x0) {
    outputs["sweep"] = std::move(sweep);
  } else {
    outputs["eigenvalues"] = sweep.front()["eigenvalues"];
    outputs["count"] = sweep.front()["eigenvalues"].size();
  }
  Result r;
  r.record = make_record("solve", problem, flags, std::move(outputs), warnings);
  r.csv = to_csv({"x0", "value", "residual", "n_used"}, rows);
  return r;
}

Result cmd_diagnose(const ProblemFile& problem, const Flags& flags) {
  const ProblemSpec spec = problem.spec();
  const double E = require_param_value(problem, "diagnose");
  Warnings warnings;
  json sweep = json::array();
  std::vector<std::vector<json>> rows;
  for (double x0 : sweep_points(problem, flags)) {
    DiagnoseOutput d = diagnose_at(spec.with_x0(x0), E, warnings);
    for (auto& row : d.rows) {
      row.insert(row.begin(), number(x0));
      rows.push_back(std::move(row));
    }
    sweep.push_back(std::move(d.data));
  }
  json outputs = flags.sweep_x0 ? json{{"sweep", std::move(sweep)}} : std::move(sweep.front());
  Result r;
  r.record = make_record("diagnose", problem, flags, std::move(outputs), warnings);
  r.csv = to_csv({"x0", "n", "p", "q", "C", "dC", "v", "product", "limit_term"}, rows);
  return r;
}

Result cmd_classify(const ProblemFile& problem, const Flags& flags) {
  Warnings warnings;
  std::vector<double> pvals;
  std::vector<double> qvals;
  json source;
  if (problem.sequences) {
    pvals = problem.sequences->p;
    qvals = problem.sequences->q;
    source = "sequences";
  } else {
    const double E = require_param_value(problem, "classify");
    const PQSequences pq = pq_iterate(problem.spec(), E);
    for (const auto& w : pq.warnings) {
      warnings.push_back(w);
    }
    pvals = pq.pvals();
    qvals = pq.qvals();
    source = "ladder";
  }
  if (flags.sweep_x0) {
    warnings.push_back("--sweep-x0 is ignored by classify");
  }
  const ClassificationReport rep = classify(pvals, qvals, problem.declared, flags.seed);
  for (const auto& w : rep.warnings) {
    warnings.push_back(w);
  }
  json outputs;
  outputs["source"] = source;
  outputs["levels"] = pvals.size();
  outputs["classification"] = classification_json(rep);
  try {
    const PincherleResult pr = pincherle_check(pvals, qvals, &warnings);
    outputs["pincherle"] = {{"cf_limit", number(pr.cf_limit)},
                            {"backward_ratio", number(pr.backward_ratio)},
                            {"relation_sign", pr.relation_sign},
                            {"agreement", number(pr.agreement)}};
  } catch (const Error& e) {
    outputs["pincherle"] = nullptr;
    warnings.push_back(std::string("pincherle check: ") + e.what());
  }
  std::vector<std::vector<json>> rows;
  csv_scalars(outputs, "", rows);
  Result r;
  r.record = make_record("classify", problem, flags, std::move(outputs), warnings);
  r.csv = to_csv({"field", "value"}, rows);
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalues and continued-fraction diagnostics for y'' = lambda0(x) y' + s0(x) y"};
  app.require_subcommand(1);

  std::string file;
  int order = 0, n = 0, grid = 0;
  double x0 = 0.0, param_value = 0.0, tol = 0.0;
  std::string format = "json";
  std::uint64_t seed = 12345;
  std::string sweep;
  unsigned threads = 0;
  struct Opts {
    CLI::Option* order;
    CLI::Option* n;
    CLI::Option* x0;
    CLI::Option* param_value;
    CLI::Option* grid;
    CLI::Option* tol;
    CLI::Option* sweep;
  };
  std::vector<std::pair<CLI::App*, Opts>> subs;
  for (const char* name : {"solve", "diagnose", "classify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) + " a problem file");
    sub->add_option("file", file, "problem file (JSON)")->required();
    Opts o{};
    o.order = sub->add_option("--order", order, "Taylor truncation order");
    o.n = sub->add_option("--n", n, "iteration depth");
    o.x0 = sub->add_option("--x0", x0, "expansion point");
    o.param_value = sub->add_option("--param-value", param_value, "fixed parameter value");
    o.grid = sub->add_option("--grid", grid, "eigenvalue grid points");
    o.tol = sub->add_option("--tol", tol, "bisection tolerance");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "random seed");
    o.sweep = sub->add_option("--sweep-x0", sweep, "x0 sweep as a:b:steps");
    sub->add_option("--threads", threads, "worker threads for the eigenvalue grid (0: auto)");
    subs.emplace_back(sub, o);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Flags flags;
    std::string command;
    for (const auto& [sub, o] : subs) {
      if (!sub->parsed()) {
        continue;
      }
      command = sub->get_name();
      if (o.order->count()) flags.order = order;
      if (o.n->count()) flags.n = n;
      if (o.x0->count()) flags.x0 = x0;
      if (o.param_value->count()) flags.param_value = param_value;
      if (o.grid->count()) flags.grid = grid;
      if (o.tol->count()) flags.tol = tol;
      if (o.sweep->count()) flags.sweep_x0 = parse_sweep(sweep);
    }
    flags.format = format == "csv" ? Format::Csv : Format::Json;
    flags.seed = seed;
    flags.threads = threads;

    const ProblemFile problem = apply_flags(load_problem_file(file), flags);
    Result result;
    if (command == "solve") {
      result = cmd_solve(problem, flags);
    } else if (command == "diagnose") {
      result = cmd_diagnose(problem, flags);
    } else {
      result = cmd_classify(problem, flags);
    }
    out << (flags.format == Format::Csv ? result.csv : serialize(result.record));
    for (const auto& w : result.record["warnings"]) {
      err << "warning: " << w.get<std::string>() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace aim::cli
