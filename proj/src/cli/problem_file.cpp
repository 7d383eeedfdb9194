#include "aim/cli/problem_file.hpp"

#include <fstream>
#include <sstream>

#include "aim/cli/json_out.hpp"

namespace aim::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& expected) {
  throw Error(ErrorCode::ParseError, "field \"" + field + "\" must be " + expected);
}

double get_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    bad_field(key, "a number");
  }
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    bad_field(key, "an integer");
  }
  return v.get<int>();
}

std::optional<std::string> get_string(const json& obj, const std::string& key) {
  if (!obj.contains(key)) {
    return std::nullopt;
  }
  const json& v = obj.at(key);
  if (!v.is_string()) {
    bad_field(key, "a string");
  }
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& v, const std::string& key) {
  if (!v.is_array()) {
    bad_field(key, "an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) {
      bad_field(key, "an array of numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

bool uses_x(const Expression::Node& node) {
  if (node.kind == Expression::Kind::VarX) {
    return true;
  }
  return (node.lhs && uses_x(*node.lhs)) || (node.rhs && uses_x(*node.rhs));
}

std::vector<double> sequence_values(const json& v, const std::string& key, int levels) {
  if (v.is_array()) {
    return get_number_array(v, key);
  }
  if (!v.is_string()) {
    bad_field(key, "an array of numbers or an expression in n");
  }
  const Expression expr = Expression::parse(v.get<std::string>(), "n");
  if (uses_x(expr.root())) {
    throw Error(ErrorCode::InvalidSpec, "sequence \"" + key + "\" may only depend on n");
  }
  if (levels < 1) {
    throw Error(ErrorCode::InvalidSpec, "sequence expressions need \"levels\" >= 1");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int n = 0; n < levels; ++n) {
    out.push_back(expr.evaluate(0.0, n));
  }
  return out;
}

}  // namespace

ProblemSpec ProblemFile::spec() const {
  if (!has_equation()) {
    throw Error(ErrorCode::InvalidSpec, "problem needs both \"lambda0\" and \"s0\"");
  }
  return ProblemSpec::from_strings(*lambda0, *s0, parameter, x0, order, n_max);
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "problem file must hold a JSON object");
  }
  ProblemFile pf;
  pf.lambda0 = get_string(doc, "lambda0");
  pf.s0 = get_string(doc, "s0");
  if (auto p = get_string(doc, "parameter")) {
    pf.parameter = *p;
  }
  pf.x0 = get_number(doc, "x0", pf.x0);
  pf.order = get_int(doc, "order", pf.order);
  pf.n_max = get_int(doc, "n_max", pf.n_max);
  if (doc.contains("param_value")) {
    pf.param_value = get_number(doc, "param_value", 0.0);
  }
  if (doc.contains("search")) {
    const json& s = doc.at("search");
    if (!s.is_object()) {
      bad_field("search", "an object");
    }
    pf.search.e_min = get_number(s, "e_min", pf.search.e_min);
    pf.search.e_max = get_number(s, "e_max", pf.search.e_max);
    pf.search.grid = get_int(s, "grid", pf.search.grid);
    pf.search.tol = get_number(s, "tol", pf.search.tol);
  }
  if (doc.contains("classify")) {
    const json& c = doc.at("classify");
    if (!c.is_object()) {
      bad_field("classify", "an object");
    }
    if (c.contains("declared_power_law")) {
      const json& law = c.at("declared_power_law");
      if (!law.is_object()) {
        bad_field("declared_power_law", "an object");
      }
      for (const char* key : {"a", "sigma", "b", "tau"}) {
        if (!law.contains(key)) {
          bad_field(std::string("declared_power_law.") + key, "present");
        }
      }
      pf.declared.power_law =
          PowerLaw{get_number(law, "a", 0.0), get_number(law, "sigma", 0.0), get_number(law, "b", 0.0),
                   get_number(law, "tau", 0.0)};
    }
    if (c.contains("declared_ba_coeffs")) {
      const json& ba = c.at("declared_ba_coeffs");
      if (!ba.is_object() || !ba.contains("a") || !ba.contains("b")) {
        bad_field("declared_ba_coeffs", "an object with arrays \"a\" and \"b\"");
      }
      pf.declared.ba_coeffs = std::make_pair(get_number_array(ba.at("a"), "declared_ba_coeffs.a"),
                                             get_number_array(ba.at("b"), "declared_ba_coeffs.b"));
    }
  }
  if (doc.contains("sequences")) {
    const json& s = doc.at("sequences");
    if (!s.is_object() || !s.contains("p") || !s.contains("q")) {
      bad_field("sequences", "an object with \"p\" and \"q\"");
    }
    const int levels = get_int(s, "levels", 0);
    SequenceBlock seq{sequence_values(s.at("p"), "p", levels), sequence_values(s.at("q"), "q", levels)};
    if (seq.p.size() != seq.q.size()) {
      throw Error(ErrorCode::InvalidSpec, "sequences \"p\" and \"q\" differ in length");
    }
    pf.sequences = std::move(seq);
  }
  if (!(pf.search.e_min < pf.search.e_max)) {
    throw Error(ErrorCode::InvalidSpec, "search.e_min must be below search.e_max");
  }
  if (pf.has_equation()) {
    (void)pf.spec();
  } else if (pf.lambda0 || pf.s0) {
    throw Error(ErrorCode::InvalidSpec, "\"lambda0\" and \"s0\" must be given together");
  } else if (!pf.sequences) {
    throw Error(ErrorCode::InvalidSpec, "problem needs an equation (\"lambda0\", \"s0\") or \"sequences\"");
  }
  return pf;
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open problem file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

json to_json(const ProblemFile& problem) {
  json j;
  if (problem.lambda0) {
    j["lambda0"] = *problem.lambda0;
    j["s0"] = *problem.s0;
  }
  j["parameter"] = problem.parameter;
  j["x0"] = number(problem.x0);
  j["order"] = problem.order;
  j["n_max"] = problem.n_max;
  j["search"] = {{"e_min", number(problem.search.e_min)},
                 {"e_max", number(problem.search.e_max)},
                 {"grid", problem.search.grid},
                 {"tol", number(problem.search.tol)}};
  if (problem.param_value) {
    j["param_value"] = number(*problem.param_value);
  }
  if (problem.declared.power_law) {
    const PowerLaw& law = *problem.declared.power_law;
    j["classify"]["declared_power_law"] = {
        {"a", number(law.a)}, {"sigma", number(law.sigma)}, {"b", number(law.b)}, {"tau", number(law.tau)}};
  }
  if (problem.declared.ba_coeffs) {
    j["classify"]["declared_ba_coeffs"] = {{"a", numbers(problem.declared.ba_coeffs->first)},
                                           {"b", numbers(problem.declared.ba_coeffs->second)}};
  }
  if (problem.sequences) {
    j["sequences"] = {{"levels", problem.sequences->p.size()}};
  }
  return j;
}

}  // namespace aim::cli
