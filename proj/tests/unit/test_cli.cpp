#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "aim/cli/commands.hpp"
#include "aim/cli/json_out.hpp"
#include "aim/cli/problem_file.hpp"
#include "test_util.hpp"

using aim::ErrorCode;
using aim::test::code_of;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(AIM_TEST_DATA_DIR) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = aim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  const Outcome r = run(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

}  // namespace

TEST(CliSolve, OscillatorSpectrum) {
  const json rec = run_json({"solve", data("harmonic_oscillator.json")});
  EXPECT_EQ(rec["command"], "solve");
  const auto& eig = rec["outputs"]["eigenvalues"];
  ASSERT_EQ(eig.size(), 6U);
  for (std::size_t k = 0; k < eig.size(); ++k) {
    EXPECT_NEAR(eig[k]["value"].get<double>(), 2.0 * static_cast<double>(k) + 1.0, 1e-8);
    EXPECT_GE(eig[k]["n_used"].get<int>(), 1);
  }
  EXPECT_EQ(rec["seed"], 12345);
}

TEST(CliSolve, EmptyListStillSucceeds) {
  const Outcome r = run({"solve", data("no_roots.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const json rec = json::parse(r.out);
  EXPECT_TRUE(rec["outputs"]["eigenvalues"].empty());
  EXPECT_NE(r.err.find("no eigenvalues found"), std::string::npos);
}

TEST(CliSolve, InputErrorsExitTwo) {
  const Outcome bad = run({"solve", data("malformed_expression.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("ParseError"), std::string::npos) << bad.err;
  EXPECT_NE(bad.err.find("column 6"), std::string::npos) << bad.err;

  const Outcome order = run({"solve", data("bad_order.json")});
  EXPECT_EQ(order.code, 2);
  EXPECT_NE(order.err.find("order"), std::string::npos) << order.err;

  // flag overrides are revalidated
  EXPECT_EQ(run({"solve", data("harmonic_oscillator.json"), "--order", "41"}).code, 2);
  EXPECT_EQ(run({"solve", data("does_not_exist.json")}).code, 2);
  EXPECT_EQ(run({"solve"}).code, 2);
  EXPECT_EQ(run({"frobnicate", data("harmonic_oscillator.json")}).code, 2);
  EXPECT_EQ(run({"solve", data("harmonic_oscillator.json"), "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"solve", data("harmonic_oscillator.json"), "--sweep-x0", "0:1"}).code, 2);
}

TEST(CliSolve, CsvAndSweep) {
  const Outcome csv = run({"solve", data("harmonic_oscillator.json"), "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  std::istringstream is(csv.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x0,value,residual,n_used");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 6);

  const json rec = run_json({"solve", data("harmonic_oscillator.json"), "--sweep-x0", "0:0.5:2", "--grid", "121"});
  const auto& sweep = rec["outputs"]["sweep"];
  ASSERT_EQ(sweep.size(), 2U);
  EXPECT_EQ(sweep[1]["x0"], 0.5);
  for (const auto& point : sweep) {
    ASSERT_EQ(point["eigenvalues"].size(), 6U);
    EXPECT_NEAR(point["eigenvalues"][2]["value"].get<double>(), 5.0, 1e-8);
  }
}

TEST(CliSolve, DegenerateDeltaWarns) {
  const Outcome r = run({"solve", data("constants.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("DegenerateDelta"), std::string::npos) << r.err;
}

TEST(CliDiagnose, OscillatorTerminatesAtOne) {
  const Outcome r = run({"diagnose", data("harmonic_oscillator.json"), "--param-value", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rec = json::parse(r.out);
  EXPECT_EQ(rec["outputs"]["termination_level"], 1);
  EXPECT_NE(r.err.find("terminates"), std::string::npos);
  EXPECT_EQ(rec["inputs"]["problem"]["param_value"], 3.0);
}

TEST(CliDiagnose, ConstantsConvergeToOne) {
  const json rec = run_json({"diagnose", data("constants.json"), "--param-value", "0"});
  const auto& out = rec["outputs"];
  EXPECT_TRUE(out["termination_level"].is_null());
  EXPECT_NEAR(out["cf_limit"].get<double>(), 1.0, 1e-12);
  const auto& table = out["table"];
  ASSERT_EQ(table.size(), 41U);
  EXPECT_NEAR(table[40]["C"].get<double>(), 1.0, 1e-12);
  // v_n ~ 4^n is the difference of two products of size 16^n, so forty levels
  // use up most of the double-double headroom
  EXPECT_LT(out["determinant_max_rel_error"].get<double>(), 1e-6);
  EXPECT_EQ(out["convergence"]["verdict"], "Converges");
  // the unit form alternates 3, 3/4, outside the p >= 1 hypothesis of the difference bound
  EXPECT_FALSE(out["bound_check"]["applicable"].get<bool>());
  EXPECT_NE(out["bound_check"]["reason"].get<std::string>().find("HypothesisViolated"), std::string::npos);
}

TEST(CliDiagnose, NeedsParameterValue) {
  const Outcome r = run({"diagnose", data("harmonic_oscillator.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("param"), std::string::npos);
}

TEST(CliDiagnose, CsvTable) {
  const Outcome r = run({"diagnose", data("constants.json"), "--param-value", "0", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x0,n,p,q,C,dC,v,product,limit_term");
}

TEST(CliClassify, ConstantsCaseThree) {
  const json rec = run_json({"classify", data("constants.json")});
  const auto& c = rec["outputs"]["classification"];
  EXPECT_EQ(c["case_label"], "3");
  EXPECT_NEAR(c["numeric_dominant_ratio"].get<double>(), 4.0, 1e-8);
  EXPECT_NEAR(c["numeric_minimal_ratio"].get<double>(), -1.0, 1e-8);
  EXPECT_TRUE(c["minimal_exists"].get<bool>());
  EXPECT_LT(rec["outputs"]["pincherle"]["agreement"].get<double>(), 1e-10);
  EXPECT_EQ(rec["outputs"]["source"], "sequences");
}

TEST(CliClassify, BesselDeclaredPowerLaw) {
  const Outcome r = run({"classify", data("bessel_power_law.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json c = json::parse(r.out)["outputs"]["classification"];
  EXPECT_EQ(c["case_label"], "4a");
  EXPECT_EQ(c["power_law_prediction"]["minimal_selected"], "alternative");
  EXPECT_TRUE(c["consistency"].get<bool>());
  EXPECT_NE(r.err.find("alternative"), std::string::npos);
}

TEST(CliClassify, DeclaredExpansion) {
  const json c = run_json({"classify", data("constants_ba.json")})["outputs"]["classification"];
  EXPECT_EQ(c["case_label"], "5a");
  EXPECT_FALSE(c["ba_data"].is_null());
}

TEST(CliClassify, InsufficientDataExitsThree) {
  const Outcome r = run({"classify", data("short_sequences.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("InsufficientData"), std::string::npos) << r.err;
}

TEST(CliClassify, FromLadder) {
  const json rec = run_json({"classify", data("harmonic_oscillator.json"), "--param-value", "2.5", "--x0", "0.5"});
  EXPECT_EQ(rec["outputs"]["source"], "ladder");
  EXPECT_EQ(rec["outputs"]["levels"], 41);
  // p_0 = lambda0(0) = 0 leaves the monic transform undefined
  const Outcome zero = run({"classify", data("harmonic_oscillator.json"), "--param-value", "2.5"});
  EXPECT_EQ(zero.code, 3);
  EXPECT_NE(zero.err.find("ZeroP"), std::string::npos);
}

TEST(CliFlags, ParseSweep) {
  const auto s = aim::cli::parse_sweep("-1:2.5:4");
  EXPECT_EQ(s.from, -1.0);
  EXPECT_EQ(s.to, 2.5);
  EXPECT_EQ(s.steps, 4);
  EXPECT_EQ(code_of([] { (void)aim::cli::parse_sweep("1:2:0"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)aim::cli::parse_sweep("1:x:3"); }), ErrorCode::InvalidArgument);
}

TEST(CliProblemFile, Validation) {
  EXPECT_EQ(code_of([] { (void)aim::cli::parse_problem_text("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { (void)aim::cli::parse_problem_text(R"({"lambda0": 3, "s0": "1"})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              (void)aim::cli::parse_problem_text(
                  R"({"lambda0": "x", "s0": "E", "search": {"e_min": 2, "e_max": 1, "grid": 10, "tol": 1e-9}})");
            }),
            ErrorCode::InvalidSpec);
  const auto p = aim::cli::parse_problem_text(R"({"lambda0": "2*x", "s0": "1 - E"})");
  EXPECT_EQ(p.order, 80);
  EXPECT_EQ(p.n_max, 40);
  EXPECT_EQ(p.search.grid, 241);
}

// Property: every record survives serialize -> parse -> serialize byte for byte.
TEST(CliProperty, RoundTripIsByteStable) {
  const std::vector<std::vector<std::string>> commands = {
      {"solve", data("harmonic_oscillator.json")},
      {"diagnose", data("harmonic_oscillator.json"), "--param-value", "2.75"},
      {"diagnose", data("constants.json"), "--param-value", "0"},
      {"classify", data("constants.json")},
      {"classify", data("bessel_power_law.json")},
      {"classify", data("constants_ba.json")},
  };
  for (const auto& args : commands) {
    const Outcome r = run(args);
    ASSERT_EQ(r.code, 0) << args[0] << " " << r.err;
    const std::string again = aim::cli::serialize(json::parse(r.out));
    EXPECT_EQ(again, r.out) << args[0] << " " << args[1];
    EXPECT_EQ(aim::cli::serialize(json::parse(again)), again);
  }
  // non-finite values survive as strings
  const json j = {{"x", aim::cli::number(std::numeric_limits<double>::infinity())}, {"y", aim::cli::number(0.1)}};
  EXPECT_EQ(aim::cli::serialize(json::parse(aim::cli::serialize(j))), aim::cli::serialize(j));
  EXPECT_EQ(j["x"], "inf");
}

// Property: identical inputs give identical outputs, including the recorded seed and
// independently of the worker thread count.
TEST(CliProperty, Deterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"solve", data("harmonic_oscillator.json"), "--threads", "1"},
           {"classify", data("constants.json"), "--seed", "99"},
           {"diagnose", data("constants.json"), "--param-value", "0"}}) {
    const Outcome a = run(args);
    const Outcome b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.err, b.err);
  }
  const Outcome one = run({"solve", data("harmonic_oscillator.json"), "--threads", "1"});
  const Outcome four = run({"solve", data("harmonic_oscillator.json"), "--threads", "4"});
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(json::parse(run({"classify", data("constants.json"), "--seed", "99"}).out)["seed"], 99);
}
