#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ergo/cli/app.hpp"

using namespace ergo;
using namespace ergo::cli;

namespace {

Report run_json(const char* text) { return run_scenario(parse_config(json::parse(text))); }

double num(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return *d;
  return static_cast<double>(std::get<std::int64_t>(c));
}

std::size_t column(const Report& r, const std::string& name) {
  for (std::size_t k = 0; k < r.columns.size(); ++k)
    if (r.columns[k] == name) return k;
  ADD_FAILURE() << "no column " << name;
  return 0;
}

std::string config_error_field(const char* text) {
  try {
    parse_config(json::parse(text));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, GridSpacing) {
  const Grid g{"overlap", 0.0, 1.0, 101};
  EXPECT_EQ(g.at(0), 0.0);
  EXPECT_EQ(g.at(100), 1.0);
  EXPECT_DOUBLE_EQ(g.at(50), 0.5);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_error_field(R"({"kind": "overlap-sweep",
      "grid": {"parameter": "overlap", "start": 0, "stop": 1, "points": 1}})"),
            "grid.points");
  EXPECT_EQ(config_error_field(R"({"kind": "overlap-sweep",
      "grid": {"parameter": "overlap", "start": 0.5, "stop": 0.5, "points": 3}})"),
            "grid.stop");
  EXPECT_EQ(config_error_field(R"({"kind": "overlap-sweep",
      "grid": {"parameter": "phi", "start": 0, "stop": 1, "points": 3}})"),
            "grid.parameter");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy", "states": [{"bloch": [0, 0, 1]},
      {"diag": [0.5, 0.4]}]})"),
            "states[1].diag");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy", "states": [{"diag": [0.2, 0.3, 0.5]}]})"),
            "states[0]");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy", "states": [], "typo": 1})"), "typo");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy"})"), "states");
  EXPECT_EQ(config_error_field(R"({"kind": "sideways"})"), "kind");
  EXPECT_EQ(config_error_field(R"({"states": []})"), "kind");
  EXPECT_EQ(config_error_field(R"({"kind": "instrument-gap", "states": [[0, 0, 1], [0, 0, -1]],
      "weights": [0.5, 0.6]})"),
            "weights");
  EXPECT_EQ(config_error_field(R"({"kind": "mixing", "mixture": {"components":
      [{"bloch": [0, 0, 1]}], "counts": [1, 2]}})"),
            "mixture.counts");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy", "states": [{"bloch": [0, 0, 1],
      "diag": [1, 0]}]})"),
            "states[0]");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy", "output": {"format": "xml"},
      "states": [{"bloch": [0, 0, 1]}]})"),
            "output.format");
  EXPECT_EQ(config_error_field(R"({"kind": "distinguishability-sweep", "n2_norm": 0.9, "phi": 0.3,
      "grid": {"parameter": "n1_norm", "start": 0.1, "stop": 1.0, "points": 3}})"),
            "grid.stop");
  EXPECT_EQ(config_error_field(R"({"kind": "majorization-scan", "mu_1": 0.4,
      "states": [[0, 0, 0.1], [0, 0, 1]],
      "grid": {"parameter": "lambda_1", "start": 0.5, "stop": 1.0, "points": 3}})"),
            "mu_1");
  EXPECT_EQ(config_error_field(R"({"kind": "entropy-report", "gases": [{"particles": -1,
      "volume": 1}]})"),
            "gases[0]");
  EXPECT_EQ(config_error_field(R"({"kind": "ergotropy", "seed": -3,
      "states": [{"bloch": [0, 0, 1]}]})"),
            "seed");
}

TEST(Config, DefaultsToUnitGap) {
  const auto cfg = parse_config(json::parse(R"({"kind": "ergotropy",
      "states": [{"bloch": [0, 0, 1]}]})"));
  const auto& s = std::get<ErgotropyScenario>(cfg.scenario);
  EXPECT_EQ(s.hamiltonian.matrix(), two_level_hamiltonian(1.0).matrix());
}

TEST(Scenario, OverlapSweepMatchesClosedForms) {
  const auto r = run_json(R"({"kind": "overlap-sweep", "hamiltonian": {"epsilon": 1},
      "grid": {"parameter": "overlap", "start": 0, "stop": 1, "points": 101}})");
  ASSERT_EQ(r.rows.size(), 101u);
  const auto q = column(r, "overlap"), dw = column(r, "delta_W"), ds = column(r, "delta_S_over_2N");
  for (const auto& row : r.rows) {
    const double overlap = num(row[q]);
    ASSERT_NEAR(num(row[dw]), (1.0 - overlap) / 2.0, 1e-10);
    ASSERT_NEAR(num(row[ds]), binary_entropy((1.0 - overlap) / 2.0), 1e-10);
  }
  EXPECT_NEAR(num(r.rows.front()[ds]), std::log(2.0), 1e-12);
  EXPECT_NEAR(num(r.rows.back()[ds]), 0.0, 1e-12);
  EXPECT_NEAR(num(r.rows.back()[dw]), 0.0, 1e-12);
}

TEST(Scenario, InstrumentGapCounterexample) {
  const auto r = run_json(R"({"kind": "instrument-gap",
      "states": [[0.2, 0.2, 0.8], [0.2, 0.2, -0.8]], "weights": [0.5, 0.5]})");
  EXPECT_NEAR(num(r.rows[0][column(r, "delta_W_restricted")]), 0.4, 1e-12);
  EXPECT_NEAR(num(r.rows[0][column(r, "delta_W")]), 0.282843, 1e-6);
  EXPECT_TRUE(r.summary["restricted_exceeds_full"].get<bool>());
  const auto j = to_json(r);
  EXPECT_EQ(j["kind"], "instrument-gap");
}

TEST(Scenario, BalancedGapReportsBound) {
  const auto r = run_json(R"({"kind": "instrument-gap",
      "balanced": {"a": 0.2, "b": 0.05, "components": 4}})");
  EXPECT_GE(num(r.rows[0][column(r, "gap")]), num(r.rows[0][column(r, "gap_lower_bound")]));
  EXPECT_NEAR(num(r.rows[0][column(r, "balance")]), 0.0, 1e-15);
  EXPECT_TRUE(r.summary["bound_holds"].get<bool>());
}

TEST(Scenario, GibbsStateHasNoErgotropy) {
  const auto r = run_json(R"({"kind": "ergotropy", "hamiltonian": {"diag": [0, 1, 2.5]},
      "states": [{"gibbs": {"temperature": 1.3}}]})");
  EXPECT_NEAR(num(r.rows[0][column(r, "W")]), 0.0, 1e-10);
}

TEST(Scenario, RandomStatesFollowTheSeed) {
  const char* cfg = R"({"kind": "ergotropy", "seed": 9, "hamiltonian": {"random": {"dim": 3}},
      "states": [{"random": {"dim": 3}}, {"random": {"dim": 3, "rank": 1}}]})";
  std::ostringstream a, b;
  write_csv(run_json(cfg), a);
  write_csv(run_json(cfg), b);
  EXPECT_EQ(a.str(), b.str());
  const auto r = run_json(cfg);
  EXPECT_NEAR(num(r.rows[1][column(r, "S_vN")]), 0.0, 1e-10);
}

TEST(Scenario, EntropyReportClassicalGases) {
  const auto r = run_json(R"({"kind": "entropy-report",
      "gases": [{"particles": 100, "volume": 1}, {"particles": 100, "volume": 1}]})");
  EXPECT_EQ(num(r.rows.back()[2]), 200 * std::log(2.0));
  const auto same = run_json(R"({"kind": "entropy-report",
      "gases": [{"particles": 100, "volume": 1, "species": "He"},
                {"particles": 100, "volume": 1, "species": "He"}]})");
  EXPECT_EQ(num(same.rows.back()[2]), 0.0);
}

TEST(Scenario, MajorizationScanFlagsTheViolation) {
  const auto r = run_json(R"({"kind": "majorization-scan", "mu_1": 0.7,
      "states": [[0, 0, 0.05], [0.19866933079506122, 0, 0.98006657784124163]],
      "grid": {"parameter": "lambda_1", "start": 0.7, "stop": 0.9, "points": 3}})");
  // rows at lambda_1 = 0.7, 0.8, 0.9
  EXPECT_EQ(num(r.rows[0][column(r, "monotone")]), 1.0);
  EXPECT_EQ(num(r.rows[1][column(r, "monotone")]), 0.0);
  EXPECT_LT(num(r.rows[1][column(r, "first_order_margin")]), 0.0);
}

TEST(Report, CsvUsesSeventeenDigits) {
  Report r;
  r.columns = {"x", "label"};
  r.add_row({0.1, std::string("a,b")});
  std::ostringstream os;
  write_csv(r, os);
  EXPECT_EQ(os.str(), "x,label\n0.10000000000000001,\"a,b\"\n");
  EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
}

TEST(Search, GapFindsPositiveInstancesAndReplays) {
  const auto a = search_instrument_gap(4, 10000);
  ASSERT_TRUE(a.best.has_value());
  EXPECT_GT(a.best->gap, 0.0);
  EXPECT_LE(std::abs(a.best->balance), kBalanceTolerance);
  const auto b = search_instrument_gap(4, 10000);
  EXPECT_EQ(a.best->trial, b.best->trial);
  EXPECT_EQ(a.best->gap, b.best->gap);
  EXPECT_EQ(a.positive, b.positive);
}

TEST(Search, GapBestMatchesDirectEvaluation) {
  const auto a = search_instrument_gap(8, 2000);
  ASSERT_TRUE(a.best.has_value());
  EXPECT_EQ(a.best->gap, instrument_gap(a.best->states, a.best->weights, 1.0));
}

TEST(Search, SingleTrialIsAValidReport) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = gap_search_report(search_instrument_gap(seed, 1));
    EXPECT_EQ(r.rows.size(), r.summary["found"].get<bool>() ? 1u : 0u);
  }
}

TEST(Search, ViolationFoundAndPurePairsClean) {
  const auto mixed = search_monotonicity_violation(2, 10000);
  ASSERT_TRUE(mixed.best.has_value());
  EXPECT_GT(mixed.best->dw_lambda, mixed.best->dw_mu);
  const auto pure = search_monotonicity_violation(2, 10000, true);
  EXPECT_EQ(pure.violations, 0u);
  EXPECT_FALSE(pure.best.has_value());
  const auto again = search_monotonicity_violation(2, 10000);
  EXPECT_EQ(again.violations, mixed.violations);
  EXPECT_EQ(again.best->trial, mixed.best->trial);
}

TEST(App, ExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(run_cli({"fidelity", "--n1", "0", "0", "1", "--n2", "0", "0", "-1"}, out, err),
            kSuccess);
  EXPECT_EQ(run_cli({"fidelity", "--n1", "0", "0", "1"}, out, err), kConfigFailure);
  EXPECT_EQ(run_cli({"fidelity", "--n1", "0", "0", "3", "--n2", "0", "0", "1"}, out, err),
            kNumericFailure);
  EXPECT_EQ(run_cli({"ergotropy", "--diag", "0.3", "0.7"}, out, err), kConfigFailure);
  EXPECT_EQ(run_cli({"run", "/nonexistent/config.json"}, out, err), kConfigFailure);
  EXPECT_EQ(run_cli({"--help"}, out, err), kSuccess);
}

TEST(App, ErgotropyCommand) {
  std::ostringstream out, err;
  ASSERT_EQ(run_cli({"ergotropy", "--diag", "0.3", "0.7", "--levels", "0", "1"}, out, err),
            kSuccess);
  const auto j = json::parse(out.str());
  EXPECT_NEAR(j["rows"][0][4].get<double>(), 0.4, 1e-15);
}
