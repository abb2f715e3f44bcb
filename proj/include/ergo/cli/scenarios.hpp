#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "ergo/cli/config.hpp"
#include "ergo/cli/report.hpp"
#include "ergo/cli/search.hpp"
#include "ergo/ergo.hpp"

namespace ergo::cli {

/// Sweeps default to CSV, single reports and searches to JSON.
inline Format default_format(const std::string& kind) {
  if (kind == "overlap-sweep" || kind == "majorization-scan" || kind == "distinguishability-sweep") {
    return Format::csv;
  }
  return Format::json;
}

namespace detail {

inline ordered_json grid_json(const Grid& g) {
  return {{"parameter", g.parameter}, {"start", g.start}, {"stop", g.stop}, {"points", g.points}};
}

inline ordered_json bloch_json(const BlochState& s) { return {s[0], s[1], s[2]}; }

inline void run_ergotropy(const ErgotropyScenario& s, Report& r) {
  r.parameters["dim"] = s.hamiltonian.dim();
  r.columns = {"state", "dim", "energy", "passive_energy", "W", "W_restricted", "S_vN", "S_T"};
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    const auto& rho = s.states[i];
    const auto w = ergotropy(rho, s.hamiltonian);
    r.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(rho.dim()), w.initial_energy,
               w.passive_energy, w.ergotropy,
               restricted_ergotropy(rho, s.hamiltonian).restricted_ergotropy,
               von_neumann_entropy(rho), tolman_entropy(rho, s.hamiltonian)});
  }
}

inline void run_mixing(const MixingScenario& s, Report& r) {
  const auto& m = s.mixture;
  r.parameters["dim"] = m.dim();
  r.parameters["components"] = m.size();
  r.parameters["n_total"] = m.total();
  r.parameters["weights"] = m.weights();
  const auto rep = mixing_ergotropy(m, s.hamiltonian);
  const double ds = quantum_mixing_entropy(m);
  r.columns = {"n_total",
               "W_initial_per_particle",
               "W_final_per_particle",
               "delta_W_per_particle",
               "delta_W_total",
               "W_restricted_initial_per_particle",
               "W_restricted_final_per_particle",
               "delta_W_restricted_per_particle",
               "delta_W_restricted_total",
               "delta_S_per_particle",
               "delta_S_total"};
  r.add_row({rep.n_total, rep.full.initial, rep.full.mixed, rep.full.delta, rep.total(),
             rep.restricted.initial, rep.restricted.mixed, rep.restricted.delta,
             rep.restricted_total(), ds, ds * rep.n_total});
}

inline void run_overlap_sweep(const OverlapSweepScenario& s, Report& r) {
  r.parameters["epsilon"] = s.epsilon;
  r.parameters["n_total"] = s.n_total;
  r.parameters["grid"] = grid_json(s.grid);
  r.columns = {"overlap", "delta_W", "delta_W_closed", "delta_S_over_2N", "h"};
  const auto h = two_level_hamiltonian(s.epsilon);
  for (std::size_t i = 0; i < s.grid.points; ++i) {
    const double q = s.grid.at(i);
    // |a1> = |0>, |a2> = q|0> + sqrt(1 - q^2)|1>
    const Complex a1[] = {1.0, 0.0};
    const Complex a2[] = {q, std::sqrt(std::max(0.0, 1.0 - q * q))};
    const MixtureSpec spec({DensityMatrix::pure(a1), DensityMatrix::pure(a2)},
                           {0.5 * s.n_total, 0.5 * s.n_total});
    r.add_row({q, mixing_ergotropy(spec, h).total(),
               mixing_ergotropy_pure_overlap(q, s.epsilon, s.n_total),
               quantum_mixing_entropy(spec), binary_entropy((1.0 - q) / 2.0)});
  }
}

inline void run_instrument_gap(const InstrumentGapScenario& s, Report& r) {
  r.parameters["epsilon"] = s.epsilon;
  r.parameters["weights"] = s.weights;
  ordered_json states = ordered_json::array();
  for (const auto& st : s.states) states.push_back(bloch_json(st));
  r.parameters["states"] = std::move(states);

  double balance = 0.0;
  for (std::size_t a = 0; a < s.states.size(); ++a) balance += s.weights[a] * s.states[a][2];
  const double dw = bloch_mixing_ergotropy(s.states, s.weights, s.epsilon);
  const double dwr = bloch_restricted_mixing_ergotropy(s.states, s.weights, s.epsilon);
  r.columns = {"delta_W", "delta_W_restricted", "gap", "balance"};
  std::vector<Cell> row{dw, dwr, dwr - dw, balance};
  r.summary = {{"restricted_exceeds_full", dwr > dw}};
  if (s.balanced) {
    r.parameters["balanced"] = {
        {"a", s.balanced->a}, {"b", s.balanced->b}, {"components", s.balanced->components}};
    const double bound =
        instrument_gap_lower_bound(s.balanced->components, s.balanced->a, s.balanced->b, s.epsilon);
    r.columns.push_back("gap_lower_bound");
    row.push_back(bound);
    r.summary["bound_holds"] = dwr - dw >= bound - 1e-9;
  }
  r.add_row(std::move(row));
}

inline double pair_mixing(const BlochState& n1, const BlochState& n2, double l1, double eps) {
  if (l1 <= 0.0 || l1 >= 1.0) return 0.0;
  const BlochState st[] = {n1, n2};
  const double w[] = {l1, 1.0 - l1};
  return bloch_mixing_ergotropy(st, w, eps);
}

inline void run_majorization_scan(const MajorizationScanScenario& s, Report& r) {
  r.parameters["epsilon"] = s.epsilon;
  r.parameters["mu_1"] = s.mu1;
  r.parameters["n1"] = bloch_json(s.n1);
  r.parameters["n2"] = bloch_json(s.n2);
  r.parameters["grid"] = grid_json(s.grid);
  r.columns = {"lambda_1",      "mu_1",        "majorizes", "delta_W_lambda",
               "delta_W_mu",    "monotone",    "first_order_margin"};
  const double ratio = s.n1.norm() / s.n2.norm();
  const double dw_mu = pair_mixing(s.n1, s.n2, s.mu1, s.epsilon);
  std::int64_t violations = 0;
  for (std::size_t i = 0; i < s.grid.points; ++i) {
    const double l1 = s.grid.at(i);
    const bool maj = majorizes(WeightVector{l1, 1.0 - l1}, WeightVector{s.mu1, 1.0 - s.mu1});
    const double dw_l = pair_mixing(s.n1, s.n2, l1, s.epsilon);
    const bool monotone = dw_mu >= dw_l - 1e-12;
    if (maj && !monotone) ++violations;
    r.add_row({l1, s.mu1, std::int64_t{maj}, dw_l, dw_mu, std::int64_t{monotone},
               first_order_margin(std::max(l1, 1.0 - l1), s.mu1, ratio)});
  }
  r.summary = {{"violations", violations}};
}

inline void run_distinguishability_sweep(const DistinguishabilitySweepScenario& s, Report& r) {
  r.parameters["epsilon"] = s.epsilon;
  r.parameters["n2_norm"] = s.n2_norm;
  r.parameters["phi"] = s.phi;
  r.parameters["lambda_1"] = s.lambda1;
  r.parameters["grid"] = grid_json(s.grid);
  r.columns = {"n1_norm",         "d",        "d_bloch",     "delta_W",   "ddelta_W_dn1",
               "ddelta_W_dn1_fd", "dd_dn1",   "dd_dn1_fd",   "hs_distance", "dhs_dn1_fd"};
  const Interval ball{0.0, 1.0};
  auto pair_at = [&](double r1) { return bloch_pair(r1, s.n2_norm, s.phi); };
  auto dw_at = [&](double r1) {
    const auto p = pair_at(r1);
    return pair_mixing(p[0], p[1], s.lambda1, s.epsilon);
  };
  auto d_at = [&](double r1) {
    const auto p = pair_at(r1);
    return bloch_distinguishability(p[0], p[1]);
  };
  auto hs_at = [&](double r1) {
    const auto p = pair_at(r1);
    return hilbert_schmidt_distance(bloch_to_density(p[0]), bloch_to_density(p[1]));
  };
  for (std::size_t i = 0; i < s.grid.points; ++i) {
    const double r1 = s.grid.at(i);
    const auto p = pair_at(r1);
    r.add_row({r1, distinguishability(bloch_to_density(p[0]), bloch_to_density(p[1])), d_at(r1),
               dw_at(r1),
               mixing_ergotropy_radial_derivative(s.lambda1, r1, s.n2_norm, s.phi, s.epsilon),
               finite_difference(dw_at, r1, kDefaultFiniteDifferenceStep, ball),
               distinguishability_radial_derivative(r1, s.n2_norm, s.phi),
               finite_difference(d_at, r1, kDefaultFiniteDifferenceStep, ball), hs_at(r1),
               finite_difference(hs_at, r1, kDefaultFiniteDifferenceStep, ball)});
  }
}

inline void run_entropy_report(const EntropyReportScenario& s, Report& r) {
  r.columns = {"item", "quantity", "value"};
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    const std::string item = "state[" + std::to_string(i) + "]";
    r.add_row({item, std::string("S_vN"), von_neumann_entropy(s.states[i])});
    r.add_row({item, std::string("S_T"), tolman_entropy(s.states[i], s.hamiltonian)});
  }
  if (s.mixture) {
    const double ds = quantum_mixing_entropy(*s.mixture);
    r.parameters["n_total"] = s.mixture->total();
    r.add_row({std::string("mixture"), std::string("S_vN_mixed"),
               von_neumann_entropy(mix(*s.mixture))});
    r.add_row({std::string("mixture"), std::string("delta_S_per_particle"), ds});
    r.add_row({std::string("mixture"), std::string("delta_S_total"), ds * s.mixture->total()});
  }
  if (!s.gases.empty()) {
    for (std::size_t i = 0; i < s.gases.size(); ++i) {
      r.add_row({"gas[" + std::to_string(i) + "]", std::string("S"),
                 classical_entropy(s.gases[i])});
    }
    r.add_row({std::string("gases"), std::string("delta_S"), classical_mixing_entropy(s.gases)});
  }
}

}  // namespace detail

inline Report run_scenario(const ScenarioConfig& cfg) {
  Report r;
  r.kind = cfg.kind;
  r.parameters["seed"] = cfg.seed;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErgotropyScenario>) detail::run_ergotropy(s, r);
        if constexpr (std::is_same_v<T, MixingScenario>) detail::run_mixing(s, r);
        if constexpr (std::is_same_v<T, OverlapSweepScenario>) detail::run_overlap_sweep(s, r);
        if constexpr (std::is_same_v<T, InstrumentGapScenario>) detail::run_instrument_gap(s, r);
        if constexpr (std::is_same_v<T, MajorizationScanScenario>) {
          detail::run_majorization_scan(s, r);
        }
        if constexpr (std::is_same_v<T, DistinguishabilitySweepScenario>) {
          detail::run_distinguishability_sweep(s, r);
        }
        if constexpr (std::is_same_v<T, EntropyReportScenario>) detail::run_entropy_report(s, r);
      },
      cfg.scenario);
  return r;
}

inline Report gap_search_report(const GapSearchResult& res) {
  Report r;
  r.kind = "search-gap";
  r.parameters = {{"seed", res.seed}, {"trials", res.trials}};
  r.columns = {"trial", "components", "delta_W", "delta_W_restricted", "gap", "balance"};
  r.summary = {{"valid", res.valid}, {"positive", res.positive}, {"found", res.best.has_value()}};
  if (res.best) {
    const auto& b = *res.best;
    r.add_row({static_cast<std::int64_t>(b.trial), static_cast<std::int64_t>(b.states.size()),
               b.delta_w, b.delta_w_restricted, b.gap, b.balance});
    ordered_json states = ordered_json::array();
    for (const auto& s : b.states) states.push_back(detail::bloch_json(s));
    r.summary["best"] = {{"trial", b.trial},           {"weights", b.weights},
                         {"states", std::move(states)}, {"delta_W", b.delta_w},
                         {"delta_W_restricted", b.delta_w_restricted},
                         {"gap", b.gap},               {"balance", b.balance}};
  }
  return r;
}

inline Report violation_search_report(const ViolationSearchResult& res) {
  Report r;
  r.kind = "search-violation";
  r.parameters = {{"seed", res.seed}, {"trials", res.trials}, {"pure_only", res.pure_only}};
  r.columns = {"trial", "lambda_1", "mu_1", "n1_norm", "n2_norm", "phi",
               "delta_W_lambda", "delta_W_mu", "excess", "first_order_margin"};
  r.summary = {{"violations", res.violations},
               {"predicted_by_first_order", res.predicted},
               {"found", res.best.has_value()}};
  if (res.best) {
    const auto& b = *res.best;
    r.add_row({static_cast<std::int64_t>(b.trial), b.lambda1, b.mu1, b.r1, b.r2, b.phi,
               b.dw_lambda, b.dw_mu, b.excess, b.first_order_margin});
    r.summary["best"] = {{"trial", b.trial},       {"lambda_1", b.lambda1},
                         {"mu_1", b.mu1},          {"n1_norm", b.r1},
                         {"n2_norm", b.r2},        {"phi", b.phi},
                         {"delta_W_lambda", b.dw_lambda}, {"delta_W_mu", b.dw_mu},
                         {"first_order_margin", b.first_order_margin},
                         {"first_order_predicts_violation", b.first_order_margin < 0.0}};
  }
  return r;
}

}  // namespace ergo::cli
