#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergo/cli/config.hpp"
#include "ergo/cli/report.hpp"
#include "ergo/cli/scenarios.hpp"
#include "ergo/cli/search.hpp"

namespace ergo::cli {

enum ExitCode : int { kSuccess = 0, kConfigFailure = 2, kNumericFailure = 3 };

namespace detail {

struct OutputFlags {
  std::string format;  // empty: not given
  std::string out;
};

inline void add_output_flags(CLI::App* cmd, OutputFlags& f) {
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "Write output to this file instead of stdout");
}

inline void emit(const Report& r, Format format, const std::optional<std::string>& path,
                 const std::string& path_field, std::ostream& out) {
  if (!path) {
    write_report(r, format, out);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ConfigError(path_field, "cannot open " + *path + " for writing");
  write_report(r, format, file);
  if (!file) throw ConfigError(path_field, "failed writing " + *path);
}

inline Format pick_format(const OutputFlags& f, std::optional<Format> configured, Format fallback) {
  if (!f.format.empty()) return parse_format(f.format, "--format");
  return configured.value_or(fallback);
}

inline std::optional<std::string> pick_path(const OutputFlags& f,
                                            const std::optional<std::string>& configured) {
  if (!f.out.empty()) return f.out;
  return configured;
}

}  // namespace detail

/// Entry point shared by the executable and the in-process tests. `args`
/// excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergotropy, mixing work and distinguishability calculator", "ergomix"};
  app.require_subcommand(1);

  detail::OutputFlags run_out, gap_out, vio_out, fid_out, erg_out;

  auto* run = app.add_subcommand("run", "Run a scenario config file");
  std::string config_path;
  std::optional<std::uint64_t> run_seed;
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--seed", run_seed, "Override the config seed");
  detail::add_output_flags(run, run_out);

  auto* search = app.add_subcommand("search", "Randomized counterexample searches");
  search->require_subcommand(1);
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  auto* gap = search->add_subcommand("gap", "Search for restricted > unrestricted mixing work");
  gap->add_option("--seed", seed, "Random seed");
  gap->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  detail::add_output_flags(gap, gap_out);
  auto* violation =
      search->add_subcommand("violation", "Search for non-monotone mixing work under majorization");
  bool pure_only = false;
  violation->add_option("--seed", seed, "Random seed");
  violation->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  violation->add_flag("--pure", pure_only, "Restrict to pairs of pure states");
  detail::add_output_flags(violation, vio_out);

  auto* fidelity = app.add_subcommand("fidelity", "Distinguishability of two qubit states");
  std::vector<double> n1, n2;
  fidelity->add_option("--n1", n1, "Bloch vector of the first state")->expected(3)->required();
  fidelity->add_option("--n2", n2, "Bloch vector of the second state")->expected(3)->required();
  detail::add_output_flags(fidelity, fid_out);

  auto* erg = app.add_subcommand("ergotropy", "Ergotropy of one state");
  std::vector<double> bloch, diag, levels;
  double epsilon = 1.0;
  auto* bloch_opt = erg->add_option("--bloch", bloch, "Qubit Bloch vector")->expected(3);
  auto* eps_opt = erg->add_option("--epsilon", epsilon, "Qubit level gap");
  auto* diag_opt = erg->add_option("--diag", diag, "Diagonal density matrix entries");
  auto* levels_opt = erg->add_option("--levels", levels, "Energy levels (diagonal Hamiltonian)");
  bloch_opt->excludes(diag_opt)->excludes(levels_opt);
  eps_opt->excludes(diag_opt)->excludes(levels_opt);
  diag_opt->needs(levels_opt);
  levels_opt->needs(diag_opt);
  detail::add_output_flags(erg, erg_out);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigFailure;
  }

  try {
    if (*run) {
      ScenarioConfig cfg = load_config(config_path);
      if (run_seed && *run_seed != cfg.seed) {
        // Random states are drawn while parsing, so reparse under the new seed.
        std::ifstream in(config_path);
        json doc = json::parse(in);
        doc["seed"] = *run_seed;
        cfg = parse_config(doc);
      }
      const Report r = run_scenario(cfg);
      detail::emit(r, detail::pick_format(run_out, cfg.output.format, default_format(cfg.kind)),
                   detail::pick_path(run_out, cfg.output.path),
                   run_out.out.empty() ? "output.path" : "--out", out);
    } else if (*gap) {
      const Report r = gap_search_report(search_instrument_gap(seed, trials));
      detail::emit(r, detail::pick_format(gap_out, std::nullopt, Format::json),
                   detail::pick_path(gap_out, std::nullopt), "--out", out);
    } else if (*violation) {
      const Report r = violation_search_report(search_monotonicity_violation(seed, trials, pure_only));
      detail::emit(r, detail::pick_format(vio_out, std::nullopt, Format::json),
                   detail::pick_path(vio_out, std::nullopt), "--out", out);
    } else if (*fidelity) {
      const BlochState a(n1[0], n1[1], n1[2]), b(n2[0], n2[1], n2[2]);
      Report r;
      r.kind = "fidelity";
      r.parameters = {{"n1", n1}, {"n2", n2}};
      r.columns = {"d", "d_bloch", "hs_distance"};
      const auto ra = bloch_to_density(a), rb = bloch_to_density(b);
      r.add_row({distinguishability(ra, rb), bloch_distinguishability(a, b),
                 hilbert_schmidt_distance(ra, rb)});
      detail::emit(r, detail::pick_format(fid_out, std::nullopt, Format::json),
                   detail::pick_path(fid_out, std::nullopt), "--out", out);
    } else if (*erg) {
      Report r;
      r.kind = "ergotropy";
      if (!diag.empty()) {
        if (diag.size() != levels.size()) {
          throw ConfigError("--levels", "need one level per diagonal entry");
        }
        detail::run_ergotropy(
            {HermitianOperator::diagonal(levels), {DensityMatrix::diagonal(diag)}}, r);
      } else {
        if (bloch.empty()) throw ConfigError("--bloch", "give --bloch or --diag/--levels");
        detail::run_ergotropy({two_level_hamiltonian(epsilon),
                               {bloch_to_density(BlochState(bloch[0], bloch[1], bloch[2]))}},
                              r);
      }
      detail::emit(r, detail::pick_format(erg_out, std::nullopt, Format::json),
                   detail::pick_path(erg_out, std::nullopt), "--out", out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const ergo::Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kSuccess;
}

}  // namespace ergo::cli
