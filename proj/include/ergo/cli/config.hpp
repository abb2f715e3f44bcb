#pragma once

// Scenario configuration files (JSON). Parsing validates everything up front
// and materializes the states, so a scenario that loads can only fail later
// for numerical reasons.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ergo/ergo.hpp"

namespace ergo::cli {

using json = nlohmann::json;

/// Invalid configuration. field() is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Format { csv, json };

inline Format parse_format(const std::string& s, const std::string& field) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError(field, "format must be \"csv\" or \"json\", got \"" + s + "\"");
}

/// Read-only view of a JSON value that remembers where it came from.
class Node {
 public:
  Node(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }
  const json& raw() const noexcept { return *value_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

  bool is_object() const { return value_->is_object(); }
  bool is_array() const { return value_->is_array(); }

  bool has(std::string_view key) const {
    return value_->is_object() && value_->contains(std::string(key));
  }

  Node at(std::string_view key) const {
    require_object();
    auto it = value_->find(std::string(key));
    if (it == value_->end()) throw ConfigError(child_path(key), "required field is missing");
    return Node(*it, child_path(key));
  }

  std::optional<Node> find(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  std::size_t size() const {
    require_array();
    return value_->size();
  }

  Node operator[](std::size_t i) const {
    require_array();
    return Node((*value_)[i], path_ + "[" + std::to_string(i) + "]");
  }

  double number() const {
    if (!value_->is_number()) fail("expected a number");
    const double x = value_->get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  double number_or(std::string_view key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }

  std::uint64_t unsigned_integer() const {
    if (!value_->is_number_integer() || (value_->is_number_integer() && !value_->is_number_unsigned() &&
                                         value_->get<std::int64_t>() < 0)) {
      fail("expected a nonnegative integer");
    }
    return value_->get<std::uint64_t>();
  }

  std::string text() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  std::vector<double> numbers() const {
    require_array();
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].number());
    return out;
  }

  Complex complex() const {
    if (!value_->is_array() || value_->size() != 2) fail("expected a [re, im] pair");
    return {(*this)[0].number(), (*this)[1].number()};
  }

  /// Rejects keys outside `allowed`; catches typos in optional fields.
  void allow_only(std::initializer_list<std::string_view> allowed) const {
    require_object();
    for (auto it = value_->begin(); it != value_->end(); ++it) {
      bool ok = false;
      for (auto a : allowed) ok = ok || it.key() == a;
      if (!ok) throw ConfigError(child_path(it.key()), "unknown field");
    }
  }

  /// The single key of a one-key object, checked against `choices`.
  std::string one_of(std::initializer_list<std::string_view> choices) const {
    require_object();
    if (value_->size() != 1) {
      std::string list;
      for (auto c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
      fail("expected exactly one of: " + list);
    }
    allow_only(choices);
    return value_->begin().key();
  }

 private:
  std::string child_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }
  void require_object() const {
    if (!value_->is_object()) fail("expected an object");
  }
  void require_array() const {
    if (!value_->is_array()) fail("expected an array");
  }

  const json* value_;
  std::string path_;
};

/// Evenly spaced sweep: points >= 2, start < stop, both ends included.
struct Grid {
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;

  double at(std::size_t i) const {
    if (i + 1 == points) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
};

struct OutputSpec {
  std::optional<std::string> path;
  std::optional<Format> format;
};

struct ErgotropyScenario {
  HermitianOperator hamiltonian;
  std::vector<DensityMatrix> states;
};

struct MixingScenario {
  HermitianOperator hamiltonian;
  MixtureSpec mixture;
};

struct OverlapSweepScenario {
  double epsilon = 1.0;
  double n_total = 1.0;
  Grid grid;
};

struct BalancedGap {
  double a = 0.0;
  double b = 0.0;
  std::size_t components = 2;
};

struct InstrumentGapScenario {
  double epsilon = 1.0;
  std::vector<BlochState> states;
  std::vector<double> weights;
  std::optional<BalancedGap> balanced;
};

struct MajorizationScanScenario {
  double epsilon = 1.0;
  Grid grid;  // over lambda_1
  double mu1 = 0.5;
  BlochState n1;
  BlochState n2;
};

struct DistinguishabilitySweepScenario {
  double epsilon = 1.0;
  Grid grid;  // over |n1|
  double n2_norm = 1.0;
  double phi = 0.0;
  double lambda1 = 0.5;
};

struct EntropyReportScenario {
  HermitianOperator hamiltonian;
  std::vector<DensityMatrix> states;
  std::optional<MixtureSpec> mixture;
  std::vector<ClassicalGasSpec> gases;
};

using Scenario = std::variant<ErgotropyScenario, MixingScenario, OverlapSweepScenario,
                              InstrumentGapScenario, MajorizationScanScenario,
                              DistinguishabilitySweepScenario, EntropyReportScenario>;

struct ScenarioConfig {
  std::string kind;
  std::uint64_t seed = 0;
  OutputSpec output;
  Scenario scenario;
};

inline constexpr std::string_view kKinds[] = {"ergotropy",
                                              "mixing",
                                              "overlap-sweep",
                                              "instrument-gap",
                                              "majorization-scan",
                                              "distinguishability-sweep",
                                              "entropy-report"};

namespace detail {

// Runs `fn`, reporting library errors as configuration errors at `node`.
template <class F>
auto at_field(const Node& node, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ergo::Error& e) {
    throw ConfigError(node.path(), e.what());
  }
}

inline ComplexMatrix parse_matrix(const Node& node) {
  const std::size_t n = node.size();
  if (n == 0) node.fail("matrix is empty");
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Node row = node[i];
    if (row.size() != n) row.fail("matrix must be square, row has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = row[j].complex();
  }
  return m;
}

inline BlochState parse_bloch(const Node& node) {
  const auto v = node.numbers();
  if (v.size() != 3) node.fail("Bloch vector needs 3 components");
  return at_field(node, [&] { return BlochState(v[0], v[1], v[2]); });
}

inline HermitianOperator parse_hamiltonian(const std::optional<Node>& maybe, Rng& rng) {
  if (!maybe) return two_level_hamiltonian(1.0);
  const Node& node = *maybe;
  const std::string form = node.one_of({"epsilon", "diag", "matrix", "random"});
  const Node body = node.at(form);
  return at_field(body, [&]() -> HermitianOperator {
    if (form == "epsilon") return two_level_hamiltonian(body.number());
    if (form == "diag") {
      const auto d = body.numbers();
      if (d.empty()) body.fail("no levels");
      return HermitianOperator::diagonal(d);
    }
    if (form == "matrix") return HermitianOperator(parse_matrix(body));
    body.allow_only({"dim"});
    const auto dim = body.at("dim").unsigned_integer();
    if (dim == 0) body.at("dim").fail("must be >= 1");
    return HermitianOperator(sample_hermitian(dim, rng));
  });
}

/// Epsilon of a two-level Hamiltonian given only as {"epsilon": e}.
inline double parse_epsilon(const std::optional<Node>& maybe) {
  if (!maybe) return 1.0;
  const std::string form = maybe->one_of({"epsilon"});
  return maybe->at(form).number();
}

inline DensityMatrix parse_state(const Node& node, const HermitianOperator& h, Rng& rng) {
  const std::string form = node.one_of({"bloch", "diag", "matrix", "pure", "gibbs", "random"});
  const Node body = node.at(form);
  return at_field(body, [&]() -> DensityMatrix {
    if (form == "bloch") return bloch_to_density(parse_bloch(body));
    if (form == "diag") return DensityMatrix::diagonal(body.numbers());
    if (form == "matrix") return DensityMatrix(parse_matrix(body));
    if (form == "pure") {
      std::vector<Complex> psi;
      for (std::size_t i = 0; i < body.size(); ++i) psi.push_back(body[i].complex());
      if (psi.empty()) body.fail("empty state vector");
      return DensityMatrix::pure(psi);
    }
    if (form == "gibbs") {
      body.allow_only({"temperature"});
      const double t = body.at("temperature").number();
      if (!(t > 0.0)) body.at("temperature").fail("must be positive");
      return gibbs_state(h, t);
    }
    body.allow_only({"dim", "rank"});
    const auto dim = body.at("dim").unsigned_integer();
    if (dim == 0) body.at("dim").fail("must be >= 1");
    const auto rank = body.has("rank") ? body.at("rank").unsigned_integer() : 0;
    return sample_density(dim, rng, rank);
  });
}

inline std::vector<DensityMatrix> parse_states(const Node& node, const HermitianOperator& h,
                                               Rng& rng) {
  if (node.size() == 0) node.fail("need at least one state");
  std::vector<DensityMatrix> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const Node s = node[i];
    out.push_back(parse_state(s, h, rng));
    if (out.back().dim() != h.dim()) {
      s.fail("state dimension " + std::to_string(out.back().dim()) +
             " does not match Hamiltonian dimension " + std::to_string(h.dim()));
    }
  }
  return out;
}

inline std::vector<BlochState> parse_bloch_list(const Node& node) {
  if (node.size() == 0) node.fail("need at least one state");
  std::vector<BlochState> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(parse_bloch(node[i]));
  return out;
}

inline Grid parse_grid(const Node& node, std::string_view parameter) {
  node.allow_only({"parameter", "start", "stop", "points"});
  Grid g;
  g.parameter = node.at("parameter").text();
  if (g.parameter != parameter) {
    node.at("parameter").fail("this kind sweeps \"" + std::string(parameter) + "\", got \"" +
                              g.parameter + "\"");
  }
  g.start = node.at("start").number();
  g.stop = node.at("stop").number();
  g.points = node.at("points").unsigned_integer();
  if (g.points < 2) node.at("points").fail("need at least 2 points");
  if (!(g.start < g.stop)) node.at("stop").fail("need start < stop");
  return g;
}

inline void require_range(const Node& node, double lo, double hi, double value) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream os;
    os << "value " << value << " outside [" << lo << ", " << hi << "]";
    node.fail(os.str());
  }
}

inline MixtureSpec parse_mixture(const Node& node, const HermitianOperator& h, Rng& rng,
                                 double n_total) {
  node.allow_only({"components", "counts", "weights"});
  auto comps = parse_states(node.at("components"), h, rng);
  if (node.has("counts") == node.has("weights")) node.fail("give exactly one of counts, weights");
  if (node.has("counts")) {
    const Node c = node.at("counts");
    if (c.size() != comps.size()) c.fail("need one count per component");
    return at_field(c, [&] { return MixtureSpec(std::move(comps), c.numbers()); });
  }
  const Node w = node.at("weights");
  if (w.size() != comps.size()) w.fail("need one weight per component");
  return at_field(w, [&] { return MixtureSpec::from_weights(std::move(comps), w.numbers(), n_total); });
}

inline std::vector<double> parse_bloch_weights(const Node& node, std::size_t count) {
  if (node.size() != count) node.fail("need one weight per state");
  auto w = node.numbers();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) node[i].fail("weights must be positive");
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) node.fail("weights must sum to 1");
  return w;
}

inline double parse_n_total(const Node& root) {
  const double n = root.number_or("n_total", 1.0);
  if (!(n > 0.0)) root.at("n_total").fail("must be positive");
  return n;
}

}  // namespace detail

inline Scenario parse_scenario(const Node& root, const std::string& kind, Rng& rng) {
  using namespace detail;
  const auto ham = root.find("hamiltonian");
  if (kind == "ergotropy") {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "states"});
    auto h = parse_hamiltonian(ham, rng);
    auto states = parse_states(root.at("states"), h, rng);
    return ErgotropyScenario{std::move(h), std::move(states)};
  } else if (kind == "mixing") {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "mixture", "n_total"});
    auto h = parse_hamiltonian(ham, rng);
    auto mixture = parse_mixture(root.at("mixture"), h, rng, parse_n_total(root));
    return MixingScenario{std::move(h), std::move(mixture)};
  } else if (kind == "overlap-sweep") {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "grid", "n_total"});
    OverlapSweepScenario s;
    s.epsilon = parse_epsilon(ham);
    s.n_total = parse_n_total(root);
    s.grid = parse_grid(root.at("grid"), "overlap");
    const Node g = root.at("grid");
    require_range(g.at("start"), 0.0, 1.0, s.grid.start);
    require_range(g.at("stop"), 0.0, 1.0, s.grid.stop);
    return s;
  } else if (kind == "instrument-gap") {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "states", "weights", "balanced"});
    InstrumentGapScenario s;
    s.epsilon = parse_epsilon(ham);
    if (auto b = root.find("balanced")) {
      if (root.has("states") || root.has("weights")) b->fail("use either balanced or states/weights");
      b->allow_only({"a", "b", "components"});
      BalancedGap bal{b->at("a").number(), b->at("b").number(), 2};
      if (b->has("components")) bal.components = b->at("components").unsigned_integer();
      if (bal.components < 2 || bal.components % 2 != 0) {
        b->at("components").fail("need an even number of components >= 2");
      }
      if (!(bal.a > 0.0)) b->at("a").fail("must be positive");
      s.weights.assign(bal.components, 1.0 / static_cast<double>(bal.components));
      s.states = at_field(*b, [&] { return balanced_gap_configuration(s.weights, bal.a, bal.b); });
      s.balanced = bal;
    } else {
      s.states = parse_bloch_list(root.at("states"));
      s.weights = parse_bloch_weights(root.at("weights"), s.states.size());
    }
    return std::move(s);
  } else if (kind == "majorization-scan") {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "grid", "mu_1", "states"});
    MajorizationScanScenario s;
    s.epsilon = parse_epsilon(ham);
    s.grid = parse_grid(root.at("grid"), "lambda_1");
    const Node g = root.at("grid");
    require_range(g.at("start"), 0.0, 1.0, s.grid.start);
    require_range(g.at("stop"), 0.0, 1.0, s.grid.stop);
    s.mu1 = root.at("mu_1").number();
    require_range(root.at("mu_1"), 0.5, 1.0, s.mu1);
    const Node st = root.at("states");
    if (st.size() != 2) st.fail("majorization scan takes exactly two Bloch states");
    s.n1 = parse_bloch(st[0]);
    s.n2 = parse_bloch(st[1]);
    if (!(s.n2.norm() > 0.0) || s.n1.norm() > s.n2.norm()) {
      st.fail("need 0 <= |n1| <= |n2| and |n2| > 0");
    }
    return s;
  } else if (kind == "distinguishability-sweep") {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "grid", "n2_norm", "phi",
                     "lambda_1"});
    DistinguishabilitySweepScenario s;
    s.epsilon = parse_epsilon(ham);
    s.grid = parse_grid(root.at("grid"), "n1_norm");
    const Node g = root.at("grid");
    // Keep the finite-difference stencil inside the Bloch ball and away from
    // the 1/sqrt(1 - |n1|^2) singularity at the surface.
    require_range(g.at("start"), 1e-4, 1.0 - 1e-3, s.grid.start);
    require_range(g.at("stop"), 1e-4, 1.0 - 1e-3, s.grid.stop);
    s.n2_norm = root.at("n2_norm").number();
    require_range(root.at("n2_norm"), 0.0, 1.0, s.n2_norm);
    s.phi = root.at("phi").number();
    s.lambda1 = root.number_or("lambda_1", 0.5);
    if (root.has("lambda_1")) require_range(root.at("lambda_1"), 1e-12, 1.0 - 1e-12, s.lambda1);
    return s;
  } else {
    root.allow_only({"kind", "seed", "output", "hamiltonian", "states", "mixture", "gases",
                     "n_total"});
    EntropyReportScenario s{parse_hamiltonian(ham, rng), {}, std::nullopt, {}};
    if (auto st = root.find("states")) s.states = parse_states(*st, s.hamiltonian, rng);
    if (auto m = root.find("mixture")) {
      s.mixture = parse_mixture(*m, s.hamiltonian, rng, parse_n_total(root));
    }
    if (auto gs = root.find("gases")) {
      for (std::size_t i = 0; i < gs->size(); ++i) {
        const Node g = (*gs)[i];
        g.allow_only({"particles", "volume", "species"});
        ClassicalGasSpec gas{g.at("particles").number(), g.at("volume").number(), std::nullopt};
        if (g.has("species")) gas.species = g.at("species").text();
        at_field(g, [&] { validate(gas); });
        s.gases.push_back(std::move(gas));
      }
    }
    if (s.states.empty() && !s.mixture && s.gases.empty()) {
      root.fail("entropy-report needs at least one of states, mixture, gases");
    }
    return std::move(s);
  }
}

inline ScenarioConfig parse_config(const json& document) {
  const Node root(document, "");
  if (!root.is_object()) throw ConfigError("", "configuration must be a JSON object");
  struct {
    std::string kind;
    std::uint64_t seed = 0;
    OutputSpec output;
  } cfg;
  cfg.kind = root.at("kind").text();
  bool known = false;
  for (auto k : kKinds) known = known || k == cfg.kind;
  if (!known) root.at("kind").fail("unknown kind \"" + cfg.kind + "\"");

  if (root.has("seed")) cfg.seed = root.at("seed").unsigned_integer();
  if (auto out = root.find("output")) {
    out->allow_only({"path", "format"});
    if (out->has("path")) cfg.output.path = out->at("path").text();
    if (out->has("format")) {
      cfg.output.format = parse_format(out->at("format").text(), "output.format");
    }
  }
  Rng rng = make_rng(Seed{cfg.seed});

  Scenario scenario = parse_scenario(root, cfg.kind, rng);
  return ScenarioConfig{cfg.kind, cfg.seed, cfg.output, std::move(scenario)};
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace ergo::cli
