#include "annealab_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "annealab/error.hpp"
#include "annealab/model_file.hpp"

namespace annealab::cli {
namespace {

template <class T>
T as(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsScalar()) throw ParseError(where + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(fmt::format("{}: cannot read '{}'", where, node.Scalar()));
  }
}

template <class T>
T get(const YAML::Node& map, const char* key, const std::string& where, T fallback) {
  const auto node = map[key];
  return node ? as<T>(node, where + "." + key) : fallback;
}

template <class T>
T require(const YAML::Node& map, const char* key, const std::string& where) {
  const auto node = map[key];
  if (!node) throw ParseError(fmt::format("{}: missing '{}'", where, key));
  return as<T>(node, where + "." + key);
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!map.IsMap()) throw ParseError(where + ": expected a key-value table");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ParseError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

// A list of numbers, or {start, stop, count} for an evenly spaced grid.
std::vector<double> number_list(const YAML::Node& node, const std::string& where) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (std::size_t k = 0; k < node.size(); ++k)
      out.push_back(as<double>(node[k], fmt::format("{}[{}]", where, k)));
  } else if (node.IsMap()) {
    check_keys(node, {"start", "stop", "count"}, where);
    const double start = require<double>(node, "start", where);
    const double stop = require<double>(node, "stop", where);
    const int count = require<int>(node, "count", where);
    if (count < 1) throw ParseError(where + ".count: must be >= 1");
    for (int k = 0; k < count; ++k)
      out.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
  } else {
    throw ParseError(where + ": expected a list or {start, stop, count}");
  }
  for (double v : out)
    if (!std::isfinite(v)) throw ParseError(where + ": values must be finite");
  return out;
}

std::vector<double> tau_list(const YAML::Node& node, const std::string& where) {
  auto taus = number_list(node, where);
  if (taus.empty()) throw ParseError(where + ": list is empty");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] > 0.0)) throw ParseError(fmt::format("{}[{}]: must be > 0", where, k));
    if (k > 0 && !(taus[k] > taus[k - 1]))
      throw ParseError(fmt::format("{}[{}]: list must be strictly increasing", where, k));
  }
  return taus;
}

IsingModel model_from(const YAML::Node& node, const std::filesystem::path& base,
                      std::string& origin) {
  if (node.IsScalar()) {
    const std::filesystem::path path = base / node.as<std::string>();
    if (!std::filesystem::exists(path))
      throw ParseError(fmt::format("model: file '{}' does not exist", path.string()));
    origin = node.as<std::string>();
    return load_model_file(path);
  }
  if (!node.IsMap()) throw ParseError("model: expected a table or a file path");
  origin = "inline";
  YAML::Emitter emitter;
  emitter << node;
  return parse_model(emitter.c_str());
}

// Invalid parameter values become parse errors naming the block.
template <class F>
auto guarded(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::VerifyMapping: return "verify-mapping";
    case ExperimentKind::AdiabaticResidual: return "adiabatic-residual";
    case ExperimentKind::GapScan: return "gap-scan";
    case ExperimentKind::DeltaCondition: return "delta-condition";
    case ExperimentKind::Dichotomy: return "dichotomy";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::VerifyMapping, ExperimentKind::AdiabaticResidual,
                 ExperimentKind::GapScan, ExperimentKind::DeltaCondition, ExperimentKind::Dichotomy})
    if (to_string(k) == name) return k;
  throw ParseError(fmt::format("unknown experiment kind '{}'", name));
}

Schedule parse_schedule(const YAML::Node& node, const std::string& where, int n_spins) {
  if (!node || !node.IsMap()) throw ParseError(where + ": expected a schedule table");
  const auto kind = require<std::string>(node, "kind", where);
  const double tau = get<double>(node, "tau", where, 1.0);
  return guarded(where, [&] {
    if (kind == "linear") {
      check_keys(node, {"kind", "tau", "beta_max", "beta_start", "beta_end"}, where);
      const double b0 = get<double>(node, "beta_start", where, 0.0);
      const double b1 = require<double>(node, "beta_end", where);
      return Schedule::linear(b0, b1, tau, get<double>(node, "beta_max", where, b1));
    }
    if (kind == "constant") {
      check_keys(node, {"kind", "tau", "beta_max", "beta"}, where);
      const double b = require<double>(node, "beta", where);
      return Schedule::constant(b, tau, get<double>(node, "beta_max", where, b));
    }
    if (kind == "exponential-quench") {
      check_keys(node, {"kind", "tau", "beta_max", "beta_start", "beta_target", "time_constant"},
                 where);
      ExponentialQuench q;
      q.beta_start = get<double>(node, "beta_start", where, 0.0);
      q.beta_target = require<double>(node, "beta_target", where);
      q.time_constant = get<double>(node, "time_constant", where, 1.0);
      return Schedule::exponential_quench(q, tau, get<double>(node, "beta_max", where, q.beta_target));
    }
    if (kind == "geman") {
      check_keys(node, {"kind", "tau", "beta_max", "p", "n", "epsilon", "b", "c", "a", "c_prime"},
                 where);
      auto g = make_geman_params(require<double>(node, "p", where),
                                 get<int>(node, "n", where, n_spins),
                                 require<double>(node, "epsilon", where),
                                 require<double>(node, "b", where), get<double>(node, "c", where, 0.0),
                                 get<double>(node, "a", where, 1.0));
      if (node["c_prime"]) g.c_prime = as<double>(node["c_prime"], where + ".c_prime");
      return Schedule::geman(g, tau, require<double>(node, "beta_max", where));
    }
    if (kind == "sampled") {
      check_keys(node, {"kind", "tau", "beta_max", "s", "beta"}, where);
      if (!node["s"] || !node["beta"]) throw ParseError(where + ": sampled needs 's' and 'beta'");
      SampledBeta sb{number_list(node["s"], where + ".s"), number_list(node["beta"], where + ".beta")};
      if (sb.beta.empty()) throw ParseError(where + ".beta: list is empty");
      const double top = *std::max_element(sb.beta.begin(), sb.beta.end());
      return Schedule::sampled(std::move(sb), tau, get<double>(node, "beta_max", where, top));
    }
    throw ParseError(fmt::format("{}.kind: unknown schedule '{}'", where, kind));
  });
}

ExperimentConfig parse_config(const std::string& yaml_text, ExperimentKind kind,
                              const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!root.IsMap()) throw ParseError("config: expected a key-value table");
  check_keys(root,
             {"kind", "model", "schedule", "fast", "slow", "taus", "betas", "rates", "random",
              "grid", "gap_scan", "delta", "constant_beta", "sa_flow", "seed", "threads", "output"},
             "config");

  ExperimentConfig cfg;
  cfg.kind = kind;
  if (root["kind"]) {
    const auto named = experiment_kind_from_string(as<std::string>(root["kind"], "kind"));
    if (named != kind)
      throw ParseError(fmt::format("kind: config is for '{}' but '{}' was requested",
                                   to_string(named), to_string(kind)));
  }
  cfg.seed = get<std::uint64_t>(root, "seed", "config", 0);
  cfg.threads = get<unsigned>(root, "threads", "config", 1);
  if (cfg.threads < 1) throw ParseError("threads: must be >= 1");
  if (root["output"]) cfg.output = as<std::string>(root["output"], "output");

  if (const auto r = root["rates"]) {
    cfg.rates.clear();
    const auto one = [&](const YAML::Node& n, const std::string& where) {
      return guarded(where, [&] { return rate_family_from_string(as<std::string>(n, where)); });
    };
    if (r.IsSequence()) {
      for (std::size_t k = 0; k < r.size(); ++k) cfg.rates.push_back(one(r[k], fmt::format("rates[{}]", k)));
    } else {
      cfg.rates.push_back(one(r, "rates"));
    }
    if (cfg.rates.empty()) throw ParseError("rates: list is empty");
  }

  if (root["model"]) cfg.model = model_from(root["model"], base_dir, cfg.model_origin);
  const int n = cfg.model ? cfg.model->n_spins() : 1;
  if (root["schedule"]) cfg.schedule = parse_schedule(root["schedule"], "schedule", n);
  if (root["fast"]) cfg.fast = parse_schedule(root["fast"], "fast", n);
  if (root["slow"]) cfg.slow = parse_schedule(root["slow"], "slow", n);
  if (root["taus"]) cfg.taus = tau_list(root["taus"], "taus");
  if (root["betas"]) cfg.betas = number_list(root["betas"], "betas");
  cfg.constant_beta = get<double>(root, "constant_beta", "config", 1.0);
  cfg.sa_flow = get<bool>(root, "sa_flow", "config", false);

  if (const auto g = root["grid"]) {
    check_keys(g, {"s_points", "steps_per_tau", "levels"}, "grid");
    cfg.grid.s_points = get<int>(g, "s_points", "grid", cfg.grid.s_points);
    cfg.grid.steps_per_tau = get<int>(g, "steps_per_tau", "grid", cfg.grid.steps_per_tau);
    cfg.grid.levels = get<int>(g, "levels", "grid", cfg.grid.levels);
    if (cfg.grid.s_points < 2 || cfg.grid.steps_per_tau < 1 || cfg.grid.levels < 2)
      throw ParseError("grid: need s_points >= 2, steps_per_tau >= 1, levels >= 2");
  }
  if (const auto r = root["random"]) {
    check_keys(r, {"count", "n_min", "n_max", "beta_min", "beta_max"}, "random");
    auto& ri = cfg.random;
    ri.count = get<int>(r, "count", "random", 0);
    ri.n_min = get<int>(r, "n_min", "random", ri.n_min);
    ri.n_max = get<int>(r, "n_max", "random", ri.n_max);
    ri.beta_min = get<double>(r, "beta_min", "random", ri.beta_min);
    ri.beta_max = get<double>(r, "beta_max", "random", ri.beta_max);
    if (ri.count < 0 || ri.n_min < 1 || ri.n_max < ri.n_min || ri.n_max > 10 ||
        ri.beta_max < ri.beta_min || ri.beta_min < 0.0)
      throw ParseError("random: need count >= 0, 1 <= n_min <= n_max <= 10, 0 <= beta_min <= beta_max");
  }
  if (const auto g = root["gap_scan"]) {
    check_keys(g, {"coupling", "sizes", "betas", "fit_window"}, "gap_scan");
    cfg.gap.coupling = get<double>(g, "coupling", "gap_scan", 1.0);
    if (!g["sizes"] || !g["betas"]) throw ParseError("gap_scan: needs 'sizes' and 'betas'");
    for (double v : number_list(g["sizes"], "gap_scan.sizes")) {
      if (v != std::floor(v)) throw ParseError("gap_scan.sizes: entries must be integers");
      cfg.gap.sizes.push_back(static_cast<int>(v));
    }
    cfg.gap.betas = number_list(g["betas"], "gap_scan.betas");
    if (const auto w = g["fit_window"]) {
      const auto window = number_list(w, "gap_scan.fit_window");
      if (window.size() != 2 || !(window[0] < window[1]))
        throw ParseError("gap_scan.fit_window: expected [low, high] with low < high");
      cfg.gap.fit_min = window[0];
      cfg.gap.fit_max = window[1];
    }
  }
  if (const auto d = root["delta"]) {
    check_keys(d, {"a", "c", "p", "n", "t_start", "tail", "threshold"}, "delta");
    cfg.delta.a = require<double>(d, "a", "delta");
    cfg.delta.c = require<double>(d, "c", "delta");
    cfg.delta.p = require<double>(d, "p", "delta");
    cfg.delta.n = get<int>(d, "n", "delta", n);
    if (d["t_start"]) cfg.delta.t_start = as<double>(d["t_start"], "delta.t_start");
    cfg.delta.tail = get<bool>(d, "tail", "delta", true);
    cfg.delta.threshold = get<double>(d, "threshold", "delta", 0.1);
  }

  // What each kind needs.
  const auto need = [&](bool present, const char* what) {
    if (!present)
      throw ParseError(fmt::format("config: '{}' requires '{}'", to_string(kind), what));
  };
  switch (kind) {
    case ExperimentKind::VerifyMapping:
      need(cfg.model.has_value() || cfg.random.count > 0, "model");
      if (cfg.betas.empty()) cfg.betas = {0.0, 0.3, 1.0, 2.0};
      break;
    case ExperimentKind::AdiabaticResidual:
      need(cfg.model.has_value(), "model");
      need(cfg.schedule.has_value(), "schedule");
      need(root["taus"].IsDefined(), "taus");
      break;
    case ExperimentKind::GapScan:
      need(root["gap_scan"].IsDefined(), "gap_scan");
      break;
    case ExperimentKind::DeltaCondition:
      need(cfg.schedule.has_value(), "schedule");
      need(root["delta"].IsDefined(), "delta");
      need(root["taus"].IsDefined(), "taus");
      break;
    case ExperimentKind::Dichotomy:
      need(cfg.model.has_value(), "model");
      need(cfg.fast.has_value(), "fast");
      need(cfg.slow.has_value(), "slow");
      need(root["taus"].IsDefined(), "taus");
      break;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("config: cannot open '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  auto cfg = parse_config(text.str(), kind, path.parent_path());
  cfg.source = path;
  return cfg;
}

void apply_overrides(ExperimentConfig& config, const Overrides& overrides) {
  if (overrides.output) config.output = *overrides.output;
  if (overrides.threads) config.threads = std::max(1u, *overrides.threads);
  if (overrides.seed) config.seed = *overrides.seed;
}

}  // namespace annealab::cli
