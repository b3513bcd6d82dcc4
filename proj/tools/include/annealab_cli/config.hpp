#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "annealab/ising.hpp"
#include "annealab/markov.hpp"
#include "annealab/schedule.hpp"

namespace annealab::cli {

enum class ExperimentKind { VerifyMapping, AdiabaticResidual, GapScan, DeltaCondition, Dichotomy };

std::string_view to_string(ExperimentKind kind);
// Throws ParseError for unknown names.
ExperimentKind experiment_kind_from_string(std::string_view name);

struct RandomInstances {
  int count = 0;
  int n_min = 2;
  int n_max = 6;
  double beta_min = 0.0;
  double beta_max = 3.0;
};

struct GridSettings {
  int s_points = 65;
  int steps_per_tau = 200;
  int levels = 4;
};

struct GapSettings {
  double coupling = 1.0;
  std::vector<int> sizes;
  std::vector<double> betas;
  double fit_min = 1.0;
  double fit_max = 3.0;
};

struct DeltaSettings {
  double a = 1.0, c = 0.0, p = 1.0;
  int n = 1;
  std::optional<double> t_start;  // default: 1 for geman, 0 otherwise
  bool tail = true;
  double threshold = 0.1;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::VerifyMapping;
  std::filesystem::path source;  // config file, empty for inline text
  std::optional<IsingModel> model;
  std::string model_origin;      // "inline" or the file path as written
  std::optional<Schedule> schedule;
  std::optional<Schedule> fast;  // dichotomy
  std::optional<Schedule> slow;  // dichotomy
  std::vector<double> taus;
  std::vector<double> betas;     // verify-mapping
  std::vector<RateFamily> rates{RateFamily::Glauber};
  RandomInstances random;
  GridSettings grid;
  GapSettings gap;
  DeltaSettings delta;
  double constant_beta = 1.0;    // dichotomy control row
  bool sa_flow = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::filesystem::path output = "annealab-out";
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::filesystem::path> output;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

// Parses and validates an experiment for `kind`. Relative model paths are
// resolved against base_dir. All problems throw ParseError with the key
// path in the message.
ExperimentConfig parse_config(const std::string& yaml_text, ExperimentKind kind,
                              const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentKind kind);
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

// Schedule block: kind plus its parameters, tau and beta_max. `n_spins` is
// the default N for the geman family.
Schedule parse_schedule(const YAML::Node& node, const std::string& where, int n_spins);

}  // namespace annealab::cli
