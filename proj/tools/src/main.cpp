// annealab <kind> --config path [--out dir] [--threads k] [--seed n]
//
// Exit codes: 0 ok, 1 other failure (I/O, internal), 2 parse/config,
// 3 numeric instability, 4 degeneracy abort, 5 verification failed.

#include <iostream>

#include <CLI11.hpp>

#include "annealab/error.hpp"
#include "annealab_cli/config.hpp"
#include "annealab_cli/experiments.hpp"

namespace {
constexpr int kParse = 2, kNumeric = 3, kDegeneracy = 4, kOther = 1;
}

int main(int argc, char** argv) {
  using namespace annealab;
  CLI::App app{"Exact small-system experiments on simulated annealing and its imaginary-time mapping"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  for (auto kind : {cli::ExperimentKind::VerifyMapping, cli::ExperimentKind::AdiabaticResidual,
                    cli::ExperimentKind::GapScan, cli::ExperimentKind::DeltaCondition,
                    cli::ExperimentKind::Dichotomy}) {
    auto* sub = app.add_subcommand(std::string(cli::to_string(kind)));
    sub->add_option("--config", config_path, "experiment config (YAML)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides `output`)");
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed (overrides `seed`)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    const auto kind = cli::experiment_kind_from_string(app.get_subcommands().front()->get_name());
    auto config = cli::load_config(config_path, kind);
    cli::Overrides o;
    if (out_dir) o.output = *out_dir;
    o.threads = threads;
    o.seed = seed;
    cli::apply_overrides(config, o);
    const auto result = cli::run_experiment(config, std::cout);
    std::cout << "wrote " << result.files.size() << " files to " << config.output.string() << "\n";
    return result.status;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const DegeneracyError& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return kDegeneracy;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kParse;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
