#include <gtest/gtest.h>

#include "annealab/error.hpp"
#include "annealab_cli/config.hpp"

using namespace annealab;
using namespace annealab::cli;

namespace {
const char* kResidual = R"(
model: {n_spins: 4, topology: chain-periodic, coupling: 1.0}
schedule: {kind: linear, beta_start: 0.2, beta_end: 3.0}
taus: [50, 100, 200]
rates: metropolis
seed: 9
)";
}

TEST(Config, ParsesResidualExperiment) {
  const auto c = parse_config(kResidual, ExperimentKind::AdiabaticResidual);
  ASSERT_TRUE(c.model && c.schedule);
  EXPECT_EQ(c.model->n_spins(), 4);
  EXPECT_EQ(c.model_origin, "inline");
  EXPECT_DOUBLE_EQ(c.schedule->beta(1.0), 3.0);
  EXPECT_DOUBLE_EQ(c.schedule->beta_max(), 3.0);
  EXPECT_EQ(c.taus, (std::vector<double>{50, 100, 200}));
  EXPECT_EQ(c.rates.front(), RateFamily::Metropolis);
  EXPECT_EQ(c.seed, 9u);
}

TEST(Config, OverridesWin) {
  auto c = parse_config(kResidual, ExperimentKind::AdiabaticResidual);
  apply_overrides(c, {std::filesystem::path("elsewhere"), 4u, 77u});
  EXPECT_EQ(c.output, "elsewhere");
  EXPECT_EQ(c.threads, 4u);
  EXPECT_EQ(c.seed, 77u);
}

TEST(Config, GridShorthandAndScheduleKinds) {
  const auto c = parse_config(R"(
gap_scan: {sizes: [3, 4, 5], betas: {start: 0, stop: 2, count: 5}, fit_window: [0.5, 2]}
)",
                              ExperimentKind::GapScan);
  EXPECT_EQ(c.gap.betas, (std::vector<double>{0, 0.5, 1.0, 1.5, 2.0}));
  EXPECT_DOUBLE_EQ(c.gap.fit_min, 0.5);

  const auto q = parse_schedule(YAML::Load("{kind: exponential-quench, beta_target: 12}"), "s", 4);
  EXPECT_EQ(q.kind(), ScheduleKind::ExponentialQuench);
  EXPECT_DOUBLE_EQ(q.beta_max(), 12.0);
  const auto g = parse_schedule(
      YAML::Load("{kind: geman, p: 0.3, epsilon: 0.5, b: 0.5, c: -0.5, a: 0.001, beta_max: 10}"), "s", 4);
  EXPECT_NEAR(g.beta(0.0), 0.0, 1e-14);
  const auto sm = parse_schedule(YAML::Load("{kind: sampled, s: [0, 1], beta: [0, 2]}"), "s", 1);
  EXPECT_DOUBLE_EQ(sm.beta(0.5), 1.0);
}

TEST(Config, Rejections) {
  const auto bad = [](const std::string& text, ExperimentKind k = ExperimentKind::AdiabaticResidual) {
    EXPECT_THROW(parse_config(text, k), ParseError) << text;
  };
  bad("model: {n_spins: 3, coupling: 1, topology: chain-open}\nschedule: {kind: linear, beta_end: 1}\ntaus: []\n");
  bad("model: {n_spins: 3, coupling: 1, topology: chain-open}\nschedule: {kind: linear, beta_end: 1}\ntaus: [-1]\n");
  bad("model: {n_spins: 3, coupling: 1, topology: chain-open}\nschedule: {kind: linear, beta_end: 1}\n");
  bad("model: {n_spins: 3, coupling: 1, topology: chain-open}\nschedule: {kind: spiral}\ntaus: [1]\n");
  bad("model: {n_spins: 3, coupling: 1, topology: chain-open}\nschedule: {kind: linear, beta_start: 2, beta_end: 1}\ntaus: [1]\n");
  bad("modle: {n_spins: 3}\n");
  bad("kind: gap-scan\n");
  bad("rates: kawasaki\nbetas: [1]\nmodel: {n_spins: 2, couplings: [[0,1,1]]}\n", ExperimentKind::VerifyMapping);
  bad("delta: {a: 1, c: 0, p: 1}\ntaus: [10]\n", ExperimentKind::DeltaCondition);
  bad(": : :\n");
}
