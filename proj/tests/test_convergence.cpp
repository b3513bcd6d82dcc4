#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "annealab/convergence.hpp"
#include "annealab/error.hpp"

using namespace annealab;

TEST(GapScan, KnownLimits) {
  const auto scan = gap_scan({0.0, 0.5, 1.0, 2.0}, {1, 2, 3, 6});
  for (std::size_t i = 0; i < scan.sizes.size(); ++i) EXPECT_NEAR(scan.at(i, 0).gap, 1.0, 1e-13);
  // free spin: heat-bath rates sum to one at every beta
  for (std::size_t k = 0; k < scan.betas.size(); ++k) EXPECT_NEAR(scan.at(0, k).gap, 1.0, 1e-14);
  for (std::size_t i = 0; i < scan.sizes.size(); ++i) {
    EXPECT_GT(scan.at(i, 3).gap, 0.0);
    if (scan.sizes[i] >= 2) EXPECT_TRUE(scan.monotone_decreasing[i]);
  }
  EXPECT_THROW(gap_scan({1.0}, {13}), std::invalid_argument);
  EXPECT_THROW(gap_scan({}, {3}), std::invalid_argument);
}

// Ring gap for N >= 3 equals 1 - tanh(2 beta J); rings of different length
// share it.
TEST(GapScan, RingGapFormula) {
  const auto scan = gap_scan({0.3, 1.0, 2.0}, {3, 4, 7}, 1.0, 2);
  for (const auto& s : scan.samples)
    EXPECT_NEAR(s.gap, 1.0 - std::tanh(2.0 * s.beta), 1e-12 + 1e-9 * s.gap) << s.n << " " << s.beta;
}

TEST(GapScan, WarnsOnTinyGap) {
  const auto scan = gap_scan({8.0}, {3});
  EXPECT_FALSE(scan.warnings.empty());
}

TEST(GapFit, RecoversSyntheticModel) {
  const double log_a = -1.3, c = 0.2, p = 0.45;
  GapScan scan;
  for (int n : {4, 5, 6, 7})
    for (int k = 0; k < 7; ++k) {
      const double beta = 0.5 + 0.25 * k;
      scan.samples.push_back(
          {beta, n, std::exp(log_a + 0.5 * std::log(n) - 2.0 * (p * beta + c) * n)});
    }
  const auto fit = fit_gap_bound(scan);
  EXPECT_NEAR(fit.log_a, log_a, 1e-6);
  EXPECT_NEAR(fit.c_regression, c, 1e-6);
  EXPECT_NEAR(fit.p, p, 1e-6);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_LT(fit.calibration_shift, 1e-9);
  for (const auto& s : scan.samples) EXPECT_LE(gap_bound(fit, s.beta, s.n), s.gap);
}

TEST(GapFit, CalibratedBoundLiesBelowData) {
  const auto scan = gap_scan({1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5}, {4, 5, 6, 7});
  const auto fit = fit_gap_bound(scan, 1.0, 2.5);
  EXPECT_GT(fit.calibration_shift, 0.0);
  for (double r : fit.residuals) EXPECT_GE(r, 0.0);
  for (const auto& s : scan.samples) EXPECT_LE(gap_bound(fit, s.beta, s.n), s.gap);
  EXPECT_GT(log_gap_linearity(scan, 5, 1.0, 2.5), 0.999);
}

TEST(GapFit, Underdetermined) {
  const auto few_n = gap_scan({1, 1.5, 2, 2.5, 3}, {4, 5});
  EXPECT_THROW(fit_gap_bound(few_n), std::invalid_argument);
  const auto few_beta = gap_scan({1, 2, 3}, {4, 5, 6});
  EXPECT_THROW(fit_gap_bound(few_beta), std::invalid_argument);
}

namespace {
struct Fit {
  double p = 0.315, c = -0.587, a = std::exp(-7.67);
  int n = 4;
};
}  // namespace

TEST(Delta, ConstantBetaGivesZero) {
  const Fit f;
  const auto d = delta_integral(Schedule::constant(2.0, 100.0, 2.0), f.a, f.c, f.p, f.n, 0.0, 100.0);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_EQ(d.verdict, DeltaVerdict::Convergent);
}

TEST(Delta, GemanMatchesClosedFormTail) {
  const Fit f;
  for (double eps : {0.3, 0.5, 0.8}) {
    const double b = 0.05, t0 = 2.0;
    const auto g = make_geman_params(f.p, f.n, eps, b, f.c, f.a);
    const auto s = Schedule::geman(g, 10.0, 1e4);
    const auto finite = delta_integral(s, f.a, f.c, f.p, f.n, t0, 1e6, {.tail = false});
    const double exact_finite = b * b * (std::pow(t0, -eps) - std::pow(1e6, -eps)) / eps;
    EXPECT_NEAR(finite.value / exact_finite, 1.0, 1e-9) << eps;
    const auto full = delta_integral(s, f.a, f.c, f.p, f.n, t0, 1e6);
    EXPECT_TRUE(full.tail_applied);
    EXPECT_NEAR(full.tail_exponent, -1.0 - eps, 1e-6);
    EXPECT_NEAR(full.value / (b * b * std::pow(t0, -eps) / eps), 1.0, 1e-9) << eps;
  }
}

TEST(Delta, LinearRampDiverges) {
  const Fit f;
  DeltaVerdict last = DeltaVerdict::Convergent;
  double previous = 0.0;
  for (double horizon : {10.0, 100.0, 1000.0, 1e4}) {
    // beta = t / 10: beta(T) grows with T
    const auto s = Schedule::linear(0.0, horizon / 10.0, horizon, 1e9);
    const auto d = delta_integral(s, f.a, f.c, f.p, f.n, 0.0, horizon);
    // a divergent run stops early, so only values before that are comparable
    if (last != DeltaVerdict::Divergent) EXPECT_GE(d.value, previous);
    previous = d.value;
    last = d.verdict;
  }
  EXPECT_EQ(last, DeltaVerdict::Divergent);
}

TEST(Delta, ShrinkingBNeverWorsensVerdict) {
  const Fit f;
  int worst = 0;
  for (double b : {5.0, 1.0, 0.3, 0.1, 0.03}) {
    const auto s = Schedule::geman(make_geman_params(f.p, f.n, 0.5, b, f.c, f.a), 1.0, 1e4);
    const auto d = delta_integral(s, f.a, f.c, f.p, f.n, 1.0, 1e5);
    const int rank = d.verdict == DeltaVerdict::Divergent ? 0 : d.verdict == DeltaVerdict::NotSmall ? 1 : 2;
    EXPECT_GE(rank, worst) << b;
    worst = rank;
    EXPECT_GE(d.value, 0.0);
  }
  EXPECT_EQ(worst, 2);
}

TEST(Delta, RejectsBadRanges) {
  const Fit f;
  const auto g = Schedule::geman(make_geman_params(f.p, f.n, 0.5, 0.5, f.c, f.a), 1.0, 1e4);
  EXPECT_THROW(delta_integral(g, f.a, f.c, f.p, f.n, 0.0, 10.0), std::invalid_argument);
  const auto lin = Schedule::linear(0.0, 1.0, 10.0, 1.0);
  EXPECT_THROW(delta_integral(lin, f.a, f.c, f.p, f.n, 0.0, 20.0), std::invalid_argument);
}

TEST(Dichotomy, ControlRowAndFrozenQuench) {
  const auto model = IsingModel::periodic_chain(4, 1.0, 0.1);
  const auto fast = Schedule::exponential_quench({0.0, 12.0, 1e-4}, 1.0, 12.0);
  const Fit f;
  const auto slow = Schedule::geman(make_geman_params(f.p, 4, 0.5, 0.5, f.c, f.a), 1.0, 12.0);
  DichotomyOptions o;
  o.constant_beta = 1.5;
  const auto r = dichotomy_experiment(model, fast, slow, {1e-3, 1e-2}, o);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.p_constant, r.constant_target, 1e-9);
    // horizon too short for any flips: ground weight stays at its start
    EXPECT_NEAR(row.p_fast, r.initial_ground, 0.02 * row.horizon / 1e-3);
  }
  EXPECT_NEAR(r.initial_ground, 2.0 / 16.0 * 0.5, 1e-12);
  EXPECT_GT(r.capped_equilibrium, 0.999);
  EXPECT_THROW(dichotomy_experiment(model, fast, slow, {10.0, 5.0}), std::invalid_argument);
}
