#include <cmath>

#include <gtest/gtest.h>

#include "annealab/schedule.hpp"

using namespace annealab;

TEST(Schedule, LinearRampInScaledTime) {
  const auto s = Schedule::linear(0.2, 3.0, 50.0, 10.0);
  EXPECT_DOUBLE_EQ(s.beta(0.0), 0.2);
  EXPECT_DOUBLE_EQ(s.beta(1.0), 3.0);
  EXPECT_NEAR(s.beta(0.25), 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(s.beta_dot(0.5), 2.8);
  // original time carries the 1/tau
  EXPECT_NEAR(s.beta_rate_at_time(10.0), 2.8 / 50.0, 1e-17);
  EXPECT_NEAR(s.beta_at_time(25.0), s.beta(0.5), 1e-15);
  EXPECT_THROW(s.beta(1.5), std::domain_error);
  EXPECT_THROW(s.beta_at_time(51.0), std::domain_error);
  const auto longer = s.with_tau(200.0);
  EXPECT_DOUBLE_EQ(longer.beta(0.5), s.beta(0.5));
  EXPECT_DOUBLE_EQ(longer.tau(), 200.0);
}

TEST(Schedule, CapFreezesBetaAndRate) {
  const auto s = Schedule::linear(0.0, 4.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(s.beta(0.75), 2.0);
  EXPECT_DOUBLE_EQ(s.beta_dot(0.75), 0.0);
  EXPECT_DOUBLE_EQ(s.beta_dot(0.25), 4.0);
  // ramp ending exactly at the cap keeps its slope at s = 1
  EXPECT_DOUBLE_EQ(Schedule::linear(0.0, 2.0, 1.0, 2.0).beta_dot(1.0), 2.0);
}

TEST(Schedule, ConstantHasZeroRate) {
  const auto s = Schedule::constant(1.5, 10.0, 5.0);
  for (double x : {0.0, 0.3, 1.0}) {
    EXPECT_DOUBLE_EQ(s.beta(x), 1.5);
    EXPECT_DOUBLE_EQ(s.beta_dot(x), 0.0);
  }
  EXPECT_DOUBLE_EQ(s.beta_at_time(1e6), 1.5);
}

TEST(Schedule, ExponentialQuench) {
  const auto s = Schedule::exponential_quench({0.0, 12.0, 1.0}, 100.0, 12.0);
  EXPECT_DOUBLE_EQ(s.beta(0.0), 0.0);
  EXPECT_NEAR(s.beta_at_time(1.0), 12.0 * (1.0 - std::exp(-1.0)), 1e-13);
  EXPECT_NEAR(s.beta_rate_at_time(2.0), 12.0 * std::exp(-2.0), 1e-13);
  EXPECT_NEAR(s.beta_dot(0.02), 100.0 * 12.0 * std::exp(-2.0), 1e-10);
  EXPECT_TRUE(s.defined_beyond_horizon());
}

TEST(Schedule, SampledInterpolation) {
  const auto s = Schedule::sampled({{0.0, 0.5, 1.0}, {0.0, 1.0, 3.0}}, 10.0, 10.0);
  EXPECT_DOUBLE_EQ(s.beta(0.25), 0.5);
  EXPECT_DOUBLE_EQ(s.beta(0.75), 2.0);
  EXPECT_DOUBLE_EQ(s.beta_dot(0.75), 4.0);
  EXPECT_THROW(Schedule::sampled({{0.0, 1.0}, {1.0, 0.5}}, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(Schedule::sampled({{0.1, 1.0}, {0.0, 0.5}}, 1.0, 2.0), std::invalid_argument);
}

TEST(Geman, DefaultConstantStartsAtZero) {
  const auto g = make_geman_params(0.3, 4, 0.5, 0.5, -0.6, std::exp(-7.7));
  EXPECT_NEAR(geman_beta_of_t(g, 0.0), 0.0, 1e-14);
  EXPECT_TRUE(std::isinf(geman_beta_rate_of_t(g, 0.0)));
  EXPECT_NEAR(geman_log_slope(g), 0.25 / (0.3 * 4), 1e-15);
}

// Rate checked against a Richardson-extrapolated centered difference and the
// defining ODE evaluated term by term.
TEST(Geman, RateAndOdeFromClosedForm) {
  const double p = 0.3, a = std::exp(-7.7), c = -0.6, eps = 0.5, b = 0.5;
  const int n = 4;
  const auto g = make_geman_params(p, n, eps, b, c, a);
  for (double t : {0.5, 3.0, 40.0, 1e3, 1e5}) {
    const double h = 1e-3 * t;
    const auto d = [&](double step) {
      return (geman_beta_of_t(g, t + step) - geman_beta_of_t(g, t - step)) / (2 * step);
    };
    const double fd = (4.0 * d(h / 2) - d(h)) / 3.0;
    const double rate = geman_beta_rate_of_t(g, t);
    EXPECT_NEAR(rate, fd, 1e-8 * std::abs(rate)) << t;
    const double lhs = 4.0 * std::exp(2 * c * n) * p * p * n * n / (a * std::sqrt(double(n))) *
                       rate * rate * std::exp(2 * geman_beta_of_t(g, t) * p * n);
    const double rhs = b * b * std::pow(t, -1.0 - eps);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << t;
  }
}

TEST(Geman, RejectsBadParameters) {
  EXPECT_THROW(make_geman_params(0.3, 4, 1.0, 0.5, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_geman_params(0.3, 4, 0.5, 0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_geman_params(-1.0, 4, 0.5, 0.5, 0.0, 1.0), std::invalid_argument);
  auto g = make_geman_params(0.3, 4, 0.5, 0.5, 0.0, 1.0);
  g.c_prime *= 0.5;  // beta(0) < 0
  EXPECT_THROW(Schedule::geman(g, 10.0, 12.0), std::invalid_argument);
}

TEST(Geman, ScheduleUsesOriginalTime) {
  const auto g = make_geman_params(0.3, 4, 0.5, 0.5, -0.6, std::exp(-7.7));
  const auto s = Schedule::geman(g, 1000.0, 50.0);
  EXPECT_DOUBLE_EQ(s.beta(0.5), geman_beta_of_t(g, 500.0));
  EXPECT_NEAR(s.beta_dot(0.5), 1000.0 * geman_beta_rate_of_t(g, 500.0), 1e-12);
  EXPECT_DOUBLE_EQ(s.beta_at_time(5e4), geman_beta_of_t(g, 5e4));
}
