#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "annealab/stats.hpp"

using namespace annealab;

TEST(Stats, LineFit) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Stats, PowerLaw) {
  std::vector<double> x, y;
  for (double t : {50.0, 100.0, 200.0, 400.0}) {
    x.push_back(t);
    y.push_back(3.0 * std::pow(t, -2.0));
  }
  const auto f = fit_power_law(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
  y[0] = -1.0;
  EXPECT_THROW(fit_power_law(x, y), std::invalid_argument);
}

TEST(Stats, SimpsonDoublingReusesNodes) {
  int calls = 0;
  const auto r = simpson_doubling(
      [&](double t) {
        ++calls;
        return std::exp(t);
      },
      0.0, 1.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-12);
  EXPECT_EQ(calls, r.intervals + 1);
  EXPECT_EQ(static_cast<int>(r.nodes.size()), r.intervals + 1);
}
