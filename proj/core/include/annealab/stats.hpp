#pragma once

#include <functional>
#include <span>
#include <vector>

namespace annealab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope x. Needs >= 2 points; the
// standard error needs >= 3.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);
// Fit of log y against log x; all inputs must be positive.
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct SimpsonResult {
  double value = 0.0;
  int intervals = 0;
  double relative_change = 0.0;
  bool converged = false;
  std::vector<double> nodes;
  std::vector<double> samples;
};

// Composite Simpson on [a, b], doubling the number of intervals (starting
// at `initial_intervals`, even) until successive estimates differ by less than
// rel_tol relative. Every node is evaluated once; doubling only adds the new
// midpoints.
SimpsonResult simpson_doubling(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, int initial_intervals = 16,
                               int max_intervals = 1 << 14);

}  // namespace annealab
