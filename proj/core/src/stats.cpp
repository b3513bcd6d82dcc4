#include "annealab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace annealab {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return fit;
}

LinearFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: inputs must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

SimpsonResult simpson_doubling(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, int initial_intervals, int max_intervals) {
  if (initial_intervals < 2 || initial_intervals % 2 != 0)
    throw std::invalid_argument("simpson_doubling: initial_intervals must be even and >= 2");
  int n = initial_intervals;
  const auto node = [&](int i, int intervals) {
    return i == intervals ? b : a + (b - a) * static_cast<double>(i) / intervals;
  };
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) values[static_cast<std::size_t>(i)] = f(node(i, n));

  const auto estimate = [&](const std::vector<double>& v, int intervals) {
    double sum = v.front() + v.back();
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * v[static_cast<std::size_t>(i)];
    return sum * (b - a) / (3.0 * intervals);
  };

  SimpsonResult result;
  double previous = estimate(values, n);
  while (true) {
    if (2 * n > max_intervals) {
      result.value = previous;
      result.intervals = n;
      result.converged = false;
      break;
    }
    std::vector<double> refined(static_cast<std::size_t>(2 * n) + 1);
    for (int i = 0; i <= n; ++i) refined[static_cast<std::size_t>(2 * i)] = values[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i)
      refined[static_cast<std::size_t>(2 * i + 1)] = f(node(2 * i + 1, 2 * n));
    n *= 2;
    values = std::move(refined);
    const double current = estimate(values, n);
    const double change = std::abs(current - previous) / std::max(std::abs(current), 1e-300);
    previous = current;
    result.relative_change = change;
    if (change < rel_tol) {
      result.value = current;
      result.intervals = n;
      result.converged = true;
      break;
    }
  }
  result.samples = values;
  for (int i = 0; i <= result.intervals; ++i) result.nodes.push_back(node(i, result.intervals));
  return result;
}

}  // namespace annealab
