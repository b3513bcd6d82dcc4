#include "annealab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace annealab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_scaled_time(double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::domain_error("scaled time s = " + std::to_string(s) + " outside [0, 1]");
}

void check_geman(const GemanParams& g) {
  if (!(g.epsilon > 0.0 && g.epsilon < 1.0))
    throw std::invalid_argument("geman: epsilon must lie in (0, 1)");
  if (!(g.b > 0.0)) throw std::invalid_argument("geman: b must be positive");
  if (!(g.p > 0.0)) throw std::invalid_argument("geman: p must be positive");
  if (g.n < 1) throw std::invalid_argument("geman: N must be >= 1");
  if (!(g.a > 0.0)) throw std::invalid_argument("geman: a must be positive");
  if (!(g.c_prime > 0.0))
    throw std::invalid_argument("geman: c' must keep the log argument positive at t = 0");
}

double clamp_time(double t) { return t < 0.0 ? 0.0 : t; }

}  // namespace

double geman_default_c_prime(double p, int n, double c, double a) {
  (void)p;
  const double big_n = static_cast<double>(n);
  return 2.0 * std::exp(c * big_n) / std::sqrt(a * std::sqrt(big_n));
}

GemanParams make_geman_params(double p, int n, double epsilon, double b, double c, double a) {
  GemanParams g{p, n, epsilon, b, geman_default_c_prime(p, n, c, a), c, a};
  check_geman(g);
  return g;
}

double geman_beta_of_t(const GemanParams& g, double t) {
  if (t < 0.0) throw std::invalid_argument("geman: t must be >= 0");
  const double big_n = static_cast<double>(g.n);
  const double exponent = 0.5 * (1.0 - g.epsilon);
  const double argument = 2.0 * g.b / (1.0 - g.epsilon) * std::pow(t, exponent) + g.c_prime;
  if (!(argument > 0.0)) throw std::invalid_argument("geman: log argument is nonpositive");
  const double rhs = -g.c * big_n + 0.5 * std::log(g.a * std::sqrt(big_n)) - std::log(2.0) +
                     std::log(argument);
  return rhs / (g.p * big_n);
}

double geman_beta_rate_of_t(const GemanParams& g, double t) {
  if (t < 0.0) throw std::invalid_argument("geman: t must be >= 0");
  const double big_n = static_cast<double>(g.n);
  const double exponent = 0.5 * (1.0 - g.epsilon);
  const double k = 2.0 * g.b / (1.0 - g.epsilon);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  const double power = std::pow(t, exponent);
  const double argument = k * power + g.c_prime;
  if (!(argument > 0.0)) throw std::invalid_argument("geman: log argument is nonpositive");
  return k * exponent * power / t / (argument * g.p * big_n);
}

double geman_log_slope(const GemanParams& g) {
  return (1.0 - g.epsilon) / (2.0 * g.p * static_cast<double>(g.n));
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Linear: return "linear";
    case ScheduleKind::Constant: return "constant";
    case ScheduleKind::Geman: return "geman";
    case ScheduleKind::ExponentialQuench: return "exponential-quench";
    case ScheduleKind::Sampled: return "sampled";
  }
  return "linear";
}

Schedule::Schedule(Params params, double tau, double beta_max)
    : params_(std::move(params)), tau_(tau), beta_max_(beta_max) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw std::invalid_argument("tau must be positive");
  if (!(beta_max_ >= 0.0) || !std::isfinite(beta_max_))
    throw std::invalid_argument("beta_max must be finite and >= 0");
}

Schedule Schedule::linear(double beta_start, double beta_end, double tau, double beta_max) {
  if (!(beta_start >= 0.0) || !(beta_end >= beta_start))
    throw std::invalid_argument("linear: need 0 <= beta_start <= beta_end");
  return Schedule(LinearRamp{beta_start, beta_end}, tau, beta_max);
}

Schedule Schedule::constant(double beta, double tau, double beta_max) {
  if (!(beta >= 0.0)) throw std::invalid_argument("constant: beta must be >= 0");
  return Schedule(ConstantBeta{beta}, tau, beta_max);
}

Schedule Schedule::geman(const GemanParams& params, double tau, double beta_max) {
  check_geman(params);
  if (geman_beta_of_t(params, 0.0) < -1e-12)
    throw std::invalid_argument("geman: c' gives beta(0) < 0");
  return Schedule(params, tau, beta_max);
}

Schedule Schedule::exponential_quench(const ExponentialQuench& params, double tau,
                                      double beta_max) {
  if (!(params.beta_start >= 0.0) || !(params.beta_target >= params.beta_start))
    throw std::invalid_argument("exponential-quench: need 0 <= beta_start <= beta_target");
  if (!(params.time_constant > 0.0))
    throw std::invalid_argument("exponential-quench: time_constant must be positive");
  return Schedule(params, tau, beta_max);
}

Schedule Schedule::sampled(SampledBeta samples, double tau, double beta_max) {
  const auto& s = samples.s;
  const auto& b = samples.beta;
  if (s.size() < 2 || s.size() != b.size())
    throw std::invalid_argument("sampled: need matching s and beta lists with >= 2 points");
  if (s.front() != 0.0 || s.back() != 1.0)
    throw std::invalid_argument("sampled: s must start at 0 and end at 1");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw std::invalid_argument("sampled: s must increase strictly");
    if (b[i] < b[i - 1]) throw std::invalid_argument("sampled: beta must be nondecreasing");
  }
  if (b.front() < 0.0) throw std::invalid_argument("sampled: beta must be >= 0");
  return Schedule(std::move(samples), tau, beta_max);
}

ScheduleKind Schedule::kind() const {
  return std::visit(Overloaded{
                        [](const LinearRamp&) { return ScheduleKind::Linear; },
                        [](const ConstantBeta&) { return ScheduleKind::Constant; },
                        [](const GemanParams&) { return ScheduleKind::Geman; },
                        [](const ExponentialQuench&) { return ScheduleKind::ExponentialQuench; },
                        [](const SampledBeta&) { return ScheduleKind::Sampled; },
                    },
                    params_);
}

Schedule Schedule::with_tau(double tau) const { return Schedule(params_, tau, beta_max_); }

bool Schedule::defined_beyond_horizon() const {
  const auto k = kind();
  return k == ScheduleKind::Constant || k == ScheduleKind::Geman ||
         k == ScheduleKind::ExponentialQuench;
}

double Schedule::raw_beta(double s, double t) const {
  return std::visit(
      Overloaded{
          [&](const LinearRamp& r) { return r.beta_start + (r.beta_end - r.beta_start) * s; },
          [](const ConstantBeta& c) { return c.beta; },
          [&](const GemanParams& g) { return geman_beta_of_t(g, clamp_time(t)); },
          [&](const ExponentialQuench& q) {
            return q.beta_target - (q.beta_target - q.beta_start) * std::exp(-t / q.time_constant);
          },
          [&](const SampledBeta& sb) {
            const auto it = std::upper_bound(sb.s.begin(), sb.s.end(), s);
            if (it == sb.s.end()) return sb.beta.back();
            const auto hi = static_cast<std::size_t>(it - sb.s.begin());
            const std::size_t lo = hi - 1;
            const double w = (s - sb.s[lo]) / (sb.s[hi] - sb.s[lo]);
            return sb.beta[lo] + w * (sb.beta[hi] - sb.beta[lo]);
          },
      },
      params_);
}

double Schedule::raw_rate(double s, double t) const {
  return std::visit(
      Overloaded{
          [&](const LinearRamp& r) { return (r.beta_end - r.beta_start) / tau_; },
          [](const ConstantBeta&) { return 0.0; },
          [&](const GemanParams& g) { return geman_beta_rate_of_t(g, clamp_time(t)); },
          [&](const ExponentialQuench& q) {
            return (q.beta_target - q.beta_start) / q.time_constant *
                   std::exp(-t / q.time_constant);
          },
          [&](const SampledBeta& sb) {
            auto it = std::upper_bound(sb.s.begin(), sb.s.end(), s);
            if (it == sb.s.end()) --it;
            const auto hi = static_cast<std::size_t>(it - sb.s.begin());
            const std::size_t lo = hi - 1;
            return (sb.beta[hi] - sb.beta[lo]) / (sb.s[hi] - sb.s[lo]) / tau_;
          },
      },
      params_);
}

double Schedule::beta_at_time(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("time t must be >= 0");
  if (!defined_beyond_horizon() && t > tau_ * (1.0 + 1e-15))
    throw std::domain_error("time t = " + std::to_string(t) + " beyond the horizon tau");
  return std::min(raw_beta(t / tau_, t), beta_max_);
}

double Schedule::beta_rate_at_time(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("time t must be >= 0");
  if (!defined_beyond_horizon() && t > tau_ * (1.0 + 1e-15))
    throw std::domain_error("time t = " + std::to_string(t) + " beyond the horizon tau");
  if (raw_beta(t / tau_, t) > beta_max_) return 0.0;
  return raw_rate(t / tau_, t);
}

double Schedule::beta(double s) const {
  check_scaled_time(s);
  return std::min(raw_beta(s, s * tau_), beta_max_);
}

double Schedule::beta_dot(double s) const {
  check_scaled_time(s);
  const double t = s * tau_;
  if (raw_beta(s, t) > beta_max_) return 0.0;
  if (kind() == ScheduleKind::Linear) {
    const auto& r = std::get<LinearRamp>(params_);
    return r.beta_end - r.beta_start;
  }
  return tau_ * raw_rate(s, t);
}

}  // namespace annealab
