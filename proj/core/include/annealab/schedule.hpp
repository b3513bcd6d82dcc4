#pragma once

#include <string_view>
#include <variant>
#include <vector>

namespace annealab {

// Parameters of the logarithmic family obtained by integrating
//   (4 e^{2cN} p^2 N^2 / (a sqrt N)) (dbeta/dt)^2 e^{2 beta p N} = b^2 t^{-1-eps}
// in closed form:
//   beta p N = -cN + log(a sqrt N)/2 - log 2 + log(2b/(1-eps) t^{(1-eps)/2} + c').
// The time variable t is the original (unscaled) time.
struct GemanParams {
  double p = 1.0;
  int n = 1;
  double epsilon = 0.5;
  double b = 1.0;
  double c_prime = 0.0;
  double c = 0.0;
  double a = 1.0;
};

// c' such that beta(t = 0) = 0.
double geman_default_c_prime(double p, int n, double c, double a);
GemanParams make_geman_params(double p, int n, double epsilon, double b, double c, double a);

// Throws std::invalid_argument when eps is outside (0,1), b <= 0, or the
// log argument is nonpositive at t.
double geman_beta_of_t(const GemanParams& params, double t);
double geman_beta_rate_of_t(const GemanParams& params, double t);  // dbeta/dt
// Asymptotic slope of beta against log t.
double geman_log_slope(const GemanParams& params);

struct LinearRamp {
  double beta_start = 0.0;
  double beta_end = 1.0;
};

struct ConstantBeta {
  double beta = 0.0;
};

// beta(t) = target - (target - start) e^{-t / time_constant} in original time.
struct ExponentialQuench {
  double beta_start = 0.0;
  double beta_target = 1.0;
  double time_constant = 1.0;
};

// Piecewise-linear interpolation of (s, beta) samples; s must start at 0,
// end at 1 and increase strictly, beta must be nondecreasing.
struct SampledBeta {
  std::vector<double> s;
  std::vector<double> beta;
};

enum class ScheduleKind { Linear, Constant, Geman, ExponentialQuench, Sampled };

std::string_view to_string(ScheduleKind kind);

// Inverse-temperature protocol on scaled time s = t / tau in [0, 1].
// beta_dot() is d beta / d s; the *_at_time() accessors work in original
// time t and are the only place where the factor tau enters.
class Schedule {
 public:
  static Schedule linear(double beta_start, double beta_end, double tau, double beta_max);
  static Schedule constant(double beta, double tau, double beta_max);
  static Schedule geman(const GemanParams& params, double tau, double beta_max);
  static Schedule exponential_quench(const ExponentialQuench& params, double tau,
                                     double beta_max);
  static Schedule sampled(SampledBeta samples, double tau, double beta_max);

  ScheduleKind kind() const;
  double tau() const { return tau_; }
  double beta_max() const { return beta_max_; }

  // Same protocol in original time with a different horizon. For Linear and
  // Sampled the shape is defined in s, so it stretches with tau.
  Schedule with_tau(double tau) const;

  // Throw std::domain_error for s outside [0, 1].
  double beta(double s) const;
  double beta_dot(double s) const;

  // t in [0, tau] for s-native kinds; any t >= 0 for time-native kinds
  // (Constant, Geman, ExponentialQuench).
  double beta_at_time(double t) const;
  double beta_rate_at_time(double t) const;  // d beta / d t
  bool defined_beyond_horizon() const;

  const std::variant<LinearRamp, ConstantBeta, GemanParams, ExponentialQuench, SampledBeta>&
  parameters() const {
    return params_;
  }

 private:
  using Params =
      std::variant<LinearRamp, ConstantBeta, GemanParams, ExponentialQuench, SampledBeta>;
  Schedule(Params params, double tau, double beta_max);

  // Uncapped profile; s-native kinds read s, time-native kinds read t.
  double raw_beta(double s, double t) const;
  double raw_rate(double s, double t) const;  // d beta / d t

  Params params_;
  double tau_;
  double beta_max_;
};

}  // namespace annealab
