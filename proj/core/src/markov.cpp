#include "annealab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "annealab/error.hpp"

namespace annealab {

std::string_view to_string(RateFamily family) {
  return family == RateFamily::Glauber ? "glauber" : "metropolis";
}

RateFamily rate_family_from_string(std::string_view name) {
  if (name == "glauber" || name == "heat-bath") return RateFamily::Glauber;
  if (name == "metropolis") return RateFamily::Metropolis;
  throw std::invalid_argument("unknown rate family '" + std::string(name) + "'");
}

double flip_rate(RateFamily family, double x) {
  if (family == RateFamily::Metropolis) return x <= 0.0 ? 1.0 : std::exp(-x);
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd generator, double beta, RateFamily family)
    : generator_(std::move(generator)), beta_(beta), family_(family) {}

double TransitionMatrix::max_column_sum() const {
  return generator_.colwise().sum().cwiseAbs().maxCoeff();
}

double TransitionMatrix::max_escape_rate() const {
  return generator_.diagonal().cwiseAbs().maxCoeff();
}

double TransitionMatrix::detailed_balance_residual(const Eigen::VectorXd& h0) const {
  const Eigen::VectorXd weight = (-beta_ * h0.array()).exp();
  double worst = 0.0;
  for (Eigen::Index b = 0; b < generator_.cols(); ++b)
    for (Eigen::Index a = 0; a < b; ++a)
      worst = std::max(worst, std::abs(generator_(a, b) * weight[b] - generator_(b, a) * weight[a]));
  return worst;
}

TransitionMatrix build_generator(const IsingModel& model, double beta, RateFamily family) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("inverse temperature must be finite and >= 0");
  const auto& h0 = model.h0_diagonal();
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index from = 0; from < dim; ++from) {
    double escape = 0.0;
    for (int j = 0; j < model.n_spins(); ++j) {
      const Eigen::Index to = from ^ (Eigen::Index{1} << j);
      const double rate = flip_rate(family, beta * (h0[to] - h0[from]));
      w(to, from) = rate;
      escape += rate;
    }
    w(from, from) = -escape;
  }
  return TransitionMatrix(std::move(w), beta, family);
}

TransitionMatrix build_glauber(const IsingModel& model, double beta) {
  return build_generator(model, beta, RateFamily::Glauber);
}

TransitionMatrix build_metropolis(const IsingModel& model, double beta) {
  return build_generator(model, beta, RateFamily::Metropolis);
}

Eigen::VectorXd gibbs(const Eigen::VectorXd& h0, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("inverse temperature must be >= 0");
  Eigen::VectorXd weight = (-beta * h0.array()).exp();
  return weight / weight.sum();
}

Eigen::VectorXd gibbs(const IsingModel& model, double beta) {
  return gibbs(model.h0_diagonal(), beta);
}

void apply_generator(const IsingModel& model, double beta, RateFamily family,
                     const Eigen::VectorXd& p, Eigen::VectorXd& out) {
  const auto& h0 = model.h0_diagonal();
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  out.setZero(dim);
  for (Eigen::Index from = 0; from < dim; ++from) {
    const double mass = p[from];
    double escape = 0.0;
    for (int j = 0; j < model.n_spins(); ++j) {
      const Eigen::Index to = from ^ (Eigen::Index{1} << j);
      const double rate = flip_rate(family, beta * (h0[to] - h0[from]));
      out[to] += rate * mass;
      escape += rate;
    }
    out[from] -= escape * mass;
  }
}

double max_escape_rate(const IsingModel& model, double beta, RateFamily family) {
  const auto& h0 = model.h0_diagonal();
  double worst = 0.0;
  for (Eigen::Index from = 0; from < h0.size(); ++from) {
    double escape = 0.0;
    for (int j = 0; j < model.n_spins(); ++j)
      escape += flip_rate(family, beta * (h0[from ^ (Eigen::Index{1} << j)] - h0[from]));
    worst = std::max(worst, escape);
  }
  return worst;
}

void validate_probability(const Eigen::VectorXd& p, double mass_tolerance) {
  if (!p.allFinite()) throw NumericError("probability vector has non-finite entries");
  if (p.minCoeff() < -kProbabilityNegativeTolerance)
    throw NumericError(fmt::format("probability entry {:.3e} below tolerance", p.minCoeff()));
  if (std::abs(p.sum() - 1.0) > mass_tolerance)
    throw NumericError(fmt::format("probability mass {:.17g} is not 1", p.sum()));
}

Eigen::VectorXd clamp_probability(const Eigen::VectorXd& p) { return p.cwiseMax(0.0); }

int default_master_steps(double tau) {
  return std::max(2000, static_cast<int>(std::ceil(20.0 * tau)));
}

Trajectory integrate_master(const IsingModel& model, const Schedule& schedule,
                            const MasterOptions& options) {
  const double tau = schedule.tau();
  const int steps = options.steps > 0 ? options.steps : default_master_steps(tau);
  const int store_every = options.store_every > 0 ? options.store_every : std::max(1, steps / 100);
  const double ds = 1.0 / steps;

  double norm = 0.0;
  constexpr int kGuardSamples = 65;
  for (int k = 0; k < kGuardSamples; ++k) {
    const double s = static_cast<double>(k) / (kGuardSamples - 1);
    norm = std::max(norm, max_escape_rate(model, schedule.beta(s), options.family));
  }
  if (tau * norm * ds >= 0.5)
    throw NumericError(fmt::format(
        "master equation stability guard: tau*||W||*ds = {:.4g} >= 0.5 (steps = {}, need > {})",
        tau * norm * ds, steps, static_cast<long long>(std::ceil(2.0 * tau * norm))));

  Eigen::VectorXd p = options.initial ? *options.initial : gibbs(model, schedule.beta(0.0));
  if (p.size() != static_cast<Eigen::Index>(model.dimension()))
    throw std::invalid_argument("initial probability vector has the wrong dimension");

  Trajectory trajectory;
  trajectory.s.push_back(0.0);
  trajectory.states.push_back(p);

  const auto rhs = [&](double s, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    apply_generator(model, schedule.beta(std::min(s, 1.0)), options.family, x, out);
    out *= tau;
  };

  Eigen::VectorXd k1, k2, k3, k4, tmp;
  for (int step = 0; step < steps; ++step) {
    const double s = step * ds;
    rhs(s, p, k1);
    tmp = p + 0.5 * ds * k1;
    rhs(s + 0.5 * ds, tmp, k2);
    tmp = p + 0.5 * ds * k2;
    rhs(s + 0.5 * ds, tmp, k3);
    tmp = p + ds * k3;
    rhs((step + 1 == steps) ? 1.0 : s + ds, tmp, k4);
    p += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!p.allFinite())
      throw NumericError(fmt::format("master equation produced NaN/Inf at s = {:.6g}", s + ds));
    if ((step + 1) % store_every == 0 || step + 1 == steps) {
      const double s_next = (step + 1 == steps) ? 1.0 : (step + 1) * ds;
      validate_probability(p, 1e-9);
      trajectory.s.push_back(s_next);
      trajectory.states.push_back(p);
    }
  }
  return trajectory;
}

void write_trajectory_csv(std::ostream& out, const IsingModel& model, const Schedule& schedule,
                          const Trajectory& trajectory) {
  const auto ground = ground_states(model);
  const bool full = model.n_spins() <= 6;
  out << "s";
  if (full) {
    for (std::size_t i = 0; i < model.dimension(); ++i) out << ",P_" << i;
  } else {
    out << ",P_ground,total,tv_distance_gibbs";
  }
  out << '\n';
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const Eigen::VectorXd p = clamp_probability(trajectory.states[k]);
    out << fmt::format("{:.17g}", trajectory.s[k]);
    if (full) {
      for (Eigen::Index i = 0; i < p.size(); ++i) out << fmt::format(",{:.17g}", p[i]);
    } else {
      double pg = 0.0;
      for (const auto& g : ground.configurations) pg += p[static_cast<Eigen::Index>(g.index())];
      const double tv =
          0.5 * (p - gibbs(model, schedule.beta(trajectory.s[k]))).cwiseAbs().sum();
      out << fmt::format(",{:.17g},{:.17g},{:.17g}", pg, trajectory.states[k].sum(), tv);
    }
    out << '\n';
  }
}

}  // namespace annealab
