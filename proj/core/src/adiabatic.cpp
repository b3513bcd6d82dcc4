#include "annealab/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "annealab/error.hpp"
#include "annealab/parallel.hpp"

namespace annealab {
namespace {

double infinity_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

double h0_element(const SpectralData& spectral, const Eigen::VectorXd& h0, int j) {
  return spectral.vectors.col(j).dot(h0.cwiseProduct(spectral.vectors.col(0)));
}

}  // namespace

Trajectory integrate_imaginary_time(const HamiltonianSource& h, const Eigen::VectorXd& psi0,
                                    double tau, const ImaginaryTimeOptions& options) {
  if (!(tau > 0.0)) throw std::invalid_argument("integrate_imaginary_time: tau must be positive");
  if (!psi0.allFinite()) throw NumericError("integrate_imaginary_time: psi0 is not finite");
  const int steps = options.steps > 0 ? options.steps : default_master_steps(tau);
  const int store_every = options.store_every > 0 ? options.store_every : std::max(1, steps / 100);
  const double ds = 1.0 / steps;

  double norm = 0.0;
  constexpr int kGuardSamples = 65;
  for (int k = 0; k < kGuardSamples; ++k)
    norm = std::max(norm, infinity_norm(h(static_cast<double>(k) / (kGuardSamples - 1))));
  if (tau * norm * ds >= 0.5)
    throw NumericError(fmt::format(
        "imaginary-time stability guard: tau*||H||*ds = {:.4g} >= 0.5 (steps = {})",
        tau * norm * ds, steps));

  Trajectory trajectory;
  trajectory.s.push_back(0.0);
  trajectory.states.push_back(psi0);

  Eigen::VectorXd psi = psi0;
  Eigen::MatrixXd h_start = h(0.0);
  Eigen::VectorXd k1, k2, k3, k4;
  for (int step = 0; step < steps; ++step) {
    const double s = step * ds;
    const double s_end = (step + 1 == steps) ? 1.0 : (step + 1) * ds;
    const Eigen::MatrixXd h_mid = h(s + 0.5 * ds);
    Eigen::MatrixXd h_end = h(s_end);
    k1 = -tau * (h_start * psi);
    k2 = -tau * (h_mid * (psi + 0.5 * ds * k1));
    k3 = -tau * (h_mid * (psi + 0.5 * ds * k2));
    k4 = -tau * (h_end * (psi + ds * k3));
    psi += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!psi.allFinite())
      throw NumericError(fmt::format("imaginary-time flow produced NaN/Inf at s = {:.6g}", s_end));
    h_start = std::move(h_end);
    if ((step + 1) % store_every == 0 || step + 1 == steps) {
      trajectory.s.push_back(s_end);
      trajectory.states.push_back(psi);
    }
  }
  return trajectory;
}

InstantaneousCoefficients project_coefficients(const Trajectory& trajectory,
                                               const HamiltonianSource& h, int levels) {
  const auto points = static_cast<Eigen::Index>(trajectory.size());
  InstantaneousCoefficients out;
  out.s = trajectory.s;
  out.c.resize(points, levels);
  out.phase.resize(points, levels);
  out.norm.resize(points);
  SpectralData previous;
  Eigen::VectorXd previous_energy;
  for (Eigen::Index k = 0; k < points; ++k) {
    auto spectral = eigendecompose(h(trajectory.s[static_cast<std::size_t>(k)]));
    if (k > 0) track(previous, spectral);
    const auto& psi = trajectory.states[static_cast<std::size_t>(k)];
    const int shown = std::min<int>(levels, static_cast<int>(spectral.levels()));
    for (int j = 0; j < levels; ++j) {
      out.c(k, j) = j < shown ? spectral.vectors.col(j).dot(psi) : 0.0;
      if (k == 0) {
        out.phase(k, j) = 0.0;
      } else {
        const double ds = trajectory.s[static_cast<std::size_t>(k)] -
                          trajectory.s[static_cast<std::size_t>(k - 1)];
        const double e0 = j < shown ? previous_energy[j] : 0.0;
        const double e1 = j < shown ? spectral.values[j] : 0.0;
        out.phase(k, j) = out.phase(k - 1, j) + 0.5 * ds * (e0 + e1);
      }
    }
    out.norm[k] = psi.norm();
    previous_energy = spectral.values;
    previous = std::move(spectral);
  }
  return out;
}

Eigen::MatrixXd finite_difference_derivative(const HamiltonianSource& h, double s, double ds) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("finite difference: s outside [0, 1]");
  if (s - ds >= 0.0 && s + ds <= 1.0) return (h(s + ds) - h(s - ds)) / (2.0 * ds);
  if (s - ds < 0.0) return (-3.0 * h(s) + 4.0 * h(s + ds) - h(s + 2.0 * ds)) / (2.0 * ds);
  return (3.0 * h(s) - 4.0 * h(s - ds) + h(s - 2.0 * ds)) / (2.0 * ds);
}

Eigen::MatrixXd mapped_hamiltonian_derivative(const IsingModel& model, const Schedule& schedule,
                                              RateFamily family, double s) {
  const double beta = schedule.beta(s);
  const double beta_dot = schedule.beta_dot(s);
  const auto& h0 = model.h0_diagonal();
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index from = 0; from < dim; ++from) {
    double diagonal = 0.0;
    for (int j = 0; j < model.n_spins(); ++j) {
      const Eigen::Index to = from ^ (Eigen::Index{1} << j);
      const double delta = h0[to] - h0[from];
      const double rate = flip_rate(family, beta * delta);
      double rate_derivative = 0.0;
      double offdiagonal_derivative = 0.0;
      if (family == RateFamily::Glauber) {
        rate_derivative = -delta * rate * (1.0 - rate);
        const double x = 0.5 * beta * delta;
        offdiagonal_derivative = 0.25 * delta * std::tanh(x) / std::cosh(x);
      } else {
        rate_derivative = delta > 0.0 ? -delta * rate : 0.0;
        offdiagonal_derivative = 0.5 * std::abs(delta) * std::exp(-0.5 * beta * std::abs(delta));
      }
      diagonal += rate_derivative;
      d(to, from) = offdiagonal_derivative;
    }
    d(from, from) = diagonal;
  }
  return beta_dot * d;
}

LevelValue compute_A(const SpectralData& spectral, const Eigen::MatrixXd& dh, int j) {
  if (j <= 0 || j >= spectral.levels()) throw std::out_of_range("compute_A: level out of range");
  const double gap = spectral.values[j] - spectral.values[0];
  LevelValue out;
  out.degenerate = gap <= kDegeneracyFloor;
  const double element = spectral.vectors.col(j).dot(dh * spectral.vectors.col(0));
  out.value = out.degenerate ? 0.0 : element / (gap * gap);
  return out;
}

LevelValue compute_B(const SpectralData& spectral, const Eigen::MatrixXd& dh) {
  LevelValue out;
  const Eigen::VectorXd column = dh * spectral.vectors.col(0);
  for (Eigen::Index k = 1; k < spectral.levels(); ++k) {
    const double gap = spectral.values[k] - spectral.values[0];
    if (gap <= kDegeneracyFloor) {
      out.degenerate = true;
      continue;
    }
    const double element = spectral.vectors.col(k).dot(column);
    out.value += element * element / (gap * gap * gap);
  }
  return out;
}

LevelValue compute_B_SA(const SpectralData& spectral, const Eigen::VectorXd& h0,
                        double beta_dot) {
  LevelValue out;
  if (beta_dot == 0.0) return out;
  for (Eigen::Index j = 1; j < spectral.levels(); ++j) {
    const double energy = spectral.values[j];
    if (energy - spectral.values[0] <= kDegeneracyFloor) {
      out.degenerate = true;
      continue;
    }
    const double element = h0_element(spectral, h0, static_cast<int>(j));
    out.value += element * element / energy;
  }
  out.value *= 0.25 * beta_dot * beta_dot;
  return out;
}

double matrix_element_identity_residual(const SpectralData& spectral, const Eigen::VectorXd& h0,
                                        double beta_dot, const Eigen::MatrixXd& dh) {
  const Eigen::VectorXd column = dh * spectral.vectors.col(0);
  double worst = 0.0;
  for (Eigen::Index j = 1; j < spectral.levels(); ++j) {
    const double lhs = spectral.vectors.col(j).dot(column);
    const double rhs =
        0.5 * spectral.values[j] * beta_dot * h0_element(spectral, h0, static_cast<int>(j));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

GroundPrediction predict_ground_probability(double integral_b, double tau, double c0) {
  if (!(tau > 0.0)) throw std::invalid_argument("predict_ground_probability: tau must be positive");
  GroundPrediction out;
  out.value = c0 * (1.0 - integral_b / tau);
  out.valid = !(integral_b > 0.0) || tau > integral_b;
  return out;
}

double measure_ground_probability(const Eigen::VectorXd& p, const GroundSet& ground) {
  double total = 0.0;
  for (const auto& g : ground.configurations) total += p[static_cast<Eigen::Index>(g.index())];
  return total;
}

SimpsonResult integrate_b_sa(const IsingModel& model, const Schedule& schedule,
                             RateFamily family, double rel_tol) {
  const auto& h0 = model.h0_diagonal();
  const auto integrand = [&](double s) {
    const auto spectral = eigendecompose(mapped_hamiltonian_at(model, schedule, family, s));
    const auto b = compute_B_SA(spectral, h0, schedule.beta_dot(s));
    if (b.degenerate)
      throw DegeneracyError(fmt::format("B_SA: gap below {} at s = {:.6g}", kDegeneracyFloor, s));
    return b.value;
  };
  return simpson_doubling(integrand, 0.0, 1.0, rel_tol);
}

AdiabaticReport run_adiabatic_residual(const IsingModel& model, const Schedule& schedule,
                                       const std::vector<double>& taus,
                                       const AdiabaticOptions& options) {
  if (taus.empty()) throw std::invalid_argument("run_adiabatic_residual: empty tau list");
  const auto& h0 = model.h0_diagonal();
  // psi = e^{beta H0/2} P must stay representable up to beta(1).
  if (0.5 * schedule.beta(1.0) * h0.maxCoeff() > kMaxExponent)
    throw NumericError(fmt::format("beta(1) max(H0) / 2 = {:.4g} exceeds the exponent limit {}",
                                   0.5 * schedule.beta(1.0) * h0.maxCoeff(), kMaxExponent));
  const auto ground = ground_states(model);
  AdiabaticReport report;
  report.model_description = fmt::format("N={} topology={} degeneracy={}", model.n_spins(),
                                         to_string(model.topology()), ground.degeneracy());

  const auto quadrature = integrate_b_sa(model, schedule, options.family);
  report.integral_b = quadrature.value;
  report.quadrature_intervals = quadrature.intervals;
  report.quadrature_change = quadrature.relative_change;
  if (!quadrature.converged) report.warnings.push_back("int B_SA quadrature did not converge");

  const int points = std::max(2, options.sample_points);
  const int levels = std::min<int>(options.levels, static_cast<int>(model.dimension()));
  const HamiltonianSource hsa = [&](double s) {
    return mapped_hamiltonian_at(model, schedule, options.family, s);
  };
  report.a_samples.resize(points, std::max(0, levels - 1));
  double max_a1 = 0.0;
  SpectralData previous;
  for (int k = 0; k < points; ++k) {
    const double s = static_cast<double>(k) / (points - 1);
    auto spectral = eigendecompose(hsa(s));
    if (k > 0) track(previous, spectral);
    const Eigen::MatrixXd dh = finite_difference_derivative(hsa, s);
    for (int j = 1; j < levels; ++j) {
      const auto a = compute_A(spectral, dh, j);
      if (a.degenerate)
        report.warnings.push_back(fmt::format("A_{} flagged degenerate at s = {:.6g}", j, s));
      report.a_samples(k, j - 1) = a.value;
    }
    if (levels > 1) max_a1 = std::max(max_a1, std::abs(report.a_samples(k, 0)));
    report.s_grid.push_back(s);
    report.b_samples.push_back(compute_B_SA(spectral, h0, schedule.beta_dot(s)).value);
    previous = std::move(spectral);
  }

  report.samples.resize(taus.size());
  parallel_for(taus.size(), options.threads, [&](std::size_t i) {
    const double tau = taus[i];
    const Schedule run = schedule.with_tau(tau);
    MasterOptions master;
    master.family = options.family;
    master.steps = std::max(default_master_steps(tau),
                            static_cast<int>(std::ceil(options.steps_per_tau * tau)));
    master.store_every = master.steps;
    const auto trajectory = integrate_master(model, run, master);
    const Eigen::VectorXd& p = trajectory.final_state();
    const double beta_end = run.beta(1.0);

    TauSample sample;
    sample.tau = tau;
    sample.p_num = measure_ground_probability(p, ground);
    const auto prediction = predict_ground_probability(report.integral_b, tau);
    sample.p_pred = prediction.value;
    sample.prediction_valid = prediction.valid;
    sample.residual = std::abs(sample.p_num - sample.p_pred);
    sample.projection = zero_mode(h0, beta_end).dot(psi_from_p(p, beta_end, h0));
    sample.equilibrium_ground = measure_ground_probability(gibbs(h0, beta_end), ground);
    sample.max_a1_over_tau = max_a1 / tau;
    sample.b_integral_over_tau = report.integral_b / tau;

    if (options.include_sa_flow) {
      const HamiltonianSource flow = [&](double s) {
        return mapped_hamiltonian_at(model, run, options.family, s);
      };
      ImaginaryTimeOptions it;
      it.steps = master.steps;
      it.store_every = it.steps;
      const auto psi = integrate_imaginary_time(flow, zero_mode(h0, run.beta(0.0)), tau, it);
      sample.c0_sa_flow = zero_mode(h0, beta_end).dot(psi.final_state());
      sample.sa_flow_residual = std::abs(sample.c0_sa_flow - sample.p_pred);
    }
    report.samples[i] = sample;
  });

  std::vector<double> tau_values, residuals, flow_residuals;
  for (const auto& sample : report.samples) {
    tau_values.push_back(sample.tau);
    residuals.push_back(std::max(sample.residual, 1e-300));
    flow_residuals.push_back(std::max(sample.sa_flow_residual, 1e-300));
  }
  if (taus.size() >= 2) {
    report.residual_fit = fit_power_law(tau_values, residuals);
    if (options.include_sa_flow) report.sa_flow_fit = fit_power_law(tau_values, flow_residuals);
  }
  return report;
}

nlohmann::json to_json(const AdiabaticReport& report) {
  nlohmann::json j;
  j["model"] = report.model_description;
  j["s_grid"] = report.s_grid;
  j["b_sa"] = report.b_samples;
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index col = 0; col < report.a_samples.cols(); ++col) {
    std::vector<double> values(static_cast<std::size_t>(report.a_samples.rows()));
    for (Eigen::Index row = 0; row < report.a_samples.rows(); ++row)
      values[static_cast<std::size_t>(row)] = report.a_samples(row, col);
    a.push_back({{"level", col + 1}, {"values", values}});
  }
  j["a"] = a;
  j["integral_b_sa"] = report.integral_b;
  j["quadrature"] = {{"intervals", report.quadrature_intervals},
                     {"relative_change", report.quadrature_change}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : report.samples) {
    rows.push_back({{"tau", s.tau},
                    {"p_num", s.p_num},
                    {"p_pred", s.p_pred},
                    {"prediction_valid", s.prediction_valid},
                    {"residual", s.residual},
                    {"projection_0sa", s.projection},
                    {"equilibrium_ground", s.equilibrium_ground},
                    {"max_a1_over_tau", s.max_a1_over_tau},
                    {"int_b_over_tau", s.b_integral_over_tau},
                    {"c0_sa_flow", s.c0_sa_flow},
                    {"sa_flow_residual", s.sa_flow_residual}});
  }
  j["taus"] = rows;
  j["residual_regression"] = {{"slope", report.residual_fit.slope},
                              {"slope_stderr", report.residual_fit.slope_stderr},
                              {"intercept", report.residual_fit.intercept}};
  j["sa_flow_regression"] = {{"slope", report.sa_flow_fit.slope},
                             {"slope_stderr", report.sa_flow_fit.slope_stderr}};
  j["warnings"] = report.warnings;
  return j;
}

void write_residual_csv(std::ostream& out, const AdiabaticReport& report) {
  out << "tau,P_num,P_pred,residual,prediction_valid,projection_0sa\n";
  for (const auto& s : report.samples)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g}\n", s.tau, s.p_num, s.p_pred,
                       s.residual, s.prediction_valid ? 1 : 0, s.projection);
}

}  // namespace annealab
