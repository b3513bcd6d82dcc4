#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "annealab/ising.hpp"
#include "annealab/markov.hpp"
#include "annealab/qmap.hpp"
#include "annealab/schedule.hpp"
#include "annealab/stats.hpp"
#include "annealab/trajectory.hpp"

namespace annealab {

// s -> symmetric H(s) on [0, 1].
using HamiltonianSource = std::function<Eigen::MatrixXd(double)>;

struct ImaginaryTimeOptions {
  int steps = 0;        // 0 selects default_master_steps(tau)
  int store_every = 0;  // 0 stores about 100 points
};

// Fixed-step RK4 for -d psi/ds = tau H(s) psi. The norm is not conserved and
// never renormalized. Throws NumericError when tau * ||H||_inf * ds >= 0.5 on
// a 65-point sample of s, or when psi stops being finite.
Trajectory integrate_imaginary_time(const HamiltonianSource& h, const Eigen::VectorXd& psi0,
                                    double tau, const ImaginaryTimeOptions& options = {});

// c_j(s) = <j(s)|psi(s)> on tracked instantaneous eigenvectors and
// phi_j(s) = int_0^s E_j (trapezoid on the stored grid).
struct InstantaneousCoefficients {
  std::vector<double> s;
  Eigen::MatrixXd c;      // rows: stored points, columns: levels
  Eigen::MatrixXd phase;  // same shape as c
  Eigen::VectorXd norm;   // |psi(s)|
};
InstantaneousCoefficients project_coefficients(const Trajectory& trajectory,
                                               const HamiltonianSource& h, int levels);

// Centered difference with step ds, switching to the second-order one-sided
// stencil within ds of either end of [0, 1].
Eigen::MatrixXd finite_difference_derivative(const HamiltonianSource& h, double s,
                                             double ds = 1e-5);

// Analytic dH_SA/ds = beta_dot dH_SA/dbeta for a W-derived Hamiltonian.
Eigen::MatrixXd mapped_hamiltonian_derivative(const IsingModel& model, const Schedule& schedule,
                                              RateFamily family, double s);

// A spectral value together with whether it needed a gap at or below the
// degeneracy floor.
struct LevelValue {
  double value = 0.0;
  bool degenerate = false;
};

// A_j = <j|dH|0> / (E_j - E_0)^2.
LevelValue compute_A(const SpectralData& spectral, const Eigen::MatrixXd& dh, int j);
// B = sum_{k != 0} |<k|dH|0>|^2 / (E_k - E_0)^3.
LevelValue compute_B(const SpectralData& spectral, const Eigen::MatrixXd& dh);
// B_SA = (beta_dot^2 / 4) sum_{j != 0} |<j|H0|0>|^2 / E_j, valid when E_0 = 0.
LevelValue compute_B_SA(const SpectralData& spectral, const Eigen::VectorXd& h0,
                        double beta_dot);
// max_j |<j|dH_SA|0> - (E_j beta_dot / 2) <j|H0|0>| over j >= 1.
double matrix_element_identity_residual(const SpectralData& spectral, const Eigen::VectorXd& h0,
                                        double beta_dot, const Eigen::MatrixXd& dh);

inline constexpr double kDegeneracyFloor = 1e-8;

struct GroundPrediction {
  double value = 1.0;
  // false when tau <= int B, i.e. the first-order value left [0, 1].
  bool valid = true;
};
// c0 (1 - int_B / tau).
GroundPrediction predict_ground_probability(double integral_b, double tau, double c0 = 1.0);

// Sum of P over the ground set.
double measure_ground_probability(const Eigen::VectorXd& p, const GroundSet& ground);

// int_0^1 B_SA(s) ds by Simpson doubling until the relative change is
// below rel_tol. Throws DegeneracyError if the gap closes below the floor.
SimpsonResult integrate_b_sa(const IsingModel& model, const Schedule& schedule,
                             RateFamily family, double rel_tol = 1e-6);

struct TauSample {
  double tau = 0.0;
  double p_num = 0.0;
  double p_pred = 0.0;
  bool prediction_valid = true;
  double residual = 0.0;
  // <0_SA(1)|psi(1)>, equal to 1/sqrt(Z(beta(1))) by probability conservation.
  double projection = 0.0;
  double equilibrium_ground = 0.0;  // Gibbs ground weight at beta(1)
  double max_a1_over_tau = 0.0;
  double b_integral_over_tau = 0.0;
  // c_0(1) for the flow -d psi/ds = tau H_SA psi from |0_SA(0)> (optional).
  double c0_sa_flow = 0.0;
  double sa_flow_residual = 0.0;
};

struct AdiabaticOptions {
  RateFamily family = RateFamily::Glauber;
  int steps_per_tau = 200;  // integration steps = max(default, steps_per_tau * tau)
  int sample_points = 65;   // s-grid for the A_j / B_SA samples
  int levels = 4;           // A_j reported for j = 1 .. levels-1
  bool include_sa_flow = false;
  unsigned threads = 1;
};

struct AdiabaticReport {
  std::string model_description;
  std::vector<double> s_grid;
  Eigen::MatrixXd a_samples;  // rows: s_grid, columns j = 1 .. levels-1
  std::vector<double> b_samples;
  double integral_b = 0.0;
  int quadrature_intervals = 0;
  double quadrature_change = 0.0;
  std::vector<TauSample> samples;
  LinearFit residual_fit;
  LinearFit sa_flow_fit;
  std::vector<std::string> warnings;
};

AdiabaticReport run_adiabatic_residual(const IsingModel& model, const Schedule& schedule,
                                       const std::vector<double>& taus,
                                       const AdiabaticOptions& options = {});

nlohmann::json to_json(const AdiabaticReport& report);
// Columns tau, P_num, P_pred, residual, prediction_valid, projection.
void write_residual_csv(std::ostream& out, const AdiabaticReport& report);

}  // namespace annealab
