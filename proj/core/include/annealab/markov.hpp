#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "annealab/ising.hpp"
#include "annealab/schedule.hpp"
#include "annealab/trajectory.hpp"

namespace annealab {

enum class RateFamily { Glauber, Metropolis };

std::string_view to_string(RateFamily family);
RateFamily rate_family_from_string(std::string_view name);

// Rate of a single-spin flip that changes the energy by delta_e at inverse
// temperature beta. Glauber (heat bath): 1 / (1 + e^{beta dE}), which equals
// (1/2)[1 - sigma_j tanh(beta h_j)] for the Ising local field. Metropolis:
// min(1, e^{-beta dE}). No 1/N prefactor.
double flip_rate(RateFamily family, double beta_delta_e);

// Dense generator of dP/dt = W P on the 2^N configurations. Off-diagonal
// entries connect configurations differing by one spin; columns sum to 0.
class TransitionMatrix {
 public:
  TransitionMatrix(Eigen::MatrixXd generator, double beta, RateFamily family);

  const Eigen::MatrixXd& matrix() const { return generator_; }
  double beta() const { return beta_; }
  RateFamily family() const { return family_; }
  Eigen::Index dimension() const { return generator_.rows(); }

  double max_column_sum() const;
  double max_escape_rate() const;
  // max over pairs of |W_ab e^{-beta E_b} - W_ba e^{-beta E_a}|.
  double detailed_balance_residual(const Eigen::VectorXd& h0) const;

 private:
  Eigen::MatrixXd generator_;
  double beta_;
  RateFamily family_;
};

TransitionMatrix build_glauber(const IsingModel& model, double beta);
TransitionMatrix build_metropolis(const IsingModel& model, double beta);
TransitionMatrix build_generator(const IsingModel& model, double beta, RateFamily family);

// e^{-beta H0} / Z. All weights are <= 1 because min H0 = 0.
Eigen::VectorXd gibbs(const Eigen::VectorXd& h0, double beta);
Eigen::VectorXd gibbs(const IsingModel& model, double beta);

// out = W(beta) p without materializing W; O(N 2^N).
void apply_generator(const IsingModel& model, double beta, RateFamily family,
                     const Eigen::VectorXd& p, Eigen::VectorXd& out);

// Largest total escape rate max_sigma sum_j w_j(sigma) at inverse temperature beta.
double max_escape_rate(const IsingModel& model, double beta, RateFamily family);

inline constexpr double kProbabilityNegativeTolerance = 1e-12;
inline constexpr double kProbabilityMassTolerance = 1e-10;

// Throws NumericError if an entry is below -1e-12, not finite, or the total
// differs from 1 by more than mass_tolerance.
void validate_probability(const Eigen::VectorXd& p,
                          double mass_tolerance = kProbabilityMassTolerance);
Eigen::VectorXd clamp_probability(const Eigen::VectorXd& p);

struct MasterOptions {
  RateFamily family = RateFamily::Glauber;
  int steps = 0;        // 0 selects default_master_steps(tau)
  int store_every = 0;  // 0 stores about 100 points
  std::optional<Eigen::VectorXd> initial;  // defaults to gibbs(beta(0))
};

int default_master_steps(double tau);

// Integrates (1/tau) dP/ds = W(beta(s)) P with fixed-step RK4. Throws
// NumericError when tau * ||W|| * ds >= 0.5 (||W|| is the largest escape
// rate over the schedule) or when the state stops being finite.
Trajectory integrate_master(const IsingModel& model, const Schedule& schedule,
                            const MasterOptions& options = {});

// CSV with columns s, P_0 ... P_{2^N-1} for N <= 6; otherwise s, P_ground,
// total, and the total-variation distance to the instantaneous Gibbs state.
void write_trajectory_csv(std::ostream& out, const IsingModel& model, const Schedule& schedule,
                          const Trajectory& trajectory);

}  // namespace annealab
