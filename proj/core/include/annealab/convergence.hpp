#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "annealab/ising.hpp"
#include "annealab/markov.hpp"
#include "annealab/schedule.hpp"

namespace annealab {

// Largest chain length accepted by gap_scan (dense 2^N eigensolve).
inline constexpr int kMaxScanSpins = 12;
inline constexpr double kTinyGap = 1e-12;

struct GapSample {
  double beta = 0.0;
  int n = 0;
  double gap = 0.0;
};

struct GapScan {
  double coupling = 1.0;
  std::vector<double> betas;
  std::vector<int> sizes;
  std::vector<GapSample> samples;  // N-major, then beta
  // Per N: whether Delta decreased strictly along the beta grid after beta = 0.
  std::vector<bool> monotone_decreasing;
  std::vector<std::string> warnings;

  const GapSample& at(std::size_t n_index, std::size_t beta_index) const {
    return samples[n_index * betas.size() + beta_index];
  }
};

// Gap of the heat-bath mapped Hamiltonian of the ferromagnetic chain (periodic
// for N >= 3, a single bond for N = 2, a free spin for N = 1). Grid points run
// on up to `threads` workers. Throws DegeneracyError if a gap is not positive.
GapScan gap_scan(std::vector<double> betas, std::vector<int> sizes, double coupling = 1.0,
                 unsigned threads = 1);

// Delta = a sqrt(N) exp(-2 (p beta + c) N).
struct GapBoundFit {
  double a = 1.0;
  double log_a = 0.0;
  double c = 0.0;  // calibrated
  double p = 0.0;
  double c_regression = 0.0;  // before calibration
  double calibration_shift = 0.0;
  double r_squared = 0.0;
  // log Delta - log Delta_model at every fit point, after calibration (>= 0).
  std::vector<double> residuals;
  std::vector<double> fit_betas;
  std::vector<int> fit_sizes;
};

// Least squares of log Delta - log(N)/2 on [1, -2N, -2 beta N], restricted to
// beta in [beta_min, beta_max]; c is then raised until the model lies at or
// below every fitted gap. Throws std::invalid_argument with fewer than 3 sizes
// or 5 betas in the window.
GapBoundFit fit_gap_bound(const GapScan& scan, double beta_min, double beta_max);
GapBoundFit fit_gap_bound(const GapScan& scan);

double gap_bound(const GapBoundFit& fit, double beta, int n);

// r^2 of log Delta against beta for one chain length over the window.
double log_gap_linearity(const GapScan& scan, int n, double beta_min, double beta_max);

enum class DeltaVerdict { Convergent, NotSmall, Divergent };
std::string_view to_string(DeltaVerdict verdict);

inline constexpr double kDeltaThreshold = 0.1;

struct DeltaOptions {
  double threshold = kDeltaThreshold;
  double rel_tol = 1e-12;  // per-piece Gauss-Kronrod tolerance
  bool tail = true;        // add the power-law tail beyond t_end when detected
};

struct DeltaCondition {
  std::string schedule_kind;
  double a = 1.0, c = 0.0, p = 1.0;
  int n = 1;
  double t_start = 0.0, t_end = 0.0;
  double prefactor = 0.0;       // 4 e^{2cN} p^2 N^2 / (a sqrt N)
  double finite_part = 0.0;     // over [t_start, t_end]
  double tail = 0.0;            // beyond t_end
  bool tail_applied = false;
  double tail_exponent = 0.0;   // k in integrand ~ t^k, when measured
  double error_estimate = 0.0;  // summed Gauss-Kronrod estimates, times prefactor
  double value = 0.0;           // finite_part + tail
  double threshold = kDeltaThreshold;
  DeltaVerdict verdict = DeltaVerdict::Convergent;
};

// delta = prefactor * int (d beta / dt)^2 e^{2 beta p N} dt, with t the
// original time. Integrates in geometric pieces and stops early with a
// Divergent verdict once the partial value exceeds 1e6 * threshold. A
// tail is added only for schedules defined beyond the horizon whose integrand
// decays like t^k, k < -1, over the last decade.
DeltaCondition delta_integral(const Schedule& schedule, double a, double c, double p, int n,
                              double t_start, double t_end, const DeltaOptions& options = {});

struct DichotomyRow {
  double horizon = 0.0;
  double p_log = 0.0;
  double p_fast = 0.0;
  double p_constant = 0.0;
  double beta_end_log = 0.0;
  double beta_end_fast = 0.0;
  double equilibrium_log = 0.0;  // Gibbs ground weight at beta_end_log
};

struct DichotomyReport {
  std::string model_description;
  double beta_max = 0.0;
  double capped_equilibrium = 0.0;  // Gibbs ground weight at beta_max
  double initial_ground = 0.0;
  double constant_beta = 0.0;
  double constant_target = 0.0;
  std::vector<DichotomyRow> rows;
  bool log_monotone = true;
  double fast_plateau_gap = 0.0;  // capped_equilibrium - p_fast at the longest horizon
};

struct DichotomyOptions {
  RateFamily family = RateFamily::Glauber;
  double constant_beta = 1.0;
  int steps_per_unit_time = 20;
  unsigned threads = 1;
};

// Both schedules start from the Gibbs state at their beta(0) and run for
// each horizon (original time). The horizons must be positive and increasing.
DichotomyReport dichotomy_experiment(const IsingModel& model, const Schedule& fast,
                                     const Schedule& slow, const std::vector<double>& horizons,
                                     const DichotomyOptions& options = {});

nlohmann::json to_json(const GapScan& scan);
nlohmann::json to_json(const GapBoundFit& fit);
nlohmann::json to_json(const DeltaCondition& delta);
nlohmann::json to_json(const DichotomyReport& report);

void write_gap_csv(std::ostream& out, const GapScan& scan);

}  // namespace annealab
