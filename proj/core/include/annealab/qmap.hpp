#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "annealab/ising.hpp"
#include "annealab/markov.hpp"
#include "annealab/schedule.hpp"

namespace annealab {

enum class Provenance { FromGenerator, ClosedForm1D };

// Symmetric Hamiltonian H_SA = -D W D^{-1}, D = diag(e^{beta H0 / 2}).
struct MappedHamiltonian {
  Eigen::MatrixXd matrix;
  Provenance provenance = Provenance::FromGenerator;
  double beta = 0.0;
};

// H_tot = H_SA - (beta_dot / 2 tau) H0.
struct EffectiveHamiltonian {
  Eigen::MatrixXd matrix;
  double tau = 1.0;
  double beta_dot = 0.0;
};

inline constexpr double kNearDegenerateGap = 1e-8;

// Eigenpairs in ascending order with orthonormal columns. Each column's
// largest-magnitude component is positive until track() realigns it.
struct SpectralData {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  // Adjacent level pairs (k, k+1) closer than kNearDegenerateGap.
  std::vector<std::pair<int, int>> near_degenerate;
  bool tracked = false;
  // Smallest |<v_prev, v_next>| seen by the last track() call (1 if untracked).
  double min_overlap = 1.0;

  double gap() const { return values.size() > 1 ? values[1] - values[0] : 0.0; }
  Eigen::Index levels() const { return values.size(); }
  bool flagged(int j, int k) const;
};

// Throws std::invalid_argument if |H - H^T|_max > 1e-12 * max(1, |H|_max).
MappedHamiltonian map_to_hsa(const TransitionMatrix& w, double beta, const Eigen::VectorXd& h0);

// Explicit 2^N matrix of the mapped heat-bath Hamiltonian of the periodic
// ferromagnetic chain,
//   N/2 - (1/2) tanh(2K) sum_j z_j z_{j+1}
//       - 1/(2 cosh 2K) sum_j (cosh^2 K - sinh^2 K z_{j-1} z_{j+1}) x_j,
// with K = beta J. Requires n >= 3.
MappedHamiltonian closed_form_1d(int n, double beta_j);
// d/dK of closed_form_1d(n, K).
Eigen::MatrixXd closed_form_1d_derivative(int n, double beta_j);

// Normalized zero mode e^{-beta H0 / 2} 1 / sqrt(Z).
Eigen::VectorXd zero_mode(const Eigen::VectorXd& h0, double beta);

// Largest beta * H0 / 2 accepted before exponentials are considered unsafe.
inline constexpr double kMaxExponent = 700.0;

// psi_sigma = e^{beta H0(sigma) / 2} P_sigma (not normalized). Throws
// NumericError if beta * max(H0) / 2 exceeds kMaxExponent.
Eigen::VectorXd psi_from_p(const Eigen::VectorXd& p, double beta, const Eigen::VectorXd& h0);
Eigen::VectorXd p_from_psi(const Eigen::VectorXd& psi, double beta, const Eigen::VectorXd& h0);

// Throws std::invalid_argument for non-symmetric input.
SpectralData eigendecompose(const Eigen::MatrixXd& h);

// Flips the sign of each eigenvector of `next` so that <prev_j, next_j> > 0,
// records the smallest |overlap| and marks next as tracked.
void track(const SpectralData& prev, SpectralData& next);

// Eigenvalues of a general real matrix with real parts sorted descending
// (for W, lambda_0 = 0 > lambda_1 >= ...). Imaginary parts are returned as
// the max absolute imaginary component.
struct GeneralSpectrum {
  Eigen::VectorXd real_descending;
  double max_imaginary = 0.0;
};
GeneralSpectrum general_spectrum(const Eigen::MatrixXd& m);

EffectiveHamiltonian build_htot(const MappedHamiltonian& hsa, const Eigen::VectorXd& h0,
                                double beta_dot, double tau);

// H_SA(s) for a model driven by a schedule.
Eigen::MatrixXd mapped_hamiltonian_at(const IsingModel& model, const Schedule& schedule,
                                      RateFamily family, double s);
// H_tot(s); uses schedule.tau().
Eigen::MatrixXd effective_hamiltonian_at(const IsingModel& model, const Schedule& schedule,
                                         RateFamily family, double s);

// Diagnostics of the transform at a fixed beta.
struct MappingCheck {
  double spectrum_error = 0.0;      // max |E_SA^(n) + lambda_n|
  double zero_mode_residual = 0.0;  // |H_SA v0|_inf / |H_SA|_max
  double symmetry_error = 0.0;      // |H - H^T|_max before symmetrization
  double ground_energy = 0.0;
  double ground_alignment = 0.0;    // |<0_SA, v0>|
  double max_imaginary = 0.0;       // of the W spectrum
};
MappingCheck check_mapping(const IsingModel& model, double beta, RateFamily family);

// Spectral dump: rows of s, E^(0) ... E^(levels-1), gap. Eigenvectors are
// tracked along the grid.
struct SpectralScan {
  std::vector<double> s;
  std::vector<SpectralData> spectra;
};
SpectralScan scan_spectrum(const std::function<Eigen::MatrixXd(double)>& source,
                           std::span<const double> s_grid);
void write_spectral_csv(std::ostream& out, const SpectralScan& scan, int levels);

}  // namespace annealab
