#include "annealab/qmap.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "annealab/error.hpp"

namespace annealab {
namespace {

int spin_of(Eigen::Index index, int site) { return ((index >> site) & 1) ? 1 : -1; }

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

void check_exponent(double beta, const Eigen::VectorXd& h0) {
  if (0.5 * beta * h0.maxCoeff() > kMaxExponent)
    throw NumericError(fmt::format("beta*H0/2 = {:.4g} exceeds the exp-safe bound {}",
                                   0.5 * beta * h0.maxCoeff(), kMaxExponent));
}

}  // namespace

bool SpectralData::flagged(int j, int k) const {
  const int lo = std::min(j, k);
  const int hi = std::max(j, k);
  for (const auto& [a, b] : near_degenerate)
    if (a >= lo && b <= hi) return true;
  return false;
}

MappedHamiltonian map_to_hsa(const TransitionMatrix& w, double beta, const Eigen::VectorXd& h0) {
  if (w.dimension() != h0.size())
    throw std::invalid_argument("map_to_hsa: generator and H0 dimensions differ");
  check_exponent(beta, h0);
  const Eigen::ArrayXd half = 0.5 * beta * h0.array();
  const auto dim = w.dimension();
  const auto& m = w.matrix();
  Eigen::MatrixXd h(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    for (Eigen::Index row = 0; row < dim; ++row)
      h(row, col) = m(row, col) == 0.0 ? 0.0 : -std::exp(half[row] - half[col]) * m(row, col);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asymmetry = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * scale)
    throw std::invalid_argument(fmt::format(
        "map_to_hsa: result is not symmetric (|H-H^T| = {:.3e}); detailed balance is broken",
        asymmetry));
  Eigen::MatrixXd symmetric = 0.5 * (h + h.transpose());
  return {std::move(symmetric), Provenance::FromGenerator, beta};
}

MappedHamiltonian closed_form_1d(int n, double k) {
  if (n < 3) throw std::invalid_argument("closed_form_1d needs n >= 3");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double bond = 0.5 * std::tanh(2.0 * k);
  const double prefactor = 1.0 / (2.0 * std::cosh(2.0 * k));
  const double ch2 = std::cosh(k) * std::cosh(k);
  const double sh2 = std::sinh(k) * std::sinh(k);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    double diagonal = 0.5 * n;
    for (int j = 0; j < n; ++j) diagonal -= bond * spin_of(x, j) * spin_of(x, (j + 1) % n);
    h(x, x) = diagonal;
    for (int j = 0; j < n; ++j) {
      const int outer = spin_of(x, (j + n - 1) % n) * spin_of(x, (j + 1) % n);
      h(x ^ (Eigen::Index{1} << j), x) = -prefactor * (ch2 - sh2 * outer);
    }
  }
  return {std::move(h), Provenance::ClosedForm1D, k};
}

Eigen::MatrixXd closed_form_1d_derivative(int n, double k) {
  if (n < 3) throw std::invalid_argument("closed_form_1d needs n >= 3");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double c2 = std::cosh(2.0 * k);
  // d/dK [tanh(2K)/2] = 1/cosh^2(2K)
  const double d_bond = 1.0 / (c2 * c2);
  // f(K) = 1/(2 cosh 2K): f' = -sinh(2K)/cosh^2(2K)
  const double f = 1.0 / (2.0 * c2);
  const double df = -std::sinh(2.0 * k) / (c2 * c2);
  const double ch2 = std::cosh(k) * std::cosh(k);
  const double sh2 = std::sinh(k) * std::sinh(k);
  // d/dK cosh^2 K = d/dK sinh^2 K = sinh 2K
  const double d_sq = std::sinh(2.0 * k);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    double diagonal = 0.0;
    for (int j = 0; j < n; ++j) diagonal -= d_bond * spin_of(x, j) * spin_of(x, (j + 1) % n);
    d(x, x) = diagonal;
    for (int j = 0; j < n; ++j) {
      const int outer = spin_of(x, (j + n - 1) % n) * spin_of(x, (j + 1) % n);
      const double coefficient = ch2 - sh2 * outer;
      const double d_coefficient = d_sq * (1.0 - outer);
      d(x ^ (Eigen::Index{1} << j), x) = -(df * coefficient + f * d_coefficient);
    }
  }
  return d;
}

Eigen::VectorXd zero_mode(const Eigen::VectorXd& h0, double beta) {
  Eigen::VectorXd v = (-0.5 * beta * h0.array()).exp();
  return v / v.norm();
}

Eigen::VectorXd psi_from_p(const Eigen::VectorXd& p, double beta, const Eigen::VectorXd& h0) {
  check_exponent(beta, h0);
  return ((0.5 * beta * h0.array()).exp() * p.array()).matrix();
}

Eigen::VectorXd p_from_psi(const Eigen::VectorXd& psi, double beta, const Eigen::VectorXd& h0) {
  return ((-0.5 * beta * h0.array()).exp() * psi.array()).matrix();
}

SpectralData eigendecompose(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigendecompose: matrix is not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("eigendecompose: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecompose: solver failed");
  SpectralData data;
  data.values = solver.eigenvalues();
  data.vectors = solver.eigenvectors();
  fix_signs(data.vectors);
  for (Eigen::Index k = 0; k + 1 < data.values.size(); ++k)
    if (data.values[k + 1] - data.values[k] < kNearDegenerateGap)
      data.near_degenerate.emplace_back(static_cast<int>(k), static_cast<int>(k + 1));
  return data;
}

void track(const SpectralData& prev, SpectralData& next) {
  if (prev.vectors.rows() != next.vectors.rows() || prev.vectors.cols() != next.vectors.cols())
    throw std::invalid_argument("track: spectra have different shapes");
  double smallest = 1.0;
  for (Eigen::Index j = 0; j < next.vectors.cols(); ++j) {
    const double overlap = prev.vectors.col(j).dot(next.vectors.col(j));
    if (overlap < 0.0) next.vectors.col(j) *= -1.0;
    smallest = std::min(smallest, std::abs(overlap));
  }
  next.tracked = true;
  next.min_overlap = smallest;
}

GeneralSpectrum general_spectrum(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericError("general_spectrum: solver failed");
  const Eigen::VectorXcd values = solver.eigenvalues();
  GeneralSpectrum out;
  out.real_descending = values.real();
  std::sort(out.real_descending.begin(), out.real_descending.end(), std::greater<>());
  out.max_imaginary = values.imag().cwiseAbs().maxCoeff();
  return out;
}

EffectiveHamiltonian build_htot(const MappedHamiltonian& hsa, const Eigen::VectorXd& h0,
                                double beta_dot, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("build_htot: tau must be positive");
  Eigen::MatrixXd h = hsa.matrix;
  h.diagonal() -= (beta_dot / (2.0 * tau)) * h0;
  return {std::move(h), tau, beta_dot};
}

Eigen::MatrixXd mapped_hamiltonian_at(const IsingModel& model, const Schedule& schedule,
                                      RateFamily family, double s) {
  const double beta = schedule.beta(s);
  return map_to_hsa(build_generator(model, beta, family), beta, model.h0_diagonal()).matrix;
}

Eigen::MatrixXd effective_hamiltonian_at(const IsingModel& model, const Schedule& schedule,
                                         RateFamily family, double s) {
  const double beta = schedule.beta(s);
  const auto hsa = map_to_hsa(build_generator(model, beta, family), beta, model.h0_diagonal());
  return build_htot(hsa, model.h0_diagonal(), schedule.beta_dot(s), schedule.tau()).matrix;
}

MappingCheck check_mapping(const IsingModel& model, double beta, RateFamily family) {
  const auto& h0 = model.h0_diagonal();
  const auto w = build_generator(model, beta, family);
  MappingCheck check;
  {
    const Eigen::ArrayXd half = 0.5 * beta * h0.array();
    const auto& m = w.matrix();
    Eigen::MatrixXd raw(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        raw(r, c) = -std::exp(half[r] - half[c]) * m(r, c);
    check.symmetry_error = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  }
  const auto hsa = map_to_hsa(w, beta, h0);
  const auto spectral = eigendecompose(hsa.matrix);
  const auto general = general_spectrum(w.matrix());
  check.max_imaginary = general.max_imaginary;
  check.spectrum_error = (spectral.values + general.real_descending).cwiseAbs().maxCoeff();
  const Eigen::VectorXd v0 = zero_mode(h0, beta);
  check.zero_mode_residual =
      (hsa.matrix * v0).cwiseAbs().maxCoeff() / std::max(1e-300, hsa.matrix.cwiseAbs().maxCoeff());
  check.ground_energy = spectral.values[0];
  check.ground_alignment = std::abs(spectral.vectors.col(0).dot(v0));
  return check;
}

SpectralScan scan_spectrum(const std::function<Eigen::MatrixXd(double)>& source,
                           std::span<const double> s_grid) {
  SpectralScan scan;
  for (const double s : s_grid) {
    auto data = eigendecompose(source(s));
    if (!scan.spectra.empty()) track(scan.spectra.back(), data);
    scan.s.push_back(s);
    scan.spectra.push_back(std::move(data));
  }
  return scan;
}

void write_spectral_csv(std::ostream& out, const SpectralScan& scan, int levels) {
  out << "s";
  for (int k = 0; k < levels; ++k) out << ",E" << k;
  out << ",gap\n";
  for (std::size_t i = 0; i < scan.s.size(); ++i) {
    const auto& spectrum = scan.spectra[i];
    out << fmt::format("{:.17g}", scan.s[i]);
    const int shown = std::min<int>(levels, static_cast<int>(spectrum.values.size()));
    for (int k = 0; k < shown; ++k) out << fmt::format(",{:.17g}", spectrum.values[k]);
    for (int k = shown; k < levels; ++k) out << ",";
    out << fmt::format(",{:.17g}\n", spectrum.gap());
  }
}

}  // namespace annealab
