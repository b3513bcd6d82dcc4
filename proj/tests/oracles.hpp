#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library beyond reading the model's couplings and fields.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "annealab/ising.hpp"

namespace oracle {

inline int spin(unsigned idx, int site) { return ((idx >> site) & 1U) ? 1 : -1; }

// Unshifted energy straight from the definition.
inline double raw_energy(const annealab::IsingModel& m, unsigned idx) {
  double e = 0.0;
  for (const auto& c : m.couplings()) e -= c.strength * spin(idx, c.i) * spin(idx, c.j);
  for (const auto& f : m.fields()) e -= f.strength * spin(idx, f.site);
  return e;
}

inline Eigen::VectorXd shifted_energies(const annealab::IsingModel& m) {
  const unsigned dim = 1U << m.n_spins();
  Eigen::VectorXd e(dim);
  for (unsigned s = 0; s < dim; ++s) e[s] = raw_energy(m, s);
  return e.array() - e.minCoeff();
}

// Dense generator, textbook form: heat bath 1/(1+exp(x)) or Metropolis.
inline Eigen::MatrixXd generator(const annealab::IsingModel& m, double beta, bool metropolis) {
  const Eigen::VectorXd e = shifted_energies(m);
  const unsigned dim = 1U << m.n_spins();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  for (unsigned from = 0; from < dim; ++from) {
    for (int j = 0; j < m.n_spins(); ++j) {
      const unsigned to = from ^ (1U << j);
      const double x = beta * (e[to] - e[from]);
      w(to, from) = metropolis ? std::min(1.0, std::exp(-x)) : 0.5 * (1.0 - std::tanh(0.5 * x));
    }
    w(from, from) = -w.col(from).sum();
  }
  return w;
}

inline Eigen::VectorXd gibbs(const Eigen::VectorXd& e, double beta) {
  Eigen::VectorXd p = (-beta * e.array()).exp();
  return p / p.sum();
}

inline Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

// Pauli-string helpers for building the chain closed form independently.
inline Eigen::MatrixXd site_z(int n, int j) {
  const unsigned dim = 1U << n;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(dim, dim);
  for (unsigned s = 0; s < dim; ++s) z(s, s) = spin(s, j);
  return z;
}
inline Eigen::MatrixXd site_x(int n, int j) {
  const unsigned dim = 1U << n;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
  for (unsigned s = 0; s < dim; ++s) x(s ^ (1U << j), s) = 1.0;
  return x;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
