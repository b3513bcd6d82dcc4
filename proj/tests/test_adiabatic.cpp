#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "annealab/adiabatic.hpp"
#include "annealab/error.hpp"
#include "oracles.hpp"

using namespace annealab;

TEST(ImaginaryTime, DiagonalHamiltonianIsExponentialDecay) {
  const Eigen::Vector3d e(0.0, 0.5, 2.0);
  const HamiltonianSource h = [&](double) { return Eigen::MatrixXd(e.asDiagonal()); };
  const Eigen::Vector3d psi0(1.0, 1.0, 1.0);
  ImaginaryTimeOptions o;
  o.steps = 1000;
  const auto traj = integrate_imaginary_time(h, psi0, 4.0, o);
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(traj.final_state()[i], std::exp(-4.0 * e[i]), 1e-12);
  EXPECT_DOUBLE_EQ(traj.s.back(), 1.0);
  o.steps = 2;
  EXPECT_THROW(integrate_imaginary_time(h, psi0, 4.0, o), NumericError);
}

TEST(ImaginaryTime, FourthOrderOnTimeDependentGenerator) {
  const HamiltonianSource h = [](double s) {
    Eigen::Matrix2d m;
    m << 0.0, -s, -s, 1.0 + s;
    return Eigen::MatrixXd(m);
  };
  const auto end = [&](int steps) {
    ImaginaryTimeOptions o;
    o.steps = steps;
    return integrate_imaginary_time(h, Eigen::Vector2d(1.0, 0.0), 5.0, o).final_state();
  };
  const Eigen::VectorXd a = end(50), b = end(100), c = end(200);
  EXPECT_NEAR((a - b).norm() / (b - c).norm(), 16.0, 2.5);
}

TEST(Spectral, AAndBOnTwoLevelModel) {
  SpectralData sd = eigendecompose(Eigen::Vector2d(0.0, 2.0).asDiagonal().toDenseMatrix());
  Eigen::Matrix2d dh;
  dh << 0.3, 1.0, 1.0, -0.7;
  // eigenvectors may carry a sign; A is linear in <1|, B is not
  EXPECT_NEAR(std::abs(compute_A(sd, dh, 1).value), 0.25, 1e-15);
  EXPECT_NEAR(compute_B(sd, dh).value, 0.125, 1e-15);
  EXPECT_THROW(compute_A(sd, dh, 0), std::out_of_range);
  SpectralData degenerate = eigendecompose(Eigen::Matrix2d::Zero());
  EXPECT_TRUE(compute_B(degenerate, dh).degenerate);
  EXPECT_TRUE(compute_A(degenerate, dh, 1).degenerate);
}

TEST(Derivative, AnalyticMatchesRichardson) {
  std::mt19937_64 rng(5);
  const auto model = random_model(4, rng);
  const auto sched = Schedule::linear(0.1, 2.5, 1.0, 2.5);
  for (auto family : {RateFamily::Glauber, RateFamily::Metropolis}) {
    const HamiltonianSource h = [&](double s) {
      return mapped_hamiltonian_at(model, sched, family, s);
    };
    for (double s : {0.1, 0.45, 0.8}) {
      const Eigen::MatrixXd fd =
          (4 * finite_difference_derivative(h, s, 5e-4) - finite_difference_derivative(h, s, 1e-3)) /
          3;
      const Eigen::MatrixXd exact = mapped_hamiltonian_derivative(model, sched, family, s);
      EXPECT_LT(oracle::max_abs(exact - fd), 1e-9 * std::max(1.0, oracle::max_abs(exact)));
    }
    // one-sided stencils at the ends
    EXPECT_LT(oracle::max_abs(finite_difference_derivative(h, 0.0, 1e-5) -
                              mapped_hamiltonian_derivative(model, sched, family, 0.0)),
              1e-6);
    EXPECT_LT(oracle::max_abs(finite_difference_derivative(h, 1.0, 1e-5) -
                              mapped_hamiltonian_derivative(model, sched, family, 1.0)),
              1e-6);
  }
}

class IdentityProperties : public ::testing::TestWithParam<int> {};

TEST_P(IdentityProperties, MatrixElementIdentityAndSimplifiedB) {
  std::mt19937_64 rng(900 + GetParam());
  const auto model = random_model(2 + GetParam() % 5, rng, 1.0, 0.5);
  const auto sched = Schedule::linear(0.2, 2.0, 1.0, 2.0);
  const auto& h0 = model.h0_diagonal();
  for (auto family : {RateFamily::Glauber, RateFamily::Metropolis}) {
    for (double s : {0.0, 0.3, 0.7, 1.0}) {
      const auto sd = eigendecompose(mapped_hamiltonian_at(model, sched, family, s));
      const auto dh = mapped_hamiltonian_derivative(model, sched, family, s);
      const double bdot = sched.beta_dot(s);
      EXPECT_LT(matrix_element_identity_residual(sd, h0, bdot, dh), 1e-11);
      const auto b = compute_B(sd, dh);
      const auto bsa = compute_B_SA(sd, h0, bdot);
      ASSERT_FALSE(b.degenerate);
      EXPECT_NEAR(b.value, bsa.value, 1e-9 * std::max(1e-300, std::abs(b.value)));
    }
  }
}
INSTANTIATE_TEST_SUITE_P(RandomModels, IdentityProperties, ::testing::Range(0, 8));

TEST(Prediction, FirstOrderFormula) {
  const auto p = predict_ground_probability(2.5, 50.0);
  EXPECT_DOUBLE_EQ(p.value, 0.95);
  EXPECT_TRUE(p.valid);
  EXPECT_FALSE(predict_ground_probability(2.5, 2.0).valid);
  EXPECT_THROW(predict_ground_probability(1.0, 0.0), std::invalid_argument);
}

// Reference: composite Simpson on 1024 panels with an independent H_SA and
// eigensolver.
TEST(Quadrature, IntegralOfBsaMatchesBruteForce) {
  const auto model = IsingModel::periodic_chain(4, 1.0);
  const auto sched = Schedule::linear(0.2, 3.0, 1.0, 3.0);
  const auto q = integrate_b_sa(model, sched, RateFamily::Glauber, 1e-10);
  ASSERT_TRUE(q.converged);
  const Eigen::VectorXd e = oracle::shifted_energies(model);
  const auto bsa = [&](double s) {
    const double beta = 0.2 + 2.8 * s;
    const Eigen::VectorXd d = (0.5 * beta * e.array()).exp();
    const Eigen::MatrixXd h =
        -(d.asDiagonal() * oracle::generator(model, beta, false) * d.cwiseInverse().asDiagonal());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
    double sum = 0.0;
    for (int j = 1; j < 16; ++j) {
      const double m = es.eigenvectors().col(j).dot(e.cwiseProduct(es.eigenvectors().col(0)));
      sum += m * m / es.eigenvalues()[j];
    }
    return 0.25 * 2.8 * 2.8 * sum;
  };
  const int panels = 1024;
  double ref = bsa(0.0) + bsa(1.0);
  for (int k = 1; k < panels; ++k) ref += (k % 2 ? 4.0 : 2.0) * bsa(double(k) / panels);
  ref /= 3.0 * panels;
  EXPECT_NEAR(q.value, ref, 1e-9 * ref);
}

// psi_from_p(P(s)) from the master equation follows -dpsi/ds = tau H_tot psi.
TEST(Dynamics, MasterMapsOntoEffectiveFlow) {
  const auto model = IsingModel::periodic_chain(3, 1.0);
  const auto sched = Schedule::linear(0.0, 1.5, 8.0, 1.5);
  const auto& h0 = model.h0_diagonal();
  MasterOptions mo;
  mo.steps = 4000;
  mo.store_every = 400;
  const auto master = integrate_master(model, sched, mo);
  ImaginaryTimeOptions io;
  io.steps = 4000;
  io.store_every = 400;
  const HamiltonianSource htot = [&](double s) {
    return effective_hamiltonian_at(model, sched, RateFamily::Glauber, s);
  };
  const auto flow =
      integrate_imaginary_time(htot, psi_from_p(master.states[0], 0.0, h0), sched.tau(), io);
  ASSERT_EQ(flow.size(), master.size());
  for (std::size_t k = 0; k < flow.size(); ++k) {
    const Eigen::VectorXd mapped = psi_from_p(master.states[k], sched.beta(master.s[k]), h0);
    EXPECT_LT((mapped - flow.states[k]).cwiseAbs().maxCoeff(), 1e-10) << master.s[k];
  }
}

TEST(Projection, CoefficientsOnTrackedBasis) {
  const auto model = IsingModel::periodic_chain(3, 1.0);
  const auto sched = Schedule::linear(0.2, 1.0, 30.0, 1.0);
  const HamiltonianSource hsa = [&](double s) {
    return mapped_hamiltonian_at(model, sched, RateFamily::Glauber, s);
  };
  ImaginaryTimeOptions io;
  io.store_every = 60;
  const auto traj =
      integrate_imaginary_time(hsa, zero_mode(model.h0_diagonal(), 0.2), sched.tau(), io);
  const auto c = project_coefficients(traj, hsa, 3);
  EXPECT_NEAR(c.c(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(c.c(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(c.norm[0], 1.0, 1e-12);
  // ground phase stays zero since E_0 = 0
  EXPECT_NEAR(c.phase(c.phase.rows() - 1, 0), 0.0, 1e-12);
  const auto last = c.c.rows() - 1;
  EXPECT_GT(c.c(last, 0), 0.9);
  EXPECT_LT(std::abs(c.c(last, 1)), 0.1);
}

TEST(Residual, ReportShape) {
  const auto model = IsingModel::periodic_chain(3, 1.0);
  const auto sched = Schedule::linear(0.2, 1.5, 1.0, 1.5);
  AdiabaticOptions o;
  o.include_sa_flow = true;
  o.sample_points = 9;
  const auto r = run_adiabatic_residual(model, sched, {20.0, 40.0, 80.0}, o);
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_EQ(r.s_grid.size(), 9u);
  EXPECT_EQ(r.a_samples.cols(), 3);
  for (const auto& s : r.samples) {
    EXPECT_GT(s.p_num, 0.0);
    const double z = (-1.5 * model.h0_diagonal().array()).exp().sum();
    EXPECT_NEAR(s.projection, 1.0 / std::sqrt(z), 1e-10);
  }
  // the H_SA flow follows the first-order law to second order
  EXPECT_LT(r.sa_flow_fit.slope, -1.6);
  std::ostringstream csv;
  write_residual_csv(csv, r);
  EXPECT_NE(csv.str().find("tau,P_num,P_pred,residual"), std::string::npos);
  EXPECT_EQ(to_json(r)["taus"].size(), 3u);
  EXPECT_THROW(run_adiabatic_residual(model, sched, {}, o), std::invalid_argument);
}
