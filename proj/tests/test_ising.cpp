#include <random>

#include <gtest/gtest.h>

#include "annealab/error.hpp"
#include "annealab/ising.hpp"
#include "annealab/model_file.hpp"
#include "oracles.hpp"

using namespace annealab;

TEST(Ising, EncodeDecodeRoundTrip) {
  for (std::uint32_t idx = 0; idx < 64; ++idx) {
    const SpinConfiguration c(idx);
    const auto spins = c.decode(6);
    EXPECT_EQ(SpinConfiguration::encode(spins), c);
    for (int i = 0; i < 6; ++i) EXPECT_EQ(spins[i], oracle::spin(idx, i));
  }
  EXPECT_EQ(SpinConfiguration(5).flipped(1).index(), 7u);
}

TEST(Ising, EnergyMatchesBruteForceOnRandomModels) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const auto model = random_model(n, rng);
    const Eigen::VectorXd e = oracle::shifted_energies(model);
    EXPECT_LT((model.h0_diagonal() - e).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(model.h0_diagonal().minCoeff(), 0.0);
    for (unsigned s = 0; s < e.size(); ++s)
      EXPECT_NEAR(model.unshifted_energy(SpinConfiguration(s)), oracle::raw_energy(model, s), 1e-12);
  }
}

TEST(Ising, ChainGroundStates) {
  const auto ring = IsingModel::periodic_chain(5, 1.0);
  const auto g = ground_states(ring);
  ASSERT_EQ(g.degeneracy(), 2u);
  EXPECT_TRUE(g.contains(SpinConfiguration(0)));
  EXPECT_TRUE(g.contains(SpinConfiguration(31)));
  // a positive field favours all-up
  const auto biased = ground_states(IsingModel::periodic_chain(5, 1.0, 0.1));
  ASSERT_EQ(biased.degeneracy(), 1u);
  EXPECT_EQ(biased.configurations[0].index(), 31u);
  EXPECT_DOUBLE_EQ(ring.energy_offset(), 5.0);
  EXPECT_DOUBLE_EQ(ring.energy(SpinConfiguration(1)), 4.0);  // two broken bonds
  EXPECT_TRUE(ring.is_uniform_ferro_ring());
  EXPECT_DOUBLE_EQ(ring.uniform_coupling(), 1.0);
}

TEST(Ising, RejectsBadInput) {
  EXPECT_THROW(IsingModel(0, {}, {}), std::invalid_argument);
  EXPECT_THROW(IsingModel(kMaxSpins + 1, {}, {}), std::invalid_argument);
  EXPECT_THROW(IsingModel(3, {{0, 3, 1.0}}, {}), std::invalid_argument);
  EXPECT_THROW(IsingModel(3, {{1, 1, 1.0}}, {}), std::invalid_argument);
  EXPECT_THROW(IsingModel(3, {}, {{-1, 1.0}}), std::invalid_argument);
  EXPECT_THROW(IsingModel::periodic_chain(2, 1.0), std::invalid_argument);
}

TEST(ModelFile, ParsesExplicitAndScalarForms) {
  const auto a = parse_model(R"(
n_spins: 4
topology: chain-periodic
couplings: [[0, 1, 1.0], [1, 2, 1.0], [2, 3, 1.0], [3, 0, 1.0]]
)");
  const auto b = parse_model("n_spins: 4\ntopology: chain-periodic\ncoupling: 1.0\n");
  EXPECT_EQ(a.topology(), Topology::ChainPeriodic);
  EXPECT_LT((a.h0_diagonal() - b.h0_diagonal()).cwiseAbs().maxCoeff(), 1e-15);
  const auto c = parse_model("n_spins: 3\ncouplings: [[2, 0, -0.5]]\nfields: [[1, 0.25]]\n");
  EXPECT_EQ(c.couplings()[0].i, 0);
  EXPECT_EQ(c.couplings()[0].j, 2);
  EXPECT_DOUBLE_EQ(c.fields()[0].strength, 0.25);
}

TEST(ModelFile, ErrorsNameTheEntry) {
  try {
    parse_model("n_spins: 4\ncouplings: [[0, 1, 1], [1, 2, 1], [2, 7, 1]]\n");
    FAIL() << "no throw";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("couplings[2]"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
  EXPECT_THROW(parse_model("n_spins: 0\n"), ParseError);
  EXPECT_THROW(parse_model("couplings: []\n"), ParseError);
  EXPECT_THROW(parse_model("n_spins: 3\ntopology: ladder\n"), ParseError);
  EXPECT_THROW(parse_model("n_spins: 3\ncouplings: [[0, 1]]\n"), ParseError);
  EXPECT_THROW(parse_model("n_spins: [\n"), ParseError);
  EXPECT_THROW(load_model_file("/nonexistent/model.yaml"), ParseError);
}
