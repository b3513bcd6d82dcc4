#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace annealab {

inline constexpr int kMaxSpins = 20;

// Configurations within this distance of the minimum energy are ground states.
inline constexpr double kDegeneracyTolerance = 1e-9;

enum class Topology { ChainPeriodic, ChainOpen, General };

std::string_view to_string(Topology topology);
Topology topology_from_string(std::string_view name);

struct Coupling {
  int i = 0;
  int j = 0;
  double strength = 0.0;
};

struct Field {
  int site = 0;
  double strength = 0.0;
};

// A basis state of N Ising spins. Bit i of the index encodes spin i, with
// bit 1 meaning sigma_i = +1 and bit 0 meaning sigma_i = -1.
class SpinConfiguration {
 public:
  constexpr SpinConfiguration() = default;
  constexpr explicit SpinConfiguration(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }
  constexpr int spin(int site) const { return ((index_ >> site) & 1U) ? 1 : -1; }
  constexpr SpinConfiguration flipped(int site) const {
    return SpinConfiguration(index_ ^ (1U << site));
  }

  // spins[i] must be +1 or -1.
  static SpinConfiguration encode(std::span<const int> spins);
  std::vector<int> decode(int n_spins) const;

  friend constexpr bool operator==(SpinConfiguration, SpinConfiguration) = default;
  friend constexpr auto operator<=>(SpinConfiguration, SpinConfiguration) = default;

 private:
  std::uint32_t index_ = 0;
};

// Classical Ising Hamiltonian
//   H0(sigma) = -sum J_ij sigma_i sigma_j - sum h_i sigma_i + offset
// with the offset chosen by exhaustive enumeration so that min H0 = 0.
// Immutable after construction.
class IsingModel {
 public:
  // Throws std::invalid_argument for N outside [1, kMaxSpins], out-of-range
  // or self-referencing indices.
  IsingModel(int n_spins, std::vector<Coupling> couplings, std::vector<Field> fields,
             Topology topology = Topology::General);

  // Ferromagnetic ring sigma_0 - sigma_1 - ... - sigma_{N-1} - sigma_0, N >= 3.
  static IsingModel periodic_chain(int n_spins, double coupling, double field = 0.0);
  // Open chain with N-1 bonds, N >= 1.
  static IsingModel open_chain(int n_spins, double coupling, double field = 0.0);

  int n_spins() const { return n_spins_; }
  std::size_t dimension() const { return std::size_t{1} << n_spins_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  const std::vector<Field>& fields() const { return fields_; }
  Topology topology() const { return topology_; }
  double energy_offset() const { return offset_; }

  // Uniform bond strength for chain topologies with identical couplings
  // and no fields; throws std::logic_error otherwise.
  double uniform_coupling() const;
  bool is_uniform_ferro_ring() const;

  double unshifted_energy(SpinConfiguration config) const;
  // Shifted energy, >= 0 with minimum exactly 0.
  double energy(SpinConfiguration config) const;

  // Entry sigma equals energy(sigma).
  const Eigen::VectorXd& h0_diagonal() const { return h0_; }

 private:
  int n_spins_;
  std::vector<Coupling> couplings_;
  std::vector<Field> fields_;
  Topology topology_;
  double offset_ = 0.0;
  Eigen::VectorXd h0_;
};

struct GroundSet {
  std::vector<SpinConfiguration> configurations;

  std::size_t degeneracy() const { return configurations.size(); }
  bool contains(SpinConfiguration config) const;
};

double energy(const IsingModel& model, SpinConfiguration config);
GroundSet ground_states(const IsingModel& model);
Eigen::VectorXd h0_diagonal(const IsingModel& model);

// Coupling and field strengths drawn uniformly from [-coupling_scale,
// coupling_scale] and [-field_scale, field_scale] on the complete graph.
template <class Rng>
IsingModel random_model(int n_spins, Rng& rng, double coupling_scale = 1.0,
                        double field_scale = 0.5);

}  // namespace annealab

#include <random>

namespace annealab {

template <class Rng>
IsingModel random_model(int n_spins, Rng& rng, double coupling_scale, double field_scale) {
  std::uniform_real_distribution<double> coupling(-coupling_scale, coupling_scale);
  std::uniform_real_distribution<double> field(-field_scale, field_scale);
  std::vector<Coupling> couplings;
  for (int i = 0; i < n_spins; ++i)
    for (int j = i + 1; j < n_spins; ++j) couplings.push_back({i, j, coupling(rng)});
  std::vector<Field> fields;
  for (int i = 0; i < n_spins; ++i) fields.push_back({i, field(rng)});
  return IsingModel(n_spins, std::move(couplings), std::move(fields), Topology::General);
}

}  // namespace annealab
