#include "annealab/ising.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace annealab {

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::ChainPeriodic: return "chain-periodic";
    case Topology::ChainOpen: return "chain-open";
    case Topology::General: return "general";
  }
  return "general";
}

Topology topology_from_string(std::string_view name) {
  if (name == "chain-periodic") return Topology::ChainPeriodic;
  if (name == "chain-open") return Topology::ChainOpen;
  if (name == "general") return Topology::General;
  throw std::invalid_argument("unknown topology '" + std::string(name) + "'");
}

SpinConfiguration SpinConfiguration::encode(std::span<const int> spins) {
  if (spins.size() > static_cast<std::size_t>(kMaxSpins))
    throw std::invalid_argument("too many spins to encode");
  std::uint32_t index = 0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] == 1) {
      index |= 1U << i;
    } else if (spins[i] != -1) {
      throw std::invalid_argument("spin values must be +1 or -1");
    }
  }
  return SpinConfiguration(index);
}

std::vector<int> SpinConfiguration::decode(int n_spins) const {
  std::vector<int> spins(static_cast<std::size_t>(n_spins));
  for (int i = 0; i < n_spins; ++i) spins[static_cast<std::size_t>(i)] = spin(i);
  return spins;
}

IsingModel::IsingModel(int n_spins, std::vector<Coupling> couplings, std::vector<Field> fields,
                       Topology topology)
    : n_spins_(n_spins),
      couplings_(std::move(couplings)),
      fields_(std::move(fields)),
      topology_(topology) {
  if (n_spins_ < 1 || n_spins_ > kMaxSpins)
    throw std::invalid_argument("n_spins must lie in [1, " + std::to_string(kMaxSpins) +
                                "], got " + std::to_string(n_spins_));
  for (std::size_t k = 0; k < couplings_.size(); ++k) {
    auto& c = couplings_[k];
    if (c.i < 0 || c.j < 0 || c.i >= n_spins_ || c.j >= n_spins_)
      throw std::invalid_argument("couplings[" + std::to_string(k) + "]: site out of range");
    if (c.i == c.j)
      throw std::invalid_argument("couplings[" + std::to_string(k) + "]: self coupling");
    if (c.i > c.j) std::swap(c.i, c.j);
    if (!std::isfinite(c.strength))
      throw std::invalid_argument("couplings[" + std::to_string(k) + "]: non-finite strength");
  }
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    const auto& f = fields_[k];
    if (f.site < 0 || f.site >= n_spins_)
      throw std::invalid_argument("fields[" + std::to_string(k) + "]: site out of range");
    if (!std::isfinite(f.strength))
      throw std::invalid_argument("fields[" + std::to_string(k) + "]: non-finite strength");
  }

  const std::size_t dim = dimension();
  Eigen::VectorXd raw(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s)
    raw[static_cast<Eigen::Index>(s)] = unshifted_energy(SpinConfiguration(static_cast<std::uint32_t>(s)));
  const double minimum = raw.minCoeff();
  offset_ = -minimum;
  // Subtracting the minimum (rather than adding offset_) makes the argmin
  // entry exactly zero.
  h0_ = raw.array() - minimum;
}

IsingModel IsingModel::periodic_chain(int n_spins, double coupling, double field) {
  if (n_spins < 3) throw std::invalid_argument("periodic chain needs n_spins >= 3");
  std::vector<Coupling> couplings;
  for (int i = 0; i < n_spins; ++i) couplings.push_back({i, (i + 1) % n_spins, coupling});
  std::vector<Field> fields;
  if (field != 0.0)
    for (int i = 0; i < n_spins; ++i) fields.push_back({i, field});
  return IsingModel(n_spins, std::move(couplings), std::move(fields), Topology::ChainPeriodic);
}

IsingModel IsingModel::open_chain(int n_spins, double coupling, double field) {
  std::vector<Coupling> couplings;
  for (int i = 0; i + 1 < n_spins; ++i) couplings.push_back({i, i + 1, coupling});
  std::vector<Field> fields;
  if (field != 0.0)
    for (int i = 0; i < n_spins; ++i) fields.push_back({i, field});
  return IsingModel(n_spins, std::move(couplings), std::move(fields), Topology::ChainOpen);
}

double IsingModel::uniform_coupling() const {
  if (topology_ == Topology::General || couplings_.empty())
    throw std::logic_error("uniform_coupling requires a chain topology");
  const double j = couplings_.front().strength;
  for (const auto& c : couplings_)
    if (c.strength != j) throw std::logic_error("chain couplings are not uniform");
  return j;
}

bool IsingModel::is_uniform_ferro_ring() const {
  if (topology_ != Topology::ChainPeriodic || n_spins_ < 3) return false;
  if (static_cast<int>(couplings_.size()) != n_spins_) return false;
  for (const auto& f : fields_)
    if (f.strength != 0.0) return false;
  const double j = couplings_.front().strength;
  if (j <= 0.0) return false;
  std::vector<int> degree(static_cast<std::size_t>(n_spins_), 0);
  for (const auto& c : couplings_) {
    if (c.strength != j) return false;
    const int d = (c.j - c.i + n_spins_) % n_spins_;
    if (d != 1 && d != n_spins_ - 1) return false;
    ++degree[static_cast<std::size_t>(c.i)];
    ++degree[static_cast<std::size_t>(c.j)];
  }
  return std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; });
}

double IsingModel::unshifted_energy(SpinConfiguration config) const {
  double e = 0.0;
  for (const auto& c : couplings_) e -= c.strength * config.spin(c.i) * config.spin(c.j);
  for (const auto& f : fields_) e -= f.strength * config.spin(f.site);
  return e;
}

double IsingModel::energy(SpinConfiguration config) const {
  return h0_[static_cast<Eigen::Index>(config.index())];
}

bool GroundSet::contains(SpinConfiguration config) const {
  return std::binary_search(configurations.begin(), configurations.end(), config);
}

double energy(const IsingModel& model, SpinConfiguration config) { return model.energy(config); }

GroundSet ground_states(const IsingModel& model) {
  const auto& h0 = model.h0_diagonal();
  GroundSet ground;
  for (Eigen::Index s = 0; s < h0.size(); ++s)
    if (h0[s] <= kDegeneracyTolerance)
      ground.configurations.emplace_back(static_cast<std::uint32_t>(s));
  return ground;
}

Eigen::VectorXd h0_diagonal(const IsingModel& model) { return model.h0_diagonal(); }

}  // namespace annealab
