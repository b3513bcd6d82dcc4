#include "annealab/model_file.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "annealab/error.hpp"

namespace annealab {
namespace {

template <class T>
T scalar_as(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) throw ParseError(where + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(where + ": cannot convert '" + node.Scalar() + "'");
  }
}

int site_index(const YAML::Node& node, int n_spins, const std::string& where) {
  const double raw = scalar_as<double>(node, where);
  const int site = static_cast<int>(raw);
  if (static_cast<double>(site) != raw) throw ParseError(where + ": site index must be an integer");
  if (site < 0 || site >= n_spins)
    throw ParseError(where + ": site " + std::to_string(site) + " out of range for n_spins=" +
                     std::to_string(n_spins));
  return site;
}

}  // namespace

IsingModel parse_model(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  if (!root.IsMap()) throw ParseError("model: expected a key-value table");
  if (!root["n_spins"]) throw ParseError("model: missing n_spins");
  const int n_spins = scalar_as<int>(root["n_spins"], "n_spins");
  if (n_spins < 1 || n_spins > kMaxSpins)
    throw ParseError("n_spins: " + std::to_string(n_spins) + " outside [1, " +
                     std::to_string(kMaxSpins) + "]");

  Topology topology = Topology::General;
  if (root["topology"]) {
    try {
      topology = topology_from_string(scalar_as<std::string>(root["topology"], "topology"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("topology: ") + e.what());
    }
  }

  std::vector<Coupling> couplings;
  if (const auto list = root["couplings"]) {
    if (!list.IsSequence()) throw ParseError("couplings: expected a list of [i, j, J]");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "couplings[" + std::to_string(k) + "]";
      const auto entry = list[k];
      if (!entry.IsSequence() || entry.size() != 3) throw ParseError(where + ": expected [i, j, J]");
      Coupling c{site_index(entry[0], n_spins, where), site_index(entry[1], n_spins, where),
                 scalar_as<double>(entry[2], where)};
      if (c.i == c.j) throw ParseError(where + ": self coupling");
      if (c.i > c.j) std::swap(c.i, c.j);
      couplings.push_back(c);
    }
  } else if (const auto j = root["coupling"]) {
    const double strength = scalar_as<double>(j, "coupling");
    if (topology == Topology::ChainPeriodic) {
      if (n_spins < 3) throw ParseError("coupling: chain-periodic needs n_spins >= 3");
      for (int i = 0; i < n_spins; ++i) couplings.push_back({i, (i + 1) % n_spins, strength});
    } else if (topology == Topology::ChainOpen) {
      for (int i = 0; i + 1 < n_spins; ++i) couplings.push_back({i, i + 1, strength});
    } else {
      throw ParseError("coupling: scalar coupling needs a chain topology");
    }
  }

  std::vector<Field> fields;
  if (const auto list = root["fields"]) {
    if (!list.IsSequence()) throw ParseError("fields: expected a list of [i, h]");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "fields[" + std::to_string(k) + "]";
      const auto entry = list[k];
      if (!entry.IsSequence() || entry.size() != 2) throw ParseError(where + ": expected [i, h]");
      fields.push_back({site_index(entry[0], n_spins, where), scalar_as<double>(entry[1], where)});
    }
  } else if (const auto h = root["field"]) {
    const double strength = scalar_as<double>(h, "field");
    for (int i = 0; i < n_spins; ++i) fields.push_back({i, strength});
  }

  try {
    return IsingModel(n_spins, std::move(couplings), std::move(fields), topology);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

IsingModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("model file '" + path.string() + "' cannot be opened");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_model(text.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace annealab
