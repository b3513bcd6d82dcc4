#pragma once

#include <filesystem>
#include <string>

#include "annealab/ising.hpp"

namespace annealab {

// Parses a model definition written in YAML:
//
//   n_spins: 4
//   topology: chain-periodic        # chain-periodic | chain-open | general
//   couplings: [[0, 1, 1.0], [1, 2, 1.0], [2, 3, 1.0], [3, 0, 1.0]]
//   fields: [[0, 0.1]]
//
// For chain topologies `coupling: J` (and optionally `field: h`) may replace
// the explicit lists. Indices are 0-based. Errors throw ParseError naming
// the offending entry, e.g. "couplings[2]: site 7 out of range".
IsingModel parse_model(const std::string& yaml_text);
IsingModel load_model_file(const std::filesystem::path& path);

}  // namespace annealab
