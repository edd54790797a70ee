#pragma once

#include "gemt/config.hpp"
#include "gemt/oracles.hpp"

namespace gemt {

// Instantiates the adapters named in config.oracle_selection. Remote roles
// read their endpoints from the GEM_* environment variables.
OracleSet make_oracles(const RunConfig& config);

} // namespace gemt
