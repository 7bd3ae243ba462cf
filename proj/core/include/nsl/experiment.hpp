#pragma once

#include "nsl/config.hpp"

namespace nsl {

/// Runs the configured experiment, writing CSV outputs and a summary.json
/// into cfg.out. Returns 0 when every asserted invariant holds, 2 otherwise.
/// Deterministic for a fixed config and seed.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace nsl
