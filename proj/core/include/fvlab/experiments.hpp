#pragma once

#include <iosfwd>

#include "fvlab/config.hpp"
#include "fvlab/report.hpp"

namespace fvlab {

// Named experiments. Each consumes its config (unknown keys raise
// ConfigError) and returns a report that is deterministic given the config,
// seed and verdict thresholds.

// Both sides of the moment duality on one benchmark instance: forward Moran
// at large N against the backward dual, quenched (one shared path) or
// annealed (fresh path per replicate on each side).
Report run_duality_check(Config& cfg);

// Random-instance sweep of the generator identity and the explicit bound,
// plus the N-sweep of the finite-population generator gap and the
// with/without-replacement extension gap.
Report run_generator_check(Config& cfg);

// Death fraction of the first degree change from degree 1 against
// beta'/(beta'+alpha), absorption under the horizon-extension policy, and
// absorption-time summary statistics.
Report run_degree_chain(Config& cfg);

// Dual-based long-time limits for the indicator family: neutral comparison
// against the mutation chain's stationary law, initial-measure independence
// of the forward process, sum-to-one of the indicator limits, and joint
// moment stabilization of the measure-environment pair.
Report run_ergodic_limit(Config& cfg);

// Single trajectory exports.
void run_moran_sim(Config& cfg, std::ostream& table_out);
void run_dual_sim(Config& cfg, std::ostream& table_out);

}  // namespace fvlab
