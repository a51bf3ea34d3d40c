#pragma once

#include <string>
#include <string_view>

#include "noisy_majority/harness.hpp"

namespace noisy_majority {

// Parses a YAML experiment document, fills every default and validates it.
// Throws ParseError (with a line number when known) for malformed input and
// ValidationError for well-formed documents that violate a constraint.
//
//   n: 100000            # required
//   p_grid: [0.2, 1/3]   # required; entries may be decimals or a/b fractions
//   trials: 100          # required
//   seed: 42             # required
//   dynamics: three_majority   # | two_choices | undecided_state
//   s0: symmetric        # or an integer bias with s0 + n even
//   t_max: 461           # default ceil(40 ln n)
//   gamma: 1.0
//   epsilon: 0.05
//   record_mode: events_only   # | full_trajectory
//   metastability_window: 0    # 0 = up to t_max
//   undecided_noise: all_symbols   # | opinions_only
//   sweep:
//     warmup: 461        # default ceil(40 ln n)
//     horizon: 2000      # default max(2000, warmup + 1)
//     s0: 100000         # default n
ExperimentConfig parse_config(std::string_view document);

// Canonical YAML with every field spelled out; parse_config reads it back
// to an equal config.
std::string serialize_config(const ExperimentConfig& cfg);

std::string to_string(Dynamics d);
std::string to_string(RecordMode m);
std::string to_string(UndecidedNoise m);

}  // namespace noisy_majority
