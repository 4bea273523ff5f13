#pragma once

// Built-in experiments.
//
// Dual-rail encoding: logical 0 is a photon in the lower-numbered rail.
// The CNOT uses control rails 1,2 and target rails 3,4.

#include <string>
#include <string_view>
#include <vector>

#include "fockbench/circuit.hpp"

namespace fockbench {

struct ExperimentInfo {
  std::string name;
  std::string description;
};

/// Stable listing, in display order.
const std::vector<ExperimentInfo>& list_experiments();

Circuit single_photon_bs(BeamSplitter::Variant variant, int cutoff = kDefaultCutoff);
Circuit cnot_dualrail(int control, int target, int cutoff = kDefaultCutoff);
Circuit hardy_vertex(double theta, int cutoff = kDefaultCutoff);

/// Photon pattern over modes 1..4 that encodes |control>_L |target>_L.
OccupationVector dual_rail_pattern(int control, int target);

/// Accepts `single_photon_bs_sym`, `single_photon_bs_asym`,
/// `cnot_dualrail` or `cnot_dualrail(c,t)`, and `hardy_vertex` or
/// `hardy_vertex(theta)`. Defaults: c = t = 0, theta = pi/2. Throws
/// std::invalid_argument for unknown names.
Circuit build_experiment(std::string_view name, int cutoff = kDefaultCutoff);

}  // namespace fockbench
