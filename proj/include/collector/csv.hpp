#pragma once

#include "collector/bounds.hpp"
#include "collector/dynamics.hpp"
#include "collector/lyapunov.hpp"
#include "collector/optimize.hpp"

#include <ostream>
#include <string>

namespace collector::csv {

inline constexpr const char* kSchemaVersion = "collector-csv v1";

/// %.17g round-trip formatting; identical inputs give identical bytes.
std::string num(double v);

void estimate_header(std::ostream& os);
void estimate_row(std::ostream& os, const Policy& p, const LyapEstimate& e);

/// Bound rows share the estimate schema with method = "bound:<name>".
void bound_row(std::ostream& os, const Policy& p, const std::string& name,
               const BoundValue& b, std::uint64_t seed);

void heatmap_header(std::ostream& os);
void heatmap_row(std::ostream& os, const GridCell& c);

void trajectory_header(std::ostream& os);
/// step, logX, logY, epsilon, delta rows reconstructed from a trajectory and
/// the draws that produced it.
void trajectory_rows(std::ostream& os, const CollectorState& s0, const LogTrajectory& traj,
                     const std::vector<EnvPair>& draws);

} // namespace collector::csv
