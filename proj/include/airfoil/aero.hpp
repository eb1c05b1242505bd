#pragma once

#include <optional>
#include <vector>

#include "airfoil/geometry.hpp"

namespace airfoil::aero {

enum class CpBackend { panel, xfoil };

/// Coefficient-of-pressure values at the profile's panel midpoints,
/// aligned with the traversal order.
struct CpDistribution {
  std::vector<double> cp;
  double alpha = 0.0;  // degrees
  CpBackend backend = CpBackend::panel;
};

/// Reduced force measures under the unit-freestream convention (density,
/// speed and reference pressure all 1, so dynamic pressure is 0.5).
/// lift_measure is positive upward, drag_measure positive downstream.
/// cl/cd are reported only by the external solver.
struct AeroMeasures {
  double lift_measure = 0.0;
  double drag_measure = 0.0;
  std::optional<double> cl;
  std::optional<double> cd;
};

/// Inviscid Hess-Smith solution: one constant-strength source per panel
/// plus a single global vortex, flow tangency at panel midpoints and a
/// trailing-edge Kutta condition. Cp_i = 1 - V_t,i^2.
///
/// Throws GeometryError for an open, self-intersecting or negative
/// thickness profile and for panels shorter than 1e-5 chord; SolverError
/// (naming the condition estimate) when the dense system is numerically
/// singular.
CpDistribution solve_cp_panel(const geom::AirfoilProfile& profile,
                              double alpha_deg);

/// Sums panel pressure forces into the lift and drag measures:
///   LM =  sum_i 0.5 Cp_i dx_i
///   DM = -sum_i 0.5 Cp_i dy_i
/// with dx_i, dy_i the panel steps along the traversal. For this
/// counterclockwise traversal these signs make positive LM an upward
/// force and positive DM a downstream force.
AeroMeasures compute_measures(const CpDistribution& cp,
                              const geom::AirfoilProfile& profile);

enum class RewardMode { drag_min, lift_max };

struct RewardOptions {
  // Score drag_min as -(DM + LM) instead of -DM - |LM|.
  bool literal_ra = false;
};

/// Per-step reward: drag_min -> -DM - |LM| (deviation from zero lift is
/// penalized in magnitude); lift_max -> LM.
double reward_from_measures(const AeroMeasures& measures, RewardMode mode,
                            const RewardOptions& options = {});

}  // namespace airfoil::aero
