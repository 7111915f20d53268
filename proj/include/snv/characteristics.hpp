#pragma once

#include <string>
#include <vector>

#include "snv/solver.hpp"

namespace snv {

struct TraceStart {
    double t0 = 0.0;
    double x0 = 0.0;
};

/// One vehicle path x(t) advanced by explicit Euler through the recorded velocity field.
struct CharacteristicTrace {
    double x0 = 0.0;
    double t0 = 0.0;
    std::vector<double> t; ///< sample times on the solver time grid
    std::vector<double> x;
    bool clipped = false; ///< left the window; trace truncated at the edge
    bool failed = false;  ///< start rejected; other traces unaffected
    std::string error;
};

/// x_{m+1} = x_m + dt_m * V[cell containing x_m] on the solver's own time mesh.
/// The velocity is the piecewise-constant cell value by default; `interpolate`
/// switches to linear interpolation between cell centers (plot smoothing only).
/// Requires a trajectory recorded with v_history.
std::vector<CharacteristicTrace> trace_characteristics(const Trajectory& traj,
                                                       const std::vector<TraceStart>& starts,
                                                       bool interpolate = false);

/// Largest sorted-order violation among traces sharing a start time, 0 when none.
/// Nearest-cell lookup quantizes velocities, so violations up to about dx are expected.
double max_order_inversion(const std::vector<CharacteristicTrace>& traces);

} // namespace snv
