#pragma once

#include <string>
#include <vector>

#include "snv/solver.hpp"

namespace snv {

struct DiagnosticsThresholds {
    double max_principle = 1e-12; ///< allowed excess outside [inf rho0, sup rho0]
    double mass_drift = 1e-10;    ///< relative, after boundary-flux correction
    double entropy = 1e-12;       ///< allowed positive part of the entropy residual
    double bound_slack = 1e-9;    ///< relative slack on analytic-bound comparisons
};

/// Machine-readable verdict of every discrete invariant the scheme guarantees.
/// All checks are pure functions of the recorded trajectory.
struct DiagnosticsReport {
    bool max_principle_ok = false;
    double max_excess = 0.0;

    bool mass_ok = false;
    double mass_drift = 0.0;

    std::vector<double> tv_series; ///< ghost-extended TV after every step
    double tv_initial = 0.0;
    double tv_final = 0.0;
    double tv_bound_eps = 0.0;   ///< exp(T C) TV(rho0) with the noise-dependent constant
    double tv_bound_indep = 0.0; ///< exp(T C~) TV(rho0) with the noise-free constant
    bool tv_ok = false;

    double tv_space_time = 0.0;
    double tv_space_time_bound = 0.0;
    bool tv_space_time_ok = false;

    double step_tv_worst_ratio = 0.0; ///< worst dx sum|drho| / (dt K(T)) over steps
    bool step_tv_ok = false;

    double entropy_worst = 0.0;
    bool entropy_ok = false;
    std::vector<double> entropy_c_grid;

    double k_eps = 0.0; ///< stability constant from observed TV and L1 suprema
    double k_cap = 0.0; ///< deterministic cap using the analytic TV bound and conservation
    bool stability_ok = false;
    double dv_sup_realized = 0.0; ///< largest |v_eps'| actually evaluated along the run

    /// Velocity-increment bound |V_j - V_{j-1}| <= dx W(0) eta ||v_eps|| ||rho||.
    /// Informational only: the bound can be exceeded for discontinuous data (see README),
    /// so it never gates pass().
    double v_diff_max = 0.0;
    double v_diff_bound = 0.0;
    bool v_diff_within = false;

    double v_envelope_sup = 0.0; ///< a-priori sup bound for the convolved velocity field
    bool boundary_warning = false;

    DiagnosticsThresholds thresholds; ///< the limits this report was evaluated against

    bool pass() const;
    std::string summary() const; ///< one line per check
};

/// 9 evenly spaced entropy probes in [0, rho_max] plus the distinct plateau values of rho0.
std::vector<double> default_c_grid(const SolverConfig& cfg);

/// Requires a trajectory recorded with every-step states and velocity history.
/// Empty c_grid selects default_c_grid(cfg).
DiagnosticsReport run_diagnostics(const Trajectory& traj, const SolverConfig& cfg,
                                  const std::vector<double>& c_grid = {},
                                  const DiagnosticsThresholds& thr = {});

} // namespace snv
