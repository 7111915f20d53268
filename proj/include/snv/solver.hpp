#pragma once

#include <vector>

#include <Eigen/Dense>

#include "snv/grid.hpp"
#include "snv/kernel.hpp"
#include "snv/noise.hpp"
#include "snv/velocity.hpp"

namespace snv {

enum class SimMode { sNV, NV, NV_expected_velocity };

struct SolverConfig {
    GridSpec grid;
    KernelSpec kernel;
    StochasticVelocity velocity;
    NoiseConfig noise;   ///< seed, realization index, optional noise mesh; tau comes from velocity
    InitialData initial;
    double horizon = 0.0;              ///< T
    std::vector<double> output_times;  ///< empty resolves to {T}; T is always recorded
    SimMode mode = SimMode::sNV;
    double cfl_safety = 1.0;           ///< in (0, 1]
};

struct SimOptions {
    bool record_every_step = false; ///< keep the state after every step (diagnostics)
    bool record_v_history = false;  ///< keep per-step interface velocities (diagnostics, traces)
    bool strict_range = true;       ///< throw when a cell leaves [0, rho_max]; off for negative controls
    double dt_override = 0.0;       ///< > 0: use this step instead of the CFL value (shared time grids)
};

struct StepRecord {
    double t = 0.0;   ///< step start time
    double dt = 0.0;  ///< actual step (the final step may be shorter)
    double eps = 0.0; ///< noise value in force during the step
    double flux_in = 0.0;  ///< upwind flux through the left window edge
    double flux_out = 0.0; ///< upwind flux through the right window edge
};

struct Trajectory {
    GridSpec grid;
    double dt = 0.0; ///< nominal CFL step
    Eigen::ArrayXd initial;
    double right_ghost = 0.0; ///< frozen ghost density rho0(x_max)

    std::vector<double> times;  ///< recorded output times (step times >= the requested ones)
    std::vector<int> steps_at;  ///< step index of each recorded state
    std::vector<Eigen::ArrayXd> states;

    std::vector<StepRecord> step_records;             ///< one per executed step
    std::vector<Eigen::VectorXd> v_history;           ///< per step, n_cells+1 entries: [j] = V_{j-1}
    std::vector<Eigen::ArrayXd> every_step_states;    ///< states at t0, t1, ...; filled on request
    NoisePath noise;

    bool boundary_warning = false; ///< solution moved near a window edge; widen the window
    double boundary_max_dev = 0.0;
    int n_steps = 0;

    const Eigen::ArrayXd& final_state() const { return states.back(); }
};

/// Deterministic step bound dt = safety * dx / (gamma0 sup|v'| rho_max + v_max + tau);
/// mode NV drops the tau term (the two coincide for tau = 0). Frozen before stepping
/// so every realization of an ensemble shares one time grid.
double cfl_timestep(const SolverConfig& cfg, const KernelWeights& weights);

/// V[j] = sum_k gamma[k] * max{0, v(rho_extended[j+k+1]) + eps} for j = 0..n-1 where
/// n = rho_extended.size() - n_eta; the tail of rho_extended holds the right ghost cells.
Eigen::VectorXd discrete_convolution(const Eigen::ArrayXd& rho_extended,
                                     const KernelWeights& weights,
                                     const StochasticVelocity& sv, double eps);

/// Advances the conservative update rho_j -= lambda (rho_j V_j - rho_{j-1} V_{j-1})
/// from 0 to T with the frozen CFL step, shortening the final step to land exactly
/// on T. Left ghost extrapolates the current leftmost cell; right ghosts stay frozen
/// at rho0(x_max). A warning fires when the solution within eta of either window edge
/// drifts from its initial value by more than 1e-8.
Trajectory simulate(const SolverConfig& cfg, const SimOptions& opt = {});

} // namespace snv
