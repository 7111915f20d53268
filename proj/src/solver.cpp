#include "snv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "snv/common.hpp"

namespace snv {

double cfl_timestep(const SolverConfig& cfg, const KernelWeights& weights) {
    if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety > 1.0)
        throw config_error("sim.cfl_safety must lie in (0, 1]");
    const VelocityModel& m = cfg.velocity.base;
    // Deterministic form of the step bound: noise enters only through its amplitude,
    // so one step serves every realization. Mode NV has no noise term.
    const double tau_eff = cfg.mode == SimMode::NV ? 0.0 : cfg.velocity.tau;
    const double denom = weights.gamma[0] * m.dv_sup * m.rho_max + m.v_max + tau_eff;
    return cfg.cfl_safety * cfg.grid.dx / denom;
}

Eigen::VectorXd discrete_convolution(const Eigen::ArrayXd& rho_extended,
                                     const KernelWeights& weights,
                                     const StochasticVelocity& sv, double eps) {
    const int ne = weights.n_eta;
    const Eigen::Index n = rho_extended.size() - ne;
    if (n < 1) throw invariant_error("extended state is missing its right ghost cells");

    Eigen::VectorXd w(rho_extended.size());
    for (Eigen::Index i = 0; i < rho_extended.size(); ++i)
        w[i] = limited_velocity(sv, rho_extended[i], eps);

    Eigen::VectorXd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = weights.gamma.dot(w.segment(j + 1, ne));
    return v;
}

namespace {

double output_slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

[[noreturn]] void throw_range(int step, double t, double lo, double hi) {
    std::ostringstream os;
    os << "state left [0, rho_max] at step " << step << " (t = " << t << "): min " << lo
       << ", max " << hi << "; the time step violates the CFL bound or the input is invalid";
    throw invariant_error(os.str());
}

} // namespace

Trajectory simulate(const SolverConfig& cfg, const SimOptions& opt) {
    const GridSpec& g = cfg.grid;
    if (g.n_cells < 1) throw config_error("grid window must contain at least one cell");
    if (!(cfg.horizon > 0.0)) throw config_error("sim.T must be positive");
    if (g.x_max - g.x_min < 2.0 * cfg.kernel.eta * (1.0 - 1e-12))
        throw config_error("grid window must span at least 2*eta");
    const StochasticVelocity& sv = cfg.velocity;
    if (!(sv.tau < sv.base.v_max)) throw config_error("tau must be strictly less than v_max");
    if (sv.tau < 0.0) throw config_error("noise.tau must be non-negative");

    const KernelWeights weights = kernel_weights(cfg.kernel, g.dx);
    const int n = g.n_cells;
    const int ne = weights.n_eta;

    Eigen::ArrayXd rho = initial_cell_averages(cfg.initial, g);
    if (rho.minCoeff() < -1e-12 || rho.maxCoeff() > sv.base.rho_max + 1e-12)
        throw config_error("initial values must lie in [0, rho_max]");

    const double T = cfg.horizon;
    const double dt = opt.dt_override > 0.0 ? opt.dt_override : cfl_timestep(cfg, weights);

    double delta_r = cfg.noise.delta_r;
    if (delta_r <= 0.0) {
        delta_r = dt; // one fresh noise value per step
    } else if (delta_r < dt * (1.0 - 1e-9)) {
        throw config_error("noise.delta_r must be at least the solver time step");
    }

    Trajectory out;
    out.grid = g;
    out.dt = dt;
    out.initial = rho;
    out.right_ghost = initial_point_value(cfg.initial, g.x_max);

    // Modes NV and NV-expected-velocity run the identical code path with a zero path,
    // which keeps the tau = 0 reduction bit-exact.
    NoiseConfig ncfg;
    ncfg.tau = cfg.mode == SimMode::sNV ? sv.tau : 0.0;
    ncfg.delta_r = delta_r;
    ncfg.master_seed = cfg.noise.master_seed;
    ncfg.realization_index = cfg.noise.realization_index;
    out.noise = sample_noise_path(ncfg, T);

    // Step plan: full steps of dt, then one shortened step onto T. A remainder within
    // rounding of zero is folded into the last full step instead.
    const int n_full = index_floor(T, dt);
    const double rem = T - n_full * dt;
    int n_total;
    if (n_full == 0)
        n_total = 1;
    else if (rem > dt * 1e-9)
        n_total = n_full + 1;
    else
        n_total = n_full;

    std::vector<double> requested = cfg.output_times;
    std::sort(requested.begin(), requested.end());
    requested.erase(std::unique(requested.begin(), requested.end()), requested.end());
    if (requested.empty() || requested.back() < T - output_slack(T)) requested.push_back(T);
    for (double r : requested)
        if (r < -output_slack(r) || r > T + output_slack(r))
            throw config_error("sim.output_times must lie in [0, T]");

    std::size_t pending = 0;
    auto record = [&](double t, int step, const Eigen::ArrayXd& state) {
        out.times.push_back(t);
        out.steps_at.push_back(step);
        out.states.push_back(state);
    };
    while (pending < requested.size() && requested[pending] <= output_slack(requested[pending])) {
        record(0.0, 0, rho);
        ++pending;
    }

    if (opt.record_every_step) out.every_step_states.push_back(rho);
    out.step_records.reserve(static_cast<std::size_t>(n_total));

    const bool expected_mode = cfg.mode == SimMode::NV_expected_velocity;
    const double rho_cap = sv.base.rho_max;
    const int nb = std::min(ne, n); // boundary-watch width: all cells within eta of an edge

    Eigen::VectorXd w(n + ne), vif(n + 1);
    Eigen::ArrayXd flux(n), flux_shift(n);

    for (int m = 0; m < n_total; ++m) {
        const double tm = m * dt; // exact multiples keep the noise lookup on-mesh
        const double dtm = m == n_total - 1 ? T - tm : dt;
        const double eps = noise_at(out.noise, tm);

        auto speed = [&](double r) {
            const double base = detail::base_value_unchecked(sv.base, r);
            return expected_mode ? expected_velocity_of(base, sv.tau)
                                 : std::max(0.0, base + eps);
        };
        for (int i = 0; i < n; ++i) w[i] = speed(rho[i]);
        w.tail(ne).setConstant(speed(out.right_ghost));

        for (int k = 0; k <= n; ++k) vif[k] = weights.gamma.dot(w.segment(k, ne));

        // Upwind fluxes: G[k] = rho_{k-1} V_{k-1}; the left ghost copies cell 0.
        const double lam = dtm / g.dx;
        const double g0 = rho[0] * vif[0];
        flux = rho * vif.tail(n).array();
        flux_shift[0] = g0;
        flux_shift.tail(n - 1) = flux.head(n - 1);

        StepRecord rec;
        rec.t = tm;
        rec.dt = dtm;
        rec.eps = eps;
        rec.flux_in = g0;
        rec.flux_out = flux[n - 1];
        out.step_records.push_back(rec);

        rho -= lam * (flux - flux_shift);

        if (opt.strict_range &&
            (rho.minCoeff() < -1e-12 || rho.maxCoeff() > rho_cap + 1e-12))
            throw_range(m, tm + dtm, rho.minCoeff(), rho.maxCoeff());

        for (int i = 0; i < nb; ++i) {
            const double dev = std::max(std::abs(rho[i] - out.initial[i]),
                                        std::abs(rho[n - 1 - i] - out.initial[n - 1 - i]));
            if (dev > out.boundary_max_dev) out.boundary_max_dev = dev;
        }
        if (out.boundary_max_dev > 1e-8) out.boundary_warning = true;

        if (opt.record_v_history) out.v_history.push_back(vif);
        if (opt.record_every_step) out.every_step_states.push_back(rho);

        const double t_after = m == n_total - 1 ? T : (m + 1) * dt;
        while (pending < requested.size() &&
               t_after >= requested[pending] - output_slack(requested[pending])) {
            record(t_after, m + 1, rho);
            ++pending;
        }
    }

    out.n_steps = n_total;
    return out;
}

} // namespace snv
