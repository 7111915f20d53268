#include "snv/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "snv/common.hpp"

namespace snv {

Distances distance_metrics_scaled(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double dx) {
    Distances d = distance_metrics_unscaled(a, b);
    d.l1 *= dx;
    d.l2 *= dx;
    return d;
}

Distances distance_metrics_unscaled(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
    if (a.size() != b.size()) throw invariant_error("distance inputs differ in length");
    const Eigen::ArrayXd diff = a - b;
    const Eigen::ArrayXd ad = diff.abs();
    const Eigen::ArrayXd sq = diff * diff;
    Distances d;
    d.l1 = pairwise_sum(ad.data(), static_cast<std::size_t>(ad.size()));
    d.l2 = pairwise_sum(sq.data(), static_cast<std::size_t>(sq.size()));
    d.linf = ad.size() > 0 ? ad.maxCoeff() : 0.0;
    return d;
}

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const std::size_t lo = std::min(static_cast<std::size_t>(std::floor(h)), n - 2);
    const double w = h - static_cast<double>(lo);
    return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

Eigen::ArrayXd column_quantile(const Eigen::MatrixXd& samples, double p) {
    Eigen::ArrayXd out(samples.cols());
    std::vector<double> col(static_cast<std::size_t>(samples.rows()));
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
        for (Eigen::Index i = 0; i < samples.rows(); ++i)
            col[static_cast<std::size_t>(i)] = samples(i, j);
        std::sort(col.begin(), col.end());
        out[j] = sorted_quantile(col, p);
    }
    return out;
}

EnsembleStats run_ensemble(const EnsembleConfig& cfg, int threads) {
    if (cfg.n_realizations < 1) throw config_error("ensemble.n must be at least 1");
    for (double p : cfg.quantiles)
        if (!(p > 0.0 && p < 1.0))
            throw config_error("ensemble.quantiles must lie strictly in (0, 1)");

    SolverConfig base = cfg.base;
    base.mode = SimMode::sNV;
    const int n_real = cfg.n_realizations;

    // The first realization resolves the shared time grid and the recorded times.
    const KernelWeights weights = kernel_weights(base.kernel, base.grid.dx);
    const double dt = cfl_timestep(base, weights);
    SimOptions opt;
    opt.dt_override = dt;

    base.noise.realization_index = 0;
    Trajectory first;
    try {
        first = simulate(base, opt);
    } catch (const config_error&) {
        throw; // realization 0 doubles as the validator of the shared configuration
    } catch (const std::exception& e) {
        throw invariant_error(std::string("realization 0 failed: ") + e.what());
    }

    const int cells = base.grid.n_cells;
    const std::size_t n_times = first.times.size();

    EnsembleStats stats;
    stats.times = first.times;
    stats.dt = dt;
    stats.n_realizations = n_real;
    stats.quantile_ps = cfg.quantiles;

    std::vector<Eigen::MatrixXd> slabs(n_times);
    for (std::size_t t = 0; t < n_times; ++t) {
        slabs[t].resize(n_real, cells);
        slabs[t].row(0) = first.states[t].matrix().transpose();
    }

    // Independent realizations; any order. Slab rows are indexed by realization, and all
    // reductions below are fixed-order, so the result does not depend on the thread count.
    std::atomic<int> next{1};
    std::mutex err_mutex;
    std::atomic<bool> failed{false};
    std::atomic<bool> any_warning{first.boundary_warning};
    int err_index = -1;
    std::string err_what;

    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_real || failed.load()) return;
            SolverConfig run = base;
            run.noise.realization_index = static_cast<std::uint64_t>(i);
            try {
                Trajectory traj = simulate(run, opt);
                if (traj.boundary_warning) any_warning.store(true);
                for (std::size_t t = 0; t < n_times; ++t)
                    slabs[t].row(i) = traj.states[t].matrix().transpose();
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (err_index < 0 || i < err_index) {
                    err_index = i;
                    err_what = e.what();
                }
                failed.store(true);
                return;
            }
        }
    };

    const int pool = std::clamp(threads, 1, std::max(1, n_real - 1));
    if (n_real > 1) {
        std::vector<std::thread> team;
        team.reserve(static_cast<std::size_t>(pool));
        for (int k = 0; k < pool; ++k) team.emplace_back(worker);
        for (std::thread& th : team) th.join();
    }
    if (failed.load()) {
        std::ostringstream os;
        os << "realization " << err_index << " failed: " << err_what;
        throw invariant_error(os.str());
    }

    // Pointwise statistics; pairwise sums keep them bit-identical across thread counts.
    std::vector<double> buf(static_cast<std::size_t>(n_real));
    for (std::size_t t = 0; t < n_times; ++t) {
        const Eigen::MatrixXd& s = slabs[t];
        Eigen::ArrayXd mean(cells), var(cells), lo(cells), hi(cells);
        for (int j = 0; j < cells; ++j) {
            const double* col = s.col(j).data();
            const double cmin = s.col(j).minCoeff();
            const double cmax = s.col(j).maxCoeff();
            lo[j] = cmin;
            hi[j] = cmax;
            if (cmin == cmax) {
                // A constant sample has that constant as mean and zero variance,
                // exactly; rounding in the reduction must not blur this (tau = 0).
                mean[j] = cmin;
                if (n_real > 1) var[j] = 0.0;
                continue;
            }
            const double m = std::clamp(
                pairwise_sum(col, static_cast<std::size_t>(n_real)) / n_real, cmin, cmax);
            mean[j] = m;
            if (n_real > 1) {
                for (int i = 0; i < n_real; ++i) {
                    const double d = col[i] - m;
                    buf[static_cast<std::size_t>(i)] = d * d;
                }
                var[j] = pairwise_sum(buf.data(), static_cast<std::size_t>(n_real)) /
                         (n_real - 1);
            }
        }
        stats.mean.push_back(std::move(mean));
        if (n_real > 1) stats.variance.push_back(std::move(var));
        stats.lo.push_back(std::move(lo));
        stats.hi.push_back(std::move(hi));

        std::vector<Eigen::ArrayXd> qs;
        if (!cfg.quantiles.empty()) {
            qs.assign(cfg.quantiles.size(), Eigen::ArrayXd(cells));
            std::vector<double> col(static_cast<std::size_t>(n_real));
            for (int j = 0; j < cells; ++j) {
                for (int i = 0; i < n_real; ++i) col[static_cast<std::size_t>(i)] = s(i, j);
                std::sort(col.begin(), col.end());
                for (std::size_t q = 0; q < cfg.quantiles.size(); ++q)
                    qs[q][j] = sorted_quantile(col, cfg.quantiles[q]);
            }
        }
        stats.quantile_values.push_back(std::move(qs));
    }

    if (cfg.reference != ReferenceKind::none) {
        SolverConfig ref = base;
        ref.mode = cfg.reference == ReferenceKind::NV ? SimMode::NV
                                                      : SimMode::NV_expected_velocity;
        // Same grid, step, and ghost policy: the distances measure the noise effect only.
        Trajectory rt = simulate(ref, opt);
        if (rt.boundary_warning) any_warning.store(true);
        for (std::size_t t = 0; t < n_times; ++t) {
            stats.reference.push_back(rt.states[t]);
            stats.dist_scaled.push_back(
                distance_metrics_scaled(stats.mean[t], rt.states[t], base.grid.dx));
            stats.dist_unscaled.push_back(
                distance_metrics_unscaled(stats.mean[t], rt.states[t]));
        }
    }
    stats.boundary_warning = any_warning.load();
    return stats;
}

std::vector<MomentOverlayRow> moment_overlay(const StochasticVelocity& sv,
                                             const std::vector<double>& rho_grid) {
    std::vector<MomentOverlayRow> rows;
    rows.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        MomentOverlayRow r;
        r.rho = rho;
        r.v = sv.base.value(rho);
        r.mean = expected_velocity(sv, rho);
        r.variance = velocity_variance(sv, rho);
        r.lo = std::max(0.0, r.v - sv.tau);
        r.hi = std::max(0.0, r.v + sv.tau);
        rows.push_back(r);
    }
    return rows;
}

} // namespace snv
