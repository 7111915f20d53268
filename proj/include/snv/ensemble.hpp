#pragma once

#include <vector>

#include <Eigen/Dense>

#include "snv/solver.hpp"

namespace snv {

enum class ReferenceKind { NV, NV_expected_velocity, none };

struct EnsembleConfig {
    SolverConfig base; ///< executed in mode sNV; realization i uses noise stream (seed, i)
    int n_realizations = 1;
    std::vector<double> quantiles{0.05, 0.95}; ///< probabilities strictly in (0, 1)
    ReferenceKind reference = ReferenceKind::NV;
};

struct Distances {
    double l1 = 0.0;
    double l2 = 0.0; ///< sum of squares (no square root), matching the l1/linf scaling
    double linf = 0.0;
};

/// Pointwise statistics over N realizations at each recorded output time.
/// All reductions use fixed-order pairwise summation, so the result is bit-identical
/// for any thread count and execution order.
struct EnsembleStats {
    std::vector<double> times;
    double dt = 0.0;
    int n_realizations = 0;

    std::vector<Eigen::ArrayXd> mean;
    std::vector<Eigen::ArrayXd> variance; ///< unbiased; empty when N = 1
    std::vector<Eigen::ArrayXd> lo, hi;   ///< pointwise min/max across realizations

    std::vector<double> quantile_ps;
    std::vector<std::vector<Eigen::ArrayXd>> quantile_values; ///< [time][p]

    std::vector<Eigen::ArrayXd> reference; ///< empty when reference == none
    std::vector<Distances> dist_scaled;    ///< mean vs reference, dx-weighted
    std::vector<Distances> dist_unscaled;

    bool boundary_warning = false; ///< any realization (or the reference) drifted near a window edge
};

/// Runs the realizations (optionally across threads), aggregates, and attaches the
/// reference run on the identical grid and time step. A realization that violates a
/// scheme invariant aborts the ensemble, reporting its index.
EnsembleStats run_ensemble(const EnsembleConfig& cfg, int threads = 1);

Distances distance_metrics_scaled(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double dx);
Distances distance_metrics_unscaled(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);

/// Order-statistic quantile with linear interpolation between ranks (h = (N-1) p),
/// applied per cell over the rows of `samples`.
Eigen::ArrayXd column_quantile(const Eigen::MatrixXd& samples, double p);

/// Per-density moment curves: clean speed, closed-form mean and variance of the
/// noisy speed, and the attainable envelope [max{0, v - tau}, max{0, v + tau}].
struct MomentOverlayRow {
    double rho = 0.0;
    double v = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

std::vector<MomentOverlayRow> moment_overlay(const StochasticVelocity& sv,
                                             const std::vector<double>& rho_grid);

} // namespace snv
