#pragma once

#include <cstdint>
#include <vector>

namespace snv {

struct NoiseConfig {
    double tau = 0.0;
    double delta_r = 0.0; ///< noise mesh; the solver resolves 0 to its time step
    std::uint64_t master_seed = 0;
    std::uint64_t realization_index = 0;
};

/// One realization of the piecewise-constant noise on [0, horizon]:
/// eps(t) = eps^k on [k delta_r, (k+1) delta_r) for k = 1..r_t, and 0 on [0, delta_r).
/// Every value lies in [-tau, tau]; the path is right-continuous and of bounded variation.
struct NoisePath {
    std::vector<double> values; ///< values[k-1] = eps^k
    double delta_r = 0.0;
    double horizon = 0.0;
    double tau = 0.0;
    int r_t() const { return static_cast<int>(values.size()); }
};

/// Draws r_t = floor(horizon/delta_r) i.i.d. U(-tau, tau) values from the counter-based
/// stream keyed by (master_seed, realization_index): pure, order-independent, and
/// bit-identical for identical inputs. tau = 0 produces exact zeros.
NoisePath sample_noise_path(const NoiseConfig& cfg, double horizon);

/// Right-continuous lookup; domain error outside [0, horizon].
double noise_at(const NoisePath& path, double t);

/// Jump-sum total variation of the path, including the initial jump away from eps(0) = 0.
/// Bounded by 2 tau r_t.
double noise_total_variation(const NoisePath& path);

} // namespace snv
