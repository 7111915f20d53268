#include "snv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snv/common.hpp"
#include "snv/philox.hpp"

namespace snv {

NoisePath sample_noise_path(const NoiseConfig& cfg, double horizon) {
    if (!(cfg.delta_r > 0.0)) throw invariant_error("noise mesh must be resolved before sampling");
    if (!(horizon > 0.0)) throw invariant_error("noise horizon must be positive");
    if (cfg.tau < 0.0) throw config_error("noise.tau must be non-negative");

    NoisePath path;
    path.delta_r = cfg.delta_r;
    path.horizon = horizon;
    path.tau = cfg.tau;

    const int r_t = index_floor(horizon, cfg.delta_r);
    path.values.resize(static_cast<std::size_t>(std::max(r_t, 0)));
    for (int k = 1; k <= r_t; ++k) {
        // Draw index k, so the stream position encodes the noise-cell index directly.
        path.values[k - 1] =
            cfg.tau == 0.0
                ? 0.0
                : -cfg.tau + 2.0 * cfg.tau *
                                 uniform01(cfg.master_seed, cfg.realization_index,
                                           static_cast<std::uint64_t>(k));
    }
    return path;
}

double noise_at(const NoisePath& path, double t) {
    const double slack = 1e-12 * std::max(1.0, path.horizon);
    if (t < -slack || t > path.horizon + slack)
        throw std::domain_error("noise lookup outside [0, horizon]");
    // index_floor provides the right-continuity at mesh points under FP noise.
    int k = index_floor(std::max(t, 0.0), path.delta_r);
    k = std::min(k, path.r_t());
    if (k < 1) return 0.0; // eps(t) = 0 on [0, delta_r)
    return path.values[static_cast<std::size_t>(k - 1)];
}

double noise_total_variation(const NoisePath& path) {
    double tv = 0.0;
    double prev = 0.0; // the path starts at eps = 0
    for (double v : path.values) {
        tv += std::abs(v - prev);
        prev = v;
    }
    return tv;
}

} // namespace snv
