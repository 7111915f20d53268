#include "snv/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snv/common.hpp"

namespace snv {

namespace {

void require_spec(const KernelSpec& spec) {
    if (!(spec.eta > 0.0)) throw config_error("kernel.eta must be positive");
}

} // namespace

double kernel_value(const KernelSpec& spec, double x) {
    require_spec(spec);
    const double eta = spec.eta;
    if (x < 0.0 || x > eta) throw std::domain_error("kernel argument outside [0, eta]");
    switch (spec.family) {
        case KernelFamily::concave:
            return 3.0 * (eta * eta - x * x) / (2.0 * eta * eta * eta);
        case KernelFamily::constant:
            return 1.0 / eta;
        case KernelFamily::linear_decreasing:
            return 2.0 * (eta - x) / (eta * eta);
    }
    throw invariant_error("unhandled kernel family");
}

double kernel_antiderivative(const KernelSpec& spec, double x) {
    require_spec(spec);
    const double eta = spec.eta;
    if (x < 0.0 || x > eta) throw std::domain_error("kernel argument outside [0, eta]");
    switch (spec.family) {
        case KernelFamily::concave:
            return (3.0 * eta * eta * x - x * x * x) / (2.0 * eta * eta * eta);
        case KernelFamily::constant:
            return x / eta;
        case KernelFamily::linear_decreasing:
            return (2.0 * eta * x - x * x) / (eta * eta);
    }
    throw invariant_error("unhandled kernel family");
}

double kernel_peak(const KernelSpec& spec) {
    require_spec(spec);
    switch (spec.family) {
        case KernelFamily::concave: return 3.0 / (2.0 * spec.eta);
        case KernelFamily::constant: return 1.0 / spec.eta;
        case KernelFamily::linear_decreasing: return 2.0 / spec.eta;
    }
    throw invariant_error("unhandled kernel family");
}

double kernel_slope_bound(const KernelSpec& spec) {
    require_spec(spec);
    switch (spec.family) {
        case KernelFamily::concave: return 3.0 / (spec.eta * spec.eta);
        case KernelFamily::constant: return 0.0;
        case KernelFamily::linear_decreasing: return 2.0 / (spec.eta * spec.eta);
    }
    throw invariant_error("unhandled kernel family");
}

KernelWeights kernel_weights(const KernelSpec& spec, double dx) {
    require_spec(spec);
    if (!(dx > 0.0)) throw config_error("grid.dx must be positive");
    if (dx > spec.eta * (1.0 + 4e-12))
        throw config_error("grid.dx must not exceed kernel.eta (no cell inside the look-ahead window)");

    KernelWeights w;
    w.dx = dx;
    w.n_eta = index_floor(spec.eta, dx);
    w.gamma.resize(w.n_eta);

    // Endpoints clamp to eta: k*dx can land one ulp past eta when dx divides it.
    double lo = 0.0;
    for (int k = 0; k < w.n_eta; ++k) {
        const double hi = kernel_antiderivative(spec, std::min((k + 1) * dx, spec.eta));
        w.gamma[k] = hi - lo;
        lo = hi;
    }
    return w;
}

} // namespace snv
