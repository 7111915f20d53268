#pragma once

#include <Eigen/Dense>

namespace snv {

enum class KernelFamily { concave, constant, linear_decreasing };

/// Look-ahead kernel W on [0, eta]: non-negative, non-increasing, unit integral.
struct KernelSpec {
    KernelFamily family = KernelFamily::concave;
    double eta = 0.0;
};

/// W(x); domain error outside [0, eta].
double kernel_value(const KernelSpec& spec, double x);

/// Antiderivative A of W with A(0) = 0; A(eta) = 1 by normalization.
double kernel_antiderivative(const KernelSpec& spec, double x);

/// W(0).
double kernel_peak(const KernelSpec& spec);

/// sup |W'| on [0, eta].
double kernel_slope_bound(const KernelSpec& spec);

/// Discrete cell weights gamma[k] = A((k+1)dx) - A(k dx) for k < n_eta = floor(eta/dx),
/// computed from the closed-form antiderivative so they are bit-reproducible.
/// The remainder [n_eta*dx, eta] is dropped, hence sum(gamma) <= 1 with equality
/// exactly when dx divides eta.
struct KernelWeights {
    Eigen::VectorXd gamma;
    int n_eta = 0;
    double dx = 0.0;
    double sum() const { return gamma.sum(); }
};

/// Requires 0 < dx <= eta; dx > eta leaves no cell inside the look-ahead window.
KernelWeights kernel_weights(const KernelSpec& spec, double dx);

} // namespace snv
