#pragma once

#include <functional>

namespace snv {

enum class VelocityFamily { linear, quadratic, custom };

/// Density-speed map on [0, rho_max]: v(0) = v_max, v non-increasing, C^2.
/// Built-in families: linear v_max(1 - rho/rho_max), quadratic v_max(1 - (rho/rho_max)^2).
struct VelocityModel {
    VelocityFamily family = VelocityFamily::linear;
    double v_max = 1.0;
    double rho_max = 1.0;
    double dv_sup = 1.0; ///< sup |v'|; closed form for built-ins, user-supplied for custom.
    std::function<double(double)> fn;  ///< custom only
    std::function<double(double)> dfn; ///< custom only

    double value(double rho) const;      ///< domain error outside [0, rho_max]
    double derivative(double rho) const; ///< v'(rho), non-positive
};

VelocityModel make_velocity(VelocityFamily family, double v_max, double rho_max);

/// Extension point for a user-supplied (v, v', sup|v'|, v_max) bundle.
/// Validated by dense sampling: v(0) = v_max, v >= 0, v' <= 0, |v'| <= dv_sup.
VelocityModel make_custom_velocity(std::function<double(double)> v,
                                   std::function<double(double)> dv,
                                   double dv_sup, double v_max, double rho_max);

/// Velocity with additive bounded noise, clipped at zero: v_eps = max{0, v(rho) + eps}.
struct StochasticVelocity {
    VelocityModel base;
    double tau = 0.0; ///< noise amplitude, 0 <= tau < v_max
};

/// max{0, v(rho) + eps}; requires rho in [0, rho_max], |eps| <= tau.
double limited_velocity(const StochasticVelocity& sv, double rho, double eps);

/// v'(rho) if v(rho) + eps > 0, else 0 (the single point v + eps = 0 counts as 0).
double limited_velocity_derivative(const StochasticVelocity& sv, double rho, double eps);

/// Closed-form mean of v_eps over eps ~ U(-tau, tau); equals v(rho) when v(rho) >= tau
/// (limiter never active) and exceeds it otherwise. tau = 0 returns v(rho).
double expected_velocity(const StochasticVelocity& sv, double rho);

/// Closed-form variance of v_eps; in [0, tau^2/3], equal to tau^2/3 when v(rho) >= tau.
double velocity_variance(const StochasticVelocity& sv, double rho);

/// The mean as a function of the clean speed w: w when w >= tau, (tau+w)^2/(4 tau) below.
double expected_velocity_of(double w, double tau);

/// rho* with v(rho*) = tau: densities above it can be stalled by negative noise.
double limiter_threshold(const StochasticVelocity& sv);

namespace detail {

/// Raw family formula without the domain check; linear/quadratic extrapolate naturally,
/// custom clamps its input. Used by the solver so that unchecked (negative-control)
/// runs can proceed past out-of-range states.
double base_value_unchecked(const VelocityModel& m, double rho);
double base_derivative_unchecked(const VelocityModel& m, double rho);

} // namespace detail

} // namespace snv
