#include "snv/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snv/common.hpp"

namespace snv {

namespace {

void check_rho(const VelocityModel& m, double rho) {
    const double tol = 1e-9 * std::max(1.0, m.rho_max);
    if (rho < -tol || rho > m.rho_max + tol)
        throw std::domain_error("density outside [0, rho_max]");
}

void check_eps(const StochasticVelocity& sv, double eps) {
    const double tol = 1e-9 * std::max(1.0, sv.tau);
    if (std::abs(eps) > sv.tau + tol)
        throw std::domain_error("noise value outside [-tau, tau]");
}

} // namespace

namespace detail {

double base_value_unchecked(const VelocityModel& m, double rho) {
    switch (m.family) {
        case VelocityFamily::linear:
            return m.v_max * (1.0 - rho / m.rho_max);
        case VelocityFamily::quadratic: {
            const double r = rho / m.rho_max;
            return m.v_max * (1.0 - r * r);
        }
        case VelocityFamily::custom:
            return m.fn(std::clamp(rho, 0.0, m.rho_max));
    }
    throw invariant_error("unhandled velocity family");
}

double base_derivative_unchecked(const VelocityModel& m, double rho) {
    switch (m.family) {
        case VelocityFamily::linear:
            return -m.v_max / m.rho_max;
        case VelocityFamily::quadratic:
            return -2.0 * m.v_max * rho / (m.rho_max * m.rho_max);
        case VelocityFamily::custom:
            return m.dfn(std::clamp(rho, 0.0, m.rho_max));
    }
    throw invariant_error("unhandled velocity family");
}

} // namespace detail

double VelocityModel::value(double rho) const {
    check_rho(*this, rho);
    return detail::base_value_unchecked(*this, rho);
}

double VelocityModel::derivative(double rho) const {
    check_rho(*this, rho);
    return detail::base_derivative_unchecked(*this, rho);
}

VelocityModel make_velocity(VelocityFamily family, double v_max, double rho_max) {
    if (!(v_max > 0.0)) throw config_error("velocity.v_max must be positive");
    if (!(rho_max > 0.0)) throw config_error("velocity.rho_max must be positive");
    if (family == VelocityFamily::custom)
        throw config_error("custom velocity requires make_custom_velocity");
    VelocityModel m;
    m.family = family;
    m.v_max = v_max;
    m.rho_max = rho_max;
    m.dv_sup = family == VelocityFamily::linear ? v_max / rho_max : 2.0 * v_max / rho_max;
    return m;
}

VelocityModel make_custom_velocity(std::function<double(double)> v,
                                   std::function<double(double)> dv,
                                   double dv_sup, double v_max, double rho_max) {
    if (!(v_max > 0.0)) throw config_error("velocity.v_max must be positive");
    if (!(rho_max > 0.0)) throw config_error("velocity.rho_max must be positive");
    if (!v || !dv) throw config_error("custom velocity requires both v and v'");
    if (!(dv_sup >= 0.0)) throw config_error("custom velocity derivative bound must be non-negative");

    // Dense-sampling validation of the admissibility assumptions.
    const int samples = 2001;
    const double tol = 1e-9 * std::max(1.0, v_max);
    double prev = v(0.0);
    if (std::abs(prev - v_max) > tol)
        throw config_error("custom velocity must satisfy v(0) = v_max");
    for (int i = 0; i <= samples; ++i) {
        const double rho = rho_max * static_cast<double>(i) / samples;
        const double val = v(rho);
        const double der = dv(rho);
        if (val < -tol) throw config_error("custom velocity must be non-negative on [0, rho_max]");
        if (i > 0 && val > prev + tol) throw config_error("custom velocity must be non-increasing");
        if (der > tol) throw config_error("custom velocity derivative must be non-positive");
        if (std::abs(der) > dv_sup * (1.0 + 1e-9) + tol)
            throw config_error("custom velocity derivative exceeds its declared bound");
        prev = val;
    }

    VelocityModel m;
    m.family = VelocityFamily::custom;
    m.v_max = v_max;
    m.rho_max = rho_max;
    m.dv_sup = dv_sup;
    m.fn = std::move(v);
    m.dfn = std::move(dv);
    return m;
}

double limited_velocity(const StochasticVelocity& sv, double rho, double eps) {
    check_rho(sv.base, rho);
    check_eps(sv, eps);
    return std::max(0.0, detail::base_value_unchecked(sv.base, rho) + eps);
}

double limited_velocity_derivative(const StochasticVelocity& sv, double rho, double eps) {
    check_rho(sv.base, rho);
    check_eps(sv, eps);
    if (detail::base_value_unchecked(sv.base, rho) + eps > 0.0)
        return detail::base_derivative_unchecked(sv.base, rho);
    return 0.0;
}

double expected_velocity_of(double w, double tau) {
    if (tau == 0.0 || w >= tau) return w;
    // Below the activation threshold: mean of max{0, w + eps} over eps ~ U(-tau, tau),
    // with max{0, w - tau} = 0 since built-in speeds are non-negative.
    const double s = tau + w;
    return s * s / (4.0 * tau);
}

double expected_velocity(const StochasticVelocity& sv, double rho) {
    check_rho(sv.base, rho);
    return expected_velocity_of(detail::base_value_unchecked(sv.base, rho), sv.tau);
}

double velocity_variance(const StochasticVelocity& sv, double rho) {
    check_rho(sv.base, rho);
    const double tau = sv.tau;
    if (tau == 0.0) return 0.0;
    const double w = detail::base_value_unchecked(sv.base, rho);
    if (w >= tau) return tau * tau / 3.0; // limiter never active: the noise variance, exactly
    const double s = tau + w;
    const double mean = s * s / (4.0 * tau);
    return s * s * s / (6.0 * tau) - mean * mean;
}

double limiter_threshold(const StochasticVelocity& sv) {
    const VelocityModel& m = sv.base;
    const double tau = std::min(sv.tau, m.v_max);
    switch (m.family) {
        case VelocityFamily::linear:
            return m.rho_max * (1.0 - tau / m.v_max);
        case VelocityFamily::quadratic:
            return m.rho_max * std::sqrt(1.0 - tau / m.v_max);
        case VelocityFamily::custom: {
            // v is non-increasing; bisect for the first density with v <= tau.
            double lo = 0.0, hi = m.rho_max;
            if (m.fn(hi) >= tau) return hi;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                (m.fn(mid) > tau ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    throw invariant_error("unhandled velocity family");
}

} // namespace snv
