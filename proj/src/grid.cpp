#include "snv/grid.hpp"

#include <algorithm>
#include <cmath>

#include "snv/common.hpp"

namespace snv {

int GridSpec::cell_of(double x) const {
    const int j = static_cast<int>(std::floor((x - x_min) / dx));
    return std::clamp(j, 0, n_cells - 1);
}

GridSpec make_grid(double x_min, double x_max, double dx) {
    if (!(dx > 0.0)) throw config_error("grid.dx must be positive");
    if (!(x_max > x_min)) throw config_error("grid.x_max must exceed grid.x_min");
    GridSpec g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.dx = dx;
    g.n_cells = static_cast<int>(std::lround((x_max - x_min) / dx));
    if (g.n_cells < 1) throw config_error("grid window must contain at least one cell");
    return g;
}

namespace {

// Cumulative integral of the piecewise-linear profile, exact per segment.
double sampled_integral_to(const SampledInitial& s, double x) {
    const std::size_t n = s.x.size();
    if (x <= s.x.front()) return s.rho.front() * (x - s.x.front());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x0 = s.x[i], x1 = s.x[i + 1];
        const double r0 = s.rho[i], r1 = s.rho[i + 1];
        if (x <= x1) {
            const double u = x - x0;
            const double slope = (r1 - r0) / (x1 - x0);
            return acc + r0 * u + 0.5 * slope * u * u;
        }
        acc += 0.5 * (r0 + r1) * (x1 - x0);
    }
    return acc + s.rho.back() * (x - s.x.back());
}

void validate_samples(const SampledInitial& s) {
    if (s.x.size() != s.rho.size() || s.x.empty())
        throw config_error("initial samples must provide matching non-empty x and rho arrays");
    for (std::size_t i = 0; i + 1 < s.x.size(); ++i)
        if (!(s.x[i] < s.x[i + 1]))
            throw config_error("initial sample positions must be strictly increasing");
}

} // namespace

Eigen::ArrayXd initial_cell_averages(const InitialData& data, const GridSpec& grid) {
    Eigen::ArrayXd rho(grid.n_cells);
    if (data.kind == InitialData::Kind::plateau) {
        const PlateauInitial& p = data.plateau;
        if (!(p.a <= p.b)) throw config_error("initial.a must not exceed initial.b");
        if (p.a < grid.x_min || p.b > grid.x_max)
            throw config_error("initial plateau endpoints must lie inside the grid window");
        for (int j = 0; j < grid.n_cells; ++j) {
            const double xl = grid.interface(j);
            const double xr = grid.interface(j + 1);
            // Cells seeing a single piece take its value exactly; rounding the
            // length-weighted form would lose the constant-state fixed point.
            if (p.left == p.inside && p.inside == p.right) {
                rho[j] = p.inside;
            } else if (p.a >= xr) {
                rho[j] = p.left;
            } else if (p.b <= xl) {
                rho[j] = p.right;
            } else if (p.a <= xl && p.b >= xr) {
                rho[j] = p.inside;
            } else {
                // Straddled cell: length-weighted mean of the three constant pieces.
                const double ca = std::clamp(p.a, xl, xr);
                const double cb = std::clamp(p.b, xl, xr);
                rho[j] =
                    (p.left * (ca - xl) + p.inside * (cb - ca) + p.right * (xr - cb)) /
                    grid.dx;
            }
        }
    } else {
        validate_samples(data.samples);
        double lo = sampled_integral_to(data.samples, grid.interface(0));
        for (int j = 0; j < grid.n_cells; ++j) {
            const double hi = sampled_integral_to(data.samples, grid.interface(j + 1));
            rho[j] = (hi - lo) / grid.dx;
            lo = hi;
        }
    }
    return rho;
}

double initial_point_value(const InitialData& data, double x) {
    if (data.kind == InitialData::Kind::plateau) {
        const PlateauInitial& p = data.plateau;
        if (x < p.a) return p.left;
        if (x <= p.b) return p.inside;
        return p.right;
    }
    const SampledInitial& s = data.samples;
    validate_samples(s);
    if (x <= s.x.front()) return s.rho.front();
    if (x >= s.x.back()) return s.rho.back();
    const auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - s.x.begin()) - 1;
    const double w = (x - s.x[i]) / (s.x[i + 1] - s.x[i]);
    return s.rho[i] + w * (s.rho[i + 1] - s.rho[i]);
}

double total_variation(const Eigen::ArrayXd& rho) {
    double tv = 0.0;
    for (Eigen::Index j = 0; j + 1 < rho.size(); ++j) tv += std::abs(rho[j + 1] - rho[j]);
    return tv;
}

} // namespace snv
