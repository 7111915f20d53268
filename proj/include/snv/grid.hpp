#pragma once

#include <Eigen/Dense>
#include <vector>

namespace snv {

/// Uniform cell grid: interfaces at x_min + j dx, centers at x_min + (j + 1/2) dx.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 0.0;
    double dx = 0.0;
    int n_cells = 0;

    double center(int j) const { return x_min + (j + 0.5) * dx; }
    double interface(int j) const { return x_min + j * dx; }
    /// Containing cell of x, clamped into [0, n_cells-1].
    int cell_of(double x) const;
};

GridSpec make_grid(double x_min, double x_max, double dx);

/// Constant `left` below a, `inside` on [a, b], `right` above b.
struct PlateauInitial {
    double left = 0.0;
    double inside = 0.0;
    double right = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Piecewise-linear profile through (x[i], rho[i]); constant beyond the end points.
struct SampledInitial {
    std::vector<double> x;
    std::vector<double> rho;
};

struct InitialData {
    enum class Kind { plateau, samples };
    Kind kind = Kind::plateau;
    PlateauInitial plateau;
    SampledInitial samples;
};

/// Exact per-cell means of the initial profile: interface-splitting for plateaus,
/// closed-form piecewise-linear integration for sampled profiles. No sampling error.
Eigen::ArrayXd initial_cell_averages(const InitialData& data, const GridSpec& grid);

/// Pointwise value of the initial profile (plateau boundaries count as inside).
double initial_point_value(const InitialData& data, double x);

/// Interior jump sum sum_j |rho[j+1] - rho[j]|.
double total_variation(const Eigen::ArrayXd& rho);

} // namespace snv
