#include "snv/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "snv/common.hpp"

namespace snv {

namespace {

// Field value at position x from the interface-velocity row: piecewise constant per
// cell by default, linear between cell centers when smoothing is requested.
double field_at(const GridSpec& g, const Eigen::VectorXd& vif, double x, bool interpolate) {
    if (!interpolate) return vif[g.cell_of(x) + 1];
    const int n = g.n_cells;
    if (n == 1) return vif[1];
    const double u = (x - g.x_min) / g.dx - 0.5;
    const int j = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
    const double w = std::clamp(u - j, 0.0, 1.0);
    return (1.0 - w) * vif[j + 1] + w * vif[j + 2];
}

} // namespace

std::vector<CharacteristicTrace> trace_characteristics(const Trajectory& traj,
                                                       const std::vector<TraceStart>& starts,
                                                       bool interpolate) {
    if (traj.v_history.size() != traj.step_records.size() || traj.v_history.empty())
        throw invariant_error("tracing requires a trajectory recorded with velocity history");

    const GridSpec& g = traj.grid;
    std::vector<CharacteristicTrace> traces;
    traces.reserve(starts.size());

    for (const TraceStart& s : starts) {
        CharacteristicTrace tr;
        tr.x0 = s.x0;
        tr.t0 = s.t0;
        if (s.x0 < g.x_min || s.x0 > g.x_max) {
            tr.failed = true;
            tr.error = "start position outside the grid window";
            traces.push_back(std::move(tr));
            continue;
        }

        // First step whose start time is >= t0; earlier steps precede the vehicle.
        std::size_t m0 = 0;
        while (m0 < traj.step_records.size() &&
               traj.step_records[m0].t < s.t0 - 1e-12 * std::max(1.0, std::abs(s.t0)))
            ++m0;
        if (m0 == traj.step_records.size()) {
            tr.failed = true;
            tr.error = "start time beyond the simulated horizon";
            traces.push_back(std::move(tr));
            continue;
        }

        double x = s.x0;
        tr.t.push_back(s.t0);
        tr.x.push_back(x);
        for (std::size_t m = m0; m < traj.step_records.size(); ++m) {
            const StepRecord& rec = traj.step_records[m];
            x += rec.dt * field_at(g, traj.v_history[m], x, interpolate);
            if (x < g.x_min || x > g.x_max) {
                tr.clipped = true;
                x = std::clamp(x, g.x_min, g.x_max);
                tr.t.push_back(rec.t + rec.dt);
                tr.x.push_back(x);
                break;
            }
            tr.t.push_back(rec.t + rec.dt);
            tr.x.push_back(x);
        }
        traces.push_back(std::move(tr));
    }
    return traces;
}

double max_order_inversion(const std::vector<CharacteristicTrace>& traces) {
    std::map<double, std::vector<const CharacteristicTrace*>> by_t0;
    for (const CharacteristicTrace& tr : traces)
        if (!tr.failed) by_t0[tr.t0].push_back(&tr);

    double worst = 0.0;
    for (auto& [t0, group] : by_t0) {
        std::sort(group.begin(), group.end(),
                  [](const CharacteristicTrace* a, const CharacteristicTrace* b) {
                      return a->x0 < b->x0;
                  });
        for (std::size_t i = 0; i + 1 < group.size(); ++i) {
            const auto& a = *group[i];
            const auto& b = *group[i + 1];
            const std::size_t len = std::min(a.x.size(), b.x.size());
            for (std::size_t k = 0; k < len; ++k)
                worst = std::max(worst, a.x[k] - b.x[k]);
        }
    }
    return worst;
}

} // namespace snv
