/// Vehicle paths integrated through the recorded velocity field.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "snv/characteristics.hpp"
#include "snv/common.hpp"
#include "snv/grid.hpp"
#include "snv/kernel.hpp"
#include "snv/solver.hpp"
#include "snv/velocity.hpp"

using namespace snv;

namespace {

InitialData plateau(double left, double inside, double right, double a, double b) {
    InitialData d;
    d.kind = InitialData::Kind::plateau;
    d.plateau = {left, inside, right, a, b};
    return d;
}

SolverConfig jam_config() {
    SolverConfig cfg;
    cfg.grid = make_grid(-2.0, 2.5, 0.01);
    cfg.kernel = {KernelFamily::concave, 0.1};
    cfg.velocity = {make_velocity(VelocityFamily::linear, 1.0, 1.0), 0.5};
    cfg.noise.master_seed = 42;
    cfg.initial = plateau(1.0 / 3.0, 1.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0);
    cfg.horizon = 0.5;
    cfg.mode = SimMode::sNV;
    return cfg;
}

SimOptions with_history() {
    SimOptions opt;
    opt.record_v_history = true;
    return opt;
}

} // namespace

TEST_CASE("tracing requires the recorded velocity history") {
    SolverConfig cfg = jam_config();
    cfg.horizon = 0.05;
    Trajectory traj = simulate(cfg);
    CHECK_THROWS_AS(trace_characteristics(traj, {{0.0, 0.0}}), invariant_error);
}

TEST_CASE("a constant field yields a straight line") {
    SolverConfig cfg = jam_config();
    cfg.mode = SimMode::NV;
    cfg.grid = make_grid(0.0, 2.0, 0.05);
    cfg.initial = plateau(0.25, 0.25, 0.25, 0.5, 1.0);
    cfg.horizon = 0.4;
    Trajectory traj = simulate(cfg, with_history());
    const double gamma_sum = kernel_weights(cfg.kernel, cfg.grid.dx).sum();
    const double speed = 0.75 * gamma_sum; // v(0.25) spread over the truncated window

    auto traces = trace_characteristics(traj, {{0.0, 0.3}, {0.1, 0.8}});
    REQUIRE(traces.size() == 2);
    for (const CharacteristicTrace& tr : traces) {
        REQUIRE_FALSE(tr.failed);
        CHECK_FALSE(tr.clipped);
        CHECK(tr.t.front() == tr.t0);
        CHECK(tr.x.front() == tr.x0);
        CHECK(tr.t.back() == doctest::Approx(0.4).epsilon(1e-12));
    }
    CHECK(traces[0].x.back() == doctest::Approx(0.3 + 0.4 * speed).epsilon(1e-12));
    // The mid-run start only accumulates the steps from the first mesh time past t0.
    double expect = 0.8;
    for (const StepRecord& r : traj.step_records)
        if (r.t >= 0.1 - 1e-12) expect += r.dt * speed;
    CHECK(traces[1].x.back() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("a saturated jam pins vehicles in place") {
    SolverConfig cfg = jam_config();
    cfg.mode = SimMode::NV;
    cfg.grid = make_grid(0.0, 1.0, 0.02);
    cfg.initial = plateau(1.0, 1.0, 1.0, 0.2, 0.8);
    cfg.horizon = 0.3;
    Trajectory traj = simulate(cfg, with_history());
    auto traces = trace_characteristics(traj, {{0.0, 0.5}});
    REQUIRE(traces.size() == 1);
    for (double x : traces[0].x) CHECK(x == 0.5);
    CHECK_FALSE(traces[0].clipped);
}

TEST_CASE("euler steps reproduce the documented update rule") {
    SolverConfig cfg = jam_config();
    cfg.horizon = 0.1;
    Trajectory traj = simulate(cfg, with_history());
    const double x0 = 0.8;
    auto traces = trace_characteristics(traj, {{0.0, x0}});
    REQUIRE(traces.size() == 1);
    const CharacteristicTrace& tr = traces[0];
    REQUIRE(tr.t.size() == traj.step_records.size() + 1);

    double x = x0;
    for (std::size_t m = 0; m < traj.step_records.size(); ++m) {
        x += traj.step_records[m].dt * traj.v_history[m][traj.grid.cell_of(x) + 1];
        CHECK(tr.x[m + 1] == doctest::Approx(x).epsilon(1e-15));
    }
}

TEST_CASE("vehicles keep their order up to one cell width") {
    SolverConfig cfg = jam_config();
    Trajectory traj = simulate(cfg, with_history());
    std::vector<TraceStart> starts;
    for (int i = 0; i < 12; ++i) starts.push_back({0.0, -0.3 + 0.12 * i});
    auto traces = trace_characteristics(traj, starts);
    CHECK(max_order_inversion(traces) <= cfg.grid.dx + 1e-12);
}

TEST_CASE("leaving the window clips and truncates the trace") {
    SolverConfig cfg = jam_config();
    cfg.mode = SimMode::NV;
    cfg.grid = make_grid(0.0, 1.0, 0.02);
    cfg.initial = plateau(0.1, 0.1, 0.1, 0.2, 0.8);
    cfg.horizon = 1.0; // free flow at speed ~0.9 crosses the right edge from x = 0.5
    Trajectory traj = simulate(cfg, with_history());
    auto traces = trace_characteristics(traj, {{0.0, 0.5}});
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].clipped);
    CHECK(traces[0].x.back() == 1.0);
    CHECK(traces[0].t.back() < 1.0);
}

TEST_CASE("bad starts fail in isolation") {
    SolverConfig cfg = jam_config();
    cfg.horizon = 0.2;
    Trajectory traj = simulate(cfg, with_history());
    auto traces =
        trace_characteristics(traj, {{0.0, -5.0}, {0.0, 0.5}, {0.9, 0.5}});
    REQUIRE(traces.size() == 3);
    CHECK(traces[0].failed);
    CHECK(traces[0].error == "start position outside the grid window");
    CHECK_FALSE(traces[1].failed);
    CHECK(traces[1].x.size() > 1);
    CHECK(traces[2].failed);
    CHECK(traces[2].error == "start time beyond the simulated horizon");

    // Failed traces never enter the order statistic.
    CHECK(max_order_inversion(traces) == 0.0);
}

TEST_CASE("interpolation agrees with the cell value at cell centers") {
    SolverConfig cfg = jam_config();
    cfg.horizon = 0.1;
    Trajectory traj = simulate(cfg, with_history());
    // On a constant stretch of road both lookups see the same field.
    const double x0 = traj.grid.center(30);
    auto plain = trace_characteristics(traj, {{0.0, x0}}, false);
    auto smooth = trace_characteristics(traj, {{0.0, x0}}, true);
    REQUIRE_FALSE(plain[0].failed);
    REQUIRE_FALSE(smooth[0].failed);
    CHECK(plain[0].x[1] == doctest::Approx(smooth[0].x[1]).epsilon(1e-12));
    for (double x : smooth[0].x) {
        CHECK(std::isfinite(x));
        CHECK(x >= traj.grid.x_min);
        CHECK(x <= traj.grid.x_max);
    }
}
