#include "snv/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snv/common.hpp"

namespace snv {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok) throw config_error("unknown key '" + item.key() + "' in " + where);
    }
}

const json& require_section(const json& j, const char* name) {
    if (!j.contains(name)) throw config_error(std::string("missing section '") + name + "'");
    if (!j.at(name).is_object())
        throw config_error(std::string("section '") + name + "' must be an object");
    return j.at(name);
}

double get_num(const json& sec, const std::string& where, const char* key) {
    if (!sec.contains(key)) throw config_error(where + "." + key + " is required");
    if (!sec.at(key).is_number()) throw config_error(where + "." + key + " must be a number");
    return sec.at(key).get<double>();
}

double num_or(const json& sec, const std::string& where, const char* key, double fallback) {
    if (!sec.contains(key)) return fallback;
    if (!sec.at(key).is_number()) throw config_error(where + "." + key + " must be a number");
    return sec.at(key).get<double>();
}

std::vector<double> num_array(const json& sec, const std::string& where, const char* key) {
    if (!sec.at(key).is_array()) throw config_error(where + "." + key + " must be an array");
    std::vector<double> out;
    for (const auto& v : sec.at(key)) {
        if (!v.is_number()) throw config_error(where + "." + key + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string mode_name(SimMode m) {
    switch (m) {
        case SimMode::sNV: return "sNV";
        case SimMode::NV: return "NV";
        case SimMode::NV_expected_velocity: return "NV-expected-velocity";
    }
    throw invariant_error("unhandled mode");
}

std::string reference_name(ReferenceKind r) {
    switch (r) {
        case ReferenceKind::NV: return "NV";
        case ReferenceKind::NV_expected_velocity: return "NV-expected-velocity";
        case ReferenceKind::none: return "none";
    }
    throw invariant_error("unhandled reference kind");
}

std::string kernel_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::concave: return "concave";
        case KernelFamily::constant: return "constant";
        case KernelFamily::linear_decreasing: return "linear-decreasing";
    }
    throw invariant_error("unhandled kernel family");
}

std::string velocity_name(VelocityFamily f) {
    switch (f) {
        case VelocityFamily::linear: return "linear";
        case VelocityFamily::quadratic: return "quadratic";
        case VelocityFamily::custom: break;
    }
    throw invariant_error("custom velocity models are code-level only");
}

} // namespace

FullConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

FullConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config must be a JSON object");
    // A run manifest embeds the resolved config under "config"; accept it directly.
    if (j.contains("config") && j.at("config").is_object()) j = j.at("config");

    check_keys(j, "config",
               {"grid", "kernel", "velocity", "noise", "sim", "initial", "ensemble",
                "characteristics", "moments", "sweep"});

    FullConfig cfg;

    {
        const json& sec = require_section(j, "grid");
        check_keys(sec, "grid", {"x_min", "x_max", "dx"});
        cfg.solver.grid = make_grid(get_num(sec, "grid", "x_min"), get_num(sec, "grid", "x_max"),
                                    get_num(sec, "grid", "dx"));
    }
    {
        const json& sec = require_section(j, "kernel");
        check_keys(sec, "kernel", {"family", "eta"});
        KernelSpec ks;
        ks.eta = get_num(sec, "kernel", "eta");
        std::string fam = sec.value("family", "concave");
        if (fam == "concave")
            ks.family = KernelFamily::concave;
        else if (fam == "constant")
            ks.family = KernelFamily::constant;
        else if (fam == "linear-decreasing")
            ks.family = KernelFamily::linear_decreasing;
        else
            throw config_error(
                "kernel.family must be one of concave, constant, linear-decreasing");
        if (!(ks.eta > 0.0)) throw config_error("kernel.eta must be positive");
        cfg.solver.kernel = ks;
    }
    {
        const json& sec = require_section(j, "velocity");
        check_keys(sec, "velocity", {"family", "v_max", "rho_max"});
        if (!sec.contains("family")) throw config_error("velocity.family is required");
        const std::string fam = sec.at("family").get<std::string>();
        VelocityFamily vf;
        if (fam == "linear")
            vf = VelocityFamily::linear;
        else if (fam == "quadratic")
            vf = VelocityFamily::quadratic;
        else
            throw config_error("velocity.family must be one of linear, quadratic");
        cfg.solver.velocity.base = make_velocity(vf, get_num(sec, "velocity", "v_max"),
                                                 get_num(sec, "velocity", "rho_max"));
    }
    if (j.contains("noise")) {
        const json& sec = require_section(j, "noise");
        check_keys(sec, "noise", {"tau", "delta_r", "seed"});
        cfg.solver.velocity.tau = num_or(sec, "noise", "tau", 0.0);
        if (cfg.solver.velocity.tau < 0.0) throw config_error("noise.tau must be non-negative");
        if (sec.contains("delta_r")) {
            cfg.delta_r_user_set = true;
            cfg.solver.noise.delta_r = get_num(sec, "noise", "delta_r");
            if (!(cfg.solver.noise.delta_r > 0.0))
                throw config_error("noise.delta_r must be positive");
        }
        if (sec.contains("seed")) {
            if (!sec.at("seed").is_number_integer() && !sec.at("seed").is_number_unsigned())
                throw config_error("noise.seed must be an unsigned integer");
            cfg.solver.noise.master_seed = sec.at("seed").get<std::uint64_t>();
        }
    }
    cfg.solver.noise.tau = cfg.solver.velocity.tau;
    if (!(cfg.solver.velocity.tau < cfg.solver.velocity.base.v_max))
        throw config_error("tau must be strictly less than v_max");

    {
        const json& sec = require_section(j, "sim");
        check_keys(sec, "sim", {"T", "output_times", "mode", "cfl_safety"});
        cfg.solver.horizon = get_num(sec, "sim", "T");
        if (!(cfg.solver.horizon > 0.0)) throw config_error("sim.T must be positive");
        if (sec.contains("output_times"))
            cfg.solver.output_times = num_array(sec, "sim", "output_times");
        for (double t : cfg.solver.output_times)
            if (t < 0.0 || t > cfg.solver.horizon * (1.0 + 1e-12))
                throw config_error("sim.output_times must lie in [0, T]");
        const std::string mode = sec.value("mode", "sNV");
        if (mode == "sNV")
            cfg.solver.mode = SimMode::sNV;
        else if (mode == "NV")
            cfg.solver.mode = SimMode::NV;
        else if (mode == "NV-expected-velocity")
            cfg.solver.mode = SimMode::NV_expected_velocity;
        else
            throw config_error("sim.mode must be one of sNV, NV, NV-expected-velocity");
        cfg.solver.cfl_safety = num_or(sec, "sim", "cfl_safety", 1.0);
        if (!(cfg.solver.cfl_safety > 0.0) || cfg.solver.cfl_safety > 1.0)
            throw config_error("sim.cfl_safety must lie in (0, 1]");
    }
    {
        const json& sec = require_section(j, "initial");
        if (!sec.contains("kind")) throw config_error("initial.kind is required");
        const std::string kind = sec.at("kind").get<std::string>();
        const double rho_max = cfg.solver.velocity.base.rho_max;
        auto in_range = [rho_max](double v) { return v >= 0.0 && v <= rho_max; };
        if (kind == "plateau") {
            check_keys(sec, "initial", {"kind", "left", "inside", "right", "a", "b"});
            PlateauInitial p;
            p.left = get_num(sec, "initial", "left");
            p.inside = get_num(sec, "initial", "inside");
            p.right = get_num(sec, "initial", "right");
            p.a = get_num(sec, "initial", "a");
            p.b = get_num(sec, "initial", "b");
            if (!in_range(p.left) || !in_range(p.inside) || !in_range(p.right))
                throw config_error("initial values must lie in [0, rho_max]");
            if (!(p.a <= p.b)) throw config_error("initial.a must not exceed initial.b");
            if (p.a < cfg.solver.grid.x_min || p.b > cfg.solver.grid.x_max)
                throw config_error("initial plateau endpoints must lie inside the grid window");
            cfg.solver.initial.kind = InitialData::Kind::plateau;
            cfg.solver.initial.plateau = p;
        } else if (kind == "samples") {
            check_keys(sec, "initial", {"kind", "x", "rho"});
            SampledInitial s;
            s.x = num_array(sec, "initial", "x");
            s.rho = num_array(sec, "initial", "rho");
            for (double v : s.rho)
                if (!in_range(v)) throw config_error("initial values must lie in [0, rho_max]");
            cfg.solver.initial.kind = InitialData::Kind::samples;
            cfg.solver.initial.samples = std::move(s);
        } else {
            throw config_error("initial.kind must be one of plateau, samples");
        }
    }

    if (cfg.solver.grid.dx > cfg.solver.kernel.eta * (1.0 + 4e-12))
        throw config_error("grid.dx must not exceed kernel.eta");
    if (cfg.solver.grid.x_max - cfg.solver.grid.x_min <
        2.0 * cfg.solver.kernel.eta * (1.0 - 1e-12))
        throw config_error("grid window must span at least 2*eta");

    if (j.contains("ensemble")) {
        const json& sec = require_section(j, "ensemble");
        check_keys(sec, "ensemble", {"n", "quantiles", "reference"});
        cfg.ensemble.n = static_cast<int>(num_or(sec, "ensemble", "n", 100));
        if (cfg.ensemble.n < 1) throw config_error("ensemble.n must be at least 1");
        if (sec.contains("quantiles")) {
            cfg.ensemble.quantiles = num_array(sec, "ensemble", "quantiles");
            for (double p : cfg.ensemble.quantiles)
                if (!(p > 0.0 && p < 1.0))
                    throw config_error("ensemble.quantiles must lie strictly in (0, 1)");
        }
        const std::string ref = sec.value("reference", "NV");
        if (ref == "NV")
            cfg.ensemble.reference = ReferenceKind::NV;
        else if (ref == "NV-expected-velocity")
            cfg.ensemble.reference = ReferenceKind::NV_expected_velocity;
        else if (ref == "none")
            cfg.ensemble.reference = ReferenceKind::none;
        else
            throw config_error(
                "ensemble.reference must be one of NV, NV-expected-velocity, none");
    }

    if (j.contains("characteristics")) {
        const json& sec = require_section(j, "characteristics");
        check_keys(sec, "characteristics",
                   {"starts", "linspace", "n_realizations", "t0", "interpolate"});
        if (sec.contains("starts") && sec.contains("linspace"))
            throw config_error("characteristics accepts either starts or linspace, not both");
        if (sec.contains("starts"))
            cfg.characteristics.starts = num_array(sec, "characteristics", "starts");
        if (sec.contains("linspace")) {
            const json& ls = sec.at("linspace");
            check_keys(ls, "characteristics.linspace", {"from", "to", "n"});
            const double from = get_num(ls, "characteristics.linspace", "from");
            const double to = get_num(ls, "characteristics.linspace", "to");
            const int cnt = static_cast<int>(get_num(ls, "characteristics.linspace", "n"));
            if (cnt < 1) throw config_error("characteristics.linspace.n must be at least 1");
            for (int i = 0; i < cnt; ++i)
                // Endpoints are taken verbatim so they land exactly where written.
                cfg.characteristics.starts.push_back(
                    i == 0 ? from
                           : (i == cnt - 1 ? to : from + (to - from) * i / (cnt - 1)));
        }
        cfg.characteristics.n_realizations =
            static_cast<int>(num_or(sec, "characteristics", "n_realizations", 1));
        if (cfg.characteristics.n_realizations < 1)
            throw config_error("characteristics.n_realizations must be at least 1");
        cfg.characteristics.t0 = num_or(sec, "characteristics", "t0", 0.0);
        if (cfg.characteristics.t0 < 0.0 || cfg.characteristics.t0 >= cfg.solver.horizon)
            throw config_error("characteristics.t0 must lie in [0, T)");
        if (sec.contains("interpolate")) {
            if (!sec.at("interpolate").is_boolean())
                throw config_error("characteristics.interpolate must be a boolean");
            cfg.characteristics.interpolate = sec.at("interpolate").get<bool>();
        }
    }

    if (j.contains("moments")) {
        const json& sec = require_section(j, "moments");
        check_keys(sec, "moments", {"points"});
        cfg.moments.points = static_cast<int>(num_or(sec, "moments", "points", 101));
        if (cfg.moments.points < 2) throw config_error("moments.points must be at least 2");
    }

    if (j.contains("sweep")) {
        const json& sec = require_section(j, "sweep");
        check_keys(sec, "sweep", {"parameter", "values"});
        SweepSpec sweep;
        if (!sec.contains("parameter")) throw config_error("sweep.parameter is required");
        sweep.parameter = sec.at("parameter").get<std::string>();
        if (sweep.parameter != "tau" && sweep.parameter != "eta")
            throw config_error("sweep.parameter must be one of tau, eta");
        sweep.values = num_array(sec, "sweep", "values");
        if (sweep.values.empty()) throw config_error("sweep.values must be non-empty");
        for (double v : sweep.values) {
            if (sweep.parameter == "tau") {
                if (v < 0.0 || v >= cfg.solver.velocity.base.v_max)
                    throw config_error("sweep.values for tau must lie in [0, v_max)");
            } else {
                if (!(v > 0.0)) throw config_error("sweep.values for eta must be positive");
                if (cfg.solver.grid.dx > v * (1.0 + 4e-12))
                    throw config_error("sweep.values for eta must be at least grid.dx");
                if (cfg.solver.grid.x_max - cfg.solver.grid.x_min < 2.0 * v * (1.0 - 1e-12))
                    throw config_error("grid window must span at least 2*eta for every sweep value");
            }
        }
        cfg.sweep = std::move(sweep);
    }

    return cfg;
}

std::string emit_config_json(const FullConfig& cfg) {
    json j;
    j["grid"] = {{"x_min", cfg.solver.grid.x_min},
                 {"x_max", cfg.solver.grid.x_max},
                 {"dx", cfg.solver.grid.dx}};
    j["kernel"] = {{"family", kernel_name(cfg.solver.kernel.family)},
                   {"eta", cfg.solver.kernel.eta}};
    j["velocity"] = {{"family", velocity_name(cfg.solver.velocity.base.family)},
                     {"v_max", cfg.solver.velocity.base.v_max},
                     {"rho_max", cfg.solver.velocity.base.rho_max}};
    j["noise"] = {{"tau", cfg.solver.velocity.tau}, {"seed", cfg.solver.noise.master_seed}};
    if (cfg.delta_r_user_set) j["noise"]["delta_r"] = cfg.solver.noise.delta_r;
    j["sim"] = {{"T", cfg.solver.horizon},
                {"output_times", cfg.solver.output_times},
                {"mode", mode_name(cfg.solver.mode)},
                {"cfl_safety", cfg.solver.cfl_safety}};
    if (cfg.solver.initial.kind == InitialData::Kind::plateau) {
        const PlateauInitial& p = cfg.solver.initial.plateau;
        j["initial"] = {{"kind", "plateau"}, {"left", p.left},   {"inside", p.inside},
                        {"right", p.right},  {"a", p.a},         {"b", p.b}};
    } else {
        j["initial"] = {{"kind", "samples"},
                        {"x", cfg.solver.initial.samples.x},
                        {"rho", cfg.solver.initial.samples.rho}};
    }
    j["ensemble"] = {{"n", cfg.ensemble.n},
                     {"quantiles", cfg.ensemble.quantiles},
                     {"reference", reference_name(cfg.ensemble.reference)}};
    j["characteristics"] = {{"starts", cfg.characteristics.starts},
                            {"n_realizations", cfg.characteristics.n_realizations},
                            {"t0", cfg.characteristics.t0},
                            {"interpolate", cfg.characteristics.interpolate}};
    j["moments"] = {{"points", cfg.moments.points}};
    if (cfg.sweep)
        j["sweep"] = {{"parameter", cfg.sweep->parameter}, {"values", cfg.sweep->values}};
    return j.dump(2) + "\n";
}

} // namespace snv
