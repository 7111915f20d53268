#include "snv/presets.hpp"

#include <cstring>

namespace snv {

// Embedded copies of the files under presets/. A unit test pins the two
// representations byte-for-byte so they cannot drift apart.
namespace {

constexpr const char* kExample36 = R"json({
  "grid": {"x_min": -2.0, "x_max": 2.5, "dx": 0.01},
  "kernel": {"family": "concave", "eta": 0.1},
  "velocity": {"family": "linear", "v_max": 1.0, "rho_max": 1.0},
  "noise": {"tau": 0.5, "seed": 42},
  "sim": {"T": 1.0, "output_times": [0.25, 0.5, 0.75, 1.0], "mode": "sNV", "cfl_safety": 1.0},
  "initial": {"kind": "plateau", "left": 0.3333333333333333, "inside": 1.0, "right": 0.3333333333333333, "a": 0.3333333333333333, "b": 0.6666666666666666},
  "ensemble": {"n": 200, "quantiles": [0.05, 0.95], "reference": "NV"},
  "characteristics": {"linspace": {"from": -0.4, "to": 1.2, "n": 16}, "n_realizations": 1, "t0": 0.0, "interpolate": false}
}
)json";

constexpr const char* kExample37 = R"json({
  "grid": {"x_min": -3.0, "x_max": 5.0, "dx": 0.01},
  "kernel": {"family": "concave", "eta": 0.2},
  "velocity": {"family": "quadratic", "v_max": 1.0, "rho_max": 1.0},
  "noise": {"tau": 0.8, "seed": 42},
  "sim": {"T": 2.0, "output_times": [0.5, 1.0, 1.5, 2.0], "mode": "sNV", "cfl_safety": 1.0},
  "initial": {"kind": "plateau", "left": 0.3333333333333333, "inside": 1.0, "right": 0.3333333333333333, "a": 0.0, "b": 1.0},
  "ensemble": {"n": 1000, "quantiles": [0.05, 0.95], "reference": "NV"},
  "characteristics": {"linspace": {"from": -1.5, "to": 2.5, "n": 20}, "n_realizations": 30, "t0": 0.0, "interpolate": false}
}
)json";

constexpr const char* kTable1 = R"json({
  "grid": {"x_min": -1.0, "x_max": 2.6, "dx": 0.003},
  "kernel": {"family": "concave", "eta": 0.2},
  "velocity": {"family": "quadratic", "v_max": 1.0, "rho_max": 1.0},
  "noise": {"tau": 0.5, "seed": 42},
  "sim": {"T": 1.0, "output_times": [1.0], "mode": "sNV", "cfl_safety": 1.0},
  "initial": {"kind": "plateau", "left": 0.2, "inside": 0.45, "right": 0.2, "a": 0.3333333333333333, "b": 0.6666666666666666},
  "ensemble": {"n": 1000, "quantiles": [0.05, 0.95], "reference": "NV"}
}
)json";

constexpr const char* kFig7TauSweep = R"json({
  "grid": {"x_min": -3.0, "x_max": 4.5, "dx": 0.01},
  "kernel": {"family": "concave", "eta": 0.2},
  "velocity": {"family": "quadratic", "v_max": 1.0, "rho_max": 1.0},
  "noise": {"tau": 0.5, "seed": 42},
  "sim": {"T": 2.0, "output_times": [2.0], "mode": "sNV", "cfl_safety": 1.0},
  "initial": {"kind": "plateau", "left": 0.3333333333333333, "inside": 1.0, "right": 0.3333333333333333, "a": 0.0, "b": 1.0},
  "ensemble": {"n": 1000, "quantiles": [0.05, 0.95], "reference": "NV"},
  "sweep": {"parameter": "tau", "values": [0.1, 0.3, 0.5, 0.7]}
}
)json";

constexpr const char* kFig7EtaSweep = R"json({
  "grid": {"x_min": -3.0, "x_max": 4.5, "dx": 0.01},
  "kernel": {"family": "concave", "eta": 0.2},
  "velocity": {"family": "quadratic", "v_max": 1.0, "rho_max": 1.0},
  "noise": {"tau": 0.5, "seed": 42},
  "sim": {"T": 2.0, "output_times": [2.0], "mode": "sNV", "cfl_safety": 1.0},
  "initial": {"kind": "plateau", "left": 0.3333333333333333, "inside": 1.0, "right": 0.3333333333333333, "a": 0.0, "b": 1.0},
  "ensemble": {"n": 1000, "quantiles": [0.05, 0.95], "reference": "NV"},
  "sweep": {"parameter": "eta", "values": [0.05, 0.1, 0.2, 0.4]}
}
)json";

struct PresetEntry {
    const char* name;
    const char* text;
};

constexpr PresetEntry kPresets[] = {
    {"example-3-6", kExample36},     {"example-3-7", kExample37},
    {"table-1", kTable1},            {"fig-7-tau-sweep", kFig7TauSweep},
    {"fig-7-eta-sweep", kFig7EtaSweep},
};

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

const char* preset_config(const std::string& name) {
    for (const auto& p : kPresets)
        if (name == p.name) return p.text;
    return nullptr;
}

} // namespace snv
