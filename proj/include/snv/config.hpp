#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snv/ensemble.hpp"
#include "snv/solver.hpp"

namespace snv {

struct EnsembleSpec {
    int n = 100;
    std::vector<double> quantiles{0.05, 0.95};
    ReferenceKind reference = ReferenceKind::NV;
};

struct CharacteristicsSpec {
    std::vector<double> starts; ///< resolved start positions (explicit list or linspace)
    int n_realizations = 1;
    double t0 = 0.0;
    bool interpolate = false;
};

struct MomentsSpec {
    int points = 101;
};

/// Parameter study over tau or eta; honored by the ensemble subcommand.
struct SweepSpec {
    std::string parameter; ///< "tau" or "eta"
    std::vector<double> values;
};

/// Everything a run needs, with defaults resolved and cross-field rules validated.
struct FullConfig {
    SolverConfig solver;
    EnsembleSpec ensemble;
    CharacteristicsSpec characteristics;
    MomentsSpec moments;
    std::optional<SweepSpec> sweep;
    bool delta_r_user_set = false; ///< absent delta_r means "match the solver step"
};

/// Parses and validates; every violated rule raises config_error with a single-line
/// message naming the offending field. A run manifest (object with a "config" key)
/// is accepted in place of a plain config.
FullConfig parse_config_file(const std::string& path);
FullConfig parse_config_json(const std::string& text);

/// Resolved round-trip form: parse_config_json(emit_config_json(c)) reproduces c.
std::string emit_config_json(const FullConfig& cfg);

} // namespace snv
