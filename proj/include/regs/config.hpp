#pragma once

#include "regs/stepper.hpp"

#include <string>

// Run configuration: structured-text files of [section] / key = value lines,
// '#' or ';' comments. Unknown sections or keys are rejected, as are values
// that fail cross-field validation; every error names the offending entry.
// Command-line overrides use the same "section.key=value" addressing.

namespace regs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class InitialKind {
    EquilibriumPerturbation,   // eq * (1 + amplitude * uniform(-1,1)), seeded per node
    ModePerturbation,          // eq * (1 + amplitude * sign_a * prod_axes cos(2 pi m x / L))
    SeededSquare,              // uniform base with a centered square of depressed u, raised v
    Uniform,                   // constant (u, v, p, q) from the config
    Snapshot,                  // resume from a snapshot file
};

struct RunConfig {
    Parameters params;
    ModelVariant variant = ModelVariant::ReGS;
    GridSpec grid;
    StepConfig step;
    double t_end = 1.0;
    long sample_every = 1;

    InitialKind init_kind = InitialKind::EquilibriumPerturbation;
    double amplitude = 1e-2;
    unsigned long long seed = 1;
    int mode = 1;                     // wavenumber for ModePerturbation
    double square_fraction = 0.25;    // side fraction for SeededSquare
    double init_u = 0.0, init_v = 0.0, init_p = 0.0, init_q = 0.0;
    std::string init_path;            // snapshot to resume from

    std::string diagnostics_path;     // CSV; empty = no file
    std::string snapshot_path;        // final-state snapshot; empty = none
    std::string checkpoint_path;      // periodic snapshot; empty = none
    long checkpoint_every = 0;        // steps; 0 = off
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// "section.key=value" override, validated like a file entry
void apply_override(RunConfig& cfg, const std::string& assignment);

// cross-field checks (variant vs epsilon/feed, initial-kind requirements, ...)
void validate(const RunConfig& cfg);

// builds the configured initial state (deterministic for a given seed)
State build_initial_state(const RunConfig& cfg);

const char* to_string(ModelVariant v);
const char* to_string(InitialKind k);

} // namespace regs
