#include "regs/config.hpp"

#include "regs/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <numbers>
#include <sstream>

namespace regs {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

ModelVariant parse_variant(const std::string& key, const std::string& v) {
    if (v == "regs") return ModelVariant::ReGS;
    if (v == "regs-eps") return ModelVariant::ReGSEps;
    if (v == "irgs") return ModelVariant::IrGS;
    if (v == "reduced") return ModelVariant::ReducedGS;
    throw ConfigError(key + ": unknown variant '" + v +
                      "' (expected regs, regs-eps, irgs or reduced)");
}

InitialKind parse_initial_kind(const std::string& key, const std::string& v) {
    if (v == "equilibrium-perturbation") return InitialKind::EquilibriumPerturbation;
    if (v == "mode-perturbation") return InitialKind::ModePerturbation;
    if (v == "seeded-square") return InitialKind::SeededSquare;
    if (v == "uniform") return InitialKind::Uniform;
    if (v == "snapshot") return InitialKind::Snapshot;
    throw ConfigError(key + ": unknown initial kind '" + v + "'");
}

Scheme parse_scheme(const std::string& key, const std::string& v) {
    if (v == "strang") return Scheme::Strang;
    if (v == "euler") return Scheme::ExplicitEuler;
    throw ConfigError(key + ": unknown scheme '" + v + "' (expected strang or euler)");
}

DiffusionSolver parse_solver(const std::string& key, const std::string& v) {
    if (v == "spectral") return DiffusionSolver::Spectral;
    if (v == "crank-nicolson" || v == "cn") return DiffusionSolver::CrankNicolson;
    throw ConfigError(key + ": unknown diffusion solver '" + v +
                      "' (expected spectral or crank-nicolson)");
}

// applies one "section.key" assignment; returns false if the key is unknown
bool apply_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto num = [&] { return to_double(key, value); };
    auto integer = [&] { return to_int(key, value); };

    if (key == "model.variant") cfg.variant = parse_variant(key, value);
    else if (key == "model.epsilon") cfg.params.epsilon = num();
    else if (key == "model.feed") cfg.params.feed = num();
    else if (key == "parameters.k0p") cfg.params.k0p = num();
    else if (key == "parameters.k0m") cfg.params.k0m = num();
    else if (key == "parameters.k1p") cfg.params.k1p = num();
    else if (key == "parameters.k1m") cfg.params.k1m = num();
    else if (key == "parameters.k2p") cfg.params.k2p = num();
    else if (key == "parameters.k2m") cfg.params.k2m = num();
    else if (key == "parameters.du") cfg.params.du = num();
    else if (key == "parameters.dv") cfg.params.dv = num();
    else if (key == "parameters.dp") cfg.params.dp = num();
    else if (key == "parameters.dq") cfg.params.dq = num();
    else if (key == "parameters.Z0") cfg.params.Z0 = num();
    else if (key == "grid.dim") cfg.grid.dim = static_cast<int>(integer());
    else if (key == "grid.nx") cfg.grid.n[0] = integer();
    else if (key == "grid.ny") cfg.grid.n[1] = integer();
    else if (key == "grid.nz") cfg.grid.n[2] = integer();
    else if (key == "grid.lx") cfg.grid.length[0] = num();
    else if (key == "grid.ly") cfg.grid.length[1] = num();
    else if (key == "grid.lz") cfg.grid.length[2] = num();
    else if (key == "stepping.dt") cfg.step.dt = num();
    else if (key == "stepping.t_end") cfg.t_end = num();
    else if (key == "stepping.scheme") cfg.step.scheme = parse_scheme(key, value);
    else if (key == "stepping.diffusion") cfg.step.diffusion = parse_solver(key, value);
    else if (key == "stepping.positivity_floor") cfg.step.positivity_floor = num();
    else if (key == "stepping.sample_every") cfg.sample_every = integer();
    else if (key == "initial.kind") cfg.init_kind = parse_initial_kind(key, value);
    else if (key == "initial.amplitude") cfg.amplitude = num();
    else if (key == "initial.seed") cfg.seed = static_cast<unsigned long long>(integer());
    else if (key == "initial.mode") cfg.mode = static_cast<int>(integer());
    else if (key == "initial.square_fraction") cfg.square_fraction = num();
    else if (key == "initial.u") cfg.init_u = num();
    else if (key == "initial.v") cfg.init_v = num();
    else if (key == "initial.p") cfg.init_p = num();
    else if (key == "initial.q") cfg.init_q = num();
    else if (key == "initial.path") cfg.init_path = value;
    else if (key == "output.diagnostics") cfg.diagnostics_path = value;
    else if (key == "output.snapshot") cfg.snapshot_path = value;
    else if (key == "output.checkpoint") cfg.checkpoint_path = value;
    else if (key == "output.checkpoint_every") cfg.checkpoint_every = integer();
    else return false;
    return true;
}

struct ParsedText {
    std::map<std::string, std::string> entries;   // section.key -> value, in file order
};

ParsedText parse_entries(const std::string& text, const std::string& origin) {
    ParsedText out;
    std::istringstream in(text);
    std::string line, section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key +
                              "' appears before any [section]");
        const std::string full = section + "." + key;
        if (out.entries.count(full))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + full +
                              "'");
        out.entries[full] = value;
    }
    return out;
}

// validation that depends on which keys were present in the file
void validate_entry_set(const RunConfig& cfg, const std::set<std::string>& present) {
    if (present.count("model.epsilon") && cfg.variant != ModelVariant::ReGSEps)
        throw ConfigError("model.epsilon is only meaningful for variant regs-eps");
    if (present.count("model.feed") && cfg.variant != ModelVariant::ReducedGS)
        throw ConfigError("model.feed is only meaningful for variant reduced");
    if (cfg.init_kind == InitialKind::Snapshot && cfg.init_path.empty())
        throw ConfigError("initial.path is required for initial.kind = snapshot");
    if (cfg.init_kind == InitialKind::Uniform &&
        !(present.count("initial.u") && present.count("initial.v") &&
          present.count("initial.p") && present.count("initial.q")))
        throw ConfigError("initial.kind = uniform requires initial.u, .v, .p and .q");
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    const ParsedText parsed = parse_entries(text, origin);
    RunConfig cfg;
    std::set<std::string> present;
    for (const auto& [key, value] : parsed.entries) {
        if (!apply_entry(cfg, key, value)) throw ConfigError("unknown config key '" + key + "'");
        present.insert(key);
    }
    validate_entry_set(cfg, present);
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "' must look like section.key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (!apply_entry(cfg, key, value)) throw ConfigError("unknown config key '" + key + "'");
    validate(cfg);
}

void validate(const RunConfig& cfg) {
    try {
        validate(cfg.params);
        validate(cfg.step);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.grid.dim != 0) {
        // grid keys present: run them through the constructor checks
        try {
            make_grid(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
        throw ConfigError("stepping.t_end must be finite and >= 0");
    if (cfg.sample_every < 1) throw ConfigError("stepping.sample_every must be >= 1");
    if (cfg.checkpoint_every < 0) throw ConfigError("output.checkpoint_every must be >= 0");
    if (cfg.checkpoint_every > 0 && cfg.checkpoint_path.empty())
        throw ConfigError("output.checkpoint is required when output.checkpoint_every is set");
    if (cfg.checkpoint_every > 0 && cfg.checkpoint_every % cfg.sample_every != 0)
        throw ConfigError("output.checkpoint_every must be a multiple of stepping.sample_every");
    if (!(cfg.amplitude >= 0.0)) throw ConfigError("initial.amplitude must be >= 0");
    if (cfg.mode < 1) throw ConfigError("initial.mode must be >= 1");
    if (!(cfg.square_fraction > 0.0) || !(cfg.square_fraction < 1.0))
        throw ConfigError("initial.square_fraction must lie in (0, 1)");
    if (cfg.init_kind == InitialKind::Uniform) {
        for (double c : {cfg.init_u, cfg.init_v, cfg.init_p, cfg.init_q})
            if (!(c >= 0.0) || !std::isfinite(c))
                throw ConfigError("initial.u/.v/.p/.q must be finite and >= 0");
    }
}

const char* to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::ReGS: return "regs";
        case ModelVariant::ReGSEps: return "regs-eps";
        case ModelVariant::IrGS: return "irgs";
        case ModelVariant::ReducedGS: return "reduced";
    }
    return "?";
}

const char* to_string(InitialKind k) {
    switch (k) {
        case InitialKind::EquilibriumPerturbation: return "equilibrium-perturbation";
        case InitialKind::ModePerturbation: return "mode-perturbation";
        case InitialKind::SeededSquare: return "seeded-square";
        case InitialKind::Uniform: return "uniform";
        case InitialKind::Snapshot: return "snapshot";
    }
    return "?";
}

State build_initial_state(const RunConfig& cfg) {
    if (cfg.init_kind == InitialKind::Snapshot) {
        State s = read_snapshot(cfg.init_path);
        if (cfg.grid.dim != 0 && !(s.c.grid() == cfg.grid))
            throw ConfigError("snapshot grid does not match the configured grid");
        return s;
    }

    if (cfg.grid.dim == 0) throw ConfigError("grid.dim is required");
    const GridSpec g = make_grid(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
    State s;
    s.t = 0.0;

    switch (cfg.init_kind) {
        case InitialKind::Uniform:
            s.c = make_field4(g, cfg.init_u, cfg.init_v, cfg.init_p, cfg.init_q);
            break;

        case InitialKind::EquilibriumPerturbation: {
            Equilibrium eq;
            try {
                eq = detailed_balance_equilibrium(cfg.params);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("initial.kind = equilibrium-perturbation: ") +
                                  e.what());
            }
            s.c = equilibrium_field4(g, eq);
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            for (int sp = 0; sp < 4; ++sp) {
                Eigen::ArrayXd& a = s.c.species(sp).values;
                for (Eigen::Index i = 0; i < a.size(); ++i)
                    a[i] *= 1.0 + cfg.amplitude * dist(rng);
            }
            break;
        }

        case InitialKind::ModePerturbation: {
            Equilibrium eq;
            try {
                eq = detailed_balance_equilibrium(cfg.params);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("initial.kind = mode-perturbation: ") + e.what());
            }
            constexpr std::array<double, 4> sign{1.0, -1.0, 1.0, -1.0};
            const std::array<double, 4> base{eq.u, eq.v, eq.p, eq.q};
            const double m = static_cast<double>(cfg.mode);
            const Field shape = field_from(g, [&](double x, double y, double z) {
                double f = std::cos(2.0 * std::numbers::pi * m * x / g.length[0]);
                if (g.dim > 1) f *= std::cos(2.0 * std::numbers::pi * m * y / g.length[1]);
                if (g.dim > 2) f *= std::cos(2.0 * std::numbers::pi * m * z / g.length[2]);
                return f;
            });
            s.c = make_field4(g);
            for (int sp = 0; sp < 4; ++sp)
                s.c.species(sp).values =
                    base[sp] * (1.0 + cfg.amplitude * sign[sp] * shape.values);
            break;
        }

        case InitialKind::SeededSquare: {
            Equilibrium base;
            try {
                base = trivial_equilibrium(cfg.params);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("initial.kind = seeded-square: ") + e.what());
            }
            s.c = equilibrium_field4(g, base);
            // centered box: u halved, v raised by the amplitude
            const auto inside = [&](double x, int axis) {
                const double c = 0.5 * g.length[axis];
                return std::abs(x - c) <= 0.5 * cfg.square_fraction * g.length[axis];
            };
            const Field mask = field_from(g, [&](double x, double y, double z) {
                bool in = inside(x, 0);
                if (g.dim > 1) in = in && inside(y, 1);
                if (g.dim > 2) in = in && inside(z, 2);
                return in ? 1.0 : 0.0;
            });
            s.c.u.values = s.c.u.values * (1.0 - 0.5 * mask.values);
            s.c.v.values += cfg.amplitude * mask.values;
            break;
        }

        case InitialKind::Snapshot:
            break;   // handled above
    }
    return s;
}

} // namespace regs
