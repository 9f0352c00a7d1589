// command-line front end: configure, run and inspect reaction-diffusion studies
//
// exit codes: 0 success, 2 configuration/validation error, 3 numerical abort
// (blow-up or step failure), 4 I/O error

#include "regs/config.hpp"
#include "regs/csv.hpp"
#include "regs/energy.hpp"
#include "regs/entropy.hpp"
#include "regs/limits.hpp"
#include "regs/snapshot.hpp"
#include "regs/stepper.hpp"
#include "regs/wellmixed.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

namespace {

using namespace regs;

RunConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
    RunConfig cfg = load_config(path);
    for (const auto& s : sets) apply_override(cfg, s);
    validate(cfg);
    return cfg;
}

bool reversible(const Parameters& p) {
    return p.k0p > 0 && p.k0m > 0 && p.k1p > 0 && p.k1m > 0 && p.k2p > 0 && p.k2m > 0;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw SnapshotError("cannot open '" + path + "' for writing");
    return out;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& sets) {
    RunConfig cfg = load_with_overrides(config_path, sets);
    State initial = build_initial_state(cfg);

    const Parameters eff = effective_parameters(cfg.params, cfg.variant);
    std::optional<Equilibrium> eq;
    if (reversible(eff)) eq = detailed_balance_equilibrium(eff);

    std::cout << "variant " << to_string(cfg.variant) << ", grid dim " << initial.c.grid().dim
              << " [" << initial.c.grid().n[0] << " " << initial.c.grid().n[1] << " "
              << initial.c.grid().n[2] << "], dt " << cfg.step.dt << ", t " << initial.t
              << " -> " << cfg.t_end << "\n";

    std::vector<DiagnosticsRecord> records;
    IntegrateOptions opts;
    opts.t_end = cfg.t_end;
    opts.sample_every = cfg.sample_every;
    opts.eq = eq;
    opts.on_record = [&](const DiagnosticsRecord& r) { records.push_back(r); };
    if (cfg.checkpoint_every > 0) {
        const double t0 = initial.t;
        const double dt = cfg.step.dt;
        const long every = cfg.checkpoint_every;
        const std::string path = cfg.checkpoint_path;
        opts.on_state = [t0, dt, every, path](const State& s) {
            const long step = std::lround((s.t - t0) / dt);
            if (step > 0 && step % every == 0) write_snapshot(path, s);
        };
    }

    const State final = integrate(std::move(initial), cfg.params, cfg.variant, cfg.step, opts);

    // fill the monitor columns from the recorded series (global pair when an
    // equilibrium exists, local pair otherwise); interior samples only
    if (records.size() >= 3) {
        std::vector<MonitorSample> ms;
        bool ok = true;
        for (const auto& r : records) {
            const std::optional<double> E = eq ? r.E_g : r.E_L;
            const std::optional<double> D = eq ? r.D_g : r.D_L;
            if (!E || !D) {
                ok = false;
                break;
            }
            ms.push_back({r.t, *E, *D});
        }
        if (ok) {
            try {
                const double C = eq ? global_growth_constant(eff, *eq)
                                    : local_growth_constant(eff);
                const MonitorReport rep = inequality_monitor(
                    ms, eq ? MonitorKind::Global : MonitorKind::Local, C);
                for (size_t j = 0; j < rep.t.size(); ++j) {
                    records[j + 1].monitor_lhs = rep.lhs[j];
                    records[j + 1].monitor_rhs = rep.rhs[j];
                }
            } catch (const std::invalid_argument&) {
                // non-uniform sampling (odd final step); leave the columns empty
            }
        }
    }

    if (!cfg.diagnostics_path.empty()) write_diagnostics_csv(cfg.diagnostics_path, records);
    if (!cfg.snapshot_path.empty()) write_snapshot(cfg.snapshot_path, final);

    const DiagnosticsRecord& last = records.back();
    std::cout << "done: t " << format_double(final.t) << ", mass " << format_double(last.mass)
              << ", clamp events " << last.clamp_events << "\n";
    if (last.F) std::cout << "F " << format_double(*last.F) << "\n";
    return 0;
}

// -------------------------------------------------------------- equilibrium

int cmd_equilibrium(const std::string& config_path, const std::vector<std::string>& sets) {
    RunConfig cfg = load_with_overrides(config_path, sets);
    const Parameters prm = cfg.params;
    std::cout << "kind,u,v,p,q,mass\n";
    if (reversible(prm)) {
        const Equilibrium eq = detailed_balance_equilibrium(prm);
        std::cout << "detailed-balance," << format_double(eq.u) << ',' << format_double(eq.v)
                  << ',' << format_double(eq.p) << ',' << format_double(eq.q) << ','
                  << format_double(eq.u + eq.v + eq.p + eq.q) << "\n";
    } else {
        std::cout << "detailed-balance,,,,,\n";
    }
    const Equilibrium tr = trivial_equilibrium(prm);
    std::cout << "trivial," << format_double(tr.u) << ',' << format_double(tr.v) << ','
              << format_double(tr.p) << ',' << format_double(tr.q) << ','
              << format_double(tr.u + tr.v + tr.p + tr.q) << "\n";
    return 0;
}

// ---------------------------------------------------------------- sweep-eps

int cmd_sweep_eps(const std::string& config_path, const std::vector<std::string>& sets,
                  std::vector<double> eps, const std::string& out_path) {
    RunConfig cfg = load_with_overrides(config_path, sets);
    if (eps.empty()) throw ConfigError("sweep-eps requires at least one --eps value");
    const State initial = build_initial_state(cfg);
    const SweepResult res =
        epsilon_sweep(initial, cfg.params, cfg.step, cfg.t_end, cfg.sample_every, eps);

    std::ostringstream table;
    table << "eps,sup_l2,l2t_h1\n";
    for (size_t i = 0; i < res.eps.size(); ++i)
        table << format_double(res.eps[i]) << ',' << format_double(res.sup_l2[i]) << ','
              << format_double(res.l2t_h1[i]) << "\n";
    std::cout << table.str();
    std::cout << "order sup_l2 " << format_double(res.order_sup.slope) << " +- "
              << format_double(res.order_sup.ci_halfwidth) << "\n";
    std::cout << "order l2t_h1 " << format_double(res.order_l2t.slope) << " +- "
              << format_double(res.order_l2t.ci_halfwidth) << "\n";
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << table.str();
    }
    return 0;
}

// ---------------------------------------------------------------- slow-fast

int cmd_slow_fast(const std::string& config_path, const std::vector<std::string>& sets,
                  double lambda, std::optional<double> hold_u, const std::string& out_path) {
    RunConfig cfg = load_with_overrides(config_path, sets);
    const State initial = build_initial_state(cfg);
    const SlowFastResult res = slow_fast_study(initial, cfg.params, lambda, cfg.step, cfg.t_end,
                                               cfg.sample_every, hold_u);

    std::ostringstream table;
    table << "t,s_numeric,s_closed_form,deviation";
    const bool with_uv = !res.uv_deviation.empty();
    if (with_uv) table << ",uv_deviation";
    table << "\n";
    for (size_t j = 0; j < res.t.size(); ++j) {
        table << format_double(res.t[j]) << ',' << format_double(res.s_numeric[j]) << ','
              << format_double(res.s_closed_form[j]) << ','
              << format_double(std::abs(res.s_numeric[j] - res.s_closed_form[j]));
        if (with_uv) table << ',' << format_double(res.uv_deviation[j]);
        table << "\n";
    }
    std::cout << table.str();
    std::cout << "max s deviation " << format_double(res.max_s_deviation) << "\n";
    if (with_uv)
        std::cout << "max (u,v) deviation from reduced model "
                  << format_double(res.max_uv_deviation) << "\n";
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << table.str();
    }
    return 0;
}

// ------------------------------------------------------------ check-entropy

int cmd_check_entropy(const std::string& config_path, const std::vector<std::string>& sets,
                      int levels, const std::string& out_path) {
    RunConfig cfg = load_with_overrides(config_path, sets);
    if (levels < 1) throw ConfigError("--levels must be >= 1");
    if (cfg.init_kind != InitialKind::ModePerturbation &&
        cfg.init_kind != InitialKind::Uniform)
        throw ConfigError(
            "check-entropy refines the grid, which needs a procedural smooth initial state; "
            "use initial.kind = mode-perturbation");

    std::ostringstream table;
    table << "level,n,dt,max_residual\n";
    std::vector<double> dts, residuals;
    for (int lvl = 0; lvl < levels; ++lvl) {
        RunConfig c = cfg;
        const long factor = 1L << lvl;
        for (int a = 0; a < c.grid.dim; ++a) c.grid.n[a] = cfg.grid.n[a] * factor;
        c.step.dt = cfg.step.dt / static_cast<double>(factor);
        const State initial = build_initial_state(c);

        std::vector<EntropySample> samples;
        IntegrateOptions opts;
        opts.t_end = c.t_end;
        opts.sample_every = c.sample_every;
        opts.on_record = [&](const DiagnosticsRecord& r) {
            if (r.F && r.D_d && r.D_r) samples.push_back({r.t, *r.F, *r.D_d, *r.D_r});
        };
        integrate(initial, c.params, c.variant, c.step, opts);
        const ResidualSeries res = entropy_balance_residual(samples);
        table << lvl << ',' << c.grid.n[0] << ',' << format_double(c.step.dt) << ','
              << format_double(res.max_abs) << "\n";
        dts.push_back(c.step.dt);
        residuals.push_back(res.max_abs);
    }
    std::cout << table.str();
    if (dts.size() >= 2) {
        const FitResult fit = fit_loglog_slope(dts, residuals);
        std::cout << "refinement slope " << format_double(fit.slope) << " +- "
                  << format_double(fit.ci_halfwidth) << "\n";
    }
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << table.str();
    }
    return 0;
}

// ---------------------------------------------------------------- wellmixed

int cmd_wellmixed(const std::string& config_path, const std::vector<std::string>& sets,
                  const std::string& out_path) {
    RunConfig cfg = load_with_overrides(config_path, sets);
    Eigen::Vector4d c0;
    if (cfg.init_kind == InitialKind::Uniform)
        c0 << cfg.init_u, cfg.init_v, cfg.init_p, cfg.init_q;
    else if (reversible(cfg.params))
        c0 = detailed_balance_equilibrium(cfg.params).vec();
    else
        throw ConfigError("wellmixed requires initial.kind = uniform or reversible rates");

    const WellMixedTrajectory traj =
        integrate_trajectories(c0, cfg.params, cfg.t_end, cfg.step.dt, cfg.sample_every);

    std::ostringstream table;
    table << "t,u,v,p,q,R0,R1,R2\n";
    for (size_t j = 0; j < traj.t.size(); ++j) {
        table << format_double(traj.t[j]);
        for (int s = 0; s < 4; ++s) table << ',' << format_double(traj.c[j][s]);
        for (int i = 0; i < 3; ++i) table << ',' << format_double(traj.R[j][i]);
        table << "\n";
    }
    std::cout << table.str();

    double max_kin = 0.0;
    for (size_t j = 0; j < traj.t.size(); ++j)
        max_kin = std::max(max_kin, (traj.c[j] - reconstruct_concentrations(c0, traj.R[j]))
                                        .cwiseAbs()
                                        .maxCoeff());
    std::cout << "kinematic reconstruction max error " << format_double(max_kin) << "\n";

    if (reversible(cfg.params) && traj.c.back().minCoeff() > 0.0) {
        const Equilibrium eq = detailed_balance_equilibrium(cfg.params);
        const CheckReport var = variational_derivative_check(traj.c.back(), cfg.params, eq);
        const CheckReport dis = dissipation_identity_check(traj.c.back(), cfg.params);
        std::cout << "variational derivative max residual " << format_double(var.max_residual)
                  << "\n";
        std::cout << "dissipation identity max residual " << format_double(dis.max_residual)
                  << "\n";
    }
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << table.str();
    }
    return 0;
}

// ------------------------------------------------------------------ inspect

int cmd_inspect(const std::string& path) {
    const SnapshotHeader h = inspect_snapshot(path);
    std::cout << "format version " << h.version << "\n";
    std::cout << "dim " << h.dim << "\n";
    std::cout << "points " << h.n[0] << " " << h.n[1] << " " << h.n[2] << "\n";
    std::cout << "length " << format_double(h.length[0]) << " " << format_double(h.length[1])
              << " " << format_double(h.length[2]) << "\n";
    std::cout << "time " << format_double(h.time) << "\n";
    std::cout << "species u v p q\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"four-species reversible reaction-diffusion laboratory"};
    app.require_subcommand(1);
    app.fallthrough();   // let --set appear after the subcommand name

    std::vector<std::string> sets;
    app.add_option("--set", sets, "override a config entry, section.key=value")
        ->take_all()
        ->expected(0, -1);

    std::string config_path, out_path, snapshot_path;
    std::vector<double> eps;
    double lambda = 0.0;
    std::optional<double> hold_u;
    double hold_u_value = 0.0;
    int levels = 3;

    auto* sim = app.add_subcommand("simulate", "integrate a configured run");
    sim->add_option("config", config_path, "config file")->required();

    auto* eqc = app.add_subcommand("equilibrium", "print the uniform steady states");
    eqc->add_option("config", config_path, "config file")->required();

    auto* swp = app.add_subcommand("sweep-eps", "vanishing-backward-rate family study");
    swp->add_option("config", config_path, "config file")->required();
    swp->add_option("--eps", eps, "eps values")->required()->delimiter(',');
    swp->add_option("--out", out_path, "write the table to this CSV");

    auto* slf = app.add_subcommand("slow-fast", "slow exchange regime study");
    slf->add_option("config", config_path, "config file")->required();
    slf->add_option("--lambda", lambda, "slow exchange rate")->required();
    auto* hold_opt = slf->add_option("--hold-u", hold_u_value, "freeze u at this value");
    slf->add_option("--out", out_path, "write the table to this CSV");

    auto* ent = app.add_subcommand("check-entropy", "entropy balance residual refinement study");
    ent->add_option("config", config_path, "config file")->required();
    ent->add_option("--levels", levels, "number of joint (dt, h) refinement levels");
    ent->add_option("--out", out_path, "write the table to this CSV");

    auto* wmx = app.add_subcommand("wellmixed", "spatially homogeneous kinetics and checks");
    wmx->add_option("config", config_path, "config file")->required();
    wmx->add_option("--out", out_path, "write the table to this CSV");

    auto* ins = app.add_subcommand("inspect", "print a snapshot header");
    ins->add_option("snapshot", snapshot_path, "snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path, sets);
        if (eqc->parsed()) return cmd_equilibrium(config_path, sets);
        if (swp->parsed()) return cmd_sweep_eps(config_path, sets, eps, out_path);
        if (slf->parsed()) {
            if (hold_opt->count() > 0) hold_u = hold_u_value;
            return cmd_slow_fast(config_path, sets, lambda, hold_u, out_path);
        }
        if (ent->parsed()) return cmd_check_entropy(config_path, sets, levels, out_path);
        if (wmx->parsed()) return cmd_wellmixed(config_path, sets, out_path);
        if (ins->parsed()) return cmd_inspect(snapshot_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BlowUpError& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const StepFailure& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const SnapshotError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
