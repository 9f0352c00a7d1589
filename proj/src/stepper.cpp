#include "regs/stepper.hpp"

#include "regs/energy.hpp"
#include "regs/entropy.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace regs {

namespace {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::Index;

struct Tendency {
    ArrayXd u, v, p, q;
};

// pointwise reaction tendencies, vectorized over all nodes (effective rate
// constants assumed, i.e. variant substitutions already applied)
void reaction_tendency(const ArrayXd& u, const ArrayXd& v, const ArrayXd& p, const ArrayXd& q,
                       const Parameters& prm, ModelVariant variant, Tendency& out) {
    if (variant == ModelVariant::ReducedGS) {
        const ArrayXd cubic = prm.k1p * u * v.square();
        out.u = -cubic + prm.k0p * (prm.feed - u);
        out.v = cubic - prm.k2p * v;
        out.p = prm.k2p * v;
        out.q = ArrayXd::Zero(u.size());
        return;
    }
    const ArrayXd r0 = prm.k0p * u - prm.k0m * q;
    const ArrayXd r1 = prm.k1p * u * v.square() - prm.k1m * v.cube();
    const ArrayXd r2 = prm.k2p * v - prm.k2m * p;
    out.u = -r1 - r0;
    out.v = r1 - r2;
    out.p = r2;
    out.q = r0;
}

void require_finite(const Field4& c, const char* where) {
    for (int s = 0; s < 4; ++s) {
        const ArrayXd& a = c.species(s).values;
        if (a.allFinite()) continue;
        for (Index i = 0; i < a.size(); ++i)
            if (!std::isfinite(a[i]))
                throw StepFailure(i, s,
                                  std::string(where) + " produced a non-finite value in species " +
                                      std::string(species_names[s]) + " at node " +
                                      std::to_string(i));
    }
}

// raise everything below the floor; returns how many values were raised
long clamp_at_floor(Field4& c, double floor_) {
    long events = 0;
    for (int s = 0; s < 4; ++s) {
        ArrayXd& a = c.species(s).values;
        events += (a < floor_).count();
        a = a.max(floor_);
    }
    return events;
}

// one complex-to-complex transform along each axis in turn (lines gathered
// through the stride); inverse includes the 1/n scaling per axis
void dft_all_axes(const GridSpec& g, ArrayXcd& data, Eigen::FFT<double>& fft, bool inverse) {
    std::vector<std::complex<double>> line, transformed;
    for (int axis = 0; axis < g.dim; ++axis) {
        const Index n = g.n[axis];
        if (n == 1) continue;
        const Index inner = g.stride(axis);
        const Index outer = g.total() / (n * inner);
        line.resize(n);
        transformed.resize(n);
        for (Index o = 0; o < outer; ++o) {
            const Index base = o * n * inner;
            for (Index in = 0; in < inner; ++in) {
                const Index start = base + in;
                for (Index k = 0; k < n; ++k) line[static_cast<size_t>(k)] = data[start + k * inner];
                if (inverse)
                    fft.inv(transformed, line);
                else
                    fft.fwd(transformed, line);
                for (Index k = 0; k < n; ++k) data[start + k * inner] = transformed[static_cast<size_t>(k)];
            }
        }
    }
}

// multiplier per DFT mode for the 3-point stencil: z = dt * d * sum_a lambda_a(k),
// lambda_a(k) = -(2/h^2)(1 - cos(2 pi k / n)). The zero mode gets exactly 1.
ArrayXd stencil_symbol(const GridSpec& g, double d_dt, DiffusionSolver solver) {
    std::array<std::vector<double>, 3> lam;
    for (int a = 0; a < 3; ++a) {
        lam[a].assign(static_cast<size_t>(g.n[a]), 0.0);
        if (a >= g.dim) continue;
        const double h = g.spacing(a);
        for (Index k = 0; k < g.n[a]; ++k)
            lam[a][static_cast<size_t>(k)] =
                -2.0 / (h * h) *
                (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(g.n[a])));
    }
    ArrayXd sym(g.total());
    Index idx = 0;
    for (Index i = 0; i < g.n[0]; ++i)
        for (Index j = 0; j < g.n[1]; ++j)
            for (Index k = 0; k < g.n[2]; ++k, ++idx) {
                const double z = d_dt * (lam[0][static_cast<size_t>(i)] +
                                         lam[1][static_cast<size_t>(j)] +
                                         lam[2][static_cast<size_t>(k)]);
                sym[idx] = solver == DiffusionSolver::Spectral
                               ? std::exp(z)
                               : (1.0 + 0.5 * z) / (1.0 - 0.5 * z);
            }
    return sym;
}

thread_local Eigen::FFT<double> tls_fft;

} // namespace

Parameters effective_parameters(Parameters prm, ModelVariant variant) {
    switch (variant) {
        case ModelVariant::ReGS:
            break;
        case ModelVariant::ReGSEps:
            prm.k1m = prm.epsilon;
            prm.k2m = prm.epsilon;
            break;
        case ModelVariant::IrGS:
            prm.k1m = 0.0;
            prm.k2m = 0.0;
            break;
        case ModelVariant::ReducedGS:
            prm.k0m = 0.0;
            prm.k1m = 0.0;
            prm.k2m = 0.0;
            prm.dp = 0.0;
            prm.dq = 0.0;
            break;
    }
    return prm;
}

void validate(const StepConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw std::invalid_argument("dt must be finite and > 0");
    if (!(cfg.positivity_floor >= 0.0) || !std::isfinite(cfg.positivity_floor))
        throw std::invalid_argument("positivity_floor must be finite and >= 0");
    if (!(cfg.blowup_factor > 0.0))
        throw std::invalid_argument("blowup_factor must be > 0");
}

Field4 rhs(const Field4& c, const Parameters& prm, ModelVariant variant) {
    require_common_grid(c);
    const Parameters eff = effective_parameters(prm, variant);
    Tendency r;
    reaction_tendency(c.u.values, c.v.values, c.p.values, c.q.values, eff, variant, r);
    Field4 out = c;
    out.u.values = r.u;
    out.v.values = r.v;
    out.p.values = r.p;
    out.q.values = r.q;
    const std::array<double, 4> d{eff.du, eff.dv, eff.dp, eff.dq};
    for (int s = 0; s < 4; ++s)
        if (d[s] != 0.0)
            out.species(s).values += d[s] * laplacian(c.species(s)).values;
    return out;
}

long reaction_substep(Field4& c, const Parameters& prm, ModelVariant variant, double dt,
                      double positivity_floor) {
    const Parameters eff = effective_parameters(prm, variant);
    const ArrayXd &u = c.u.values, &v = c.v.values, &p = c.p.values, &q = c.q.values;
    Tendency k1, k2, k3, k4;
    reaction_tendency(u, v, p, q, eff, variant, k1);
    const double h = 0.5 * dt;
    reaction_tendency(u + h * k1.u, v + h * k1.v, p + h * k1.p, q + h * k1.q, eff, variant, k2);
    reaction_tendency(u + h * k2.u, v + h * k2.v, p + h * k2.p, q + h * k2.q, eff, variant, k3);
    reaction_tendency(u + dt * k3.u, v + dt * k3.v, p + dt * k3.p, q + dt * k3.q, eff, variant,
                      k4);
    const double w = dt / 6.0;
    c.u.values += w * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
    c.v.values += w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    c.p.values += w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    c.q.values += w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    require_finite(c, "reaction substep");
    return clamp_at_floor(c, positivity_floor);
}

DiffusionPlan::DiffusionPlan(const GridSpec& g, std::array<double, 4> diffusivity, double dt,
                             DiffusionSolver solver)
    : grid_(g) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("diffusion step dt must be finite and > 0");
    for (int s = 0; s < 4; ++s) {
        if (!(diffusivity[s] >= 0.0) || !std::isfinite(diffusivity[s]))
            throw std::invalid_argument("diffusivities must be finite and >= 0");
        active_[s] = diffusivity[s] > 0.0;
        if (active_[s]) symbol_[s] = stencil_symbol(g, diffusivity[s] * dt, solver);
    }
}

long DiffusionPlan::apply(Field4& c, double positivity_floor) const {
    require_common_grid(c);
    if (!(c.grid() == grid_))
        throw std::invalid_argument("diffusion plan was built for a different grid");
    ArrayXcd work(grid_.total());
    for (int s = 0; s < 4; ++s) {
        if (!active_[s]) continue;
        ArrayXd& a = c.species(s).values;
        work.real() = a;
        work.imag().setZero();
        dft_all_axes(grid_, work, tls_fft, false);
        work *= symbol_[s];
        dft_all_axes(grid_, work, tls_fft, true);
        a = work.real();
    }
    return clamp_at_floor(c, positivity_floor);
}

long diffusion_substep(Field4& c, const Parameters& prm, double dt, DiffusionSolver solver,
                       double positivity_floor) {
    const DiffusionPlan plan(c.grid(), {prm.du, prm.dv, prm.dp, prm.dq}, dt, solver);
    return plan.apply(c, positivity_floor);
}

long step_strang(State& s, const Parameters& prm, ModelVariant variant, const StepConfig& cfg,
                 const DiffusionPlan& half_plan) {
    const Parameters eff = effective_parameters(prm, variant);
    long events = half_plan.apply(s.c, cfg.positivity_floor);
    events += reaction_substep(s.c, eff, variant, cfg.dt, cfg.positivity_floor);
    events += half_plan.apply(s.c, cfg.positivity_floor);
    s.t += cfg.dt;
    return events;
}

long step_strang(State& s, const Parameters& prm, ModelVariant variant, const StepConfig& cfg) {
    const Parameters eff = effective_parameters(prm, variant);
    const DiffusionPlan half(s.c.grid(), {eff.du, eff.dv, eff.dp, eff.dq}, 0.5 * cfg.dt,
                             cfg.diffusion);
    return step_strang(s, prm, variant, cfg, half);
}

namespace {

bool reversible(const Parameters& p) {
    return p.k0p > 0.0 && p.k0m > 0.0 && p.k1p > 0.0 && p.k1m > 0.0 && p.k2p > 0.0 &&
           p.k2m > 0.0;
}

DiagnosticsRecord make_record(const State& s, const Parameters& eff,
                              const std::optional<Equilibrium>& entropy_eq,
                              const std::optional<Equilibrium>& global_eq, long clamp_events) {
    DiagnosticsRecord rec;
    rec.t = s.t;
    rec.mass = total_mass(s.c);
    rec.clamp_events = clamp_events;
    const LocalFunctionals loc = local_functionals(s.c, eff);
    rec.E_L = loc.E;
    rec.D_L = loc.D;
    const bool positive = min_value(s.c) > 0.0;
    if (positive) rec.D_d = diffusion_dissipation(s.c, eff);
    if (entropy_eq && positive) rec.F = free_energy(s.c, *entropy_eq);
    if (reversible(eff) && min_value(s.c) >= 0.0) rec.D_r = reaction_dissipation(s.c, eff);
    if (global_eq) {
        const GlobalFunctionals glob =
            global_functionals(perturbation(s.c, *global_eq), eff, *global_eq);
        rec.E_g = glob.E;
        rec.D_g = glob.D;
    }
    return rec;
}

} // namespace

State integrate(State initial, const Parameters& prm, ModelVariant variant,
                const StepConfig& cfg, const IntegrateOptions& opts) {
    validate(prm);
    validate(cfg);
    require_common_grid(initial.c);
    if (opts.sample_every < 1)
        throw std::invalid_argument("sample_every must be >= 1");
    if (!(opts.t_end >= initial.t))
        throw std::invalid_argument("t_end must be >= the initial time");

    const double span = opts.t_end - initial.t;
    const long long n_steps = std::llround(span / cfg.dt);
    if (std::abs(static_cast<double>(n_steps) * cfg.dt - span) >
        1e-8 * std::max(cfg.dt, std::abs(span)))
        throw std::invalid_argument("t_end - t0 must be an integer multiple of dt");

    const Parameters eff = effective_parameters(prm, variant);
    std::optional<Equilibrium> entropy_eq;
    if (reversible(eff)) entropy_eq = detailed_balance_equilibrium(eff);

    const double t0 = initial.t;
    State s = std::move(initial);
    long clamp_events = 0;

    const auto check_blowup = [&](const State& st) {
        const double m = max_value(st.c);
        if (!(m <= cfg.blowup_factor * prm.Z0))
            throw BlowUpError(st.t, m,
                              "blow-up detected at t = " + std::to_string(st.t) +
                                  ": max field value " + std::to_string(m) + " exceeds " +
                                  std::to_string(cfg.blowup_factor) + " * Z0");
    };
    const auto emit = [&](const State& st) {
        if (opts.on_record) opts.on_record(make_record(st, eff, entropy_eq, opts.eq, clamp_events));
        if (opts.on_state) opts.on_state(st);
    };

    check_blowup(s);
    emit(s);

    std::optional<DiffusionPlan> half_plan;
    if (cfg.scheme == Scheme::Strang)
        half_plan.emplace(s.c.grid(), std::array<double, 4>{eff.du, eff.dv, eff.dp, eff.dq},
                          0.5 * cfg.dt, cfg.diffusion);

    for (long long step = 1; step <= n_steps; ++step) {
        if (cfg.scheme == Scheme::Strang) {
            clamp_events += step_strang(s, eff, variant, cfg, *half_plan);
        } else {
            const Field4 f = rhs(s.c, eff, variant);
            for (int sp = 0; sp < 4; ++sp)
                s.c.species(sp).values += cfg.dt * f.species(sp).values;
            require_finite(s.c, "euler step");
            clamp_events += clamp_at_floor(s.c, cfg.positivity_floor);
            s.t += cfg.dt;
        }
        s.t = t0 + static_cast<double>(step) * cfg.dt;   // avoid accumulated drift
        check_blowup(s);
        if (step % opts.sample_every == 0 || step == n_steps) emit(s);
    }
    return s;
}

} // namespace regs
