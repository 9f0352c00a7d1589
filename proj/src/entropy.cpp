#include "regs/entropy.hpp"

#include "regs/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace regs {

namespace {

using Eigen::ArrayXd;

constexpr double flux_guard = 1e-300;

void require_positive(const Field4& c, const char* who) {
    if (!(min_value(c) > 0.0))
        throw std::domain_error(std::string(who) + " requires strictly positive concentrations");
}

void require_reversible(const Parameters& prm, const char* who) {
    for (double k : {prm.k0p, prm.k0m, prm.k1p, prm.k1m, prm.k2p, prm.k2m})
        if (!(k > 0.0))
            throw std::invalid_argument(std::string(who) +
                                        " is a reversible-kinetics diagnostic; all six rate "
                                        "constants must be > 0");
}

// (a - b) ln(a / b) with both fluxes guarded below; nonnegative by construction
double flux_form_sum(const ArrayXd& a, const ArrayXd& b) {
    return ((a - b) * (a.max(flux_guard) / b.max(flux_guard)).log()).sum();
}

} // namespace

double free_energy(const Field4& c, const Equilibrium& eq) {
    require_common_grid(c);
    require_positive(c, "free_energy");
    for (double e : {eq.u, eq.v, eq.p, eq.q})
        if (!(e > 0.0))
            throw std::invalid_argument("free_energy requires a strictly positive equilibrium");
    const std::array<double, 4> ref{eq.u, eq.v, eq.p, eq.q};
    double sum = 0.0;
    for (int s = 0; s < 4; ++s) {
        const ArrayXd& a = c.species(s).values;
        sum += (a * ((a / ref[s]).log() - 1.0)).sum();
    }
    return sum * c.grid().cell_volume();
}

double diffusion_dissipation(const Field4& c, const Parameters& prm) {
    require_common_grid(c);
    require_positive(c, "diffusion_dissipation");
    const std::array<double, 4> d{prm.du, prm.dv, prm.dp, prm.dq};
    double sum = 0.0;
    for (int s = 0; s < 4; ++s) {
        if (d[s] == 0.0) continue;
        sum += d[s] * (gradient_sq(c.species(s)).values / c.species(s).values).sum();
    }
    return sum * c.grid().cell_volume();
}

double reaction_dissipation(const Field4& c, const Parameters& prm) {
    require_common_grid(c);
    require_reversible(prm, "reaction_dissipation");
    if (min_value(c) < 0.0)
        throw std::domain_error("reaction_dissipation requires nonnegative concentrations");
    const ArrayXd& u = c.u.values;
    const ArrayXd& v = c.v.values;
    const ArrayXd& p = c.p.values;
    const ArrayXd& q = c.q.values;
    double sum = 0.0;
    sum += flux_form_sum(prm.k0p * u, prm.k0m * q);
    sum += flux_form_sum(prm.k1p * u * v.square(), prm.k1m * v.cube());
    sum += flux_form_sum(prm.k2p * v, prm.k2m * p);
    return sum * c.grid().cell_volume();
}

ResidualSeries entropy_balance_residual(std::span<const EntropySample> samples) {
    const size_t m = samples.size();
    if (m < 3)
        throw std::invalid_argument("entropy_balance_residual needs at least 3 samples");
    double dt_sum = 0.0;
    for (size_t j = 0; j + 1 < m; ++j) {
        const double dt = samples[j + 1].t - samples[j].t;
        if (!(dt > 0.0))
            throw std::invalid_argument("entropy_balance_residual: sample times must increase");
        dt_sum += dt;
    }
    const double dt_mean = dt_sum / static_cast<double>(m - 1);
    for (size_t j = 0; j + 1 < m; ++j)
        if (std::abs(samples[j + 1].t - samples[j].t - dt_mean) > 1e-9 * dt_mean)
            throw std::invalid_argument("entropy_balance_residual: samples must be uniformly spaced");

    ResidualSeries out;
    out.t.reserve(m - 2);
    out.residual.reserve(m - 2);
    for (size_t j = 1; j + 1 < m; ++j) {
        const double dFdt = (samples[j + 1].F - samples[j - 1].F) / (2.0 * dt_mean);
        const double r = dFdt + samples[j].D_d + samples[j].D_r;
        out.t.push_back(samples[j].t);
        out.residual.push_back(r);
        out.max_abs = std::max(out.max_abs, std::abs(r));
    }
    return out;
}

} // namespace regs
