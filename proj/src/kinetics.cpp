#include "regs/kinetics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace regs {

namespace {

void require_nonneg_finite(double x, const char* name) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
}

} // namespace

void validate(const Parameters& p) {
    require_nonneg_finite(p.k0p, "k0p");
    require_nonneg_finite(p.k0m, "k0m");
    require_nonneg_finite(p.k1p, "k1p");
    require_nonneg_finite(p.k1m, "k1m");
    require_nonneg_finite(p.k2p, "k2p");
    require_nonneg_finite(p.k2m, "k2m");
    require_nonneg_finite(p.du, "du");
    require_nonneg_finite(p.dv, "dv");
    require_nonneg_finite(p.dp, "dp");
    require_nonneg_finite(p.dq, "dq");
    require_nonneg_finite(p.epsilon, "epsilon");
    require_nonneg_finite(p.feed, "feed");
    if (!std::isfinite(p.Z0) || p.Z0 <= 0.0)
        throw std::invalid_argument("Z0 must be finite and > 0");
}

Rates reaction_rates(double u, double v, double p, double q, const Parameters& prm) {
    for (double c : {u, v, p, q})
        if (!std::isfinite(c) || c < 0.0)
            throw std::domain_error("reaction_rates: concentrations must be finite and >= 0");
    Rates r;
    r.r0 = prm.k0p * u - prm.k0m * q;
    r.r1 = prm.k1p * u * v * v - prm.k1m * v * v * v;
    r.r2 = prm.k2p * v - prm.k2m * p;
    return r;
}

Equilibrium detailed_balance_equilibrium(const Parameters& prm) {
    validate(prm);
    for (double k : {prm.k0p, prm.k0m, prm.k1p, prm.k1m, prm.k2p, prm.k2m})
        if (k <= 0.0)
            throw std::invalid_argument(
                "detailed_balance_equilibrium requires all six rate constants > 0");
    const double K = prm.k0m * prm.k1m * prm.k2m + prm.k0m * prm.k1p * prm.k2m +
                     prm.k0m * prm.k1p * prm.k2p + prm.k0p * prm.k1m * prm.k2m;
    Equilibrium eq;
    eq.u = prm.k0m * prm.k1m * prm.k2m / K * prm.Z0;
    eq.v = prm.k0m * prm.k1p * prm.k2m / K * prm.Z0;
    eq.p = prm.k0m * prm.k1p * prm.k2p / K * prm.Z0;
    eq.q = prm.k0p * prm.k1m * prm.k2m / K * prm.Z0;
    return eq;
}

Equilibrium trivial_equilibrium(const Parameters& prm) {
    validate(prm);
    const double ksum = prm.k0p + prm.k0m;
    if (ksum <= 0.0)
        throw std::invalid_argument("trivial_equilibrium requires k0p + k0m > 0");
    Equilibrium eq;
    eq.u = prm.k0m / ksum * prm.Z0;
    eq.v = 0.0;
    eq.p = 0.0;
    eq.q = prm.k0p / ksum * prm.Z0;
    return eq;
}

} // namespace regs
