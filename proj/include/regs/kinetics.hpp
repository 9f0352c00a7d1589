#pragma once

#include <Eigen/Dense>

// Reversible four-species kinetics:
//   reaction 0:  u <-> q          (rates k0p forward, k0m backward)
//   reaction 1:  u + 2v <-> 3v    (k1p, k1m)
//   reaction 2:  v <-> p          (k2p, k2m)
// Net rates r_i = forward - backward; species tendencies from stoichiometry
//   u: -r1 - r0,  v: +r1 - r2,  p: +r2,  q: +r0.

namespace regs {

struct Parameters {
    double k0p = 1.0, k0m = 1.0;   // u <-> q
    double k1p = 1.0, k1m = 1.0;   // u + 2v <-> 3v
    double k2p = 1.0, k2m = 1.0;   // v <-> p
    double du = 1.0, dv = 1.0, dp = 1.0, dq = 1.0;   // diffusivities
    double Z0 = 1.0;               // prescribed total mass on the unit-volume torus
    double epsilon = 0.0;          // backward-rate value substituted by the eps-variant
    double feed = 0.0;             // feed level for the reduced irreversible model
};

// throws std::invalid_argument naming the offending field
void validate(const Parameters& p);

struct Equilibrium {
    double u = 0.0, v = 0.0, p = 0.0, q = 0.0;
    Eigen::Vector4d vec() const { return {u, v, p, q}; }
};

struct Rates {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
};

// pointwise net rates; rejects negative or non-finite concentrations
Rates reaction_rates(double u, double v, double p, double q, const Parameters& prm);
inline Rates reaction_rates(const Eigen::Vector4d& c, const Parameters& prm) {
    return reaction_rates(c[0], c[1], c[2], c[3], prm);
}

// species tendencies (du,dv,dp,dq) from the net rates
inline Eigen::Vector4d species_tendency(const Rates& r) {
    return {-r.r1 - r.r0, r.r1 - r.r2, r.r2, r.r0};
}

// unique strictly positive spatially uniform steady state with mass Z0;
// every forward/backward flux pair balances there. Requires all six k > 0.
Equilibrium detailed_balance_equilibrium(const Parameters& prm);

// the v = p = 0 steady state (only the u <-> q exchange active); requires k0p + k0m > 0
Equilibrium trivial_equilibrium(const Parameters& prm);

} // namespace regs
