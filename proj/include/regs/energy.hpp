#pragma once

#include "regs/field4.hpp"
#include "regs/kinetics.hpp"

#include <span>
#include <vector>

// H^1-based energy functionals and the a-priori inequalities they satisfy:
// a local pair (E_L, D_L) with growth bound dE_L/dt + D_L <= C_L (E_L + E_L^3),
// which yields a lower bound on the lifespan of bounded energy, and a global
// weighted perturbation pair (E_g, D_g) with the small-data decay mechanism
// dE_g/dt + D_g <= C_g (1 + sqrt(E_g)) sqrt(E_g) D_g.

namespace regs {

// componentwise difference from a spatially uniform reference state
Field4 perturbation(const Field4& c, const Equilibrium& eq);

struct LocalFunctionals {
    double E = 0.0;   // sum of squared H^1 norms of the four fields
    double D = 0.0;
};

LocalFunctionals local_functionals(const Field4& c, const Parameters& prm);

// the constant C_L in the local growth bound
double local_growth_constant(const Parameters& prm);

// time until the local energy bound can first be lost, from the growth inequality
double predicted_lifespan(double E0, double C_L);

struct GlobalFunctionals {
    double E = 0.0;
    double D = 0.0;
    double C = 0.0;   // the growth constant C_g for these weights
};

// evaluated on the perturbation (tilde) fields relative to eq
GlobalFunctionals global_functionals(const Field4& tilde, const Parameters& prm,
                                     const Equilibrium& eq);

double global_growth_constant(const Parameters& prm, const Equilibrium& eq);

// smallness level nu = min(1, 1/(64 C_g^2)); E_g(0) <= nu triggers monotone decay
double smallness_threshold(double C_g);

enum class MonitorKind { Local, Global };

struct MonitorSample {
    double t = 0.0, E = 0.0, D = 0.0;
};

struct MonitorReport {
    std::vector<double> t;     // interior sample times
    std::vector<double> lhs;   // centered dE/dt + D
    std::vector<double> rhs;   // C (E + E^3)  or  C (1 + sqrt(E)) sqrt(E) D
    double satisfied_fraction = 0.0;
};

// checks the growth inequality on a uniformly spaced (t, E, D) series;
// errors on fewer than 3 samples or non-uniform spacing
MonitorReport inequality_monitor(std::span<const MonitorSample> samples, MonitorKind kind,
                                 double growth_constant, double tol = 1e-10);

} // namespace regs
