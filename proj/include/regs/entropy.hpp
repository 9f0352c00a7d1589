#pragma once

#include "regs/field4.hpp"
#include "regs/kinetics.hpp"

#include <span>
#include <vector>

// Entropy diagnostics. Along smooth reversible trajectories the relative free
// energy F satisfies dF/dt + D_d + D_r = 0; the residual of that balance,
// measured on sampled series, is the primary structure check of the solver.

namespace regs {

// integral of sum_a c_a (ln(c_a / eq_a) - 1); errors on nonpositive concentrations
double free_energy(const Field4& c, const Equilibrium& eq);

// integral of sum_a (d_a / c_a) |grad c_a|^2; errors on nonpositive concentrations
double diffusion_dissipation(const Field4& c, const Parameters& prm);

// integral of sum_i (fwd_i - bwd_i) ln(fwd_i / bwd_i), one term per reaction,
// with both fluxes guarded below at 1e-300 so depleted regions stay finite.
// Each term is nonnegative. Errors when any rate constant is zero (the diagnostic
// only makes sense for reversible kinetics) or any concentration is negative.
double reaction_dissipation(const Field4& c, const Parameters& prm);

struct EntropySample {
    double t = 0.0, F = 0.0, D_d = 0.0, D_r = 0.0;
};

struct ResidualSeries {
    std::vector<double> t;          // interior sample times
    std::vector<double> residual;   // centered dF/dt + D_d + D_r
    double max_abs = 0.0;
};

// centered-difference balance residual on a uniformly spaced series;
// errors on fewer than 3 samples or non-uniform spacing
ResidualSeries entropy_balance_residual(std::span<const EntropySample> samples);

} // namespace regs
