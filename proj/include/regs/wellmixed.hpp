#pragma once

#include "regs/kinetics.hpp"

#include <vector>

// Spatially homogeneous (well-mixed) kinetics, integrated jointly with the
// reaction extents R = (R0, R1, R2). The extents are the variational coordinates
// of the kinetics: concentrations are an affine function of them,
//   u = u0 - R1 - R0,  v = v0 + R1 - R2,  p = p0 + R2,  q = q0 + R0,
// the free energy acts as the potential with dF/dR_i = -ln(fwd_i / bwd_i), and
// each reaction dissipates (fwd - bwd) ln(fwd / bwd) >= 0.

namespace regs {

Eigen::Vector4d wellmixed_rhs(const Eigen::Vector4d& c, const Parameters& prm);

struct WellMixedTrajectory {
    std::vector<double> t;
    std::vector<Eigen::Vector4d> c;
    std::vector<Eigen::Vector3d> R;
};

// classical RK4 on the joint (c, R) system; samples every sample_every steps
// plus the initial and final states. Aborts when |c| exceeds 1e6 * Z0.
WellMixedTrajectory integrate_trajectories(const Eigen::Vector4d& c0, const Parameters& prm,
                                           double t_end, double dt, long sample_every = 1);

Eigen::Vector4d reconstruct_concentrations(const Eigen::Vector4d& c0, const Eigen::Vector3d& R);

struct CheckReport {
    Eigen::Vector3d residual = Eigen::Vector3d::Zero();
    double max_residual = 0.0;
};

// Centered finite differences of the free energy along each extent direction
// against the closed-form derivative -ln(fwd_i / bwd_i). delta is the step; if a
// displaced state leaves the positive cone the step is shrunk once (x0.1) before
// giving up. Requires a strictly positive state and reversible rates.
CheckReport variational_derivative_check(const Eigen::Vector4d& c, const Parameters& prm,
                                         const Equilibrium& eq, double delta = 1e-6);

// Relative agreement of the two algebraically equal dissipation forms
//   r_i ln(r_i / bwd_i + 1)  and  (fwd_i - bwd_i) ln(fwd_i / bwd_i).
// Errors when any backward flux vanishes.
CheckReport dissipation_identity_check(const Eigen::Vector4d& c, const Parameters& prm);

// well-mixed free energy sum_a c_a (ln(c_a / eq_a) - 1)
double wellmixed_free_energy(const Eigen::Vector4d& c, const Equilibrium& eq);

} // namespace regs
