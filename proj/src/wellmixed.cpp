#include "regs/wellmixed.hpp"

#include "regs/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace regs {

namespace {

using Eigen::Vector3d;
using Eigen::Vector4d;

Vector3d rate_vector(const Vector4d& c, const Parameters& prm) {
    const Rates r = reaction_rates(c, prm);
    return {r.r0, r.r1, r.r2};
}

// stoichiometric columns of the three reactions (u, v, p, q rows)
const Eigen::Matrix<double, 4, 3> stoichiometry = [] {
    Eigen::Matrix<double, 4, 3> S;
    // extent 0: u -> q      extent 1: u -> v      extent 2: v -> p
    S.col(0) << -1.0, 0.0, 0.0, 1.0;
    S.col(1) << -1.0, 1.0, 0.0, 0.0;
    S.col(2) << 0.0, -1.0, 1.0, 0.0;
    return S;
}();

struct Fluxes {
    Vector3d fwd, bwd;
};

Fluxes fluxes_at(const Vector4d& c, const Parameters& prm) {
    Fluxes f;
    f.fwd = {prm.k0p * c[0], prm.k1p * c[0] * c[1] * c[1], prm.k2p * c[1]};
    f.bwd = {prm.k0m * c[3], prm.k1m * c[1] * c[1] * c[1], prm.k2m * c[2]};
    return f;
}

void require_reversible(const Parameters& prm, const char* who) {
    for (double k : {prm.k0p, prm.k0m, prm.k1p, prm.k1m, prm.k2p, prm.k2m})
        if (!(k > 0.0))
            throw std::invalid_argument(std::string(who) + " requires all six rate constants > 0");
}

} // namespace

Vector4d wellmixed_rhs(const Vector4d& c, const Parameters& prm) {
    return stoichiometry * rate_vector(c, prm);
}

WellMixedTrajectory integrate_trajectories(const Vector4d& c0, const Parameters& prm,
                                           double t_end, double dt, long sample_every) {
    validate(prm);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
    if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    const long long n_steps = std::llround(t_end / dt);
    if (std::abs(static_cast<double>(n_steps) * dt - t_end) > 1e-8 * std::max(dt, t_end))
        throw std::invalid_argument("t_end must be an integer multiple of dt");

    // joint RK4 on (c, R); c stays an exact affine function of R because the
    // stage tendencies satisfy dc = S dR identically
    Vector4d c = c0;
    Vector3d R = Vector3d::Zero();

    WellMixedTrajectory out;
    const auto emit = [&](double t) {
        out.t.push_back(t);
        out.c.push_back(c);
        out.R.push_back(R);
    };
    emit(0.0);

    for (long long step = 1; step <= n_steps; ++step) {
        const Vector3d k1 = rate_vector(c, prm);
        const Vector3d k2 = rate_vector(c + 0.5 * dt * (stoichiometry * k1), prm);
        const Vector3d k3 = rate_vector(c + 0.5 * dt * (stoichiometry * k2), prm);
        const Vector3d k4 = rate_vector(c + dt * (stoichiometry * k3), prm);
        const Vector3d dR = dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        R += dR;
        c += stoichiometry * dR;
        if (!c.allFinite())
            throw StepFailure(0, 0, "well-mixed step produced a non-finite concentration");
        const double m = c.cwiseAbs().maxCoeff();
        if (!(m <= 1e6 * prm.Z0))
            throw BlowUpError(static_cast<double>(step) * dt, m,
                              "well-mixed trajectory exceeded 1e6 * Z0");
        if (step % sample_every == 0 || step == n_steps)
            emit(static_cast<double>(step) * dt);
    }
    return out;
}

Vector4d reconstruct_concentrations(const Vector4d& c0, const Vector3d& R) {
    return c0 + stoichiometry * R;
}

double wellmixed_free_energy(const Vector4d& c, const Equilibrium& eq) {
    if (!(c.minCoeff() > 0.0))
        throw std::domain_error("wellmixed_free_energy requires strictly positive concentrations");
    const Vector4d ref = eq.vec();
    if (!(ref.minCoeff() > 0.0))
        throw std::invalid_argument("wellmixed_free_energy requires a positive equilibrium");
    double sum = 0.0;
    for (int s = 0; s < 4; ++s) sum += c[s] * (std::log(c[s] / ref[s]) - 1.0);
    return sum;
}

CheckReport variational_derivative_check(const Vector4d& c, const Parameters& prm,
                                         const Equilibrium& eq, double delta) {
    require_reversible(prm, "variational_derivative_check");
    if (!(c.minCoeff() > 0.0))
        throw std::domain_error("variational_derivative_check requires an interior state");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    // the closed-form derivative uses detailed balance of the reference state
    const double db0 = std::abs(prm.k0p * eq.u - prm.k0m * eq.q);
    const double db1 = std::abs(prm.k1p * eq.u - prm.k1m * eq.v);
    const double db2 = std::abs(prm.k2p * eq.v - prm.k2m * eq.p);
    const double scale = prm.k0p * eq.u + prm.k1p * eq.u + prm.k2p * eq.v;
    if (db0 + db1 + db2 > 1e-10 * scale)
        throw std::invalid_argument(
            "variational_derivative_check: eq does not satisfy detailed balance for these rates");

    const Fluxes f = fluxes_at(c, prm);
    CheckReport rep;
    for (int i = 0; i < 3; ++i) {
        double d = delta;
        Vector4d cp = c + d * stoichiometry.col(i);
        Vector4d cm = c - d * stoichiometry.col(i);
        if (cp.minCoeff() <= 0.0 || cm.minCoeff() <= 0.0) {
            d *= 0.1;   // one shrink before giving up
            cp = c + d * stoichiometry.col(i);
            cm = c - d * stoichiometry.col(i);
            if (cp.minCoeff() <= 0.0 || cm.minCoeff() <= 0.0)
                throw std::domain_error(
                    "variational_derivative_check: state too close to the boundary for delta");
        }
        const double fd =
            (wellmixed_free_energy(cp, eq) - wellmixed_free_energy(cm, eq)) / (2.0 * d);
        const double closed_form = -std::log(f.fwd[i] / f.bwd[i]);
        rep.residual[i] = std::abs(fd - closed_form);
    }
    rep.max_residual = rep.residual.maxCoeff();
    return rep;
}

CheckReport dissipation_identity_check(const Vector4d& c, const Parameters& prm) {
    if (!(c.minCoeff() >= 0.0))
        throw std::domain_error("dissipation_identity_check requires nonnegative concentrations");
    const Fluxes f = fluxes_at(c, prm);
    CheckReport rep;
    for (int i = 0; i < 3; ++i) {
        const double a = f.fwd[i];
        const double b = f.bwd[i];
        if (!(b > 0.0))
            throw std::invalid_argument(
                "dissipation_identity_check: backward flux vanishes for reaction " +
                std::to_string(i));
        const double r = a - b;
        const double lhs = r * std::log1p(r / b);
        const double rhs = (a - b) * std::log(a / b);
        const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        rep.residual[i] = (lhs == rhs) ? 0.0 : std::abs(lhs - rhs) / denom;
    }
    rep.max_residual = rep.residual.maxCoeff();
    return rep;
}

} // namespace regs
