#include "regs/energy.hpp"

#include "regs/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace regs {

namespace {

using Eigen::ArrayXd;

double l2_sq(const Field& f) {
    return f.values.square().sum() * f.grid.cell_volume();
}

// squared H^1 norm of the (forward-difference) gradient: sum over axes of
// |d_a f|_2^2 + |grad d_a f|_2^2
double grad_h1_sq(const Field& f) {
    double sum = 0.0;
    for (int a = 0; a < f.grid.dim; ++a) sum += h1_norm_sq(forward_diff(f, a));
    return sum;
}

void check_sample_spacing(std::span<const MonitorSample> samples, const char* who) {
    if (samples.size() < 3)
        throw std::invalid_argument(std::string(who) + " needs at least 3 samples");
    double dt_sum = 0.0;
    for (size_t j = 0; j + 1 < samples.size(); ++j) {
        const double dt = samples[j + 1].t - samples[j].t;
        if (!(dt > 0.0))
            throw std::invalid_argument(std::string(who) + ": sample times must increase");
        dt_sum += dt;
    }
    const double dt_mean = dt_sum / static_cast<double>(samples.size() - 1);
    for (size_t j = 0; j + 1 < samples.size(); ++j)
        if (std::abs(samples[j + 1].t - samples[j].t - dt_mean) > 1e-9 * dt_mean)
            throw std::invalid_argument(std::string(who) + ": samples must be uniformly spaced");
}

} // namespace

Field4 perturbation(const Field4& c, const Equilibrium& eq) {
    require_common_grid(c);
    Field4 tilde = c;
    tilde.u.values -= eq.u;
    tilde.v.values -= eq.v;
    tilde.p.values -= eq.p;
    tilde.q.values -= eq.q;
    return tilde;
}

LocalFunctionals local_functionals(const Field4& c, const Parameters& prm) {
    require_common_grid(c);
    LocalFunctionals out;
    out.E = h1_norm_sq(c.u) + h1_norm_sq(c.v) + h1_norm_sq(c.p) + h1_norm_sq(c.q);

    out.D = 0.5 * prm.du * grad_h1_sq(c.u) + 0.5 * prm.dv * grad_h1_sq(c.v) +
            prm.dp * grad_h1_sq(c.p) + prm.dq * grad_h1_sq(c.q);

    const Field v_sq{c.grid(), c.v.values.square()};
    out.D += prm.k1m * h1_norm_sq(v_sq);

    const Field uv{c.grid(), c.u.values * c.v.values};
    out.D += prm.k1p * l2_sq(uv);

    // sum over directions of | (d_a u) v |_2^2
    for (int a = 0; a < c.grid().dim; ++a) {
        const Field du_v{c.grid(), forward_diff(c.u, a).values * c.v.values};
        out.D += prm.k1p * l2_sq(du_v);
    }

    out.D += prm.k0p * h1_norm_sq(c.u) + prm.k2p * h1_norm_sq(c.v) + prm.k2m * h1_norm_sq(c.p) +
             prm.k0m * h1_norm_sq(c.q);
    return out;
}

double local_growth_constant(const Parameters& prm) {
    if (!(prm.du > 0.0) || !(prm.dv > 0.0))
        throw std::invalid_argument("local_growth_constant requires du > 0 and dv > 0");
    return prm.k0m + prm.k0p + prm.k1m + prm.k1p + prm.k2m + prm.k2p +
           4.0 * prm.k1p * prm.k1p / prm.du + 9.0 * prm.k1m * prm.k1m / prm.du +
           prm.k1p * prm.k1p / prm.dv + 4.0 * prm.k1p * prm.k1p / prm.dv;
}

double predicted_lifespan(double E0, double C_L) {
    if (!(E0 > 0.0) || !std::isfinite(E0))
        throw std::invalid_argument("predicted_lifespan requires E0 > 0");
    if (!(C_L > 0.0) || !std::isfinite(C_L))
        throw std::invalid_argument("predicted_lifespan requires C_L > 0");
    return std::log(std::sqrt(1.0 + E0 * E0) / E0) / C_L;
}

GlobalFunctionals global_functionals(const Field4& tilde, const Parameters& prm,
                                     const Equilibrium& eq) {
    require_common_grid(tilde);
    const double wu = prm.k0p * prm.k1p * prm.k2p;
    const double wv = prm.k0p * prm.k1m * prm.k2p;
    const double wp = prm.k0p * prm.k1m * prm.k2m;
    const double wq = prm.k0m * prm.k1p * prm.k2p;

    GlobalFunctionals out;
    out.E = wu * h1_norm_sq(tilde.u) + wv * h1_norm_sq(tilde.v) + wp * h1_norm_sq(tilde.p) +
            wq * h1_norm_sq(tilde.q);

    out.D = prm.du * wu * grad_h1_sq(tilde.u) + prm.dv * wv * grad_h1_sq(tilde.v) +
            prm.dp * wp * grad_h1_sq(tilde.p) + prm.dq * wq * grad_h1_sq(tilde.q);

    const GridSpec& g = tilde.grid();
    const Field cross_1{g, prm.k1p * tilde.u.values - prm.k1m * tilde.v.values};
    const Field cross_0{g, prm.k0p * tilde.u.values - prm.k0m * tilde.q.values};
    const Field cross_2{g, prm.k2p * tilde.v.values - prm.k2m * tilde.p.values};
    out.D += prm.k0p * prm.k2p * eq.v * eq.v * h1_norm_sq(cross_1);
    out.D += prm.k1p * prm.k2p * h1_norm_sq(cross_0);
    out.D += prm.k0p * prm.k1m * eq.v * eq.v * h1_norm_sq(cross_2);

    out.C = global_growth_constant(prm, eq);
    return out;
}

double global_growth_constant(const Parameters& prm, const Equilibrium& eq) {
    return 4.0 * prm.k0p * prm.k1p * prm.k2p + 6.0 * prm.k0p * prm.k1p * prm.k2p * eq.v +
           4.0 * prm.k0p * prm.k1m * prm.k2p + 6.0 * prm.k0p * prm.k1m * prm.k2p * eq.v;
}

double smallness_threshold(double C_g) {
    if (!(C_g >= 0.0) || !std::isfinite(C_g))
        throw std::invalid_argument("smallness_threshold requires C_g >= 0");
    if (C_g == 0.0) return 1.0;
    return std::min(1.0, 1.0 / (64.0 * C_g * C_g));
}

MonitorReport inequality_monitor(std::span<const MonitorSample> samples, MonitorKind kind,
                                 double growth_constant, double tol) {
    check_sample_spacing(samples, "inequality_monitor");
    const double dt = (samples.back().t - samples.front().t) /
                      static_cast<double>(samples.size() - 1);
    MonitorReport out;
    long satisfied = 0;
    for (size_t j = 1; j + 1 < samples.size(); ++j) {
        const double dEdt = (samples[j + 1].E - samples[j - 1].E) / (2.0 * dt);
        const double E = samples[j].E;
        const double D = samples[j].D;
        const double lhs = dEdt + D;
        const double rhs = kind == MonitorKind::Local
                               ? growth_constant * (E + E * E * E)
                               : growth_constant * (1.0 + std::sqrt(E)) * std::sqrt(E) * D;
        out.t.push_back(samples[j].t);
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
        if (lhs <= rhs + tol) ++satisfied;
    }
    out.satisfied_fraction = out.t.empty()
                                 ? 0.0
                                 : static_cast<double>(satisfied) / static_cast<double>(out.t.size());
    return out;
}

} // namespace regs
