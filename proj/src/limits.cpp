#include "regs/limits.hpp"

#include "regs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace regs {

namespace {

using Eigen::ArrayXd;

double l2_sq(const Field& f) {
    return f.values.square().sum() * f.grid.cell_volume();
}

// two-sided 97.5% Student quantiles for small degrees of freedom; ~1.96 beyond
double t_quantile_975(long df) {
    static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                       2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                       2.131,  2.120, 2.110, 2.101, 2.093, 2.086};
    if (df < 1) return std::numeric_limits<double>::quiet_NaN();
    if (df <= 20) return table[df - 1];
    return 1.96 + 2.5 / static_cast<double>(df);   // smooth tail toward the normal quantile
}

} // namespace

IntegrateOptions recording_options(double t_end, long sample_every, SampledTrajectory& out) {
    IntegrateOptions opts;
    opts.t_end = t_end;
    opts.sample_every = sample_every;
    opts.on_state = [&out](const State& s) {
        out.t.push_back(s.t);
        out.states.push_back(s.c);
    };
    return opts;
}

TrajectoryDistance trajectory_distance(const SampledTrajectory& a, const SampledTrajectory& b) {
    if (a.t.size() != b.t.size() || a.t.empty())
        throw std::invalid_argument("trajectory_distance: sample counts differ or are empty");
    for (size_t j = 0; j < a.t.size(); ++j)
        if (std::abs(a.t[j] - b.t[j]) > 1e-10 * std::max(1.0, std::abs(a.t[j])))
            throw std::invalid_argument("trajectory_distance: sampling times differ");
    for (size_t j = 0; j < a.states.size(); ++j)
        if (!(a.states[j].grid() == b.states[j].grid()))
            throw std::invalid_argument("trajectory_distance: grids differ");

    TrajectoryDistance out;
    std::vector<double> h1_dist_sq(a.t.size(), 0.0);
    for (size_t j = 0; j < a.t.size(); ++j) {
        double l2sq = 0.0, h1sq = 0.0;
        for (int s = 0; s < 4; ++s) {
            const Field diff{a.states[j].grid(),
                             a.states[j].species(s).values - b.states[j].species(s).values};
            l2sq += l2_sq(diff);
            h1sq += h1_norm_sq(diff);
        }
        out.sup_l2 = std::max(out.sup_l2, std::sqrt(l2sq));
        h1_dist_sq[j] = h1sq;
    }
    // trapezoidal time integral of the squared H^1 distance
    double acc = 0.0;
    for (size_t j = 0; j + 1 < a.t.size(); ++j)
        acc += 0.5 * (a.t[j + 1] - a.t[j]) * (h1_dist_sq[j] + h1_dist_sq[j + 1]);
    out.l2t_h1 = std::sqrt(acc);
    return out;
}

FitResult fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_slope needs matching series with >= 2 points");
    const size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_loglog_slope requires strictly positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
    FitResult out;
    out.slope = sxy / sxx;
    if (n == 2) {
        out.ci_halfwidth = 0.0;   // exact interpolation, no residual to estimate from
        return out;
    }
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double fit = my + out.slope * (lx[i] - mx);
        sse += (ly[i] - fit) * (ly[i] - fit);
    }
    const double var = sse / static_cast<double>(n - 2);
    out.ci_halfwidth = t_quantile_975(static_cast<long>(n) - 2) * std::sqrt(var / sxx);
    return out;
}

SweepResult epsilon_sweep(const State& initial, const Parameters& prm, const StepConfig& cfg,
                          double t_end, long sample_every, std::span<const double> eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("epsilon_sweep: eps list is empty");
    for (size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] >= 0.0) || !std::isfinite(eps_list[i]))
            throw std::invalid_argument("epsilon_sweep: eps values must be finite and >= 0");
        for (size_t j = i + 1; j < eps_list.size(); ++j)
            if (eps_list[i] == eps_list[j])
                throw std::invalid_argument("epsilon_sweep: duplicate eps value");
    }

    SampledTrajectory reference;
    integrate(initial, prm, ModelVariant::IrGS, cfg,
              recording_options(t_end, sample_every, reference));

    SweepResult out;
    for (double eps : eps_list) {
        Parameters p_eps = prm;
        p_eps.epsilon = eps;
        SampledTrajectory traj;
        integrate(initial, p_eps, ModelVariant::ReGSEps, cfg,
                  recording_options(t_end, sample_every, traj));
        const TrajectoryDistance d = trajectory_distance(traj, reference);
        out.eps.push_back(eps);
        out.sup_l2.push_back(d.sup_l2);
        out.l2t_h1.push_back(d.l2t_h1);
    }

    std::vector<double> pos_eps, pos_sup, pos_l2t;
    for (size_t i = 0; i < out.eps.size(); ++i) {
        if (out.eps[i] <= 0.0) continue;
        pos_eps.push_back(out.eps[i]);
        pos_sup.push_back(out.sup_l2[i]);
        pos_l2t.push_back(out.l2t_h1[i]);
    }
    if (pos_eps.size() >= 2) {
        out.order_sup = fit_loglog_slope(pos_eps, pos_sup);
        out.order_l2t = fit_loglog_slope(pos_eps, pos_l2t);
    }
    return out;
}

SlowFastResult slow_fast_study(const State& initial, Parameters prm, double lambda,
                               const StepConfig& cfg, double t_end, long sample_every,
                               std::optional<double> hold_u_at) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("slow_fast_study requires lambda > 0");
    prm.k0m = lambda;   // the slow exchange rate
    prm.dp = 0.0;
    prm.dq = 0.0;

    SlowFastResult out;
    out.lambda = lambda;

    const GridSpec& g = initial.c.grid();
    const double domain = static_cast<double>(g.total()) * g.cell_volume();
    const auto mean_of = [&](const Field& f) { return integral(f) / domain; };
    const double s0 = lambda * mean_of(initial.c.q);

    if (hold_u_at) {
        // contrived constant forcing: only the q exchange integrates, with u frozen
        const double U = *hold_u_at;
        if (!(U >= 0.0)) throw std::invalid_argument("hold_u_at must be >= 0");
        const long long n_steps = std::llround(t_end / cfg.dt);
        if (std::abs(static_cast<double>(n_steps) * cfg.dt - t_end) >
            1e-8 * std::max(cfg.dt, t_end))
            throw std::invalid_argument("t_end must be an integer multiple of dt");
        ArrayXd q = initial.c.q.values;
        const auto record = [&](long long step) {
            const double t = static_cast<double>(step) * cfg.dt;
            out.t.push_back(t);
            out.s_numeric.push_back(lambda * q.sum() * g.cell_volume() / domain);
            out.s_closed_form.push_back(s0 * std::exp(-lambda * t) +
                                        prm.k0p * U * (1.0 - std::exp(-lambda * t)));
        };
        record(0);
        const auto f = [&](const ArrayXd& qq) -> ArrayXd { return prm.k0p * U - lambda * qq; };
        for (long long step = 1; step <= n_steps; ++step) {
            const ArrayXd k1 = f(q);
            const ArrayXd k2 = f(q + 0.5 * cfg.dt * k1);
            const ArrayXd k3 = f(q + 0.5 * cfg.dt * k2);
            const ArrayXd k4 = f(q + cfg.dt * k3);
            q += cfg.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (step % sample_every == 0 || step == n_steps) record(step);
        }
    } else {
        std::vector<double> mean_u;
        std::vector<Field> full_u, full_v;
        IntegrateOptions opts;
        opts.t_end = initial.t + t_end;
        opts.sample_every = sample_every;
        opts.on_state = [&](const State& s) {
            out.t.push_back(s.t - initial.t);
            out.s_numeric.push_back(lambda * mean_of(s.c.q));
            mean_u.push_back(mean_of(s.c.u));
            full_u.push_back(s.c.u);
            full_v.push_back(s.c.v);
        };
        integrate(initial, prm, ModelVariant::IrGS, cfg, opts);

        // Duhamel form s(t) = e^(-lambda t) (s0 + lambda int_0^t k0p <u> e^(lambda tau) dtau),
        // cumulative trapezoid on the recorded mean of u
        double acc = 0.0;
        out.s_closed_form.push_back(s0);
        for (size_t j = 1; j < out.t.size(); ++j) {
            const double g0 = prm.k0p * mean_u[j - 1] * std::exp(lambda * out.t[j - 1]);
            const double g1 = prm.k0p * mean_u[j] * std::exp(lambda * out.t[j]);
            acc += 0.5 * (out.t[j] - out.t[j - 1]) * (g0 + g1);
            out.s_closed_form.push_back(std::exp(-lambda * out.t[j]) * (s0 + lambda * acc));
        }

        // reduced constant-feed model from the same initial (u, v)
        Parameters reduced = prm;
        reduced.feed = s0 / prm.k0p;
        size_t idx = 0;
        IntegrateOptions ropts;
        ropts.t_end = initial.t + t_end;
        ropts.sample_every = sample_every;
        ropts.on_state = [&](const State& s) {
            if (idx >= full_u.size()) return;
            const Field du{g, s.c.u.values - full_u[idx].values};
            const Field dv{g, s.c.v.values - full_v[idx].values};
            out.uv_deviation.push_back(std::sqrt(l2_sq(du) + l2_sq(dv)));
            ++idx;
        };
        integrate(initial, reduced, ModelVariant::ReducedGS, cfg, ropts);
        for (double d : out.uv_deviation) out.max_uv_deviation = std::max(out.max_uv_deviation, d);
    }

    for (size_t j = 0; j < out.t.size(); ++j)
        out.max_s_deviation =
            std::max(out.max_s_deviation, std::abs(out.s_numeric[j] - out.s_closed_form[j]));
    return out;
}

} // namespace regs
