#pragma once

#include "regs/stepper.hpp"

#include <optional>
#include <span>
#include <vector>

// Limit-regime studies: the vanishing-backward-rate family (eps -> 0) and the
// slow-fast exchange regime (k0m = lambda -> 0 with q large), including the
// comparison against the reduced constant-feed model.

namespace regs {

struct SampledTrajectory {
    std::vector<double> t;
    std::vector<Field4> states;
};

// a state observer that stores every sampled state
IntegrateOptions recording_options(double t_end, long sample_every, SampledTrajectory& out);

struct TrajectoryDistance {
    double sup_l2 = 0.0;    // max over samples of the l2 norm of the 4-species difference
    double l2t_h1 = 0.0;    // trapezoidal-in-time l2 of the summed H^1 distances
};

// errors on mismatched grids or sampling times
TrajectoryDistance trajectory_distance(const SampledTrajectory& a, const SampledTrajectory& b);

struct FitResult {
    double slope = 0.0;
    double ci_halfwidth = 0.0;   // 95% confidence halfwidth of the slope
};

// least-squares slope of log(y) against log(x); needs >= 2 points, positive data
FitResult fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct SweepResult {
    std::vector<double> eps;
    std::vector<double> sup_l2;
    std::vector<double> l2t_h1;
    FitResult order_sup;     // fitted over the eps > 0 entries
    FitResult order_l2t;
};

// Integrates the eps-family from the shared initial state for every entry of
// eps_list and measures the distance to the eps = 0 trajectory. eps values must
// be >= 0 and distinct.
SweepResult epsilon_sweep(const State& initial, const Parameters& prm, const StepConfig& cfg,
                          double t_end, long sample_every, std::span<const double> eps_list);

struct SlowFastResult {
    double lambda = 0.0;
    std::vector<double> t;
    std::vector<double> s_numeric;       // lambda * mean(q) along the integrated run
    std::vector<double> s_closed_form;   // Duhamel form driven by the recorded mean(u)
    double max_s_deviation = 0.0;
    std::vector<double> uv_deviation;    // per-sample l2 distance of (u, v) to the reduced model
    double max_uv_deviation = 0.0;
};

// Slow-fast study at exchange rate lambda: integrates the irreversible model with
// k0m = lambda and d_p = d_q = 0, checks the recorded s = lambda * mean(q) against
// its closed form, and (unless hold_u_at is set) compares (u, v) against the
// reduced constant-feed model with f = s(0) / k0p.
//
// hold_u_at freezes u at the given value while only the q exchange integrates;
// the closed form then collapses to s0 e^(-lambda t) + k0p U (1 - e^(-lambda t))
// and is evaluated analytically.
SlowFastResult slow_fast_study(const State& initial, Parameters prm, double lambda,
                               const StepConfig& cfg, double t_end, long sample_every,
                               std::optional<double> hold_u_at = {});

} // namespace regs
