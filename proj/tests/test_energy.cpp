// Energy-functional oracles: frozen values of the local and global pairs on
// hand-built states, the expanded perturbative right-hand side as an
// independent cross-check, growth constants, lifespan bound, smallness
// threshold, and the inequality monitor on real runs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regs/energy.hpp"
#include "regs/stepper.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace regs;

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("perturbation fields round-trip against the reference state") {
    const GridSpec g = unit_grid(2, 8);
    Parameters prm;
    prm.k0p = 2.0;
    const Equilibrium eq = detailed_balance_equilibrium(prm);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    Field4 c = make_field4(g);
    for (int s = 0; s < 4; ++s)
        for (Eigen::Index i = 0; i < g.total(); ++i) c.species(s).values[i] = dist(rng);

    const Field4 tilde = perturbation(c, eq);
    const std::array<double, 4> ref{eq.u, eq.v, eq.p, eq.q};
    // (c - ref) + ref reassociates, so allow one ulp of the O(1) values
    for (int s = 0; s < 4; ++s)
        CHECK((tilde.species(s).values + ref[s] - c.species(s).values).abs().maxCoeff() <=
              1e-15);
}

TEST_CASE("full tendency equals the expanded perturbative tendency") {
    // expanding the u-tendency around a detailed-balance reference and using
    // k1p u* = k1m v* gives
    //   u_t = -k1p ut vt^2 - 2 k1p v* ut vt - k1p v*^2 ut
    //         + k1m vt^3 + 2 k1m v* vt^2 + k1m v*^2 vt - k0p ut + k0m qt
    // (ut, vt, qt the perturbation fields); this must agree with the plain
    // right-hand side evaluated at the full state
    Parameters prm;
    prm.k0p = 2.0;
    prm.k1m = 0.7;
    prm.k2p = 1.3;
    prm.du = prm.dv = prm.dp = prm.dq = 0.0;   // reaction part only
    const Equilibrium eq = detailed_balance_equilibrium(prm);

    const GridSpec g = unit_grid(1, 8);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-0.3, 0.3);
    Field4 tilde = make_field4(g);
    const std::array<double, 4> ref{eq.u, eq.v, eq.p, eq.q};
    Field4 c = make_field4(g);
    for (int s = 0; s < 4; ++s)
        for (Eigen::Index i = 0; i < g.total(); ++i) {
            tilde.species(s).values[i] = dist(rng) * ref[s];
            c.species(s).values[i] = ref[s] + tilde.species(s).values[i];
        }

    const Field4 f = rhs(c, prm, ModelVariant::ReGS);
    for (Eigen::Index i = 0; i < g.total(); ++i) {
        const double ut = tilde.u.values[i], vt = tilde.v.values[i], qt = tilde.q.values[i];
        const double vb = eq.v;
        const double expanded = -prm.k1p * ut * vt * vt - 2.0 * prm.k1p * vb * ut * vt -
                                prm.k1p * vb * vb * ut + prm.k1m * vt * vt * vt +
                                2.0 * prm.k1m * vb * vt * vt + prm.k1m * vb * vb * vt -
                                prm.k0p * ut + prm.k0m * qt;
        CHECK(f.u.values[i] == doctest::Approx(expanded).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("local functionals on the all-ones state with unit constants") {
    // four constant-one fields on the unit torus: every H^1 norm is 1, all
    // gradient terms vanish, so E = 4 and D = k1m + k1p + k0p + k2p + k2m + k0m = 6
    const GridSpec g = unit_grid(2, 8);
    const Field4 c = make_field4(g, 1.0, 1.0, 1.0, 1.0);
    const LocalFunctionals lf = local_functionals(c, Parameters{});
    CHECK(lf.E == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(lf.D == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("local energy is exactly quadratic in the field amplitude") {
    const GridSpec g = unit_grid(2, 8);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.2, 1.5);
    Field4 c = make_field4(g);
    for (int s = 0; s < 4; ++s)
        for (Eigen::Index i = 0; i < g.total(); ++i) c.species(s).values[i] = dist(rng);
    const double E1 = local_functionals(c, Parameters{}).E;
    for (int s = 0; s < 4; ++s) c.species(s).values *= 2.0;
    const double E2 = local_functionals(c, Parameters{}).E;
    CHECK(E2 == doctest::Approx(4.0 * E1).epsilon(1e-13));
}

TEST_CASE("local growth constant on the all-ones parameter set") {
    // 6 rate terms + 4 + 9 + 1 + 4 quotient terms = 24
    CHECK(local_growth_constant(Parameters{}) == doctest::Approx(24.0).epsilon(1e-15));
    Parameters prm;
    prm.du = 0.0;
    CHECK_THROWS_AS(local_growth_constant(prm), std::invalid_argument);
}

TEST_CASE("predicted lifespan has its closed-form value at E0 = C = 1") {
    CHECK(predicted_lifespan(1.0, 1.0) ==
          doctest::Approx(std::log(std::sqrt(2.0))).epsilon(1e-15));
    // larger initial energy shortens the guaranteed window
    CHECK(predicted_lifespan(2.0, 1.0) < predicted_lifespan(1.0, 1.0));
    CHECK(predicted_lifespan(0.5, 1.0) > predicted_lifespan(1.0, 1.0));
    // doubling the constant halves the window
    CHECK(predicted_lifespan(1.0, 2.0) ==
          doctest::Approx(0.5 * predicted_lifespan(1.0, 1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(predicted_lifespan(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(predicted_lifespan(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("global functionals on a frozen cancellation state") {
    // unit constants, reference (1/4, 1/4, 1/4, 1/4), so all four weights are 1.
    // tilde: u = q = 0.3 uniform, v = p = 0. Then E = 2 * 0.09 = 0.18. In D the
    // gradient terms vanish, the exchange combination k0p u - k0m q cancels
    // exactly, and only k0p k2p v*^2 |k1p u - k1m v|^2 = (1/16) * 0.09 survives.
    const Parameters prm;
    const Equilibrium eq = detailed_balance_equilibrium(prm);
    const GridSpec g = unit_grid(2, 8);
    const Field4 tilde = make_field4(g, 0.3, 0.0, 0.0, 0.3);
    const GlobalFunctionals gf = global_functionals(tilde, prm, eq);
    CHECK(gf.E == doctest::Approx(0.18).epsilon(1e-14));
    CHECK(gf.D == doctest::Approx(0.005625).epsilon(1e-14));
    CHECK(gf.C == doctest::Approx(11.0).epsilon(1e-15));
}

TEST_CASE("global growth constant and smallness threshold") {
    const Parameters prm;
    const Equilibrium eq = detailed_balance_equilibrium(prm);
    // 4 + 6/4 + 4 + 6/4 with unit rates and v* = 1/4
    CHECK(global_growth_constant(prm, eq) == doctest::Approx(11.0).epsilon(1e-15));
    CHECK(smallness_threshold(11.0) == doctest::Approx(1.0 / 7744.0).epsilon(1e-15));
    // 64 * (1/8)^2 = 1: the cap takes over exactly there
    CHECK(smallness_threshold(0.125) == 1.0);
    CHECK(smallness_threshold(0.0) == 1.0);
    // monotone nonincreasing in the constant
    for (double c : {0.01, 0.1, 1.0, 10.0})
        CHECK(smallness_threshold(2.0 * c) <= smallness_threshold(c));
    CHECK_THROWS_AS(smallness_threshold(-1.0), std::invalid_argument);
}

TEST_CASE("global energy weights scale with the rate products") {
    // k0m enters only the q weight: doubling it doubles the q contribution
    Parameters prm;
    const Equilibrium eq = detailed_balance_equilibrium(prm);
    const GridSpec g = unit_grid(1, 8);
    const Field4 tilde_q = make_field4(g, 0.0, 0.0, 0.0, 0.2);
    const double E1 = global_functionals(tilde_q, prm, eq).E;
    Parameters doubled = prm;
    doubled.k0m = 2.0;
    const double E2 = global_functionals(tilde_q, doubled, eq).E;
    CHECK(E2 == doctest::Approx(2.0 * E1).epsilon(1e-14));
}

TEST_CASE("inequality monitor on a constant zero series") {
    std::vector<MonitorSample> s;
    for (int j = 0; j < 5; ++j) s.push_back({0.1 * j, 0.0, 0.0});
    for (MonitorKind kind : {MonitorKind::Local, MonitorKind::Global}) {
        const MonitorReport rep = inequality_monitor(s, kind, 11.0);
        REQUIRE(rep.t.size() == 3);
        CHECK(rep.satisfied_fraction == 1.0);
        for (double lhs : rep.lhs) CHECK(lhs == 0.0);
        for (double rhs : rep.rhs) CHECK(rhs == 0.0);
    }
}

TEST_CASE("inequality monitor validates its input series") {
    std::vector<MonitorSample> two = {{0.0, 1.0, 1.0}, {0.1, 1.0, 1.0}};
    CHECK_THROWS_AS(inequality_monitor(two, MonitorKind::Local, 1.0), std::invalid_argument);
    std::vector<MonitorSample> uneven = {{0.0, 1, 1}, {0.1, 1, 1}, {0.4, 1, 1}};
    CHECK_THROWS_AS(inequality_monitor(uneven, MonitorKind::Local, 1.0), std::invalid_argument);
}

TEST_CASE("inequality monitor flags a fabricated violation") {
    // an E series that jumps while D and the bound stay small
    std::vector<MonitorSample> s = {{0.0, 0.0, 0.0}, {0.1, 0.0, 0.0}, {0.2, 10.0, 0.0},
                                    {0.3, 10.0, 0.0}, {0.4, 10.0, 0.0}};
    const MonitorReport rep = inequality_monitor(s, MonitorKind::Global, 1.0);
    CHECK(rep.satisfied_fraction < 1.0);
}

TEST_CASE("small global data decays monotonically and satisfies the monitor") {
    const Parameters prm;
    const Equilibrium eq = detailed_balance_equilibrium(prm);
    const double nu = smallness_threshold(global_growth_constant(prm, eq));

    const GridSpec g = unit_grid(2, 16);
    // a product-of-cosines perturbation rescaled exactly onto 0.8 nu
    const std::array<double, 4> base{eq.u, eq.v, eq.p, eq.q};
    const std::array<double, 4> sign{1.0, -1.0, 1.0, -1.0};
    Field4 tilde = make_field4(g);
    for (int sp = 0; sp < 4; ++sp)
        tilde.species(sp) = field_from(g, [&](double x, double y, double) {
            return sign[sp] * base[sp] * std::cos(2.0 * pi * x) * std::cos(2.0 * pi * y);
        });
    const double E_raw = global_functionals(tilde, prm, eq).E;
    const double scale = std::sqrt(0.8 * nu / E_raw);
    State init;
    init.c = equilibrium_field4(g, eq);
    for (int sp = 0; sp < 4; ++sp) init.c.species(sp).values += scale * tilde.species(sp).values;

    CHECK(global_functionals(perturbation(init.c, eq), prm, eq).E ==
          doctest::Approx(0.8 * nu).epsilon(1e-12));

    StepConfig cfg;
    cfg.dt = 1e-3;
    IntegrateOptions opts;
    opts.t_end = 0.2;
    opts.sample_every = 20;
    opts.eq = eq;
    std::vector<MonitorSample> samples;
    std::vector<double> E_series;
    opts.on_record = [&](const DiagnosticsRecord& r) {
        REQUIRE(r.E_g.has_value());
        REQUIRE(r.D_g.has_value());
        samples.push_back({r.t, *r.E_g, *r.D_g});
        E_series.push_back(*r.E_g);
    };
    integrate(init, prm, ModelVariant::ReGS, cfg, opts);

    for (size_t j = 1; j < E_series.size(); ++j) CHECK(E_series[j] <= E_series[j - 1] + 1e-12);
    const MonitorReport rep =
        inequality_monitor(samples, MonitorKind::Global, global_growth_constant(prm, eq));
    CHECK(rep.satisfied_fraction == 1.0);
}
