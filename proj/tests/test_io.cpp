// Configuration, snapshot and CSV round-trip tests: strict key validation with
// named errors, bit-exact binary state round-trips, 17-digit CSV numbers, and
// interrupted-run equivalence.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regs/config.hpp"
#include "regs/csv.hpp"
#include "regs/snapshot.hpp"
#include "regs/stepper.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

using namespace regs;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& tag) {
    static int counter = 0;
    return fs::temp_directory_path() /
           ("regs_io_test_" + tag + "_" + std::to_string(++counter) + ".bin");
}

struct FileGuard {
    fs::path path;
    ~FileGuard() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const fs::path& p, const std::vector<char>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

State random_state(const GridSpec& g, unsigned seed) {
    State s;
    s.t = 3.75;
    s.c = make_field4(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int sp = 0; sp < 4; ++sp)
        for (Eigen::Index i = 0; i < g.total(); ++i) s.c.species(sp).values[i] = dist(rng);
    return s;
}

constexpr const char* minimal_config = R"(
[grid]
dim = 2
nx = 8
ny = 8

[stepping]
dt = 1e-3
t_end = 0.01
)";

} // namespace

TEST_CASE("a minimal config keeps the documented defaults") {
    const RunConfig cfg = parse_config_text(minimal_config);
    CHECK(cfg.variant == ModelVariant::ReGS);
    CHECK(cfg.params.k0p == 1.0);
    CHECK(cfg.params.Z0 == 1.0);
    CHECK(cfg.grid.dim == 2);
    CHECK(cfg.grid.n[0] == 8);
    CHECK(cfg.grid.length[0] == 1.0);
    CHECK(cfg.step.dt == 1e-3);
    CHECK(cfg.step.scheme == Scheme::Strang);
    CHECK(cfg.step.diffusion == DiffusionSolver::Spectral);
    CHECK(cfg.step.positivity_floor == 1e-12);
    CHECK(cfg.t_end == 0.01);
    CHECK(cfg.sample_every == 1);
    CHECK(cfg.init_kind == InitialKind::EquilibriumPerturbation);
    CHECK(cfg.amplitude == 1e-2);
    CHECK(cfg.seed == 1);
}

TEST_CASE("a full config reaches every section") {
    const RunConfig cfg = parse_config_text(R"(
# a comment line
[model]
variant = regs-eps
epsilon = 1e-3

[parameters]
k0p = 2.0   ; trailing comment
k1m = 0.5
du = 0.1
Z0 = 2.0

[grid]
dim = 3
nx = 8
ny = 16
nz = 4
lx = 2.0
ly = 1.0
lz = 0.5

[stepping]
dt = 1e-2
t_end = 1.0
scheme = strang
diffusion = crank-nicolson
sample_every = 10

[initial]
kind = mode-perturbation
amplitude = 0.05
mode = 2

[output]
diagnostics = diag.csv
snapshot = final.bin
checkpoint = ck.bin
checkpoint_every = 100
)");
    CHECK(cfg.variant == ModelVariant::ReGSEps);
    CHECK(cfg.params.epsilon == 1e-3);
    CHECK(cfg.params.k0p == 2.0);
    CHECK(cfg.params.k1m == 0.5);
    CHECK(cfg.params.du == 0.1);
    CHECK(cfg.params.Z0 == 2.0);
    CHECK(cfg.grid.dim == 3);
    CHECK(cfg.grid.n[1] == 16);
    CHECK(cfg.grid.length[2] == 0.5);
    CHECK(cfg.step.diffusion == DiffusionSolver::CrankNicolson);
    CHECK(cfg.sample_every == 10);
    CHECK(cfg.init_kind == InitialKind::ModePerturbation);
    CHECK(cfg.mode == 2);
    CHECK(cfg.diagnostics_path == "diag.csv");
    CHECK(cfg.checkpoint_every == 100);
}

TEST_CASE("config errors name the offending entry") {
    CHECK_THROWS_WITH_AS(parse_config_text("[parameters]\nk1m = -1\n[grid]\ndim=1\nnx=8"),
                         doctest::Contains("k1m"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[model]\nepsilon = 1e-3"),
                         doctest::Contains("epsilon"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[model]\nfeed = 0.5"),
                         doctest::Contains("feed"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[parameters]\nk9x = 1"),
                         doctest::Contains("k9x"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[stepping]\ndt = 1e-3\ndt = 1e-4"),
                         doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("dt = 1e-3"),
                         doctest::Contains("section"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[stepping]\ndt"),
                         doctest::Contains("key = value"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[stepping]\ndt = abc"),
                         doctest::Contains("number"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[stepping\ndt = 1e-3"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/no-such-config.ini"), ConfigError);
}

TEST_CASE("cross-field validation catches inconsistent requests") {
    // snapshot initial kind without a path
    CHECK_THROWS_WITH_AS(parse_config_text("[initial]\nkind = snapshot"),
                         doctest::Contains("initial.path"), ConfigError);
    // uniform initial kind without the four levels
    CHECK_THROWS_WITH_AS(parse_config_text("[initial]\nkind = uniform\nu = 1\nv = 1"),
                         doctest::Contains("uniform"), ConfigError);
    // checkpoint cadence without a checkpoint path
    CHECK_THROWS_WITH_AS(parse_config_text("[output]\ncheckpoint_every = 10"),
                         doctest::Contains("checkpoint"), ConfigError);
    // checkpoint cadence off the sampling lattice
    CHECK_THROWS_WITH_AS(parse_config_text("[output]\ncheckpoint = c.bin\ncheckpoint_every = "
                                           "15\n[stepping]\nsample_every = 10"),
                         doctest::Contains("multiple"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[initial]\nsquare_fraction = 1.5"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[initial]\nmode = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[stepping]\nsample_every = 0"), ConfigError);
}

TEST_CASE("overrides reuse the config addressing and validation") {
    RunConfig cfg = parse_config_text(minimal_config);
    apply_override(cfg, "parameters.k0p=3.5");
    CHECK(cfg.params.k0p == 3.5);
    apply_override(cfg, "stepping.sample_every = 5");
    CHECK(cfg.sample_every == 5);
    CHECK_THROWS_WITH_AS(apply_override(cfg, "parameters.bogus=1"),
                         doctest::Contains("bogus"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "no-equals-sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "parameters.k0p=-2"), ConfigError);
}

TEST_CASE("uniform initial state takes the configured levels") {
    RunConfig cfg = parse_config_text(R"(
[grid]
dim = 1
nx = 8
[initial]
kind = uniform
u = 0.9
v = 0.1
p = 0.2
q = 0.3
)");
    const State s = build_initial_state(cfg);
    CHECK(s.t == 0.0);
    CHECK(s.c.u.values[3] == 0.9);
    CHECK(s.c.v.values[0] == 0.1);
    CHECK(s.c.p.values[7] == 0.2);
    CHECK(s.c.q.values[5] == 0.3);
}

TEST_CASE("seeded initial states are deterministic in the seed") {
    RunConfig cfg = parse_config_text(minimal_config);
    const State a = build_initial_state(cfg);
    const State b = build_initial_state(cfg);
    for (int sp = 0; sp < 4; ++sp)
        CHECK((a.c.species(sp).values == b.c.species(sp).values).all());

    RunConfig other = cfg;
    apply_override(other, "initial.seed=2");
    const State c = build_initial_state(other);
    CHECK((a.c.u.values != c.c.u.values).any());
}

TEST_CASE("equilibrium perturbation stays within the configured amplitude") {
    RunConfig cfg = parse_config_text(minimal_config);
    apply_override(cfg, "initial.amplitude=0.05");
    const State s = build_initial_state(cfg);
    const Equilibrium eq = detailed_balance_equilibrium(cfg.params);
    const std::array<double, 4> base{eq.u, eq.v, eq.p, eq.q};
    for (int sp = 0; sp < 4; ++sp) {
        const auto rel = (s.c.species(sp).values / base[sp] - 1.0).abs().maxCoeff();
        CHECK(rel <= 0.05 + 1e-12);
    }
}

TEST_CASE("mode perturbation preserves the prescribed mass almost exactly") {
    RunConfig cfg = parse_config_text(minimal_config);
    apply_override(cfg, "initial.kind=mode-perturbation");
    apply_override(cfg, "initial.amplitude=0.1");
    apply_override(cfg, "initial.mode=2");
    const State s = build_initial_state(cfg);
    // the discrete mean of the cosine product vanishes, so the perturbation is
    // mass-free up to roundoff
    CHECK(total_mass(s.c) == doctest::Approx(cfg.params.Z0).epsilon(1e-13));
}

TEST_CASE("seeded square depresses u and raises v inside the box only") {
    RunConfig cfg = parse_config_text(R"(
[grid]
dim = 2
nx = 16
ny = 16
[initial]
kind = seeded-square
amplitude = 0.25
square_fraction = 0.5
)");
    const State s = build_initial_state(cfg);
    const Equilibrium base = trivial_equilibrium(cfg.params);
    // corner node is outside the centered box, the middle node inside
    CHECK(s.c.u.values[0] == base.u);
    CHECK(s.c.v.values[0] == base.v);
    const Eigen::Index center = 8 * 16 + 8;
    CHECK(s.c.u.values[center] == doctest::Approx(0.5 * base.u).epsilon(1e-15));
    CHECK(s.c.v.values[center] == doctest::Approx(base.v + 0.25).epsilon(1e-15));
}

TEST_CASE("snapshots round-trip bit-exactly") {
    const GridSpec g = make_grid(2, {8, 4, 1}, {2.0, 1.0, 1.0});
    const State s = random_state(g, 123);
    FileGuard f{temp_file("roundtrip")};
    write_snapshot(f.path.string(), s);

    const State r = read_snapshot(f.path.string());
    CHECK(r.t == s.t);
    CHECK(r.c.grid() == g);
    for (int sp = 0; sp < 4; ++sp)
        CHECK((r.c.species(sp).values == s.c.species(sp).values).all());

    const SnapshotHeader h = inspect_snapshot(f.path.string());
    CHECK(h.version == 1);
    CHECK(h.dim == 2);
    CHECK(h.n[0] == 8);
    CHECK(h.n[1] == 4);
    CHECK(h.n[2] == 1);
    CHECK(h.length[0] == 2.0);
    CHECK(h.time == 3.75);
}

TEST_CASE("snapshot reader rejects damaged files with located errors") {
    const GridSpec g = unit_grid(1, 8);
    const State s = random_state(g, 7);
    FileGuard f{temp_file("damage")};
    write_snapshot(f.path.string(), s);
    const std::vector<char> good = slurp(f.path);

    SUBCASE("truncated payload names the byte offset") {
        std::vector<char> cut(good.begin(), good.begin() + 100);
        dump(f.path, cut);
        CHECK_THROWS_WITH_AS(read_snapshot(f.path.string()),
                             doctest::Contains("byte offset"), SnapshotError);
    }
    SUBCASE("bad magic") {
        std::vector<char> bad = good;
        bad[0] = 'X';
        dump(f.path, bad);
        CHECK_THROWS_WITH_AS(read_snapshot(f.path.string()), doctest::Contains("magic"),
                             SnapshotError);
    }
    SUBCASE("unsupported version") {
        std::vector<char> bad = good;
        bad[4] = 99;
        dump(f.path, bad);
        CHECK_THROWS_WITH_AS(read_snapshot(f.path.string()), doctest::Contains("version"),
                             SnapshotError);
    }
    SUBCASE("trailing bytes") {
        std::vector<char> bad = good;
        bad.push_back('\0');
        dump(f.path, bad);
        CHECK_THROWS_WITH_AS(read_snapshot(f.path.string()), doctest::Contains("trailing"),
                             SnapshotError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_snapshot("/nonexistent/nothing.bin"), SnapshotError);
    }
}

TEST_CASE("snapshot-based initial state enforces the configured grid") {
    const GridSpec g = unit_grid(1, 8);
    const State s = random_state(g, 9);
    FileGuard f{temp_file("initgrid")};
    write_snapshot(f.path.string(), s);

    RunConfig cfg = parse_config_text("[initial]\nkind = snapshot\npath = " +
                                      f.path.string());
    const State loaded = build_initial_state(cfg);
    CHECK(loaded.t == s.t);
    CHECK((loaded.c.u.values == s.c.u.values).all());

    RunConfig mismatched = parse_config_text("[grid]\ndim = 1\nnx = 16\n[initial]\nkind = "
                                             "snapshot\npath = " +
                                             f.path.string());
    CHECK_THROWS_WITH_AS(build_initial_state(mismatched), doctest::Contains("grid"),
                         ConfigError);
}

TEST_CASE("diagnostics CSV writes 17-digit numbers and empty optional cells") {
    DiagnosticsRecord rec;
    rec.t = 1.0 / 3.0;
    rec.mass = 2.0 / 7.0;
    rec.E_L = 4.0;
    rec.D_L = 6.0;
    rec.clamp_events = 3;
    // F, D_d, D_r, E_g, D_g, monitor columns absent

    std::ostringstream os;
    append_diagnostics(os, rec);
    const std::string line = os.str();
    // 12 columns: t, mass, then three empty, E_L, D_L, two empty, count, two empty
    CHECK(std::count(line.begin(), line.end(), ',') == 11);
    CHECK(line.find(",,,") != std::string::npos);

    // the first two fields parse back to the exact same doubles
    std::istringstream in(line);
    std::string cell;
    std::getline(in, cell, ',');
    CHECK(std::stod(cell) == rec.t);
    std::getline(in, cell, ',');
    CHECK(std::stod(cell) == rec.mass);
}

TEST_CASE("format_double round-trips awkward values") {
    for (double x : {1.0 / 3.0, 0.1, 6.02e23, 1e-300, -2.5e-17, 0.0}) {
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("an interrupted run resumes bit-exactly from its checkpoint") {
    const GridSpec g = unit_grid(2, 8);
    RunConfig cfg = parse_config_text(minimal_config);
    const State init = build_initial_state(cfg);

    StepConfig step;
    step.dt = 1e-3;

    // uninterrupted: 20 steps
    IntegrateOptions full;
    full.t_end = 0.02;
    const State direct = integrate(init, cfg.params, ModelVariant::ReGS, step, full);

    // interrupted: 10 steps, snapshot, reload, 10 more
    IntegrateOptions first;
    first.t_end = 0.01;
    const State half = integrate(init, cfg.params, ModelVariant::ReGS, step, first);
    FileGuard f{temp_file("resume")};
    write_snapshot(f.path.string(), half);
    const State reloaded = read_snapshot(f.path.string());
    IntegrateOptions second;
    second.t_end = 0.02;
    const State resumed = integrate(reloaded, cfg.params, ModelVariant::ReGS, step, second);

    CHECK(resumed.t == doctest::Approx(direct.t).epsilon(1e-15));
    for (int sp = 0; sp < 4; ++sp)
        CHECK((resumed.c.species(sp).values == direct.c.species(sp).values).all());
}
