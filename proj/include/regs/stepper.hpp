#pragma once

#include "regs/errors.hpp"
#include "regs/field4.hpp"
#include "regs/kinetics.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace regs {

// ReGS:      full reversible kinetics as given
// ReGSEps:   backward rates of the two v-reactions replaced by epsilon (k1m = k2m = eps)
// IrGS:      the eps -> 0 member of that family (k1m = k2m = 0)
// ReducedGS: irreversible reduced model with constant feed f:
//              u_t = du lap u - k1p u v^2 + k0p (f - u)
//              v_t = dv lap v + k1p u v^2 - k2p v
//              p_t = k2p v   (passive, no diffusion)
//              q frozen
enum class ModelVariant { ReGS, ReGSEps, IrGS, ReducedGS };

enum class Scheme { Strang, ExplicitEuler };
enum class DiffusionSolver { Spectral, CrankNicolson };

// rate constants the variant actually integrates with
Parameters effective_parameters(Parameters prm, ModelVariant variant);

struct StepConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::Strang;
    DiffusionSolver diffusion = DiffusionSolver::Spectral;
    double positivity_floor = 1e-12;   // fields are clamped here after every substep
    double blowup_factor = 1e6;        // abort when max field value exceeds factor * Z0
};

void validate(const StepConfig& cfg);

// mathematical right-hand side: 3-point-stencil diffusion plus reaction tendencies
Field4 rhs(const Field4& c, const Parameters& prm, ModelVariant variant);

// reaction-only update over dt: classical RK4 on the pointwise ODE at every node,
// then clamp at the positivity floor. Returns the number of clamped values.
long reaction_substep(Field4& c, const Parameters& prm, ModelVariant variant, double dt,
                      double positivity_floor);

// Diffusion-only update in the DFT basis of the periodic stencil. Spectral applies
// the exact exponential of the stencil eigenvalues; CrankNicolson the trapezoidal
// rational symbol (1+z/2)/(1-z/2). Both fix the zero mode to multiplier 1, so the
// discrete mean of each field is conserved. A plan can be reused across steps.
class DiffusionPlan {
  public:
    DiffusionPlan(const GridSpec& g, std::array<double, 4> diffusivity, double dt,
                  DiffusionSolver solver);
    long apply(Field4& c, double positivity_floor) const;   // returns clamp count

  private:
    GridSpec grid_;
    std::array<Eigen::ArrayXd, 4> symbol_;   // real multiplier per mode, per species
    std::array<bool, 4> active_{};           // species with d > 0
};

// one-off convenience wrapper around DiffusionPlan
long diffusion_substep(Field4& c, const Parameters& prm, double dt, DiffusionSolver solver,
                       double positivity_floor);

// one full step: half diffusion, full reaction, half diffusion (never fused across
// steps, so interrupted and resumed runs reproduce the same sample values).
// Returns clamp events of this step.
long step_strang(State& s, const Parameters& prm, ModelVariant variant, const StepConfig& cfg,
                 const DiffusionPlan& half_plan);
long step_strang(State& s, const Parameters& prm, ModelVariant variant, const StepConfig& cfg);

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    std::optional<double> F;      // relative free energy (needs reversible rates)
    std::optional<double> D_d;    // diffusive dissipation (needs positive fields)
    std::optional<double> D_r;    // reactive dissipation (needs reversible rates)
    std::optional<double> E_L;    // local energy
    std::optional<double> D_L;    // local dissipation
    std::optional<double> E_g;    // weighted perturbation energy (needs an equilibrium)
    std::optional<double> D_g;    // its dissipation
    long clamp_events = 0;        // cumulative over the run
    std::optional<double> monitor_lhs;   // filled by post-processing, not by integrate
    std::optional<double> monitor_rhs;
};

struct IntegrateOptions {
    double t_end = 0.0;
    long sample_every = 1;
    // reference equilibrium for the perturbation energies E_g / D_g
    std::optional<Equilibrium> eq;
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const State&)> on_state;   // called on the same cadence
};

// Advances the state to t_end with the configured scheme, emitting a diagnostics
// record at the start, every sample_every steps, and at the final step. Aborts with
// BlowUpError when any field max exceeds blowup_factor * Z0.
State integrate(State initial, const Parameters& prm, ModelVariant variant,
                const StepConfig& cfg, const IntegrateOptions& opts);

} // namespace regs
