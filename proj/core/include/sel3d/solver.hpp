#pragma once

#include <memory>
#include <optional>
#include <stdexcept>

#include "sel3d/mollifier.hpp"
#include "sel3d/spectral.hpp"
#include "sel3d/stokes_ou.hpp"

namespace sel3d {

/// Thrown by step() when a field norm grows by more than 10^3 in one step.
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simulation state of the mollified nonlinear system: time t, the
/// divergence-free velocity perturbation v, the director d, the linear
/// stochastic Stokes field z, and the diagnostic zero-mean pressure pi.
struct SimState {
    double t = 0.0;
    SpectralField vhat;
    SpectralField dhat;
    OUState z;
    SpectralField pihat;

    SimState(SpectralField v, SpectralField d, OUState z_state)
        : vhat(std::move(v)), dhat(std::move(d)), z(std::move(z_state)),
          pihat(SpectralField::zero(vhat.grid(), 1)) {}
};

/// Ginzburg-Landau force f(d) = grad_d F(d) = 4 (|d|^2 - 1) d with the
/// relaxation parameter fixed to one, evaluated pointwise in physical space,
/// transformed back and dealiased.
SpectralField gl_force(const SpectralField& d);

/// F(d) = (|d|^2 - 1)^2 integrated over the torus (grid quadrature).
double gl_potential_integral(const SpectralField& d);

struct NonlinearRhs {
    SpectralField nv;
    SpectralField nd;
};

/// Nonlinear right-hand sides of the mollified system:
///   Nv = P_L[ -(z + Phi_sigma[v]) . grad (z + v) - grad Phi_sigma[d] . (lap d - f(d)) ]
///   Nd = -(z + v) . grad Phi_sigma[d] - f(d)
/// with every product dealiased. Nv is divergence-free.
NonlinearRhs nonlinear_rhs(const SpectralField& vhat, const SpectralField& dhat,
                           const SpectralField& zhat, const Mollifier& mollifier);

/// Diagnostic pressure from -lap pi = div^2[(z+Phi[v]) (x) (z+v)]
///                                  + div(grad Phi[d] . (lap d - f(d))):
/// pi(k) = rhs(k)/|k|^2 for k != 0, pi(0) = 0.
SpectralField pressure_solve(const SpectralField& vhat, const SpectralField& dhat,
                             const SpectralField& zhat, const Mollifier& mollifier);

struct StepOptions {
    bool nonlinearity = true;   ///< test switch; false reduces to the heat semigroup
    bool advance_noise = true;  ///< false freezes z (deterministic runs use an empty model)
    bool compute_pressure = true;
    int noise_substeps = 1;     ///< OU micro-steps per solver step
};

/// One step of the integrating-factor Heun scheme:
///   stage 1: w* = E (w + dt N(state)),        E = exp(-|k|^2 dt)
///   stage 2: w+ = E w + dt/2 (E N(state) + N(state*))
/// for w in {v, d}, with z advanced first and frozen at its start-of-step
/// value inside the nonlinear evaluations. v+ is re-projected and pi
/// recomputed. Second order in time on smooth data. Rejects dt <= 0; throws
/// InstabilityError if ||v|| or ||d|| grows by more than 10^3 in one step.
SimState step(const SimState& state, double dt, const Mollifier& mollifier,
              const StepOptions& options = {});

/// true iff max_x |d(x)| <= 1 + tol on the grid.
bool maximum_principle_check(const SimState& state, double tol);

/// Initial data presets. Both satisfy the standing assumptions: u0 is
/// divergence-free and the quenched director is unit-length pointwise.
SpectralField taylor_green_velocity(const TorusGrid& grid, double amplitude = 1.0);
SpectralField quenched_director(const TorusGrid& grid);
SpectralField constant_director(const TorusGrid& grid, const std::array<double, 3>& value);

} // namespace sel3d
