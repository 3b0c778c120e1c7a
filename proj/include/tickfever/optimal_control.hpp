#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tickfever/integrator.hpp"
#include "tickfever/model.hpp"

namespace tickfever {

/// Running cost C1 E_B + C2 I_B + C3 N_T + (D1 u1^2 + D2 u2^2 + D3 u3^2) / 2.
struct CostWeights {
    double C1 = 1.0;
    double C2 = 1.0;
    double C3 = 1.0;
    double D1 = 1.0;
    double D2 = 1.0;
    double D3 = 1.0;

    [[nodiscard]] std::array<double, 3> control_weights() const { return {D1, D2, D3}; }
};

/// Costates (lambda_1 .. lambda_7), paired with S_B, E_B, I_B, R, S_T, E_T, I_T.
using AdjointVector = Vec7;
using AdjointTrajectory = Trajectory<AdjointVector>;
using ControlTrajectory = Trajectory<ControlVector>;

[[nodiscard]] double running_cost(const StateVector& x, const ControlVector& u, const CostWeights& w);

/// Trapezoidal quadrature of the running cost. Throws InputError if the
/// trajectories do not share a grid.
[[nodiscard]] double objective(const StateTrajectory& states, const ControlTrajectory& controls,
                               const CostWeights& w);

/// H = running cost + lambda . rhs_control(x, u).
[[nodiscard]] double hamiltonian(const StateVector& x, const AdjointVector& adjoint, const ControlVector& u,
                                 const CostWeights& w, const ModelParams& p, ModelVariant variant);

/// Analytic dH/du_i.
[[nodiscard]] std::array<double, 3> hamiltonian_control_gradient(const StateVector& x, const AdjointVector& adjoint,
                                                                 const ControlVector& u, const CostWeights& w,
                                                                 const ModelParams& p, ModelVariant variant);

/// d(lambda)/dt = -dH/dx, from analytic partial derivatives of hamiltonian().
[[nodiscard]] AdjointVector adjoint_rhs(const AdjointVector& adjoint, const StateVector& x, const ControlVector& u,
                                        const CostWeights& w, const ModelParams& p, ModelVariant variant);

/// Pointwise minimiser of H over [0, m1] x [0, m2] x [0, m3].
/// H is separable and quadratic in u, so u_i = clamp(-g_i / D_i) where g_i is
/// the coefficient of u_i in lambda . rhs_control. Throws InputError if any D_i <= 0.
[[nodiscard]] ControlVector optimal_controls(const StateVector& x, const AdjointVector& adjoint, const CostWeights& w,
                                             const ModelParams& p, ModelVariant variant,
                                             const ControlVector::Array& bounds);

/// Forward RK4 of the controlled system; controls are linearly interpolated
/// between grid samples.
[[nodiscard]] StateTrajectory simulate_controlled(const StateVector& x0, const ControlTrajectory& controls,
                                                  const ModelParams& p, ModelVariant variant);

/// Backward RK4 of the adjoint system with lambda(T) = 0 along a fixed state trajectory.
[[nodiscard]] AdjointTrajectory solve_adjoint(const StateTrajectory& states, const ControlTrajectory& controls,
                                              const CostWeights& w, const ModelParams& p, ModelVariant variant);

/// Same control on every grid point.
[[nodiscard]] ControlTrajectory constant_controls(const TimeGrid& grid, const ControlVector& u);

struct SweepOptions {
    double relaxation = 0.5;
    double tolerance = 1e-6;
    std::size_t max_iterations = 500;
};

struct SweepResult {
    StateTrajectory state_traj;
    AdjointTrajectory adjoint_traj;
    ControlTrajectory control_traj;
    double objective_value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Objective of the state/control pair at the start of each iteration.
    std::vector<double> objective_history;
};

/// Forward-backward sweep with relaxed control updates, starting from u = 0.
/// Once the max-abs control change drops below the tolerance, the controls are
/// set to the last pointwise minimiser and one final
/// forward/backward pass makes the returned state, adjoint and control
/// mutually consistent. Throws NumericalFailure when the objective exceeds
/// 1e12 or becomes non-finite; returns converged = false after max_iterations.
[[nodiscard]] SweepResult forward_backward_sweep(const StateVector& x0, const TimeGrid& grid, const CostWeights& w,
                                                 const ModelParams& p, ModelVariant variant,
                                                 const ControlVector::Array& bounds, const SweepOptions& options = {});

struct PreconditionItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExistenceReport {
    std::vector<PreconditionItem> items;
    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] const PreconditionItem* find(const std::string& name) const;
};

/// Itemised existence conditions that can be checked numerically:
/// "control_set_nonempty", "bounds_well_ordered", "state_weights_positive", "integrand_convex".
[[nodiscard]] ExistenceReport existence_preconditions(const CostWeights& w, const ControlVector::Array& bounds);

}  // namespace tickfever
