#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tickfever/integrator.hpp"
#include "tickfever/model.hpp"

namespace tickfever {

/// Real part threshold below which an eigenvalue counts as stable.
inline constexpr double kEigenStabilityEps = 1e-9;

enum class EquilibriumKind { DiseaseFree, Endemic };

struct EquilibriumReport {
    StateVector point;
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
    double residual_norm = 0.0;  // max-abs of rhs_base at point
    std::vector<std::complex<double>> eigenvalues;  // descending real part
    bool locally_stable = false;
    int iterations = 0;
};

struct R0Report {
    double R_B = 0.0;
    double R_T = 0.0;
    double R_TB = 0.0;
    /// Closed-form composite expression; empty when its radicand is negative.
    std::optional<double> r0_formula;
    /// Spectral radius of F V^-1 on the (E_B, I_B, E_T, I_T) subsystem.
    double r0_spectral = 0.0;
    std::optional<double> agreement;
};

struct DfeStability {
    bool spectral_stable = false;
    bool inequality_stable = false;
    std::vector<std::complex<double>> eigenvalues;
    [[nodiscard]] bool agree() const { return spectral_stable == inequality_stable; }
};

struct ThresholdPredicates {
    double bird_threshold = 0.0;  // delta (tau_B - d) / (beta_1 alpha_T)
    double tick_threshold = 0.0;  // (delta / alpha_T) (tau_T - delta) / (theta + lambda)
    bool bird_condition = false;
    bool tick_condition = false;
};

struct RegionCheck {
    bool inside = true;
    std::optional<std::size_t> first_violation;
    double bird_bound = 0.0;
    double tick_bound = 0.0;
};

struct LyapunovSample {
    double value;
    double derivative;
};

struct LyapunovReport {
    std::vector<LyapunovSample> samples;
    double weight_IB = 0.0;  // A
    double weight_IT = 0.0;  // B
    double epsilon = 0.0;    // 1e-8 * max|L|

    /// Share of samples in [from, end) with dL/dt <= epsilon.
    [[nodiscard]] double fraction_nonincreasing(std::size_t from = 0) const;
};

/// (tau_B N_B0 / d, 0, 0, 0, tau_T N_T0 / delta, 0, 0). Throws InputError if d or delta is 0.
[[nodiscard]] StateVector disease_free_equilibrium(const ModelParams& p);

/// Analytic Jacobian of rhs_base. In Proportional mode the birth terms
/// contribute tau_B / tau_T to the S_B / S_T rows.
[[nodiscard]] Mat7 jacobian_at(const StateVector& x, const ModelParams& p);

/// All eigenvalues of a dense real matrix, sorted by descending real part.
/// Throws NumericalFailure if the QR iteration fails or an eigenpair residual
/// exceeds 1e-8 * ||A||.
[[nodiscard]] std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a);

/// True when every eigenvalue has real part < -kEigenStabilityEps.
[[nodiscard]] bool spectrum_stable(const std::vector<std::complex<double>>& ev);

/// Damped Newton iteration on rhs_base = 0. Residual target 1e-10 (max-abs),
/// at most 200 iterations, up to 20 step halvings per iteration.
/// Throws NumericalFailure on non-convergence.
[[nodiscard]] EquilibriumReport endemic_equilibrium(const ModelParams& p, const StateVector& guess);

/// Default Newton starting point: DFE + 1 in each infected compartment.
[[nodiscard]] StateVector default_endemic_guess(const ModelParams& p);

/// Newton from several starting points that move a fraction (0.5, 0.25, 0.1,
/// 0.05, 0.01) of each susceptible pool into E and I, after the default guess.
/// Returns the first endemic root with no negative compartment; otherwise the
/// default-guess result. Throws NumericalFailure if every start fails.
[[nodiscard]] EquilibriumReport find_endemic_equilibrium(const ModelParams& p);

/// Residual and spectrum at the disease-free point.
[[nodiscard]] EquilibriumReport disease_free_report(const ModelParams& p);

/// Spectral verdict on the Proportional-mode linearisation at its disease-free
/// fixed point, alongside the inequality verdict d > tau_B and delta > tau_T.
[[nodiscard]] DfeStability dfe_stability_condition(const ModelParams& p);

/// Throws InputError if beta_1, alpha_T or theta + lambda is zero.
[[nodiscard]] ThresholdPredicates endemic_threshold_predicates(const ModelParams& p, double exposed_ticks);

/// Throws NumericalFailure if V is singular.
[[nodiscard]] R0Report r0(const ModelParams& p);

/// The closed-form steady-state expressions evaluated at a point
/// (each component computed from the others). Diagnostic only: comparing it
/// with a numerical root shows how far the closed forms are from a true fixed point.
[[nodiscard]] StateVector closed_form_steady_state(const StateVector& at, const ModelParams& p);

/// Checks N_B <= max(N_B(0), Lambda_B/d)(1+1e-6) and the tick analogue on
/// every sample. Requires ConstantInflow params (throws InputError otherwise).
[[nodiscard]] RegionCheck invariant_region_check(const StateTrajectory& traj, const ModelParams& p);

/// Goh-Volterra function over S_B, E_B, I_B, S_T, E_T, I_T with I_B weighted
/// by A and I_T by B, plus its time derivative by central differences.
/// Throws InputError naming a compartment whose value is <= 0.
[[nodiscard]] LyapunovReport lyapunov_diagnostic(const StateTrajectory& traj, const StateVector& equilibrium,
                                                 const ModelParams& p);

}  // namespace tickfever
