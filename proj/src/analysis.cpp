#include "tickfever/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "tickfever/errors.hpp"

namespace tickfever {

namespace {

constexpr double kResidualTarget = 1e-10;
constexpr int kMaxNewtonIterations = 200;
constexpr int kMaxHalvings = 20;
constexpr double kDiseaseFreeCutoff = 1e-8;

constexpr std::array<int, 4> kInfected = {kEB, kIB, kET, kIT};

double max_abs(const Vec7& v) { return v.cwiseAbs().maxCoeff(); }

double max_infected(const StateVector& x) {
    double m = 0.0;
    for (int c : kInfected) m = std::max(m, std::abs(x[c]));
    return m;
}

// x - xs - xs ln(x/xs) written as xs * (s - log1p(s)), s = (x - xs)/xs.
// The series branch avoids cancellation for tiny deviations.
double goh_volterra_term(double x, double xs) {
    const double s = (x - xs) / xs;
    double g;
    if (std::abs(s) < 1e-4) {
        g = s * s * (0.5 - s * (1.0 / 3.0 - s * 0.25));
    } else {
        g = s - std::log1p(s);
    }
    return xs * g;
}

}  // namespace

StateVector disease_free_equilibrium(const ModelParams& p) {
    p.validate();
    if (p.d <= 0.0) throw InputError("disease-free equilibrium requires d > 0");
    if (p.delta <= 0.0) throw InputError("disease-free equilibrium requires delta > 0");
    StateVector x = StateVector::Zero();
    x[kSB] = p.tau_B * p.N_B0 / p.d;
    x[kST] = p.tau_T * p.N_T0 / p.delta;
    return x;
}

Mat7 jacobian_at(const StateVector& x, const ModelParams& p) {
    p.validate();
    check_finite_state(x);
    const double SB = x[kSB], IB = x[kIB], ST = x[kST], IT = x[kIT];
    const bool proportional = p.recruitment_mode == RecruitmentMode::Proportional;
    const double bB = proportional ? p.tau_B : 0.0;
    const double bT = proportional ? p.tau_T : 0.0;
    const double k = p.theta + p.lambda;

    Mat7 J = Mat7::Zero();
    J(kSB, kSB) = bB - p.beta_1 * IT - p.beta_2 * IB - p.d;
    J(kSB, kEB) = bB;
    J(kSB, kIB) = bB - p.beta_2 * SB;
    J(kSB, kR) = bB;
    J(kSB, kIT) = -p.beta_1 * SB;

    J(kEB, kSB) = p.beta_1 * IT + p.beta_2 * IB;
    J(kEB, kEB) = -(p.alpha_B + p.d);
    J(kEB, kIB) = p.beta_2 * SB;
    J(kEB, kIT) = p.beta_1 * SB;

    J(kIB, kEB) = p.alpha_B;
    J(kIB, kIB) = -(p.sigma + p.d + p.mu);

    J(kR, kIB) = p.sigma;
    J(kR, kR) = -p.d;

    J(kST, kIB) = -p.beta_3 * ST;
    J(kST, kST) = bT - p.beta_3 * IB - k * IT - p.delta;
    J(kST, kET) = bT;
    J(kST, kIT) = bT - k * ST;

    J(kET, kIB) = p.beta_3 * ST;
    J(kET, kST) = p.beta_3 * IB + k * IT;
    J(kET, kET) = -(p.delta + p.alpha_T);
    J(kET, kIT) = k * ST;

    J(kIT, kET) = p.alpha_T;
    J(kIT, kIT) = -p.delta;
    return J;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw InputError("eigenvalues requires a square matrix");
    if (!a.allFinite()) throw InputError("eigenvalues requires finite matrix entries");
    if (a.rows() == 0) return {};

    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
    if (solver.info() != Eigen::Success) throw NumericalFailure("eigenvalue iteration did not converge");

    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();
    const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    const double scale = a.norm();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const Eigen::VectorXcd v = vectors.col(i);
        const double vn = v.norm();
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()) || vn == 0.0) {
            throw NumericalFailure("eigen decomposition produced an invalid pair");
        }
        const double residual = (ac * v - values[i] * v).norm() / vn;
        if (residual > 1e-8 * scale) {
            throw NumericalFailure("eigenpair residual " + std::to_string(residual) + " exceeds tolerance");
        }
    }

    std::vector<std::complex<double>> out(values.data(), values.data() + values.size());
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return out;
}

bool spectrum_stable(const std::vector<std::complex<double>>& ev) {
    return std::all_of(ev.begin(), ev.end(), [](const auto& z) { return z.real() < -kEigenStabilityEps; });
}

StateVector default_endemic_guess(const ModelParams& p) {
    StateVector x = disease_free_equilibrium(p);
    for (int c : kInfected) x[c] += 1.0;
    return x;
}

EquilibriumReport find_endemic_equilibrium(const ModelParams& p) {
    const StateVector dfe = disease_free_equilibrium(p);
    std::vector<StateVector> starts{default_endemic_guess(p)};
    for (double f : {0.5, 0.25, 0.1, 0.05, 0.01}) {
        StateVector x = StateVector::Zero();
        x[kSB] = (1.0 - 2.0 * f) * dfe[kSB];
        x[kEB] = x[kIB] = f * dfe[kSB];
        x[kST] = (1.0 - 2.0 * f) * dfe[kST];
        x[kET] = x[kIT] = f * dfe[kST];
        starts.push_back(x);
    }
    std::optional<EquilibriumReport> fallback;
    std::string last_error = "no starting point";
    for (const auto& s : starts) {
        try {
            EquilibriumReport r = endemic_equilibrium(p, s);
            if (r.kind == EquilibriumKind::Endemic && r.point.minCoeff() >= -1e-9) return r;
            if (!fallback) fallback = std::move(r);
        } catch (const NumericalFailure& e) {
            last_error = e.what();
        }
    }
    if (fallback) return *fallback;
    throw NumericalFailure("endemic search failed from every start: " + last_error);
}

EquilibriumReport endemic_equilibrium(const ModelParams& p, const StateVector& guess) {
    p.validate();
    check_finite_state(guess);

    StateVector x = guess;
    Vec7 f = detail::base_rhs(x, p);
    double residual = max_abs(f);
    int it = 0;
    while (residual >= kResidualTarget) {
        if (it == kMaxNewtonIterations) {
            throw NumericalFailure("Newton iteration did not converge after " + std::to_string(it) +
                                   " iterations (last residual " + std::to_string(residual) + ")");
        }
        ++it;
        const Mat7 J = jacobian_at(x, p);
        const Eigen::FullPivLU<Mat7> lu(J);
        if (!lu.isInvertible()) throw NumericalFailure("singular Jacobian during Newton iteration");
        const Vec7 step = lu.solve(-f);
        if (!step.allFinite()) throw NumericalFailure("non-finite Newton step");

        double scale = 1.0;
        StateVector trial = x + step;
        Vec7 f_trial = detail::base_rhs(trial, p);
        for (int h = 0; h < kMaxHalvings && !(max_abs(f_trial) < residual); ++h) {
            scale *= 0.5;
            trial = x + scale * step;
            f_trial = detail::base_rhs(trial, p);
        }
        x = trial;
        f = f_trial;
        residual = max_abs(f);
        if (!std::isfinite(residual)) throw NumericalFailure("Newton iteration produced a non-finite residual");
    }

    EquilibriumReport report;
    report.point = x;
    report.residual_norm = residual;
    report.iterations = it;
    report.kind = max_infected(x) < kDiseaseFreeCutoff ? EquilibriumKind::DiseaseFree : EquilibriumKind::Endemic;
    report.eigenvalues = eigenvalues(jacobian_at(x, p));
    report.locally_stable = spectrum_stable(report.eigenvalues);
    return report;
}

EquilibriumReport disease_free_report(const ModelParams& p) {
    EquilibriumReport report;
    report.point = disease_free_equilibrium(p);
    report.kind = EquilibriumKind::DiseaseFree;
    report.residual_norm = max_abs(detail::base_rhs(report.point, p));
    report.eigenvalues = eigenvalues(jacobian_at(report.point, p));
    report.locally_stable = spectrum_stable(report.eigenvalues);
    return report;
}

DfeStability dfe_stability_condition(const ModelParams& p) {
    p.validate();
    ModelParams q = p;
    q.recruitment_mode = RecruitmentMode::Proportional;

    // Disease-free fixed point of the Proportional system: (tau_B - d) S_B = 0,
    // so S_B = 0 unless the rates balance, in which case S_B = N_B0 is one
    // member of the line of fixed points. Same for the ticks.
    StateVector x = StateVector::Zero();
    x[kSB] = (q.tau_B == q.d) ? q.N_B0 : 0.0;
    x[kST] = (q.tau_T == q.delta) ? q.N_T0 : 0.0;

    DfeStability out;
    out.eigenvalues = eigenvalues(jacobian_at(x, q));
    out.spectral_stable = spectrum_stable(out.eigenvalues);
    out.inequality_stable = p.d > p.tau_B && p.delta > p.tau_T;
    return out;
}

ThresholdPredicates endemic_threshold_predicates(const ModelParams& p, double exposed_ticks) {
    p.validate();
    if (p.beta_1 <= 0.0) throw InputError("threshold predicates require beta_1 > 0");
    if (p.alpha_T <= 0.0) throw InputError("threshold predicates require alpha_T > 0");
    if (p.theta + p.lambda <= 0.0) throw InputError("threshold predicates require theta + lambda > 0");
    if (!std::isfinite(exposed_ticks)) throw InputError("exposed tick count must be finite");

    ThresholdPredicates out;
    out.bird_threshold = p.delta * (p.tau_B - p.d) / (p.beta_1 * p.alpha_T);
    out.tick_threshold = (p.delta / p.alpha_T) * ((p.tau_T - p.delta) / (p.theta + p.lambda));
    out.bird_condition = exposed_ticks > out.bird_threshold;
    out.tick_condition = exposed_ticks > out.tick_threshold;
    return out;
}

R0Report r0(const ModelParams& p) {
    p.validate();
    const double inflow_B = p.tau_B * p.N_B0;
    const double inflow_T = p.tau_T * p.N_T0;
    const double k = p.theta + p.lambda;

    using Mat4 = Eigen::Matrix4d;
    const double vB = p.alpha_B + p.d;
    const double vI = p.sigma + p.d + p.mu;
    const double vT = p.delta + p.alpha_T;
    const double vIT = p.delta;
    if (vB <= 0.0 || vI <= 0.0 || vT <= 0.0 || vIT <= 0.0 || p.d <= 0.0) {
        throw NumericalFailure("transition matrix V is singular");
    }
    const StateVector dfe = disease_free_equilibrium(p);
    const double SB0 = dfe[kSB];
    const double ST0 = dfe[kST];

    // Infected order: E_B, I_B, E_T, I_T.
    Mat4 F = Mat4::Zero();
    F(0, 1) = p.beta_2 * SB0;
    F(0, 3) = p.beta_1 * SB0;
    F(2, 1) = p.beta_3 * ST0;
    F(2, 3) = k * ST0;

    Mat4 V = Mat4::Zero();
    V(0, 0) = vB;
    V(1, 0) = -p.alpha_B;
    V(1, 1) = vI;
    V(2, 2) = vT;
    V(3, 2) = -p.alpha_T;
    V(3, 3) = vIT;

    const Eigen::FullPivLU<Mat4> lu(V);
    if (!lu.isInvertible()) throw NumericalFailure("transition matrix V is singular");
    const Mat4 K = F * lu.inverse();

    R0Report out;
    double rho = 0.0;
    for (const auto& z : eigenvalues(K)) rho = std::max(rho, std::abs(z));
    out.r0_spectral = rho;

    const double d = p.d, delta = p.delta;
    out.R_B = p.beta_2 * inflow_B * p.alpha_B / (d * (d + p.alpha_B) * (d + p.mu + p.sigma));
    out.R_T = inflow_T * p.alpha_T * k / (delta * delta * (p.alpha_T + delta));
    out.R_TB = p.beta_2 * inflow_B * p.alpha_B * p.beta_1 * inflow_T * p.alpha_T /
               (d * delta * delta * (p.alpha_T + delta) * (d + p.alpha_B) * (d + p.mu + p.sigma));

    const double sum = out.R_B + out.R_T;
    const double radicand = 0.5 * sum + (sum * sum - 4.0 * (out.R_B * out.R_T + out.R_TB));
    if (radicand >= 0.0) {
        out.r0_formula = std::sqrt(radicand);
        out.agreement = std::abs(*out.r0_formula - out.r0_spectral);
    }
    return out;
}

StateVector closed_form_steady_state(const StateVector& at, const ModelParams& p) {
    p.validate();
    check_finite_state(at);
    const double inflow_B = p.tau_B * p.N_B0;
    const double inflow_T = p.tau_T * p.N_T0;
    const double IB = at[kIB], IT = at[kIT], SB = at[kSB], ET = at[kET];
    const double tick_force = p.beta_3 * IB + p.theta * IT + p.lambda * IT;

    StateVector out;
    out[kSB] = inflow_B / (p.beta_1 * IT + p.beta_2 * IB + p.d);
    out[kEB] = (p.sigma + p.d + p.mu) * IB / p.alpha_B;
    out[kIB] = p.alpha_B * p.beta_1 * IT * SB /
               ((p.alpha_B + p.d) * (p.sigma + p.d + p.mu) - p.alpha_B * p.beta_2);
    out[kR] = p.sigma * IB / p.d;
    out[kST] = inflow_T / (tick_force + p.delta);
    out[kET] = inflow_T * tick_force / ((tick_force + p.delta) * (p.delta - p.alpha_T));
    out[kIT] = p.alpha_T * ET / p.delta;
    return out;
}

RegionCheck invariant_region_check(const StateTrajectory& traj, const ModelParams& p) {
    p.validate();
    if (p.recruitment_mode != RecruitmentMode::ConstantInflow) {
        throw InputError("invariant region check applies to ConstantInflow trajectories");
    }
    RegionCheck out;
    if (traj.samples.empty()) return out;
    const StateVector& x0 = traj.samples.front();
    const double cap_B = p.d > 0.0 ? p.tau_B * p.N_B0 / p.d : INFINITY;
    const double cap_T = p.delta > 0.0 ? p.tau_T * p.N_T0 / p.delta : INFINITY;
    out.bird_bound = std::max(bird_total(x0), cap_B) * (1.0 + 1e-6);
    out.tick_bound = std::max(tick_total(x0), cap_T) * (1.0 + 1e-6);
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const StateVector& x = traj.samples[k];
        if (bird_total(x) > out.bird_bound || tick_total(x) > out.tick_bound) {
            out.inside = false;
            out.first_violation = k;
            break;
        }
    }
    return out;
}

double LyapunovReport::fraction_nonincreasing(std::size_t from) const {
    if (from >= samples.size()) return 1.0;
    std::size_t ok = 0;
    for (std::size_t k = from; k < samples.size(); ++k) {
        if (samples[k].derivative <= epsilon) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(samples.size() - from);
}

LyapunovReport lyapunov_diagnostic(const StateTrajectory& traj, const StateVector& equilibrium,
                                   const ModelParams& p) {
    p.validate();
    constexpr std::array<int, 6> kTerms = {kSB, kEB, kIB, kST, kET, kIT};
    for (int c : kTerms) {
        if (!(equilibrium[c] > 0.0)) {
            throw InputError("equilibrium compartment " + std::string(kCompartmentNames[static_cast<std::size_t>(c)]) +
                             " must be > 0 for the logarithmic terms");
        }
    }
    if (p.sigma + p.d <= 0.0 || p.delta <= 0.0) throw InputError("Lyapunov weights need sigma + d > 0 and delta > 0");

    LyapunovReport out;
    out.weight_IB = (p.beta_2 * equilibrium[kSB] + p.beta_3 * equilibrium[kST]) / (p.sigma + p.d);
    out.weight_IT = (p.beta_1 * equilibrium[kSB] + (p.theta + p.lambda) * equilibrium[kST]) / p.delta;

    std::vector<double> L;
    L.reserve(traj.samples.size());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const StateVector& x = traj.samples[k];
        double value = 0.0;
        for (int c : kTerms) {
            if (!(x[c] > 0.0)) {
                throw InputError("compartment " + std::string(kCompartmentNames[static_cast<std::size_t>(c)]) +
                                 " is not positive at sample " + std::to_string(k));
            }
            const double w = c == kIB ? out.weight_IB : (c == kIT ? out.weight_IT : 1.0);
            value += w * goh_volterra_term(x[c], equilibrium[c]);
        }
        L.push_back(value);
    }

    const std::size_t n = L.size();
    const double dt = traj.grid.dt();
    double max_abs_L = 0.0;
    for (double v : L) max_abs_L = std::max(max_abs_L, std::abs(v));
    out.epsilon = 1e-8 * max_abs_L;
    out.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double dL = 0.0;
        if (n > 1) {
            if (k == 0) {
                dL = (L[1] - L[0]) / dt;
            } else if (k == n - 1) {
                dL = (L[n - 1] - L[n - 2]) / dt;
            } else {
                dL = (L[k + 1] - L[k - 1]) / (2.0 * dt);
            }
        }
        out.samples.push_back({L[k], dL});
    }
    return out;
}

}  // namespace tickfever
