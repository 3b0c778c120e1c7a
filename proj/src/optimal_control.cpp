#include "tickfever/optimal_control.hpp"

#include <algorithm>
#include <cmath>

#include "tickfever/errors.hpp"

namespace tickfever {

namespace {

constexpr double kDivergenceLimit = 1e12;

void require_same_grid(const TimeGrid& a, std::size_t a_size, const TimeGrid& b, std::size_t b_size) {
    if (!(a == b) || a_size != b_size || a_size != a.size()) {
        throw InputError("trajectories are not sampled on the same grid");
    }
}

// Linear interpolation of control samples at time t (RK4 stages hit grid
// points and midpoints only).
ControlVector::Array control_at(const ControlTrajectory& controls, double t) {
    const TimeGrid& g = controls.grid;
    const double s = (t - g.t0()) / g.dt();
    const auto last = static_cast<double>(g.n_steps());
    if (s <= 0.0) return controls.samples.front().values();
    if (s >= last) return controls.samples.back().values();
    const auto k = static_cast<std::size_t>(std::floor(s));
    const double frac = s - static_cast<double>(k);
    const auto& lo = controls.samples[k].values();
    const auto& hi = controls.samples[std::min(k + 1, controls.samples.size() - 1)].values();
    return {lo[0] + frac * (hi[0] - lo[0]), lo[1] + frac * (hi[1] - lo[1]), lo[2] + frac * (hi[2] - lo[2])};
}

// Coefficients g_i of u_i in lambda . rhs_control (rhs_control is affine in u).
std::array<double, 3> control_coefficients(const StateVector& x, const AdjointVector& l, const ModelParams& p,
                                           ModelVariant variant) {
    const double SB = x[kSB], IB = x[kIB], IT = x[kIT];
    std::array<double, 3> g{};
    g[0] = (l[kSB] - l[kEB]) * p.beta_1 * IT * SB;
    g[1] = (l[kSB] - l[kEB]) * p.beta_2 * IB * SB;
    g[1] += variant == ModelVariant::PaperExact ? l[kR] * IB : (l[kR] - l[kIB]) * IB;
    g[2] = -l[kST] * p.tick_inflow(x);
    return g;
}

AdjointVector adjoint_rhs_unchecked(const AdjointVector& l, const StateVector& x, const ControlVector::Array& u,
                                    const CostWeights& w, const ModelParams& p, ModelVariant variant) {
    const double SB = x[kSB], IB = x[kIB], ST = x[kST], IT = x[kIT];
    const bool proportional = p.recruitment_mode == RecruitmentMode::Proportional;
    const double bB = proportional ? p.tau_B : 0.0;
    const double bT = proportional ? p.tau_T * (1.0 - u[2]) : 0.0;
    const double a1 = (1.0 - u[0]) * p.beta_1;
    const double a2 = (1.0 - u[1]) * p.beta_2;
    const double k = p.theta + p.lambda;
    const bool literal = variant == ModelVariant::PaperExact;
    const double ib_loss = literal ? p.alpha_B + p.mu : p.sigma + u[1] + p.d + p.mu;
    const double ib_to_r = literal ? u[1] : p.sigma + u[1];

    AdjointVector dH;
    dH[kSB] = l[kSB] * (bB - a1 * IT - a2 * IB - p.d) + l[kEB] * (a1 * IT + a2 * IB);
    dH[kEB] = w.C1 + l[kSB] * bB - l[kEB] * (p.alpha_B + p.d) + l[kIB] * p.alpha_B;
    dH[kIB] = w.C2 + l[kSB] * (bB - a2 * SB) + l[kEB] * a2 * SB - l[kIB] * ib_loss + l[kR] * ib_to_r -
              l[kST] * p.beta_3 * ST + l[kET] * p.beta_3 * ST;
    dH[kR] = l[kSB] * bB - l[kR] * p.d;
    dH[kST] = w.C3 + l[kST] * (bT - p.beta_3 * IB - k * IT - p.delta) + l[kET] * (p.beta_3 * IB + k * IT);
    dH[kET] = w.C3 + l[kST] * bT - l[kET] * (p.delta + p.alpha_T) + l[kIT] * p.alpha_T;
    dH[kIT] = w.C3 - l[kSB] * a1 * SB + l[kEB] * a1 * SB + l[kST] * (bT - k * ST) + l[kET] * k * ST -
              l[kIT] * p.delta;
    return -dH;
}

double max_control_change(const ControlTrajectory& a, const ControlTrajectory& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a.samples[k][i] - b.samples[k][i]));
    }
    return m;
}

}  // namespace

double running_cost(const StateVector& x, const ControlVector& u, const CostWeights& w) {
    return w.C1 * x[kEB] + w.C2 * x[kIB] + w.C3 * tick_total(x) +
           0.5 * (w.D1 * u[0] * u[0] + w.D2 * u[1] * u[1] + w.D3 * u[2] * u[2]);
}

double objective(const StateTrajectory& states, const ControlTrajectory& controls, const CostWeights& w) {
    require_same_grid(states.grid, states.samples.size(), controls.grid, controls.samples.size());
    const std::size_t n = states.samples.size();
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double f = running_cost(states.samples[k], controls.samples[k], w);
        sum += (k == 0 || k == n - 1) ? 0.5 * f : f;
    }
    return sum * states.grid.dt();
}

double hamiltonian(const StateVector& x, const AdjointVector& adjoint, const ControlVector& u, const CostWeights& w,
                   const ModelParams& p, ModelVariant variant) {
    return running_cost(x, u, w) + adjoint.dot(rhs_control(x, u, p, variant));
}

std::array<double, 3> hamiltonian_control_gradient(const StateVector& x, const AdjointVector& adjoint,
                                                   const ControlVector& u, const CostWeights& w, const ModelParams& p,
                                                   ModelVariant variant) {
    const auto g = control_coefficients(x, adjoint, p, variant);
    const auto D = w.control_weights();
    return {D[0] * u[0] + g[0], D[1] * u[1] + g[1], D[2] * u[2] + g[2]};
}

AdjointVector adjoint_rhs(const AdjointVector& adjoint, const StateVector& x, const ControlVector& u,
                          const CostWeights& w, const ModelParams& p, ModelVariant variant) {
    p.validate();
    check_finite_state(x);
    return adjoint_rhs_unchecked(adjoint, x, u.values(), w, p, variant);
}

ControlVector optimal_controls(const StateVector& x, const AdjointVector& adjoint, const CostWeights& w,
                               const ModelParams& p, ModelVariant variant, const ControlVector::Array& bounds) {
    const auto D = w.control_weights();
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(D[i] > 0.0)) throw InputError("control weight D" + std::to_string(i + 1) + " must be > 0");
    }
    const auto g = control_coefficients(x, adjoint, p, variant);
    return ControlVector::clamped({-g[0] / D[0], -g[1] / D[1], -g[2] / D[2]}, bounds);
}

ControlTrajectory constant_controls(const TimeGrid& grid, const ControlVector& u) {
    return ControlTrajectory{grid, std::vector<ControlVector>(grid.size(), u)};
}

StateTrajectory simulate_controlled(const StateVector& x0, const ControlTrajectory& controls, const ModelParams& p,
                                    ModelVariant variant) {
    p.validate();
    check_finite_state(x0);
    if (controls.samples.size() != controls.grid.size()) throw InputError("control samples do not match their grid");
    return integrate(
        [&](double t, const Vec7& x) { return detail::controlled_rhs(x, control_at(controls, t), p, variant); }, x0,
        controls.grid);
}

AdjointTrajectory solve_adjoint(const StateTrajectory& states, const ControlTrajectory& controls,
                                const CostWeights& w, const ModelParams& p, ModelVariant variant) {
    p.validate();
    require_same_grid(states.grid, states.samples.size(), controls.grid, controls.samples.size());
    return integrate_backward(
        [&](double t, const Vec7& l, const Vec7& x) {
            return adjoint_rhs_unchecked(l, x, control_at(controls, t), w, p, variant);
        },
        AdjointVector::Zero(), states.grid, states);
}

SweepResult forward_backward_sweep(const StateVector& x0, const TimeGrid& grid, const CostWeights& w,
                                   const ModelParams& p, ModelVariant variant, const ControlVector::Array& bounds,
                                   const SweepOptions& options) {
    p.validate();
    check_finite_state(x0);
    if (!(options.relaxation > 0.0 && options.relaxation <= 1.0)) {
        throw InputError("relaxation must lie in (0, 1]");
    }
    if (!(options.tolerance > 0.0)) throw InputError("sweep tolerance must be > 0");
    const auto D = w.control_weights();
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(D[i] > 0.0)) throw InputError("control weight D" + std::to_string(i + 1) + " must be > 0");
    }

    const double omega = options.relaxation;
    SweepResult result;
    ControlTrajectory u = constant_controls(grid, ControlVector({0.0, 0.0, 0.0}, bounds));

    auto evaluate = [&](std::size_t iteration) {
        try {
            result.state_traj = simulate_controlled(x0, u, p, variant);
            result.objective_value = objective(result.state_traj, u, w);
            if (!std::isfinite(result.objective_value) || result.objective_value > kDivergenceLimit) {
                throw NumericalFailure("objective diverged");
            }
            result.adjoint_traj = solve_adjoint(result.state_traj, u, w, p, variant);
        } catch (const NumericalFailure& e) {
            throw NumericalFailure("forward-backward sweep failed at iteration " + std::to_string(iteration) + ": " +
                                   e.what());
        }
    };

    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        evaluate(it);
        result.objective_history.push_back(result.objective_value);
        result.iterations = it;

        ControlTrajectory next = u;
        ControlTrajectory candidate = u;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const ControlVector cand =
                optimal_controls(result.state_traj.samples[k], result.adjoint_traj.samples[k], w, p, variant, bounds);
            candidate.samples[k] = cand;
            const auto& old = u.samples[k];
            next.samples[k] = ControlVector::clamped({omega * cand[0] + (1.0 - omega) * old[0],
                                                      omega * cand[1] + (1.0 - omega) * old[1],
                                                      omega * cand[2] + (1.0 - omega) * old[2]},
                                                     bounds);
        }
        const double change = max_control_change(next, u);
        if (change < options.tolerance) {
            // Relaxation only approaches a bound geometrically; land on it.
            u = std::move(candidate);
            result.converged = true;
            break;
        }
        u = std::move(next);
    }

    evaluate(result.iterations + 1);
    result.control_traj = std::move(u);
    return result;
}

bool ExistenceReport::all_passed() const {
    return std::all_of(items.begin(), items.end(), [](const auto& item) { return item.passed; });
}

const PreconditionItem* ExistenceReport::find(const std::string& name) const {
    for (const auto& item : items) {
        if (item.name == name) return &item;
    }
    return nullptr;
}

ExistenceReport existence_preconditions(const CostWeights& w, const ControlVector::Array& bounds) {
    ExistenceReport report;

    const bool nonempty = std::all_of(bounds.begin(), bounds.end(), [](double m) { return m >= 0.0; });
    report.items.push_back({"control_set_nonempty", nonempty,
                            nonempty ? "u = 0 is admissible" : "some bound m_i is negative, so U is empty"});

    bool ordered = true;
    std::string detail = "0 < m_i <= 1 for every control";
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(bounds[i] > 0.0 && bounds[i] <= 1.0)) {
            ordered = false;
            detail = "m" + std::to_string(i + 1) + " = " + std::to_string(bounds[i]) + " is outside (0, 1]";
            break;
        }
    }
    report.items.push_back({"bounds_well_ordered", ordered, detail});

    const bool c_positive = w.C1 > 0.0 && w.C2 > 0.0 && w.C3 > 0.0;
    report.items.push_back(
        {"state_weights_positive", c_positive, c_positive ? "C1, C2, C3 > 0" : "some state weight C_i is not positive"});

    const bool convex = w.D1 > 0.0 && w.D2 > 0.0 && w.D3 > 0.0;
    report.items.push_back({"integrand_convex", convex,
                            convex ? "D1, D2, D3 > 0: running cost strictly convex in u"
                                   : "some control weight D_i is not positive: running cost not strictly convex in u"});
    return report;
}

}  // namespace tickfever
