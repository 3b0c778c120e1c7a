#include "tickfever/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tickfever/errors.hpp"

namespace tickfever {

namespace {

void require_rate(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw InputError(std::string("parameter ") + name + " must be finite and >= 0 (got " +
                         std::to_string(value) + ")");
    }
}

}  // namespace

void ModelParams::validate() const {
    require_rate(tau_B, "tau_B");
    require_rate(tau_T, "tau_T");
    require_rate(beta_1, "beta_1");
    require_rate(beta_2, "beta_2");
    require_rate(beta_3, "beta_3");
    require_rate(theta, "theta");
    require_rate(lambda, "lambda");
    require_rate(alpha_B, "alpha_B");
    require_rate(alpha_T, "alpha_T");
    require_rate(d, "d");
    require_rate(mu, "mu");
    require_rate(sigma, "sigma");
    require_rate(delta, "delta");
    if (!std::isfinite(N_B0) || N_B0 <= 0.0) throw InputError("parameter N_B0 must be finite and > 0");
    if (!std::isfinite(N_T0) || N_T0 <= 0.0) throw InputError("parameter N_T0 must be finite and > 0");
}

double ModelParams::bird_inflow(const StateVector& x) const {
    return recruitment_mode == RecruitmentMode::ConstantInflow ? tau_B * N_B0 : tau_B * bird_total(x);
}

double ModelParams::tick_inflow(const StateVector& x) const {
    return recruitment_mode == RecruitmentMode::ConstantInflow ? tau_T * N_T0 : tau_T * tick_total(x);
}

StateVector default_initial_state() {
    StateVector x;
    x << 100.0, 80.0, 80.0, 60.0, 100.0, 80.0, 80.0;
    return x;
}

ControlVector::ControlVector(const Array& values, const Array& bounds) : values_(values), bounds_(bounds) {
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string name = "u" + std::to_string(i + 1);
        if (std::isnan(bounds[i]) || bounds[i] < 0.0) {
            throw InputError("bound m" + std::to_string(i + 1) + " must be >= 0");
        }
        if (!std::isfinite(values[i])) throw InputError("control " + name + " is not finite");
        if (values[i] < 0.0 || values[i] > bounds[i]) {
            throw InputError("control " + name + " = " + std::to_string(values[i]) + " outside [0, " +
                             std::to_string(bounds[i]) + "]");
        }
    }
}

ControlVector ControlVector::clamped(const Array& values, const Array& bounds) {
    Array v{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::isnan(values[i])) throw InputError("control u" + std::to_string(i + 1) + " is NaN");
        v[i] = std::clamp(values[i], 0.0, std::max(bounds[i], 0.0));
    }
    return ControlVector(v, bounds);
}

void check_finite_state(const StateVector& x) {
    for (int i = 0; i < kNumCompartments; ++i) {
        if (!std::isfinite(x[i])) {
            throw InputError("state compartment " + std::string(kCompartmentNames[static_cast<std::size_t>(i)]) +
                             " is not finite");
        }
    }
}

StateVector rhs_base(const StateVector& x, const ModelParams& p) {
    p.validate();
    check_finite_state(x);
    return detail::base_rhs(x, p);
}

StateVector rhs_control(const StateVector& x, const ControlVector& u, const ModelParams& p,
                        ModelVariant variant) {
    p.validate();
    check_finite_state(x);
    return detail::controlled_rhs(x, u.values(), p, variant);
}

namespace detail {

StateVector base_rhs(const StateVector& x, const ModelParams& p) {
    const double SB = x[kSB], EB = x[kEB], IB = x[kIB], R = x[kR];
    const double ST = x[kST], ET = x[kET], IT = x[kIT];

    const double bird_infection = p.beta_1 * IT * SB + p.beta_2 * IB * SB;
    const double tick_infection = p.beta_3 * IB * ST + (p.theta + p.lambda) * IT * ST;

    StateVector dx;
    dx[kSB] = p.bird_inflow(x) - bird_infection - p.d * SB;
    dx[kEB] = bird_infection - (p.alpha_B + p.d) * EB;
    dx[kIB] = p.alpha_B * EB - (p.sigma + p.d + p.mu) * IB;
    dx[kR] = p.sigma * IB - p.d * R;
    dx[kST] = p.tick_inflow(x) - tick_infection - p.delta * ST;
    // Exposed ticks leave by death and progression: -(delta + alpha_T) E_T.
    dx[kET] = tick_infection - (p.delta + p.alpha_T) * ET;
    dx[kIT] = p.alpha_T * ET - p.delta * IT;
    return dx;
}

StateVector controlled_rhs(const StateVector& x, const ControlVector::Array& u, const ModelParams& p,
                           ModelVariant variant) {
    const double SB = x[kSB], EB = x[kEB], IB = x[kIB], R = x[kR];
    const double ST = x[kST], ET = x[kET], IT = x[kIT];
    const double u1 = u[0], u2 = u[1], u3 = u[2];

    const double bird_infection = (1.0 - u1) * p.beta_1 * IT * SB + (1.0 - u2) * p.beta_2 * IB * SB;
    const double tick_infection = p.beta_3 * IB * ST + (p.theta + p.lambda) * IT * ST;

    StateVector dx;
    dx[kSB] = p.bird_inflow(x) - bird_infection - p.d * SB;
    dx[kEB] = bird_infection - (p.alpha_B + p.d) * EB;
    if (variant == ModelVariant::PaperExact) {
        dx[kIB] = p.alpha_B * EB - p.alpha_B * IB - p.mu * IB;
        dx[kR] = u2 * IB - p.d * R;
    } else {
        dx[kIB] = p.alpha_B * EB - (p.sigma + u2 + p.d + p.mu) * IB;
        dx[kR] = (p.sigma + u2) * IB - p.d * R;
    }
    dx[kST] = (1.0 - u3) * p.tick_inflow(x) - tick_infection - p.delta * ST;
    dx[kET] = tick_infection - (p.delta + p.alpha_T) * ET;
    dx[kIT] = p.alpha_T * ET - p.delta * IT;
    return dx;
}

}  // namespace detail

std::string_view to_string(RecruitmentMode mode) {
    return mode == RecruitmentMode::ConstantInflow ? "constant" : "proportional";
}

std::string_view to_string(ModelVariant variant) {
    return variant == ModelVariant::PaperExact ? "paper" : "consistent";
}

}  // namespace tickfever
