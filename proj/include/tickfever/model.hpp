#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

namespace tickfever {

/// Compartment order used by every 7-vector in the library.
enum Compartment : int { kSB = 0, kEB, kIB, kR, kST, kET, kIT };

inline constexpr int kNumCompartments = 7;
inline constexpr std::array<std::string_view, kNumCompartments> kCompartmentNames = {
    "S_B", "E_B", "I_B", "R", "S_T", "E_T", "I_T"};

using Vec7 = Eigen::Matrix<double, kNumCompartments, 1>;
using Mat7 = Eigen::Matrix<double, kNumCompartments, kNumCompartments>;

/// Population counts (S_B, E_B, I_B, R, S_T, E_T, I_T).
using StateVector = Vec7;

/// How births enter the susceptible classes.
///  ConstantInflow: Lambda = tau * N(0), a fixed inflow.
///  Proportional:   Lambda = tau * N(t), births scale with the live population.
enum class RecruitmentMode { ConstantInflow, Proportional };

/// Selects how the controlled system treats the bird infectious/recovered
/// equations. PaperExact drops natural recovery and moves I_B out at alpha_B, with
/// u2 as the only inflow to R;
/// Consistent keeps natural recovery so that u = 0 reduces to the base model.
enum class ModelVariant { PaperExact, Consistent };

struct ModelParams {
    double tau_B = 8.33;      // bird per-capita birth rate
    double tau_T = 0.167;     // tick per-capita birth rate
    double beta_1 = 2e-4;     // tick bite -> bird infection
    double beta_2 = 0.05;     // bird -> bird (faecal) infection
    double beta_3 = 1.95e-3;  // bird -> tick infection
    double theta = 3.9e-7;    // non-viraemic co-feeding
    double lambda = 3.68e-4;  // transovarial transmission
    double alpha_B = 0.182;
    double alpha_T = 0.182;
    double d = 0.087;
    double mu = 0.2;
    double sigma = 1.25;
    double delta = 0.083;
    double N_B0 = 50.0;
    double N_T0 = 100.0;
    RecruitmentMode recruitment_mode = RecruitmentMode::ConstantInflow;

    /// Throws InputError naming the first offending field.
    void validate() const;

    /// Birth inflow into S_B for the given state under the recruitment mode.
    [[nodiscard]] double bird_inflow(const StateVector& x) const;
    [[nodiscard]] double tick_inflow(const StateVector& x) const;
};

/// Default initial condition (100, 80, 80, 60, 100, 80, 80).
[[nodiscard]] StateVector default_initial_state();

[[nodiscard]] inline double bird_total(const StateVector& x) {
    return x[kSB] + x[kEB] + x[kIB] + x[kR];
}
[[nodiscard]] inline double tick_total(const StateVector& x) {
    return x[kST] + x[kET] + x[kIT];
}

/// Intensities (u1, u2, u3) together with their caps (m1, m2, m3).
/// 0 <= u_i <= m_i always holds for a constructed value.
class ControlVector {
public:
    using Array = std::array<double, 3>;

    ControlVector() = default;
    /// Throws InputError if any value is non-finite, negative, or above its bound.
    ControlVector(const Array& values, const Array& bounds);

    /// Projects each value onto [0, m_i]. Bounds may be +infinity.
    [[nodiscard]] static ControlVector clamped(const Array& values, const Array& bounds);

    [[nodiscard]] double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const Array& values() const { return values_; }
    [[nodiscard]] const Array& bounds() const { return bounds_; }

private:
    Array values_{0.0, 0.0, 0.0};
    Array bounds_{1.0, 1.0, 1.0};
};

/// Time derivative of the uncontrolled system.
/// Throws InputError on non-finite state entries or invalid params.
[[nodiscard]] StateVector rhs_base(const StateVector& x, const ModelParams& p);

/// Time derivative of the controlled system for the chosen variant.
[[nodiscard]] StateVector rhs_control(const StateVector& x, const ControlVector& u,
                                      const ModelParams& p, ModelVariant variant);

/// Throws InputError naming the first non-finite compartment.
void check_finite_state(const StateVector& x);

namespace detail {
// Unchecked evaluation; callers guarantee validity. Used on hot integration
// paths after the inputs have been validated once.
StateVector base_rhs(const StateVector& x, const ModelParams& p);
StateVector controlled_rhs(const StateVector& x, const ControlVector::Array& u,
                           const ModelParams& p, ModelVariant variant);
}  // namespace detail

[[nodiscard]] std::string_view to_string(RecruitmentMode mode);
[[nodiscard]] std::string_view to_string(ModelVariant variant);

}  // namespace tickfever
