#pragma once

// Test-only reference implementations and random parameter draws.
// Nothing here calls into the library's evaluation code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tickfever/analysis.hpp"
#include "tickfever/model.hpp"
#include "tickfever/optimal_control.hpp"

namespace tftest {

using tickfever::ModelParams;
using tickfever::ModelVariant;
using tickfever::RecruitmentMode;
using tickfever::Vec7;

// Term-by-term re-derivation of the base system, written out scalar by scalar.
inline Vec7 oracle_base(const Vec7& s, const ModelParams& p) {
    const double SB = s[0], EB = s[1], IB = s[2], R = s[3], ST = s[4], ET = s[5], IT = s[6];
    const bool prop = p.recruitment_mode == RecruitmentMode::Proportional;
    const double birdsIn = prop ? p.tau_B * (SB + EB + IB + R) : p.tau_B * p.N_B0;
    const double ticksIn = prop ? p.tau_T * (ST + ET + IT) : p.tau_T * p.N_T0;
    const double biteInf = p.beta_1 * IT * SB;
    const double faecalInf = p.beta_2 * IB * SB;
    const double tickFromBird = p.beta_3 * IB * ST;
    const double tickFromTick = (p.theta + p.lambda) * IT * ST;
    Vec7 out;
    out[0] = birdsIn - biteInf - faecalInf - p.d * SB;
    out[1] = biteInf + faecalInf - p.alpha_B * EB - p.d * EB;
    out[2] = p.alpha_B * EB - p.sigma * IB - p.d * IB - p.mu * IB;
    out[3] = p.sigma * IB - p.d * R;
    out[4] = ticksIn - tickFromBird - tickFromTick - p.delta * ST;
    out[5] = tickFromBird + tickFromTick - p.delta * ET - p.alpha_T * ET;
    out[6] = p.alpha_T * ET - p.delta * IT;
    return out;
}

// Controlled system, again written out term by term.
inline Vec7 oracle_control(const Vec7& s, double u1, double u2, double u3, const ModelParams& p,
                           ModelVariant variant) {
    const double SB = s[0], EB = s[1], IB = s[2], R = s[3], ST = s[4], ET = s[5], IT = s[6];
    const bool prop = p.recruitment_mode == RecruitmentMode::Proportional;
    const double birdsIn = prop ? p.tau_B * (SB + EB + IB + R) : p.tau_B * p.N_B0;
    const double ticksIn = prop ? p.tau_T * (ST + ET + IT) : p.tau_T * p.N_T0;
    const double biteInf = (1.0 - u1) * p.beta_1 * IT * SB;
    const double faecalInf = (1.0 - u2) * p.beta_2 * IB * SB;
    Vec7 out;
    out[0] = birdsIn - biteInf - faecalInf - p.d * SB;
    out[1] = biteInf + faecalInf - p.alpha_B * EB - p.d * EB;
    if (variant == ModelVariant::PaperExact) {
        out[2] = p.alpha_B * EB - p.alpha_B * IB - p.mu * IB;
        out[3] = u2 * IB - p.d * R;
    } else {
        out[2] = p.alpha_B * EB - p.sigma * IB - u2 * IB - p.d * IB - p.mu * IB;
        out[3] = p.sigma * IB + u2 * IB - p.d * R;
    }
    out[4] = (1.0 - u3) * ticksIn - p.beta_3 * IB * ST - (p.theta + p.lambda) * IT * ST - p.delta * ST;
    out[5] = p.beta_3 * IB * ST + (p.theta + p.lambda) * IT * ST - p.delta * ET - p.alpha_T * ET;
    out[6] = p.alpha_T * ET - p.delta * IT;
    return out;
}

inline double oracle_hamiltonian(const Vec7& x, const Vec7& lam, double u1, double u2, double u3,
                                 const tickfever::CostWeights& w, const ModelParams& p, ModelVariant variant) {
    const Vec7 f = oracle_control(x, u1, u2, u3, p, variant);
    double h = w.C1 * x[1] + w.C2 * x[2] + w.C3 * (x[4] + x[5] + x[6]) +
               0.5 * (w.D1 * u1 * u1 + w.D2 * u2 * u2 + w.D3 * u3 * u3);
    for (int i = 0; i < 7; ++i) h += lam[i] * f[i];
    return h;
}

inline double max_abs(const Vec7& v) { return v.cwiseAbs().maxCoeff(); }

inline double max_rel_diff(const Vec7& a, const Vec7& b) {
    double worst = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

// Spectral radius of F V^-1 for the (E_B, I_B, E_T, I_T) block, assembled
// independently of the library.
inline double oracle_r0_spectral(const ModelParams& p) {
    const double SB0 = p.tau_B * p.N_B0 / p.d;
    const double ST0 = p.tau_T * p.N_T0 / p.delta;
    Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
    F(0, 1) = p.beta_2 * SB0;
    F(0, 3) = p.beta_1 * SB0;
    F(2, 1) = p.beta_3 * ST0;
    F(2, 3) = (p.theta + p.lambda) * ST0;
    Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
    V(0, 0) = p.alpha_B + p.d;
    V(1, 0) = -p.alpha_B;
    V(1, 1) = p.sigma + p.d + p.mu;
    V(2, 2) = p.delta + p.alpha_T;
    V(3, 2) = -p.alpha_T;
    V(3, 3) = p.delta;
    const Eigen::Matrix4d K = F * V.inverse();
    return K.eigenvalues().cwiseAbs().maxCoeff();
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Random parameter set: log-uniform rates, transmission rescaled so that the
// spectral R0 is uniform on [r0_lo, r0_hi].
inline ModelParams draw_params(std::mt19937_64& rng, double r0_lo = 0.2, double r0_hi = 3.0) {
    ModelParams p;
    p.tau_B = log_uniform(rng, 0.1, 10.0);
    p.tau_T = log_uniform(rng, 0.1, 1.0);
    p.alpha_B = log_uniform(rng, 0.1, 1.0);
    p.alpha_T = log_uniform(rng, 0.1, 1.0);
    p.d = log_uniform(rng, 0.1, 1.0);
    p.delta = log_uniform(rng, 0.1, 1.0);
    p.mu = log_uniform(rng, 0.01, 0.5);
    p.sigma = log_uniform(rng, 0.1, 2.0);
    p.N_B0 = log_uniform(rng, 10.0, 200.0);
    p.N_T0 = log_uniform(rng, 10.0, 200.0);
    p.beta_1 = log_uniform(rng, 1e-5, 1e-2);
    p.beta_2 = log_uniform(rng, 1e-5, 1e-2);
    p.beta_3 = log_uniform(rng, 1e-5, 1e-2);
    p.theta = log_uniform(rng, 1e-6, 1e-3);
    p.lambda = log_uniform(rng, 1e-6, 1e-3);
    // r0_spectral is linear in a common scale factor on all transmission terms.
    const double target = std::uniform_real_distribution<double>(r0_lo, r0_hi)(rng);
    const double k = target / oracle_r0_spectral(p);
    p.beta_1 *= k;
    p.beta_2 *= k;
    p.beta_3 *= k;
    p.theta *= k;
    p.lambda *= k;
    return p;
}

// DFE with 5% of each susceptible pool moved to E and another 5% to I.
inline Vec7 seeded_start(const ModelParams& p) {
    const double SB0 = p.tau_B * p.N_B0 / p.d;
    const double ST0 = p.tau_T * p.N_T0 / p.delta;
    Vec7 x;
    x << 0.9 * SB0, 0.05 * SB0, 0.05 * SB0, 0.0, 0.9 * ST0, 0.05 * ST0, 0.05 * ST0;
    return x;
}

inline double max_infected(const Vec7& x) {
    return std::max({x[1], x[2], x[5], x[6]});
}

}  // namespace tftest
