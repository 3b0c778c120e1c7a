#include "doctest.h"

#include <limits>
#include <random>
#include <string>

#include "support.hpp"
#include "tickfever/errors.hpp"
#include "tickfever/integrator.hpp"
#include "tickfever/model.hpp"

using namespace tickfever;

namespace {

Vec7 random_state(std::mt19937_64& rng, double scale = 200.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    Vec7 x;
    for (int i = 0; i < 7; ++i) x[i] = u(rng);
    return x;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("defaults carry the published parameter table") {
    const ModelParams p;
    CHECK(p.tau_B == 8.33);
    CHECK(p.tau_T == 0.167);
    CHECK(p.beta_1 == 2e-4);
    CHECK(p.beta_2 == 0.05);
    CHECK(p.beta_3 == 1.95e-3);
    CHECK(p.theta == 3.9e-7);
    CHECK(p.lambda == 3.68e-4);
    CHECK(p.alpha_B == 0.182);
    CHECK(p.alpha_T == 0.182);
    CHECK(p.d == 0.087);
    CHECK(p.mu == 0.2);
    CHECK(p.sigma == 1.25);
    CHECK(p.delta == 0.083);
    CHECK(p.N_B0 == 50.0);
    CHECK(p.N_T0 == 100.0);
    CHECK(p.recruitment_mode == RecruitmentMode::ConstantInflow);

    Vec7 expected;
    expected << 100, 80, 80, 60, 100, 80, 80;
    CHECK(default_initial_state() == expected);
}

TEST_CASE("parameter validation names the field") {
    ModelParams p;
    p.mu = -0.1;
    CHECK_THROWS_AS(p.validate(), InputError);
    CHECK(message_of([&] { p.validate(); }).find("mu") != std::string::npos);
    p = ModelParams{};
    p.N_T0 = 0.0;
    CHECK(message_of([&] { p.validate(); }).find("N_T0") != std::string::npos);
    p = ModelParams{};
    p.sigma = std::numeric_limits<double>::quiet_NaN();
    CHECK(message_of([&] { p.validate(); }).find("sigma") != std::string::npos);
}

TEST_CASE("rhs_base: empty populations give pure inflow") {
    const ModelParams p;
    const Vec7 f = rhs_base(Vec7::Zero(), p);
    Vec7 expected = Vec7::Zero();
    expected[kSB] = p.tau_B * p.N_B0;
    expected[kST] = p.tau_T * p.N_T0;
    CHECK(f == expected);
}

TEST_CASE("rhs_base: disease-free point is a fixed point") {
    const ModelParams p;
    Vec7 dfe = Vec7::Zero();
    dfe[kSB] = p.tau_B * p.N_B0 / p.d;
    dfe[kST] = p.tau_T * p.N_T0 / p.delta;
    CHECK(tftest::max_abs(rhs_base(dfe, p)) < 1e-12);
}

TEST_CASE("rhs_base matches the term-by-term oracle") {
    ModelParams p;
    const Vec7 x = default_initial_state();
    CHECK(tftest::max_rel_diff(rhs_base(x, p), tftest::oracle_base(x, p)) < 1e-14);

    p.recruitment_mode = RecruitmentMode::Proportional;
    CHECK(tftest::max_rel_diff(rhs_base(x, p), tftest::oracle_base(x, p)) < 1e-14);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const ModelParams q = tftest::draw_params(rng);
        const Vec7 s = random_state(rng);
        CHECK(tftest::max_rel_diff(rhs_base(s, q), tftest::oracle_base(s, q)) < 1e-12);
    }
}

TEST_CASE("rhs_base rejects a non-finite compartment by name") {
    Vec7 x = default_initial_state();
    x[kET] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)rhs_base(x, ModelParams{}), InputError);
    CHECK(message_of([&] { (void)rhs_base(x, ModelParams{}); }).find("E_T") != std::string::npos);
}

TEST_CASE("population totals obey their balance laws") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        ModelParams p = tftest::draw_params(rng);
        const Vec7 x = random_state(rng);
        const Vec7 f = rhs_base(x, p);
        const double dNT = f[kST] + f[kET] + f[kIT];
        const double expectNT = p.tau_T * p.N_T0 - p.delta * tick_total(x);
        CHECK(std::abs(dNT - expectNT) <= 1e-12 * std::max({std::abs(expectNT), p.tau_T * p.N_T0,
                                                             p.delta * tick_total(x)}));
        const double dNB = f[kSB] + f[kEB] + f[kIB] + f[kR];
        const double lamB = p.tau_B * p.N_B0;
        const double expectNB = lamB - p.d * bird_total(x) - p.mu * x[kIB];
        CHECK(std::abs(dNB - expectNB) <= 1e-12 * std::max({std::abs(expectNB), lamB, p.d * bird_total(x)}));
    }
}

TEST_CASE("control vector enforces its bounds") {
    CHECK_NOTHROW(ControlVector({0.02, 0.01, 0.05}, {1, 1, 1}));
    CHECK_THROWS_AS(ControlVector({1.2, 0.0, 0.0}, {1, 1, 1}), InputError);
    CHECK_THROWS_AS(ControlVector({-0.1, 0.0, 0.0}, {1, 1, 1}), InputError);
    const auto c = ControlVector::clamped({5.0, -1.0, 0.3}, {1, 1, 1});
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 0.3);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(ControlVector::clamped({25.0, 0, 0}, {inf, inf, inf})[0] == 25.0);
}

TEST_CASE("rhs_control: zero control reduces to the base model (Consistent)") {
    std::mt19937_64 rng(3);
    const ControlVector zero({0, 0, 0}, {1, 1, 1});
    for (int k = 0; k < 1000; ++k) {
        ModelParams p = tftest::draw_params(rng);
        if (k % 2 == 1) p.recruitment_mode = RecruitmentMode::Proportional;
        const Vec7 x = random_state(rng);
        const Vec7 a = rhs_control(x, zero, p, ModelVariant::Consistent);
        const Vec7 b = rhs_base(x, p);
        for (int i = 0; i < 7; ++i) {
            CHECK(std::abs(a[i] - b[i]) <= 1e-15 * std::max(1.0, std::abs(b[i])));
        }
    }
}

TEST_CASE("rhs_control: full tick-birth control removes tick recruitment") {
    ModelParams p;
    const Vec7 x = default_initial_state();
    const Vec7 f = rhs_control(x, ControlVector({0, 0, 1}, {1, 1, 1}), p, ModelVariant::PaperExact);
    const double losses = -p.beta_3 * x[kIB] * x[kST] - (p.theta + p.lambda) * x[kIT] * x[kST] - p.delta * x[kST];
    CHECK(f[kST] == doctest::Approx(losses).epsilon(1e-14));
}

TEST_CASE("rhs_control matches the term-by-term oracle") {
    const ModelParams p;
    const Vec7 x = default_initial_state();
    const ControlVector u({0.02, 0.01, 0.05}, {1, 1, 1});
    for (auto v : {ModelVariant::PaperExact, ModelVariant::Consistent}) {
        CHECK(tftest::max_rel_diff(rhs_control(x, u, p, v), tftest::oracle_control(x, 0.02, 0.01, 0.05, p, v)) <
              1e-14);
    }
    // The literal form has no natural recovery: at u = 0, R only decays.
    const Vec7 f = rhs_control(x, ControlVector({0, 0, 0}, {1, 1, 1}), p, ModelVariant::PaperExact);
    CHECK(f[kR] == doctest::Approx(-p.d * x[kR]));
    CHECK(f[kIB] == doctest::Approx(p.alpha_B * x[kEB] - (p.alpha_B + p.mu) * x[kIB]));
}

TEST_CASE("trajectories from nonnegative starts stay nonnegative") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        const ModelParams p = tftest::draw_params(rng);
        const Vec7 x0 = random_state(rng, 50.0);
        const auto traj = integrate([&](double, const Vec7& x) { return rhs_base(x, p); }, x0, TimeGrid(0, 50, 5000));
        double lowest = 0.0;
        for (const auto& s : traj.samples) lowest = std::min(lowest, s.minCoeff());
        CHECK(lowest >= -1e-9);
    }
    const ModelParams table;
    const auto traj = integrate([&](double, const Vec7& x) { return rhs_base(x, table); }, default_initial_state(),
                                TimeGrid(0, 40, 4000));
    for (const auto& s : traj.samples) CHECK(s.minCoeff() >= -1e-9);
}

TEST_CASE("proportional mode with deaths dominating births: totals never grow") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 20; ++k) {
        ModelParams p = tftest::draw_params(rng);
        p.recruitment_mode = RecruitmentMode::Proportional;
        p.tau_B = p.d * std::uniform_real_distribution<double>(0.2, 1.0)(rng);
        p.tau_T = p.delta * std::uniform_real_distribution<double>(0.2, 1.0)(rng);
        const Vec7 x0 = random_state(rng, 50.0);
        const auto traj = integrate([&](double, const Vec7& x) { return rhs_base(x, p); }, x0, TimeGrid(0, 30, 3000));
        for (std::size_t i = 1; i < traj.samples.size(); ++i) {
            const auto& a = traj.samples[i - 1];
            const auto& b = traj.samples[i];
            CHECK(bird_total(b) <= bird_total(a) * (1 + 1e-12));
            CHECK(tick_total(b) <= tick_total(a) * (1 + 1e-12));
        }
    }
}
