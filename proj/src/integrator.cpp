#include "tickfever/integrator.hpp"

#include <cmath>
#include <string>

#include "tickfever/errors.hpp"

namespace tickfever {

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_steps) : t0_(t0), t1_(t1), n_steps_(n_steps) {
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw InputError("time grid endpoints must be finite");
    if (!(t1 > t0)) throw InputError("time grid requires t1 > t0");
    if (n_steps == 0) throw InputError("time grid requires n_steps >= 1");
}

double TimeGrid::at(std::size_t k) const {
    if (k == n_steps_) return t1_;
    return t0_ + static_cast<double>(k) * dt();
}

namespace {

void check_sample(const Vec7& x, std::size_t step) {
    for (int i = 0; i < kNumCompartments; ++i) {
        if (!std::isfinite(x[i])) {
            throw IntegrationFailure(step, i, std::string(kCompartmentNames[static_cast<std::size_t>(i)]));
        }
    }
}

}  // namespace

StateTrajectory integrate(const Derivative& rhs, const Vec7& x0, const TimeGrid& grid) {
    StateTrajectory traj{grid, {}};
    traj.samples.reserve(grid.size());
    traj.samples.push_back(x0);
    check_sample(x0, 0);

    const double h = grid.dt();
    Vec7 x = x0;
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
        const double t = grid.at(k);
        const Vec7 k1 = rhs(t, x);
        const Vec7 k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
        const Vec7 k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
        const Vec7 k4 = rhs(t + h, x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_sample(x, k + 1);
        traj.samples.push_back(x);
    }
    return traj;
}

StateTrajectory integrate_backward(const CoupledDerivative& rhs, const Vec7& yT, const TimeGrid& grid,
                                   const StateTrajectory& frozen) {
    if (!(frozen.grid == grid) || frozen.samples.size() != grid.size()) {
        throw InputError("frozen trajectory is not sampled on the requested grid");
    }
    const std::size_t n = grid.n_steps();
    StateTrajectory traj{grid, std::vector<Vec7>(grid.size())};
    traj.samples[n] = yT;
    check_sample(yT, n);

    // Step size is negative: we walk from t_{k+1} to t_k.
    const double h = -grid.dt();
    Vec7 y = yT;
    for (std::size_t k = n; k-- > 0;) {
        const double t = grid.at(k + 1);
        const Vec7& z_hi = frozen.samples[k + 1];
        const Vec7& z_lo = frozen.samples[k];
        const Vec7 z_mid = 0.5 * (z_hi + z_lo);
        const Vec7 k1 = rhs(t, y, z_hi);
        const Vec7 k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1, z_mid);
        const Vec7 k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2, z_mid);
        const Vec7 k4 = rhs(t + h, y + h * k3, z_lo);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_sample(y, k);
        traj.samples[k] = y;
    }
    return traj;
}

}  // namespace tickfever
