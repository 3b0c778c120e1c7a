#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tickfever/model.hpp"

namespace tickfever {

/// Uniform grid t0 + k*dt, k = 0..n_steps.
class TimeGrid {
public:
    /// Throws InputError unless t1 > t0 (both finite) and n_steps >= 1.
    TimeGrid(double t0, double t1, std::size_t n_steps);
    /// Unit interval, one step.
    TimeGrid() : TimeGrid(0.0, 1.0, 1) {}

    [[nodiscard]] double t0() const { return t0_; }
    [[nodiscard]] double t1() const { return t1_; }
    [[nodiscard]] std::size_t n_steps() const { return n_steps_; }
    [[nodiscard]] std::size_t size() const { return n_steps_ + 1; }
    [[nodiscard]] double dt() const { return (t1_ - t0_) / static_cast<double>(n_steps_); }
    [[nodiscard]] double at(std::size_t k) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_;
    double t1_;
    std::size_t n_steps_;
};

/// Grid paired with one sample per grid point.
template <typename Sample>
struct Trajectory {
    TimeGrid grid;
    std::vector<Sample> samples;

    [[nodiscard]] const Sample& back() const { return samples.back(); }
    [[nodiscard]] std::size_t size() const { return samples.size(); }
};

using StateTrajectory = Trajectory<Vec7>;

/// dx/dt = f(t, x).
using Derivative = std::function<Vec7(double t, const Vec7& x)>;

/// dy/dt = g(t, y, z(t)), where z is a frozen trajectory interpolated in time.
using CoupledDerivative = std::function<Vec7(double t, const Vec7& y, const Vec7& frozen)>;

/// Classical fixed-step RK4 from grid.t0() to grid.t1().
/// samples[0] is x0 exactly. Throws NumericalFailure naming the step index and
/// compartment when a non-finite value appears.
[[nodiscard]] StateTrajectory integrate(const Derivative& rhs, const Vec7& x0, const TimeGrid& grid);

/// RK4 run from grid.t1() down to grid.t0() with terminal value yT. The
/// frozen trajectory is sampled on the same grid and linearly interpolated
/// at half steps. Samples are returned in forward time order.
/// Throws InputError if frozen.grid differs from grid.
[[nodiscard]] StateTrajectory integrate_backward(const CoupledDerivative& rhs, const Vec7& yT,
                                                 const TimeGrid& grid, const StateTrajectory& frozen);

}  // namespace tickfever
