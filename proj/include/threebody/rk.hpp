#pragma once

#include <functional>
#include <span>
#include <vector>

#include "threebody/trajectory.hpp"

namespace threebody {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 2000000;
};

struct OdeResult {
    std::vector<double> times;                  // the sample times actually emitted
    std::vector<std::vector<double>> states;    // one state vector per sample
    IntegratorStats stats;
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Adaptive Dormand-Prince 5(4) integration with PI step-size control.
/// Samples are produced by cubic Hermite interpolation on accepted steps;
/// the step size is additionally capped so the estimated interpolation error
/// stays below one tenth of the local error tolerance. `sample_times` must
/// be non-decreasing and lie within [t0, t_end].
OdeResult integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                        double t0, double t_end,
                        std::span<const double> sample_times,
                        const OdeOptions& options);

}  // namespace threebody
