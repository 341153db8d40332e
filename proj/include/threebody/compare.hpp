#pragma once

#include <array>
#include <optional>
#include <span>

#include "threebody/trajectory.hpp"

namespace threebody {

struct BodyMetrics {
    double rms_position_error = 0.0;
    double max_position_error = 0.0;
    double final_error = 0.0;
    std::optional<double> divergence_time;  // first sample with error > threshold
};

struct ErrorMetrics {
    std::array<std::optional<BodyMetrics>, 3> body{};
    double horizon_start = 0.0;  // common interval actually compared
    double horizon_end = 0.0;
    long samples_compared = 0;
    double threshold = 0.0;
};

/// First time at which the error exceeds the threshold, or nothing.
std::optional<double> divergence_time(std::span<const double> times,
                                      std::span<const double> errors, double threshold);

/// Cartesian position-error metrics of trajectory `a` against reference `b`,
/// evaluated at a's sample times inside the common interval. The reference is
/// interpolated with cubic Hermite polynomials built from its stored
/// velocities. Both trajectories must be of the same kind; DisjointIntervals
/// when a body pair shares no time interval.
ErrorMetrics compare(const Trajectory& a, const Trajectory& b, double threshold);

}  // namespace threebody
