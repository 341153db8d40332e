#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "threebody/state.hpp"

namespace threebody {

// What the tracks of a trajectory describe: the bodies' own polar states, or
// each body's surrogate separation coordinate (distance to the companion
// barycenter and the paired angle).
enum class TrajectoryKind { body_states, surrogate_separation };

struct IntegratorStats {
    long steps = 0;           // accepted steps
    long rejected_steps = 0;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
};

// Sampled history of a single polar coordinate pair.
struct ScalarTrajectory {
    std::vector<double> times;
    std::vector<PolarState> states;
    IntegratorStats stats;
};

// One body's sampled track. Tracks of the same trajectory may cover
// different spans when validity horizons clamp individual bodies.
struct BodyTrack {
    std::vector<double> times;
    std::vector<PolarState> states;
    double horizon = 0.0;  // last time actually covered
};

struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::body_states;
    std::string mode;
    std::array<std::optional<BodyTrack>, 3> tracks;  // slot i holds body i+1
    IntegratorStats stats;
    // Whether the rate columns describe the modeled body rates. False for the
    // printed closed forms, whose rate columns are derivatives of a
    // position-only formula and are not subject to the angular-rate condition.
    bool kinematic_rates = true;
    // Whether the tracks follow the per-body surrogate model; then the
    // separation margin along the trajectory is the model's own r_a rather
    // than the geometric body-to-barycenter distance.
    bool surrogate_driven = false;
};

const char* trajectory_kind_name(TrajectoryKind kind);

}  // namespace threebody
