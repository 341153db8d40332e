#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>

#include "threebody/closed_form.hpp"
#include "threebody/state.hpp"
#include "threebody/trajectory.hpp"

namespace threebody {

struct SurrogateCheck {
    bool b_positive = false;
    bool margin_ok = false;
    double margin_ratio = 0.0;  // r_a0 B / A, dimensionless; margin_ok iff > 1
};

struct Violation {
    int body = 0;  // 1..3
    double time = 0.0;
    std::string condition;
};

// Per-condition solvability report. The surrogate block and the horizons are
// filled only once params are available; check_preconditions leaves them
// empty (horizons unbounded).
struct ValidityReport {
    std::array<bool, 3> angular_rate_ok{true, true, true};
    std::array<bool, 3> finite_positions_ok{true, true, true};
    std::array<std::optional<SurrogateCheck>, 3> surrogate{};
    std::array<double, 3> horizon{};  // +infinity when unbounded
    std::optional<Violation> first_violation{};

    ValidityReport();
    bool all_ok() const;
};

inline constexpr double kNoRadiusBound = std::numeric_limits<double>::infinity();

/// Initial-time checks: |theta_dot_i| below the angular-rate threshold and
/// finite coordinates (optionally bounded by r_max). Reports only, never
/// raises.
ValidityReport check_preconditions(const SystemState& sys,
                                   double angular_rate_threshold = 1.0,
                                   double r_max = kNoRadiusBound);

/// Escape and margin conditions of one surrogate. Accepts params produced by
/// force_build_params, so B <= 0 is reportable rather than an error.
SurrogateCheck check_surrogate(const SurrogateParams& p);

/// Scan a sampled trajectory in time order for the earliest violation of any
/// condition and derive per-body horizons as the minimum of the analytic
/// validity horizon and the first sampled violation. `masses` are needed to
/// form companion barycenters when checking the separation margin on
/// body-state trajectories.
ValidityReport monitor(const Trajectory& traj,
                       const std::array<std::optional<SurrogateParams>, 3>& params,
                       const std::array<double, 3>& masses,
                       double angular_rate_threshold = 1.0,
                       double r_max = kNoRadiusBound);

}  // namespace threebody
