#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "threebody/compare.hpp"
#include "threebody/scenario.hpp"
#include "threebody/trajectory.hpp"
#include "threebody/validity.hpp"

namespace threebody {

struct RunOutputs {
    Scenario scenario;
    SystemState com_state;                       // scenario shifted to the COM frame
    std::vector<Trajectory> trajectories;        // one per requested mode
    ValidityReport validity;
    std::array<std::optional<SurrogateParams>, 3> params{};
    std::array<std::optional<BodyError>, 3> body_errors{};
    std::optional<ErrorMetrics> metrics;
    bool validity_failed = false;
};

/// Shift the scenario to the COM frame, produce the requested trajectories,
/// run all validity checks and monitoring, and compare when two modes are
/// given. Never mutates the scenario; strictness only affects the caller's
/// exit status, not what is computed.
RunOutputs run_modes(const Scenario& sc, const std::vector<RunMode>& modes,
                     double compare_threshold);

/// Single-mode run using the scenario's own solver.mode.
RunOutputs run_scenario(const Scenario& sc);

/// Trajectory CSV: header t,body,r,theta,r_dot,theta_dot,x,y and one row per
/// (sample, body), ordered by time then body, LF line endings, shortest
/// round-trip numbers.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Full report: validity, surrogate params, per-body errors, metrics and
/// integrator statistics, with lower_snake_case keys and stable ordering.
nlohmann::ordered_json report_json(const RunOutputs& outputs);

}  // namespace threebody
