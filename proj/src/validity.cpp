#include "threebody/validity.hpp"

#include <cmath>
#include <limits>

#include "threebody/errors.hpp"

namespace threebody {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ValidityReport::ValidityReport() {
    horizon.fill(kInf);
}

bool ValidityReport::all_ok() const {
    for (int i = 0; i < 3; ++i) {
        if (!angular_rate_ok[i] || !finite_positions_ok[i]) return false;
        if (surrogate[i] && !(surrogate[i]->b_positive && surrogate[i]->margin_ok))
            return false;
    }
    return !first_violation.has_value();
}

ValidityReport check_preconditions(const SystemState& sys, double angular_rate_threshold,
                                   double r_max) {
    ValidityReport rep;
    for (int i = 0; i < 3; ++i) {
        const PolarState& s = sys.bodies[i].state;
        rep.angular_rate_ok[i] = std::fabs(s.theta_dot) < angular_rate_threshold;
        rep.finite_positions_ok[i] =
            std::isfinite(s.r) && std::isfinite(s.theta) && s.r <= r_max;
    }
    return rep;
}

SurrogateCheck check_surrogate(const SurrogateParams& p) {
    SurrogateCheck c;
    c.b_positive = p.b_const > 0.0;
    c.margin_ratio = p.r_a0 * p.b_const / p.a_const;
    c.margin_ok = c.margin_ratio > 1.0;
    return c;
}

ValidityReport monitor(const Trajectory& traj,
                       const std::array<std::optional<SurrogateParams>, 3>& params,
                       const std::array<double, 3>& masses,
                       double angular_rate_threshold, double r_max) {
    ValidityReport rep;

    double start_time = kInf;
    for (const auto& track : traj.tracks)
        if (track && !track->times.empty())
            start_time = std::min(start_time, track->times.front());
    if (!std::isfinite(start_time)) start_time = 0.0;

    // Analytic horizons from the params, where they exist and are escaping.
    std::array<double, 3> analytic{kInf, kInf, kInf};
    for (int i = 0; i < 3; ++i) {
        if (!params[i]) {
            analytic[i] = start_time;  // non-escaping from the outset
            continue;
        }
        rep.surrogate[i] = check_surrogate(*params[i]);
        if (!rep.surrogate[i]->b_positive) {
            analytic[i] = start_time;
            continue;
        }
        try {
            analytic[i] = validity_horizon(*params[i]);
        } catch (const AlreadyInvalid&) {
            analytic[i] = params[i]->t0;
        }
    }

    // Whether the margin can be checked geometrically: body-state tracks need
    // all three bodies on a shared grid to form companion barycenters.
    bool shared_grid = traj.tracks[0] && traj.tracks[1] && traj.tracks[2] &&
                       traj.tracks[1]->times == traj.tracks[0]->times &&
                       traj.tracks[2]->times == traj.tracks[0]->times;

    std::array<double, 3> first_bad{kInf, kInf, kInf};

    auto record = [&](int body, double time, const char* condition) {
        if (time < first_bad[body]) first_bad[body] = time;
        if (!rep.first_violation || time < rep.first_violation->time ||
            (time == rep.first_violation->time && body + 1 < rep.first_violation->body)) {
            rep.first_violation = Violation{body + 1, time, condition};
        }
    };

    for (int i = 0; i < 3; ++i) {
        if (!traj.tracks[i]) continue;
        const BodyTrack& track = *traj.tracks[i];
        for (std::size_t s = 0; s < track.times.size(); ++s) {
            double t = track.times[s];
            const PolarState& st = track.states[s];
            if (traj.kinematic_rates &&
                !(std::fabs(st.theta_dot) < angular_rate_threshold)) {
                rep.angular_rate_ok[i] = false;
                record(i, t, "angular_rate");
            }
            if (!std::isfinite(st.r) || !std::isfinite(st.theta) || st.r > r_max) {
                rep.finite_positions_ok[i] = false;
                record(i, t, "finite_position");
            }
            if (!params[i] || !(params[i]->b_const > 0.0)) continue;

            double margin_ratio = kInf;
            if (traj.kind == TrajectoryKind::surrogate_separation) {
                margin_ratio = st.r * params[i]->b_const / params[i]->a_const;
            } else if (traj.surrogate_driven) {
                // Surrogate-model trajectories carry the model's own
                // separation; evaluate it analytically.
                try {
                    margin_ratio = r_a_closed(*params[i], t) * params[i]->b_const /
                                   params[i]->a_const;
                } catch (const BranchDomain&) {
                    margin_ratio = 0.0;  // past the model's domain entirely
                }
            } else if (shared_grid) {
                auto [j, k] = companion_indices(i + 1);
                CartesianState self = polar_to_cartesian(st);
                CartesianState bary =
                    pair_barycenter(masses[j - 1], traj.tracks[j - 1]->states[s],
                                    masses[k - 1], traj.tracks[k - 1]->states[s]);
                double r_a = (self.position - bary.position).norm();
                margin_ratio = r_a * params[i]->b_const / params[i]->a_const;
            }
            // Rounding slack so a sample exactly at the analytic horizon,
            // where the ratio is 1 by construction, is still flagged.
            if (margin_ratio <= 1.0 + 1e-12) record(i, t, "margin");
        }
    }

    for (int i = 0; i < 3; ++i) rep.horizon[i] = std::min(analytic[i], first_bad[i]);
    return rep;
}

}  // namespace threebody
