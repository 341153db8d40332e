#include "threebody/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

std::array<CartesianState, 3> to_cartesian(const SystemState& sys) {
    return {polar_to_cartesian(sys.bodies[0].state),
            polar_to_cartesian(sys.bodies[1].state),
            polar_to_cartesian(sys.bodies[2].state)};
}

std::array<Vec2, 3> accel_newton_cart(double g, const std::array<double, 3>& m,
                                      const std::array<Vec2, 3>& pos) {
    std::array<Vec2, 3> acc{};
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            Vec2 d = pos[j] - pos[i];
            double r2 = d.norm_sq();
            if (r2 == 0.0)
                throw CollisionSingularity("accel_newton: bodies " + std::to_string(i + 1) +
                                           " and " + std::to_string(j + 1) +
                                           " at zero separation");
            double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
            acc[i] += d * (g * m[j] * inv_r3);
            acc[j] -= d * (g * m[i] * inv_r3);
        }
    }
    return acc;
}

// Pairwise term of the printed direction law: magnitude G m / |dr|^2 along
// (e_j - e_i) / |e_j - e_i|. Signs follow the i<j ordering of the system:
// the term enters body i with +, body j with -.
std::array<Vec2, 3> accel_paper_cart(double g, const std::array<double, 3>& m,
                                     const std::array<double, 3>& r,
                                     const std::array<double, 3>& theta) {
    std::array<Vec2, 3> unit;
    for (int i = 0; i < 3; ++i) unit[i] = {std::cos(theta[i]), std::sin(theta[i])};

    std::array<Vec2, 3> acc{};
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            double sep_sq = r[i] * r[i] + r[j] * r[j] -
                            2.0 * r[i] * r[j] * std::cos(theta[j] - theta[i]);
            if (sep_sq == 0.0)
                throw CollisionSingularity("accel_paper: bodies " + std::to_string(i + 1) +
                                           " and " + std::to_string(j + 1) +
                                           " at zero separation");
            double udn = unit_diff_norm(theta[j] - theta[i]);
            if (udn == 0.0)
                throw CollinearSingularity("accel_paper: bodies " + std::to_string(i + 1) +
                                           " and " + std::to_string(j + 1) +
                                           " share a polar angle");
            Vec2 dir = (unit[j] - unit[i]) / udn;
            acc[i] += dir * (g * m[j] / sep_sq);
            acc[j] -= dir * (g * m[i] / sep_sq);
        }
    }
    return acc;
}

// Continuation of an angle history: principal-value angle shifted by whole
// turns to land nearest the previous sample.
double unwrap(double theta, double previous) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return theta + two_pi * std::round((previous - theta) / two_pi);
}

ScalarTrajectory integrate_surrogate(double g, double m_total,
                                     const SurrogateInitials& initials,
                                     double t0, double t_end,
                                     std::span<const double> sample_times,
                                     const OdeOptions& options, bool keep_centrifugal) {
    if (!(initials.r0 > 0.0))
        throw DegenerateRadius("integrate_surrogate: initial separation must be positive");

    const double angular_momentum = initials.r0 * initials.r0 * initials.theta_dot0;

    OdeRhs rhs;
    std::vector<double> y0;
    if (keep_centrifugal) {
        // y = (r, r_dot, theta, theta_dot)
        y0 = {initials.r0, initials.r_dot0, initials.theta0, initials.theta_dot0};
        rhs = [g, m_total](double, std::span<const double> y, std::span<double> dydt) {
            double r = y[0];
            if (!(r > 0.0))
                throw StepFailure("integrate_surrogate_full: radius reached zero");
            dydt[0] = y[1];
            dydt[1] = r * y[3] * y[3] - g * m_total / (r * r);
            dydt[2] = y[3];
            dydt[3] = -2.0 * y[1] * y[3] / r;
        };
    } else {
        // y = (r, r_dot, theta); theta_dot is slaved to the angular momentum.
        y0 = {initials.r0, initials.r_dot0, initials.theta0};
        rhs = [g, m_total, angular_momentum](double, std::span<const double> y,
                                             std::span<double> dydt) {
            double r = y[0];
            if (!(r > 0.0))
                throw StepFailure("integrate_surrogate_radial: radius reached zero");
            dydt[0] = y[1];
            dydt[1] = -g * m_total / (r * r);
            dydt[2] = angular_momentum / (r * r);
        };
    }

    OdeResult sol = integrate_ode(rhs, y0, t0, t_end, sample_times, options);

    ScalarTrajectory out;
    out.stats = sol.stats;
    out.times = std::move(sol.times);
    out.states.reserve(out.times.size());
    for (const auto& y : sol.states) {
        PolarState s;
        s.r = y[0];
        s.r_dot = y[1];
        s.theta = y[2];
        s.theta_dot = keep_centrifugal ? y[3] : angular_momentum / (y[0] * y[0]);
        out.states.push_back(s);
    }
    return out;
}

}  // namespace

std::array<Vec2, 3> accel_newton(const SystemState& sys) {
    auto cart = to_cartesian(sys);
    return accel_newton_cart(sys.g_const,
                             {sys.bodies[0].mass, sys.bodies[1].mass, sys.bodies[2].mass},
                             {cart[0].position, cart[1].position, cart[2].position});
}

std::array<Vec2, 3> accel_paper(const SystemState& sys) {
    return accel_paper_cart(sys.g_const,
                            {sys.bodies[0].mass, sys.bodies[1].mass, sys.bodies[2].mass},
                            {sys.bodies[0].state.r, sys.bodies[1].state.r,
                             sys.bodies[2].state.r},
                            {sys.bodies[0].state.theta, sys.bodies[1].state.theta,
                             sys.bodies[2].state.theta});
}

Trajectory integrate(ForceField field, const SystemState& sys, double t_end,
                     std::span<const double> sample_times, const OdeOptions& options) {
    const std::array<double, 3> masses{sys.bodies[0].mass, sys.bodies[1].mass,
                                       sys.bodies[2].mass};
    const double g = sys.g_const;

    // State layout: positions then velocities, (x1,y1,x2,y2,x3,y3, vx1,...).
    std::vector<double> y0(12);
    auto cart = to_cartesian(sys);
    for (int i = 0; i < 3; ++i) {
        y0[2 * i] = cart[i].position.x;
        y0[2 * i + 1] = cart[i].position.y;
        y0[6 + 2 * i] = cart[i].velocity.x;
        y0[6 + 2 * i + 1] = cart[i].velocity.y;
    }

    OdeRhs rhs = [g, masses, field](double, std::span<const double> y,
                                    std::span<double> dydt) {
        std::array<Vec2, 3> pos{{{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}}};
        std::array<Vec2, 3> acc;
        if (field == ForceField::newton) {
            acc = accel_newton_cart(g, masses, pos);
        } else {
            std::array<double, 3> r, theta;
            for (int i = 0; i < 3; ++i) {
                r[i] = pos[i].norm();
                if (r[i] == 0.0)
                    throw DegenerateRadius("integrate: body at the origin under paper field");
                theta[i] = std::atan2(pos[i].y, pos[i].x);
            }
            acc = accel_paper_cart(g, masses, r, theta);
        }
        for (int i = 0; i < 3; ++i) {
            dydt[2 * i] = y[6 + 2 * i];
            dydt[2 * i + 1] = y[6 + 2 * i + 1];
            dydt[6 + 2 * i] = acc[i].x;
            dydt[6 + 2 * i + 1] = acc[i].y;
        }
    };

    OdeResult sol = integrate_ode(rhs, y0, sys.t, t_end, sample_times, options);

    Trajectory out;
    out.kind = TrajectoryKind::body_states;
    out.mode = field == ForceField::newton ? "oracle_newton" : "oracle_paper";
    out.stats = sol.stats;

    std::array<double, 3> prev_theta{sys.bodies[0].state.theta, sys.bodies[1].state.theta,
                                     sys.bodies[2].state.theta};
    std::array<BodyTrack, 3> tracks;
    for (auto& tr : tracks) {
        tr.times = sol.times;
        tr.horizon = sol.times.empty() ? sys.t : sol.times.back();
        tr.states.reserve(sol.times.size());
    }
    for (std::size_t s = 0; s < sol.times.size(); ++s) {
        const auto& y = sol.states[s];
        for (int i = 0; i < 3; ++i) {
            Vec2 pos{y[2 * i], y[2 * i + 1]};
            Vec2 vel{y[6 + 2 * i], y[6 + 2 * i + 1]};
            PolarState ps;
            if (sol.times[s] == sys.t) {
                ps = sys.bodies[i].state;  // sample at t0 is the exact input
            } else {
                ps = cartesian_to_polar(pos, vel);
                ps.theta = unwrap(ps.theta, prev_theta[i]);
            }
            prev_theta[i] = ps.theta;
            tracks[i].states.push_back(ps);
        }
    }
    for (int i = 0; i < 3; ++i) out.tracks[i] = std::move(tracks[i]);
    return out;
}

ConservedQuantities conserved(const SystemState& sys) {
    auto cart = to_cartesian(sys);
    ConservedQuantities q;
    double m_total = 0.0;
    for (int i = 0; i < 3; ++i) {
        double m = sys.bodies[i].mass;
        m_total += m;
        q.energy += 0.5 * m * cart[i].velocity.norm_sq();
        q.angular_momentum += m * cart[i].position.cross(cart[i].velocity);
        q.linear_momentum += cart[i].velocity * m;
        q.com += cart[i].position * m;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            double sep = (cart[j].position - cart[i].position).norm();
            if (sep == 0.0)
                throw CollisionSingularity("conserved: zero separation");
            q.energy -= sys.g_const * sys.bodies[i].mass * sys.bodies[j].mass / sep;
        }
    }
    if (m_total > 0.0) q.com = q.com / m_total;
    return q;
}

ScalarTrajectory integrate_surrogate_full(double g, double m_total,
                                          const SurrogateInitials& initials,
                                          double t0, double t_end,
                                          std::span<const double> sample_times,
                                          const OdeOptions& options) {
    return integrate_surrogate(g, m_total, initials, t0, t_end, sample_times, options, true);
}

ScalarTrajectory integrate_surrogate_radial(double g, double m_total,
                                            const SurrogateInitials& initials,
                                            double t0, double t_end,
                                            std::span<const double> sample_times,
                                            const OdeOptions& options) {
    return integrate_surrogate(g, m_total, initials, t0, t_end, sample_times, options, false);
}

}  // namespace threebody
