#include "threebody/state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

// Shift `theta` by whole turns so it lands as close as possible to `anchor`.
double rewind_angle(double theta, double anchor) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return theta + two_pi * std::round((anchor - theta) / two_pi);
}

}  // namespace

CartesianState polar_to_cartesian(const PolarState& s) {
    double c = std::cos(s.theta);
    double sn = std::sin(s.theta);
    Vec2 pos{s.r * c, s.r * sn};
    Vec2 vel{s.r_dot * c - s.r * s.theta_dot * sn,
             s.r_dot * sn + s.r * s.theta_dot * c};
    return {pos, vel};
}

PolarState cartesian_to_polar(Vec2 position, Vec2 velocity) {
    double r = position.norm();
    if (r == 0.0)
        throw DegenerateRadius("cartesian_to_polar: angle undefined at zero radius");
    PolarState s;
    s.r = r;
    s.theta = std::atan2(position.y, position.x);
    s.r_dot = position.dot(velocity) / r;
    s.theta_dot = position.cross(velocity) / (r * r);
    return s;
}

double separation_sq(const PolarState& a, const PolarState& b) {
    return a.r * a.r + b.r * b.r - 2.0 * a.r * b.r * std::cos(b.theta - a.theta);
}

double unit_diff_norm(double delta_theta) {
    double u = 1.0 - std::cos(delta_theta);
    if (u < 0.0) u = 0.0;  // rounding can push 1 - cos just below zero
    return std::sqrt(2.0) * std::sqrt(u);
}

UnitResolution resolve_unit(double theta_src, double theta_dst) {
    double d = theta_src - theta_dst;
    return {std::cos(d), std::sin(d)};
}

CartesianState pair_barycenter(double m_j, const PolarState& s_j,
                               double m_k, const PolarState& s_k) {
    double m = m_j + m_k;
    if (m == 0.0)
        throw ZeroMassPair("pair_barycenter: combined mass is zero");
    CartesianState a = polar_to_cartesian(s_j);
    CartesianState b = polar_to_cartesian(s_k);
    return {(a.position * m_j + b.position * m_k) / m,
            (a.velocity * m_j + b.velocity * m_k) / m};
}

SystemState to_com_frame(const SystemState& sys) {
    double m_total = 0.0;
    Vec2 com{}, momentum{};
    std::array<CartesianState, 3> cart;
    for (int i = 0; i < 3; ++i) {
        cart[i] = polar_to_cartesian(sys.bodies[i].state);
        double m = sys.bodies[i].mass;
        m_total += m;
        com += cart[i].position * m;
        momentum += cart[i].velocity * m;
    }
    if (m_total == 0.0)
        throw ZeroMassPair("to_com_frame: total mass is zero");
    com = com / m_total;
    Vec2 drift = momentum / m_total;

    SystemState out = sys;
    for (int i = 0; i < 3; ++i) {
        Vec2 pos = cart[i].position - com;
        Vec2 vel = cart[i].velocity - drift;
        if (pos.norm() == 0.0)
            throw DegenerateRadius("to_com_frame: body " + std::to_string(i + 1) +
                                   " sits on the barycenter");
        PolarState s = cartesian_to_polar(pos, vel);
        s.theta = rewind_angle(s.theta, sys.bodies[i].state.theta);
        out.bodies[i].state = s;
    }
    return out;
}

std::array<int, 2> companion_indices(int body_index) {
    switch (body_index) {
        case 1: return {2, 3};
        case 2: return {1, 3};
        default: return {1, 2};
    }
}

SurrogateInitials surrogate_initials(const SystemState& sys, int body_index,
                                     Convention convention) {
    const auto [j, k] = companion_indices(body_index);
    const Body& bi = sys.bodies[body_index - 1];
    const Body& bj = sys.bodies[j - 1];
    const Body& bk = sys.bodies[k - 1];

    SurrogateInitials out;
    out.theta0 = bi.state.theta;
    out.theta_dot0 = bi.state.theta_dot;

    if (convention == Convention::paper) {
        out.r0 = bi.state.r;
        out.r_dot0 = bi.state.r_dot;
        return out;
    }

    CartesianState self = polar_to_cartesian(bi.state);
    CartesianState bary = pair_barycenter(bj.mass, bj.state, bk.mass, bk.state);
    Vec2 dpos = self.position - bary.position;
    Vec2 dvel = self.velocity - bary.velocity;
    double sep = dpos.norm();
    if (sep == 0.0)
        throw DegenerateRadius("surrogate_initials: body " + std::to_string(body_index) +
                               " coincides with its companion barycenter");
    out.r0 = sep;
    out.r_dot0 = dpos.dot(dvel) / sep;  // range rate, not relative speed
    return out;
}

}  // namespace threebody
