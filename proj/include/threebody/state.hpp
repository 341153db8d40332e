#pragma once

#include <array>
#include <cmath>

namespace threebody {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Planar kinematic state of one body in polar coordinates. Angles are kept
// unnormalized so that theta(t) histories accumulate continuously past +-pi.
struct PolarState {
    double r = 0.0;
    double theta = 0.0;
    double r_dot = 0.0;
    double theta_dot = 0.0;
};

struct Body {
    double mass = 0.0;
    PolarState state;
};

struct SystemState {
    double g_const = 0.0;
    std::array<Body, 3> bodies;
    double t = 0.0;
};

struct CartesianState {
    Vec2 position;
    Vec2 velocity;
};

/// Position (r cos t, r sin t) and velocity from a polar state.
CartesianState polar_to_cartesian(const PolarState& s);

/// Inverse of polar_to_cartesian, theta in (-pi, pi]. DegenerateRadius at
/// |position| = 0, where the angle is undefined.
PolarState cartesian_to_polar(Vec2 position, Vec2 velocity);

/// Squared separation r_a^2 + r_b^2 - 2 r_a r_b cos(theta_b - theta_a)
/// evaluated in polar form (law of cosines), not via Cartesian differencing.
double separation_sq(const PolarState& a, const PolarState& b);

/// |e_r(theta+d) - e_r(theta)| = sqrt(2) sqrt(1 - cos d), in [0, 2].
double unit_diff_norm(double delta_theta);

struct UnitResolution {
    double parallel;
    double perpendicular;
};

/// Components of the radial unit vector at theta_src along the radial and
/// transverse unit vectors at theta_dst.
UnitResolution resolve_unit(double theta_src, double theta_dst);

/// Mass-weighted mean position and velocity of two bodies. ZeroMassPair when
/// the combined mass vanishes.
CartesianState pair_barycenter(double m_j, const PolarState& s_j,
                               double m_k, const PolarState& s_k);

/// Translate and boost so the mass-weighted position and momentum sums are
/// zero. Each body's angle keeps the winding closest to its original value.
SystemState to_com_frame(const SystemState& sys);

// How the initial separation coordinate of a body's two-body surrogate is
// read off the system. `vector` uses the geometric distance to the companion
// barycenter and its range rate; `paper` identifies the separation with the
// body's own radius and radial rate.
enum class Convention { vector, paper };

struct SurrogateInitials {
    double r0 = 0.0;
    double r_dot0 = 0.0;
    double theta0 = 0.0;
    double theta_dot0 = 0.0;
};

/// Initial data of body `body_index`'s surrogate (body_index in 1..3).
/// theta0/theta_dot0 are the body's own angle and angular rate under both
/// conventions. DegenerateRadius when the body sits on the barycenter.
SurrogateInitials surrogate_initials(const SystemState& sys, int body_index,
                                     Convention convention);

/// Indices (1-based) of the two companions of body i (1-based).
std::array<int, 2> companion_indices(int body_index);

}  // namespace threebody
