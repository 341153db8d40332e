#pragma once

#include <array>
#include <span>

#include "threebody/rk.hpp"
#include "threebody/state.hpp"
#include "threebody/trajectory.hpp"

namespace threebody {

// Which pairwise force law drives an integration. `newton` is standard
// inverse-square gravity along the separation vector. `paper` keeps the
// inverse-square magnitude but directs each pair term along the normalized
// difference of the two radial unit vectors; the two laws coincide exactly
// when the interacting pair has equal radii.
enum class ForceField { newton, paper };

/// Newtonian accelerations of all three bodies. CollisionSingularity when any
/// pairwise separation is zero. The returned accelerations satisfy
/// sum_i m_i a_i = 0 up to rounding.
std::array<Vec2, 3> accel_newton(const SystemState& sys);

/// Accelerations under the unit-vector-difference direction law. Raises
/// CollinearSingularity when two bodies share a polar angle (the direction is
/// undefined there) and CollisionSingularity at zero separation.
std::array<Vec2, 3> accel_paper(const SystemState& sys);

/// Integrate the chosen field in Cartesian coordinates from sys.t to t_end,
/// sampling at `sample_times`. Output states are re-expressed in polar form
/// per body, with each angle history unwrapped continuously from the input
/// angle. All three tracks share the sample grid.
Trajectory integrate(ForceField field, const SystemState& sys, double t_end,
                     std::span<const double> sample_times, const OdeOptions& options);

struct ConservedQuantities {
    double energy = 0.0;            // kinetic + pairwise potential
    double angular_momentum = 0.0;  // z-component about the origin
    Vec2 linear_momentum;
    Vec2 com;
};

/// Energy, angular momentum, momentum and mass center of a state.
/// CollisionSingularity when a pairwise separation is zero.
ConservedQuantities conserved(const SystemState& sys);

/// Integrate the full surrogate radial equation
///   r'' = r theta_dot^2 - G m_total / r^2,  theta'' = -2 r_dot theta_dot / r
/// from initials at t0. The angular momentum r^2 theta_dot is a first
/// integral and is tracked as a diagnostic, not enforced.
ScalarTrajectory integrate_surrogate_full(double g, double m_total,
                                          const SurrogateInitials& initials,
                                          double t0, double t_end,
                                          std::span<const double> sample_times,
                                          const OdeOptions& options);

/// Integrate the purely radial surrogate equation r'' = -G m_total / r^2
/// (centrifugal term dropped); theta is recovered from the conserved
/// r^2 theta_dot = r0^2 theta_dot0.
ScalarTrajectory integrate_surrogate_radial(double g, double m_total,
                                            const SurrogateInitials& initials,
                                            double t0, double t_end,
                                            std::span<const double> sample_times,
                                            const OdeOptions& options);

}  // namespace threebody
