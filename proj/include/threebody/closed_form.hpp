#pragma once

#include <array>
#include <optional>
#include <string>

#include "threebody/lambert_w.hpp"
#include "threebody/state.hpp"
#include "threebody/trajectory.hpp"

namespace threebody {

enum class SignMode { automatic, plus, minus };

// Every derived constant of one body's two-body surrogate. Built once from
// the initial data; all closed-form evaluation reads from here.
struct SurrogateParams {
    int body_index = 0;       // 1..3
    double mu = 0.0;          // companion mass sum
    double m_total = 0.0;
    double a_const = 0.0;     // A = 2 G m_total
    double b_const = 0.0;     // B = rdot_a0^2 - A / r_a0
    double k_const = 0.0;     // k = A / (2 B)
    int sign = +1;            // direction of the radial motion
    double c1 = 0.0;          // -(2B/A) exp(-(2B/A)(r_a0 - k ln r_a0))
    double c2 = 0.0;          // sign * 2 B sqrt(B) / A
    double c4 = 0.0;          // c1 exp(c2 t0)
    double c5 = 0.0;          // -c2
    double k1 = 0.0;          // -4 B^2 G mu / A^2
    double k_lin = 0.0;       // rdot_i0 - (k1/(2 c5)) (1 + 2 W(c4 e^{c5 t0}))
    double k_w = 0.0;         // k1 / (2 c5)
    double theta_coeff = 0.0; // 4 r_a0^2 thetadot_i0 B^2 / (c5 A^2)
    double r_a0 = 0.0;
    double rdot_a0 = 0.0;
    double r_i0 = 0.0;
    double rdot_i0 = 0.0;
    double theta_i0 = 0.0;
    double thetadot_i0 = 0.0;
    double t0 = 0.0;
    Branch branch = Branch::lower;
};

/// Derive all surrogate constants for body `body_index`. NonEscaping when
/// B <= 0 (the closed forms cover only unbound radial motion); under
/// automatic sign selection a zero radial rate is reported on the same error.
SurrogateParams build_params(double g, const std::array<double, 3>& masses, int body_index,
                             const SurrogateInitials& surrogate, const SurrogateInitials& body,
                             SignMode sign_mode, Branch branch, double t0);

/// Like build_params but never raises NonEscaping: with B <= 0 the
/// Lambert-dependent fields are left NaN so the validity checks can still
/// report on the raw constants.
SurrogateParams force_build_params(double g, const std::array<double, 3>& masses,
                                   int body_index, const SurrogateInitials& surrogate,
                                   const SurrogateInitials& body, SignMode sign_mode,
                                   Branch branch, double t0);

/// Right-hand side of the implicit radial equation:
/// sign sqrt(B) (t - t0) + r_a0 - k ln r_a0.
double f_of_t(const SurrogateParams& p, double t);

/// Lambert argument c4 e^{c5 t}; inside the validity horizon it lies in
/// [-1/e, 0).
double w_arg(const SurrogateParams& p, double t);

/// Surrogate separation -k W_branch(c4 e^{c5 t}). BranchDomain when the
/// argument has left [-1/e - slack, 0).
double r_a_closed(const SurrogateParams& p, double t);

/// Time at which the separation margin r_a > 2k expires: +infinity for
/// outward motion, ln(-2 e^{-2} / c4) / c5 for inward motion. AlreadyInvalid
/// when r_a0 <= 2k at t0.
double validity_horizon(const SurrogateParams& p);

/// The printed closed-form body radius, evaluated verbatim (paired t and t0
/// terms, so radius_closed(p, t0) == r_i0 exactly).
double radius_closed(const SurrogateParams& p, double t);

/// The printed closed-form body angle, evaluated verbatim.
double theta_closed(const SurrogateParams& p, double t);

/// Exact time derivatives of the printed expressions (used for trajectory
/// rate columns and interpolation).
double radius_closed_rate(const SurrogateParams& p, double t);
double theta_closed_rate(const SurrogateParams& p, double t);

struct RadialValue {
    double r = 0.0;
    double r_dot = 0.0;
};

/// Self-consistent radius: double quadrature of r'' = -G mu / r_a_closed^2
/// from (r_i0, rdot_i0), each quadrature held to relative error quad_tol.
RadialValue radius_semi_analytic(const SurrogateParams& p, double t, double quad_tol);

/// Self-consistent angle: theta_i0 + r_i0^2 thetadot_i0 * integral of
/// r(tau)^-2 with r from the radius quadrature.
double theta_semi_analytic(const SurrogateParams& p, double t, double quad_tol);

/// r_a_closed - k ln r_a_closed - f(t); near zero iff the Lambert inversion
/// of the implicit equation is exact on the chosen branch.
double implicit_residual(const SurrogateParams& p, double t);

/// Incremental evaluator for the semi-analytic solution along increasing
/// times. Shares quadrature work between consecutive samples of a
/// trajectory; a fresh instance queried at a single time is exactly the
/// point operation.
class SemiAnalyticPath {
public:
    SemiAnalyticPath(const SurrogateParams& p, double quad_tol);

    /// Advance to time t >= previous time and return (r, r_dot).
    RadialValue radius_at(double t);
    /// Advance to time t and return theta (also advances the radius).
    double theta_at(double t);

    long evaluations() const { return evaluations_; }

private:
    void advance(double t);

    SurrogateParams params_;
    double quad_tol_;
    double node_t_;
    double node_r_;
    double node_r_dot_;
    double node_theta_;
    long evaluations_ = 0;
};

enum class SolveMode { paper_closed_form, semi_analytic };

struct SolveOptions {
    SolveMode mode = SolveMode::paper_closed_form;
    SignMode sign_mode = SignMode::automatic;
    Branch branch = Branch::lower;
    Convention convention = Convention::vector;
    double horizon = 10.0;   // duration past t0
    int samples = 100;
    double quad_tol = 1e-8;
};

struct BodyError {
    std::string kind;     // "non_escaping", "already_invalid", "zero_radial_rate"
    std::string message;
};

struct SolveResult {
    Trajectory trajectory;
    std::array<std::optional<SurrogateParams>, 3> params;
    std::array<std::optional<BodyError>, 3> body_errors;
};

/// Build surrogate params for all three bodies and evaluate the requested
/// closed-form mode on a uniform grid over [t0, min(t0 + horizon,
/// validity_horizon)] per body. A body whose surrogate is non-escaping or
/// already outside the margin is recorded in body_errors and skipped; the
/// other bodies still solve.
SolveResult solve_system(const SystemState& sys, const SolveOptions& options);

const char* solve_mode_name(SolveMode mode);

}  // namespace threebody
