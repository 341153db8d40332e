#include "threebody/closed_form.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Adaptive Simpson quadrature with an absolute tolerance and a shared
// evaluation budget.
class Quadrature {
public:
    explicit Quadrature(long budget) : budget_(budget) {}

    double integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol) {
        if (a == b) return 0.0;
        double fa = eval(f, a);
        double fm = eval(f, 0.5 * (a + b));
        double fb = eval(f, b);
        double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(f, a, b, fa, fm, fb, whole, abs_tol, 0);
    }

    long evaluations() const { return evaluations_; }

private:
    double eval(const std::function<double(double)>& f, double x) {
        if (++evaluations_ > budget_)
            throw QuadratureFailure("quadrature: evaluation budget exhausted");
        return f(x);
    }

    double recurse(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double abs_tol, int depth) {
        double m = 0.5 * (a + b);
        double flm = eval(f, 0.5 * (a + m));
        double frm = eval(f, 0.5 * (m + b));
        double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double delta = left + right - whole;
        if (depth >= 48)
            throw QuadratureFailure("quadrature: recursion depth exhausted");
        if (std::fabs(delta) <= 15.0 * abs_tol || std::fabs(b - a) < 1e-14 * (1.0 + std::fabs(a)))
            return left + right + delta / 15.0;
        return recurse(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth + 1) +
               recurse(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth + 1);
    }

    long budget_;
    long evaluations_ = 0;
};

// Relative-tolerance wrapper: a crude whole-interval estimate sets the
// absolute budget.
double integrate_relative(Quadrature& quad, const std::function<double(double)>& f,
                          double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    double rough = std::fabs((b - a) / 6.0 *
                             (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)));
    double abs_tol = rel_tol * std::max(rough, 1e-300);
    return quad.integrate(f, a, b, abs_tol);
}

double require_branch_domain(double z) {
    constexpr double inv_e = 0.36787944117144233;  // 1/e
    if (z >= 0.0 || z < -inv_e - kBranchPointSlack)
        throw BranchDomain("lambert argument " + std::to_string(z) +
                           " outside [-1/e, 0)");
    return z;
}

double branch_w_at(const SurrogateParams& p, double t) {
    return lambert_w(p.branch, require_branch_domain(w_arg(p, t)));
}

// Bracket of the printed radius formula: W^4/2 + W^3 + W^2/2.
double radius_bracket(double w) {
    double w2 = w * w;
    return 0.5 * w2 * w2 + w2 * w + 0.5 * w2;
}

// Polynomial of the printed angle formula: (1 + 2W) W^2.
double theta_poly(double w) {
    return (1.0 + 2.0 * w) * w * w;
}

SurrogateParams build_impl(double g, const std::array<double, 3>& masses, int body_index,
                           const SurrogateInitials& surrogate, const SurrogateInitials& body,
                           SignMode sign_mode, Branch branch, double t0, bool forced) {
    if (body_index < 1 || body_index > 3)
        throw Error("build_params: body index must be 1..3");
    if (!(surrogate.r0 > 0.0))
        throw DegenerateRadius("build_params: r_a0 must be positive");

    SurrogateParams p;
    p.body_index = body_index;
    p.m_total = masses[0] + masses[1] + masses[2];
    const auto [j, k] = companion_indices(body_index);
    p.mu = masses[j - 1] + masses[k - 1];
    p.r_a0 = surrogate.r0;
    p.rdot_a0 = surrogate.r_dot0;
    p.r_i0 = body.r0;
    p.rdot_i0 = body.r_dot0;
    p.theta_i0 = body.theta0;
    p.thetadot_i0 = body.theta_dot0;
    p.t0 = t0;
    p.branch = branch;

    p.a_const = 2.0 * g * p.m_total;
    p.b_const = p.rdot_a0 * p.rdot_a0 - p.a_const / p.r_a0;

    bool zero_rate = sign_mode == SignMode::automatic && p.rdot_a0 == 0.0;
    if (p.b_const <= 0.0 && !forced) {
        std::string msg = "body " + std::to_string(body_index) +
                          ": B = " + std::to_string(p.b_const) +
                          " <= 0, radial motion is not unbound";
        if (zero_rate)
            msg += " (zero radial rate under automatic sign selection)";
        throw NonEscaping(msg, zero_rate);
    }

    switch (sign_mode) {
        case SignMode::plus: p.sign = +1; break;
        case SignMode::minus: p.sign = -1; break;
        case SignMode::automatic: p.sign = p.rdot_a0 >= 0.0 ? +1 : -1; break;
    }

    if (p.b_const <= 0.0) {
        p.k_const = p.c1 = p.c2 = p.c4 = p.c5 = kNaN;
        p.k1 = p.k_lin = p.k_w = p.theta_coeff = kNaN;
        return p;
    }

    p.k_const = p.a_const / (2.0 * p.b_const);
    double two_b_over_a = 2.0 * p.b_const / p.a_const;
    p.c2 = p.sign * two_b_over_a * std::sqrt(p.b_const);
    p.c5 = -p.c2;
    p.c1 = -two_b_over_a *
           std::exp(-two_b_over_a * (p.r_a0 - p.k_const * std::log(p.r_a0)));
    p.c4 = p.c1 * std::exp(p.c2 * t0);
    p.k1 = -4.0 * p.b_const * p.b_const * g * p.mu / (p.a_const * p.a_const);
    p.k_w = p.k1 / (2.0 * p.c5);
    double w_t0;
    try {
        // Underflows for r_a0 / k beyond ~700: the c4 e^{c5 t} form cannot
        // represent such separations in 64-bit floating point.
        w_t0 = branch_w_at(p, t0);
    } catch (const BranchDomain&) {
        if (!forced) throw;
        p.k_lin = p.theta_coeff = kNaN;
        return p;
    }
    p.k_lin = p.rdot_i0 - p.k_w * (1.0 + 2.0 * w_t0);
    p.theta_coeff = 4.0 * p.r_a0 * p.r_a0 * p.thetadot_i0 * p.b_const * p.b_const /
                    (p.c5 * p.a_const * p.a_const);
    return p;
}

}  // namespace

SurrogateParams build_params(double g, const std::array<double, 3>& masses, int body_index,
                             const SurrogateInitials& surrogate, const SurrogateInitials& body,
                             SignMode sign_mode, Branch branch, double t0) {
    return build_impl(g, masses, body_index, surrogate, body, sign_mode, branch, t0, false);
}

SurrogateParams force_build_params(double g, const std::array<double, 3>& masses,
                                   int body_index, const SurrogateInitials& surrogate,
                                   const SurrogateInitials& body, SignMode sign_mode,
                                   Branch branch, double t0) {
    return build_impl(g, masses, body_index, surrogate, body, sign_mode, branch, t0, true);
}

double f_of_t(const SurrogateParams& p, double t) {
    return p.sign * std::sqrt(p.b_const) * (t - p.t0) + p.r_a0 -
           p.k_const * std::log(p.r_a0);
}

double w_arg(const SurrogateParams& p, double t) {
    return p.c4 * std::exp(p.c5 * t);
}

double r_a_closed(const SurrogateParams& p, double t) {
    return -p.k_const * branch_w_at(p, t);
}

double validity_horizon(const SurrogateParams& p) {
    double margin_ratio = p.r_a0 * p.b_const / p.a_const;  // r_a0 / (2k)
    if (margin_ratio <= 1.0)
        throw AlreadyInvalid("body " + std::to_string(p.body_index) +
                             ": r_a0 <= 2k at t0 (margin ratio " +
                             std::to_string(margin_ratio) + ")");
    if (p.sign > 0) return kInf;
    // Inward motion: the Lambert argument reaches -2 e^{-2} (W = -2, r_a = 2k)
    // at a finite time.
    const double minus_2e2 = -2.0 * std::exp(-2.0);
    return std::log(minus_2e2 / p.c4) / p.c5;
}

double radius_closed(const SurrogateParams& p, double t) {
    double wt = branch_w_at(p, t);
    double w0 = branch_w_at(p, p.t0);
    double scale = p.k_w / p.c5;
    // Grouped as differences of the printed t and t0 terms so the pairs
    // cancel exactly at t = t0.
    return p.k_lin * (t - p.t0) + scale * (radius_bracket(wt) - radius_bracket(w0)) +
           p.r_i0;
}

double theta_closed(const SurrogateParams& p, double t) {
    double wt = branch_w_at(p, t);
    double w0 = branch_w_at(p, p.t0);
    return p.theta_i0 + p.theta_coeff * (theta_poly(w0) - theta_poly(wt));
}

double radius_closed_rate(const SurrogateParams& p, double t) {
    double w = branch_w_at(p, t);
    return p.k_lin + p.k_w * w * w * (2.0 * w + 1.0);
}

double theta_closed_rate(const SurrogateParams& p, double t) {
    double w = branch_w_at(p, t);
    return -2.0 * p.theta_coeff * p.c5 * w * w * (3.0 * w + 1.0) / (1.0 + w);
}

double implicit_residual(const SurrogateParams& p, double t) {
    double r = r_a_closed(p, t);
    return r - p.k_const * std::log(r) - f_of_t(p, t);
}

SemiAnalyticPath::SemiAnalyticPath(const SurrogateParams& p, double quad_tol)
    : params_(p),
      quad_tol_(quad_tol),
      node_t_(p.t0),
      node_r_(p.r_i0),
      node_r_dot_(p.rdot_i0),
      node_theta_(p.theta_i0) {
    if (!(quad_tol > 0.0))
        throw QuadratureFailure("semi-analytic path: quad_tol must be positive");
}

void SemiAnalyticPath::advance(double t) {
    if (t < node_t_)
        throw Error("semi-analytic path: times must be non-decreasing");
    if (t == node_t_) return;

    const SurrogateParams& p = params_;
    double g_mu = (p.a_const / (2.0 * p.m_total)) * p.mu;  // G * mu
    auto inv_ra_sq = [&p](double tau) {
        double ra = r_a_closed(p, tau);
        return 1.0 / (ra * ra);
    };

    Quadrature quad(20000000);
    double t_n = node_t_;
    double i1 = integrate_relative(quad, inv_ra_sq, t_n, t, quad_tol_);
    double i2 = integrate_relative(
        quad, [&](double tau) { return (t - tau) * inv_ra_sq(tau); }, t_n, t, quad_tol_);

    double r_dot_new = node_r_dot_ - g_mu * i1;
    double r_new = node_r_ + node_r_dot_ * (t - t_n) - g_mu * i2;

    // Angle increment: the body radius inside this segment follows from the
    // same reduction, so the integrand needs one nested quadrature per point.
    double l_const = p.r_i0 * p.r_i0 * p.thetadot_i0;
    double i3 = 0.0;
    if (l_const != 0.0) {
        auto radius_inside = [&](double tau) {
            Quadrature inner(20000000);
            double i2_tau = integrate_relative(
                inner,
                [&](double s) { return (tau - s) * inv_ra_sq(s); }, t_n, tau,
                0.1 * quad_tol_);
            evaluations_ += inner.evaluations();
            return node_r_ + node_r_dot_ * (tau - t_n) - g_mu * i2_tau;
        };
        i3 = integrate_relative(
            quad,
            [&](double tau) {
                double r = radius_inside(tau);
                if (!(r > 0.0))
                    throw QuadratureFailure(
                        "theta quadrature: radius reached zero, the angle "
                        "integral does not exist past this point");
                return 1.0 / (r * r);
            },
            t_n, t, quad_tol_);
    }

    evaluations_ += quad.evaluations();
    node_t_ = t;
    node_r_ = r_new;
    node_r_dot_ = r_dot_new;
    node_theta_ += l_const * i3;
}

RadialValue SemiAnalyticPath::radius_at(double t) {
    advance(t);
    return {node_r_, node_r_dot_};
}

double SemiAnalyticPath::theta_at(double t) {
    advance(t);
    return node_theta_;
}

RadialValue radius_semi_analytic(const SurrogateParams& p, double t, double quad_tol) {
    SemiAnalyticPath path(p, quad_tol);
    return path.radius_at(t);
}

double theta_semi_analytic(const SurrogateParams& p, double t, double quad_tol) {
    SemiAnalyticPath path(p, quad_tol);
    return path.theta_at(t);
}

SolveResult solve_system(const SystemState& sys, const SolveOptions& options) {
    if (options.samples < 2)
        throw Error("solve_system: at least two samples required");
    if (!(options.horizon > 0.0))
        throw Error("solve_system: horizon must be positive");

    const std::array<double, 3> masses{sys.bodies[0].mass, sys.bodies[1].mass,
                                       sys.bodies[2].mass};

    SolveResult result;
    result.trajectory.kind = TrajectoryKind::body_states;
    result.trajectory.mode = solve_mode_name(options.mode);
    result.trajectory.kinematic_rates = options.mode != SolveMode::paper_closed_form;
    result.trajectory.surrogate_driven = true;

    for (int body = 1; body <= 3; ++body) {
        SurrogateInitials surrogate =
            surrogate_initials(sys, body, options.convention);
        const PolarState& own = sys.bodies[body - 1].state;
        SurrogateInitials body_init{own.r, own.r_dot, own.theta, own.theta_dot};

        SurrogateParams params;
        try {
            params = build_params(sys.g_const, masses, body, surrogate, body_init,
                                  options.sign_mode, options.branch, sys.t);
        } catch (const NonEscaping& e) {
            result.body_errors[body - 1] =
                BodyError{e.zero_radial_rate ? "zero_radial_rate" : "non_escaping", e.what()};
            continue;
        }
        result.params[body - 1] = params;

        double t_star;
        try {
            t_star = validity_horizon(params);
        } catch (const AlreadyInvalid& e) {
            result.body_errors[body - 1] = BodyError{"already_invalid", e.what()};
            continue;
        }

        double t_end = std::min(sys.t + options.horizon, t_star);
        BodyTrack track;
        track.horizon = t_end;
        track.times.resize(options.samples);
        track.states.resize(options.samples);
        double dt = (t_end - sys.t) / (options.samples - 1);
        for (int s = 0; s < options.samples; ++s)
            track.times[s] = s + 1 == options.samples ? t_end : sys.t + s * dt;

        if (options.mode == SolveMode::paper_closed_form) {
            for (int s = 0; s < options.samples; ++s) {
                double t = track.times[s];
                track.states[s] = PolarState{radius_closed(params, t),
                                             theta_closed(params, t),
                                             radius_closed_rate(params, t),
                                             theta_closed_rate(params, t)};
            }
        } else {
            SemiAnalyticPath path(params, options.quad_tol);
            double l_const = params.r_i0 * params.r_i0 * params.thetadot_i0;
            int kept = 0;
            for (int s = 0; s < options.samples; ++s) {
                double t = track.times[s];
                double theta;
                RadialValue rv;
                try {
                    theta = path.theta_at(t);
                    rv = path.radius_at(t);
                } catch (const QuadratureFailure&) {
                    break;  // angle integral hit the radius zero crossing
                }
                if (!(rv.r > 0.0)) break;  // body reached the surrogate center
                track.states[s] =
                    PolarState{rv.r, theta, rv.r_dot, l_const / (rv.r * rv.r)};
                kept = s + 1;
            }
            if (kept < options.samples) {
                // The self-consistent radius collided with the center inside
                // the horizon; the model ends there. Keep the samples before
                // the collision and record why the track is short.
                track.times.resize(kept);
                track.states.resize(kept);
                track.horizon = kept > 0 ? track.times.back() : sys.t;
                result.body_errors[body - 1] =
                    BodyError{"surrogate_collision",
                              "body " + std::to_string(body) +
                                  ": semi-analytic radius reached zero inside the "
                                  "requested horizon"};
                if (kept == 0) continue;
            }
        }
        result.trajectory.tracks[body - 1] = std::move(track);
    }
    return result;
}

const char* solve_mode_name(SolveMode mode) {
    return mode == SolveMode::paper_closed_form ? "paper_closed_form" : "semi_analytic";
}

}  // namespace threebody
