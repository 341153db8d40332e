#include "threebody/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "threebody/dynamics.hpp"
#include "threebody/errors.hpp"
#include "threebody/format.hpp"

namespace threebody {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> uniform_grid(double t0, double t_end, int samples) {
    std::vector<double> grid(samples);
    double dt = (t_end - t0) / (samples - 1);
    for (int s = 0; s < samples; ++s)
        grid[s] = s + 1 == samples ? t_end : t0 + s * dt;
    return grid;
}

SolveOptions to_solve_options(const SolverOptions& so, RunMode mode) {
    SolveOptions opts;
    opts.mode = mode == RunMode::semi_analytic ? SolveMode::semi_analytic
                                               : SolveMode::paper_closed_form;
    opts.sign_mode = so.sign_mode;
    opts.branch = so.branch;
    opts.convention = so.convention;
    opts.horizon = so.horizon;
    opts.samples = so.samples;
    opts.quad_tol = so.quad_tol;
    return opts;
}

Trajectory run_surrogate_mode(const SystemState& com, const SolverOptions& so, RunMode mode) {
    Trajectory traj;
    traj.kind = TrajectoryKind::surrogate_separation;
    traj.mode = run_mode_name(mode);
    double t_end = com.t + so.horizon;
    std::vector<double> grid = uniform_grid(com.t, t_end, so.samples);
    double m_total = com.bodies[0].mass + com.bodies[1].mass + com.bodies[2].mass;
    OdeOptions ode{so.rel_tol, so.abs_tol, 2000000};
    for (int body = 1; body <= 3; ++body) {
        SurrogateInitials initials = surrogate_initials(com, body, so.convention);
        ScalarTrajectory st =
            mode == RunMode::surrogate_full
                ? integrate_surrogate_full(com.g_const, m_total, initials, com.t, t_end,
                                           grid, ode)
                : integrate_surrogate_radial(com.g_const, m_total, initials, com.t, t_end,
                                             grid, ode);
        BodyTrack track;
        track.times = std::move(st.times);
        track.states = std::move(st.states);
        track.horizon = t_end;
        traj.tracks[body - 1] = std::move(track);
        traj.stats.steps += st.stats.steps;
        traj.stats.rejected_steps += st.stats.rejected_steps;
        traj.stats.rel_tol = st.stats.rel_tol;
        traj.stats.abs_tol = st.stats.abs_tol;
    }
    return traj;
}

void merge_monitor(ValidityReport& into, const ValidityReport& other) {
    for (int i = 0; i < 3; ++i) {
        into.angular_rate_ok[i] = into.angular_rate_ok[i] && other.angular_rate_ok[i];
        into.finite_positions_ok[i] =
            into.finite_positions_ok[i] && other.finite_positions_ok[i];
        into.horizon[i] = std::min(into.horizon[i], other.horizon[i]);
        if (!into.surrogate[i]) into.surrogate[i] = other.surrogate[i];
    }
    if (other.first_violation &&
        (!into.first_violation || other.first_violation->time < into.first_violation->time))
        into.first_violation = other.first_violation;
}

json vec3_json(const std::array<bool, 3>& v) {
    return json::array({v[0], v[1], v[2]});
}

json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json params_json(const SurrogateParams& p) {
    json j;
    j["body_index"] = p.body_index;
    j["mu"] = p.mu;
    j["m_total"] = p.m_total;
    j["a_const"] = p.a_const;
    j["b_const"] = p.b_const;
    j["k_const"] = p.k_const;
    j["sign"] = p.sign;
    j["c1"] = p.c1;
    j["c2"] = p.c2;
    j["c4"] = p.c4;
    j["c5"] = p.c5;
    j["k1"] = p.k1;
    j["k_lin"] = p.k_lin;
    j["k_w"] = p.k_w;
    j["theta_coeff"] = p.theta_coeff;
    j["r_a0"] = p.r_a0;
    j["rdot_a0"] = p.rdot_a0;
    j["r_i0"] = p.r_i0;
    j["rdot_i0"] = p.rdot_i0;
    j["theta_i0"] = p.theta_i0;
    j["thetadot_i0"] = p.thetadot_i0;
    j["t0"] = p.t0;
    j["branch"] = branch_name(p.branch);
    return j;
}

json validity_json(const ValidityReport& rep) {
    json j;
    j["angular_rate_ok"] = vec3_json(rep.angular_rate_ok);
    j["finite_positions_ok"] = vec3_json(rep.finite_positions_ok);
    json b = json::array(), m = json::array(), r = json::array();
    for (int i = 0; i < 3; ++i) {
        if (rep.surrogate[i]) {
            b.push_back(rep.surrogate[i]->b_positive);
            m.push_back(rep.surrogate[i]->margin_ok);
            r.push_back(rep.surrogate[i]->margin_ratio);
        } else {
            b.push_back(nullptr);
            m.push_back(nullptr);
            r.push_back(nullptr);
        }
    }
    j["b_positive"] = b;
    j["margin_ok"] = m;
    j["margin_ratio"] = r;
    json h = json::array();
    for (int i = 0; i < 3; ++i) h.push_back(finite_or_null(rep.horizon[i]));
    j["horizon"] = h;
    if (rep.first_violation) {
        json v;
        v["body"] = rep.first_violation->body;
        v["time"] = rep.first_violation->time;
        v["condition"] = rep.first_violation->condition;
        j["first_violation"] = v;
    } else {
        j["first_violation"] = nullptr;
    }
    return j;
}

json metrics_json(const ErrorMetrics& m) {
    json j;
    json per_body = json::array();
    for (int i = 0; i < 3; ++i) {
        if (!m.body[i]) {
            per_body.push_back(nullptr);
            continue;
        }
        json b;
        b["rms_position_error"] = m.body[i]->rms_position_error;
        b["max_position_error"] = m.body[i]->max_position_error;
        b["final_error"] = m.body[i]->final_error;
        b["divergence_time"] =
            m.body[i]->divergence_time ? json(*m.body[i]->divergence_time) : json(nullptr);
        per_body.push_back(b);
    }
    j["per_body"] = per_body;
    j["horizon_start"] = m.horizon_start;
    j["horizon_end"] = m.horizon_end;
    j["samples_compared"] = m.samples_compared;
    j["threshold"] = finite_or_null(m.threshold);
    return j;
}

bool is_closed_form(RunMode mode) {
    return mode == RunMode::paper_closed_form || mode == RunMode::semi_analytic;
}

bool is_oracle_system(RunMode mode) {
    return mode == RunMode::oracle_newton || mode == RunMode::oracle_paper;
}

}  // namespace

RunOutputs run_modes(const Scenario& sc, const std::vector<RunMode>& modes,
                     double compare_threshold) {
    RunOutputs out;
    out.scenario = sc;
    out.com_state = to_com_frame(to_system_state(sc));
    const SolverOptions& so = sc.solver;
    const std::array<double, 3> masses{out.com_state.bodies[0].mass,
                                       out.com_state.bodies[1].mass,
                                       out.com_state.bodies[2].mass};

    out.validity = check_preconditions(out.com_state, so.angular_rate_threshold);

    // Surrogate diagnostics for every body, independent of the mode run.
    for (int body = 1; body <= 3; ++body) {
        SurrogateInitials surrogate = surrogate_initials(out.com_state, body, so.convention);
        const PolarState& own = out.com_state.bodies[body - 1].state;
        SurrogateInitials body_init{own.r, own.r_dot, own.theta, own.theta_dot};
        SurrogateParams forced =
            force_build_params(out.com_state.g_const, masses, body, surrogate, body_init,
                               so.sign_mode, so.branch, out.com_state.t);
        out.validity.surrogate[body - 1] = check_surrogate(forced);
        if (forced.b_const > 0.0) out.params[body - 1] = forced;
    }

    for (RunMode mode : modes) {
        if (is_closed_form(mode)) {
            SolveResult res = solve_system(out.com_state, to_solve_options(so, mode));
            for (int i = 0; i < 3; ++i)
                if (res.body_errors[i] && !out.body_errors[i])
                    out.body_errors[i] = res.body_errors[i];
            out.trajectories.push_back(std::move(res.trajectory));
        } else if (is_oracle_system(mode)) {
            double t_end = out.com_state.t + so.horizon;
            std::vector<double> grid = uniform_grid(out.com_state.t, t_end, so.samples);
            OdeOptions ode{so.rel_tol, so.abs_tol, 2000000};
            ForceField field = mode == RunMode::oracle_newton ? ForceField::newton
                                                              : ForceField::paper;
            out.trajectories.push_back(
                integrate(field, out.com_state, t_end, grid, ode));
        } else {
            out.trajectories.push_back(run_surrogate_mode(out.com_state, so, mode));
        }
    }

    for (const Trajectory& traj : out.trajectories)
        merge_monitor(out.validity,
                      monitor(traj, out.params, masses, so.angular_rate_threshold));

    if (out.trajectories.size() == 2)
        out.metrics =
            compare(out.trajectories[0], out.trajectories[1], compare_threshold);

    bool any_body_error = false;
    for (const auto& e : out.body_errors) any_body_error = any_body_error || e.has_value();
    out.validity_failed = !out.validity.all_ok() || any_body_error;
    return out;
}

RunOutputs run_scenario(const Scenario& sc) {
    return run_modes(sc, {sc.solver.mode}, std::numeric_limits<double>::infinity());
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,body,r,theta,r_dot,theta_dot,x,y\n";
    struct Row {
        double t;
        int body;
        const PolarState* state;
    };
    std::vector<Row> rows;
    for (int i = 0; i < 3; ++i) {
        if (!traj.tracks[i]) continue;
        const BodyTrack& track = *traj.tracks[i];
        for (std::size_t s = 0; s < track.times.size(); ++s)
            rows.push_back({track.times[s], i + 1, &track.states[s]});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.t, a.body) < std::tie(b.t, b.body);
    });
    for (const Row& row : rows) {
        CartesianState cart = polar_to_cartesian(*row.state);
        out << format_double(row.t) << ',' << row.body << ','
            << format_double(row.state->r) << ',' << format_double(row.state->theta) << ','
            << format_double(row.state->r_dot) << ','
            << format_double(row.state->theta_dot) << ',' << format_double(cart.position.x)
            << ',' << format_double(cart.position.y) << '\n';
    }
}

json report_json(const RunOutputs& outputs) {
    json j;
    json modes = json::array();
    for (const Trajectory& t : outputs.trajectories) modes.push_back(t.mode);
    j["modes"] = modes;
    j["strict"] = outputs.scenario.solver.strict;
    j["validity_failed"] = outputs.validity_failed;
    j["validity"] = validity_json(outputs.validity);

    json params = json::array();
    for (int i = 0; i < 3; ++i)
        params.push_back(outputs.params[i] ? params_json(*outputs.params[i])
                                           : json(nullptr));
    j["surrogate_params"] = params;

    json errors = json::array();
    for (int i = 0; i < 3; ++i) {
        if (!outputs.body_errors[i]) {
            errors.push_back(nullptr);
            continue;
        }
        json e;
        e["kind"] = outputs.body_errors[i]->kind;
        e["message"] = outputs.body_errors[i]->message;
        errors.push_back(e);
    }
    j["body_errors"] = errors;

    j["metrics"] = outputs.metrics ? metrics_json(*outputs.metrics) : json(nullptr);

    json stats = json::array();
    for (const Trajectory& t : outputs.trajectories) {
        json s;
        s["mode"] = t.mode;
        s["steps"] = t.stats.steps;
        s["rejected_steps"] = t.stats.rejected_steps;
        s["rel_tol"] = t.stats.rel_tol;
        s["abs_tol"] = t.stats.abs_tol;
        stats.push_back(s);
    }
    j["integrator_stats"] = stats;
    j["horizon"] = outputs.scenario.solver.horizon;
    j["samples"] = outputs.scenario.solver.samples;
    return j;
}

}  // namespace threebody
