#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "threebody/closed_form.hpp"
#include "threebody/state.hpp"

namespace threebody {

// Every way the engine can produce a trajectory from a scenario.
enum class RunMode {
    paper_closed_form,
    semi_analytic,
    oracle_newton,
    oracle_paper,
    surrogate_full,
    surrogate_radial,
};

struct SolverOptions {
    RunMode mode = RunMode::paper_closed_form;
    SignMode sign_mode = SignMode::automatic;
    Branch branch = Branch::lower;
    Convention convention = Convention::vector;
    double horizon = 10.0;
    int samples = 100;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double quad_tol = 1e-8;
    double angular_rate_threshold = 1.0;
    bool strict = false;
    bool allow_zero_mass = false;
};

struct BodySpec {
    double mass = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double r_dot = 0.0;
    double theta_dot = 0.0;
};

struct Scenario {
    double g_const = 1.0;
    double t0 = 0.0;
    std::array<BodySpec, 3> bodies{};
    SolverOptions solver{};
};

/// Parse a scenario from JSON text. Unknown keys anywhere are rejected;
/// solver keys are optional and fall back to the defaults above.
/// ScenarioFormatError on any syntactic or semantic problem.
Scenario parse_scenario(const std::string& json_text);

Scenario load_scenario(const std::filesystem::path& file);

/// Serialize with shortest round-trip numbers and a fixed key order, so
/// identical scenarios produce byte-identical files.
std::string scenario_to_json(const Scenario& sc);

/// The built-in example: an expanding symmetric triple whose surrogates are
/// all escaping with a comfortable margin.
Scenario demo_scenario();

SystemState to_system_state(const Scenario& sc);

RunMode parse_run_mode(const std::string& name);
const char* run_mode_name(RunMode mode);

}  // namespace threebody
