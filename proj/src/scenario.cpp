#include "threebody/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "threebody/errors.hpp"
#include "threebody/format.hpp"

namespace threebody {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key))
            throw ScenarioFormatError("unknown key \"" + key + "\" in " + where);
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw ScenarioFormatError("missing key \"" + key + "\" in " + where);
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ScenarioFormatError("key \"" + key + "\" in " + where + " must be a number");
    return v.get<double>();
}

double optional_number(const json& obj, const std::string& key, const std::string& where,
                       double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ScenarioFormatError("key \"" + key + "\" in " + where + " must be a number");
    return v.get<double>();
}

bool optional_bool(const json& obj, const std::string& key, const std::string& where,
                   bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ScenarioFormatError("key \"" + key + "\" in " + where + " must be a boolean");
    return v.get<bool>();
}

std::string optional_string(const json& obj, const std::string& key, const std::string& where,
                            const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string())
        throw ScenarioFormatError("key \"" + key + "\" in " + where + " must be a string");
    return v.get<std::string>();
}

SignMode parse_sign_mode(const std::string& s) {
    if (s == "auto") return SignMode::automatic;
    if (s == "plus") return SignMode::plus;
    if (s == "minus") return SignMode::minus;
    throw ScenarioFormatError("sign_mode must be auto, plus or minus (got \"" + s + "\")");
}

Branch parse_branch(const std::string& s) {
    if (s == "lower") return Branch::lower;
    if (s == "principal") return Branch::principal;
    throw ScenarioFormatError("branch must be lower or principal (got \"" + s + "\")");
}

Convention parse_convention(const std::string& s) {
    if (s == "vector") return Convention::vector;
    if (s == "paper") return Convention::paper;
    throw ScenarioFormatError("convention must be vector or paper (got \"" + s + "\")");
}

const char* sign_mode_name(SignMode m) {
    switch (m) {
        case SignMode::automatic: return "auto";
        case SignMode::plus: return "plus";
        default: return "minus";
    }
}

const char* convention_name(Convention c) {
    return c == Convention::vector ? "vector" : "paper";
}

void validate(const Scenario& sc) {
    if (!(sc.g_const > 0.0) || !std::isfinite(sc.g_const))
        throw ScenarioFormatError("g_const must be positive and finite");
    if (!std::isfinite(sc.t0))
        throw ScenarioFormatError("t0 must be finite");
    for (int i = 0; i < 3; ++i) {
        const BodySpec& b = sc.bodies[i];
        std::string where = "bodies[" + std::to_string(i) + "]";
        if (!std::isfinite(b.mass) || !std::isfinite(b.r) || !std::isfinite(b.theta) ||
            !std::isfinite(b.r_dot) || !std::isfinite(b.theta_dot))
            throw ScenarioFormatError(where + ": all fields must be finite");
        if (b.r < 0.0)
            throw ScenarioFormatError(where + ": r must be non-negative");
        if (sc.solver.allow_zero_mass ? b.mass < 0.0 : !(b.mass > 0.0))
            throw ScenarioFormatError(where + ": mass must be positive (set allow_zero_mass "
                                              "for degenerate-limit scenarios)");
    }
    const SolverOptions& so = sc.solver;
    if (so.samples < 2) throw ScenarioFormatError("solver.samples must be at least 2");
    if (!(so.horizon > 0.0)) throw ScenarioFormatError("solver.horizon must be positive");
    if (!(so.rel_tol > 0.0) || !(so.abs_tol > 0.0) || !(so.quad_tol > 0.0))
        throw ScenarioFormatError("solver tolerances must be positive");
    if (!(so.angular_rate_threshold > 0.0))
        throw ScenarioFormatError("solver.angular_rate_threshold must be positive");
}

}  // namespace

RunMode parse_run_mode(const std::string& name) {
    if (name == "paper_closed_form") return RunMode::paper_closed_form;
    if (name == "semi_analytic") return RunMode::semi_analytic;
    if (name == "oracle_newton") return RunMode::oracle_newton;
    if (name == "oracle_paper") return RunMode::oracle_paper;
    if (name == "surrogate_full") return RunMode::surrogate_full;
    if (name == "surrogate_radial") return RunMode::surrogate_radial;
    throw ScenarioFormatError("unknown mode \"" + name + "\"");
}

const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::paper_closed_form: return "paper_closed_form";
        case RunMode::semi_analytic: return "semi_analytic";
        case RunMode::oracle_newton: return "oracle_newton";
        case RunMode::oracle_paper: return "oracle_paper";
        case RunMode::surrogate_full: return "surrogate_full";
        default: return "surrogate_radial";
    }
}

Scenario parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScenarioFormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ScenarioFormatError("scenario must be a JSON object");
    reject_unknown_keys(root, {"g_const", "t0", "bodies", "solver"}, "scenario");

    Scenario sc;
    sc.g_const = require_number(root, "g_const", "scenario");
    sc.t0 = require_number(root, "t0", "scenario");

    if (!root.contains("bodies") || !root.at("bodies").is_array() ||
        root.at("bodies").size() != 3)
        throw ScenarioFormatError("scenario requires a \"bodies\" array of exactly 3 entries");
    for (int i = 0; i < 3; ++i) {
        const json& b = root.at("bodies").at(i);
        std::string where = "bodies[" + std::to_string(i) + "]";
        if (!b.is_object()) throw ScenarioFormatError(where + " must be an object");
        reject_unknown_keys(b, {"mass", "r", "theta", "r_dot", "theta_dot"}, where);
        sc.bodies[i].mass = require_number(b, "mass", where);
        sc.bodies[i].r = require_number(b, "r", where);
        sc.bodies[i].theta = require_number(b, "theta", where);
        sc.bodies[i].r_dot = require_number(b, "r_dot", where);
        sc.bodies[i].theta_dot = require_number(b, "theta_dot", where);
    }

    if (root.contains("solver")) {
        const json& s = root.at("solver");
        if (!s.is_object()) throw ScenarioFormatError("solver must be an object");
        reject_unknown_keys(s,
                            {"mode", "sign_mode", "branch", "convention", "horizon",
                             "samples", "rel_tol", "abs_tol", "quad_tol",
                             "angular_rate_threshold", "strict", "allow_zero_mass"},
                            "solver");
        SolverOptions& so = sc.solver;
        so.mode = parse_run_mode(optional_string(s, "mode", "solver", "paper_closed_form"));
        so.sign_mode = parse_sign_mode(optional_string(s, "sign_mode", "solver", "auto"));
        so.branch = parse_branch(optional_string(s, "branch", "solver", "lower"));
        so.convention = parse_convention(optional_string(s, "convention", "solver", "vector"));
        so.horizon = optional_number(s, "horizon", "solver", so.horizon);
        double samples = optional_number(s, "samples", "solver", so.samples);
        if (samples != std::floor(samples))
            throw ScenarioFormatError("solver.samples must be an integer");
        so.samples = static_cast<int>(samples);
        so.rel_tol = optional_number(s, "rel_tol", "solver", so.rel_tol);
        so.abs_tol = optional_number(s, "abs_tol", "solver", so.abs_tol);
        so.quad_tol = optional_number(s, "quad_tol", "solver", so.quad_tol);
        so.angular_rate_threshold =
            optional_number(s, "angular_rate_threshold", "solver", so.angular_rate_threshold);
        so.strict = optional_bool(s, "strict", "solver", so.strict);
        so.allow_zero_mass = optional_bool(s, "allow_zero_mass", "solver", so.allow_zero_mass);
    }

    validate(sc);
    return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ScenarioFormatError("cannot open scenario file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
    json root;
    root["g_const"] = sc.g_const;
    root["t0"] = sc.t0;
    root["bodies"] = json::array();
    for (const BodySpec& b : sc.bodies) {
        json jb;
        jb["mass"] = b.mass;
        jb["r"] = b.r;
        jb["theta"] = b.theta;
        jb["r_dot"] = b.r_dot;
        jb["theta_dot"] = b.theta_dot;
        root["bodies"].push_back(jb);
    }
    json s;
    s["mode"] = run_mode_name(sc.solver.mode);
    s["sign_mode"] = sign_mode_name(sc.solver.sign_mode);
    s["branch"] = branch_name(sc.solver.branch);
    s["convention"] = convention_name(sc.solver.convention);
    s["horizon"] = sc.solver.horizon;
    s["samples"] = sc.solver.samples;
    s["rel_tol"] = sc.solver.rel_tol;
    s["abs_tol"] = sc.solver.abs_tol;
    s["quad_tol"] = sc.solver.quad_tol;
    s["angular_rate_threshold"] = sc.solver.angular_rate_threshold;
    s["strict"] = sc.solver.strict;
    s["allow_zero_mass"] = sc.solver.allow_zero_mass;
    root["solver"] = s;
    return root.dump(2) + "\n";
}

Scenario demo_scenario() {
    // Threefold-symmetric expanding triple: unit masses at radius 20/3 with
    // outward radial speed 4/3 and a small common rotation. Every body's
    // surrogate then starts at separation 10 with range rate 2, comfortably
    // past the escape and margin conditions.
    Scenario sc;
    sc.g_const = 1.0;
    sc.t0 = 0.0;
    const double r = 20.0 / 3.0;
    const double third = 2.0 * std::numbers::pi / 3.0;
    for (int i = 0; i < 3; ++i) {
        sc.bodies[i].mass = 1.0;
        sc.bodies[i].r = r;
        sc.bodies[i].theta = (i == 0) ? 0.0 : (i == 1 ? third : -third);
        sc.bodies[i].r_dot = 4.0 / 3.0;
        sc.bodies[i].theta_dot = 1e-3;
    }
    sc.solver.mode = RunMode::paper_closed_form;
    sc.solver.horizon = 10.0;
    sc.solver.samples = 101;
    return sc;
}

SystemState to_system_state(const Scenario& sc) {
    SystemState sys;
    sys.g_const = sc.g_const;
    sys.t = sc.t0;
    for (int i = 0; i < 3; ++i) {
        sys.bodies[i].mass = sc.bodies[i].mass;
        sys.bodies[i].state = PolarState{sc.bodies[i].r, sc.bodies[i].theta,
                                         sc.bodies[i].r_dot, sc.bodies[i].theta_dot};
    }
    return sys;
}

}  // namespace threebody
