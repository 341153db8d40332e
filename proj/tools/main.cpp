#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "threebody/errors.hpp"
#include "threebody/format.hpp"
#include "threebody/lambert_w.hpp"
#include "threebody/run.hpp"
#include "threebody/scenario.hpp"

namespace fs = std::filesystem;
using namespace threebody;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStrictValidity = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBadInput = 4;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ScenarioFormatError("cannot write " + path.string());
    out << content;
}

void write_outputs(const fs::path& dir, const RunOutputs& outputs) {
    fs::create_directories(dir);
    for (const Trajectory& traj : outputs.trajectories) {
        std::ofstream csv(dir / ("trajectory_" + traj.mode + ".csv"), std::ios::binary);
        if (!csv)
            throw ScenarioFormatError("cannot write trajectory CSV in " + dir.string());
        write_trajectory_csv(csv, traj);
    }
    write_file(dir / "report.json", report_json(outputs).dump(2) + "\n");
}

int finish(const RunOutputs& outputs, const fs::path* out_dir) {
    if (out_dir) write_outputs(*out_dir, outputs);
    if (outputs.validity_failed) {
        std::cout << "validity: FAILED";
        if (outputs.validity.first_violation) {
            const auto& v = *outputs.validity.first_violation;
            std::cout << " (body " << v.body << ", t = " << format_double(v.time) << ", "
                      << v.condition << ")";
        }
        std::cout << "\n";
        if (outputs.scenario.solver.strict) return kExitStrictValidity;
    } else {
        std::cout << "validity: ok\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar three-body engine: Lambert-W closed-form approximations, "
                 "their validity conditions, and a numerical oracle for comparison"};
    app.require_subcommand(1);

    // lambertw <branch> <z>
    auto* lw = app.add_subcommand("lambertw", "Evaluate one real Lambert W branch");
    std::string lw_branch;
    double lw_z = 0.0;
    lw->add_option("branch", lw_branch, "principal or lower")->required();
    lw->add_option("z", lw_z, "argument")->required();

    // solve --scenario F --out D
    auto* solve = app.add_subcommand("solve", "Closed-form or semi-analytic solution");
    std::string solve_scenario, solve_out;
    bool solve_strict = false;
    solve->add_option("--scenario", solve_scenario, "scenario JSON file")->required();
    solve->add_option("--out", solve_out, "output directory")->required();
    solve->add_flag("--strict", solve_strict, "validity failures exit with status 2");

    // integrate --scenario F --out D
    auto* integ = app.add_subcommand("integrate", "Numerical oracle integration");
    std::string integ_scenario, integ_out;
    bool integ_strict = false;
    integ->add_option("--scenario", integ_scenario, "scenario JSON file")->required();
    integ->add_option("--out", integ_out, "output directory")->required();
    integ->add_flag("--strict", integ_strict, "validity failures exit with status 2");

    // compare --scenario F --modes A,B --threshold X --out D
    auto* cmp = app.add_subcommand("compare", "Run two modes and compare trajectories");
    std::string cmp_scenario, cmp_modes, cmp_out;
    double cmp_threshold = std::numeric_limits<double>::infinity();
    bool cmp_strict = false;
    cmp->add_option("--scenario", cmp_scenario, "scenario JSON file")->required();
    cmp->add_option("--modes", cmp_modes, "comma-separated pair, second is the reference")
        ->required();
    cmp->add_option("--threshold", cmp_threshold, "divergence threshold (default: none)");
    cmp->add_option("--out", cmp_out, "output directory")->required();
    cmp->add_flag("--strict", cmp_strict, "validity failures exit with status 2");

    // validate --scenario F
    auto* val = app.add_subcommand("validate", "Check solvability conditions only");
    std::string val_scenario;
    bool val_strict = false;
    val->add_option("--scenario", val_scenario, "scenario JSON file")->required();
    val->add_flag("--strict", val_strict, "validity failures exit with status 2");

    // demo [--out F]
    auto* demo = app.add_subcommand("demo", "Write the built-in example scenario");
    std::string demo_out = "demo_scenario.json";
    demo->add_option("--out", demo_out, "output file (default demo_scenario.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (lw->parsed()) {
            Branch branch;
            if (lw_branch == "principal")
                branch = Branch::principal;
            else if (lw_branch == "lower")
                branch = Branch::lower;
            else
                throw ScenarioFormatError("branch must be principal or lower");
            double w = lambert_w(branch, lw_z);
            std::cout << "W = " << format_double(w) << "\n"
                      << "residual = " << format_double(w_residual(w, lw_z)) << "\n";
            return kExitOk;
        }

        if (demo->parsed()) {
            write_file(demo_out, scenario_to_json(demo_scenario()));
            std::cout << "wrote " << demo_out << "\n";
            return kExitOk;
        }

        if (solve->parsed()) {
            Scenario sc = load_scenario(solve_scenario);
            if (solve_strict) sc.solver.strict = true;
            if (sc.solver.mode != RunMode::paper_closed_form &&
                sc.solver.mode != RunMode::semi_analytic)
                throw ScenarioFormatError(
                    "solve requires mode paper_closed_form or semi_analytic; use "
                    "`integrate` for oracle modes");
            RunOutputs outputs = run_scenario(sc);
            fs::path dir = solve_out;
            return finish(outputs, &dir);
        }

        if (integ->parsed()) {
            Scenario sc = load_scenario(integ_scenario);
            if (integ_strict) sc.solver.strict = true;
            if (sc.solver.mode == RunMode::paper_closed_form ||
                sc.solver.mode == RunMode::semi_analytic)
                throw ScenarioFormatError(
                    "integrate requires an oracle mode (oracle_newton, oracle_paper, "
                    "surrogate_full, surrogate_radial); use `solve` for closed forms");
            RunOutputs outputs = run_scenario(sc);
            fs::path dir = integ_out;
            return finish(outputs, &dir);
        }

        if (cmp->parsed()) {
            Scenario sc = load_scenario(cmp_scenario);
            if (cmp_strict) sc.solver.strict = true;
            auto comma = cmp_modes.find(',');
            if (comma == std::string::npos)
                throw ScenarioFormatError("--modes wants two comma-separated mode names");
            RunMode mode_a = parse_run_mode(cmp_modes.substr(0, comma));
            RunMode mode_b = parse_run_mode(cmp_modes.substr(comma + 1));
            RunOutputs outputs = run_modes(sc, {mode_a, mode_b}, cmp_threshold);
            fs::path dir = cmp_out;
            return finish(outputs, &dir);
        }

        if (val->parsed()) {
            Scenario sc = load_scenario(val_scenario);
            if (val_strict) sc.solver.strict = true;
            RunOutputs outputs =
                run_modes(sc, {}, std::numeric_limits<double>::infinity());
            std::cout << report_json(outputs).dump(2) << "\n";
            if (outputs.validity_failed && sc.solver.strict) return kExitStrictValidity;
            return kExitOk;
        }
    } catch (const ScenarioFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
