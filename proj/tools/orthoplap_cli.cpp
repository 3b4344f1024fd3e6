// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end.
//
//   orthoplap eigen1d --p 4 --a 0 --b 1
//   orthoplap solve --config run.json
//   orthoplap lambda-scan --config run.json --lo 0.25 --hi 200 --steps 12
//
// Exit codes: 0 pass, 1 numeric failure, 2 usage, 3 regime.
// Outputs go to --out-dir, else $ORTHOPLAP_OUTPUT_DIR, else the working directory.

#include "orthoplap/orthoplap.hpp"
#include "orthoplap/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace orthoplap;

namespace
{

enum ExitCode : int
{
    kPass = 0,
    kNumericFailure = 1,
    kUsage = 2,
    kRegime = 3
};

struct Globals
{
    unsigned threads = 1;
    std::string out_dir;
};

fs::path output_path(const Globals& g, const std::string& name)
{
    fs::path dir = g.out_dir;
    if (dir.empty())
    {
        const char* env = std::getenv("ORTHOPLAP_OUTPUT_DIR");
        dir = env && *env ? fs::path(env) : fs::path(".");
    }
    fs::create_directories(dir);
    return dir / name;
}

void write_field_csv(const fs::path& path, const GridField& f)
{
    std::ofstream os(path);
    if (!os)
        throw Error("cannot open " + path.string() + " for writing");
    write_csv(os, f);
}

int run_eigen1d(const Globals& g, double p, double a, double b, double tol, const std::string& out)
{
    require_exponent(p);
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw ConfigError("need finite --a < --b");
    const Interval iv(a, b);
    EigenOptions opt;
    opt.tol = tol;
    const Eigenpair1D e = solve_eigenpair(p, iv, opt);

    write_json(output_path(g, out + ".json").string(), to_json(e));
    {
        std::ofstream os(output_path(g, out + ".csv"));
        os << "x,v,dv\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
        for (std::size_t k = 0; k < e.size(); ++k)
            os << e.x(k) << "," << e.values()[k] << "," << e.derivatives()[k] << "\n";
    }
    write_json(output_path(g, out + ".metadata.json").string(), metadata_record("eigen1d", g.threads));

    const double formula = eigenvalue_formula(p, iv.length());
    const double rel = std::abs(e.eta() - formula) / formula;
    std::cout << std::setprecision(12);
    std::cout << "eta = " << e.eta() << "\n";
    std::cout << "pi_p = " << pi_p(p) << "\n";
    std::cout << "cross-check (p-1)(pi_p/L)^p = " << formula << "  relative difference = " << std::setprecision(3)
              << rel << (rel <= 1e-6 ? "  [ok]" : "  [MISMATCH]") << "\n";
    return rel <= 1e-6 ? kPass : kNumericFailure;
}

int run_solve(const Globals& g, const std::string& config, const std::string& out)
{
    RunConfig cfg = load_config(config);
    cfg.solver.threads = g.threads;
    for (const auto& w : validate_problem(cfg.problem).warnings)
        std::cerr << "warning: " << w << "\n";

    SolveOutcome outcome;
    int code = kPass;
    try
    {
        outcome = orthoplap::run_solve(cfg);
    }
    catch (const SolveFailure& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        Json j{{"passed", false}, {"failures", {e.what()}}, {"solve", to_json(e.report)}};
        write_json(output_path(g, out + ".json").string(), j);
        return kNumericFailure;
    }

    write_json(output_path(g, out + ".json").string(), to_json(outcome));
    write_field_csv(output_path(g, out + "_solution.csv"), outcome.report->solution);
    write_field_csv(output_path(g, out + "_lower.csv"), outcome.lower);
    write_field_csv(output_path(g, out + "_upper.csv"), outcome.upper);
    write_json(output_path(g, out + ".metadata.json").string(), metadata_record("solve", g.threads));

    const auto& rep = *outcome.report;
    std::cout << std::setprecision(6);
    std::cout << "regime = " << to_string(cfg.problem.regime()) << "\n";
    std::cout << "eps = " << outcome.thresholds.spec.eps << "  M = " << outcome.thresholds.spec.M << "\n";
    std::cout << "outer iterations = " << rep.iterations << "  positive mass = " << rep.positive_mass
              << "  residual = " << rep.final_residual << "\n";
    std::cout << "subsolution check: " << (outcome.lower_check.passed ? "pass" : "FAIL")
              << "  supersolution check: " << (outcome.upper_check.passed ? "pass" : "FAIL")
              << "  solution check: " << (outcome.solution_check->passed ? "pass" : "FAIL")
              << "  sandwich: " << (outcome.sandwich->ok ? "pass" : "FAIL")
              << "  poincare: " << (outcome.poincare->ok ? "pass" : "FAIL") << "\n";
    for (const auto& f : outcome.failures)
        std::cerr << "failed: " << f << "\n";
    if (!outcome.passed)
        code = kNumericFailure;
    return code;
}

int run_scan(const Globals& g, const std::string& config, double lo, double hi, std::size_t steps,
             bool allow_out_of_theorem, const std::string& out)
{
    if (!(lo > 0.0) || !(lo < hi))
    {
        std::cerr << "usage error: need 0 < --lo < --hi\n";
        return kUsage;
    }
    if (steps < 2)
    {
        std::cerr << "usage error: --steps must be at least 2\n";
        return kUsage;
    }
    RunConfig cfg = load_config(config);
    const Problem& prob = cfg.problem;
    if (prob.regime() == Regime::out_of_theorem && !allow_out_of_theorem)
        throw RegimeError("q >= p_N is outside the existence theorem (pass --allow-out-of-theorem for calibration runs)");
    if (prob.regime() == Regime::sublinear)
        std::cerr << "note: q < p_1, running the ladder in diagnostic mode\n";

    ScanOptions opt;
    opt.solver = cfg.solver;
    opt.solver.threads = g.threads;
    const ScanResult res = lambda_scan(prob, cfg.grid, lo, hi, steps, opt);

    {
        std::ofstream os(output_path(g, out + "_ladder.csv"));
        write_ladder_csv(os, res);
    }
    write_json(output_path(g, out + ".json").string(), to_json(res));
    write_json(output_path(g, out + ".metadata.json").string(), metadata_record("lambda-scan", g.threads));

    std::cout << std::setprecision(6);
    for (const auto& pt : res.points)
        std::cout << "lambda = " << std::setw(12) << pt.lambda << "  "
                  << (pt.solution_found ? "solution found      " : "no positive solution") << "  mass = " << pt.positive_mass
                  << "  [" << to_string(pt.method) << ", " << pt.note << "]\n";
    std::cout << "bracket = [" << res.bracket_lo << ", " << res.bracket_hi << "]\n";

    if (res.nonexistence_bound)
    {
        std::cout << "nonexistence bound (q = p_1) = " << *res.nonexistence_bound << "\n";
        for (const auto& pt : res.points)
        {
            if (pt.solution_found && pt.lambda < *res.nonexistence_bound)
            {
                std::cerr << "error: solution classified below the nonexistence bound at lambda = " << pt.lambda << "\n";
                return kNumericFailure;
            }
        }
        std::cout << "no success below the bound: ok\n";
    }
    return kPass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Orthotropic p-Laplacian toolkit: eigenpairs, barriers, monotone solves, threshold scans"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads for node-parallel kernels")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "output directory (default: $ORTHOPLAP_OUTPUT_DIR or .)");

    double p = 0.0, a = 0.0, b = 1.0, tol = 1e-10;
    std::string eig_out = "eigen1d";
    auto* eig = app.add_subcommand("eigen1d", "principal Dirichlet eigenpair of the 1D p-Laplacian");
    eig->add_option("--p", p, "exponent p > 1")->required();
    eig->add_option("--a", a, "left endpoint");
    eig->add_option("--b", b, "right endpoint");
    eig->add_option("--tol", tol, "bisection tolerance on eta")->check(CLI::PositiveNumber);
    eig->add_option("--out", eig_out, "output basename");

    std::string solve_config, solve_out = "solve";
    auto* solve = app.add_subcommand("solve", "barriers + monotone iteration + verification");
    solve->add_option("--config", solve_config, "config JSON")->required();
    solve->add_option("--out", solve_out, "output basename");

    std::string scan_config, scan_out = "scan";
    double lo = 0.0, hi = 0.0;
    std::size_t steps = 12;
    bool allow = false;
    auto* scan = app.add_subcommand("lambda-scan", "classify a geometric lambda ladder and bracket the threshold");
    scan->add_option("--config", scan_config, "config JSON (lambda is ignored)")->required();
    scan->add_option("--lo", lo, "smallest lambda")->required();
    scan->add_option("--hi", hi, "largest lambda")->required();
    scan->add_option("--steps", steps, "ladder points");
    scan->add_flag("--allow-out-of-theorem", allow, "permit q >= p_N (linear calibration runs)");
    scan->add_option("--out", scan_out, "output basename");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kUsage;
    }

    try
    {
        if (*eig)
            return run_eigen1d(g, p, a, b, tol, eig_out);
        if (*solve)
            return run_solve(g, solve_config, solve_out);
        if (*scan)
            return run_scan(g, scan_config, lo, hi, steps, allow, scan_out);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const InvalidExponent& e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const RegimeError& e)
    {
        std::cerr << "regime error: " << e.what() << "\n";
        return kRegime;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericFailure;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericFailure;
    }
    return kUsage;
}
