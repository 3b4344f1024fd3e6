// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_PIPELINE_HPP
#define ORTHOPLAP_PIPELINE_HPP

// validate -> barriers -> monotone iteration -> verification.

#include "orthoplap/barriers.hpp"
#include "orthoplap/config.hpp"
#include "orthoplap/io.hpp"
#include "orthoplap/pde_solver.hpp"
#include "orthoplap/verification.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orthoplap
{

struct SolveOutcome
{
    ProblemDiagnostics diagnostics;
    Thresholds thresholds;
    GridField lower;
    GridField upper;
    WeakCheckReport lower_check;
    WeakCheckReport upper_check;
    std::optional<SolveReport> report;
    std::optional<WeakCheckReport> solution_check;
    std::optional<SandwichReport> sandwich;
    std::optional<PoincareReport> poincare;
    std::vector<std::string> failures;   //!< human-readable list of failed checks
    bool passed = false;
};

inline Json to_json(const SolveOutcome& o)
{
    Json j{{"passed", o.passed},
           {"failures", o.failures},
           {"diagnostics", to_json(o.diagnostics)},
           {"thresholds", to_json(o.thresholds)},
           {"lower_check", to_json(o.lower_check)},
           {"upper_check", to_json(o.upper_check)}};
    j["solve"] = o.report ? to_json(*o.report) : Json(nullptr);
    j["solution_check"] = o.solution_check ? to_json(*o.solution_check) : Json(nullptr);
    j["sandwich"] = o.sandwich ? to_json(*o.sandwich) : Json(nullptr);
    j["poincare"] = o.poincare ? to_json(*o.poincare) : Json(nullptr);
    return j;
}

//! Builds the barrier pair for the configured problem. Throws RegimeError for
//! q >= p_N or lambda <= 0, SearchFailure when no admissible eps exists.
inline SolveOutcome prepare_barriers(const RunConfig& cfg, const EigenOptions& eopt = {})
{
    const Problem& prob = cfg.problem;
    const Grid& grid = cfg.grid;
    SolveOutcome out;
    out.diagnostics = validate_problem(prob);
    if (prob.regime() == Regime::out_of_theorem)
        throw RegimeError("q >= p_N: the existence theorem needs q < p_N, so no barrier pair is available");
    if (!(prob.lambda() > 0.0))
        throw RegimeError("lambda <= 0: no admissible eps (positive solutions need lambda > 0)");

    BarrierSpec spec = default_spec(prob);
    if (cfg.alpha)
        spec.alpha = *cfg.alpha;
    const AxisEigenpairs inner = build_eigenpairs(prob, spec.inner, eopt);
    const AxisEigenpairs outer = build_eigenpairs(prob, spec.outer, eopt);
    const auto resolution = default_resolution(prob.dim());
    if (cfg.eps)
        spec.eps = *cfg.eps;
    else if (prob.regime() == Regime::sublinear)
        spec.eps = epsilon_for_lambda(prob, spec, inner, prob.lambda(), resolution);
    else
        spec.eps = find_admissible_epsilon(prob, spec, inner, prob.lambda(), resolution);
    const SubThreshold sub = lambda_star_sub(spec, prob, inner, resolution);
    spec.delta = sub.delta;

    out.lower = sample_to_grid(BarrierFunction(BarrierKind::sub, spec, inner), grid);
    spec.M = cfg.M ? *cfg.M : m_for_lambda(prob, spec, outer, prob.lambda(), grid, &out.lower);
    validate_spec(spec, prob);
    out.upper = sample_to_grid(BarrierFunction(BarrierKind::super, spec, outer), grid);

    out.thresholds.regime = prob.regime();
    out.thresholds.spec = spec;
    out.thresholds.sub = sub;
    out.thresholds.super = lambda_star_super(spec, prob, outer, grid);
    try
    {
        out.thresholds.nonexistence_bound = nonexistence_bound(prob);
    }
    catch (const RegimeError&)
    {
    }

    const double tol = cfg.check_tol * grid.node_volume();
    out.lower_check = weak_inequality_check(out.lower, prob, WeakKind::sub, tol);
    out.upper_check = weak_inequality_check(out.upper, prob, WeakKind::super, tol);
    return out;
}

//! Full pipeline. A SolveFailure from the monotone iteration propagates.
inline SolveOutcome run_solve(const RunConfig& cfg, const EigenOptions& eopt = {})
{
    SolveOutcome out = prepare_barriers(cfg, eopt);
    const Problem& prob = cfg.problem;
    if (!out.lower_check.passed)
        out.failures.emplace_back("lower barrier fails the weak subsolution check");
    if (!out.upper_check.passed)
        out.failures.emplace_back("upper barrier fails the weak supersolution check");

    out.report = monotone_iterate(prob, out.lower, out.upper, cfg.solver);
    const GridField& u = out.report->solution;
    out.solution_check =
        weak_inequality_check(u, prob, WeakKind::solution, cfg.check_tol * cfg.grid.node_volume());
    out.sandwich = sandwich_check(out.lower, u, out.upper);
    out.poincare = poincare_check(u, prob.p(0), 0);

    if (!out.report->monotone_ok)
        out.failures.emplace_back("outer iterates are not monotone");
    if (!out.report->sandwich_ok || !out.sandwich->ok)
        out.failures.emplace_back("solution leaves the barrier sandwich");
    if (!out.solution_check->passed)
        out.failures.emplace_back("solution fails the weak solution check");
    if (!out.poincare->ok)
        out.failures.emplace_back("Poincare inequality fails on the solution");
    out.passed = out.failures.empty();
    return out;
}

} // namespace orthoplap

#endif // ORTHOPLAP_PIPELINE_HPP
