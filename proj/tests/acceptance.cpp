// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run. Prints one [PASS]/[FAIL] line per criterion and
// exits nonzero if any criterion fails.

#include "oracles.hpp"
#include "orthoplap/orthoplap.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace orthoplap;

namespace
{

constexpr double kPi = std::numbers::pi;

struct Outcome
{
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond)
        {
            ok = false;
            detail << " {failed: " << what << "}";
        }
    }
};

struct Barriers
{
    BarrierSpec spec;
    AxisEigenpairs inner, outer;
    GridField lower, upper;
};

Barriers make_barriers(const Problem& prob, const Grid& g)
{
    Barriers b;
    b.spec = default_spec(prob);
    b.inner = build_eigenpairs(prob, b.spec.inner);
    b.outer = build_eigenpairs(prob, b.spec.outer);
    b.spec.eps = epsilon_for_lambda(prob, b.spec, b.inner, prob.lambda(), default_resolution(prob.dim()));
    b.lower = sample_to_grid(BarrierFunction(BarrierKind::sub, b.spec, b.inner), g);
    b.spec.M = m_for_lambda(prob, b.spec, b.outer, prob.lambda(), g, &b.lower);
    b.upper = sample_to_grid(BarrierFunction(BarrierKind::super, b.spec, b.outer), g);
    return b;
}

// 1. Linear eigenpair: eta = pi^2 to 1e-8, v = sin(pi x) to 1e-6, under a second.
void criterion1(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Eigenpair1D e = solve_eigenpair(2.0, Interval(0.0, 1.0));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double verr = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k)
        verr = std::max(verr, std::abs(e.values()[k] - std::sin(kPi * e.x(k))));
    const double eerr = std::abs(e.eta() - kPi * kPi);
    o.detail << "|eta - pi^2| = " << eerr << ", max|v - sin| = " << verr << ", time = " << secs << " s";
    o.require(eerr <= 1e-8, "eta");
    o.require(verr <= 1e-6, "profile");
    o.require(secs < 1.0, "time");
}

// 2. Nonlinear eigenvalues against (p-1)(pi_p/L)^p from the closed-form pi_p.
void criterion2(Outcome& o)
{
    double worst = 0.0;
    for (double p : {1.5, 3.0, 4.0})
        for (double L : {1.0, 2.0})
        {
            const double ref = (p - 1.0) * std::pow(oracle::pi_p(p) / L, p);
            worst = std::max(worst, std::abs(solve_eigenpair(p, Interval(0.0, L)).eta() - ref) / ref);
        }
    o.detail << "max relative error = " << worst;
    o.require(worst <= 1e-6, "relative error");
}

// 3. Sampled barriers satisfy the discrete inequalities at 65^2, and the
//    discrete residual of the subsolution approaches the analytic one under refinement.
void criterion3(Outcome& o)
{
    const Problem prob({2.0, 4.0}, 1.5, 1.0, Box::unit(2));
    std::vector<double> sub_viol, super_viol, gap;
    for (std::size_t n : {33u, 65u})
    {
        const Grid g(prob.omega(), {n, n});
        const Barriers b = make_barriers(prob, g);
        const double tol = 1e-3 * g.node_volume();
        const auto sub = weak_inequality_check(b.lower, prob, WeakKind::sub, tol);
        const auto sup = weak_inequality_check(b.upper, prob, WeakKind::super, tol);
        sub_viol.push_back(sub.normalized_violation());
        super_viol.push_back(sup.normalized_violation());
        if (n == 65)
        {
            o.require(sub.passed, "subsolution check at 65");
            o.require(sup.passed, "supersolution check at 65");
        }
        const auto r = weak_residuals(b.lower, prob);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
        {
            if (g.is_boundary(k))
                continue;
            const double strong = oracle::sub_operator(b.spec, prob, b.inner, g.point(k)) -
                                  prob.lambda() * std::pow(b.lower[k], prob.q() - 1.0);
            worst = std::max(worst, std::abs(r[k] / g.node_volume() - strong));
        }
        gap.push_back(worst);
    }
    o.detail << "sub violation 33/65 = " << sub_viol[0] << "/" << sub_viol[1] << ", super violation 33/65 = "
             << super_viol[0] << "/" << super_viol[1] << ", consistency gap ratio = " << gap[0] / gap[1];
    o.require(sub_viol[1] <= sub_viol[0], "sub violation does not grow");
    o.require(super_viol[1] <= super_viol[0], "super violation does not grow");
    o.require(gap[0] / gap[1] >= 1.5, "consistency gap shrinks");
}

// 4. Monotone iteration converges inside the barriers; 1D profile matches the quadrature solution.
void criterion4(Outcome& o)
{
    {
        const Problem prob({2.0, 4.0}, 1.5, 1.0, Box::unit(2));
        const Grid g(prob.omega(), {65, 65});
        const Barriers b = make_barriers(prob, g);
        const SolveReport rep = monotone_iterate(prob, b.lower, b.upper);
        const auto check = weak_inequality_check(rep.solution, prob, WeakKind::solution, 1e-3 * g.node_volume());
        o.detail << "2D: " << rep.iterations << " outer steps, residual = " << check.normalized_violation();
        o.require(rep.converged, "2D converged");
        o.require(rep.monotone_ok, "2D monotone");
        o.require(rep.sandwich_ok && sandwich_check(b.lower, rep.solution, b.upper).ok, "2D sandwich");
        o.require(check.passed, "2D weak residual");
        o.require(rep.positive_mass > 0.0, "2D positive");
    }
    {
        const Problem prob({2.0}, 1.5, 40.0, Box::unit(1));
        const Grid g(prob.omega(), {257});
        const Barriers b = make_barriers(prob, g);
        const SolveReport rep = monotone_iterate(prob, b.lower, b.upper);
        const oracle::SublinearProfile exact(40.0);
        double err = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            err = std::max(err, std::abs(rep.solution[k] - exact(g.coordinate(0, k))));
        o.detail << "; 1D: relative error vs quadrature = " << err / exact.peak();
        o.require(rep.converged, "1D converged");
        o.require(err <= 0.02 * exact.peak(), "1D oracle");
    }
}

// 5. q = p_1: no positive solution is found for lambda below the nonexistence bound.
void criterion5(Outcome& o)
{
    const Problem tmpl({2.0, 4.0}, 2.0, 1.0, Box::unit(2));
    const Grid g(tmpl.omega(), {33, 33});
    const ScanResult r = lambda_scan(tmpl, g, 0.25, 200.0, 12);
    const double bound = r.nonexistence_bound.value_or(0.0);
    std::size_t below = 0, wrong = 0;
    for (const auto& pt : r.points)
        if (pt.lambda < bound)
        {
            ++below;
            if (pt.solution_found)
                ++wrong;
        }
    o.detail << "bound = " << bound << ", " << below << " ladder points below, " << wrong
             << " reported solvable; bracket = [" << r.bracket_lo << ", " << r.bracket_hi << "]";
    o.require(std::abs(bound - 1.0) < 1e-12, "bound value");
    o.require(below > 0, "ladder reaches below the bound");
    o.require(wrong == 0, "no success below the bound");
    o.require(r.any_success && r.bracket_lo >= bound, "bracket above the bound");
}

// 6. Linear calibration: the scan brackets the first Dirichlet eigenvalue tightly.
void criterion6(Outcome& o)
{
    const Problem tmpl({2.0}, 2.0, 1.0, Box::unit(1));
    const Grid g(tmpl.omega(), {129});
    const ScanResult r = lambda_scan(tmpl, g, 8.0, 12.0, 17);
    const double lam1 = kPi * kPi;
    const double h = g.spacing(0);
    const double lam_h = 4.0 / (h * h) * std::pow(std::sin(kPi * h / 2.0), 2.0);
    o.detail << "bracket = [" << r.bracket_lo << ", " << r.bracket_hi << "], width / pi^2 = "
             << (r.bracket_hi - r.bracket_lo) / lam1;
    o.require(r.any_success, "some success");
    o.require(r.bracket_lo <= lam_h && lam_h <= r.bracket_hi, "contains discrete eigenvalue");
    o.require(r.bracket_lo <= lam1 && lam1 <= r.bracket_hi, "contains pi^2");
    o.require(r.bracket_hi - r.bracket_lo <= 0.05 * lam1, "width");
}

// 7. Structural properties: S homogeneity in eps, flux monotonicity,
//    symmetry of the computed solution, Poincare inequality on converged fields.
void criterion7(Outcome& o)
{
    const Problem prob({2.0, 4.0}, 1.5, 3.0, Box({Interval(-1.0, 1.0), Interval(-0.5, 0.5)}));
    BarrierSpec spec = default_spec(prob);
    const auto inner = build_eigenpairs(prob, spec.inner);
    std::mt19937_64 rng(11);
    double homog = 0.0;
    for (int k = 0; k < 100; ++k)
    {
        std::vector<double> x(2);
        for (std::size_t i = 0; i < 2; ++i)
        {
            const Interval& iv = spec.inner[i];
            x[i] = std::uniform_real_distribution<double>(iv.a + 0.05 * iv.length(), iv.b - 0.05 * iv.length())(rng);
        }
        spec.eps = 1.0;
        const auto base = s_summands(spec, prob, inner, x);
        const double t = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        spec.eps = t;
        const auto scaled = s_summands(spec, prob, inner, x);
        for (std::size_t i = 0; i < 2; ++i)
        {
            const double ref = std::pow(t, prob.p(i) - prob.q()) * base[i];
            homog = std::max(homog, std::abs(scaled[i] - ref) / std::max(1e-300, std::abs(ref)));
        }
    }
    o.require(homog <= 1e-12, "eps homogeneity");

    std::uniform_real_distribution<double> U(-5.0, 5.0);
    std::size_t bad_flux = 0;
    for (double p : {1.5, 2.0, 4.0})
        for (int k = 0; k < 10000; ++k)
        {
            const double a = U(rng), b = U(rng);
            if ((flux(a, p) - flux(b, p)) * (a - b) < 0.0)
                ++bad_flux;
        }
    o.require(bad_flux == 0, "flux monotonicity");

    const Grid g(prob.omega(), {33, 25});
    const Barriers b = make_barriers(prob, g);
    const SolveReport rep = monotone_iterate(prob, b.lower, b.upper);
    double asym = 0.0;
    for (std::size_t axis = 0; axis < 2; ++axis)
        for (std::size_t k = 0; k < g.size(); ++k)
            asym = std::max(asym, std::abs(rep.solution[k] - rep.solution[g.reflect(k, axis)]));
    asym /= rep.solution.max();
    o.require(asym <= 1e-8, "symmetry");

    bool poincare_ok = true;
    for (std::size_t axis = 0; axis < 2; ++axis)
        poincare_ok = poincare_check(rep.solution, prob.p(axis), axis).ok && poincare_ok;
    o.require(poincare_ok, "Poincare");

    o.detail << "homogeneity error = " << homog << ", flux violations = " << bad_flux << ", asymmetry = " << asym
             << ", Poincare " << (poincare_ok ? "ok" : "violated");
}

// 8. Continuation: the previous solution is a valid subsolution at the next
//    lambda and the warm start needs fewer outer steps than a cold start.
void criterion8(Outcome& o)
{
    const Problem tmpl({2.0, 4.0}, 1.5, 1.0, Box::unit(2));
    const Grid g(tmpl.omega(), {33, 33});
    const ScanResult warm = lambda_scan(tmpl, g, 2.0, 4.0, 2);
    const ScanResult cold = lambda_scan(tmpl, g, 4.0, 8.0, 2);
    const auto& w = warm.points[1];
    const auto& c = cold.points[0];
    o.detail << "warm " << w.outer_iterations << " vs cold " << c.outer_iterations
             << " outer steps, seed subsolution check " << (w.seed_passes_sub_check ? "pass" : "fail");
    o.require(w.solution_found && c.solution_found, "both solved");
    o.require(w.method == ScanMethod::warm && c.method == ScanMethod::barrier, "methods");
    o.require(w.seed_passes_sub_check, "seed is a subsolution");
    o.require(w.outer_iterations < c.outer_iterations, "fewer outer steps");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"linear eigenpair", criterion1},
        {"nonlinear eigenvalues", criterion2},
        {"barrier inequalities", criterion3},
        {"monotone iteration", criterion4},
        {"nonexistence below the bound", criterion5},
        {"linear calibration bracket", criterion6},
        {"structural properties", criterion7},
        {"warm-start continuation", criterion8},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            criteria[i].second(o);
        }
        catch (const std::exception& e)
        {
            o.ok = false;
            o.detail << " {exception: " << e.what() << "}";
        }
        std::cout << (o.ok ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first << ": "
                  << o.detail.str() << std::endl;
        failures += o.ok ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
