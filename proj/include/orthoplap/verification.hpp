// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_VERIFICATION_HPP
#define ORTHOPLAP_VERIFICATION_HPP

// Audit layer. Residuals here are assembled face by face (summation by parts
// against nodal hat functions) and deliberately share nothing with the
// solver's divergence-form stencil except the scalar flux.

#include "orthoplap/flux.hpp"
#include "orthoplap/grid.hpp"
#include "orthoplap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace orthoplap
{

enum class WeakKind
{
    sub,
    super,
    solution
};

inline const char* to_string(WeakKind k)
{
    switch (k)
    {
    case WeakKind::sub:
        return "sub";
    case WeakKind::super:
        return "super";
    case WeakKind::solution:
        return "solution";
    }
    return "unknown";
}

//! R_j = sum over faces of flux(difference quotient) * d(phi_j) * face volume
//!       - lambda (u_+)_j^{q-1} * node volume,
//! for every interior node j (0 on boundary nodes). phi_j is the nodal hat.
inline std::vector<double> weak_residuals(const GridField& u, const Problem& prob)
{
    const Grid& g = u.grid();
    if (g.dim() != prob.dim())
        throw GridMismatch("field and problem dimension disagree");
    const double vol = g.node_volume();
    std::vector<double> r(g.size(), 0.0);

    for (std::size_t axis = 0; axis < g.dim(); ++axis)
    {
        const std::size_t s = g.stride(axis);
        const double h = g.spacing(axis);
        const double p = prob.p(axis);
        for (std::size_t k = 0; k < g.size(); ++k)
        {
            if (g.index_along(k, axis) + 1 == g.count(axis))
                continue;
            bool transverse_interior = true;
            for (std::size_t j = 0; j < g.dim() && transverse_interior; ++j)
            {
                if (j == axis)
                    continue;
                const std::size_t ij = g.index_along(k, j);
                transverse_interior = ij > 0 && ij + 1 < g.count(j);
            }
            if (!transverse_interior)
                continue;
            const double f = flux((u[k + s] - u[k]) / h, p) * vol;
            // d(phi_k) = -1/h and d(phi_{k+s}) = +1/h on this face.
            if (!g.is_boundary(k))
                r[k] -= f / h;
            if (!g.is_boundary(k + s))
                r[k + s] += f / h;
        }
    }
    const double lam = prob.lambda(), qm1 = prob.q() - 1.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!g.is_boundary(k))
            r[k] -= lam * std::pow(std::max(u[k], 0.0), qm1) * vol;
    return r;
}

struct WeakCheckReport
{
    WeakKind kind = WeakKind::solution;
    bool passed = false;
    double tol = 0.0;
    double max_residual = 0.0;   //!< volume-weighted
    double min_residual = 0.0;
    double node_volume = 0.0;
    double worst_violation = 0.0; //!< >= 0; how far the inequality is violated (volume-weighted)
    std::vector<std::pair<std::size_t, double>> worst_nodes; //!< up to 10 (flat index, R_j)

    //! Violation per unit node volume, i.e. in the units of the strong form.
    double normalized_violation() const { return worst_violation / node_volume; }
};

//! Discrete weak sub/super/solution inequality against every nonnegative nodal hat.
inline WeakCheckReport weak_inequality_check(const GridField& u, const Problem& prob, WeakKind kind, double tol)
{
    const Grid& g = u.grid();
    const double scale = std::max(1.0, std::abs(u.max()) + std::abs(u.min()));
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        if (!g.is_boundary(k))
            continue;
        const bool ok = kind == WeakKind::sub     ? u[k] <= 0.0
                        : kind == WeakKind::super ? u[k] >= 0.0
                                                  : std::abs(u[k]) <= 1e-14 * scale;
        if (!ok)
            throw ContractError(std::string("boundary values incompatible with a ") + to_string(kind) + " check");
    }

    const auto r = weak_residuals(u, prob);
    WeakCheckReport rep;
    rep.kind = kind;
    rep.tol = tol;
    rep.node_volume = g.node_volume();
    rep.max_residual = -std::numeric_limits<double>::infinity();
    rep.min_residual = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        if (g.is_boundary(k))
            continue;
        rep.max_residual = std::max(rep.max_residual, r[k]);
        rep.min_residual = std::min(rep.min_residual, r[k]);
        const double badness = kind == WeakKind::sub ? r[k] : kind == WeakKind::super ? -r[k] : std::abs(r[k]);
        ranked.emplace_back(badness, k);
    }
    if (ranked.empty())
    {
        rep.max_residual = rep.min_residual = 0.0;
    }
    const std::size_t keep = std::min<std::size_t>(10, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + keep, ranked.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    for (std::size_t i = 0; i < keep; ++i)
        rep.worst_nodes.emplace_back(ranked[i].second, r[ranked[i].second]);
    rep.worst_violation = ranked.empty() ? 0.0 : std::max(0.0, ranked.front().first);
    rep.passed = rep.worst_violation <= tol;
    return rep;
}

struct SandwichReport
{
    bool ok = true;
    double worst_gap = 0.0;        //!< most negative of (mid - lower) and (upper - mid)
    std::optional<std::size_t> node; //!< first node where the order fails
    bool below_lower = false;
};

//! lower <= mid <= upper nodewise, with slack 1e-12.
inline SandwichReport sandwich_check(const GridField& lower, const GridField& mid, const GridField& upper,
                                     double slack = 1e-12)
{
    require_same_grid(lower, mid);
    require_same_grid(mid, upper);
    SandwichReport rep;
    rep.worst_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mid.size(); ++k)
    {
        const double lo_gap = mid[k] - lower[k];
        const double hi_gap = upper[k] - mid[k];
        rep.worst_gap = std::min({rep.worst_gap, lo_gap, hi_gap});
        if ((lo_gap < -slack || hi_gap < -slack) && !rep.node)
        {
            rep.ok = false;
            rep.node = k;
            rep.below_lower = lo_gap < -slack;
        }
    }
    return rep;
}

struct PoincareReport
{
    double lhs = 0.0; //!< ||u||_r
    double rhs = 0.0; //!< (d^i r / 2) ||d_i u||_r
    bool ok = true;
};

//! Directional Poincare inequality ||u||_r <= (d^i r / 2) ||d_i u||_r with
//! trapezoid node weights and face-midpoint quadrature for the derivative.
inline PoincareReport poincare_check(const GridField& u, double r, std::size_t axis, double slack = 1e-6)
{
    if (!(r >= 1.0))
        throw ContractError("Poincare exponent r must be >= 1");
    const Grid& g = u.grid();
    if (axis >= g.dim())
        throw ContractError("axis out of range");
    if (u.boundary_max_abs() > 0.0)
        throw ContractError("Poincare check needs zero boundary values");

    auto weight = [&](std::size_t k, std::optional<std::size_t> skip) {
        double w = 1.0;
        for (std::size_t j = 0; j < g.dim(); ++j)
        {
            if (skip && *skip == j)
            {
                w *= g.spacing(j);
                continue;
            }
            const std::size_t ij = g.index_along(k, j);
            w *= (ij == 0 || ij + 1 == g.count(j)) ? 0.5 * g.spacing(j) : g.spacing(j);
        }
        return w;
    };

    double node_sum = 0.0, face_sum = 0.0;
    const std::size_t s = g.stride(axis);
    const double h = g.spacing(axis);
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        node_sum += std::pow(std::abs(u[k]), r) * weight(k, std::nullopt);
        if (g.index_along(k, axis) + 1 < g.count(axis))
            face_sum += std::pow(std::abs((u[k + s] - u[k]) / h), r) * weight(k, axis);
    }
    PoincareReport rep;
    rep.lhs = std::pow(node_sum, 1.0 / r);
    rep.rhs = 0.5 * g.box().side(axis) * r * std::pow(face_sum, 1.0 / r);
    rep.ok = rep.lhs <= rep.rhs * (1.0 + slack);
    return rep;
}

struct ProblemDiagnostics
{
    double inverse_sum = 0.0;
    bool sum_condition = false; //!< sum 1/p_i > 1
    std::optional<double> p_star;
    std::optional<double> p_infinity;
    Regime regime = Regime::sublinear;
    std::optional<bool> q_below_p_infinity;
    bool sorted_input = true;
    std::vector<std::string> warnings;
};

inline ProblemDiagnostics validate_problem(const Problem& prob)
{
    ProblemDiagnostics d;
    d.inverse_sum = prob.inverse_sum();
    d.sum_condition = d.inverse_sum > 1.0;
    d.p_star = prob.p_star();
    d.p_infinity = prob.p_infinity();
    d.regime = prob.regime();
    if (d.p_infinity)
        d.q_below_p_infinity = prob.q() < *d.p_infinity;
    d.sorted_input = prob.input_was_sorted();
    if (!d.sorted_input)
        d.warnings.emplace_back("exponents were not ascending; axes were permuted to sort them");
    if (!d.sum_condition)
        d.warnings.emplace_back("sum of 1/p_i <= 1: p* undefined (barrier construction does not use it)");
    if (d.regime == Regime::out_of_theorem)
        d.warnings.emplace_back("q >= p_N: outside the hypotheses of the existence theorem");
    return d;
}

struct NonexistenceAudit
{
    bool applicable = false;       //!< q = p_1
    double bound = 0.0;
    bool solves = false;           //!< passes the solution check
    bool nonzero = false;
    PoincareReport poincare;
    bool contradiction = false;    //!< nonzero discrete solution with lambda below the bound
};

//! Flags a nonzero field that claims to solve the q = p_1 problem with lambda
//! below (2/(d^1 p_1))^{p_1}, which the Poincare inequality rules out.
inline NonexistenceAudit audit_nonexistence(const GridField& u, const Problem& prob, double tol)
{
    NonexistenceAudit a;
    const double p1 = prob.p(0);
    a.applicable = std::abs(prob.q() - p1) <= 1e-12 * p1;
    if (!a.applicable)
        return a;
    a.bound = std::pow(2.0 / (prob.omega().side(0) * p1), p1);
    a.nonzero = u.max() > 0.0 || u.min() < 0.0;
    a.poincare = poincare_check(u, p1, 0);
    a.solves = weak_inequality_check(u, prob, WeakKind::solution, tol).passed;
    a.contradiction = a.solves && a.nonzero && prob.lambda() < a.bound;
    return a;
}

} // namespace orthoplap

#endif // ORTHOPLAP_VERIFICATION_HPP
