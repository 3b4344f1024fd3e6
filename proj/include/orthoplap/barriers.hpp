// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_BARRIERS_HPP
#define ORTHOPLAP_BARRIERS_HPP

// Explicit barriers for the orthotropic problem, built from one-dimensional
// principal eigenfunctions v_i:
//
//   subsolution    u_sub(x)   = eps * prod_i v_i(x_i)^{alpha_i}  on the inner box U, 0 elsewhere,
//   supersolution  u_super(x) = M * prod_i v_i(x_i)              with v_i on an enclosing box.
//
// u_sub is a subsolution as soon as lambda >= max_U S with
//
//   S(x) = sum_i (eps alpha_i prod_{j!=i} v_j^{alpha_j})^{p_i-q} v_i^{alpha_i(p_i-q)-p_i}
//                * [(1-alpha_i)(p_i-1)|v_i'|^{p_i} + eta_i v_i^{p_i}],
//
// and u_super is a supersolution whenever lambda <= min sum_i eta_i (M prod_j v_j)^{p_i-q}.

#include "orthoplap/core.hpp"
#include "orthoplap/eigen1d.hpp"
#include "orthoplap/grid.hpp"
#include "orthoplap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

namespace orthoplap
{

using AxisEigenpairs = std::vector<Eigenpair1D>;

struct BarrierSpec
{
    Box inner;                  //!< U, contained in omega
    Box outer;                  //!< enclosing box, strictly containing the closure of omega
    double eps = 1.0;
    std::vector<double> alpha;
    double M = 1.0;
    std::vector<double> delta;  //!< boundary-layer width per axis of the inner box
    std::size_t i0 = 0;
    double alpha_factor = 2.0;  //!< slack multiplier used by default_alpha
};

//! alpha_i = 2 p_i / (p_i - q) when p_i > q, 2 otherwise.
inline std::vector<double> default_alpha(const Problem& prob, double factor = 2.0)
{
    if (prob.regime() == Regime::out_of_theorem)
        throw RegimeError("no subsolution recipe for q >= p_N");
    std::vector<double> alpha;
    for (double pi : prob.p())
        alpha.push_back(pi > prob.q() ? factor * pi / (pi - prob.q()) : factor);
    return alpha;
}

//! Inner box = omega, outer box = omega inflated by 25% of each side.
inline BarrierSpec default_spec(const Problem& prob)
{
    BarrierSpec spec;
    spec.inner = prob.omega();
    spec.outer = prob.omega().inflated(0.25);
    spec.alpha = default_alpha(prob);
    spec.eps = 1.0;
    spec.M = 1.0;
    spec.i0 = prob.i0();
    for (std::size_t i = 0; i < prob.dim(); ++i)
        spec.delta.push_back(0.25 * spec.inner.side(i));
    return spec;
}

inline void validate_spec(const BarrierSpec& spec, const Problem& prob)
{
    const std::size_t n = prob.dim();
    if (spec.alpha.size() != n || spec.inner.dim() != n || spec.outer.dim() != n)
        throw ContractError("barrier spec dimension mismatch");
    if (!(spec.eps > 0.0) || !(spec.M > 0.0))
        throw ContractError("eps and M must be positive");
    for (std::size_t i = 0; i < n; ++i)
    {
        const double pi = prob.p(i);
        if (!(spec.alpha[i] > 1.0))
            throw ContractError("alpha_i must exceed 1");
        if (pi > prob.q() && !(spec.alpha[i] > pi / (pi - prob.q())))
        {
            std::ostringstream os;
            os << "alpha_" << i << " = " << spec.alpha[i] << " must exceed p_i/(p_i-q) = " << pi / (pi - prob.q());
            throw ContractError(os.str());
        }
    }
    if (!prob.omega().contains(spec.inner))
        throw ContainmentError("inner box must lie inside omega");
    if (!spec.outer.strictly_contains(prob.omega()))
        throw ContainmentError("outer box must strictly contain the closure of omega");
}

inline AxisEigenpairs build_eigenpairs(const Problem& prob, const Box& box, const EigenOptions& opt = {})
{
    AxisEigenpairs out;
    for (std::size_t i = 0; i < prob.dim(); ++i)
    {
        // Axes sharing (p, interval) share the eigenpair.
        std::optional<std::size_t> same;
        for (std::size_t j = 0; j < i; ++j)
            if (prob.p(j) == prob.p(i) && box[j] == box[i])
                same = j;
        if (same)
            out.push_back(out[*same]);
        else
            out.push_back(solve_eigenpair(prob.p(i), box[i], opt));
    }
    return out;
}

//! S(x) and its split into indices with p_i <= q (S0) and p_i > q (S1).
struct SValue
{
    double total = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
};

namespace detail
{

// Summand of S for axis i, given v_j^{alpha_j} for the other axes and v_i, v_i':
//   (eps prod_{j!=i} v_j^{alpha_j})^{p-q} alpha^{p-1} v^{alpha(p-q)-p} [(1-alpha)(p-1)|v'|^p + eta v^p].
// alpha enters with power p-1: the flux of d_i(eps v^alpha ...) carries (eps alpha)^{p-1},
// and only eps^{q-1} of it cancels against u^{q-1}.
inline double s_summand(double eps, double alpha, double p, double q, double eta, double cross_product,
                        double v, double dv)
{
    const double own_exp = alpha * (p - q) - p;
    if ((v <= 0.0 && own_exp < 0.0) || (cross_product <= 0.0 && p - q < 0.0))
        throw DomainError("S evaluated where an eigenfunction vanishes with a negative exponent");
    const double bracket = (1.0 - alpha) * (p - 1.0) * std::pow(std::abs(dv), p) + eta * std::pow(v, p);
    return std::pow(eps * cross_product, p - q) * std::pow(alpha, p - 1.0) * std::pow(v, own_exp) * bracket;
}

inline double s0_bracket(double alpha, double p, double eta, double v, double dv)
{
    return (1.0 - alpha) * (p - 1.0) * std::pow(std::abs(dv), p) + eta * std::pow(v, p);
}

} // namespace detail

//! Per-axis summands of S at x (x strictly inside the inner box).
inline std::vector<double> s_summands(const BarrierSpec& spec, const Problem& prob, const AxisEigenpairs& eigs,
                                      std::span<const double> x)
{
    const std::size_t n = prob.dim();
    std::vector<double> v(n), dv(n), va(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        v[i] = eigs[i].value(x[i]);
        dv[i] = eigs[i].derivative(x[i]);
        va[i] = std::pow(v[i], spec.alpha[i]);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double cross = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                cross *= va[j];
        out[i] = detail::s_summand(spec.eps, spec.alpha[i], prob.p(i), prob.q(), eigs[i].eta(), cross, v[i], dv[i]);
    }
    return out;
}

inline SValue pointwise_S(const BarrierSpec& spec, const Problem& prob, const AxisEigenpairs& eigs,
                          std::span<const double> x)
{
    const auto terms = s_summands(spec, prob, eigs, x);
    SValue s;
    for (std::size_t i = 0; i < terms.size(); ++i)
    {
        if (prob.p(i) <= prob.q())
            s.s0 += terms[i];
        else
            s.s1 += terms[i];
    }
    s.total = s.s0 + s.s1;
    return s;
}

//! Largest delta (halving from side/4) for which the bracket
//! (1-alpha)(p-1)|v'|^p + eta v^p is negative on both boundary layers of
//! width delta; nullopt when none down to side * 1e-6 works.
inline std::optional<double> certify_boundary_layer(const Eigenpair1D& e, double alpha, std::size_t scan = 2000)
{
    const Interval iv = e.interval();
    const double side = iv.length();
    for (double delta = 0.25 * side; delta >= side * 1e-6; delta *= 0.5)
    {
        bool ok = true;
        for (std::size_t k = 0; k <= scan && ok; ++k)
        {
            const double t = delta * static_cast<double>(k) / static_cast<double>(scan);
            for (double x : {iv.a + t, iv.b - t})
            {
                if (detail::s0_bracket(alpha, e.p(), e.eta(), e.value(x), e.derivative(x)) >= 0.0)
                {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            return delta;
    }
    return std::nullopt;
}

struct SubThreshold
{
    double value = 0.0;            //!< lambda_* used by the toolkit (max over all interior nodes)
    double interior_max = 0.0;     //!< max over the delta-interior nodes
    double layer_max = -std::numeric_limits<double>::infinity(); //!< max over boundary-layer nodes
    std::vector<double> delta;     //!< certified layer width per axis
    std::vector<bool> certified;   //!< per-axis bracket certificate
};

//! lambda_* = max over the inner box of S, evaluated on a tensor grid of the
//! inner box with `resolution` nodes per axis.
inline SubThreshold lambda_star_sub(const BarrierSpec& spec, const Problem& prob, const AxisEigenpairs& eigs,
                                    const std::vector<std::size_t>& resolution)
{
    if (prob.regime() == Regime::out_of_theorem)
        throw RegimeError("lambda_* is only defined for q < p_N");
    const std::size_t n = prob.dim();
    if (resolution.size() != n || eigs.size() != n)
        throw ContractError("resolution / eigenpair count must match the dimension");

    SubThreshold out;
    out.delta.resize(n);
    out.certified.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto d = certify_boundary_layer(eigs[i], spec.alpha[i]);
        out.certified[i] = d.has_value();
        out.delta[i] = d.value_or(0.25 * spec.inner.side(i));
        if (!d && prob.p(i) <= prob.q())
        {
            std::ostringstream os;
            os << "no boundary layer certifies a negative bracket on axis " << i
               << " (alpha too small or mesh too coarse)";
            throw CertificationFailure(os.str());
        }
    }

    const Grid grid(spec.inner, resolution);
    // Per-axis tables: v^alpha, the axis-own factor W_i = alpha^{p-1} v^{alpha(p-q)-p} * bracket, layer flags.
    std::vector<std::vector<double>> va(n), own(n);
    std::vector<std::vector<char>> in_layer(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::size_t m = grid.count(i);
        va[i].resize(m);
        own[i].resize(m);
        in_layer[i].resize(m);
        const double p = prob.p(i), q = prob.q(), al = spec.alpha[i];
        for (std::size_t j = 1; j + 1 < m; ++j)
        {
            const double x = grid.coordinate(i, j);
            const double v = eigs[i].value(x), dv = eigs[i].derivative(x);
            if (!(v > 0.0))
                throw DomainError("eigenfunction vanishes at an interior node of the inner box");
            va[i][j] = std::pow(v, al);
            own[i][j] = std::pow(al, p - 1.0) * std::pow(v, al * (p - q) - p) *
                        detail::s0_bracket(al, p, eigs[i].eta(), v, dv);
            const Interval& iv = spec.inner[i];
            in_layer[i][j] = (x - iv.a < out.delta[i] || iv.b - x < out.delta[i]) ? 1 : 0;
        }
    }

    double interior = -std::numeric_limits<double>::infinity();
    double layer = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        if (grid.is_boundary(k))
            continue;
        bool layered = false;
        for (std::size_t i = 0; i < n; ++i)
        {
            idx[i] = grid.index_along(k, i);
            layered = layered || in_layer[i][idx[i]];
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double cross = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    cross *= va[j][idx[j]];
            s += std::pow(spec.eps * cross, prob.p(i) - prob.q()) * own[i][idx[i]];
        }
        if (layered)
            layer = std::max(layer, s);
        else
            interior = std::max(interior, s);
    }
    out.interior_max = interior;
    out.layer_max = layer;
    out.value = std::max(interior, layer);
    if (!std::isfinite(out.value))
        throw CertificationFailure("lambda_* is not finite on the scan grid");
    return out;
}

inline std::vector<std::size_t> default_resolution(std::size_t dim, std::size_t per_axis = 201)
{
    return std::vector<std::size_t>(dim, per_axis);
}

//! Largest eps (bisection from 1 downward) with lambda_*(eps) <= lambda; sublinear regime only.
inline double epsilon_for_lambda(const Problem& prob, const BarrierSpec& tmpl, const AxisEigenpairs& eigs,
                                 double lambda, const std::vector<std::size_t>& resolution)
{
    if (prob.regime() != Regime::sublinear)
        throw RegimeError("epsilon_for_lambda requires the sublinear regime q < p_1");
    if (!(lambda > 0.0))
        throw RegimeError("no admissible eps: a positive solution needs lambda > 0 when q < p_1");
    BarrierSpec spec = tmpl;
    auto admissible = [&](double eps) {
        spec.eps = eps;
        return lambda_star_sub(spec, prob, eigs, resolution).value <= lambda;
    };
    double hi = 1.0;
    if (admissible(hi))
        return hi;
    double lo = 0.5;
    int halvings = 0;
    while (!admissible(lo))
    {
        hi = lo;
        lo *= 0.5;
        if (++halvings > 2000)
            throw SearchFailure("no admissible eps found", lo, 1.0);
    }
    for (int it = 0; it < 40; ++it)
    {
        const double mid = std::sqrt(lo * hi);
        if (admissible(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

//! eps search valid in both theorem regimes. In the intermediate regime the
//! S0 part grows as eps shrinks, so a geometric ladder is scanned and the
//! largest admissible rung is refined by bisection toward the next rung up.
inline double find_admissible_epsilon(const Problem& prob, const BarrierSpec& tmpl, const AxisEigenpairs& eigs,
                                      double lambda, const std::vector<std::size_t>& resolution)
{
    if (prob.regime() == Regime::sublinear)
        return epsilon_for_lambda(prob, tmpl, eigs, lambda, resolution);
    if (prob.regime() == Regime::out_of_theorem)
        throw RegimeError("no subsolution recipe for q >= p_N");
    BarrierSpec spec = tmpl;
    auto threshold = [&](double eps) {
        spec.eps = eps;
        return lambda_star_sub(spec, prob, eigs, resolution).value;
    };
    for (int k = 10; k >= -60; --k)
    {
        const double eps = std::ldexp(1.0, k);
        if (threshold(eps) <= lambda)
        {
            double lo = eps, hi = 2.0 * eps;
            for (int it = 0; it < 30; ++it)
            {
                const double mid = std::sqrt(lo * hi);
                if (threshold(mid) <= lambda)
                    lo = mid;
                else
                    hi = mid;
            }
            return lo;
        }
    }
    throw SearchFailure("no eps in [2^-60, 2^10] makes the subsolution admissible", std::ldexp(1.0, -60),
                        std::ldexp(1.0, 10));
}

struct SuperThreshold
{
    double value = 0.0;          //!< min over the grid of sum_i eta_i (M prod v_j)^{p_i-q}
    std::size_t argmin = 0;      //!< flat index on the evaluation grid
};

namespace detail
{

inline std::vector<double> outer_product_on(const Grid& grid, const AxisEigenpairs& outer)
{
    const std::size_t n = grid.dim();
    std::vector<std::vector<double>> axis(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        axis[i].resize(grid.count(i));
        for (std::size_t j = 0; j < grid.count(i); ++j)
            axis[i][j] = outer[i].value(grid.coordinate(i, j));
    }
    std::vector<double> prod(grid.size(), 1.0);
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            prod[k] *= axis[i][grid.index_along(k, i)];
    return prod;
}

inline void require_super_preconditions(const BarrierSpec& spec, const Problem& prob, const Grid& grid)
{
    if (!spec.outer.strictly_contains(prob.omega()))
        throw ContainmentError("outer box must strictly contain the closure of omega");
    if (prob.regime() == Regime::out_of_theorem)
        throw RegimeError("no supersolution recipe for q >= p_N");
    if (!prob.omega().contains(grid.box()))
        throw ContainmentError("evaluation grid must cover a subset of omega");
}

} // namespace detail

//! lambda^* = min over the closure of omega (grid nodes) of sum_i eta_i (M prod_j v_j)^{p_i - q}.
inline SuperThreshold lambda_star_super(const BarrierSpec& spec, const Problem& prob, const AxisEigenpairs& outer,
                                        const Grid& grid)
{
    detail::require_super_preconditions(spec, prob, grid);
    const auto prod = detail::outer_product_on(grid, outer);
    SuperThreshold out;
    out.value = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < prob.dim(); ++i)
            s += outer[i].eta() * std::pow(spec.M * prod[k], prob.p(i) - prob.q());
        if (s < out.value)
        {
            out.value = s;
            out.argmin = k;
        }
    }
    return out;
}

//! First M in 1, 2, 4, ... with lambda^*(M) >= lambda and M prod v_j >= floor on the grid.
inline double m_for_lambda(const Problem& prob, const BarrierSpec& tmpl, const AxisEigenpairs& outer, double lambda,
                           const Grid& grid, const GridField* floor = nullptr)
{
    detail::require_super_preconditions(tmpl, prob, grid);
    if (floor && !(floor->grid() == grid))
        throw GridMismatch("floor field must live on the evaluation grid");
    const auto prod = detail::outer_product_on(grid, outer);
    BarrierSpec spec = tmpl;
    for (int k = 0; k < 1100; ++k)
    {
        spec.M = std::ldexp(1.0, k);
        bool dominates = true;
        if (floor)
            for (std::size_t j = 0; j < grid.size() && dominates; ++j)
                dominates = spec.M * prod[j] >= (*floor)[j];
        if (dominates && lambda_star_super(spec, prob, outer, grid).value >= lambda)
            return spec.M;
    }
    throw SearchFailure("no admissible M found", 1.0, std::ldexp(1.0, 1099));
}

//! (2 / (d^1 p_1))^{p_1}; below it no positive solution exists when q = p_1.
inline double nonexistence_bound(const Problem& prob)
{
    const double p1 = prob.p(0);
    if (std::abs(prob.q() - p1) > 1e-12 * p1)
        throw RegimeError("the Poincare nonexistence bound is derived for q = p_1 only");
    const double d1 = prob.omega().side(0);
    return std::pow(2.0 / (d1 * p1), p1);
}

enum class BarrierKind
{
    sub,
    super
};

//! Evaluator for u_sub or u_super and their partial derivatives.
class BarrierFunction
{
public:
    BarrierFunction(BarrierKind kind, BarrierSpec spec, AxisEigenpairs eigs)
        : kind_(kind), spec_(std::move(spec)), eigs_(std::move(eigs))
    {
        const Box& box = kind_ == BarrierKind::sub ? spec_.inner : spec_.outer;
        if (eigs_.size() != box.dim())
            throw ContractError("one eigenpair per axis required");
        for (std::size_t i = 0; i < box.dim(); ++i)
            if (!(eigs_[i].interval() == box[i]))
                throw ContractError("eigenpair interval does not match the barrier box");
    }

    BarrierKind kind() const { return kind_; }
    const BarrierSpec& spec() const { return spec_; }
    const AxisEigenpairs& eigenpairs() const { return eigs_; }

    double value(std::span<const double> x) const
    {
        if (kind_ == BarrierKind::sub)
        {
            if (!inside_inner(x))
                return 0.0;
            double u = spec_.eps;
            for (std::size_t i = 0; i < eigs_.size(); ++i)
                u *= std::pow(eigs_[i].value(x[i]), spec_.alpha[i]);
            return u;
        }
        double u = spec_.M;
        for (std::size_t i = 0; i < eigs_.size(); ++i)
            u *= eigs_[i].value(x[i]);
        return u;
    }

    double partial(std::span<const double> x, std::size_t axis) const
    {
        if (kind_ == BarrierKind::sub)
        {
            if (!inside_inner(x))
                return 0.0;
            double d = spec_.eps * spec_.alpha[axis];
            for (std::size_t j = 0; j < eigs_.size(); ++j)
            {
                const double v = eigs_[j].value(x[j]);
                d *= j == axis ? std::pow(v, spec_.alpha[j] - 1.0) * eigs_[j].derivative(x[j])
                               : std::pow(v, spec_.alpha[j]);
            }
            return d;
        }
        double d = spec_.M;
        for (std::size_t j = 0; j < eigs_.size(); ++j)
            d *= j == axis ? eigs_[j].derivative(x[j]) : eigs_[j].value(x[j]);
        return d;
    }

private:
    bool inside_inner(std::span<const double> x) const
    {
        for (std::size_t i = 0; i < eigs_.size(); ++i)
            if (!(x[i] > spec_.inner[i].a && x[i] < spec_.inner[i].b))
                return false;
        return true;
    }

    BarrierKind kind_;
    BarrierSpec spec_;
    AxisEigenpairs eigs_;
};

inline BarrierFunction build_barrier(BarrierKind kind, const BarrierSpec& spec, const Problem& prob,
                                     const EigenOptions& opt = {})
{
    validate_spec(spec, prob);
    return BarrierFunction(kind, spec,
                           build_eigenpairs(prob, kind == BarrierKind::sub ? spec.inner : spec.outer, opt));
}

//! Nodal samples; exact zeros outside the open inner box for the subsolution.
inline GridField sample_to_grid(const BarrierFunction& bf, const Grid& grid)
{
    return sample(grid, [&bf](std::span<const double> x) { return bf.value(x); });
}

} // namespace orthoplap

#endif // ORTHOPLAP_BARRIERS_HPP
