// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_PDE_SOLVER_HPP
#define ORTHOPLAP_PDE_SOLVER_HPP

// Finite-difference orthotropic p-Laplacian on a tensor grid, a box-constrained
// convex inner solver, and the monotone sub/supersolution iteration
//
//     u^0 = lower,   u^{k+1} = argmin_{u^k <= u <= upper} E_k(u),
//     E_k(u) = sum_i (1/p_i) sum_faces |D_i u|^{p_i} vol - sum_nodes lambda (u^k)_+^{q-1} u vol.
//
// Because s -> lambda s^{q-1} is nondecreasing on s >= 0 the iterates increase
// from lower and stay below upper without a shift term.

#include "orthoplap/barriers.hpp"
#include "orthoplap/flux.hpp"
#include "orthoplap/grid.hpp"
#include "orthoplap/problem.hpp"
#include "orthoplap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace orthoplap
{

struct SolverOptions
{
    double tol = 1e-6;               //!< outer increments / residual, relative to the field scale
    double inner_tol_factor = 0.05;  //!< inner projected-gradient tolerance = factor * tol * scale
    std::size_t max_outer = 2000;
    std::size_t max_inner = 500000;
    double reg = -1.0;               //!< flux regularisation; < 0 selects 1e-8 * gradient scale
    unsigned threads = 1;
};

//! Divergence-form stencil of -sum_i d_i(flux_i(d_i u)) at interior nodes.
class OperatorKernel
{
public:
    OperatorKernel(const Grid& grid, std::vector<double> p, double reg, unsigned threads = 1)
        : grid_(grid), p_(std::move(p)), reg_(reg), threads_(threads)
    {
        if (p_.size() != grid_.dim())
            throw GridMismatch("exponent count and grid dimension disagree");
        for (std::size_t k = 0; k < grid_.size(); ++k)
            if (!grid_.is_boundary(k))
                interior_.push_back(k);
        for (std::size_t axis = 0; axis < grid_.dim(); ++axis)
        {
            std::vector<std::size_t> faces;
            for (std::size_t k = 0; k < grid_.size(); ++k)
            {
                if (grid_.index_along(k, axis) + 1 == grid_.count(axis))
                    continue;
                bool transverse_interior = true;
                for (std::size_t j = 0; j < grid_.dim(); ++j)
                {
                    if (j == axis)
                        continue;
                    const std::size_t ij = grid_.index_along(k, j);
                    transverse_interior = transverse_interior && ij > 0 && ij + 1 < grid_.count(j);
                }
                if (transverse_interior)
                    faces.push_back(k);
            }
            faces_.push_back(std::move(faces));
        }
    }

    const Grid& grid() const { return grid_; }
    const std::vector<std::size_t>& interior() const { return interior_; }
    double reg() const { return reg_; }

    //! out[k] = A(u)[k] - rhs[k] at interior nodes, 0 elsewhere. rhs may be empty.
    void apply(const std::vector<double>& u, const std::vector<double>& rhs, std::vector<double>& out) const
    {
        out.assign(grid_.size(), 0.0);
        const std::size_t dim = grid_.dim();
        parallel_for(interior_.size(), threads_, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t n = lo; n < hi; ++n)
            {
                const std::size_t k = interior_[n];
                double acc = 0.0;
                for (std::size_t axis = 0; axis < dim; ++axis)
                {
                    const std::size_t s = grid_.stride(axis);
                    const double h = grid_.spacing(axis);
                    const double back = flux((u[k] - u[k - s]) / h, p_[axis], reg_);
                    const double fwd = flux((u[k + s] - u[k]) / h, p_[axis], reg_);
                    acc += (back - fwd) / h;
                }
                out[k] = rhs.empty() ? acc : acc - rhs[k];
            }
        });
    }

    //! Energy per unit node volume: sum_faces potential(D) - sum_interior rhs u.
    double energy(const std::vector<double>& u, const std::vector<double>& rhs) const
    {
        double e = 0.0;
        for (std::size_t axis = 0; axis < grid_.dim(); ++axis)
        {
            const std::size_t s = grid_.stride(axis);
            const double h = grid_.spacing(axis);
            for (std::size_t k : faces_[axis])
                e += flux_potential((u[k + s] - u[k]) / h, p_[axis], reg_);
        }
        for (std::size_t k : interior_)
            e -= rhs[k] * u[k];
        return e;
    }

    //! energy(u + t d) - energy(u), accumulated face by face to limit cancellation.
    double energy_change(const std::vector<double>& u, const std::vector<double>& d, double t,
                         const std::vector<double>& rhs) const
    {
        double de = 0.0;
        for (std::size_t axis = 0; axis < grid_.dim(); ++axis)
        {
            const std::size_t s = grid_.stride(axis);
            const double h = grid_.spacing(axis);
            const double p = p_[axis];
            for (std::size_t k : faces_[axis])
            {
                const double a = (u[k + s] - u[k]) / h;
                const double b = a + t * (d[k + s] - d[k]) / h;
                if (p == 2.0)
                {
                    de += 0.5 * (b - a) * (b + a);
                }
                else if (p == 4.0)
                {
                    const double r2 = reg_ * reg_;
                    de += 0.25 * (b - a) * (b + a) * (a * a + b * b + 2.0 * r2);
                }
                else
                {
                    de += flux_potential(b, p, reg_) - flux_potential(a, p, reg_);
                }
            }
        }
        for (std::size_t k : interior_)
            de -= t * rhs[k] * d[k];
        return de;
    }

    //! Largest diagonal entry of the Hessian of the energy at u.
    double max_diagonal(const std::vector<double>& u) const
    {
        double m = 0.0;
        for (std::size_t k : interior_)
        {
            double dgl = 0.0;
            for (std::size_t axis = 0; axis < grid_.dim(); ++axis)
            {
                const std::size_t s = grid_.stride(axis);
                const double h = grid_.spacing(axis);
                dgl += (flux_derivative((u[k] - u[k - s]) / h, p_[axis], reg_) +
                        flux_derivative((u[k + s] - u[k]) / h, p_[axis], reg_)) /
                       (h * h);
            }
            if (std::isfinite(dgl))
                m = std::max(m, dgl);
        }
        return m;
    }

private:
    Grid grid_;
    std::vector<double> p_;
    double reg_;
    unsigned threads_;
    std::vector<std::size_t> interior_;
    std::vector<std::vector<std::size_t>> faces_;
};

//! -sum_i [flux(forward difference) - flux(backward difference)] / h_i at interior nodes.
inline GridField apply_operator(const GridField& u, const Problem& prob, double reg = 0.0, unsigned threads = 1)
{
    OperatorKernel op(u.grid(), prob.p(), reg, threads);
    GridField out(u.grid());
    op.apply(u.values(), {}, out.values());
    return out;
}

//! Characteristic regularisation: 1e-8 times the largest difference quotient of `u` (at least 1e-8).
inline double default_regularization(const GridField& u)
{
    const Grid& g = u.grid();
    double scale = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i)
        scale = std::max(scale, std::max(std::abs(u.max()), std::abs(u.min())) / g.box().side(i));
    return 1e-8 * std::max(scale, 1.0);
}

struct ConvexResult
{
    GridField solution;
    std::size_t iterations = 0;
    std::vector<double> energy_trace;   //!< full energy after every accepted step
    double projected_gradient = 0.0;    //!< final stationarity measure (strong units)
    bool converged = false;
};

class ConvexFailure : public Error
{
public:
    ConvexFailure(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history))
    {
    }
    std::vector<double> residual_history;
};

namespace detail
{

// |g| where the box does not block the descent direction -g, else 0.
inline double projected_gradient_norm(const std::vector<double>& x, const std::vector<double>& g,
                                      const std::vector<double>& lo, const std::vector<double>& hi,
                                      const std::vector<std::size_t>& interior)
{
    double m = 0.0;
    for (std::size_t k : interior)
    {
        if ((x[k] <= lo[k] && g[k] > 0.0) || (x[k] >= hi[k] && g[k] < 0.0))
            continue;
        m = std::max(m, std::abs(g[k]));
    }
    return m;
}

} // namespace detail

//! Minimises the discrete energy with Dirichlet zero boundary over
//! lower <= u <= upper by projected gradient descent with Barzilai-Borwein
//! trial steps and monotone Armijo backtracking. Stops when the projected
//! gradient (per unit node volume) is <= tol.
inline ConvexResult convex_subproblem(const GridField& rhs, const Problem& prob, const GridField& lower,
                                      const GridField& upper, double tol, const SolverOptions& opt = {},
                                      const GridField* start = nullptr, double reg = 0.0)
{
    require_same_grid(rhs, lower);
    require_same_grid(rhs, upper);
    const Grid& grid = rhs.grid();
    OperatorKernel op(grid, prob.p(), reg, opt.threads);
    const auto& interior = op.interior();
    const std::vector<double>& lo = lower.values();
    const std::vector<double>& hi = upper.values();
    for (std::size_t k : interior)
        if (lo[k] > hi[k])
            throw ContractError("convex subproblem needs lower <= upper");

    std::vector<double> x(grid.size(), 0.0);
    for (std::size_t k : interior)
        x[k] = std::clamp(start ? (*start)[k] : lo[k], lo[k], hi[k]);

    const double vol = grid.node_volume();
    std::vector<double> g, g_new, d(grid.size(), 0.0), x_new(grid.size(), 0.0);
    op.apply(x, rhs.values(), g);
    double e = op.energy(x, rhs.values());

    const double diag = op.max_diagonal(x);
    const double alpha0 = diag > 0.0 ? 1.0 / diag : 1.0;
    double alpha = alpha0;
    const double alpha_min = alpha0 * 1e-6, alpha_max = alpha0 * 1e10;

    ConvexResult res;
    res.energy_trace.push_back(e * vol);
    std::vector<double> pg_history;
    bool bb_long = true;
    for (std::size_t it = 0;; ++it)
    {
        const double pg = detail::projected_gradient_norm(x, g, lo, hi, interior);
        pg_history.push_back(pg);
        if (pg <= tol)
        {
            res.converged = true;
            res.projected_gradient = pg;
            res.iterations = it;
            break;
        }
        if (it >= opt.max_inner)
            throw ConvexFailure("convex subproblem: iteration cap exceeded", std::move(pg_history));

        double gd = 0.0;
        for (std::size_t k : interior)
        {
            d[k] = std::clamp(x[k] - alpha * g[k], lo[k], hi[k]) - x[k];
            gd += g[k] * d[k];
        }
        double t = 1.0, de = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt)
        {
            de = op.energy_change(x, d, t, rhs.values());
            if (de <= 1e-4 * t * gd)
            {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted)
        {
            // Line search exhausted at roundoff level: take the best available
            // step only if it does not raise the energy.
            res.projected_gradient = pg;
            res.iterations = it;
            res.converged = pg <= 10.0 * tol;
            if (!res.converged)
                throw ConvexFailure("convex subproblem: line search stalled", std::move(pg_history));
            break;
        }
        for (std::size_t k : interior)
            x_new[k] = x[k] + t * d[k];
        op.apply(x_new, rhs.values(), g_new);
        double ss = 0.0, sy = 0.0, yy = 0.0;
        for (std::size_t k : interior)
        {
            const double s = x_new[k] - x[k], y = g_new[k] - g[k];
            ss += s * s;
            sy += s * y;
            yy += y * y;
        }
        if (sy > 0.0)
            alpha = bb_long ? ss / sy : sy / yy;
        else
            alpha = alpha_max;
        alpha = std::clamp(alpha, alpha_min, alpha_max);
        bb_long = !bb_long;
        x.swap(x_new);
        g.swap(g_new);
        e += de;
        res.energy_trace.push_back(e * vol);
    }
    res.solution = GridField(grid, std::move(x));
    return res;
}

struct SolveReport
{
    GridField solution;
    std::size_t iterations = 0;              //!< outer iterations
    std::size_t inner_iterations = 0;        //!< total inner steps
    std::vector<double> residual_history;    //!< weak residual per unit volume after each outer step
    std::vector<double> increment_history;   //!< max |u^{k+1} - u^k|
    std::vector<double> energy_history;      //!< final inner energy of each outer step
    std::vector<double> mass_history;        //!< max nodal value after each outer step
    bool converged = false;
    bool monotone_ok = true;                 //!< u^{k+1} >= u^k - 1e-12 at every step
    bool inner_descent_ok = true;            //!< energy nonincreasing inside every inner solve
    bool sandwich_ok = false;
    double positive_mass = 0.0;
    double final_residual = 0.0;             //!< unregularised, per unit node volume
    double reg = 0.0;
    double tol = 0.0;
    std::optional<WeakCheckReport> lower_check;
    std::optional<WeakCheckReport> upper_check;
    std::size_t zero_interior_nodes = 0;     //!< interior nodes where the computed solution is <= 0
};

class SolveFailure : public Error
{
public:
    SolveFailure(const std::string& what, SolveReport rep) : Error(what), report(std::move(rep)) {}
    SolveReport report;
};

namespace detail
{

inline double residual_per_volume(const GridField& u, const Problem& prob)
{
    const auto r = weak_residuals(u, prob);
    const double vol = u.grid().node_volume();
    double m = 0.0;
    for (double x : r)
        m = std::max(m, std::abs(x));
    return m / vol;
}

inline double source_scale(const GridField& u, const Problem& prob)
{
    return std::max(1.0, prob.lambda() * std::pow(std::max(u.max(), 0.0), prob.q() - 1.0));
}

inline GridField source(const GridField& u, const Problem& prob)
{
    GridField rhs(u.grid());
    for (std::size_t k = 0; k < u.size(); ++k)
        if (!u.grid().is_boundary(k))
            rhs[k] = prob.lambda() * std::pow(std::max(u[k], 0.0), prob.q() - 1.0);
    return rhs;
}

inline bool is_descent(const std::vector<double>& trace)
{
    for (std::size_t k = 1; k < trace.size(); ++k)
        if (trace[k] > trace[k - 1])
            return false;
    return true;
}

} // namespace detail

//! Monotone iteration from `lower` between the barriers lower <= u <= upper.
inline SolveReport monotone_iterate(const Problem& prob, const GridField& lower, const GridField& upper,
                                    const SolverOptions& opt = {})
{
    require_same_grid(lower, upper);
    const Grid& grid = lower.grid();
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (lower[k] > upper[k])
            throw ContractError("monotone iteration needs lower <= upper");

    SolveReport rep;
    rep.tol = opt.tol;
    rep.reg = opt.reg >= 0.0 ? opt.reg : default_regularization(upper);
    const double vol = grid.node_volume();
    try
    {
        rep.lower_check = weak_inequality_check(lower, prob, WeakKind::sub, opt.tol * vol * detail::source_scale(upper, prob));
    }
    catch (const ContractError&)
    {
    }
    try
    {
        rep.upper_check = weak_inequality_check(upper, prob, WeakKind::super, opt.tol * vol * detail::source_scale(upper, prob));
    }
    catch (const ContractError&)
    {
    }

    // Iterates live on the interior; boundary values are 0.
    GridField u = lower;
    u.zero_boundary();
    GridField lo = u;
    for (std::size_t k = 0; k < grid.size(); ++k)
        lo[k] = std::min(lo[k], upper[k]);

    for (std::size_t it = 0; it < opt.max_outer; ++it)
    {
        const double rscale = detail::source_scale(u, prob);
        const GridField rhs = detail::source(u, prob);
        const double inner_tol = opt.inner_tol_factor * opt.tol * rscale;
        ConvexResult inner;
        try
        {
            inner = convex_subproblem(rhs, prob, u, upper, inner_tol, opt, &u, rep.reg);
        }
        catch (const ConvexFailure& e)
        {
            rep.solution = u;
            rep.positive_mass = u.max();
            throw SolveFailure(std::string("monotone iteration: ") + e.what(), std::move(rep));
        }
        rep.inner_iterations += inner.iterations;
        rep.inner_descent_ok = rep.inner_descent_ok && detail::is_descent(inner.energy_trace);
        rep.energy_history.push_back(inner.energy_trace.back());

        double incr = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k)
        {
            const double dk = inner.solution[k] - u[k];
            if (dk < -1e-12)
                rep.monotone_ok = false;
            incr = std::max(incr, std::abs(dk));
        }
        u = std::move(inner.solution);
        const double resid = detail::residual_per_volume(u, prob);
        rep.increment_history.push_back(incr);
        rep.residual_history.push_back(resid);
        rep.mass_history.push_back(u.max());
        rep.iterations = it + 1;

        const double uscale = std::max(1.0, u.max());
        if (incr <= opt.tol * uscale && resid <= opt.tol * detail::source_scale(u, prob))
        {
            rep.converged = true;
            break;
        }
    }

    rep.solution = u;
    rep.positive_mass = u.max();
    rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.sandwich_ok = sandwich_check(lo, u, upper).ok;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (!grid.is_boundary(k) && !(u[k] > 0.0))
            ++rep.zero_interior_nodes;
    if (!rep.converged)
        throw SolveFailure("monotone iteration did not converge within max_outer steps", std::move(rep));
    return rep;
}

// ---------------------------------------------------------------------------
// Threshold scan

struct ScanOptions
{
    SolverOptions solver;
    std::size_t eps_resolution = 201;   //!< per-axis nodes for the lambda_* scan
    double probe_amplitude = 1e-2;      //!< start amplitude of the probe iteration
    double probe_cap_factor = 1e3;      //!< cap = factor * amplitude when no supersolution recipe exists
    std::size_t probe_max = 400;
    double mass_floor = -1.0;           //!< < 0 selects 10 * tol
    EigenOptions eigen;
};

enum class ScanMethod
{
    barrier, //!< explicit sub/supersolution + monotone iteration
    warm,    //!< previous solution reused as the subsolution
    probe    //!< no barrier available: iteration from a small positive bump
};

inline const char* to_string(ScanMethod m)
{
    switch (m)
    {
    case ScanMethod::barrier:
        return "barrier";
    case ScanMethod::warm:
        return "warm";
    case ScanMethod::probe:
        return "probe";
    }
    return "unknown";
}

struct ScanPoint
{
    double lambda = 0.0;
    bool solution_found = false;
    ScanMethod method = ScanMethod::barrier;
    double positive_mass = 0.0;
    double residual = 0.0;
    std::size_t outer_iterations = 0;
    std::string note;                      //!< converged / collapsed / growth / saturated / failure reason
    std::optional<double> eps;
    std::optional<double> M;
    bool seed_passes_sub_check = false;    //!< warm starts: seed is a weak subsolution at this lambda
};

struct ScanResult
{
    std::vector<ScanPoint> points;
    double bracket_lo = 0.0;               //!< largest failing lambda below the first success
    double bracket_hi = std::numeric_limits<double>::infinity(); //!< smallest succeeding lambda
    bool any_success = false;
    double mass_floor = 0.0;
    std::optional<double> nonexistence_bound;
    GridField last_solution;
};

namespace detail
{

struct ProbeOutcome
{
    bool success = false;
    std::string note;
    GridField field;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// Fixed-point iteration u <- argmin over [0, cap] of E(u; lambda u_prev^{q-1}),
// classified by whether the maximum collapses, settles, or keeps growing.
inline ProbeOutcome probe(const Problem& prob, const GridField& start, const GridField& cap, const ScanOptions& opt,
                          double floor)
{
    const Grid& grid = start.grid();
    GridField zero(grid);
    GridField u = start;
    ProbeOutcome out;
    const double reg = opt.solver.reg >= 0.0 ? opt.solver.reg : default_regularization(cap);
    std::vector<double> ratios;
    double mass = u.max();
    for (std::size_t it = 0; it < opt.probe_max; ++it)
    {
        const GridField rhs = source(u, prob);
        const double tol = opt.solver.inner_tol_factor * opt.solver.tol * source_scale(u, prob);
        ConvexResult inner = convex_subproblem(rhs, prob, zero, cap, tol, opt.solver, &u, reg);
        const double incr = max_abs_difference(inner.solution, u);
        u = std::move(inner.solution);
        out.iterations = it + 1;
        const double new_mass = u.max();
        out.residual = residual_per_volume(u, prob);
        if (new_mass < floor)
        {
            out.note = "collapsed";
            break;
        }
        if (incr <= opt.solver.tol * std::max(1.0, new_mass) &&
            out.residual <= opt.solver.tol * source_scale(u, prob))
        {
            out.success = true;
            out.note = "converged";
            break;
        }
        bool touches = false;
        for (std::size_t k = 0; k < grid.size() && !touches; ++k)
            touches = !grid.is_boundary(k) && u[k] >= cap[k] * (1.0 - 1e-12);
        if (touches && new_mass > mass)
        {
            out.success = true;
            out.note = "saturated";
            break;
        }
        ratios.push_back(new_mass / mass);
        mass = new_mass;
        const std::size_t n = ratios.size();
        if (n >= 8)
        {
            const double r = ratios[n - 1];
            const bool stable = std::abs(r - ratios[n - 2]) <= 1e-4 * r && std::abs(r - ratios[n - 3]) <= 1e-4 * r;
            if (stable && std::abs(r - 1.0) > 1e-6)
            {
                out.success = r > 1.0;
                out.note = r > 1.0 ? "growth" : "collapsed";
                break;
            }
        }
        if (it + 1 == opt.probe_max)
        {
            out.success = !ratios.empty() && ratios.back() >= 1.0;
            out.note = "undecided";
        }
    }
    out.field = std::move(u);
    return out;
}

} // namespace detail

//! Classifies a geometric ladder of lambda values by whether a positive
//! solution is found, and brackets the existence threshold.
inline ScanResult lambda_scan(const Problem& tmpl, const Grid& grid, double lambda_lo, double lambda_hi,
                              std::size_t steps, const ScanOptions& opt = {})
{
    if (!(lambda_lo > 0.0) || !(lambda_lo < lambda_hi))
        throw ContractError("lambda scan needs 0 < lo < hi");
    if (steps < 2)
        throw ContractError("lambda scan needs at least two ladder points");
    if (!(grid.box() == tmpl.omega()))
        throw GridMismatch("scan grid must cover omega");

    ScanResult res;
    res.mass_floor = opt.mass_floor >= 0.0 ? opt.mass_floor : 10.0 * opt.solver.tol;
    try
    {
        res.nonexistence_bound = nonexistence_bound(tmpl);
    }
    catch (const RegimeError&)
    {
    }

    const bool has_recipe = tmpl.regime() != Regime::out_of_theorem;
    BarrierSpec spec;
    AxisEigenpairs inner_eigs, outer_eigs;
    spec.inner = tmpl.omega();
    spec.outer = tmpl.omega().inflated(0.25);
    inner_eigs = build_eigenpairs(tmpl, spec.inner, opt.eigen);
    outer_eigs = build_eigenpairs(tmpl, spec.outer, opt.eigen);
    if (has_recipe)
        spec = default_spec(tmpl);
    const auto resolution = default_resolution(tmpl.dim(), opt.eps_resolution);

    auto product_field = [&](const AxisEigenpairs& eigs, double amp) {
        return sample(grid, [&](std::span<const double> x) {
            double v = amp;
            for (std::size_t i = 0; i < x.size(); ++i)
                v *= eigs[i].value(x[i]);
            return v;
        });
    };

    std::optional<GridField> previous;
    for (std::size_t s = 0; s < steps; ++s)
    {
        const double lam =
            s + 1 == steps ? lambda_hi
                           : lambda_lo * std::pow(lambda_hi / lambda_lo, static_cast<double>(s) / (steps - 1));
        const Problem prob = tmpl.with_lambda(lam);
        ScanPoint pt;
        pt.lambda = lam;

        std::optional<GridField> lower;
        if (previous && has_recipe)
        {
            pt.method = ScanMethod::warm;
            lower = *previous;
            const double vol = grid.node_volume();
            pt.seed_passes_sub_check =
                weak_inequality_check(*lower, prob, WeakKind::sub, opt.solver.tol * vol * detail::source_scale(*lower, prob))
                    .passed;
        }
        else if (has_recipe)
        {
            try
            {
                BarrierSpec sub = spec;
                sub.eps = find_admissible_epsilon(prob, spec, inner_eigs, lam, resolution);
                pt.eps = sub.eps;
                lower = sample_to_grid(BarrierFunction(BarrierKind::sub, sub, inner_eigs), grid);
                pt.method = ScanMethod::barrier;
            }
            catch (const Error&)
            {
                lower.reset();
            }
        }

        if (lower)
        {
            // Barrier-backed path: only reached when a supersolution recipe exists.
            BarrierSpec sup = spec;
            sup.M = m_for_lambda(prob, spec, outer_eigs, lam, grid, &*lower);
            pt.M = sup.M;
            const GridField upper = sample_to_grid(BarrierFunction(BarrierKind::super, sup, outer_eigs), grid);
            try
            {
                SolveReport rep = monotone_iterate(prob, *lower, upper, opt.solver);
                pt.positive_mass = rep.positive_mass;
                pt.residual = rep.final_residual;
                pt.outer_iterations = rep.iterations;
                pt.solution_found = rep.positive_mass >= res.mass_floor;
                pt.note = pt.solution_found ? "converged" : "collapsed";
                previous = rep.solution;
                res.last_solution = rep.solution;
            }
            catch (const SolveFailure& e)
            {
                pt.positive_mass = e.report.positive_mass;
                pt.residual = e.report.final_residual;
                pt.outer_iterations = e.report.iterations;
                pt.solution_found = false;
                pt.note = std::string("no convergence: ") + e.what();
            }
        }
        else
        {
            pt.method = previous ? ScanMethod::warm : ScanMethod::probe;
            const GridField start = previous ? *previous : product_field(inner_eigs, opt.probe_amplitude);
            GridField cap;
            if (has_recipe)
            {
                BarrierSpec sup = spec;
                sup.M = m_for_lambda(prob, spec, outer_eigs, lam, grid, &start);
                pt.M = sup.M;
                cap = sample_to_grid(BarrierFunction(BarrierKind::super, sup, outer_eigs), grid);
            }
            else
            {
                cap = product_field(outer_eigs, opt.probe_cap_factor * std::max(start.max(), opt.probe_amplitude));
            }
            try
            {
                auto outcome = detail::probe(prob, start, cap, opt, res.mass_floor);
                pt.solution_found = outcome.success;
                pt.note = outcome.note;
                pt.positive_mass = outcome.field.max();
                pt.residual = outcome.residual;
                pt.outer_iterations = outcome.iterations;
                if (outcome.success)
                {
                    previous = outcome.field;
                    res.last_solution = outcome.field;
                }
            }
            catch (const ConvexFailure& e)
            {
                pt.solution_found = false;
                pt.note = std::string("no convergence: ") + e.what();
            }
        }
        res.points.push_back(std::move(pt));
    }

    for (const auto& pt : res.points)
    {
        if (pt.solution_found)
        {
            res.any_success = true;
            res.bracket_hi = pt.lambda;
            break;
        }
    }
    if (res.any_success)
    {
        res.bracket_lo = 0.0;
        for (const auto& pt : res.points)
            if (!pt.solution_found && pt.lambda < res.bracket_hi)
                res.bracket_lo = std::max(res.bracket_lo, pt.lambda);
    }
    else
    {
        res.bracket_lo = lambda_hi;
    }
    return res;
}

} // namespace orthoplap

#endif // ORTHOPLAP_PDE_SOLVER_HPP
