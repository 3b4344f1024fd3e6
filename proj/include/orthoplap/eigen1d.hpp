// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_EIGEN1D_HPP
#define ORTHOPLAP_EIGEN1D_HPP

// Principal Dirichlet eigenpair of the one-dimensional p-Laplacian
//
//     -(|v'|^{p-2} v')' = eta |v|^{p-2} v   on (a, b),   v(a) = v(b) = 0,
//
// computed by shooting on the first-order flux system
//
//     v' = |w|^{(2-p)/(p-1)} w,    w' = -eta |v|^{p-2} v,    (v, w)(a) = (0, 1),
//
// with eta located by bisection on "first return to zero happens before b".
// The flux form keeps the right-hand side bounded for p < 2 and p > 2 alike.

#include "orthoplap/core.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace orthoplap
{

inline void require_exponent(double p, const char* what = "p")
{
    if (!(p > 1.0) || !std::isfinite(p))
    {
        std::ostringstream os;
        os << "invalid exponent " << what << " = " << p << " (must be > 1)";
        throw InvalidExponent(os.str());
    }
}

//! Half-period of sin_p: 2 * int_0^1 (1 - s^p)^{-1/p} ds.
//!
//! The singularity at s = 1 is removed by s = 1 - t^k with k = 2p/(p-1),
//! which turns the integrand into k t^{k-1} (1 - (1 - t^k)^p)^{-1/p} ~ c t.
inline double pi_p(double p)
{
    require_exponent(p);
    const double k = 2.0 * p / (p - 1.0);
    auto integrand = [p, k](double t) -> double {
        if (t <= 0.0)
            return 0.0;
        const double tk = std::pow(t, k);
        // 1 - (1 - t^k)^p, accurate for small t^k
        const double gap = tk >= 1.0 ? 1.0 : -std::expm1(p * std::log1p(-tk));
        return k * std::pow(t, k - 1.0) * std::pow(gap, -1.0 / p);
    };
    double err = 0.0;
    const double val =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 20, 1e-14, &err);
    return 2.0 * val;
}

namespace detail
{

struct FluxState
{
    double v;
    double w;
};

inline FluxState flux_rhs(const FluxState& s, double p, double eta)
{
    const double dv = std::copysign(std::pow(std::abs(s.w), 1.0 / (p - 1.0)), s.w);
    const double dw = -eta * std::copysign(std::pow(std::abs(s.v), p - 1.0), s.v);
    return {dv, dw};
}

inline FluxState rk4_step(const FluxState& s, double h, double p, double eta)
{
    const FluxState k1 = flux_rhs(s, p, eta);
    const FluxState k2 = flux_rhs({s.v + 0.5 * h * k1.v, s.w + 0.5 * h * k1.w}, p, eta);
    const FluxState k3 = flux_rhs({s.v + 0.5 * h * k2.v, s.w + 0.5 * h * k2.w}, p, eta);
    const FluxState k4 = flux_rhs({s.v + h * k3.v, s.w + h * k3.w}, p, eta);
    return {s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            s.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w)};
}

// True when the shooting trajectory reaches v <= 0 within `steps` steps.
inline bool hits_zero(double p, double eta, double h, std::size_t steps)
{
    FluxState s{0.0, 1.0};
    for (std::size_t k = 0; k < steps; ++k)
    {
        s = rk4_step(s, h, p, eta);
        if (s.v <= 0.0)
            return true;
    }
    return false;
}

} // namespace detail

struct EigenOptions
{
    double tol = 1e-10;               //!< relative tolerance on eta
    double endpoint_tol = 1e-8;       //!< |v(b)| / max v after the final shot
    std::size_t steps_per_unit = 8192; //!< RK4 steps per unit length (at least this many in total too)
};

//! Principal eigenpair of the 1D p-Laplacian on an interval, tabulated on the
//! uniform shooting mesh and normalised to max v = 1. Immutable.
class Eigenpair1D
{
public:
    Eigenpair1D(double p, Interval interval, double eta, std::vector<double> v, std::vector<double> dv,
                double raw_asymmetry = 0.0, double endpoint_residual = 0.0)
        : p_(p), interval_(interval), eta_(eta), v_(std::move(v)), dv_(std::move(dv)),
          raw_asymmetry_(raw_asymmetry), endpoint_residual_(endpoint_residual)
    {
        require_exponent(p);
        if (v_.size() < 3 || v_.size() != dv_.size())
            throw ContractError("eigenpair tabulation needs >= 3 matching samples");
        h_ = interval_.length() / static_cast<double>(v_.size() - 1);
        build_slopes();
    }

    double p() const { return p_; }
    const Interval& interval() const { return interval_; }
    double eta() const { return eta_; }
    std::size_t size() const { return v_.size(); }
    double spacing() const { return h_; }
    double x(std::size_t k) const { return k + 1 == v_.size() ? interval_.b : interval_.a + h_ * k; }
    const std::vector<double>& values() const { return v_; }
    const std::vector<double>& derivatives() const { return dv_; }

    //! Raw |v(a+t) - v(b-t)| before symmetrisation, and |v(b)| before it was pinned to 0.
    double raw_asymmetry() const { return raw_asymmetry_; }
    double endpoint_residual() const { return endpoint_residual_; }

    //! Monotone cubic Hermite interpolant of v; 0 outside [a, b] within one mesh cell.
    double value(double x) const
    {
        double t = 0.0;
        const std::ptrdiff_t k = locate(x, t);
        if (k < 0)
            return 0.0;
        const double t2 = t * t, t3 = t2 * t;
        const double val = (2 * t3 - 3 * t2 + 1) * v_[k] + (t3 - 2 * t2 + t) * h_ * m0_[k] +
                           (-2 * t3 + 3 * t2) * v_[k + 1] + (t3 - t2) * h_ * m1_[k];
        return std::max(val, 0.0);
    }

    //! Derivative of the interpolant; clamps to the endpoint slope outside [a, b].
    double derivative(double x) const
    {
        double t = 0.0;
        const std::ptrdiff_t k = locate(x, t);
        if (k == -1)
            return dv_.front();
        if (k == -2)
            return dv_.back();
        const double t2 = t * t;
        return (6 * t2 - 6 * t) / h_ * v_[k] + (3 * t2 - 4 * t + 1) * m0_[k] + (-6 * t2 + 6 * t) / h_ * v_[k + 1] +
               (3 * t2 - 2 * t) * m1_[k];
    }

private:
    // Returns the cell index, -1 for clamping to a, -2 for clamping to b.
    std::ptrdiff_t locate(double x, double& t) const
    {
        const double a = interval_.a, b = interval_.b;
        if (x < a - h_ || x > b + h_ || std::isnan(x))
        {
            std::ostringstream os;
            os << "x = " << x << " outside eigenfunction domain [" << a << ", " << b << "]";
            throw DomainError(os.str());
        }
        if (x <= a)
            return -1;
        if (x >= b)
            return -2;
        const double s = (x - a) / h_;
        std::ptrdiff_t k = static_cast<std::ptrdiff_t>(s);
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(v_.size()) - 2);
        t = std::clamp(s - static_cast<double>(k), 0.0, 1.0);
        return k;
    }

    // Fritsch-Carlson limiting of the exact slopes, cell by cell.
    void build_slopes()
    {
        const std::size_t cells = v_.size() - 1;
        m0_.resize(cells);
        m1_.resize(cells);
        for (std::size_t k = 0; k < cells; ++k)
        {
            const double delta = (v_[k + 1] - v_[k]) / h_;
            double m0 = dv_[k], m1 = dv_[k + 1];
            if (delta == 0.0)
            {
                m0 = m1 = 0.0;
            }
            else
            {
                double al = m0 / delta, be = m1 / delta;
                if (al < 0.0)
                    al = 0.0;
                if (be < 0.0)
                    be = 0.0;
                const double r = al * al + be * be;
                if (r > 9.0)
                {
                    const double tau = 3.0 / std::sqrt(r);
                    al *= tau;
                    be *= tau;
                }
                m0 = al * delta;
                m1 = be * delta;
            }
            m0_[k] = m0;
            m1_[k] = m1;
        }
    }

    double p_;
    Interval interval_;
    double eta_;
    std::vector<double> v_, dv_;
    double raw_asymmetry_ = 0.0;
    double endpoint_residual_ = 0.0;
    std::vector<double> m0_, m1_;
    double h_ = 0.0;
};

//! Shooting + bisection for the principal eigenpair.
inline Eigenpair1D solve_eigenpair(double p, const Interval& interval, const EigenOptions& opt = {})
{
    require_exponent(p);
    if (!(opt.tol > 0.0))
        throw ContractError("eigenvalue tolerance must be positive");

    const double L = interval.length();
    std::size_t steps = std::max<std::size_t>(
        opt.steps_per_unit, static_cast<std::size_t>(std::ceil(static_cast<double>(opt.steps_per_unit) * L)));
    steps += steps % 2; // keep the midpoint on the mesh
    const double h = L / static_cast<double>(steps);

    // Bracket: start at the p = 2 value scaled by (pi_p / pi)^p and expand geometrically.
    const double guess =
        std::pow(std::numbers::pi / L, 2.0) * std::pow(pi_p(p) / std::numbers::pi, p);
    double lo = guess, hi = guess;
    const double first_lo = guess;
    int expansions = 0;
    while (detail::hits_zero(p, lo, h, steps))
    {
        lo *= 0.5;
        if (++expansions > 200)
            throw SearchFailure("no eigenvalue bracket: trajectory always returns to zero", lo, first_lo);
    }
    expansions = 0;
    while (!detail::hits_zero(p, hi, h, steps))
    {
        hi *= 2.0;
        if (++expansions > 200)
            throw SearchFailure("no eigenvalue bracket: trajectory never returns to zero", first_lo, hi);
    }

    const double rel = std::min(opt.tol * 1e-3, 1e-13);
    while (hi - lo > rel * lo)
    {
        const double mid = 0.5 * (lo + hi);
        if (detail::hits_zero(p, mid, h, steps))
            hi = mid;
        else
            lo = mid;
    }
    const double eta = 0.5 * (lo + hi);

    std::vector<double> v(steps + 1), dv(steps + 1);
    detail::FluxState s{0.0, 1.0};
    v[0] = 0.0;
    dv[0] = 1.0;
    for (std::size_t k = 1; k <= steps; ++k)
    {
        s = detail::rk4_step(s, h, p, eta);
        v[k] = s.v;
        dv[k] = std::copysign(std::pow(std::abs(s.w), 1.0 / (p - 1.0)), s.w);
    }
    // Normalise by the peak implied by the first integral
    // H = (p-1)|v'|^p + eta |v|^p, read off at the quarter point. RK4 loses
    // accuracy where the flux system is not smooth (near v = 0 for p < 2, at
    // the turning point for p > 2), so the sampled maximum is less reliable.
    const std::size_t quarter = steps / 4;
    const double first_integral =
        (p - 1.0) * std::pow(std::abs(dv[quarter]), p) + eta * std::pow(std::abs(v[quarter]), p);
    const double vmax = std::pow(first_integral / eta, 1.0 / p);
    for (std::size_t k = 0; k <= steps; ++k)
    {
        v[k] /= vmax;
        dv[k] /= vmax;
    }
    const double endpoint = std::abs(v[steps]);
    if (endpoint > opt.endpoint_tol)
    {
        std::ostringstream os;
        os << "shooting endpoint residual " << endpoint << " exceeds " << opt.endpoint_tol;
        throw SearchFailure(os.str(), lo, hi);
    }
    v[steps] = 0.0;

    double asym = 0.0;
    for (std::size_t k = 0; k <= steps / 2; ++k)
    {
        const std::size_t m = steps - k;
        asym = std::max(asym, std::abs(v[k] - v[m]));
        v[m] = v[k];
        dv[m] = -dv[k];
    }
    v[steps / 2] = 1.0;
    dv[steps / 2] = 0.0;

    return Eigenpair1D(p, interval, eta, std::move(v), std::move(dv), asym, endpoint);
}

inline double eval_v(const Eigenpair1D& e, double x) { return e.value(x); }
inline double eval_dv(const Eigenpair1D& e, double x) { return e.derivative(x); }

//! Outward normal derivative negative at both ends: v'(a) > 0 and v'(b) < 0.
inline bool check_slope_sign(const Eigenpair1D& e)
{
    return e.derivatives().front() > 0.0 && e.derivatives().back() < 0.0;
}

//! Closed-form eigenvalue (p - 1) (pi_p / L)^p, used as a cross-check of the shooting.
inline double eigenvalue_formula(double p, double length)
{
    require_exponent(p);
    return (p - 1.0) * std::pow(pi_p(p) / length, p);
}

} // namespace orthoplap

#endif // ORTHOPLAP_EIGEN1D_HPP
