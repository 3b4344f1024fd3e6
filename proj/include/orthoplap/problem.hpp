// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_PROBLEM_HPP
#define ORTHOPLAP_PROBLEM_HPP

#include "orthoplap/core.hpp"
#include "orthoplap/eigen1d.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace orthoplap
{

enum class Regime
{
    sublinear,      //!< q < p_1
    intermediate,   //!< p_1 <= q < p_N
    out_of_theorem  //!< q >= p_N
};

inline const char* to_string(Regime r)
{
    switch (r)
    {
    case Regime::sublinear:
        return "sublinear";
    case Regime::intermediate:
        return "intermediate";
    case Regime::out_of_theorem:
        return "out-of-theorem";
    }
    return "unknown";
}

//! -sum_i d_i(|d_i u|^{p_i-2} d_i u) = lambda u^{q-1} in omega, u = 0 on the boundary.
//!
//! Exponents are kept sorted ascending; unsorted input is normalised by
//! permuting the axes of omega together with p (see `axis_permutation`).
class Problem
{
public:
    Problem(std::vector<double> p, double q, double lambda, Box omega)
    {
        if (p.empty() || p.size() != omega.dim())
            throw ContractError("exponent vector and domain dimension disagree");
        for (double pi : p)
            require_exponent(pi, "p_i");
        require_exponent(q, "q");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw ContractError("lambda must be finite and >= 0");

        perm_.resize(p.size());
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        std::stable_sort(perm_.begin(), perm_.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
        was_sorted_ = std::is_sorted(p.begin(), p.end());
        std::vector<Interval> axes;
        for (std::size_t k : perm_)
        {
            p_.push_back(p[k]);
            axes.push_back(omega[k]);
        }
        omega_ = Box(std::move(axes));
        q_ = q;
        lambda_ = lambda;
    }

    std::size_t dim() const { return p_.size(); }
    const std::vector<double>& p() const { return p_; }
    double p(std::size_t i) const { return p_[i]; }
    double q() const { return q_; }
    double lambda() const { return lambda_; }
    const Box& omega() const { return omega_; }

    //! perm[i] = index of input axis that became axis i.
    const std::vector<std::size_t>& axis_permutation() const { return perm_; }
    bool input_was_sorted() const { return was_sorted_; }

    Regime regime() const
    {
        if (q_ < p_.front())
            return Regime::sublinear;
        if (q_ < p_.back())
            return Regime::intermediate;
        return Regime::out_of_theorem;
    }

    //! Largest 1-based index i with p_i <= q (0 when q < p_1).
    std::size_t i0() const
    {
        return static_cast<std::size_t>(std::count_if(p_.begin(), p_.end(), [&](double pi) { return pi <= q_; }));
    }

    double inverse_sum() const
    {
        double s = 0.0;
        for (double pi : p_)
            s += 1.0 / pi;
        return s;
    }

    //! N / (sum 1/p_i - 1) when sum 1/p_i > 1.
    std::optional<double> p_star() const
    {
        const double s = inverse_sum();
        if (!(s > 1.0))
            return std::nullopt;
        return static_cast<double>(dim()) / (s - 1.0);
    }

    std::optional<double> p_infinity() const
    {
        const auto ps = p_star();
        if (!ps)
            return std::nullopt;
        return std::max(*ps, p_.back());
    }

    Problem with_lambda(double lambda) const
    {
        Problem out = *this;
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw ContractError("lambda must be finite and >= 0");
        out.lambda_ = lambda;
        return out;
    }

private:
    std::vector<double> p_;
    double q_ = 2.0;
    double lambda_ = 0.0;
    Box omega_;
    std::vector<std::size_t> perm_;
    bool was_sorted_ = true;
};

} // namespace orthoplap

#endif // ORTHOPLAP_PROBLEM_HPP
