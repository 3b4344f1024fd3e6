// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_CORE_HPP
#define ORTHOPLAP_CORE_HPP

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orthoplap
{

//! Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidExponent : public Error
{
public:
    using Error::Error;
};

class DomainError : public Error
{
public:
    using Error::Error;
};

//! Raised when a barrier recipe is asked for outside the regime it covers.
class RegimeError : public Error
{
public:
    using Error::Error;
};

class ContainmentError : public Error
{
public:
    using Error::Error;
};

class CertificationFailure : public Error
{
public:
    using Error::Error;
};

class ContractError : public Error
{
public:
    using Error::Error;
};

class GridMismatch : public Error
{
public:
    using Error::Error;
};

//! Bisection/bracketing failure; carries the range that was scanned.
class SearchFailure : public Error
{
public:
    SearchFailure(const std::string& what, double scanned_lo, double scanned_hi)
        : Error(what), lo(scanned_lo), hi(scanned_hi)
    {
    }
    double lo;
    double hi;
};

//! Open interval (a, b) with a < b.
struct Interval
{
    double a = 0.0;
    double b = 1.0;

    Interval() = default;
    Interval(double left, double right) : a(left), b(right)
    {
        if (!(left < right) || !std::isfinite(left) || !std::isfinite(right))
        {
            std::ostringstream os;
            os << "degenerate interval (" << left << ", " << right << ")";
            throw DomainError(os.str());
        }
    }

    double length() const { return b - a; }
    double midpoint() const { return 0.5 * (a + b); }
    bool contains(const Interval& o) const { return a <= o.a && o.b <= b; }
    bool strictly_contains(const Interval& o) const { return a < o.a && o.b < b; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

//! Axis-aligned box, one interval per coordinate.
class Box
{
public:
    Box() = default;
    explicit Box(std::vector<Interval> axes) : axes_(std::move(axes))
    {
        if (axes_.empty())
            throw DomainError("box needs at least one axis");
    }

    static Box unit(std::size_t dim) { return Box(std::vector<Interval>(dim, Interval(0.0, 1.0))); }

    std::size_t dim() const { return axes_.size(); }
    const Interval& operator[](std::size_t i) const { return axes_[i]; }
    const std::vector<Interval>& axes() const { return axes_; }
    double side(std::size_t i) const { return axes_[i].length(); }

    bool contains(const Box& o) const
    {
        if (o.dim() != dim())
            return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (!axes_[i].contains(o[i]))
                return false;
        return true;
    }

    //! Containment of the closure of `o` in the open box.
    bool strictly_contains(const Box& o) const
    {
        if (o.dim() != dim())
            return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (!axes_[i].strictly_contains(o[i]))
                return false;
        return true;
    }

    //! Concentric box with every side scaled by `factor`.
    Box scaled(double factor) const
    {
        std::vector<Interval> out;
        out.reserve(dim());
        for (const auto& iv : axes_)
        {
            const double half = 0.5 * factor * iv.length();
            out.emplace_back(iv.midpoint() - half, iv.midpoint() + half);
        }
        return Box(std::move(out));
    }

    //! Box enlarged by `fraction` of the side length on each side.
    Box inflated(double fraction) const
    {
        std::vector<Interval> out;
        out.reserve(dim());
        for (const auto& iv : axes_)
            out.emplace_back(iv.a - fraction * iv.length(), iv.b + fraction * iv.length());
        return Box(std::move(out));
    }

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::vector<Interval> axes_;
};

} // namespace orthoplap

#endif // ORTHOPLAP_CORE_HPP
