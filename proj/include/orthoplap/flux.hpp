// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_FLUX_HPP
#define ORTHOPLAP_FLUX_HPP

#include <cmath>

namespace orthoplap
{

//! (g^2 + reg^2)^{(p-2)/2} g; the exact monotone flux |g|^{p-2} g when reg = 0.
inline double flux(double g, double p, double reg = 0.0)
{
    if (p == 2.0)
        return g;
    const double s = g * g + reg * reg;
    if (s == 0.0)
        return 0.0;
    if (p == 4.0)
        return s * g;
    if (p == 3.0)
        return std::sqrt(s) * g;
    return std::pow(s, 0.5 * (p - 2.0)) * g;
}

//! d flux / dg = (g^2 + reg^2)^{(p-4)/2} ((p-1) g^2 + reg^2).
inline double flux_derivative(double g, double p, double reg = 0.0)
{
    if (p == 2.0)
        return 1.0;
    const double s = g * g + reg * reg;
    if (s == 0.0)
        return p > 2.0 ? 0.0 : HUGE_VAL;
    if (p == 4.0)
        return 3.0 * g * g + reg * reg;
    return std::pow(s, 0.5 * (p - 4.0)) * ((p - 1.0) * g * g + reg * reg);
}

//! Antiderivative of flux vanishing at g = 0: ((g^2 + reg^2)^{p/2} - reg^p) / p.
inline double flux_potential(double g, double p, double reg = 0.0)
{
    const double s = g * g + reg * reg;
    if (p == 2.0)
        return 0.5 * g * g;
    if (p == 4.0)
        return 0.25 * (s * s - reg * reg * reg * reg);
    return (std::pow(s, 0.5 * p) - std::pow(std::abs(reg), p)) / p;
}

} // namespace orthoplap

#endif // ORTHOPLAP_FLUX_HPP
