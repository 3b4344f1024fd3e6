// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"
#include "orthoplap/barriers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace orthoplap;

namespace
{

constexpr double kPi = std::numbers::pi;

Problem square(std::vector<double> p, double q, double lambda = 1.0)
{
    return Problem(std::move(p), q, lambda, Box::unit(2));
}

} // namespace

TEST(DefaultAlpha, DoublesTheStrictBound)
{
    const auto a1 = default_alpha(square({2.0, 4.0}, 1.5));
    EXPECT_DOUBLE_EQ(a1[0], 8.0);
    EXPECT_DOUBLE_EQ(a1[1], 3.2); // 2 * 4 / (4 - 1.5)
    const auto a2 = default_alpha(square({2.0, 4.0}, 3.0));
    EXPECT_DOUBLE_EQ(a2[0], 2.0);
    EXPECT_DOUBLE_EQ(a2[1], 8.0);
    const auto a3 = default_alpha(Problem({3.0, 3.0, 3.0}, 2.0, 1.0, Box::unit(3)));
    for (double a : a3)
        EXPECT_DOUBLE_EQ(a, 6.0);
    EXPECT_THROW(default_alpha(square({2.0, 4.0}, 5.0)), RegimeError);
}

TEST(Spec, ValidationRejectsBadFields)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    BarrierSpec spec = default_spec(prob);
    EXPECT_NO_THROW(validate_spec(spec, prob));

    BarrierSpec s = spec;
    s.alpha[0] = 1.9; // needs > 2/(2-1.5) = 4
    EXPECT_THROW(validate_spec(s, prob), ContractError);
    s = spec;
    s.eps = 0.0;
    EXPECT_THROW(validate_spec(s, prob), ContractError);
    s = spec;
    s.outer = prob.omega();
    EXPECT_THROW(validate_spec(s, prob), ContainmentError);
    s = spec;
    s.inner = prob.omega().inflated(0.1);
    EXPECT_THROW(validate_spec(s, prob), ContainmentError);
}

TEST(PointwiseS, OneDimensionalHandValue)
{
    // N=1, p=2, q=1.5, alpha=8, eps=1 at the midpoint: v=1, v'=0, so
    // S = eps^{1/2} alpha^{p-1} eta = 8 pi^2.
    const Problem prob({2.0}, 1.5, 1.0, Box::unit(1));
    BarrierSpec spec = default_spec(prob);
    ASSERT_DOUBLE_EQ(spec.alpha[0], 8.0);
    const auto eigs = build_eigenpairs(prob, spec.inner);
    const std::vector<double> mid{0.5};
    const SValue s = pointwise_S(spec, prob, eigs, mid);
    EXPECT_NEAR(s.total, 8.0 * kPi * kPi, 1e-7);
    EXPECT_EQ(s.s0, 0.0);
    EXPECT_EQ(s.s1, s.total);
}

// The subsolution inequality is S(x) <= lambda pointwise; S must therefore equal
// the strong operator divided by u^{q-1}, computed here by hand.
TEST(PointwiseS, MatchesStrongOperatorRatio)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    BarrierSpec spec = default_spec(prob);
    spec.eps = 0.37;
    const auto eigs = build_eigenpairs(prob, spec.inner);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (int k = 0; k < 50; ++k)
    {
        const std::vector<double> x{U(rng), U(rng)};
        double u = spec.eps;
        for (std::size_t i = 0; i < 2; ++i)
            u *= std::pow(eigs[i].value(x[i]), spec.alpha[i]);
        const double expected = oracle::sub_operator(spec, prob, eigs, x) / std::pow(u, prob.q() - 1.0);
        EXPECT_NEAR(pointwise_S(spec, prob, eigs, x).total, expected, 1e-9 * std::abs(expected) + 1e-12);
    }
}

TEST(PointwiseS, EpsilonHomogeneity)
{
    const Problem prob = square({2.0, 4.0}, 3.0);
    BarrierSpec spec = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, spec.inner);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.02, 0.98);
    const double c = 0.3;
    for (int k = 0; k < 100; ++k)
    {
        const std::vector<double> x{U(rng), U(rng)};
        spec.eps = 1.0;
        const auto base = s_summands(spec, prob, eigs, x);
        spec.eps = c;
        const auto scaled = s_summands(spec, prob, eigs, x);
        for (std::size_t i = 0; i < 2; ++i)
            EXPECT_NEAR(scaled[i], std::pow(c, prob.p(i) - prob.q()) * base[i], 1e-12 * std::abs(base[i]));
    }
}

TEST(PointwiseS, AlphaOneDropsGradientTerm)
{
    EXPECT_DOUBLE_EQ(detail::s0_bracket(1.0, 3.0, 2.5, 0.4, 7.0), 2.5 * std::pow(0.4, 3.0));
    // Summand with alpha = 1: (eps cross)^{p-q} v^{-q} eta v^p.
    const double eps = 0.7, p = 3.0, q = 2.0, eta = 2.5, cross = 0.6, v = 0.4, dv = 1.3;
    EXPECT_NEAR(detail::s_summand(eps, 1.0, p, q, eta, cross, v, dv),
                std::pow(eps * cross, p - q) * std::pow(v, p - q - p) * eta * std::pow(v, p), 1e-14);
}

TEST(LambdaStarSub, OneDimensionalAgainstDenseScan)
{
    const Problem prob({2.0}, 1.5, 1.0, Box::unit(1));
    const BarrierSpec spec = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, spec.inner);
    const SubThreshold t = lambda_star_sub(spec, prob, eigs, {201});
    double dense = -1e300;
    for (int k = 1; k < 100000; ++k)
    {
        const std::vector<double> x{k / 100000.0};
        dense = std::max(dense, pointwise_S(spec, prob, eigs, x).total);
    }
    EXPECT_TRUE(std::isfinite(t.value));
    EXPECT_LE(t.value, dense * (1.0 + 1e-12));
    EXPECT_NEAR(t.value, dense, 1e-3 * dense);
    EXPECT_NEAR(t.value, 8.0 * kPi * kPi, 1e-6);
}

TEST(LambdaStarSub, IntermediateRegimeDoesNotVanish)
{
    // p = (2, 4), q = 2: the axis-1 summand has eps-exponent 0.
    const Problem prob = square({2.0, 4.0}, 2.0);
    BarrierSpec spec = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, spec.inner);
    const auto res = default_resolution(2, 101);
    spec.eps = 1.0;
    const double big = lambda_star_sub(spec, prob, eigs, res).value;
    spec.eps = 1e-8;
    const double small = lambda_star_sub(spec, prob, eigs, res).value;
    EXPECT_TRUE(std::isfinite(big));
    EXPECT_GT(small, 0.0);
    // As eps -> 0 the value tends to max of the eps-free S0 part, alpha_1 * eta_1 = 2 pi^2.
    EXPECT_NEAR(small, 2.0 * kPi * kPi, 1e-3);
}

TEST(BoundaryLayer, CertificateMeansNegativeBracket)
{
    const Problem prob = square({2.0, 4.0}, 2.0);
    const BarrierSpec spec = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, spec.inner);
    const auto delta = certify_boundary_layer(eigs[0], spec.alpha[0]);
    ASSERT_TRUE(delta.has_value());
    for (int k = 0; k <= 5000; ++k)
    {
        const double t = *delta * k / 5000.0;
        for (double x : {t, 1.0 - t})
            EXPECT_LT(detail::s0_bracket(spec.alpha[0], 2.0, eigs[0].eta(), eigs[0].value(x), eigs[0].derivative(x)), 0.0);
    }
}

TEST(BoundaryLayer, AlphaOneCannotBeCertified)
{
    const Problem prob = square({2.0, 4.0}, 2.0);
    BarrierSpec spec = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, spec.inner);
    EXPECT_FALSE(certify_boundary_layer(eigs[0], 1.0).has_value());
    spec.alpha[0] = 1.0;
    EXPECT_THROW(lambda_star_sub(spec, prob, eigs, default_resolution(2, 51)), CertificationFailure);
}

TEST(EpsilonForLambda, IsLargestAdmissible)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    const BarrierSpec tmpl = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, tmpl.inner);
    const auto res = default_resolution(2, 101);
    const double eps = epsilon_for_lambda(prob, tmpl, eigs, 1.0, res);
    BarrierSpec s = tmpl;
    s.eps = eps;
    EXPECT_LE(lambda_star_sub(s, prob, eigs, res).value, 1.0);
    s.eps = eps * 1.001;
    EXPECT_GT(lambda_star_sub(s, prob, eigs, res).value, 1.0);
}

TEST(EpsilonForLambda, Errors)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    const BarrierSpec tmpl = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, tmpl.inner);
    EXPECT_THROW(epsilon_for_lambda(prob, tmpl, eigs, 0.0, default_resolution(2, 51)), RegimeError);
    const Problem mid = square({2.0, 4.0}, 3.0);
    EXPECT_THROW(epsilon_for_lambda(mid, default_spec(mid), build_eigenpairs(mid, Box::unit(2)), 1.0,
                                    default_resolution(2, 51)),
                 RegimeError);
}

TEST(FindAdmissibleEpsilon, IntermediateBelowThresholdFails)
{
    // q = p_1 = 2: lambda_* >= max S0 = 2 pi^2 for every eps, so lambda = 5 has no eps.
    const Problem prob = square({2.0, 4.0}, 2.0);
    const BarrierSpec tmpl = default_spec(prob);
    const auto eigs = build_eigenpairs(prob, tmpl.inner);
    const auto res = default_resolution(2, 51);
    EXPECT_THROW(find_admissible_epsilon(prob, tmpl, eigs, 5.0, res), SearchFailure);
    const double eps = find_admissible_epsilon(prob, tmpl, eigs, 40.0, res);
    BarrierSpec s = tmpl;
    s.eps = eps;
    EXPECT_LE(lambda_star_sub(s, prob, eigs, res).value, 40.0);
}

TEST(Supersolution, ThresholdAndM)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    BarrierSpec spec = default_spec(prob);
    const auto outer = build_eigenpairs(prob, spec.outer);
    const Grid grid(prob.omega(), {33, 33});
    const double M = m_for_lambda(prob, spec, outer, 50.0, grid);
    spec.M = M;
    const SuperThreshold t = lambda_star_super(spec, prob, outer, grid);
    EXPECT_GE(t.value, 50.0);
    if (M > 1.0)
    {
        spec.M = M / 2;
        EXPECT_LT(lambda_star_super(spec, prob, outer, grid).value, 50.0);
    }
    // Direct evaluation at the argmin node.
    const auto x = grid.point(t.argmin);
    spec.M = M;
    double prod = M;
    for (std::size_t i = 0; i < 2; ++i)
        prod *= outer[i].value(x[i]);
    double expected = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        expected += outer[i].eta() * std::pow(prod, prob.p(i) - prob.q());
    EXPECT_NEAR(t.value, expected, 1e-12 * expected);
}

TEST(Supersolution, FloorIsDominated)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    const BarrierSpec spec = default_spec(prob);
    const auto outer = build_eigenpairs(prob, spec.outer);
    const Grid grid(prob.omega(), {17, 17});
    GridField floor(grid, 0.0);
    floor[grid.size() / 2] = 37.0;
    const double M = m_for_lambda(prob, spec, outer, 1.0, grid, &floor);
    BarrierSpec s = spec;
    s.M = M;
    const GridField upper = sample_to_grid(BarrierFunction(BarrierKind::super, s, outer), grid);
    EXPECT_GE(upper[grid.size() / 2], 37.0);
}

TEST(Supersolution, Preconditions)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    BarrierSpec spec = default_spec(prob);
    const auto outer = build_eigenpairs(prob, spec.outer);
    spec.outer = prob.omega();
    EXPECT_THROW(lambda_star_super(spec, prob, outer, Grid(prob.omega(), {9, 9})), ContainmentError);
}

TEST(NonexistenceBound, Values)
{
    EXPECT_DOUBLE_EQ(nonexistence_bound(square({2.0, 4.0}, 2.0)), 1.0);
    const Problem wide({2.0, 4.0}, 2.0, 1.0, Box({Interval(0.0, 2.0), Interval(0.0, 1.0)}));
    EXPECT_DOUBLE_EQ(nonexistence_bound(wide), 0.25);
    const Problem p3({3.0, 4.0}, 3.0, 1.0, Box::unit(2));
    EXPECT_NEAR(nonexistence_bound(p3), std::pow(2.0 / 3.0, 3.0), 1e-15);
    EXPECT_THROW(nonexistence_bound(square({2.0, 4.0}, 1.5)), RegimeError);
}

TEST(BarrierFunction, PartialsMatchFiniteDifferences)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    BarrierSpec spec = default_spec(prob);
    spec.eps = 0.2;
    spec.M = 3.0;
    for (BarrierKind kind : {BarrierKind::sub, BarrierKind::super})
    {
        const BarrierFunction bf = build_barrier(kind, spec, prob);
        for (const std::vector<double>& x : {std::vector<double>{0.3, 0.6}, std::vector<double>{0.71, 0.12}})
        {
            for (std::size_t axis = 0; axis < 2; ++axis)
            {
                const double h = 1e-6;
                auto xp = x, xm = x;
                xp[axis] += h;
                xm[axis] -= h;
                const double fd = (bf.value(xp) - bf.value(xm)) / (2 * h);
                EXPECT_NEAR(bf.partial(x, axis), fd, 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST(BarrierFunction, SubVanishesOutsideInnerBox)
{
    const Problem prob = square({2.0, 4.0}, 1.5);
    BarrierSpec spec = default_spec(prob);
    spec.inner = Box({Interval(0.25, 0.75), Interval(0.25, 0.75)});
    const BarrierFunction bf = build_barrier(BarrierKind::sub, spec, prob);
    EXPECT_EQ(bf.value(std::vector<double>{0.1, 0.5}), 0.0);
    EXPECT_EQ(bf.value(std::vector<double>{0.25, 0.5}), 0.0);
    EXPECT_NEAR(bf.value(std::vector<double>{0.5, 0.5}), spec.eps, 1e-12);
    const Grid grid(prob.omega(), {9, 9});
    const GridField f = sample_to_grid(bf, grid);
    EXPECT_EQ(f.boundary_max_abs(), 0.0);
}
