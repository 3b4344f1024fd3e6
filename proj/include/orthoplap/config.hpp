// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_CONFIG_HPP
#define ORTHOPLAP_CONFIG_HPP

// Run configuration:
//
//   { "p": [2, 4], "q": 1.5, "lambda": 1,
//     "omega": { "a": [0, 0], "b": [1, 1] },
//     "grid": { "n": [65, 65] },
//     "options": { "eps": ..., "alpha": [...], "M": ..., "tol": 1e-6, "reg": ...,
//                  "check_tol": 1e-3, "max_outer": 2000 } }
//
// Everything under "options" is optional. grid.n is given in input axis
// order and permuted together with p.

#include "orthoplap/grid.hpp"
#include "orthoplap/pde_solver.hpp"
#include "orthoplap/problem.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace orthoplap
{

class ConfigError : public Error
{
public:
    using Error::Error;
};

struct RunConfig
{
    Problem problem;
    Grid grid;
    std::optional<double> eps;
    std::optional<std::vector<double>> alpha;  //!< in sorted axis order
    std::optional<double> M;
    SolverOptions solver;
    double check_tol = 1e-3;                   //!< weak checks, per unit node volume
};

namespace detail
{

template <class T>
T require_field(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key))
        throw ConfigError(std::string("config: missing field '") + key + "'");
    try
    {
        return j.at(key).get<T>();
    }
    catch (const nlohmann::json::exception&)
    {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

template <class T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return require_field<T>(j, key);
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    const auto p = detail::require_field<std::vector<double>>(j, "p");
    const auto q = detail::require_field<double>(j, "q");
    const auto lambda = detail::require_field<double>(j, "lambda");
    if (!j.contains("omega") || !j.contains("grid"))
        throw ConfigError("config: 'omega' and 'grid' are required");
    const auto a = detail::require_field<std::vector<double>>(j.at("omega"), "a");
    const auto b = detail::require_field<std::vector<double>>(j.at("omega"), "b");
    const auto n = detail::require_field<std::vector<std::size_t>>(j.at("grid"), "n");
    if (a.size() != p.size() || b.size() != p.size() || n.size() != p.size())
        throw ConfigError("config: p, omega.a, omega.b and grid.n must have the same length");

    std::optional<Problem> parsed;
    try
    {
        std::vector<Interval> axes;
        for (std::size_t i = 0; i < p.size(); ++i)
            axes.emplace_back(a[i], b[i]);
        parsed.emplace(p, q, lambda, Box(axes));
    }
    catch (const Error& e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const Problem& prob = *parsed;

    std::vector<std::size_t> counts;
    for (std::size_t k : prob.axis_permutation())
        counts.push_back(n[k]);

    for (std::size_t c : counts)
        if (c < 3)
            throw ConfigError("config: grid.n needs at least 3 nodes per axis");
    RunConfig cfg{prob, Grid(prob.omega(), counts), {}, {}, {}, {}, 1e-3};
    const nlohmann::json opts = j.contains("options") ? j.at("options") : nlohmann::json::object();
    cfg.eps = detail::optional_field<double>(opts, "eps");
    cfg.M = detail::optional_field<double>(opts, "M");
    if (auto alpha = detail::optional_field<std::vector<double>>(opts, "alpha"))
    {
        if (alpha->size() != p.size())
            throw ConfigError("config: options.alpha must have one entry per axis");
        std::vector<double> sorted;
        for (std::size_t k : prob.axis_permutation())
            sorted.push_back((*alpha)[k]);
        cfg.alpha = sorted;
    }
    if (auto tol = detail::optional_field<double>(opts, "tol"))
        cfg.solver.tol = *tol;
    if (auto reg = detail::optional_field<double>(opts, "reg"))
        cfg.solver.reg = *reg;
    if (auto mo = detail::optional_field<std::size_t>(opts, "max_outer"))
        cfg.solver.max_outer = *mo;
    if (auto ct = detail::optional_field<double>(opts, "check_tol"))
        cfg.check_tol = *ct;
    if (!(cfg.solver.tol > 0.0) || !(cfg.check_tol > 0.0))
        throw ConfigError("config: tolerances must be positive");
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try
    {
        is >> j;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(j);
}

} // namespace orthoplap

#endif // ORTHOPLAP_CONFIG_HPP
