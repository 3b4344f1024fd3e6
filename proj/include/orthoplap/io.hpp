// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_IO_HPP
#define ORTHOPLAP_IO_HPP

// JSON records for eigenpairs, thresholds, solve reports, check reports and
// scan results. Records carry no timestamps; those go to metadata_record().

#include "orthoplap/barriers.hpp"
#include "orthoplap/eigen1d.hpp"
#include "orthoplap/pde_solver.hpp"
#include "orthoplap/verification.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <string>

namespace orthoplap
{

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

namespace detail
{

// JSON has no infinity; unbounded values are written as null.
inline Json number_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

template <class T>
Json optional_json(const std::optional<T>& x)
{
    return x ? Json(*x) : Json(nullptr);
}

} // namespace detail

inline Json to_json(const Eigenpair1D& e)
{
    Json mesh = Json::array();
    for (std::size_t k = 0; k < e.size(); ++k)
        mesh.push_back({{"x", e.x(k)}, {"v", e.values()[k]}, {"dv", e.derivatives()[k]}});
    return Json{{"p", e.p()},
                {"a", e.interval().a},
                {"b", e.interval().b},
                {"eta", e.eta()},
                {"eta_formula", eigenvalue_formula(e.p(), e.interval().length())},
                {"raw_asymmetry", e.raw_asymmetry()},
                {"endpoint_residual", e.endpoint_residual()},
                {"mesh", std::move(mesh)}};
}

inline Json to_json(const Box& b)
{
    Json a = Json::array(), c = Json::array();
    for (const auto& iv : b.axes())
    {
        a.push_back(iv.a);
        c.push_back(iv.b);
    }
    return Json{{"a", a}, {"b", c}};
}

inline Json to_json(const BarrierSpec& s)
{
    return Json{{"inner", to_json(s.inner)}, {"outer", to_json(s.outer)}, {"eps", s.eps}, {"alpha", s.alpha},
                {"M", s.M},           {"delta", s.delta},           {"i0", s.i0}};
}

struct Thresholds
{
    Regime regime = Regime::sublinear;
    BarrierSpec spec;
    std::optional<SubThreshold> sub;
    std::optional<SuperThreshold> super;
    std::optional<double> nonexistence_bound;
};

inline Json to_json(const Thresholds& t)
{
    Json j{{"regime", to_string(t.regime)},
           {"eps", t.spec.eps},
           {"alpha", t.spec.alpha},
           {"M", t.spec.M},
           {"delta", t.spec.delta}};
    if (t.sub)
    {
        j["lambda_star_sub"] = detail::number_or_null(t.sub->value);
        j["lambda_star_sub_interior"] = detail::number_or_null(t.sub->interior_max);
        j["lambda_star_sub_layer"] = detail::number_or_null(t.sub->layer_max);
        j["layer_certified"] = t.sub->certified;
    }
    else
    {
        j["lambda_star_sub"] = nullptr;
    }
    j["lambda_star_super"] = t.super ? Json(t.super->value) : Json(nullptr);
    j["nonexistence_bound"] = detail::optional_json(t.nonexistence_bound);
    return j;
}

inline Json to_json(const WeakCheckReport& r)
{
    Json worst = Json::array();
    for (const auto& [k, v] : r.worst_nodes)
        worst.push_back({{"node", k}, {"residual", v}});
    return Json{{"kind", to_string(r.kind)},
                {"passed", r.passed},
                {"tol", r.tol},
                {"max_residual", r.max_residual},
                {"min_residual", r.min_residual},
                {"node_volume", r.node_volume},
                {"worst_violation", r.worst_violation},
                {"normalized_violation", r.normalized_violation()},
                {"worst_nodes", std::move(worst)}};
}

inline Json to_json(const SandwichReport& r)
{
    return Json{{"ok", r.ok},
                {"worst_gap", detail::number_or_null(r.worst_gap)},
                {"node", detail::optional_json(r.node)},
                {"below_lower", r.below_lower}};
}

inline Json to_json(const PoincareReport& r)
{
    return Json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"ok", r.ok}};
}

inline Json to_json(const ProblemDiagnostics& d)
{
    return Json{{"inverse_sum", d.inverse_sum},
                {"sum_condition", d.sum_condition},
                {"p_star", detail::optional_json(d.p_star)},
                {"p_infinity", detail::optional_json(d.p_infinity)},
                {"regime", to_string(d.regime)},
                {"q_below_p_infinity", detail::optional_json(d.q_below_p_infinity)},
                {"sorted_input", d.sorted_input},
                {"warnings", d.warnings}};
}

inline Json to_json(const SolveReport& r)
{
    Json j{{"converged", r.converged},
           {"iterations", r.iterations},
           {"inner_iterations", r.inner_iterations},
           {"monotone_ok", r.monotone_ok},
           {"inner_descent_ok", r.inner_descent_ok},
           {"sandwich_ok", r.sandwich_ok},
           {"positive_mass", r.positive_mass},
           {"final_residual", r.final_residual},
           {"zero_interior_nodes", r.zero_interior_nodes},
           {"reg", r.reg},
           {"tol", r.tol},
           {"residual_history", r.residual_history},
           {"increment_history", r.increment_history},
           {"energy_history", r.energy_history},
           {"mass_history", r.mass_history}};
    j["lower_check"] = r.lower_check ? to_json(*r.lower_check) : Json(nullptr);
    j["upper_check"] = r.upper_check ? to_json(*r.upper_check) : Json(nullptr);
    return j;
}

inline Json to_json(const ScanResult& r)
{
    Json pts = Json::array();
    for (const auto& p : r.points)
        pts.push_back({{"lambda", p.lambda},
                       {"solution_found", p.solution_found},
                       {"method", to_string(p.method)},
                       {"positive_mass", p.positive_mass},
                       {"residual", p.residual},
                       {"outer_iterations", p.outer_iterations},
                       {"note", p.note},
                       {"eps", detail::optional_json(p.eps)},
                       {"M", detail::optional_json(p.M)},
                       {"seed_passes_sub_check", p.seed_passes_sub_check}});
    return Json{{"bracket", {detail::number_or_null(r.bracket_lo), detail::number_or_null(r.bracket_hi)}},
                {"any_success", r.any_success},
                {"mass_floor", r.mass_floor},
                {"nonexistence_bound", detail::optional_json(r.nonexistence_bound)},
                {"ladder", std::move(pts)}};
}

//! Ladder as CSV: lambda, classified, positive_mass, residual, method, note.
inline void write_ladder_csv(std::ostream& os, const ScanResult& r)
{
    os << "lambda,classified,positive_mass,residual,method,note\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& p : r.points)
        os << p.lambda << "," << (p.solution_found ? "solution_found" : "no_positive_solution") << ","
           << p.positive_mass << "," << p.residual << "," << to_string(p.method) << ",\"" << p.note << "\"\n";
}

//! Run metadata kept apart from the deterministic records.
inline Json metadata_record(const std::string& command, unsigned threads)
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return Json{{"tool", "orthoplap"}, {"version", kVersion}, {"command", command}, {"threads", threads},
                {"generated_at", buf}};
}

inline void write_json(const std::string& path, const Json& j)
{
    std::ofstream os(path);
    if (!os)
        throw Error("cannot open " + path + " for writing");
    os << j.dump(2) << "\n";
}

} // namespace orthoplap

#endif // ORTHOPLAP_IO_HPP
