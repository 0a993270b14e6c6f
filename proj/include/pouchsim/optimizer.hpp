#pragma once

/**
 * @file optimizer.hpp
 * @brief Design objective f = t / (P_g * alpha) and constrained exhaustive
 * search over a design grid.
 *
 * Any design whose inflation pressure fails the pouch-material durability
 * check is excluded. Ties keep the first design in grid enumeration order.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pouchsim/design_csv.hpp"
#include "pouchsim/design_space.hpp"
#include "pouchsim/errors.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim {

inline constexpr double kObjectiveFloor = 1e-9;

/// Empty when alpha or P_g is too small to divide by.
using ObjectiveValue = std::optional<double>;

inline ObjectiveValue objective(const PerformanceTriple& tr) {
    if (tr.alpha <= kObjectiveFloor || tr.generated_pressure_kpa <= kObjectiveFloor) return std::nullopt;
    return tr.recovery_time_s / (tr.generated_pressure_kpa * tr.alpha);
}

using Predictor = std::function<PerformanceTriple(const ActuatorDesign&)>;

struct RankedDesign {
    ActuatorDesign design;
    PerformanceTriple triple;
    double f = 0.0;
};

struct OptimizationReport {
    ActuatorDesign best_design;
    PerformanceTriple best_triple;
    double best_f = 0.0;
    std::size_t evaluated_count = 0;
    std::size_t infeasible_count = 0;
    std::vector<RankedDesign> ranking;  // best first, at most top_k entries
};

inline OptimizationReport optimize(const Predictor& predictor, const DesignGrid& grid,
                                   PouchMaterial material = PouchMaterial::PP, std::size_t top_k = 10) {
    const auto designs = enumerate_grid(grid);
    OptimizationReport rep;
    rep.evaluated_count = designs.size();

    struct Scored {
        std::size_t index;
        RankedDesign entry;
    };
    std::vector<Scored> feasible;
    feasible.reserve(designs.size());
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto& d = designs[i];
        if (!cycle_life(material, d.pressure_kpa).feasible) {
            ++rep.infeasible_count;
            continue;
        }
        const PerformanceTriple tr = predictor(d);
        const ObjectiveValue f = objective(tr);
        if (!f) {
            ++rep.infeasible_count;
            continue;
        }
        feasible.push_back({i, {d, tr, *f}});
    }
    if (feasible.empty())
        throw NoFeasibleDesign("no feasible design in grid of " + std::to_string(designs.size()) +
                               " points for material " + std::string(to_token(material)));

    std::stable_sort(feasible.begin(), feasible.end(), [](const Scored& a, const Scored& b) {
        if (a.entry.f != b.entry.f) return a.entry.f < b.entry.f;
        return a.index < b.index;
    });
    rep.best_design = feasible.front().entry.design;
    rep.best_triple = feasible.front().entry.triple;
    rep.best_f = feasible.front().entry.f;
    const std::size_t k = std::min(top_k, feasible.size());
    for (std::size_t i = 0; i < k; ++i) rep.ranking.push_back(feasible[i].entry);
    return rep;
}

// ---- report emission ------------------------------------------------------

inline std::string describe_design(const ActuatorDesign& d) {
    return "(" + text::format_real(d.length_mm) + ", " + text::format_real(d.width_mm) + ", " +
           std::to_string(d.turns) + ", " + text::format_real(d.pressure_kpa) + ", " +
           std::string(to_token(d.cover)) + ", " + std::string(to_token(d.structure)) + ")";
}

inline std::string format_report(const OptimizationReport& rep) {
    std::string s;
    s += "best: " + describe_design(rep.best_design) + "\n";
    s += "alpha=" + text::format_real(rep.best_triple.alpha, 6) +
         " pg_kpa=" + text::format_real(rep.best_triple.generated_pressure_kpa, 6) +
         " t_s=" + text::format_real(rep.best_triple.recovery_time_s, 6) + "\n";
    s += "f=" + text::format_real(rep.best_f, 9) + "\n";
    s += "evaluated=" + std::to_string(rep.evaluated_count) +
         " infeasible=" + std::to_string(rep.infeasible_count) + "\n";
    s += "rank  f            design\n";
    for (std::size_t i = 0; i < rep.ranking.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%-5zu %-12s ", i + 1, text::format_real(rep.ranking[i].f, 6).c_str());
        s += buf + describe_design(rep.ranking[i].design) + "\n";
    }
    return s;
}

inline constexpr std::string_view kRankingHeader =
    "rank,f,length_mm,width_mm,turns,pressure_kpa,cover,structure,alpha,pg_kpa,t_s";

inline std::string ranking_to_csv(const OptimizationReport& rep) {
    std::string s(kRankingHeader);
    s += '\n';
    for (std::size_t i = 0; i < rep.ranking.size(); ++i) {
        const auto& r = rep.ranking[i];
        s += std::to_string(i + 1) + ',' + text::format_real(r.f) + ',' + format_design_fields(r.design) +
             ',' + text::format_real(r.triple.alpha) + ',' +
             text::format_real(r.triple.generated_pressure_kpa) + ',' +
             text::format_real(r.triple.recovery_time_s) + '\n';
    }
    return s;
}

}  // namespace pouchsim
