#pragma once

// Reference argmin over a design grid, coded without enumerate_grid,
// objective, or optimize so that the search can be cross-checked.

#include <cstddef>
#include <functional>
#include <utility>

#include "pouchsim/design_space.hpp"
#include "pouchsim/errors.hpp"

namespace pouchsim {

struct OracleFunctions {
    std::function<double(const ActuatorDesign&)> alpha;
    std::function<double(const ActuatorDesign&)> pressure_kpa;
    std::function<double(const ActuatorDesign&)> recovery_s;
};

inline std::pair<ActuatorDesign, double> brute_force_argmin(const OracleFunctions& fns,
                                                            const DesignGrid& grid,
                                                            PouchMaterial material = PouchMaterial::PP) {
    validate_grid(grid);
    bool found = false;
    ActuatorDesign best{};
    double best_f = 0.0;
    for (std::size_t a = 0; a < grid.lengths_mm.size(); ++a)
        for (std::size_t b = 0; b < grid.widths_mm.size(); ++b)
            for (std::size_t c = 0; c < grid.turns.size(); ++c)
                for (std::size_t e = 0; e < grid.pressures_kpa.size(); ++e) {
                    const double p = grid.pressures_kpa[e];
                    if (!cycle_life(material, p).feasible) continue;
                    for (std::size_t g = 0; g < grid.covers.size(); ++g)
                        for (std::size_t h = 0; h < grid.structures.size(); ++h) {
                            ActuatorDesign d;
                            d.length_mm = grid.lengths_mm[a];
                            d.width_mm = grid.widths_mm[b];
                            d.turns = grid.turns[c];
                            d.pressure_kpa = p;
                            d.cover = grid.covers[g];
                            d.structure = grid.structures[h];
                            const double al = fns.alpha(d);
                            const double pg = fns.pressure_kpa(d);
                            if (!(al > 1e-9) || !(pg > 1e-9)) continue;
                            const double f = fns.recovery_s(d) / (pg * al);
                            // Strict '<' keeps the earliest design on ties.
                            if (!found || f < best_f) {
                                found = true;
                                best = d;
                                best_f = f;
                            }
                        }
                }
    if (!found) throw NoFeasibleDesign("brute_force_argmin: no feasible design");
    return {best, best_f};
}

}  // namespace pouchsim
