#pragma once

/**
 * @file config.hpp
 * @brief Grid config files.
 *
 * A grid file is a JSON object whose keys name the axes to override; axes
 * left out keep their default values. Unknown keys are rejected.
 *
 *   {
 *     "lengths_mm": [110, 120, 130],
 *     "widths_mm": [20, 25],
 *     "turns": [1, 2],
 *     "pressures_kpa": [10, 20, 30],
 *     "covers": ["none", "paper", "a80"],
 *     "structures": ["type1", "type4"]
 *   }
 */

#include <json.hpp>

#include <string>
#include <vector>

#include "pouchsim/design_space.hpp"
#include "pouchsim/errors.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim {

namespace detail {

template <typename T, typename Parse>
std::vector<T> parse_token_axis(const nlohmann::json& arr, const char* key, Parse parse) {
    std::vector<T> out;
    for (const auto& v : arr) {
        const auto tok = v.get<std::string>();
        const auto parsed = parse(tok);
        if (!parsed) throw ValidationError(std::string("grid config: unknown token '") + tok + "' in " + key);
        out.push_back(*parsed);
    }
    return out;
}

}  // namespace detail

inline DesignGrid grid_from_json(const std::string& contents) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(contents);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("grid config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("grid config: top level must be an object");
    DesignGrid g = DesignGrid::default_grid();
    try {
        for (const auto& [key, value] : j.items()) {
            if (!value.is_array()) throw ValidationError("grid config: '" + key + "' must be a list");
            if (key == "lengths_mm")
                g.lengths_mm = value.get<std::vector<double>>();
            else if (key == "widths_mm")
                g.widths_mm = value.get<std::vector<double>>();
            else if (key == "turns")
                g.turns = value.get<std::vector<int>>();
            else if (key == "pressures_kpa")
                g.pressures_kpa = value.get<std::vector<double>>();
            else if (key == "covers")
                g.covers = detail::parse_token_axis<CoverType>(value, "covers", parse_cover);
            else if (key == "structures")
                g.structures = detail::parse_token_axis<StructureType>(value, "structures", parse_structure);
            else
                throw ValidationError("grid config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("grid config: wrong value type: ") + e.what());
    }
    validate_grid(g);
    return g;
}

inline DesignGrid read_grid_file(const std::string& path) { return grid_from_json(text::read_file(path)); }

}  // namespace pouchsim
