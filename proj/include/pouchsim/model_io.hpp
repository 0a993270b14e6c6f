#pragma once

/**
 * @file model_io.hpp
 * @brief JSON model files for the surrogate.
 *
 * A model file records everything needed to reject a stale or foreign file:
 * the format version, layer dimensions, the one-hot category orders, and the
 * feature scaling denominators, next to the parameters themselves. Doubles are
 * written in shortest round-trip form, so save/load is bit-exact.
 *
 *   {
 *     "format": "pouchsim-mlp", "format_version": 1,
 *     "layer_dims": [11, 150, 100, 3],
 *     "category_orders": {"cover": [...], "structure": [...]},
 *     "feature_scaling": {"length_mm": 150, "width_mm": 30, "turns": 3, "pressure_kpa": 30},
 *     "output_offset": [...], "output_scale": [...],
 *     "layers": [{"weights": [[fan_out reals] x fan_in], "biases": [...]}, ...]
 *   }
 */

#include <json.hpp>

#include <string>
#include <vector>

#include "pouchsim/errors.hpp"
#include "pouchsim/surrogate.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormatName = "pouchsim-mlp";

namespace detail {

inline nlohmann::json category_orders_json() {
    nlohmann::json covers = nlohmann::json::array();
    for (auto t : kCoverTokens) covers.push_back(std::string(t));
    nlohmann::json structures = nlohmann::json::array();
    for (auto t : kStructureTokens) structures.push_back(std::string(t));
    return {{"cover", covers}, {"structure", structures}};
}

inline nlohmann::json feature_scaling_json() {
    return {{"length_mm", scaling::kLengthMm},
            {"width_mm", scaling::kWidthMm},
            {"turns", scaling::kTurns},
            {"pressure_kpa", scaling::kPressureKpa}};
}

inline std::string dims_string(const std::vector<int>& dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
    return s + "]";
}

}  // namespace detail

inline std::string model_to_json(const MlpModel& m) {
    check_shapes(m);
    nlohmann::json j;
    j["format"] = std::string(kModelFormatName);
    j["format_version"] = kModelFormatVersion;
    j["layer_dims"] = m.layer_dims();
    j["category_orders"] = detail::category_orders_json();
    j["feature_scaling"] = detail::feature_scaling_json();
    j["output_offset"] = m.output_offset;
    j["output_scale"] = m.output_scale;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : m.layers) {
        nlohmann::json w = nlohmann::json::array();
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(l.weights.cols()));
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) row[static_cast<std::size_t>(c)] = l.weights(r, c);
            w.push_back(row);
        }
        std::vector<double> b(l.bias.data(), l.bias.data() + l.bias.size());
        layers.push_back({{"weights", w}, {"biases", b}});
    }
    j["layers"] = layers;
    return j.dump(1) + "\n";
}

inline MlpModel model_from_json(const std::string& contents) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(contents);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kModelFormatName)
            throw FormatError("not a pouchsim model file (format '" + j.at("format").get<std::string>() + "')");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw FormatError("unsupported model format_version " + std::to_string(version) +
                              ", expected " + std::to_string(kModelFormatVersion));
        const auto dims = j.at("layer_dims").get<std::vector<int>>();
        const std::vector<int> expected(kLayerDims.begin(), kLayerDims.end());
        if (dims != expected)
            throw FormatError("layer_dims mismatch: expected " + detail::dims_string(expected) +
                              ", found " + detail::dims_string(dims));
        if (j.at("category_orders") != detail::category_orders_json())
            throw FormatError("category_orders mismatch: expected " + detail::category_orders_json().dump() +
                              ", found " + j.at("category_orders").dump());
        if (j.at("feature_scaling") != detail::feature_scaling_json())
            throw FormatError("feature_scaling mismatch: expected " + detail::feature_scaling_json().dump() +
                              ", found " + j.at("feature_scaling").dump());

        MlpModel m = zero_model();
        m.output_offset = j.at("output_offset").get<std::array<double, 3>>();
        m.output_scale = j.at("output_scale").get<std::array<double, 3>>();
        const auto& layers = j.at("layers");
        if (!layers.is_array() || layers.size() != m.layers.size())
            throw FormatError("expected " + std::to_string(m.layers.size()) + " layers");
        for (std::size_t i = 0; i < m.layers.size(); ++i) {
            auto& l = m.layers[i];
            const auto w = layers[i].at("weights").get<std::vector<std::vector<double>>>();
            const auto b = layers[i].at("biases").get<std::vector<double>>();
            if (w.size() != static_cast<std::size_t>(l.weights.rows()) ||
                b.size() != static_cast<std::size_t>(l.bias.size()))
                throw FormatError("layer " + std::to_string(i) + " shape mismatch");
            for (std::size_t r = 0; r < w.size(); ++r) {
                if (w[r].size() != static_cast<std::size_t>(l.weights.cols()))
                    throw FormatError("layer " + std::to_string(i) + " row " + std::to_string(r) +
                                      " has " + std::to_string(w[r].size()) + " entries, expected " +
                                      std::to_string(l.weights.cols()));
                for (std::size_t c = 0; c < w[r].size(); ++c)
                    l.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r][c];
            }
            for (std::size_t c = 0; c < b.size(); ++c) l.bias(static_cast<Eigen::Index>(c)) = b[c];
            if (!l.weights.allFinite() || !l.bias.allFinite())
                throw FormatError("layer " + std::to_string(i) + " has non-finite parameters");
        }
        try {
            check_shapes(m);
        } catch (const ValidationError& e) {
            throw FormatError(e.what());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const MlpModel& m, const std::string& path) {
    text::write_file(path, model_to_json(m));
}

inline MlpModel load_model(const std::string& path) { return model_from_json(text::read_file(path)); }

}  // namespace pouchsim
