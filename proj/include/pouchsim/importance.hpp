#pragma once

/**
 * @file importance.hpp
 * @brief Permutation feature importance for the surrogate.
 *
 * Importance is reported for the six design-level features. Categorical
 * features are permuted as whole categories, so each one-hot block moves as a
 * unit. The error measure is the mean over outputs of the squared error in
 * standardized units, which keeps the three outputs on an equal footing.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pouchsim/surrogate.hpp"

namespace pouchsim {

enum class DesignFeature { Length, Width, Turns, Pressure, Cover, Structure };
inline constexpr std::size_t kDesignFeatureCount = 6;
inline constexpr std::array<std::string_view, kDesignFeatureCount> kDesignFeatureNames{
    "length", "width", "turns", "pressure", "cover", "structure"};

struct ImportanceResult {
    std::array<double, kDesignFeatureCount> scores{};
    std::array<std::vector<double>, kDesignFeatureCount> per_repeat;
    double baseline = 0.0;
};

inline double standardized_mse(const MlpModel& m, std::span<const ActuatorDesign> designs,
                               std::span<const PerformanceSample> samples) {
    const auto preds = predict_batch(m, designs);
    double total = 0.0;
    for (std::size_t k = 0; k < kOutputCount; ++k) {
        double sq = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double e = (preds[i][k] - as_array(samples[i].measured)[k]) / m.output_scale[k];
            sq += e * e;
        }
        total += sq / static_cast<double>(samples.size());
    }
    return total / static_cast<double>(kOutputCount);
}

namespace detail {
inline void copy_feature(ActuatorDesign& dst, const ActuatorDesign& src, DesignFeature f) {
    switch (f) {
        case DesignFeature::Length: dst.length_mm = src.length_mm; break;
        case DesignFeature::Width: dst.width_mm = src.width_mm; break;
        case DesignFeature::Turns: dst.turns = src.turns; break;
        case DesignFeature::Pressure: dst.pressure_kpa = src.pressure_kpa; break;
        case DesignFeature::Cover: dst.cover = src.cover; break;
        case DesignFeature::Structure: dst.structure = src.structure; break;
    }
}
}  // namespace detail

inline constexpr std::size_t kMinImportanceSamples = 30;

/// Repeat r of feature j draws its permutation from seed_seq{seed, j, r}, so
/// the first R repeats are the same for any repeat count >= R.
inline ImportanceResult permutation_importance(const MlpModel& m,
                                               std::span<const PerformanceSample> samples,
                                               std::uint64_t seed, int repeats = 10) {
    if (samples.size() < kMinImportanceSamples)
        throw ValidationError("permutation_importance: need at least 30 samples, got " +
                              std::to_string(samples.size()));
    if (repeats < 1) throw ValidationError("permutation_importance: repeats must be >= 1");

    std::vector<ActuatorDesign> designs;
    designs.reserve(samples.size());
    for (const auto& s : samples) designs.push_back(s.design);

    ImportanceResult out;
    out.baseline = standardized_mse(m, designs, samples);

    std::vector<std::size_t> perm(samples.size());
    std::vector<ActuatorDesign> shuffled(designs);
    for (std::size_t j = 0; j < kDesignFeatureCount; ++j) {
        const auto feature = static_cast<DesignFeature>(j);
        for (int r = 0; r < repeats; ++r) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            shuffled = designs;
            for (std::size_t i = 0; i < designs.size(); ++i)
                detail::copy_feature(shuffled[i], designs[perm[i]], feature);
            out.per_repeat[j].push_back(standardized_mse(m, shuffled, samples) - out.baseline);
        }
        out.scores[j] = std::accumulate(out.per_repeat[j].begin(), out.per_repeat[j].end(), 0.0) /
                        static_cast<double>(repeats);
    }
    return out;
}

inline std::string importance_to_csv(const ImportanceResult& r) {
    std::string s = "feature,score\n";
    for (std::size_t j = 0; j < kDesignFeatureCount; ++j)
        s += std::string(kDesignFeatureNames[j]) + ',' + text::format_real(r.scores[j]) + '\n';
    return s;
}

}  // namespace pouchsim
