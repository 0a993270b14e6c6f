#pragma once

/**
 * @file design_space.hpp
 * @brief Pouch-actuator design space: domain types, validation, feature
 * encoding, grid enumeration, and the pouch-material durability model.
 *
 * A design is six features: length, width, coil turns, static inflation
 * pressure, cover type, and cross-section structure. The encoder maps a
 * design onto the 11-entry vector consumed by the surrogate network:
 *
 *   [L/150, W/30, turns/3, p/30, onehot(cover, 3), onehot(structure, 4)]
 *
 * The scaling denominators and category orders are fixed constants and form
 * part of the model-file contract.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pouchsim/errors.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim {

enum class CoverType { NoCover, PetPaper, A80Ring };
enum class StructureType { Type1, Type2, Type3, Type4 };
enum class PouchMaterial { PP, BOPP, HDPE };

inline constexpr std::array<CoverType, 3> kAllCovers{CoverType::NoCover, CoverType::PetPaper,
                                                     CoverType::A80Ring};
inline constexpr std::array<StructureType, 4> kAllStructures{
    StructureType::Type1, StructureType::Type2, StructureType::Type3, StructureType::Type4};

// Lowercase file tokens, in one-hot order.
inline constexpr std::array<std::string_view, 3> kCoverTokens{"none", "paper", "a80"};
inline constexpr std::array<std::string_view, 4> kStructureTokens{"type1", "type2", "type3",
                                                                  "type4"};
inline constexpr std::array<std::string_view, 3> kMaterialTokens{"pp", "bopp", "hdpe"};

inline std::string_view to_token(CoverType c) { return kCoverTokens[static_cast<std::size_t>(c)]; }
inline std::string_view to_token(StructureType s) {
    return kStructureTokens[static_cast<std::size_t>(s)];
}
inline std::string_view to_token(PouchMaterial m) {
    return kMaterialTokens[static_cast<std::size_t>(m)];
}

inline std::optional<CoverType> parse_cover(std::string_view token) {
    for (std::size_t i = 0; i < kCoverTokens.size(); ++i)
        if (kCoverTokens[i] == token) return static_cast<CoverType>(i);
    return std::nullopt;
}

inline std::optional<StructureType> parse_structure(std::string_view token) {
    for (std::size_t i = 0; i < kStructureTokens.size(); ++i)
        if (kStructureTokens[i] == token) return static_cast<StructureType>(i);
    return std::nullopt;
}

inline std::optional<PouchMaterial> parse_material(std::string_view token) {
    for (std::size_t i = 0; i < kMaterialTokens.size(); ++i)
        if (kMaterialTokens[i] == token) return static_cast<PouchMaterial>(i);
    return std::nullopt;
}

namespace bounds {
inline constexpr double kMinLengthMm = 50.0;
inline constexpr double kMaxLengthMm = 200.0;
inline constexpr double kMinWidthMm = 10.0;
inline constexpr double kMaxWidthMm = 40.0;
inline constexpr int kMinTurns = 1;
inline constexpr int kMaxTurns = 3;
inline constexpr double kMinPressureKpa = 0.0;
inline constexpr double kMaxPressureKpa = 100.0;
}  // namespace bounds

struct ActuatorDesign {
    double length_mm = 130.0;
    double width_mm = 25.0;
    int turns = 1;
    double pressure_kpa = 30.0;
    CoverType cover = CoverType::PetPaper;
    StructureType structure = StructureType::Type4;

    friend bool operator==(const ActuatorDesign&, const ActuatorDesign&) = default;
};

/// Contraction ratio, generated pressure, and recovery time.
struct PerformanceTriple {
    double alpha = 0.0;
    double generated_pressure_kpa = 0.0;
    double recovery_time_s = 1.0;

    friend bool operator==(const PerformanceTriple&, const PerformanceTriple&) = default;
};

inline bool satisfies_invariants(const PerformanceTriple& t) {
    return std::isfinite(t.alpha) && std::isfinite(t.generated_pressure_kpa) &&
           std::isfinite(t.recovery_time_s) && t.alpha >= 0.0 && t.alpha <= 1.0 &&
           t.generated_pressure_kpa >= 0.0 && t.recovery_time_s > 0.0;
}

struct Violation {
    std::string field;
    double value;
    std::string message;
};

/// Empty result means the design is valid.
inline std::vector<Violation> validate_design(const ActuatorDesign& d) {
    std::vector<Violation> out;
    auto check = [&](const char* field, double v, double lo, double hi) {
        if (!(v >= lo && v <= hi))
            out.push_back({field, v,
                           std::string(field) + " must lie in [" + text::format_real(lo) + ", " +
                               text::format_real(hi) + "], got " + text::format_real(v)});
    };
    check("length_mm", d.length_mm, bounds::kMinLengthMm, bounds::kMaxLengthMm);
    check("width_mm", d.width_mm, bounds::kMinWidthMm, bounds::kMaxWidthMm);
    check("turns", d.turns, bounds::kMinTurns, bounds::kMaxTurns);
    check("pressure_kpa", d.pressure_kpa, bounds::kMinPressureKpa, bounds::kMaxPressureKpa);
    return out;
}

inline bool is_valid(const ActuatorDesign& d) { return validate_design(d).empty(); }

inline void require_valid(const ActuatorDesign& d) {
    const auto v = validate_design(d);
    if (!v.empty()) throw ValidationError("invalid design: " + v.front().message);
}

inline constexpr std::size_t kFeatureCount = 11;
using FeatureVector = std::array<double, kFeatureCount>;

namespace scaling {
inline constexpr double kLengthMm = 150.0;
inline constexpr double kWidthMm = 30.0;
inline constexpr double kTurns = 3.0;
inline constexpr double kPressureKpa = 30.0;
}  // namespace scaling

// Column offsets inside FeatureVector.
inline constexpr std::size_t kCoverSlot = 4;
inline constexpr std::size_t kStructureSlot = 7;

inline FeatureVector encode_features(const ActuatorDesign& d) {
    require_valid(d);
    FeatureVector x{};
    x[0] = d.length_mm / scaling::kLengthMm;
    x[1] = d.width_mm / scaling::kWidthMm;
    x[2] = d.turns / scaling::kTurns;
    x[3] = d.pressure_kpa / scaling::kPressureKpa;
    x[kCoverSlot + static_cast<std::size_t>(d.cover)] = 1.0;
    x[kStructureSlot + static_cast<std::size_t>(d.structure)] = 1.0;
    return x;
}

/// Axis-aligned design grid; enumeration order is lengths-major.
struct DesignGrid {
    std::vector<double> lengths_mm;
    std::vector<double> widths_mm;
    std::vector<int> turns;
    std::vector<double> pressures_kpa;
    std::vector<CoverType> covers;
    std::vector<StructureType> structures;

    std::size_t size() const {
        return lengths_mm.size() * widths_mm.size() * turns.size() * pressures_kpa.size() *
               covers.size() * structures.size();
    }

    /// {110..150} x {15..30} x {1,2,3} x {10,20,30} x 3 covers x 4 structures = 2160.
    static DesignGrid default_grid() {
        return {{110, 120, 130, 140, 150},
                {15, 20, 25, 30},
                {1, 2, 3},
                {10, 20, 30},
                {kAllCovers.begin(), kAllCovers.end()},
                {kAllStructures.begin(), kAllStructures.end()}};
    }
};

namespace detail {
template <typename T>
void check_axis(const std::vector<T>& axis, const char* name) {
    if (axis.empty()) throw ValidationError(std::string("grid axis '") + name + "' is empty");
    std::set<T> seen(axis.begin(), axis.end());
    if (seen.size() != axis.size())
        throw ValidationError(std::string("grid axis '") + name + "' has duplicate entries");
}
}  // namespace detail

inline void validate_grid(const DesignGrid& g) {
    detail::check_axis(g.lengths_mm, "lengths_mm");
    detail::check_axis(g.widths_mm, "widths_mm");
    detail::check_axis(g.turns, "turns");
    detail::check_axis(g.pressures_kpa, "pressures_kpa");
    detail::check_axis(g.covers, "covers");
    detail::check_axis(g.structures, "structures");
    ActuatorDesign probe;
    for (double v : g.lengths_mm) probe.length_mm = v, require_valid(probe);
    probe = {};
    for (double v : g.widths_mm) probe.width_mm = v, require_valid(probe);
    probe = {};
    for (int v : g.turns) probe.turns = v, require_valid(probe);
    probe = {};
    for (double v : g.pressures_kpa) probe.pressure_kpa = v, require_valid(probe);
}

inline std::vector<ActuatorDesign> enumerate_grid(const DesignGrid& g) {
    validate_grid(g);
    std::vector<ActuatorDesign> out;
    out.reserve(g.size());
    for (double len : g.lengths_mm)
        for (double wid : g.widths_mm)
            for (int n : g.turns)
                for (double p : g.pressures_kpa)
                    for (CoverType c : g.covers)
                        for (StructureType s : g.structures) out.push_back({len, wid, n, p, c, s});
    return out;
}

/// Durability verdict. `rated_cycles` is empty when the material has no
/// published cycle rating below its failure pressure.
struct CycleLife {
    std::optional<std::int64_t> rated_cycles;
    bool feasible = false;
};

namespace durability {
inline constexpr std::int64_t kPpRatedCycles = 5400;
inline constexpr double kPpFullLifeKpa = 40.0;
inline constexpr double kPpFailureKpa = 60.0;
inline constexpr double kBoppFailureKpa = 50.0;
inline constexpr double kHdpeFailureKpa = 30.0;
}  // namespace durability

/**
 * Step durability model. PP keeps its 5400-cycle rating up to 40 kPa, loses
 * it linearly toward zero at 100 kPa past that, and is rejected above 60 kPa.
 * BOPP and HDPE are pass/fail at 50 and 30 kPa.
 */
inline CycleLife cycle_life(PouchMaterial material, double pressure_kpa) {
    if (!(pressure_kpa >= bounds::kMinPressureKpa && pressure_kpa <= bounds::kMaxPressureKpa))
        throw ValidationError("cycle_life: pressure must lie in [0, 100] kPa, got " +
                              text::format_real(pressure_kpa));
    using namespace durability;
    switch (material) {
        case PouchMaterial::PP: {
            if (pressure_kpa <= kPpFullLifeKpa) return {kPpRatedCycles, true};
            if (pressure_kpa > kPpFailureKpa) return {0, false};
            const double frac = (bounds::kMaxPressureKpa - pressure_kpa) /
                                (bounds::kMaxPressureKpa - kPpFullLifeKpa);
            return {static_cast<std::int64_t>(std::floor(kPpRatedCycles * frac)), true};
        }
        case PouchMaterial::BOPP:
            if (pressure_kpa <= kBoppFailureKpa) return {std::nullopt, true};
            return {0, false};
        case PouchMaterial::HDPE:
            if (pressure_kpa <= kHdpeFailureKpa) return {std::nullopt, true};
            return {0, false};
    }
    return {0, false};
}

}  // namespace pouchsim
