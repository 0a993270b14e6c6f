#pragma once

/**
 * @file bench_oracle.hpp
 * @brief Closed-form synthetic bench physics for pouch actuators.
 *
 * Each output is a product of per-category multipliers with a mild centered
 * penalty on the continuous geometry. The constants reproduce the reference
 * measurements exactly at the anchor designs:
 *
 *   (130, 25, 1, 30, paper, type4)  ->  alpha 1.00, P_g 9.8 kPa, t 3.0 s
 *   (130, 25, 1, 30, a80,   type1)  ->  P_g 6.2 kPa
 *   (130, 25, 1, 30, none,  type1)  ->  alpha 1.00, t 6.0 s
 *
 * The oracle doubles as the data source for the surrogate and as the
 * independent ground truth in tests.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pouchsim/design_csv.hpp"
#include "pouchsim/design_space.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim {

struct OracleConstants {
    std::array<double, 3> alpha_cover{1.00, 0.90, 0.50};
    std::array<double, 4> alpha_structure{1.00, 1.03, 1.06, 1.12};
    std::array<double, 3> alpha_turns{1.00, 0.95, 0.90};

    std::array<double, 3> pressure_cover{4.0, 5.0, 6.2};
    std::array<double, 4> pressure_structure{1.00, 1.20, 1.50, 1.96};
    std::array<double, 3> pressure_turns{1.00, 0.95, 0.90};

    std::array<double, 3> time_cover{6.0, 4.0, 3.0};
    std::array<double, 4> time_structure{1.00, 0.95, 0.90, 0.75};

    double saturation_knee_kpa = 20.0;
    double reference_pressure_kpa = 30.0;

    double sigma_alpha = 0.02;
    double sigma_pressure_kpa = 0.2;
    double sigma_time_s = 0.1;

    double min_noisy_time_s = 0.1;
};

inline const OracleConstants& oracle_constants() {
    static const OracleConstants c{};
    return c;
}

namespace detail {
inline std::size_t idx(CoverType c) { return static_cast<std::size_t>(c); }
inline std::size_t idx(StructureType s) { return static_cast<std::size_t>(s); }
inline std::size_t turn_idx(int turns) { return static_cast<std::size_t>(turns - 1); }
}  // namespace detail

inline double oracle_alpha(const ActuatorDesign& d) {
    require_valid(d);
    const auto& k = oracle_constants();
    const double sat = std::min(d.pressure_kpa, k.saturation_knee_kpa) / k.saturation_knee_kpa;
    const double dl = (d.length_mm - 130.0) / 10.0;
    const double raw = k.alpha_cover[detail::idx(d.cover)] *
                       k.alpha_structure[detail::idx(d.structure)] *
                       k.alpha_turns[detail::turn_idx(d.turns)] * sat * (1.0 - 0.002 * dl * dl);
    return std::clamp(raw, 0.0, 1.0);
}

inline double oracle_pressure(const ActuatorDesign& d) {
    require_valid(d);
    const auto& k = oracle_constants();
    const double dw = (d.width_mm - 25.0) / 5.0;
    return k.pressure_cover[detail::idx(d.cover)] *
           k.pressure_structure[detail::idx(d.structure)] *
           k.pressure_turns[detail::turn_idx(d.turns)] *
           (d.pressure_kpa / k.reference_pressure_kpa) * (1.0 - 0.003 * dw * dw);
}

inline double oracle_recovery(const ActuatorDesign& d) {
    require_valid(d);
    const auto& k = oracle_constants();
    return k.time_cover[detail::idx(d.cover)] * k.time_structure[detail::idx(d.structure)] +
           0.5 * (d.turns - 1) + 0.005 * std::abs(d.length_mm - 130.0) +
           0.01 * std::abs(d.width_mm - 25.0);
}

inline PerformanceTriple oracle_triple(const ActuatorDesign& d) {
    return {oracle_alpha(d), oracle_pressure(d), oracle_recovery(d)};
}

struct PerformanceSample {
    ActuatorDesign design;
    PerformanceTriple measured;

    friend bool operator==(const PerformanceSample&, const PerformanceSample&) = default;
};

/// Generator for sample `index` of a run seeded with `seed`.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Oracle output for one design, optionally perturbed by the declared noise.
inline PerformanceSample oracle_sample(const ActuatorDesign& d, std::uint64_t seed,
                                       std::uint64_t index, bool noisy) {
    PerformanceTriple t = oracle_triple(d);
    if (noisy) {
        const auto& k = oracle_constants();
        auto rng = sample_rng(seed, index);
        std::normal_distribution<double> unit(0.0, 1.0);
        t.alpha = std::clamp(t.alpha + k.sigma_alpha * unit(rng), 0.0, 1.0);
        t.generated_pressure_kpa =
            std::max(0.0, t.generated_pressure_kpa + k.sigma_pressure_kpa * unit(rng));
        t.recovery_time_s = std::max(k.min_noisy_time_s, t.recovery_time_s + k.sigma_time_s * unit(rng));
    }
    return {d, t};
}

/// One sample per grid point, in enumeration order. Sample i only depends on
/// (seed, i), so any evaluation order produces the same list.
inline std::vector<PerformanceSample> generate_dataset(const DesignGrid& grid, std::uint64_t seed,
                                                       bool noisy) {
    const auto designs = enumerate_grid(grid);
    std::vector<PerformanceSample> out;
    out.reserve(designs.size());
    for (std::size_t i = 0; i < designs.size(); ++i)
        out.push_back(oracle_sample(designs[i], seed, i, noisy));
    return out;
}

// ---- dataset CSV ---------------------------------------------------------

inline constexpr std::string_view kDatasetHeader =
    "length_mm,width_mm,turns,pressure_kpa,cover,structure,alpha,generated_pressure_kpa,"
    "recovery_time_s";
inline constexpr std::size_t kDatasetColumns = 9;

inline std::string dataset_to_csv(const std::vector<PerformanceSample>& samples) {
    std::string out(kDatasetHeader);
    out += '\n';
    for (const auto& s : samples) {
        out += format_design_fields(s.design);
        out += ',' + text::format_real(s.measured.alpha);
        out += ',' + text::format_real(s.measured.generated_pressure_kpa);
        out += ',' + text::format_real(s.measured.recovery_time_s);
        out += '\n';
    }
    return out;
}

inline std::vector<PerformanceSample> dataset_from_csv(const std::string& contents) {
    const auto lines = text::split_lines(contents);
    detail::expect_header(lines, kDatasetHeader);
    std::vector<PerformanceSample> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t line = i + 1;
        const auto fields = text::split_fields(lines[i]);
        if (fields.size() != kDatasetColumns)
            throw ParseError(line, std::min(fields.size(), kDatasetColumns) + 1,
                             "expected " + std::to_string(kDatasetColumns) + " columns, got " +
                                 std::to_string(fields.size()));
        PerformanceSample s;
        s.design = detail::parse_design_fields(fields, line);
        double* targets[] = {&s.measured.alpha, &s.measured.generated_pressure_kpa,
                             &s.measured.recovery_time_s};
        for (std::size_t j = 0; j < 3; ++j)
            if (!text::parse_real(fields[6 + j], *targets[j]))
                throw ParseError(line, 7 + j,
                                 "expected a number, got '" + std::string(fields[6 + j]) + "'");
        if (!satisfies_invariants(s.measured))
            throw ParseError(line, 7, "measured triple violates 0<=alpha<=1, P_g>=0, t>0");
        out.push_back(s);
    }
    return out;
}

inline void write_dataset_csv(const std::string& path, const std::vector<PerformanceSample>& samples) {
    text::write_file(path, dataset_to_csv(samples));
}

inline std::vector<PerformanceSample> read_dataset_csv(const std::string& path) {
    return dataset_from_csv(text::read_file(path));
}

}  // namespace pouchsim
