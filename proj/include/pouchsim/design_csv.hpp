#pragma once

// Design CSV: length_mm,width_mm,turns,pressure_kpa,cover,structure

#include <string>
#include <string_view>
#include <vector>

#include "pouchsim/design_space.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim {

inline constexpr std::string_view kDesignHeader =
    "length_mm,width_mm,turns,pressure_kpa,cover,structure";
inline constexpr std::size_t kDesignColumns = 6;

inline std::string format_design_fields(const ActuatorDesign& d) {
    std::string s;
    s += text::format_real(d.length_mm) + ',';
    s += text::format_real(d.width_mm) + ',';
    s += std::to_string(d.turns) + ',';
    s += text::format_real(d.pressure_kpa) + ',';
    s += std::string(to_token(d.cover)) + ',';
    s += std::string(to_token(d.structure));
    return s;
}

namespace detail {

/// Parses the six design fields starting at fields[0]; `line` is 1-based.
inline ActuatorDesign parse_design_fields(const std::vector<std::string_view>& fields,
                                          std::size_t line) {
    ActuatorDesign d;
    auto real = [&](std::size_t col, double& out) {
        if (!text::parse_real(fields[col], out))
            throw ParseError(line, col + 1, "expected a number, got '" + std::string(fields[col]) + "'");
    };
    real(0, d.length_mm);
    real(1, d.width_mm);
    if (!text::parse_int(fields[2], d.turns))
        throw ParseError(line, 3, "expected an integer turn count, got '" + std::string(fields[2]) + "'");
    real(3, d.pressure_kpa);
    const auto cover = parse_cover(fields[4]);
    if (!cover)
        throw ParseError(line, 5, "unknown cover token '" + std::string(fields[4]) +
                                      "' (expected none, paper, or a80)");
    d.cover = *cover;
    const auto structure = parse_structure(fields[5]);
    if (!structure)
        throw ParseError(line, 6, "unknown structure token '" + std::string(fields[5]) +
                                      "' (expected type1..type4)");
    d.structure = *structure;
    const auto violations = validate_design(d);
    if (!violations.empty()) {
        static constexpr std::string_view kNames[] = {"length_mm", "width_mm", "turns",
                                                      "pressure_kpa"};
        std::size_t col = 1;
        for (std::size_t i = 0; i < 4; ++i)
            if (kNames[i] == violations.front().field) col = i + 1;
        throw ParseError(line, col, violations.front().message);
    }
    return d;
}

inline void expect_header(const std::vector<std::string>& lines, std::string_view header) {
    if (lines.empty()) throw ParseError(1, 1, "missing header row");
    if (lines.front() != header)
        throw ParseError(1, 1, "unexpected header '" + lines.front() + "', expected '" +
                                   std::string(header) + "'");
}

}  // namespace detail

inline std::string designs_to_csv(const std::vector<ActuatorDesign>& designs) {
    std::string out(kDesignHeader);
    out += '\n';
    for (const auto& d : designs) out += format_design_fields(d) + '\n';
    return out;
}

inline std::vector<ActuatorDesign> designs_from_csv(const std::string& contents) {
    const auto lines = text::split_lines(contents);
    detail::expect_header(lines, kDesignHeader);
    std::vector<ActuatorDesign> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = text::split_fields(lines[i]);
        if (fields.size() != kDesignColumns)
            throw ParseError(i + 1, std::min(fields.size(), kDesignColumns) + 1,
                             "expected " + std::to_string(kDesignColumns) + " columns, got " +
                                 std::to_string(fields.size()));
        out.push_back(detail::parse_design_fields(fields, i + 1));
    }
    return out;
}

inline void write_designs_csv(const std::string& path, const std::vector<ActuatorDesign>& designs) {
    text::write_file(path, designs_to_csv(designs));
}

inline std::vector<ActuatorDesign> read_designs_csv(const std::string& path) {
    return designs_from_csv(text::read_file(path));
}

}  // namespace pouchsim
