#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "homecourt/errors.hpp"

namespace homecourt {

// The 14 box-score statistics tracked per team line. Percentages are derived
// from makes/attempts and never stored.
enum class Stat : std::uint8_t {
    tpa_3,   // 3FGA
    tp_pct,  // 3FG%
    ast,     // AST
    blk,     // BLK
    dreb,    // DREB
    fga,     // FGA
    fg_pct,  // FG%
    fta,     // FTA
    ft_pct,  // FT%
    oreb,    // OREB
    pf,      // PF
    pts,     // PTS
    stl,     // STL
    tov,     // TOV
};

inline constexpr std::array<Stat, 14> all_stats = {
    Stat::tpa_3, Stat::tp_pct, Stat::ast,  Stat::blk, Stat::dreb, Stat::fga, Stat::fg_pct,
    Stat::fta,   Stat::ft_pct, Stat::oreb, Stat::pf,  Stat::pts,  Stat::stl, Stat::tov,
};

constexpr bool is_percentage(Stat s) {
    return s == Stat::tp_pct || s == Stat::fg_pct || s == Stat::ft_pct;
}

// PF and TOV: fewer events is an improvement.
constexpr bool lower_is_better(Stat s) { return s == Stat::pf || s == Stat::tov; }

constexpr std::string_view stat_name(Stat s) {
    switch (s) {
        case Stat::tpa_3: return "3FGA";
        case Stat::tp_pct: return "3FG%";
        case Stat::ast: return "AST";
        case Stat::blk: return "BLK";
        case Stat::dreb: return "DREB";
        case Stat::fga: return "FGA";
        case Stat::fg_pct: return "FG%";
        case Stat::fta: return "FTA";
        case Stat::ft_pct: return "FT%";
        case Stat::oreb: return "OREB";
        case Stat::pf: return "PF";
        case Stat::pts: return "PTS";
        case Stat::stl: return "STL";
        case Stat::tov: return "TOV";
    }
    return "?";
}

inline std::optional<Stat> parse_stat(std::string_view name) {
    for (Stat s : all_stats)
        if (stat_name(s) == name) return s;
    return std::nullopt;
}

enum class Gender : std::uint8_t { women, men };
enum class Division : std::uint8_t { d1 = 1, d2 = 2, d3 = 3 };

struct GenderDivision {
    Gender gender = Gender::women;
    Division division = Division::d1;

    auto operator<=>(const GenderDivision&) const = default;
};

// Presentation order used throughout reports: D1 men, D1 women, D2 men, ...
inline constexpr std::array<GenderDivision, 6> all_gender_divisions = {{
    {Gender::men, Division::d1},
    {Gender::women, Division::d1},
    {Gender::men, Division::d2},
    {Gender::women, Division::d2},
    {Gender::men, Division::d3},
    {Gender::women, Division::d3},
}};

inline int gd_index(GenderDivision gd) {
    for (int i = 0; i < 6; ++i)
        if (all_gender_divisions[static_cast<std::size_t>(i)] == gd) return i;
    return -1;
}

inline std::string gd_label(GenderDivision gd) {
    std::string out;
    out += gd.gender == Gender::men ? 'M' : 'W';
    out += 'D';
    out += static_cast<char>('0' + static_cast<int>(gd.division));
    return out;
}

inline GenderDivision parse_gd_label(std::string_view label) {
    if (label.size() == 3 && (label[0] == 'M' || label[0] == 'W') && label[1] == 'D' &&
        label[2] >= '1' && label[2] <= '3') {
        return {label[0] == 'M' ? Gender::men : Gender::women,
                static_cast<Division>(label[2] - '0')};
    }
    throw error("unrecognized gender-division label: " + std::string(label));
}

// A team's location role within one game. A game is either (home, away) in
// some order, or (neutral, neutral).
enum class Location : std::uint8_t { home, away, neutral };

constexpr char location_code(Location l) {
    switch (l) {
        case Location::home: return 'H';
        case Location::away: return 'A';
        case Location::neutral: return 'N';
    }
    return '?';
}

} // namespace homecourt
