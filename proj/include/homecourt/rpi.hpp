#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homecourt/format.hpp"
#include "homecourt/model.hpp"

namespace homecourt {

// Rating percentage index, computed from full-season results:
//   RPI = 0.25 * WP + 0.50 * OWP + 0.25 * OOWP
struct RpiEntry {
    std::string team_id;
    std::string season;
    double wp = 0.0;    // winning percentage over all games (home/away/neutral alike)
    double owp = 0.0;   // mean opponent winning percentage
    double oowp = 0.0;  // mean opponent OWP
    double rpi = 0.0;
    int games_played = 0;
};

struct RpiTable {
    std::string season;
    GenderDivision gender_division;
    std::map<std::string, RpiEntry> entries;

    const RpiEntry* find(const std::string& team_id) const {
        auto it = entries.find(team_id);
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct RpiOptions {
    // Exclude games against the reference team when computing an opponent's
    // winning percentage (the standard convention). Toggleable because the
    // plain variant is also seen in the wild.
    bool exclude_reference_games = true;
};

inline RpiTable compute_rpi(const Dataset& dataset, const std::string& season,
                            GenderDivision gd, const RpiOptions& options = {}) {
    struct TeamGames {
        std::vector<std::pair<std::string, bool>> games;  // (opponent, won)
        int wins = 0;
    };
    std::map<std::string, TeamGames> teams;
    // head-to-head: (team, opponent) -> (games, wins of team over opponent)
    std::map<std::pair<std::string, std::string>, std::pair<int, int>> head_to_head;

    for (const GameRecord* g : dataset.select(season, gd)) {
        const auto w = g->winner_index();
        if (!w) throw error("game " + g->game_id + " has tied pts; winner not derivable");
        for (int side = 0; side < 2; ++side) {
            const std::string& us = g->lines[static_cast<std::size_t>(side)].team_id;
            const std::string& them = g->lines[static_cast<std::size_t>(1 - side)].team_id;
            const bool won = *w == side;
            auto& tg = teams[us];
            tg.games.emplace_back(them, won);
            if (won) ++tg.wins;
            auto& hh = head_to_head[{us, them}];
            ++hh.first;
            if (won) ++hh.second;
        }
    }

    RpiTable table;
    table.season = season;
    table.gender_division = gd;

    auto wp_of = [&](const std::string& team) {
        const auto& tg = teams.at(team);
        return static_cast<double>(tg.wins) / static_cast<double>(tg.games.size());
    };
    // Opponent's winning percentage with games against `reference` removed.
    // An opponent with no remaining games contributes a neutral 0.5.
    auto wp_excluding = [&](const std::string& opponent, const std::string& reference) {
        if (!options.exclude_reference_games) return wp_of(opponent);
        const auto& tg = teams.at(opponent);
        auto it = head_to_head.find({opponent, reference});
        const int excl_games = it == head_to_head.end() ? 0 : it->second.first;
        const int excl_wins = it == head_to_head.end() ? 0 : it->second.second;
        const int remaining = static_cast<int>(tg.games.size()) - excl_games;
        if (remaining <= 0) return 0.5;
        return static_cast<double>(tg.wins - excl_wins) / remaining;
    };

    std::map<std::string, double> owp;
    for (const auto& [team, tg] : teams) {
        double sum = 0.0;
        for (const auto& [opponent, won] : tg.games) sum += wp_excluding(opponent, team);
        owp[team] = sum / static_cast<double>(tg.games.size());
    }

    for (const auto& [team, tg] : teams) {
        double oowp_sum = 0.0;
        for (const auto& [opponent, won] : tg.games) oowp_sum += owp.at(opponent);
        RpiEntry e;
        e.team_id = team;
        e.season = season;
        e.games_played = static_cast<int>(tg.games.size());
        e.wp = wp_of(team);
        e.owp = owp.at(team);
        e.oowp = oowp_sum / static_cast<double>(tg.games.size());
        e.rpi = 0.25 * e.wp + 0.50 * e.owp + 0.25 * e.oowp;
        table.entries.emplace(team, std::move(e));
    }
    return table;
}

// Per-game relative strength of the host: home team RPI minus away team RPI.
struct RpiAdvantage {
    std::string game_id;
    double value = 0.0;
    double standardized_value = std::numeric_limits<double>::quiet_NaN();
};

inline RpiAdvantage rpi_advantage(const GameRecord& game, const RpiTable& table) {
    if (game.is_neutral())
        throw not_applicable_error("rpi_advantage is undefined for neutral-site games (" +
                                   game.game_id + ")");
    const auto hi = game.home_index();
    const auto ai = game.away_index();
    if (!hi || !ai)
        throw not_applicable_error("game " + game.game_id + " lacks a home/away pair");
    const RpiEntry* home = table.find(game.lines[static_cast<std::size_t>(*hi)].team_id);
    const RpiEntry* away = table.find(game.lines[static_cast<std::size_t>(*ai)].team_id);
    if (!home)
        throw missing_team_error("team " + game.lines[static_cast<std::size_t>(*hi)].team_id +
                                 " not in RPI table");
    if (!away)
        throw missing_team_error("team " + game.lines[static_cast<std::size_t>(*ai)].team_id +
                                 " not in RPI table");
    RpiAdvantage adv;
    adv.game_id = game.game_id;
    adv.value = home->rpi - away->rpi;
    return adv;
}

struct StandardizeResult {
    std::vector<double> values;
    double mean = 0.0;
    double sd = 1.0;
};

// Centers and scales to sample mean 0 and sample standard deviation 1
// (n - 1 normalization); returns the transform parameters for reuse.
inline StandardizeResult standardize(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw degenerate_scale_error("standardize requires at least 2 values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) throw degenerate_scale_error("standardize: zero variance");
    StandardizeResult out;
    out.mean = mean;
    out.sd = sd;
    out.values.reserve(n);
    for (double v : values) out.values.push_back((v - mean) / sd);
    return out;
}

inline void write_rpi_csv_rows(const RpiTable& table, std::ostream& out) {
    for (const auto& [team, e] : table.entries) {
        out << team << ',' << e.season << ',' << fmt_fixed(e.wp, 6) << ',' << fmt_fixed(e.owp, 6)
            << ',' << fmt_fixed(e.oowp, 6) << ',' << fmt_fixed(e.rpi, 6) << '\n';
    }
}

inline void write_rpi_csv(const RpiTable& table, std::ostream& out) {
    out << "team_id,season,wp,owp,oowp,rpi\n";
    write_rpi_csv_rows(table, out);
}

} // namespace homecourt
