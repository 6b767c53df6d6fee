#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homecourt/errors.hpp"
#include "homecourt/stats.hpp"

namespace homecourt {

// One team's box-score counts for one game. Makes are stored so that the
// percentage statistics are derived exactly and the points identity
// pts = 2*(fgm - tpm) + 3*tpm + ftm is checkable.
struct TeamLine {
    std::string team_id;
    int fgm = 0, fga = 0;
    int tpm = 0, tpa = 0;  // 3-point makes / attempts
    int ftm = 0, fta = 0;
    int oreb = 0, dreb = 0;
    int ast = 0, blk = 0, stl = 0, tov = 0, pf = 0;
    int pts = 0;

    bool operator==(const TeamLine&) const = default;
};

struct GameRecord {
    std::string game_id;
    std::string season;
    std::string date;  // ISO-8601 calendar date
    GenderDivision gender_division;
    long attendance = 0;
    std::array<TeamLine, 2> lines;
    std::array<Location, 2> locations;

    bool operator==(const GameRecord&) const = default;

    bool is_neutral() const {
        return locations[0] == Location::neutral && locations[1] == Location::neutral;
    }

    std::optional<int> home_index() const {
        if (locations[0] == Location::home) return 0;
        if (locations[1] == Location::home) return 1;
        return std::nullopt;
    }

    std::optional<int> away_index() const {
        if (locations[0] == Location::away) return 0;
        if (locations[1] == Location::away) return 1;
        return std::nullopt;
    }

    // Index of the winning line; ties are invalid records.
    std::optional<int> winner_index() const {
        if (lines[0].pts == lines[1].pts) return std::nullopt;
        return lines[0].pts > lines[1].pts ? 0 : 1;
    }
};

// Value of a statistic for one line. Percentages are makes/attempts as a
// fraction in [0, 1]; a percentage with zero attempts has no defined value
// and the caller decides the exclusion policy.
inline std::optional<double> stat_value(const TeamLine& line, Stat stat) {
    switch (stat) {
        case Stat::tpa_3: return line.tpa;
        case Stat::ast: return line.ast;
        case Stat::blk: return line.blk;
        case Stat::dreb: return line.dreb;
        case Stat::fga: return line.fga;
        case Stat::fta: return line.fta;
        case Stat::oreb: return line.oreb;
        case Stat::pf: return line.pf;
        case Stat::pts: return line.pts;
        case Stat::stl: return line.stl;
        case Stat::tov: return line.tov;
        case Stat::fg_pct:
            if (line.fga == 0) return std::nullopt;
            return static_cast<double>(line.fgm) / line.fga;
        case Stat::tp_pct:
            if (line.tpa == 0) return std::nullopt;
            return static_cast<double>(line.tpm) / line.tpa;
        case Stat::ft_pct:
            if (line.fta == 0) return std::nullopt;
            return static_cast<double>(line.ftm) / line.fta;
    }
    return std::nullopt;
}

// Standard possession estimate: FGA - OREB + TOV + 0.475 * FTA.
inline double possessions(const TeamLine& line) {
    return line.fga - line.oreb + line.tov + 0.475 * line.fta;
}

// Game possessions: mean of the two team estimates.
inline double game_possessions(const GameRecord& game) {
    return 0.5 * (possessions(game.lines[0]) + possessions(game.lines[1]));
}

// Every violated structural invariant of the record; empty means valid.
inline std::vector<std::string> validate_game(const GameRecord& game) {
    std::vector<std::string> out;
    auto check_line = [&](const TeamLine& l, int idx) {
        const std::string tag = "line " + std::to_string(idx + 1) + " (" + l.team_id + "): ";
        const int counts[] = {l.fgm, l.fga, l.tpm, l.tpa, l.ftm, l.fta, l.oreb,
                              l.dreb, l.ast, l.blk, l.stl, l.tov, l.pf, l.pts};
        for (int c : counts)
            if (c < 0) {
                out.push_back(tag + "negative count");
                break;
            }
        if (l.fgm > l.fga) out.push_back(tag + "fgm <= fga violated");
        if (l.tpm > l.tpa) out.push_back(tag + "tpm <= tpa violated");
        if (l.ftm > l.fta) out.push_back(tag + "ftm <= fta violated");
        if (l.tpa > l.fga) out.push_back(tag + "tpa <= fga violated");
        if (l.tpm > l.fgm) out.push_back(tag + "tpm <= fgm violated");
        if (l.pts != 2 * (l.fgm - l.tpm) + 3 * l.tpm + l.ftm)
            out.push_back(tag + "pts identity violated");
    };
    check_line(game.lines[0], 0);
    check_line(game.lines[1], 1);

    const Location a = game.locations[0];
    const Location b = game.locations[1];
    const bool home_away = (a == Location::home && b == Location::away) ||
                           (a == Location::away && b == Location::home);
    const bool neutral = a == Location::neutral && b == Location::neutral;
    if (!home_away && !neutral) out.push_back("location pair must be (home, away) or (neutral, neutral)");

    if (game.lines[0].team_id == game.lines[1].team_id)
        out.push_back("the two team_ids must differ");
    if (game.lines[0].pts == game.lines[1].pts) out.push_back("tied pts (ties are invalid)");
    if (game.attendance < 0) out.push_back("negative attendance");
    return out;
}

// Non-fatal oddities worth surfacing alongside hard violations.
inline std::vector<std::string> validation_warnings(const GameRecord& game) {
    std::vector<std::string> out;
    if (game.attendance == 0) out.push_back("attendance is zero");
    return out;
}

// Immutable, indexed collection of games. All engine operations are pure
// functions over a Dataset, so concurrent reads are safe.
class Dataset {
public:
    Dataset() = default;

    // Takes ownership of the records; rejects duplicate game ids.
    static Dataset from_records(std::vector<GameRecord> records) {
        Dataset d;
        d.games_ = std::move(records);
        for (std::size_t i = 0; i < d.games_.size(); ++i) {
            const GameRecord& g = d.games_[i];
            if (!d.by_id_.emplace(g.game_id, i).second)
                throw error("duplicate game_id: " + g.game_id);
            d.by_season_[g.season].push_back(i);
            d.by_gd_[g.gender_division].push_back(i);
            d.by_team_[g.lines[0].team_id].push_back(i);
            d.by_team_[g.lines[1].team_id].push_back(i);
        }
        return d;
    }

    const std::vector<GameRecord>& games() const { return games_; }
    std::size_t size() const { return games_.size(); }
    bool empty() const { return games_.empty(); }

    bool operator==(const Dataset& other) const { return games_ == other.games_; }

    const GameRecord* find(const std::string& game_id) const {
        auto it = by_id_.find(game_id);
        return it == by_id_.end() ? nullptr : &games_[it->second];
    }

    std::vector<const GameRecord*> by_season(const std::string& season) const {
        return gather(by_season_, season);
    }

    std::vector<const GameRecord*> by_gender_division(GenderDivision gd) const {
        return gather(by_gd_, gd);
    }

    std::vector<const GameRecord*> by_team(const std::string& team_id) const {
        return gather(by_team_, team_id);
    }

    // Games matching every provided key, in insertion order.
    std::vector<const GameRecord*> select(const std::optional<std::string>& season,
                                          const std::optional<GenderDivision>& gd) const {
        std::vector<const GameRecord*> out;
        for (const GameRecord& g : games_) {
            if (season && g.season != *season) continue;
            if (gd && !(g.gender_division == *gd)) continue;
            out.push_back(&g);
        }
        return out;
    }

    std::vector<std::string> seasons() const {
        std::vector<std::string> out;
        for (const auto& [season, _] : by_season_) out.push_back(season);
        return out;
    }

    std::vector<GenderDivision> gender_divisions() const {
        std::vector<GenderDivision> out;
        for (GenderDivision gd : all_gender_divisions)
            if (by_gd_.count(gd)) out.push_back(gd);
        return out;
    }

private:
    template <typename Map, typename Key>
    std::vector<const GameRecord*> gather(const Map& m, const Key& key) const {
        std::vector<const GameRecord*> out;
        auto it = m.find(key);
        if (it == m.end()) return out;
        out.reserve(it->second.size());
        for (std::size_t i : it->second) out.push_back(&games_[i]);
        return out;
    }

    std::vector<GameRecord> games_;
    std::map<std::string, std::size_t> by_id_;
    std::map<std::string, std::vector<std::size_t>> by_season_;
    std::map<GenderDivision, std::vector<std::size_t>> by_gd_;
    std::map<std::string, std::vector<std::size_t>> by_team_;
};

} // namespace homecourt
