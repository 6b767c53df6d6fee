#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homecourt/model.hpp"

namespace homecourt {

// Input and output use the same schema: UTF-8, comma separated, header row,
// one row per (game, team), two rows per game matched on game_id.
inline constexpr std::array<std::string_view, 23> csv_columns = {
    "game_id", "season", "date", "gender", "division", "team_id", "opponent_id", "loc",
    "attendance", "fgm", "fga", "tpm", "tpa", "ftm", "fta", "oreb", "dreb", "ast",
    "blk", "stl", "tov", "pf", "pts",
};

struct RowError {
    std::size_t row = 0;  // 1-based file line, header is line 1
    std::string message;
};

struct ParseResult {
    Dataset dataset;
    std::vector<RowError> errors;
    std::vector<RowError> warnings;
};

namespace detail {

struct RawRow {
    std::size_t row = 0;
    std::string game_id, season, date, team_id, opponent_id;
    GenderDivision gd;
    Location loc = Location::neutral;
    long attendance = 0;
    TeamLine line;
};

inline std::vector<std::string> split_csv_line(const std::string& text) {
    std::vector<std::string> out;
    std::string field;
    for (char c : text) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

inline bool parse_int(const std::string& s, int& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !s.empty();
}

inline bool parse_long(const std::string& s, long& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !s.empty();
}

inline bool iso_date_ok(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (d[i] < '0' || d[i] > '9') return false;
    return true;
}

} // namespace detail

// Parses the full stream. Structural problems with the header are fatal;
// row-level problems are collected and the offending game is dropped. In
// strict mode any row error fails the whole parse.
inline ParseResult parse_dataset(std::istream& in, bool strict = false) {
    std::string header_line;
    if (!std::getline(in, header_line)) throw parse_error("empty input: missing header row");
    const auto header = detail::split_csv_line(header_line);

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (std::string_view want : csv_columns)
        if (!col.count(std::string(want)))
            throw parse_error("malformed header: missing column '" + std::string(want) + "'");

    ParseResult result;
    std::vector<GameRecord> records;
    std::map<std::string, detail::RawRow> pending;  // game_id -> first row seen
    std::map<std::string, bool> completed;          // game_id -> fully consumed

    std::string line;
    std::size_t row_no = 1;
    auto fail = [&](std::size_t row, std::string msg) {
        result.errors.push_back({row, std::move(msg)});
    };

    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            fail(row_no, "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
            continue;
        }
        auto get = [&](std::string_view name) -> const std::string& {
            return fields[col.at(std::string(name))];
        };

        detail::RawRow raw;
        raw.row = row_no;
        raw.game_id = get("game_id");
        raw.season = get("season");
        raw.date = get("date");
        raw.team_id = get("team_id");
        raw.opponent_id = get("opponent_id");
        raw.line.team_id = raw.team_id;

        bool ok = true;
        if (raw.game_id.empty()) {
            fail(row_no, "empty game_id");
            ok = false;
        }
        if (!detail::iso_date_ok(raw.date)) {
            fail(row_no, "date is not ISO-8601 (YYYY-MM-DD): '" + raw.date + "'");
            ok = false;
        }
        const std::string& gender = get("gender");
        if (gender == "W")
            raw.gd.gender = Gender::women;
        else if (gender == "M")
            raw.gd.gender = Gender::men;
        else {
            fail(row_no, "gender must be W or M, got '" + gender + "'");
            ok = false;
        }
        const std::string& division = get("division");
        if (division == "1" || division == "2" || division == "3")
            raw.gd.division = static_cast<Division>(division[0] - '0');
        else {
            fail(row_no, "division must be 1, 2 or 3, got '" + division + "'");
            ok = false;
        }
        const std::string& loc = get("loc");
        if (loc == "H")
            raw.loc = Location::home;
        else if (loc == "A")
            raw.loc = Location::away;
        else if (loc == "N")
            raw.loc = Location::neutral;
        else {
            fail(row_no, "loc must be H, A or N, got '" + loc + "'");
            ok = false;
        }
        if (!detail::parse_long(get("attendance"), raw.attendance)) {
            fail(row_no, "unparseable attendance '" + get("attendance") + "'");
            ok = false;
        }
        const std::pair<std::string_view, int*> count_fields[] = {
            {"fgm", &raw.line.fgm},   {"fga", &raw.line.fga},   {"tpm", &raw.line.tpm},
            {"tpa", &raw.line.tpa},   {"ftm", &raw.line.ftm},   {"fta", &raw.line.fta},
            {"oreb", &raw.line.oreb}, {"dreb", &raw.line.dreb}, {"ast", &raw.line.ast},
            {"blk", &raw.line.blk},   {"stl", &raw.line.stl},   {"tov", &raw.line.tov},
            {"pf", &raw.line.pf},     {"pts", &raw.line.pts},
        };
        for (auto [name, dst] : count_fields) {
            if (!detail::parse_int(get(name), *dst)) {
                fail(row_no, "unparseable " + std::string(name) + " '" + get(name) + "'");
                ok = false;
            }
        }
        if (!ok) continue;

        if (completed.count(raw.game_id)) {
            fail(row_no, "duplicate game_id '" + raw.game_id + "'");
            continue;
        }
        auto it = pending.find(raw.game_id);
        if (it == pending.end()) {
            pending.emplace(raw.game_id, std::move(raw));
            continue;
        }

        // Second row of the pair: cross-check and assemble.
        detail::RawRow first = std::move(it->second);
        pending.erase(it);
        completed[raw.game_id] = true;

        std::vector<std::string> pair_problems;
        if (first.season != raw.season) pair_problems.push_back("season mismatch between rows");
        if (first.date != raw.date) pair_problems.push_back("date mismatch between rows");
        if (!(first.gd == raw.gd)) pair_problems.push_back("gender-division mismatch between rows");
        if (first.attendance != raw.attendance)
            pair_problems.push_back("attendance mismatch between rows");
        if (first.team_id != raw.opponent_id || first.opponent_id != raw.team_id)
            pair_problems.push_back("team_id/opponent_id do not cross-match");

        GameRecord game;
        game.game_id = first.game_id;
        game.season = first.season;
        game.date = first.date;
        game.gender_division = first.gd;
        game.attendance = first.attendance;
        game.lines = {first.line, raw.line};
        game.locations = {first.loc, raw.loc};

        for (const std::string& v : validate_game(game)) pair_problems.push_back(v);
        if (!pair_problems.empty()) {
            for (const std::string& p : pair_problems) fail(raw.row, p);
            continue;
        }
        for (const std::string& w : validation_warnings(game))
            result.warnings.push_back({raw.row, w});
        records.push_back(std::move(game));
    }

    for (const auto& [id, raw] : pending)
        fail(raw.row, "unpaired game_id '" + id + "' (expected two rows per game)");

    if (strict && !result.errors.empty())
        throw parse_error("strict parse failed with " + std::to_string(result.errors.size()) +
                          " row error(s); first: row " +
                          std::to_string(result.errors.front().row) + ": " +
                          result.errors.front().message);

    result.dataset = Dataset::from_records(std::move(records));
    return result;
}

inline ParseResult parse_dataset_file(const std::string& path, bool strict = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open input file: " + path);
    return parse_dataset(in, strict);
}

// Serializer. Emits the identical schema; parse(write(d)) == d and
// write(parse(f)) is byte-identical to f for files this writer produced.
inline void write_dataset(const Dataset& dataset, std::ostream& out) {
    for (std::size_t i = 0; i < csv_columns.size(); ++i) {
        if (i) out << ',';
        out << csv_columns[i];
    }
    out << '\n';
    for (const GameRecord& g : dataset.games()) {
        for (int side = 0; side < 2; ++side) {
            const TeamLine& us = g.lines[static_cast<std::size_t>(side)];
            const TeamLine& them = g.lines[static_cast<std::size_t>(1 - side)];
            out << g.game_id << ',' << g.season << ',' << g.date << ','
                << (g.gender_division.gender == Gender::men ? 'M' : 'W') << ','
                << static_cast<int>(g.gender_division.division) << ',' << us.team_id << ','
                << them.team_id << ',' << location_code(g.locations[static_cast<std::size_t>(side)])
                << ',' << g.attendance << ',' << us.fgm << ',' << us.fga << ',' << us.tpm << ','
                << us.tpa << ',' << us.ftm << ',' << us.fta << ',' << us.oreb << ',' << us.dreb
                << ',' << us.ast << ',' << us.blk << ',' << us.stl << ',' << us.tov << ','
                << us.pf << ',' << us.pts << '\n';
        }
    }
}

inline void write_dataset_file(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open output file: " + path);
    write_dataset(dataset, out);
}

inline std::string write_dataset_string(const Dataset& dataset) {
    std::ostringstream out;
    write_dataset(dataset, out);
    return out.str();
}

} // namespace homecourt
