#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "homecourt/csv.hpp"
#include "homecourt/model.hpp"
#include "homecourt/rng.hpp"
#include "homecourt/simulate.hpp"
#include "test_support.hpp"

using namespace homecourt;
using support::make_game;
using support::make_line;

TEST_CASE("stat enumeration shape") {
    REQUIRE(all_stats.size() == 14);
    int percentages = 0, lower = 0;
    for (Stat s : all_stats) {
        percentages += is_percentage(s);
        lower += lower_is_better(s);
    }
    CHECK(percentages == 3);
    CHECK(lower == 2);
    CHECK(lower_is_better(Stat::pf));
    CHECK(lower_is_better(Stat::tov));
    CHECK(is_percentage(Stat::fg_pct));
    CHECK(is_percentage(Stat::tp_pct));
    CHECK(is_percentage(Stat::ft_pct));
    for (Stat s : all_stats) CHECK(parse_stat(stat_name(s)) == s);
}

TEST_CASE("stat_value") {
    TeamLine l = make_line("A", /*fgm=*/30, /*fga=*/60);
    CHECK(stat_value(l, Stat::fg_pct) == 0.5);
    l.ast = 17;
    CHECK(stat_value(l, Stat::ast) == 17.0);

    l.fta = 0;
    l.ftm = 0;
    l.pts = 2 * (l.fgm - l.tpm) + 3 * l.tpm;
    CHECK_FALSE(stat_value(l, Stat::ft_pct).has_value());

    CHECK(stat_value(l, Stat::pts) == 2.0 * (l.fgm - l.tpm) + 3.0 * l.tpm + l.ftm);
}

TEST_CASE("possessions") {
    TeamLine l;
    l.fga = 60;
    l.oreb = 10;
    l.tov = 12;
    l.fta = 20;
    CHECK(possessions(l) == Catch::Approx(71.5));

    TeamLine zero;
    CHECK(possessions(zero) == 0.0);

    auto g = make_game("g1", make_line("A"), make_line("B"));
    g.lines[1] = g.lines[0];
    g.lines[1].team_id = "B";
    CHECK(game_possessions(g) == possessions(g.lines[0]));
}

TEST_CASE("possessions monotonicity") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        TeamLine l;
        l.fga = static_cast<int>(rng.below(80));
        l.oreb = static_cast<int>(rng.below(20));
        l.tov = static_cast<int>(rng.below(25));
        l.fta = static_cast<int>(rng.below(40));
        const double base = possessions(l);
        TeamLine up = l;
        up.fga += 1;
        CHECK(possessions(up) >= base);
        up = l;
        up.tov += 3;
        CHECK(possessions(up) >= base);
        up = l;
        up.fta += 2;
        CHECK(possessions(up) >= base);
        up = l;
        up.oreb += 1;
        CHECK(possessions(up) <= base);
    }
}

TEST_CASE("validate_game accepts valid records") {
    CHECK(validate_game(make_game("g", make_line("A", 30), make_line("B", 25))).empty());
}

TEST_CASE("validate_game rejects bad location pairs") {
    auto g = make_game("g", make_line("A", 30), make_line("B", 25));
    g.locations = {Location::home, Location::home};
    const auto v = validate_game(g);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("location pair") != std::string::npos);
}

TEST_CASE("validate_game rejects a broken points identity") {
    auto g = make_game("g", make_line("A", 30), make_line("B", 25));
    g.lines[0].pts += 1;
    bool found = false;
    for (const auto& v : validate_game(g)) found |= v.find("pts identity") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate_game flags every single-field mutation") {
    // Flipping any one invariant must produce at least one violation.
    const auto base = make_game("g", make_line("A", 30), make_line("B", 25));
    auto expect_invalid = [](GameRecord g) { CHECK_FALSE(validate_game(g).empty()); };

    GameRecord g = base;
    g.lines[0].fgm = g.lines[0].fga + 1;
    expect_invalid(g);
    g = base;
    g.lines[0].tpm = g.lines[0].tpa + 1;
    expect_invalid(g);
    g = base;
    g.lines[0].ftm = g.lines[0].fta + 1;
    expect_invalid(g);
    g = base;
    g.lines[0].tpa = g.lines[0].fga + 1;
    expect_invalid(g);
    g = base;
    g.lines[1].tov = -1;
    expect_invalid(g);
    g = base;
    g.lines[1].team_id = g.lines[0].team_id;
    expect_invalid(g);
    g = base;
    g.lines[1] = g.lines[0];
    g.lines[1].team_id = "B";
    expect_invalid(g);  // tied pts
    g = base;
    g.locations = {Location::away, Location::neutral};
    expect_invalid(g);
}

TEST_CASE("zero attendance is valid but warned") {
    auto g = make_game("g", make_line("A", 30), make_line("B", 25));
    g.attendance = 0;
    CHECK(validate_game(g).empty());
    CHECK(validation_warnings(g).size() == 1);
}

namespace {

std::string two_row_file() {
    Dataset d = Dataset::from_records({make_game("g1", make_line("A", 30), make_line("B", 25))});
    return write_dataset_string(d);
}

} // namespace

TEST_CASE("parse: minimal valid input") {
    std::istringstream in(two_row_file());
    const auto result = parse_dataset(in);
    CHECK(result.errors.empty());
    REQUIRE(result.dataset.size() == 1);
    CHECK(result.dataset.games()[0].lines[0].team_id == "A");
}

TEST_CASE("parse: invariant breach becomes a row error") {
    std::string csv = two_row_file();
    // fgm=30 -> 90 makes fgm > fga on the first data row.
    const auto pos = csv.find(",30,60,");
    REQUIRE(pos != std::string::npos);
    csv.replace(pos, 7, ",90,60,");
    std::istringstream in(csv);
    const auto result = parse_dataset(in);
    CHECK(result.dataset.empty());
    REQUIRE_FALSE(result.errors.empty());
    bool found = false;
    for (const auto& e : result.errors) found |= e.message.find("fgm <= fga") != std::string::npos;
    CHECK(found);
}

TEST_CASE("parse: strict mode throws on row errors") {
    std::string csv = two_row_file();
    const auto pos = csv.find(",30,60,");
    csv.replace(pos, 7, ",90,60,");
    std::istringstream in(csv);
    CHECK_THROWS_AS(parse_dataset(in, /*strict=*/true), parse_error);
}

TEST_CASE("parse: malformed header is fatal") {
    std::istringstream in("game_id,season\nx,y\n");
    CHECK_THROWS_AS(parse_dataset(in), parse_error);
}

TEST_CASE("parse: unparseable numeric cell is a row error") {
    std::string csv = two_row_file();
    const auto pos = csv.find(",30,60,");
    csv.replace(pos, 7, ",xx,60,");
    std::istringstream in(csv);
    const auto result = parse_dataset(in);
    CHECK(result.dataset.empty());
    bool found = false;
    for (const auto& e : result.errors)
        found |= e.message.find("unparseable fgm") != std::string::npos;
    CHECK(found);
}

TEST_CASE("parse: third row with a known game_id is a duplicate") {
    std::string csv = two_row_file();
    // Append a copy of the last data row.
    const auto body_start = csv.find('\n') + 1;
    const auto second_row_start = csv.find('\n', body_start) + 1;
    csv += csv.substr(second_row_start);
    std::istringstream in(csv);
    const auto result = parse_dataset(in);
    CHECK(result.dataset.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].message.find("duplicate game_id") != std::string::npos);
}

TEST_CASE("parse: unpaired row is reported") {
    std::string csv = two_row_file();
    const auto body_start = csv.find('\n') + 1;
    const auto second_row_start = csv.find('\n', body_start) + 1;
    csv.resize(second_row_start);  // drop the second data row
    std::istringstream in(csv);
    const auto result = parse_dataset(in);
    CHECK(result.dataset.empty());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].message.find("unpaired") != std::string::npos);
}

TEST_CASE("round trip: synthetic league is bit-identical") {
    LeagueConfig cfg = default_league_config();
    cfg.profiles.clear();
    GdProfile p;
    p.n_teams = 20;
    p.games_per_team = 50;  // 500 games
    cfg.profiles[{Gender::men, Division::d2}] = p;
    cfg.seed = 42;
    const auto league = generate_league(cfg);
    REQUIRE(league.dataset.size() == 500);

    const std::string csv = write_dataset_string(league.dataset);
    std::istringstream in(csv);
    const auto parsed = parse_dataset(in);
    CHECK(parsed.errors.empty());
    CHECK(parsed.dataset == league.dataset);
    CHECK(write_dataset_string(parsed.dataset) == csv);
}

TEST_CASE("dataset indexes return exactly the matching records") {
    const auto records = std::vector<GameRecord>{
        make_game("g1", make_line("A", 30), make_line("B", 25)),
        make_game("g2", make_line("A", 28), make_line("C", 25), false, 500,
                  {Gender::men, Division::d3}),
        make_game("g3", make_line("B", 30), make_line("C", 26), false, 500,
                  {Gender::women, Division::d1}, "2014-15"),
    };
    const auto d = Dataset::from_records(records);
    CHECK(d.by_team("A").size() == 2);
    CHECK(d.by_team("C").size() == 2);
    CHECK(d.by_season("2014-15").size() == 1);
    CHECK(d.by_gender_division({Gender::men, Division::d3}).size() == 1);
    CHECK(d.select(std::string("2015-16"), GenderDivision{Gender::women, Division::d1}).size() ==
          1);
    CHECK(d.find("g2") != nullptr);
    CHECK(d.find("missing") == nullptr);

    auto dup = records;
    dup.push_back(records[0]);
    CHECK_THROWS_AS(Dataset::from_records(dup), error);
}
