#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "homecourt/model.hpp"
#include "homecourt/rng.hpp"

namespace homecourt {

// Injected biases with known ground truth. Home multipliers scale the home
// team's event rates (or success probabilities for percentage statistics);
// the referee slope moves the home team's PF rate down and FTA rate up as
// attendance grows.
struct BiasSpec {
    std::map<Stat, double> home_multipliers;
    double attendance_referee_slope = 0.0;  // log-rate units per 1000 attendance
    // When true (default) home multipliers and referee effects do not apply
    // at neutral sites; when false both neutral lines receive the home
    // multipliers, modeling a venue effect that follows the event.
    bool vanish_at_neutral = true;
};

// Per-possession event rates and shot success probabilities.
struct BaseRates {
    double fga = 0.84;
    double tpa_share = 0.34;  // fraction of FGA from three
    double fta = 0.30;
    double oreb = 0.16;
    double dreb = 0.34;
    double ast = 0.19;
    double blk = 0.05;
    double stl = 0.10;
    double tov = 0.20;
    double pf = 0.26;
    double p_two = 0.46;
    double p_three = 0.32;
    double p_ft = 0.69;
};

struct GdProfile {
    int n_teams = 20;
    int games_per_team = 28;
    double attendance_base = 1000.0;   // lognormal median
    double attendance_sigma = 0.8;     // lognormal sigma
    double attendance_strength_coupling = 0.0;  // log-attendance per unit home strength
    double neutral_attendance_multiplier = 0.9;
    std::map<Stat, double> rate_multipliers;  // per-gd baseline adjustments
};

struct LeagueConfig {
    std::vector<std::string> seasons = {"2015-16"};
    std::map<GenderDivision, GdProfile> profiles;
    BaseRates rates;
    double pace_mean = 70.0;
    double pace_sd = 6.0;
    double strength_sd = 0.15;           // latent per-team log-rate offset
    double strength_shot_coupling = 0.25;  // success probability scaling per strength
    double neutral_fraction = 0.075;
    bool overdispersed = false;          // gamma-mixed rates, an extra stress knob
    double overdispersion_sd = 0.15;
    std::uint64_t seed = 1;
    BiasSpec bias;
};

// Attendance scales follow the published per-division magnitudes so that
// quartile cutoffs order D1 > D2 > D3 within each gender.
inline LeagueConfig default_league_config() {
    LeagueConfig cfg;
    auto profile = [](int teams, int games, double base, double sigma) {
        GdProfile p;
        p.n_teams = teams;
        p.games_per_team = games;
        p.attendance_base = base;
        p.attendance_sigma = sigma;
        p.attendance_strength_coupling = 0.5 * sigma;
        return p;
    };
    cfg.profiles[{Gender::men, Division::d1}] = profile(24, 28, 3250.0, 1.0);
    cfg.profiles[{Gender::women, Division::d1}] = profile(24, 28, 880.0, 0.95);
    cfg.profiles[{Gender::men, Division::d2}] = profile(20, 26, 500.0, 0.78);
    cfg.profiles[{Gender::women, Division::d2}] = profile(20, 26, 310.0, 0.72);
    cfg.profiles[{Gender::men, Division::d3}] = profile(20, 26, 300.0, 0.68);
    cfg.profiles[{Gender::women, Division::d3}] = profile(20, 26, 185.0, 0.66);
    cfg.profiles[{Gender::men, Division::d1}].neutral_attendance_multiplier = 1.3;
    cfg.profiles[{Gender::women, Division::d1}].neutral_attendance_multiplier = 1.2;
    return cfg;
}

struct GroundTruth {
    LeagueConfig config;
    // Per gender-division, per team: latent strength (log-rate offset).
    std::map<GenderDivision, std::map<std::string, double>> strengths;
};

struct GeneratedLeague {
    Dataset dataset;
    GroundTruth truth;
};

namespace detail {

inline bool is_count_stat(Stat s) { return !is_percentage(s) && s != Stat::pts; }

inline void validate_config(const LeagueConfig& cfg) {
    if (cfg.seasons.empty()) throw config_error("league config: at least one season required");
    if (cfg.profiles.empty()) throw config_error("league config: no gender-divisions configured");
    for (const auto& [gd, p] : cfg.profiles) {
        if (p.n_teams < 2)
            throw config_error("league config: " + gd_label(gd) + " needs at least 2 teams");
        if (p.games_per_team < 1)
            throw config_error("league config: " + gd_label(gd) + " needs games_per_team >= 1");
        if (p.attendance_base < 0 || p.attendance_sigma < 0)
            throw config_error("league config: negative attendance model for " + gd_label(gd));
        for (const auto& [stat, mult] : p.rate_multipliers) {
            if (mult <= 0) throw config_error("league config: rate multiplier must be > 0");
            if (stat == Stat::pts)
                throw config_error("league config: PTS is derived from makes; "
                                   "it cannot carry a direct multiplier");
        }
    }
    const double rate_fields[] = {cfg.rates.fga,  cfg.rates.tpa_share, cfg.rates.fta,
                                  cfg.rates.oreb, cfg.rates.dreb,      cfg.rates.ast,
                                  cfg.rates.blk,  cfg.rates.stl,       cfg.rates.tov,
                                  cfg.rates.pf};
    for (double r : rate_fields)
        if (r < 0) throw config_error("league config: negative base rate");
    for (const auto& [stat, mult] : cfg.bias.home_multipliers) {
        if (mult <= 0) throw config_error("league config: home multiplier must be > 0");
        if (stat == Stat::pts)
            throw config_error("league config: PTS is derived from makes; "
                               "it cannot carry a direct multiplier");
    }
    if (cfg.neutral_fraction < 0 || cfg.neutral_fraction > 1)
        throw config_error("league config: neutral_fraction must be in [0, 1]");
    if (cfg.pace_mean <= 0) throw config_error("league config: pace_mean must be positive");
}

inline int first_year(const std::string& season_label) {
    if (season_label.size() >= 4) {
        int y = 0;
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
            const char c = season_label[static_cast<std::size_t>(i)];
            if (c < '0' || c > '9') {
                ok = false;
                break;
            }
            y = y * 10 + (c - '0');
        }
        if (ok) return y;
    }
    return 2000;
}

inline std::string date_after(int year, int month, int day, int offset_days) {
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    day += offset_days;
    for (;;) {
        int len = lengths[month - 1];
        if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))) len = 29;
        if (day <= len) break;
        day -= len;
        if (++month > 12) {
            month = 1;
            ++year;
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

} // namespace homecourt::detail

// Expected per-line mean of a count statistic under a profile (no strength,
// no bias): base rate x mean pace x gender-division multiplier.
inline double expected_count_mean(const LeagueConfig& cfg, const GdProfile& profile, Stat stat) {
    double rate = 0.0;
    switch (stat) {
        case Stat::fga: rate = cfg.rates.fga; break;
        case Stat::tpa_3: rate = cfg.rates.fga * cfg.rates.tpa_share; break;
        case Stat::fta: rate = cfg.rates.fta; break;
        case Stat::oreb: rate = cfg.rates.oreb; break;
        case Stat::dreb: rate = cfg.rates.dreb; break;
        case Stat::ast: rate = cfg.rates.ast; break;
        case Stat::blk: rate = cfg.rates.blk; break;
        case Stat::stl: rate = cfg.rates.stl; break;
        case Stat::tov: rate = cfg.rates.tov; break;
        case Stat::pf: rate = cfg.rates.pf; break;
        default: throw error("expected_count_mean: not a generated count statistic");
    }
    auto it = profile.rate_multipliers.find(stat);
    const double mult = it == profile.rate_multipliers.end() ? 1.0 : it->second;
    return rate * cfg.pace_mean * mult;
}

// Generates a full multi-season league with known ground truth. Counts are
// Poisson with a log-linear structure; makes are drawn jointly with attempts
// so percentage statistics and the points identity are coherent. Every game
// owns an RNG stream derived from the master seed, so output is independent
// of generation order.
inline GeneratedLeague generate_league(const LeagueConfig& cfg) {
    detail::validate_config(cfg);

    GeneratedLeague out;
    out.truth.config = cfg;

    std::vector<std::string> seasons = cfg.seasons;
    std::sort(seasons.begin(), seasons.end());

    // Latent strengths, fixed across seasons.
    std::map<GenderDivision, std::vector<std::pair<std::string, double>>> team_strengths;
    {
        int gd_counter = 0;
        for (const auto& [gd, profile] : cfg.profiles) {
            Rng rng(cfg.seed, 0x5354u + static_cast<std::uint64_t>(gd_counter++));
            auto& teams = team_strengths[gd];
            for (int t = 0; t < profile.n_teams; ++t) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%s-T%03d", gd_label(gd).c_str(), t);
                const double theta = rng.normal(0.0, cfg.strength_sd);
                teams.emplace_back(buf, theta);
                out.truth.strengths[gd][buf] = theta;
            }
        }
    }

    const double strength_norm = 0.5 * cfg.strength_sd * cfg.strength_sd;
    const double od_shape = cfg.overdispersion_sd > 0
                                ? 1.0 / (cfg.overdispersion_sd * cfg.overdispersion_sd)
                                : 1.0;

    std::vector<GameRecord> records;
    std::uint64_t game_counter = 0;

    for (std::size_t season_idx = 0; season_idx < seasons.size(); ++season_idx) {
        const std::string& season = seasons[season_idx];
        const int year = detail::first_year(season);
        int gd_counter = 0;
        for (const auto& [gd, profile] : cfg.profiles) {
            const auto& teams = team_strengths.at(gd);
            Rng schedule_rng(cfg.seed,
                             0x5343u ^ (season_idx * 64 + static_cast<std::uint64_t>(gd_counter++)));
            std::vector<std::size_t> order(teams.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

            for (int round = 0; round < profile.games_per_team; ++round) {
                schedule_rng.shuffle(order);
                const std::size_t pairs = order.size() / 2;
                for (std::size_t k = 0; k < pairs; ++k) {
                    const auto& [team_a, theta_a] = teams[order[2 * k]];
                    const auto& [team_b, theta_b] = teams[order[2 * k + 1]];
                    const std::uint64_t gid = game_counter++;
                    Rng rng = Rng(cfg.seed).split(0x47414d45ULL + gid);

                    const bool neutral = rng.uniform() < cfg.neutral_fraction;

                    GameRecord game;
                    char idbuf[24];
                    std::snprintf(idbuf, sizeof idbuf, "G%08llu",
                                  static_cast<unsigned long long>(gid));
                    game.game_id = idbuf;
                    game.season = season;
                    game.date = detail::date_after(year, 11, 1, round);
                    game.gender_division = gd;

                    // First listed line hosts unless the site is neutral.
                    game.locations = neutral
                                         ? std::array<Location, 2>{Location::neutral,
                                                                   Location::neutral}
                                         : std::array<Location, 2>{Location::home,
                                                                   Location::away};

                    const double z = rng.normal();
                    double att = profile.attendance_base * std::exp(profile.attendance_sigma * z);
                    const double theta_host = neutral ? 0.5 * (theta_a + theta_b) : theta_a;
                    att *= std::exp(profile.attendance_strength_coupling * theta_host);
                    if (neutral) att *= profile.neutral_attendance_multiplier;
                    game.attendance = std::max(1L, std::lround(att));

                    const double pace = std::max(40.0, rng.normal(cfg.pace_mean, cfg.pace_sd));

                    auto gd_mult = [&](Stat s) {
                        auto it = profile.rate_multipliers.find(s);
                        return it == profile.rate_multipliers.end() ? 1.0 : it->second;
                    };
                    auto home_mult = [&](Stat s, bool line_is_biased) {
                        if (!line_is_biased) return 1.0;
                        auto it = cfg.bias.home_multipliers.find(s);
                        return it == cfg.bias.home_multipliers.end() ? 1.0 : it->second;
                    };

                    for (int tries = 0;; ++tries) {
                        for (int side = 0; side < 2; ++side) {
                            const bool is_home = !neutral && side == 0;
                            const bool biased =
                                is_home || (neutral && !cfg.bias.vanish_at_neutral);
                            const double theta = side == 0 ? theta_a : theta_b;
                            const double up = std::exp(theta - strength_norm);
                            const double down = std::exp(-theta - strength_norm);
                            const double att_k = static_cast<double>(game.attendance) / 1000.0;
                            const double referee_pf =
                                (is_home && cfg.bias.attendance_referee_slope != 0.0)
                                    ? std::exp(-cfg.bias.attendance_referee_slope * att_k)
                                    : 1.0;
                            const double referee_fta =
                                (is_home && cfg.bias.attendance_referee_slope != 0.0)
                                    ? std::exp(cfg.bias.attendance_referee_slope * att_k)
                                    : 1.0;
                            const double od = cfg.overdispersed
                                                  ? rng.gamma(od_shape, 1.0 / od_shape)
                                                  : 1.0;

                            auto rate = [&](double base, Stat s, double strength_factor) {
                                return base * pace * gd_mult(s) * strength_factor *
                                       home_mult(s, biased) * od;
                            };

                            TeamLine line;
                            line.team_id = side == 0 ? team_a : team_b;
                            line.fga = static_cast<int>(
                                rng.poisson(rate(cfg.rates.fga, Stat::fga, up)));
                            double share = cfg.rates.tpa_share * gd_mult(Stat::tpa_3) *
                                           home_mult(Stat::tpa_3, biased);
                            share = std::min(share, 0.95);
                            line.tpa = static_cast<int>(rng.binomial(line.fga, share));

                            auto success = [&](double raw_p) {
                                const double p =
                                    raw_p * std::exp(cfg.strength_shot_coupling * theta);
                                return std::clamp(p, 0.0, 0.99);
                            };
                            // The FG% multiplier scales both shot families;
                            // the 3FG% multiplier additionally scales threes.
                            const int two_attempts = line.fga - line.tpa;
                            const int two_makes = static_cast<int>(rng.binomial(
                                two_attempts,
                                success(cfg.rates.p_two * home_mult(Stat::fg_pct, biased))));
                            line.tpm = static_cast<int>(rng.binomial(
                                line.tpa, success(cfg.rates.p_three *
                                                  home_mult(Stat::tp_pct, biased) *
                                                  home_mult(Stat::fg_pct, biased))));
                            line.fgm = two_makes + line.tpm;

                            line.fta = static_cast<int>(rng.poisson(
                                rate(cfg.rates.fta, Stat::fta, up) * referee_fta));
                            line.ftm = static_cast<int>(rng.binomial(
                                line.fta,
                                success(cfg.rates.p_ft * home_mult(Stat::ft_pct, biased))));

                            line.oreb = static_cast<int>(
                                rng.poisson(rate(cfg.rates.oreb, Stat::oreb, up)));
                            line.dreb = static_cast<int>(
                                rng.poisson(rate(cfg.rates.dreb, Stat::dreb, up)));
                            line.ast = static_cast<int>(
                                rng.poisson(rate(cfg.rates.ast, Stat::ast, up)));
                            line.blk = static_cast<int>(
                                rng.poisson(rate(cfg.rates.blk, Stat::blk, up)));
                            line.stl = static_cast<int>(
                                rng.poisson(rate(cfg.rates.stl, Stat::stl, up)));
                            line.tov = static_cast<int>(
                                rng.poisson(rate(cfg.rates.tov, Stat::tov, down)));
                            line.pf = static_cast<int>(rng.poisson(
                                rate(cfg.rates.pf, Stat::pf, down) * referee_pf));
                            line.pts = 2 * (line.fgm - line.tpm) + 3 * line.tpm + line.ftm;
                            game.lines[static_cast<std::size_t>(side)] = std::move(line);
                        }
                        if (game.lines[0].pts != game.lines[1].pts) break;
                        if (tries > 200)
                            throw config_error("generate_league: cannot break tied scores; "
                                               "are all scoring rates zero?");
                    }
                    records.push_back(std::move(game));
                }
            }
        }
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const GameRecord& a, const GameRecord& b) {
                         if (a.season != b.season) return a.season < b.season;
                         if (a.date != b.date) return a.date < b.date;
                         return a.game_id < b.game_id;
                     });
    out.dataset = Dataset::from_records(std::move(records));
    return out;
}

} // namespace homecourt
