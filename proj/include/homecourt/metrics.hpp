#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homecourt/model.hpp"

namespace homecourt {

enum class Comparison { home_away, home_neutral, neutral_away };

inline constexpr std::array<Comparison, 3> all_comparisons = {
    Comparison::home_away, Comparison::home_neutral, Comparison::neutral_away};

constexpr std::string_view comparison_name(Comparison c) {
    switch (c) {
        case Comparison::home_away: return "home_away";
        case Comparison::home_neutral: return "home_neutral";
        case Comparison::neutral_away: return "neutral_away";
    }
    return "?";
}

struct MetricsFilter {
    std::optional<GenderDivision> gender_division;
    std::optional<std::string> season;
};

// Percent increase of a statistic between two location roles:
//   100 * (mean_A - mean_B) / overall mean,
// negated for lower-is-better statistics so positive always means the
// first role improved. The overall mean runs over every team line in the
// filtered games (all roles), which makes the home-neutral and neutral-away
// values sum exactly to the home-away value.
struct PercentIncrease {
    Stat stat = Stat::pts;
    GenderDivision gender_division;
    std::string season;
    Comparison comparison = Comparison::home_away;
    double value = 0.0;  // unitless percent
    int n_games = 0;
};

namespace detail {

struct RoleAccumulator {
    double sum = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        ++n;
    }
    bool empty() const { return n == 0; }
    double mean() const { return sum / static_cast<double>(n); }
};

struct GroupMeans {
    RoleAccumulator home, away, neutral, overall;
    int n_games = 0;
};

// One pass over the filtered games; percentage statistics skip lines with
// zero attempts.
inline GroupMeans collect_means(const Dataset& dataset, Stat stat, const MetricsFilter& filter) {
    GroupMeans m;
    for (const GameRecord* g : dataset.select(filter.season, filter.gender_division)) {
        bool contributed = false;
        for (int side = 0; side < 2; ++side) {
            const auto value = stat_value(g->lines[static_cast<std::size_t>(side)], stat);
            if (!value) continue;
            contributed = true;
            m.overall.add(*value);
            switch (g->locations[static_cast<std::size_t>(side)]) {
                case Location::home: m.home.add(*value); break;
                case Location::away: m.away.add(*value); break;
                case Location::neutral: m.neutral.add(*value); break;
            }
        }
        if (contributed) ++m.n_games;
    }
    return m;
}

} // namespace detail

// Arithmetic mean of the statistic over team lines playing the given role.
inline double group_mean(const Dataset& dataset, Stat stat, const MetricsFilter& filter,
                         Location role) {
    const auto m = detail::collect_means(dataset, stat, filter);
    const detail::RoleAccumulator& acc = role == Location::home    ? m.home
                                         : role == Location::away ? m.away
                                                                  : m.neutral;
    if (acc.empty())
        throw empty_selection_error("group_mean: no qualifying team lines for " +
                                    std::string(stat_name(stat)));
    return acc.mean();
}

inline PercentIncrease percent_increase(const Dataset& dataset, Stat stat,
                                        const MetricsFilter& filter, Comparison comparison) {
    const auto m = detail::collect_means(dataset, stat, filter);
    const detail::RoleAccumulator* a = nullptr;
    const detail::RoleAccumulator* b = nullptr;
    switch (comparison) {
        case Comparison::home_away: a = &m.home, b = &m.away; break;
        case Comparison::home_neutral: a = &m.home, b = &m.neutral; break;
        case Comparison::neutral_away: a = &m.neutral, b = &m.away; break;
    }
    if (a->empty() || b->empty() || m.overall.empty())
        throw empty_selection_error("percent_increase: empty role selection for " +
                                    std::string(stat_name(stat)));
    const double overall = m.overall.mean();
    if (overall == 0.0)
        throw degenerate_denominator_error("percent_increase: overall mean is zero for " +
                                           std::string(stat_name(stat)));
    double value = 100.0 * (a->mean() - b->mean()) / overall;
    if (lower_is_better(stat)) value = -value;

    PercentIncrease out;
    out.stat = stat;
    if (filter.gender_division) out.gender_division = *filter.gender_division;
    out.season = filter.season.value_or("all");
    out.comparison = comparison;
    out.value = value;
    out.n_games = m.n_games;
    return out;
}

// The full grid of percent increases: one row per
// (stat, gender-division, season, comparison) with a non-degenerate
// selection. Cells whose selection is empty are absent, never failures.
// Stats are ordered by their mean home-away value, descending. When
// `pool_seasons` is set, rows with season label "all" are appended.
inline std::vector<PercentIncrease> summarize(const Dataset& dataset, bool pool_seasons = false) {
    if (dataset.empty()) throw empty_selection_error("summarize: empty dataset");

    std::vector<PercentIncrease> rows;
    auto emit = [&](Stat stat, const MetricsFilter& filter) {
        for (Comparison c : all_comparisons) {
            try {
                rows.push_back(percent_increase(dataset, stat, filter, c));
            } catch (const empty_selection_error&) {
            } catch (const degenerate_denominator_error&) {
            }
        }
    };

    const auto seasons = dataset.seasons();
    const auto gds = dataset.gender_divisions();
    for (Stat stat : all_stats) {
        for (GenderDivision gd : gds) {
            for (const std::string& season : seasons) emit(stat, {gd, season});
            if (pool_seasons) emit(stat, {gd, std::nullopt});
        }
    }

    // Order stat blocks by mean home-away percent increase.
    std::map<Stat, std::pair<double, int>> ha;
    for (const auto& r : rows)
        if (r.comparison == Comparison::home_away && r.season != "all") {
            auto& [sum, n] = ha[r.stat];
            sum += r.value;
            ++n;
        }
    auto stat_key = [&](Stat s) {
        auto it = ha.find(s);
        if (it == ha.end() || it->second.second == 0)
            return std::numeric_limits<double>::lowest();
        return it->second.first / it->second.second;
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const PercentIncrease& x,
                                                   const PercentIncrease& y) {
        const double kx = stat_key(x.stat);
        const double ky = stat_key(y.stat);
        if (kx != ky) return kx > ky;
        return x.stat < y.stat;
    });
    return rows;
}

} // namespace homecourt
