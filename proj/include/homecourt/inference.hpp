#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "homecourt/distributions.hpp"
#include "homecourt/matching.hpp"
#include "homecourt/metrics.hpp"
#include "homecourt/model.hpp"
#include "homecourt/parallel.hpp"
#include "homecourt/rng.hpp"

namespace homecourt {

// Home advantage of one game for one statistic: home value minus away value,
// with no direction flip (the reporting layer owns sign conventions).
// Undefined when a percentage statistic has zero attempts on either line.
inline std::optional<double> home_advantage(const GameRecord& game, Stat stat) {
    if (game.is_neutral())
        throw not_applicable_error("home_advantage is undefined for neutral-site games (" +
                                   game.game_id + ")");
    const auto hi = game.home_index();
    const auto ai = game.away_index();
    if (!hi || !ai)
        throw not_applicable_error("game " + game.game_id + " lacks a home/away pair");
    const auto h = stat_value(game.lines[static_cast<std::size_t>(*hi)], stat);
    const auto a = stat_value(game.lines[static_cast<std::size_t>(*ai)], stat);
    if (!h || !a) return std::nullopt;
    return *h - *a;
}

struct TTestResult {
    double t_statistic = 0.0;
    double dof = 1.0;  // Welch-Satterthwaite
    double p_value = 1.0;
    double mean_diff = 0.0;  // mean(a) - mean(b)
    std::size_t n1 = 0, n2 = 0;
    bool degenerate = false;  // both sample variances were zero
};

// Welch (unequal variance) two-sample t-test, two-sided.
inline TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw empty_selection_error("welch_t_test: both samples need at least 2 values");

    auto moments = [](std::span<const double> v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair<double, double>{mean, ss / static_cast<double>(v.size() - 1)};
    };
    const auto [m1, v1] = moments(a);
    const auto [m2, v2] = moments(b);
    const auto n1 = static_cast<double>(a.size());
    const auto n2 = static_cast<double>(b.size());

    TTestResult out;
    out.n1 = a.size();
    out.n2 = b.size();
    out.mean_diff = m1 - m2;

    if (v1 == 0.0 && v2 == 0.0) {
        out.degenerate = true;
        out.dof = n1 + n2 - 2.0;
        if (m1 == m2) {
            out.t_statistic = 0.0;
            out.p_value = 1.0;
        } else {
            out.t_statistic = m1 > m2 ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
            out.p_value = 0.0;
        }
        return out;
    }

    const double se1 = v1 / n1;
    const double se2 = v2 / n2;
    out.t_statistic = (m1 - m2) / std::sqrt(se1 + se2);
    out.dof = (se1 + se2) * (se1 + se2) /
              (se1 * se1 / (n1 - 1.0) + se2 * se2 / (n2 - 1.0));
    out.p_value = student_t_two_sided_p(out.t_statistic, out.dof);
    return out;
}

// family_alpha / n_tests.
inline double bonferroni_alpha(int n_tests, double family_alpha) {
    if (n_tests < 1) throw error("bonferroni_alpha: n_tests must be >= 1");
    if (!(family_alpha > 0.0 && family_alpha < 1.0))
        throw error("bonferroni_alpha: family_alpha must be in (0, 1)");
    return family_alpha / n_tests;
}

// Signed mean p-value of the repeated matched-resampling t-test for one
// (statistic, gender-division) cell. The sign is the direction of the
// attendance effect on home advantage in the improvement sense: for
// lower-is-better statistics the raw direction is inverted.
struct SignedMeanP {
    Stat stat = Stat::pts;
    GenderDivision gender_division;
    double mean_abs_p = 1.0;
    int sign = +1;
    int iterations = 0;  // requested
    int skipped = 0;     // iterations lost to empty matches or tiny samples
    bool significant = false;
    double mean_diff = 0.0;  // mean over iterations of mean(high adv) - mean(low adv)
};

// Everything stat-independent about one gender-division pool: per-season RPI
// tables applied to each home/away game, attendance cutoffs, and the
// low/high quartile samples carrying RPI'.
struct GdMatchContext {
    GenderDivision gender_division;
    AttendanceCutoffs cutoffs;
    std::vector<GameRpi> low, high;
};

inline GdMatchContext build_match_context(const Dataset& dataset, GenderDivision gd) {
    GdMatchContext ctx;
    ctx.gender_division = gd;
    ctx.cutoffs = attendance_cutoffs(dataset, gd);
    const auto partition = partition_by_attendance(dataset, gd, ctx.cutoffs);

    std::map<std::string, RpiTable> tables;
    for (const std::string& season : dataset.seasons()) {
        bool has_games = false;
        for (const GameRecord* g : dataset.select(season, gd)) {
            (void)g;
            has_games = true;
            break;
        }
        if (has_games) tables.emplace(season, compute_rpi(dataset, season, gd));
    }
    auto attach = [&](const std::vector<const GameRecord*>& games) {
        std::vector<GameRpi> out;
        out.reserve(games.size());
        for (const GameRecord* g : games)
            out.push_back({g, rpi_advantage(*g, tables.at(g->season)).value});
        return out;
    };
    ctx.low = attach(partition.low);
    ctx.high = attach(partition.high);
    return ctx;
}

// Pure function of (seed, stream); used to hand every iteration and every
// table cell its own independent stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed).split(stream).next_u64();
}

namespace detail {

class KahanSum {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0, c_ = 0.0;
};

} // namespace detail

inline SignedMeanP matched_attendance_test_with_context(const GdMatchContext& ctx, Stat stat,
                                                        int iterations,
                                                        std::uint64_t master_seed, double alpha,
                                                        int n_bins = 25) {
    if (iterations < 1) throw error("matched_attendance_test: iterations must be >= 1");
    if (ctx.low.empty() || ctx.high.empty())
        throw empty_selection_error("matched_attendance_test: empty attendance quartile for " +
                                    gd_label(ctx.gender_division));

    std::vector<double> low_values;
    low_values.reserve(ctx.low.size());
    for (const GameRpi& g : ctx.low)
        if (const auto adv = home_advantage(*g.game, stat)) low_values.push_back(*adv);
    if (low_values.size() < 2)
        throw unreliable_result_error("matched_attendance_test: fewer than 2 defined low-" +
                                      std::string("attendance values for ") +
                                      std::string(stat_name(stat)));

    // Per-iteration: fresh seed, fresh matched resample, one Welch test.
    std::vector<double> p_values, mean_diffs;
    p_values.reserve(static_cast<std::size_t>(iterations));
    mean_diffs.reserve(static_cast<std::size_t>(iterations));
    int skipped = 0;
    std::vector<double> matched_values;
    for (int it = 0; it < iterations; ++it) {
        const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(it));
        try {
            const MatchedPair matched =
                match_rpi(ctx.gender_division, ctx.low, ctx.high, n_bins, seed);
            matched_values.clear();
            for (const GameRpi& g : matched.high_matched)
                if (const auto adv = home_advantage(*g.game, stat))
                    matched_values.push_back(*adv);
            if (matched_values.size() < 2) {
                ++skipped;
                continue;
            }
            const TTestResult t = welch_t_test(matched_values, low_values);
            p_values.push_back(t.p_value);
            mean_diffs.push_back(t.mean_diff);
        } catch (const empty_match_error&) {
            ++skipped;
        }
    }

    if (skipped > iterations / 10)
        throw unreliable_result_error(
            "matched_attendance_test: " + std::to_string(skipped) + " of " +
            std::to_string(iterations) + " iterations skipped for " +
            std::string(stat_name(stat)) + " / " + gd_label(ctx.gender_division));

    detail::KahanSum p_sum, diff_sum;
    for (double p : p_values) p_sum.add(p);
    for (double d : mean_diffs) diff_sum.add(d);
    const auto completed = static_cast<double>(p_values.size());

    SignedMeanP out;
    out.stat = stat;
    out.gender_division = ctx.gender_division;
    out.iterations = iterations;
    out.skipped = skipped;
    out.mean_abs_p = p_sum.value() / completed;
    out.mean_diff = diff_sum.value() / completed;
    const double improvement = lower_is_better(stat) ? -out.mean_diff : out.mean_diff;
    out.sign = improvement < 0.0 ? -1 : +1;
    out.significant = out.mean_abs_p < alpha;
    return out;
}

inline SignedMeanP matched_attendance_test(const Dataset& dataset, GenderDivision gd, Stat stat,
                                           int iterations, std::uint64_t master_seed,
                                           double alpha, int n_bins = 25) {
    const GdMatchContext ctx = build_match_context(dataset, gd);
    return matched_attendance_test_with_context(ctx, stat, iterations, master_seed, alpha, n_bins);
}

// One cell of the full attendance-effect table; cells that cannot be
// computed carry their error instead of aborting the rest of the grid.
struct AttendanceCell {
    SignedMeanP result;
    bool ok = false;
    std::string error_message;
};

struct AttendanceTestTable {
    std::vector<AttendanceCutoffs> cutoffs;  // one per gender-division present
    std::vector<AttendanceCell> cells;       // stat-major: cells[s * n_gds + g]
    std::vector<GenderDivision> gds;
    double family_alpha = 0.05;
    double alpha = 0.0;  // Bonferroni-corrected
    int n_tests = 0;
    int iterations = 0;
};

inline AttendanceTestTable attendance_test_table(const Dataset& dataset, int iterations,
                                                 double family_alpha, std::uint64_t seed,
                                                 int n_bins = 25, int threads = 0) {
    AttendanceTestTable table;
    table.family_alpha = family_alpha;
    table.iterations = iterations;
    table.gds = dataset.gender_divisions();
    if (table.gds.empty()) throw empty_selection_error("attendance_test_table: empty dataset");

    std::vector<GdMatchContext> contexts;
    contexts.reserve(table.gds.size());
    for (GenderDivision gd : table.gds) {
        contexts.push_back(build_match_context(dataset, gd));
        table.cutoffs.push_back(contexts.back().cutoffs);
    }

    // The test count comes from the run configuration, never a constant.
    table.n_tests = static_cast<int>(all_stats.size() * table.gds.size());
    table.alpha = bonferroni_alpha(table.n_tests, family_alpha);

    const std::size_t n_gds = table.gds.size();
    table.cells.resize(all_stats.size() * n_gds);
    parallel_for(table.cells.size(), threads, [&](std::size_t cell) {
        const Stat stat = all_stats[cell / n_gds];
        const std::size_t g = cell % n_gds;
        const std::uint64_t cell_seed = derive_seed(seed, cell);
        AttendanceCell& out = table.cells[cell];
        try {
            out.result = matched_attendance_test_with_context(contexts[g], stat, iterations,
                                                              cell_seed, table.alpha, n_bins);
            out.ok = true;
        } catch (const error& e) {
            out.error_message = e.what();
        }
    });
    return table;
}

} // namespace homecourt
