#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "homecourt/distributions.hpp"
#include "homecourt/model.hpp"
#include "homecourt/rng.hpp"
#include "homecourt/rpi.hpp"

namespace homecourt {

// Attendance quartile cutoffs for one gender-division pool (home/away games
// only). Nearest-rank percentiles: the k-th percentile is the value at index
// ceil(k/100 * n) of the sorted attendances.
struct AttendanceCutoffs {
    GenderDivision gender_division;
    long low_cutoff = 0;
    long high_cutoff = 0;
};

namespace detail {

inline long nearest_rank(const std::vector<long>& sorted, double percentile) {
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n));
    if (rank < 1) rank = 1;
    if (rank > sorted.size()) rank = sorted.size();
    return sorted[rank - 1];
}

} // namespace detail

inline AttendanceCutoffs attendance_cutoffs(const Dataset& dataset, GenderDivision gd) {
    std::vector<long> attendances;
    for (const GameRecord* g : dataset.by_gender_division(gd))
        if (!g->is_neutral()) attendances.push_back(g->attendance);
    if (attendances.empty())
        throw empty_selection_error("attendance_cutoffs: no home/away games for " + gd_label(gd));
    std::sort(attendances.begin(), attendances.end());
    AttendanceCutoffs out;
    out.gender_division = gd;
    out.low_cutoff = detail::nearest_rank(attendances, 25.0);
    out.high_cutoff = detail::nearest_rank(attendances, 75.0);
    return out;
}

// A home/away game together with its RPI' (home RPI - away RPI).
struct GameRpi {
    const GameRecord* game = nullptr;
    double rpi_advantage = 0.0;
};

struct AttendancePartition {
    std::vector<const GameRecord*> low;
    std::vector<const GameRecord*> high;
};

// low: attendance <= low_cutoff;  high: attendance >= high_cutoff. With
// degenerate cutoffs (low == high) boundary games land in both sets; if the
// overlap dominates the pool is unusable.
inline AttendancePartition partition_by_attendance(const Dataset& dataset, GenderDivision gd,
                                                   const AttendanceCutoffs& cutoffs) {
    AttendancePartition out;
    std::size_t overlap = 0;
    for (const GameRecord* g : dataset.by_gender_division(gd)) {
        if (g->is_neutral()) continue;
        const bool lo = g->attendance <= cutoffs.low_cutoff;
        const bool hi = g->attendance >= cutoffs.high_cutoff;
        if (lo) out.low.push_back(g);
        if (hi) out.high.push_back(g);
        if (lo && hi) ++overlap;
    }
    if (!out.low.empty() && static_cast<double>(overlap) > 0.5 * static_cast<double>(out.low.size()))
        throw degenerate_scale_error("partition_by_attendance: degenerate attendance pool (" +
                                     std::to_string(overlap) + " games in both quartile sets)");
    return out;
}

// Result of RPI'-matching a high-attendance sample to a low-attendance one.
struct MatchedPair {
    GenderDivision gender_division;
    std::vector<GameRpi> low;
    std::vector<GameRpi> high_matched;  // drawn with replacement, bin by bin
    std::uint64_t seed = 0;
    std::vector<double> bin_edges;            // n_bins + 1 edges over the low RPI' range
    std::vector<std::size_t> low_bin_counts;  // n_i
    std::vector<std::size_t> matched_bin_counts;  // |H_i|
};

// The resampling algorithm: equal-width bins across the range of the LOW
// sample's RPI'; for each bin, draw (with replacement) as many high games
// with RPI' in that bin as the low sample has there; bins with no high game
// contribute the empty set. High games outside the low range are never drawn.
inline MatchedPair match_rpi(GenderDivision gd, std::span<const GameRpi> low,
                             std::span<const GameRpi> high, int n_bins, std::uint64_t seed) {
    if (low.empty() || high.empty())
        throw empty_selection_error("match_rpi: both samples must be non-empty");
    if (n_bins < 1) throw error("match_rpi: n_bins must be >= 1");

    double lo = low[0].rpi_advantage;
    double hi = lo;
    for (const GameRpi& g : low) {
        lo = std::min(lo, g.rpi_advantage);
        hi = std::max(hi, g.rpi_advantage);
    }
    // Zero-width range: a single point bin, matched exactly.
    const bool degenerate = lo == hi;
    const int bins = degenerate ? 1 : n_bins;
    const double width = degenerate ? 0.0 : (hi - lo) / bins;

    // Bins are left-closed right-open, last bin right-closed.
    auto bin_of = [&](double v) -> int {
        if (v < lo || v > hi) return -1;
        if (degenerate) return 0;
        if (v == hi) return bins - 1;
        int b = static_cast<int>((v - lo) / width);
        if (b >= bins) b = bins - 1;
        // Guard against rounding across an edge.
        if (b > 0 && v < lo + b * width) --b;
        if (v >= lo + (b + 1) * width && b + 1 < bins) ++b;
        return b;
    };

    MatchedPair out;
    out.gender_division = gd;
    out.seed = seed;
    out.low.assign(low.begin(), low.end());
    out.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        out.bin_edges[static_cast<std::size_t>(b)] = degenerate ? lo : lo + b * width;
    out.bin_edges.back() = hi;

    std::vector<std::size_t> low_counts(static_cast<std::size_t>(bins), 0);
    for (const GameRpi& g : low) {
        const int b = bin_of(g.rpi_advantage);
        if (b >= 0) ++low_counts[static_cast<std::size_t>(b)];
    }
    std::vector<std::vector<std::size_t>> high_pools(static_cast<std::size_t>(bins));
    for (std::size_t i = 0; i < high.size(); ++i) {
        const int b = bin_of(high[i].rpi_advantage);
        if (b >= 0) high_pools[static_cast<std::size_t>(b)].push_back(i);
    }

    Rng rng(seed);
    out.low_bin_counts = low_counts;
    out.matched_bin_counts.assign(static_cast<std::size_t>(bins), 0);
    for (int b = 0; b < bins; ++b) {
        const std::size_t need = low_counts[static_cast<std::size_t>(b)];
        const auto& pool = high_pools[static_cast<std::size_t>(b)];
        if (need == 0 || pool.empty()) continue;
        for (std::size_t k = 0; k < need; ++k) {
            const std::size_t pick = pool[rng.below(pool.size())];
            out.high_matched.push_back(high[pick]);
        }
        out.matched_bin_counts[static_cast<std::size_t>(b)] = need;
    }

    if (out.high_matched.empty())
        throw empty_match_error("match_rpi: no high-attendance game falls in any occupied bin");
    return out;
}

// Two-sample Kolmogorov-Smirnov test.
struct KsResult {
    double statistic = 0.0;  // sup |ECDF_a - ECDF_b|
    double p_value = 1.0;    // asymptotic, effective n = n1*n2/(n1+n2)
    std::size_t n1 = 0, n2 = 0;
};

inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw empty_selection_error("ks_two_sample: both samples must be non-empty");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const auto n1 = static_cast<double>(sa.size());
    const auto n2 = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        const double gap = std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2);
        d = std::max(d, gap);
    }
    // Once one sample is exhausted the gap only shrinks back to 0.

    KsResult out;
    out.statistic = d;
    out.n1 = sa.size();
    out.n2 = sb.size();
    const double ne = n1 * n2 / (n1 + n2);
    out.p_value = kolmogorov_q(std::sqrt(ne) * d);
    return out;
}

} // namespace homecourt
