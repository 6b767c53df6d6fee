// Test-only reference implementations. Each one recomputes a quantity the
// engine produces, by a deliberately different route: naive enumeration,
// quadrature, or dense linear algebra. They are slow and simple on purpose
// and must stay independent of the implementation paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "homecourt/glm.hpp"
#include "homecourt/model.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// RPI by direct enumeration. A league is a list of (winner, loser) pairs.

struct LeagueGame {
    std::string winner, loser;
};

struct RpiRow {
    double wp = 0, owp = 0, oowp = 0, rpi = 0;
};

inline std::map<std::string, RpiRow> rpi_enumeration(const std::vector<LeagueGame>& games,
                                                     bool exclude_reference = true) {
    std::set<std::string> teams;
    for (const auto& g : games) {
        teams.insert(g.winner);
        teams.insert(g.loser);
    }

    auto games_of = [&](const std::string& t) {
        std::vector<std::pair<std::string, bool>> out;  // (opponent, won)
        for (const auto& g : games) {
            if (g.winner == t) out.emplace_back(g.loser, true);
            if (g.loser == t) out.emplace_back(g.winner, false);
        }
        return out;
    };
    auto wp_excluding = [&](const std::string& t, const std::string& reference) {
        int wins = 0, count = 0;
        for (const auto& [opp, won] : games_of(t)) {
            if (exclude_reference && opp == reference) continue;
            ++count;
            if (won) ++wins;
        }
        if (count == 0) return 0.5;
        return static_cast<double>(wins) / count;
    };

    std::map<std::string, RpiRow> rows;
    std::map<std::string, double> owp;
    for (const auto& t : teams) {
        const auto gs = games_of(t);
        double sum = 0;
        for (const auto& [opp, won] : gs) sum += wp_excluding(opp, t);
        owp[t] = sum / static_cast<double>(gs.size());
    }
    for (const auto& t : teams) {
        const auto gs = games_of(t);
        RpiRow r;
        int wins = 0;
        for (const auto& [opp, won] : gs) wins += won;
        r.wp = static_cast<double>(wins) / static_cast<double>(gs.size());
        r.owp = owp[t];
        double sum = 0;
        for (const auto& [opp, won] : gs) sum += owp[opp];
        r.oowp = sum / static_cast<double>(gs.size());
        r.rpi = 0.25 * r.wp + 0.50 * r.owp + 0.25 * r.oowp;
        rows[t] = r;
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Two-sample KS statistic by evaluating both ECDFs on the pooled grid.

inline double ks_statistic_grid(std::vector<double> a, std::vector<double> b) {
    std::vector<double> grid;
    grid.insert(grid.end(), a.begin(), a.end());
    grid.insert(grid.end(), b.begin(), b.end());
    double d = 0;
    for (double x : grid) {
        double fa = 0, fb = 0;
        for (double v : a) fa += v <= x;
        for (double v : b) fb += v <= x;
        fa /= static_cast<double>(a.size());
        fb /= static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

// Asymptotic Kolmogorov survival by brute-force alternating series in long
// double, far past machine precision.
inline double kolmogorov_q_series(double x) {
    if (x <= 0) return 1.0;
    long double sum = 0.0L;
    for (int k = 1; k <= 100000; ++k) {
        const long double term =
            std::exp(-2.0L * static_cast<long double>(k) * k * x * x);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-30L) break;
    }
    long double q = 2.0L * sum;
    if (q < 0) q = 0;
    if (q > 1) q = 1;
    return static_cast<double>(q);
}

// ---------------------------------------------------------------------------
// Welch reference: direct formula evaluation plus numeric CDF integration of
// the t density (adaptive Simpson).

struct WelchRef {
    double t = 0, dof = 0, p = 1;
};

namespace detail {

inline double t_density(double x, double v) {
    const double log_c = std::lgamma((v + 1) / 2) - std::lgamma(v / 2) -
                         0.5 * std::log(v * 3.14159265358979323846);
    return std::exp(log_c - 0.5 * (v + 1) * std::log1p(x * x / v));
}

inline double simpson(double a, double b, double v) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (t_density(a, v) + 4.0 * t_density(m, v) + t_density(b, v));
}

inline double adaptive(double a, double b, double v, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(a, m, v);
    const double right = simpson(m, b, v);
    if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(a, m, v, left, tol / 2, depth + 1) +
           adaptive(m, b, v, right, tol / 2, depth + 1);
}

} // namespace detail

inline WelchRef welch_reference(const std::vector<double>& a, const std::vector<double>& b) {
    auto mean_var = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::pair<double, double>{m, ss / static_cast<double>(v.size() - 1)};
    };
    const auto [m1, v1] = mean_var(a);
    const auto [m2, v2] = mean_var(b);
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    WelchRef out;
    const double q1 = v1 / n1, q2 = v2 / n2;
    out.t = (m1 - m2) / std::sqrt(q1 + q2);
    out.dof = (q1 + q2) * (q1 + q2) / (q1 * q1 / (n1 - 1) + q2 * q2 / (n2 - 1));
    const double upper = std::fabs(out.t);
    const double body = detail::adaptive(0.0, upper, out.dof,
                                         detail::simpson(0.0, upper, out.dof), 1e-14, 0);
    out.p = 2.0 * (0.5 - body);
    if (out.p < 0) out.p = 0;
    return out;
}

// ---------------------------------------------------------------------------
// Unpenalized Poisson MLE by Newton iterations on dense normal equations
// (Gaussian elimination with partial pivoting), independent of the
// coordinate-descent solver.

inline std::vector<double> solve_dense(std::vector<std::vector<double>> m,
                                       std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[pivot][c])) pivot = r;
        std::swap(m[c], m[pivot]);
        std::swap(rhs[c], rhs[pivot]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ci = n; ci-- > 0;) {
        double s = rhs[ci];
        for (std::size_t k = ci + 1; k < n; ++k) s -= m[ci][k] * x[k];
        x[ci] = s / m[ci][ci];
    }
    return x;
}

struct PoissonMleRef {
    double intercept = 0;
    std::vector<double> beta;
    bool converged = false;
};

inline PoissonMleRef poisson_mle_irls(const homecourt::PoissonDesign& d, int max_iter = 200,
                                      double tol = 1e-12) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_features();
    PoissonMleRef ref;
    double ybar = 0;
    for (double v : d.y) ybar += v;
    ref.intercept = std::log(ybar / static_cast<double>(n));
    ref.beta.assign(p, 0.0);

    for (int iter = 0; iter < max_iter; ++iter) {
        // Newton step: (X' W X) delta = X' (y - mu), X includes the intercept.
        std::vector<double> eta(n, ref.intercept);
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t i = 0; i < n; ++i) eta[i] += ref.beta[j] * d.columns[j][i];
        std::vector<std::vector<double>> h(p + 1, std::vector<double>(p + 1, 0.0));
        std::vector<double> g(p + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double mu = std::exp(eta[i]);
            const double r = d.y[i] - mu;
            g[0] += r;
            for (std::size_t j = 0; j < p; ++j) g[j + 1] += d.columns[j][i] * r;
            h[0][0] += mu;
            for (std::size_t j = 0; j < p; ++j) {
                h[0][j + 1] += mu * d.columns[j][i];
                for (std::size_t k = 0; k <= j; ++k)
                    h[j + 1][k + 1] += mu * d.columns[j][i] * d.columns[k][i];
            }
        }
        for (std::size_t j = 0; j <= p; ++j)
            for (std::size_t k = j + 1; k <= p; ++k) h[j][k] = h[k][j];
        const auto delta = solve_dense(h, g);
        double step = 0;
        ref.intercept += delta[0];
        step = std::fabs(delta[0]);
        for (std::size_t j = 0; j < p; ++j) {
            ref.beta[j] += delta[j + 1];
            step = std::max(step, std::fabs(delta[j + 1]));
        }
        if (step < tol) {
            ref.converged = true;
            break;
        }
    }
    return ref;
}

// ---------------------------------------------------------------------------
// Nearest-rank percentile by sort-and-index.

inline long percentile_sort_index(std::vector<long> values, double pct) {
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(values.size())));
    if (rank < 1) rank = 1;
    return values[rank - 1];
}

} // namespace oracle
