#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homecourt/errors.hpp"
#include "homecourt/model.hpp"
#include "homecourt/parallel.hpp"
#include "homecourt/rng.hpp"
#include "homecourt/rpi.hpp"

namespace homecourt {

// Generic input for the penalized Poisson solver: a response and dense
// feature columns. The intercept is implicit and never penalized.
struct PoissonDesign {
    std::vector<double> y;
    std::vector<std::vector<double>> columns;

    std::size_t n_rows() const { return y.size(); }
    std::size_t n_features() const { return columns.size(); }
};

struct GlmFit {
    Stat stat = Stat::pts;  // meaningful for fits built from a Dataset design
    double intercept = 0.0;
    std::vector<double> beta;
    double lambda = 0.0;
    int cv_folds = 0;
    std::vector<double> lambda_path;
    std::vector<double> cv_deviance_path;  // mean held-out deviance per path value
    int outer_iterations = 0;
    double kkt_residual = 0.0;
    std::vector<double> objective_trace;  // penalized objective per outer iteration
    bool converged = false;
};

class non_convergence_error : public error {
public:
    non_convergence_error(const std::string& msg, GlmFit last)
        : error(msg), last_fit(std::move(last)) {}
    GlmFit last_fit;
};

struct SolverOptions {
    double tolerance = 1e-8;  // max coefficient change between outer iterations
    int max_iterations = 10000;
    double kkt_tolerance = 1e-7;
    double divergence_bound = 30.0;  // |beta_j| beyond this on standardized features
};

// Penalized objective: -(1/N) sum(y*eta - exp(eta)) + lambda * sum |beta_j|.
inline double poisson_lasso_objective(const PoissonDesign& d, double intercept,
                                      std::span<const double> beta, double lambda) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_features();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double eta = intercept;
        for (std::size_t j = 0; j < p; ++j)
            if (beta[j] != 0.0) eta += beta[j] * d.columns[j][i];
        acc += d.y[i] * eta - std::exp(eta);
    }
    double l1 = 0.0;
    for (double b : beta) l1 += std::fabs(b);
    return -acc / static_cast<double>(n) + lambda * l1;
}

// Gradient of the unpenalized negative log-likelihood, intercept first:
// g_j = -(1/N) sum_i x_ij (y_i - mu_i).
inline std::vector<double> poisson_nll_gradient(const PoissonDesign& d, double intercept,
                                                std::span<const double> beta) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_features();
    std::vector<double> g(p + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = intercept;
        for (std::size_t j = 0; j < p; ++j)
            if (beta[j] != 0.0) eta += beta[j] * d.columns[j][i];
        const double resid = d.y[i] - std::exp(eta);
        g[0] -= resid;
        for (std::size_t j = 0; j < p; ++j) g[j + 1] -= d.columns[j][i] * resid;
    }
    const auto dn = static_cast<double>(n);
    for (double& v : g) v /= dn;
    return g;
}

// Max over penalized coordinates of the KKT stationarity defect, with the
// intercept score folded in: zero coefficients need |score| <= lambda, active
// ones need score = -sign(beta) * lambda.
inline double kkt_residual(const PoissonDesign& d, const GlmFit& fit, double lambda) {
    const auto g = poisson_nll_gradient(d, fit.intercept, fit.beta);
    double res = std::fabs(g[0]);
    for (std::size_t j = 0; j < fit.beta.size(); ++j) {
        if (fit.beta[j] == 0.0)
            res = std::max(res, std::max(0.0, std::fabs(g[j + 1]) - lambda));
        else
            res = std::max(res, std::fabs(g[j + 1] + lambda * (fit.beta[j] > 0 ? 1.0 : -1.0)));
    }
    return res;
}

// Smallest penalty that zeroes every coefficient: with the null model
// (intercept = log mean y) score_j = (1/N) sum x_ij (y_i - ybar).
inline double lambda_max(const PoissonDesign& d) {
    const std::size_t n = d.n_rows();
    if (n == 0) throw error("lambda_max: empty design");
    double ybar = 0.0;
    for (double v : d.y) ybar += v;
    ybar /= static_cast<double>(n);
    if (ybar <= 0.0) throw divergence_error("lambda_max: response mean is zero");
    double lmax = 0.0;
    for (const auto& col : d.columns) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += col[i] * (d.y[i] - ybar);
        lmax = std::max(lmax, std::fabs(s) / static_cast<double>(n));
    }
    // Tiny headroom so the solver's own round-off cannot push the null
    // model's score a few ulps past the threshold.
    return lmax * (1.0 + 1e-12);
}

// Log-spaced descending path from lambda_max down to min_ratio * lambda_max.
inline std::vector<double> make_lambda_path(double lmax, int length = 100,
                                            double min_ratio = 1e-4) {
    if (lmax <= 0.0) throw error("make_lambda_path: lambda_max must be positive");
    if (length < 1) throw error("make_lambda_path: length must be >= 1");
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(length));
    if (length == 1) {
        path.push_back(lmax);
        return path;
    }
    const double log_max = std::log(lmax);
    const double log_min = std::log(lmax * min_ratio);
    for (int k = 0; k < length; ++k)
        path.push_back(std::exp(log_max + (log_min - log_max) * k / (length - 1)));
    path.front() = lmax;
    return path;
}

namespace detail {

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Indicator-style columns dominate the design, so the weighted Gram and
// score sums iterate nonzero indices instead of full rows where that is
// cheaper. Every fit goes through this same path, keeping results identical
// across thread counts and call sites.
struct ColumnInfo {
    bool sparse = false;
    std::vector<std::uint32_t> nz;
};

struct DesignProfile {
    std::vector<ColumnInfo> cols;
};

inline DesignProfile profile_design(const PoissonDesign& d) {
    DesignProfile p;
    const std::size_t n = d.n_rows();
    p.cols.resize(d.n_features());
    for (std::size_t j = 0; j < d.n_features(); ++j) {
        const auto& col = d.columns[j];
        std::size_t nnz = 0;
        for (double v : col) nnz += v != 0.0;
        if (nnz * 5 <= n * 2) {  // density at most 40%
            auto& info = p.cols[j];
            info.sparse = true;
            info.nz.reserve(nnz);
            for (std::size_t i = 0; i < n; ++i)
                if (col[i] != 0.0) info.nz.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return p;
}

inline void add_scaled_column(const PoissonDesign& d, const DesignProfile& prof, std::size_t j,
                              double scale, std::vector<double>& out) {
    const auto& col = d.columns[j];
    if (prof.cols[j].sparse) {
        for (std::uint32_t i : prof.cols[j].nz) out[i] += scale * col[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * col[i];
    }
}

// sum over rows of col_j * weight
inline double weighted_column_sum(const PoissonDesign& d, const DesignProfile& prof,
                                  std::size_t j, const std::vector<double>& weight) {
    const auto& col = d.columns[j];
    double s = 0.0;
    if (prof.cols[j].sparse) {
        for (std::uint32_t i : prof.cols[j].nz) s += col[i] * weight[i];
    } else {
        for (std::size_t i = 0; i < weight.size(); ++i) s += col[i] * weight[i];
    }
    return s;
}

// sum over rows of col_j * col_k * weight, iterating the sparser column
inline double weighted_pair_sum(const PoissonDesign& d, const DesignProfile& prof,
                                std::size_t j, std::size_t k,
                                const std::vector<double>& weight) {
    const auto& cj = d.columns[j];
    const auto& ck = d.columns[k];
    const bool js = prof.cols[j].sparse;
    const bool ks = prof.cols[k].sparse;
    double s = 0.0;
    if (js || ks) {
        const auto& nz = js && ks
                             ? (prof.cols[j].nz.size() <= prof.cols[k].nz.size()
                                    ? prof.cols[j].nz
                                    : prof.cols[k].nz)
                             : (js ? prof.cols[j].nz : prof.cols[k].nz);
        for (std::uint32_t i : nz) s += cj[i] * ck[i] * weight[i];
    } else {
        for (std::size_t i = 0; i < weight.size(); ++i) s += cj[i] * ck[i] * weight[i];
    }
    return s;
}

} // namespace detail

// L1-penalized Poisson regression by iteratively reweighted least squares
// with coordinate-wise soft-thresholding on the working quadratic
// approximation (weighted Gram form, so coordinate passes cost O(p^2)).
// The outer objective is kept monotone by halving steps that overshoot the
// quadratic model's region of validity.
inline GlmFit fit_lasso_poisson_profiled(const PoissonDesign& d,
                                         const detail::DesignProfile& profile, double lambda,
                                         const SolverOptions& options = {},
                                         const GlmFit* warm_start = nullptr) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_features();
    if (n == 0) throw error("fit_lasso_poisson: empty design");
    if (lambda < 0.0) throw error("fit_lasso_poisson: lambda must be >= 0");
    for (const auto& col : d.columns)
        if (col.size() != n) throw error("fit_lasso_poisson: ragged design");
    for (double v : d.y)
        if (v < 0.0 || !std::isfinite(v)) throw error("fit_lasso_poisson: y must be >= 0");

    double ybar = 0.0;
    for (double v : d.y) ybar += v;
    ybar /= static_cast<double>(n);
    if (ybar <= 0.0) throw divergence_error("fit_lasso_poisson: response mean is zero");

    GlmFit fit;
    fit.stat = Stat::pts;
    fit.lambda = lambda;
    fit.intercept = warm_start ? warm_start->intercept : std::log(ybar);
    fit.beta = warm_start ? warm_start->beta : std::vector<double>(p, 0.0);
    if (fit.beta.size() != p) throw error("fit_lasso_poisson: warm start has wrong width");

    const auto dn = static_cast<double>(n);
    std::vector<double> eta(n), mu(n), wz(n);
    std::vector<std::vector<double>> gram(p, std::vector<double>(p, 0.0));
    std::vector<double> xw(p, 0.0), xwz(p, 0.0);

    auto compute_eta = [&](double b0, const std::vector<double>& beta) {
        eta.assign(n, b0);
        for (std::size_t j = 0; j < p; ++j)
            if (beta[j] != 0.0) detail::add_scaled_column(d, profile, j, beta[j], eta);
    };

    // Evaluates the penalized objective at an iterate and leaves eta and mu
    // holding that iterate's state, so the IRLS weights and the KKT check
    // can reuse them without another exp pass.
    auto objective_at = [&](double b0, const std::vector<double>& beta) {
        compute_eta(b0, beta);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::exp(eta[i]);
            mu[i] = m;
            acc += d.y[i] * eta[i] - m;
        }
        double l1 = 0.0;
        for (double b : beta) l1 += std::fabs(b);
        return -acc / dn + lambda * l1;
    };

    // KKT stationarity defect; requires eta/mu to match the given iterate.
    auto kkt_from_state = [&](const std::vector<double>& beta) {
        for (std::size_t i = 0; i < n; ++i) wz[i] = d.y[i] - mu[i];
        double g0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) g0 -= wz[i];
        double res = std::fabs(g0 / dn);
        for (std::size_t j = 0; j < p; ++j) {
            const double gj = -detail::weighted_column_sum(d, profile, j, wz) / dn;
            if (beta[j] == 0.0)
                res = std::max(res, std::max(0.0, std::fabs(gj) - lambda));
            else
                res = std::max(res, std::fabs(gj + lambda * (beta[j] > 0 ? 1.0 : -1.0)));
        }
        return res;
    };

    // Establishes the eta/mu invariant for the starting iterate.
    double objective = objective_at(fit.intercept, fit.beta);
    fit.objective_trace.push_back(objective);

    for (int outer = 0; outer < options.max_iterations; ++outer) {
        fit.outer_iterations = outer + 1;
        // eta and mu already hold the current iterate's state.
        bool overflow = false;
        double sw = 0.0, swz = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(mu[i])) {
                overflow = true;
                break;
            }
            // w_i = mu_i and w_i * z_i = mu_i * eta_i + (y_i - mu_i);
            // the working response never needs an explicit division.
            wz[i] = mu[i] * eta[i] + (d.y[i] - mu[i]);
            sw += mu[i];
            swz += wz[i];
        }
        if (overflow) throw divergence_error("fit_lasso_poisson: linear predictor overflow");
        sw /= dn;
        swz /= dn;

        for (std::size_t j = 0; j < p; ++j) {
            xw[j] = detail::weighted_column_sum(d, profile, j, mu) / dn;
            xwz[j] = detail::weighted_column_sum(d, profile, j, wz) / dn;
            for (std::size_t k = 0; k <= j; ++k)
                gram[j][k] = gram[k][j] = detail::weighted_pair_sum(d, profile, j, k, mu) / dn;
        }

        // Coordinate descent on the penalized weighted least squares model.
        double b0 = fit.intercept;
        std::vector<double> beta = fit.beta;
        for (int pass = 0; pass < 10000; ++pass) {
            double max_delta = 0.0;
            double dot = 0.0;
            for (std::size_t j = 0; j < p; ++j) dot += xw[j] * beta[j];
            const double b0_new = (swz - dot) / sw;
            max_delta = std::max(max_delta, std::fabs(b0_new - b0));
            b0 = b0_new;
            for (std::size_t j = 0; j < p; ++j) {
                const double ajj = gram[j][j];
                double rho = xwz[j] - b0 * xw[j];
                for (std::size_t k = 0; k < p; ++k)
                    if (k != j && beta[k] != 0.0) rho -= gram[j][k] * beta[k];
                const double bj = ajj > 0.0 ? detail::soft_threshold(rho, lambda) / ajj : 0.0;
                max_delta = std::max(max_delta, std::fabs(bj - beta[j]));
                beta[j] = bj;
            }
            if (max_delta < 0.1 * options.tolerance) break;
        }

        // Accept the IRLS step only if the true objective did not increase;
        // otherwise halve towards the previous iterate.
        double cand_obj = objective_at(b0, beta);
        const double allowance = 1e-12 * (1.0 + std::fabs(objective));
        int halvings = 0;
        while (cand_obj > objective + allowance && halvings < 60) {
            b0 = 0.5 * (b0 + fit.intercept);
            for (std::size_t j = 0; j < p; ++j) beta[j] = 0.5 * (beta[j] + fit.beta[j]);
            cand_obj = objective_at(b0, beta);
            ++halvings;
        }
        if (cand_obj > objective + allowance) {
            // No descent direction left in the quadratic model: converged.
            objective_at(fit.intercept, fit.beta);  // restore state at the kept iterate
            fit.kkt_residual = kkt_from_state(fit.beta);
            fit.converged = true;
            break;
        }

        double step = std::fabs(b0 - fit.intercept);
        for (std::size_t j = 0; j < p; ++j)
            step = std::max(step, std::fabs(beta[j] - fit.beta[j]));
        fit.intercept = b0;
        fit.beta = std::move(beta);
        objective = cand_obj;  // eta/mu already hold the accepted iterate
        fit.objective_trace.push_back(objective);

        for (double bj : fit.beta)
            if (std::fabs(bj) > options.divergence_bound)
                throw divergence_error("fit_lasso_poisson: coefficient diverged (|beta| > " +
                                       std::to_string(options.divergence_bound) + ")");

        if (step < options.tolerance) {
            fit.kkt_residual = kkt_from_state(fit.beta);
            if (fit.kkt_residual <= options.kkt_tolerance) {
                fit.converged = true;
                break;
            }
        }
    }

    if (!fit.converged) {
        objective_at(fit.intercept, fit.beta);
        fit.kkt_residual = kkt_from_state(fit.beta);
        if (fit.kkt_residual <= options.kkt_tolerance) {
            fit.converged = true;  // stalled steps but stationarity certified
        } else {
            throw non_convergence_error(
                "fit_lasso_poisson: no convergence after " +
                    std::to_string(fit.outer_iterations) +
                    " iterations (KKT residual " + std::to_string(fit.kkt_residual) + ")",
                fit);
        }
    }
    return fit;
}

inline GlmFit fit_lasso_poisson(const PoissonDesign& d, double lambda,
                                const SolverOptions& options = {},
                                const GlmFit* warm_start = nullptr) {
    return fit_lasso_poisson_profiled(d, detail::profile_design(d), lambda, options,
                                      warm_start);
}

// Mean Poisson deviance of predictions on held-out rows:
// 2 * (y log(y/mu) - (y - mu)), with the y = 0 limit 2 * mu.
inline double poisson_deviance(double y, double mu) {
    if (y == 0.0) return 2.0 * mu;
    return 2.0 * (y * std::log(y / mu) - (y - mu));
}

// Near-equal random fold assignment: shuffled row indices dealt round-robin.
inline std::vector<int> make_folds(std::size_t n_rows, int n_folds, std::uint64_t seed) {
    if (n_folds < 1) throw fold_count_error("make_folds: need at least 1 fold");
    if (static_cast<std::size_t>(n_folds) > n_rows)
        throw fold_count_error("make_folds: more folds than rows");
    std::vector<std::size_t> order(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<int> fold(n_rows);
    for (std::size_t k = 0; k < n_rows; ++k)
        fold[order[k]] = static_cast<int>(k % static_cast<std::size_t>(n_folds));
    return fold;
}

struct CvResult {
    double best_lambda = 0.0;
    std::size_t best_index = 0;
    std::vector<double> mean_deviance;          // per path value
    std::vector<std::vector<double>> fold_deviance;  // [fold][path value]
};

// Cross-validated penalty selection over a fixed descending path. Each fold
// fits the whole path with warm starts; deviations are aggregated in fold
// order so the result is independent of the execution schedule.
inline CvResult cross_validate_lambda(const PoissonDesign& d, const std::vector<double>& path,
                                      const std::vector<int>& fold_of_row, int n_folds,
                                      int threads = 0, const SolverOptions& options = {},
                                      bool one_se_rule = false) {
    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_features();
    if (path.empty()) throw error("cross_validate_lambda: empty path");
    if (fold_of_row.size() != n) throw error("cross_validate_lambda: fold map has wrong size");
    std::vector<std::size_t> fold_sizes(static_cast<std::size_t>(n_folds), 0);
    for (int f : fold_of_row) {
        if (f < 0 || f >= n_folds) throw fold_count_error("cross_validate_lambda: bad fold id");
        ++fold_sizes[static_cast<std::size_t>(f)];
    }
    for (std::size_t f = 0; f < fold_sizes.size(); ++f)
        if (fold_sizes[f] == 0)
            throw fold_count_error("cross_validate_lambda: fold " + std::to_string(f) +
                                   " is empty");

    CvResult cv;
    cv.fold_deviance.assign(static_cast<std::size_t>(n_folds),
                            std::vector<double>(path.size(), 0.0));

    parallel_for(static_cast<std::size_t>(n_folds), threads, [&](std::size_t fold) {
        PoissonDesign train;
        std::vector<std::size_t> held;
        train.columns.resize(p);
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of_row[i] == static_cast<int>(fold)) {
                held.push_back(i);
            } else {
                train.y.push_back(d.y[i]);
                for (std::size_t j = 0; j < p; ++j) train.columns[j].push_back(d.columns[j][i]);
            }
        }

        const auto profile = detail::profile_design(train);
        GlmFit warm;
        bool have_warm = false;
        for (std::size_t k = 0; k < path.size(); ++k) {
            warm = fit_lasso_poisson_profiled(train, profile, path[k], options,
                                              have_warm ? &warm : nullptr);
            have_warm = true;
            double dev = 0.0;
            for (std::size_t i : held) {
                double eta = warm.intercept;
                for (std::size_t j = 0; j < p; ++j)
                    if (warm.beta[j] != 0.0) eta += warm.beta[j] * d.columns[j][i];
                dev += poisson_deviance(d.y[i], std::exp(eta));
            }
            cv.fold_deviance[fold][k] = dev / static_cast<double>(held.size());
        }
    });

    cv.mean_deviance.assign(path.size(), 0.0);
    for (std::size_t f = 0; f < cv.fold_deviance.size(); ++f)
        for (std::size_t k = 0; k < path.size(); ++k)
            cv.mean_deviance[k] += cv.fold_deviance[f][k];
    for (double& v : cv.mean_deviance) v /= static_cast<double>(n_folds);

    // Minimizer; ties resolve to the larger (sparser) lambda. The 1-SE rule
    // walks back to the largest lambda within one standard error.
    std::size_t best = 0;
    for (std::size_t k = 1; k < path.size(); ++k)
        if (cv.mean_deviance[k] < cv.mean_deviance[best]) best = k;
    if (one_se_rule) {
        double var = 0.0;
        for (std::size_t f = 0; f < cv.fold_deviance.size(); ++f) {
            const double diff = cv.fold_deviance[f][best] - cv.mean_deviance[best];
            var += diff * diff;
        }
        const auto nf = static_cast<double>(n_folds);
        const double se = std::sqrt(var / (nf - 1.0)) / std::sqrt(nf);
        for (std::size_t k = 0; k <= best; ++k) {
            if (cv.mean_deviance[k] <= cv.mean_deviance[best] + se) {
                best = k;
                break;
            }
        }
    }
    cv.best_index = best;
    cv.best_lambda = path[best];
    return cv;
}

inline CvResult cross_validate_lambda(const PoissonDesign& d, const std::vector<double>& path,
                                      int n_folds, std::uint64_t seed, int threads = 0,
                                      const SolverOptions& options = {},
                                      bool one_se_rule = false) {
    return cross_validate_lambda(d, path, make_folds(d.n_rows(), n_folds, seed), n_folds,
                                 threads, options, one_se_rule);
}

// ---------------------------------------------------------------------------
// Design construction from a Dataset.

inline constexpr int glm_feature_count = 15;

// Feature layout: standardized own-minus-opponent RPI, standardized game
// possessions, 6 gender-division indicators, overall home indicator, and 6
// home-by-gender-division interactions. All six indicators are kept (no
// reference level) plus the overall home term; the L1 penalty performs the
// selection that the resulting collinearity requires, and the intercept
// absorbs the shared baseline.
inline std::array<std::string, glm_feature_count> glm_feature_names() {
    std::array<std::string, glm_feature_count> names;
    names[0] = "rpi_advantage";
    names[1] = "possessions";
    for (int g = 0; g < 6; ++g) names[static_cast<std::size_t>(2 + g)] = "gd_" + gd_label(all_gender_divisions[static_cast<std::size_t>(g)]);
    names[8] = "home";
    for (int g = 0; g < 6; ++g)
        names[static_cast<std::size_t>(9 + g)] = "home_" + gd_label(all_gender_divisions[static_cast<std::size_t>(g)]);
    return names;
}

// The statistics Table-4-style fits are produced for: count statistics,
// excluding the referee-driven PF/FTA and the derived PTS.
inline constexpr std::array<Stat, 8> glm_eligible_stats = {
    Stat::blk, Stat::ast, Stat::tov, Stat::stl,
    Stat::dreb, Stat::oreb, Stat::tpa_3, Stat::fga,
};

struct GlmDesign {
    Stat stat = Stat::pts;
    std::string season;
    PoissonDesign design;
    double rpi_sd = 1.0;
    double poss_mean = 0.0, poss_sd = 1.0;
    std::array<std::string, glm_feature_count> feature_names = glm_feature_names();
};

// One row of the design, for inspection and invariant checks.
struct DesignRow {
    double y = 0.0;
    double rpi_adv_std = 0.0;
    double possessions = 0.0;  // standardized
    std::array<int, 6> gd_indicators{};
    int home_overall = 0;
    std::array<int, 6> home_by_gd{};
};

inline DesignRow design_row(const GlmDesign& d, std::size_t i) {
    DesignRow r;
    r.y = d.design.y[i];
    r.rpi_adv_std = d.design.columns[0][i];
    r.possessions = d.design.columns[1][i];
    for (int g = 0; g < 6; ++g) {
        r.gd_indicators[static_cast<std::size_t>(g)] =
            d.design.columns[static_cast<std::size_t>(2 + g)][i] != 0.0;
        r.home_by_gd[static_cast<std::size_t>(g)] =
            d.design.columns[static_cast<std::size_t>(9 + g)][i] != 0.0;
    }
    r.home_overall = d.design.columns[8][i] != 0.0;
    return r;
}

// Two rows per home/away game (one per team line), neutral games removed.
// Per-row RPI' is own RPI minus opponent RPI, so the two rows of a game are
// antisymmetric before standardization.
inline GlmDesign build_design(const Dataset& dataset, const std::string& season, Stat stat) {
    if (is_percentage(stat))
        throw unsupported_stat_error("no models for percentage statistics (" +
                                     std::string(stat_name(stat)) + ")");
    if (stat == Stat::pf || stat == Stat::fta)
        throw unsupported_stat_error("referee-driven statistics are excluded (" +
                                     std::string(stat_name(stat)) + ")");

    GlmDesign out;
    out.stat = stat;
    out.season = season;

    std::map<GenderDivision, RpiTable> tables;
    std::vector<const GameRecord*> games;
    for (const GameRecord* g : dataset.by_season(season)) {
        if (g->is_neutral()) continue;
        games.push_back(g);
        if (!tables.count(g->gender_division))
            tables.emplace(g->gender_division, compute_rpi(dataset, season, g->gender_division));
    }
    if (games.empty())
        throw empty_selection_error("build_design: no home/away games in season " + season);

    const std::size_t n = games.size() * 2;
    out.design.y.reserve(n);
    out.design.columns.assign(glm_feature_count, {});
    for (auto& col : out.design.columns) col.reserve(n);

    std::vector<double> rpi_raw, poss_raw;
    rpi_raw.reserve(n);
    poss_raw.reserve(n);
    for (const GameRecord* g : games) {
        const double adv = rpi_advantage(*g, tables.at(g->gender_division)).value;
        const double poss = game_possessions(*g);
        const int home = *g->home_index();
        for (int side = 0; side < 2; ++side) {
            const auto value = stat_value(g->lines[static_cast<std::size_t>(side)], stat);
            out.design.y.push_back(*value);
            rpi_raw.push_back(side == home ? adv : -adv);
            poss_raw.push_back(poss);
            const int gd = gd_index(g->gender_division);
            for (int k = 0; k < 6; ++k)
                out.design.columns[static_cast<std::size_t>(2 + k)].push_back(k == gd ? 1.0 : 0.0);
            const bool is_home = side == home;
            out.design.columns[8].push_back(is_home ? 1.0 : 0.0);
            for (int k = 0; k < 6; ++k)
                out.design.columns[static_cast<std::size_t>(9 + k)].push_back(
                    is_home && k == gd ? 1.0 : 0.0);
        }
    }

    const auto rpi_std = standardize(rpi_raw);
    const auto poss_std = standardize(poss_raw);
    out.rpi_sd = rpi_std.sd;
    out.poss_mean = poss_std.mean;
    out.poss_sd = poss_std.sd;
    out.design.columns[0] = rpi_std.values;
    out.design.columns[1] = poss_std.values;
    return out;
}

// Percent impact of each coefficient: 100 * (e^beta - 1). Sign conventions
// for lower-is-better columns belong to the report layer, not here.
inline std::vector<double> percent_impact(const GlmFit& fit) {
    std::vector<double> out;
    out.reserve(fit.beta.size());
    for (double b : fit.beta) out.push_back(100.0 * (std::exp(b) - 1.0));
    return out;
}

struct FitOptions {
    int cv_folds = 100;
    int path_length = 100;
    double path_min_ratio = 1e-4;
    std::uint64_t seed = 0;
    int threads = 0;
    bool one_se_rule = false;
    SolverOptions solver;
};

struct StatFit {
    Stat stat = Stat::pts;
    bool ok = false;
    std::string error_message;
    GlmFit fit;
    double rpi_sd = 1.0, poss_sd = 1.0;
    std::vector<double> impacts;      // raw percent impacts per feature
    double reported_home_impact = 0;  // overall home column value (TOV flipped)
};

struct FitAllResult {
    std::string season;
    std::vector<StatFit> fits;  // sorted by reported overall home impact, desc
    int cv_folds = 0;
    std::uint64_t seed = 0;
};

// Reported value for a (feature impact, stat) cell: lower-is-better columns
// flip sign so every printed value reads as an improvement.
inline double reported_impact(Stat stat, double raw_percent) {
    return lower_is_better(stat) ? -raw_percent : raw_percent;
}

inline FitAllResult fit_all(const Dataset& dataset, const std::string& season,
                            const FitOptions& options = {}) {
    FitAllResult result;
    result.season = season;
    result.cv_folds = options.cv_folds;
    result.seed = options.seed;

    for (Stat stat : glm_eligible_stats) {
        StatFit sf;
        sf.stat = stat;
        try {
            GlmDesign design = build_design(dataset, season, stat);
            const double lmax = lambda_max(design.design);
            const auto path = make_lambda_path(lmax, options.path_length, options.path_min_ratio);
            const auto folds =
                make_folds(design.design.n_rows(), options.cv_folds, options.seed);
            const auto cv = cross_validate_lambda(design.design, path, folds, options.cv_folds,
                                                  options.threads, options.solver,
                                                  options.one_se_rule);

            // Refit the path on the full data down to the selected lambda.
            GlmFit fit;
            bool have = false;
            for (std::size_t k = 0; k <= cv.best_index; ++k) {
                fit = fit_lasso_poisson(design.design, path[k], options.solver,
                                        have ? &fit : nullptr);
                have = true;
            }
            fit.stat = stat;
            fit.cv_folds = options.cv_folds;
            fit.lambda_path = path;
            fit.cv_deviance_path = cv.mean_deviance;
            sf.fit = std::move(fit);
            sf.rpi_sd = design.rpi_sd;
            sf.poss_sd = design.poss_sd;
            sf.impacts = percent_impact(sf.fit);
            sf.reported_home_impact = reported_impact(stat, sf.impacts[8]);
            sf.ok = true;
        } catch (const error& e) {
            sf.error_message = e.what();
        }
        result.fits.push_back(std::move(sf));
    }

    std::stable_sort(result.fits.begin(), result.fits.end(), [](const StatFit& a,
                                                                const StatFit& b) {
        if (a.ok != b.ok) return a.ok;
        return a.reported_home_impact > b.reported_home_impact;
    });
    return result;
}

// Rows of the printed impact table, in presentation order.
struct FitReportRow {
    std::string label;
    // One cell per fitted stat (fit order); absent = not selected.
    std::vector<std::optional<double>> cells;
};

inline std::vector<FitReportRow> build_fit_report(const FitAllResult& result) {
    std::vector<FitReportRow> rows;
    auto add_row = [&](const std::string& label, auto value_of) {
        FitReportRow row;
        row.label = label;
        for (const StatFit& sf : result.fits) {
            if (!sf.ok) {
                row.cells.emplace_back(std::nullopt);
                continue;
            }
            row.cells.push_back(value_of(sf));
        }
        rows.push_back(std::move(row));
    };

    auto plain_cell = [](const StatFit& sf, std::size_t feature) -> std::optional<double> {
        if (sf.fit.beta[feature] == 0.0) return std::nullopt;  // not selected
        return reported_impact(sf.stat, sf.impacts[feature]);
    };

    add_row("home_overall", [&](const StatFit& sf) { return plain_cell(sf, 8); });
    for (int g = 0; g < 6; ++g)
        add_row("home_" + gd_label(all_gender_divisions[static_cast<std::size_t>(g)]),
                [&, g](const StatFit& sf) { return plain_cell(sf, static_cast<std::size_t>(9 + g)); });
    for (int g = 0; g < 6; ++g)
        add_row("division_" + gd_label(all_gender_divisions[static_cast<std::size_t>(g)]),
                [&, g](const StatFit& sf) { return plain_cell(sf, static_cast<std::size_t>(2 + g)); });
    add_row("rpi_advantage", [&](const StatFit& sf) { return plain_cell(sf, 0); });
    // The possessions row reads as a per-possession effect: the coefficient
    // is rescaled back from standard-deviation units before exponentiating.
    add_row("possessions", [&](const StatFit& sf) -> std::optional<double> {
        if (sf.fit.beta[1] == 0.0) return std::nullopt;
        const double per_possession = sf.fit.beta[1] / sf.poss_sd;
        return reported_impact(sf.stat, 100.0 * (std::exp(per_possession) - 1.0));
    });
    return rows;
}

} // namespace homecourt
