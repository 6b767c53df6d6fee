// Command-line front end: wires ingestion, metrics, matching, inference,
// regression and simulation into reproducible batch runs. Every run writes a
// manifest; re-running the recorded argv reproduces the outputs byte for
// byte. Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homecourt/format.hpp"
#include "homecourt/homecourt.hpp"

namespace hc = homecourt;
using nlohmann::json;

namespace {

// The output directory can be overridden by environment variable only.
std::string out_path(const std::string& path) {
    const char* dir = std::getenv("HOMECOURT_OUT_DIR");
    if (!dir || !*dir || path.empty() || path.front() == '/') return path;
    std::string joined(dir);
    if (joined.back() != '/') joined += '/';
    return joined + path;
}

// Round through the presentation format so JSON and CSV agree on digits.
double round6(double v) { return std::strtod(hc::fmt_value(v).c_str(), nullptr); }
double round_p(double v) { return std::strtod(hc::fmt_pvalue(v).c_str(), nullptr); }

std::string signed_pvalue(int sign, double mean_abs_p) {
    std::string s = hc::fmt_pvalue(mean_abs_p);
    return sign < 0 ? "-" + s : s;
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return s ? s : 1;
}

struct ManifestWriter {
    std::string command;
    std::vector<std::string> argv;
    std::vector<std::string> inputs;
    json parameters;
    std::uint64_t seed = 0;
    std::string path;

    void write() const {
        hc::RunManifest m;
        m.command = command;
        m.argv = argv;
        for (const std::string& in : inputs) m.input_hashes[in] = hc::hash_file(in);
        m.parameters = parameters;
        m.seed = seed;
        hc::write_manifest(m, out_path(path));
    }
};

hc::Dataset load_dataset(const std::string& input) {
    auto result = hc::parse_dataset_file(input, /*strict=*/false);
    if (!result.errors.empty())
        std::cerr << "note: " << result.errors.size() << " row(s) skipped during ingestion\n";
    if (result.dataset.empty()) throw hc::error("no valid games in " + input);
    return std::move(result.dataset);
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(out_path(path), std::ios::binary);
    if (!out) throw hc::error("cannot open output file: " + path);
    out << body;
}

std::string gender_code(hc::Gender g) { return g == hc::Gender::men ? "M" : "W"; }

// ---------------------------------------------------------------------- //

int run_validate(const std::string& input, bool strict, const std::string& report_path,
                 ManifestWriter manifest) {
    auto result = hc::parse_dataset_file(input, /*strict=*/false);
    std::cout << "games: " << result.dataset.size() << "\n"
              << "row errors: " << result.errors.size() << "\n"
              << "warnings: " << result.warnings.size() << "\n";
    for (const auto& e : result.errors)
        std::cout << "error row " << e.row << ": " << e.message << "\n";
    for (const auto& w : result.warnings)
        std::cout << "warning row " << w.row << ": " << w.message << "\n";

    if (!report_path.empty()) {
        json j;
        j["games"] = result.dataset.size();
        j["errors"] = json::array();
        for (const auto& e : result.errors)
            j["errors"].push_back({{"row", e.row}, {"message", e.message}});
        j["warnings"] = json::array();
        for (const auto& w : result.warnings)
            j["warnings"].push_back({{"row", w.row}, {"message", w.message}});
        write_text_file(report_path, j.dump(2) + "\n");
    }
    manifest.write();
    if (strict && !result.errors.empty()) {
        std::cerr << "strict validation failed\n";
        return 1;
    }
    return 0;
}

int run_summarize(const std::string& input, const std::string& out, bool as_json,
                  bool plot_data, const std::string& rpi_out, ManifestWriter manifest) {
    const auto dataset = load_dataset(input);
    const auto rows = hc::summarize(dataset, /*pool_seasons=*/plot_data);

    if (!rpi_out.empty()) {
        std::ostringstream csv;
        csv << "team_id,season,wp,owp,oowp,rpi\n";
        for (const std::string& season : dataset.seasons())
            for (hc::GenderDivision gd : dataset.gender_divisions()) {
                bool any = false;
                for (const auto* g : dataset.select(season, gd)) {
                    (void)g;
                    any = true;
                    break;
                }
                if (any) hc::write_rpi_csv_rows(hc::compute_rpi(dataset, season, gd), csv);
            }
        write_text_file(rpi_out, csv.str());
    }

    if (as_json) {
        json j = json::array();
        for (const auto& r : rows) {
            j.push_back({{"stat", hc::stat_name(r.stat)},
                         {"gender", gender_code(r.gender_division.gender)},
                         {"division", static_cast<int>(r.gender_division.division)},
                         {"season", r.season},
                         {"comparison", hc::comparison_name(r.comparison)},
                         {"value", round6(r.value)},
                         {"n_games", r.n_games}});
        }
        write_text_file(out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "stat,gender,division,season,comparison,value,n_games\n";
        for (const auto& r : rows) {
            csv << hc::stat_name(r.stat) << ',' << gender_code(r.gender_division.gender) << ','
                << static_cast<int>(r.gender_division.division) << ',' << r.season << ','
                << hc::comparison_name(r.comparison) << ',' << hc::fmt_value(r.value) << ','
                << r.n_games << '\n';
        }
        write_text_file(out, csv.str());
    }
    manifest.write();
    return 0;
}

int run_attendance_test(const std::string& input, const std::string& out, bool as_json,
                        int iterations, double alpha_family, int bins, std::uint64_t seed,
                        int threads, ManifestWriter manifest) {
    const auto dataset = load_dataset(input);
    const auto table =
        hc::attendance_test_table(dataset, iterations, alpha_family, seed, bins, threads);

    const std::size_t n_gds = table.gds.size();
    auto cell_at = [&](std::size_t stat_idx, std::size_t g) -> const hc::AttendanceCell& {
        return table.cells[stat_idx * n_gds + g];
    };
    // Overall column: mean magnitude across the gender-divisions.
    std::vector<double> overall(hc::all_stats.size(), 0.0);
    std::vector<bool> overall_ok(hc::all_stats.size(), false);
    for (std::size_t s = 0; s < hc::all_stats.size(); ++s) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t g = 0; g < n_gds; ++g)
            if (cell_at(s, g).ok) {
                sum += cell_at(s, g).result.mean_abs_p;
                ++n;
            }
        if (n > 0) {
            overall[s] = sum / n;
            overall_ok[s] = true;
        }
    }
    std::vector<std::size_t> stat_order(hc::all_stats.size());
    for (std::size_t s = 0; s < stat_order.size(); ++s) stat_order[s] = s;
    std::stable_sort(stat_order.begin(), stat_order.end(), [&](std::size_t a, std::size_t b) {
        if (overall_ok[a] != overall_ok[b]) return static_cast<bool>(overall_ok[a]);
        return overall[a] < overall[b];
    });

    if (as_json) {
        json j;
        j["iterations"] = table.iterations;
        j["family_alpha"] = table.family_alpha;
        j["alpha"] = round_p(table.alpha);
        j["n_tests"] = table.n_tests;
        j["cutoffs"] = json::array();
        for (const auto& c : table.cutoffs)
            j["cutoffs"].push_back({{"gender_division", hc::gd_label(c.gender_division)},
                                    {"low", c.low_cutoff},
                                    {"high", c.high_cutoff}});
        j["cells"] = json::array();
        for (std::size_t s : stat_order) {
            for (std::size_t g = 0; g < n_gds; ++g) {
                const auto& cell = cell_at(s, g);
                json c{{"stat", hc::stat_name(hc::all_stats[s])},
                       {"gender_division", hc::gd_label(table.gds[g])}};
                if (cell.ok) {
                    c["signed_mean_p"] = round_p(cell.result.sign * cell.result.mean_abs_p);
                    c["mean_abs_p"] = round_p(cell.result.mean_abs_p);
                    c["sign"] = cell.result.sign;
                    c["significant"] = cell.result.significant;
                    c["iterations"] = cell.result.iterations;
                    c["skipped"] = cell.result.skipped;
                } else {
                    c["error"] = cell.error_message;
                }
                j["cells"].push_back(std::move(c));
            }
        }
        write_text_file(out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "row_type,stat,overall";
        for (const auto& gd : table.gds)
            csv << ',' << hc::gd_label(gd) << ',' << hc::gd_label(gd) << "_sig";
        csv << '\n';
        csv << "cutoff_low,,";
        for (const auto& c : table.cutoffs) csv << ',' << c.low_cutoff << ',';
        csv << '\n';
        csv << "cutoff_high,,";
        for (const auto& c : table.cutoffs) csv << ',' << c.high_cutoff << ',';
        csv << '\n';
        for (std::size_t s : stat_order) {
            csv << "pvalue," << hc::stat_name(hc::all_stats[s]) << ','
                << (overall_ok[s] ? hc::fmt_pvalue(overall[s]) : "");
            for (std::size_t g = 0; g < n_gds; ++g) {
                const auto& cell = cell_at(s, g);
                if (cell.ok)
                    csv << ',' << signed_pvalue(cell.result.sign, cell.result.mean_abs_p) << ','
                        << (cell.result.significant ? 1 : 0);
                else
                    csv << ",,";
            }
            csv << '\n';
        }
        write_text_file(out, csv.str());
    }
    manifest.write();
    return 0;
}

int run_match_diagnose(const std::string& input, const std::string& out, const std::string& gender,
                       int division, int bins, std::uint64_t seed, ManifestWriter manifest) {
    const auto dataset = load_dataset(input);
    hc::GenderDivision gd{gender == "M" ? hc::Gender::men : hc::Gender::women,
                          static_cast<hc::Division>(division)};
    const auto ctx = hc::build_match_context(dataset, gd);

    auto values = [](const std::vector<hc::GameRpi>& games) {
        std::vector<double> v;
        v.reserve(games.size());
        for (const auto& g : games) v.push_back(g.rpi_advantage);
        return v;
    };
    const auto low_values = values(ctx.low);
    const auto high_values = values(ctx.high);
    const auto pre = hc::ks_two_sample(low_values, high_values);
    const auto matched = hc::match_rpi(gd, ctx.low, ctx.high, bins, seed);
    const auto matched_values = values(matched.high_matched);
    const auto post = hc::ks_two_sample(low_values, matched_values);

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    auto rounded = [](const std::vector<double>& v) {
        json arr = json::array();
        for (double x : v) arr.push_back(round6(x));
        return arr;
    };

    json j;
    j["gender_division"] = hc::gd_label(gd);
    j["cutoffs"] = {{"low", ctx.cutoffs.low_cutoff}, {"high", ctx.cutoffs.high_cutoff}};
    j["seed"] = seed;
    j["bin_edges"] = rounded(matched.bin_edges);
    j["low_bin_counts"] = matched.low_bin_counts;
    j["matched_bin_counts"] = matched.matched_bin_counts;
    j["pre_ks"] = {{"statistic", round6(pre.statistic)},
                   {"p_value", round_p(pre.p_value)},
                   {"n1", pre.n1},
                   {"n2", pre.n2}};
    j["post_ks"] = {{"statistic", round6(post.statistic)},
                    {"p_value", round_p(post.p_value)},
                    {"n1", post.n1},
                    {"n2", post.n2}};
    j["distributions"] = {
        {"low", {{"mean", round6(mean_of(low_values))}, {"values", rounded(low_values)}}},
        {"high", {{"mean", round6(mean_of(high_values))}, {"values", rounded(high_values)}}},
        {"matched_high",
         {{"mean", round6(mean_of(matched_values))}, {"values", rounded(matched_values)}}}};
    write_text_file(out, j.dump(2) + "\n");
    manifest.write();
    return 0;
}

int run_fit(const std::string& input, const std::string& out, bool as_json,
            const std::string& season_flag, int folds, int path_length, double min_ratio,
            bool one_se, std::uint64_t seed, int threads, const std::string& sidecar,
            ManifestWriter manifest) {
    const auto dataset = load_dataset(input);

    std::string season = season_flag;
    if (season.empty()) {
        const auto seasons = dataset.seasons();
        if (seasons.size() != 1)
            throw hc::error("--season is required when the input has multiple seasons");
        season = seasons.front();
    }

    hc::FitOptions options;
    options.cv_folds = folds;
    options.path_length = path_length;
    options.path_min_ratio = min_ratio;
    options.one_se_rule = one_se;
    options.seed = seed;
    options.threads = threads;
    const auto result = hc::fit_all(dataset, season, options);
    const auto report = hc::build_fit_report(result);

    if (as_json) {
        json j;
        j["season"] = season;
        j["stats"] = json::array();
        for (const auto& sf : result.fits) j["stats"].push_back(hc::stat_name(sf.stat));
        j["rows"] = json::array();
        for (const auto& row : report) {
            json cells = json::array();
            for (const auto& cell : row.cells)
                cells.push_back(cell ? json(round6(*cell)) : json(nullptr));
            j["rows"].push_back({{"feature", row.label}, {"impacts", std::move(cells)}});
        }
        write_text_file(out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "feature";
        for (const auto& sf : result.fits) csv << ',' << hc::stat_name(sf.stat);
        csv << '\n';
        for (const auto& row : report) {
            csv << row.label;
            for (const auto& cell : row.cells) {
                csv << ',';
                if (cell) csv << hc::fmt_value(*cell);
            }
            csv << '\n';
        }
        write_text_file(out, csv.str());
    }

    if (!sidecar.empty()) {
        json j;
        j["season"] = season;
        j["cv_folds"] = folds;
        j["seed"] = seed;
        j["fits"] = json::array();
        const auto names = hc::glm_feature_names();
        for (const auto& sf : result.fits) {
            json f{{"stat", hc::stat_name(sf.stat)}, {"ok", sf.ok}};
            if (sf.ok) {
                f["lambda"] = sf.fit.lambda;
                f["intercept"] = sf.fit.intercept;
                f["kkt_residual"] = sf.fit.kkt_residual;
                f["converged"] = sf.fit.converged;
                f["outer_iterations"] = sf.fit.outer_iterations;
                json coef;
                for (std::size_t k = 0; k < names.size(); ++k) coef[names[k]] = sf.fit.beta[k];
                f["coefficients"] = std::move(coef);
                f["lambda_path"] = sf.fit.lambda_path;
                f["cv_deviance_path"] = sf.fit.cv_deviance_path;
            } else {
                f["error"] = sf.error_message;
            }
            j["fits"].push_back(std::move(f));
        }
        write_text_file(sidecar, j.dump(2) + "\n");
    }
    manifest.write();
    return 0;
}

struct SimulateArgs {
    std::string out, truth;
    std::uint64_t seed = 0;
    int seasons = 1;
    int teams = 0;
    int games_per_team = 0;
    double neutral_frac = -1.0;
    std::vector<std::string> home_mults;
    double referee_slope = 0.0;
    bool overdispersed = false;
    std::vector<std::string> gds;
};

int run_simulate(const SimulateArgs& args, ManifestWriter manifest) {
    hc::LeagueConfig cfg = hc::default_league_config();
    cfg.seed = args.seed;

    cfg.seasons.clear();
    for (int i = 0; i < args.seasons; ++i) {
        const int year = 2011 + i;
        char buf[16];
        std::snprintf(buf, sizeof buf, "%d-%02d", year, (year + 1) % 100);
        cfg.seasons.push_back(buf);
    }

    if (!args.gds.empty()) {
        std::map<hc::GenderDivision, hc::GdProfile> keep;
        for (const std::string& label : args.gds) {
            const auto gd = hc::parse_gd_label(label);
            keep[gd] = cfg.profiles.at(gd);
        }
        cfg.profiles = std::move(keep);
    }
    for (auto& [gd, profile] : cfg.profiles) {
        if (args.teams > 0) profile.n_teams = args.teams;
        if (args.games_per_team > 0) profile.games_per_team = args.games_per_team;
    }
    if (args.neutral_frac >= 0.0) cfg.neutral_fraction = args.neutral_frac;
    cfg.overdispersed = args.overdispersed;
    cfg.bias.attendance_referee_slope = args.referee_slope;
    for (const std::string& spec : args.home_mults) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw hc::config_error("--home-mult expects STAT=VALUE, got '" + spec + "'");
        const auto stat = hc::parse_stat(spec.substr(0, eq));
        if (!stat) throw hc::config_error("unknown statistic '" + spec.substr(0, eq) + "'");
        cfg.bias.home_multipliers[*stat] = std::strtod(spec.c_str() + eq + 1, nullptr);
    }

    const auto league = hc::generate_league(cfg);
    hc::write_dataset_file(league.dataset, out_path(args.out));

    json truth;
    truth["seed"] = cfg.seed;
    truth["seasons"] = cfg.seasons;
    truth["pace_mean"] = cfg.pace_mean;
    truth["pace_sd"] = cfg.pace_sd;
    truth["strength_sd"] = cfg.strength_sd;
    truth["neutral_fraction"] = cfg.neutral_fraction;
    truth["overdispersed"] = cfg.overdispersed;
    truth["bias"] = {{"attendance_referee_slope", cfg.bias.attendance_referee_slope},
                     {"vanish_at_neutral", cfg.bias.vanish_at_neutral}};
    for (const auto& [stat, mult] : cfg.bias.home_multipliers)
        truth["bias"]["home_multipliers"][std::string(hc::stat_name(stat))] = mult;
    for (const auto& [gd, profile] : cfg.profiles) {
        json p{{"teams", profile.n_teams},
               {"games_per_team", profile.games_per_team},
               {"attendance_base", profile.attendance_base},
               {"attendance_sigma", profile.attendance_sigma},
               {"attendance_strength_coupling", profile.attendance_strength_coupling}};
        truth["profiles"][hc::gd_label(gd)] = std::move(p);
    }
    for (const auto& [gd, teams] : league.truth.strengths)
        for (const auto& [team, theta] : teams)
            truth["strengths"][hc::gd_label(gd)][team] = theta;
    write_text_file(args.truth, truth.dump(2) + "\n");

    std::cout << "games: " << league.dataset.size() << "\nseed: " << cfg.seed << "\n";
    manifest.write();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"homecourt: home-court effect analysis for basketball box scores"};
    app.require_subcommand(1);

    std::vector<std::string> raw_args(argv, argv + argc);

    std::string input, out, report, season, gender = "W", sidecar, manifest_path;
    bool strict = false, as_json = false, plot_data = false, one_se = false;
    int iterations = 1000, bins = 25, folds = 100, path_length = 100, division = 1, threads = 0;
    double alpha_family = 0.05, min_ratio = 1e-4;
    std::optional<std::uint64_t> seed;
    SimulateArgs sim;

    auto* validate = app.add_subcommand("validate", "Parse and validate a games file");
    validate->add_option("--input", input, "Games CSV")->required();
    validate->add_flag("--strict", strict, "Fail if any row is invalid");
    validate->add_option("--report", report, "Write a JSON validation report");
    validate->add_option("--manifest", manifest_path, "Manifest path");

    auto* summarize = app.add_subcommand("summarize", "Percent-increase tables by location role");
    summarize->add_option("--input", input, "Games CSV")->required();
    summarize->add_option("--out", out, "Output table path")->required();
    summarize->add_flag("--json", as_json, "Emit JSON instead of CSV (default CSV)");
    summarize->add_flag("--plot-data", plot_data,
                        "Include season-pooled rows (long-format plotting table)");
    summarize->add_option("--rpi-out", rpi_out, "Also export per-season RPI tables (CSV)");
    summarize->add_option("--manifest", manifest_path, "Manifest path");

    auto* attendance =
        app.add_subcommand("attendance-test", "Attendance effect on home advantage");
    attendance->add_option("--input", input, "Games CSV")->required();
    attendance->add_option("--out", out, "Output table path")->required();
    attendance->add_flag("--json", as_json, "Emit JSON instead of CSV (default CSV)");
    attendance->add_option("--iterations", iterations, "Matching iterations per test")
        ->default_val(1000);
    attendance->add_option("--alpha-family", alpha_family, "Family-wise significance level")
        ->default_val(0.05);
    attendance->add_option("--bins", bins, "Matching bins")->default_val(25);
    attendance->add_option("--seed", seed, "Master seed (generated and recorded if omitted)");
    attendance->add_option("--threads", threads, "Parallelism cap, 0 = auto")->default_val(0);
    attendance->add_option("--manifest", manifest_path, "Manifest path");

    auto* diagnose = app.add_subcommand("match-diagnose", "Matching quality for one pool");
    diagnose->add_option("--input", input, "Games CSV")->required();
    diagnose->add_option("--out", out, "Output JSON path")->required();
    diagnose->add_option("--gender", gender, "W or M")->check(CLI::IsMember({"W", "M"}))
        ->required();
    diagnose->add_option("--division", division, "1, 2 or 3")->check(CLI::Range(1, 3))
        ->required();
    diagnose->add_option("--bins", bins, "Matching bins")->default_val(25);
    diagnose->add_option("--seed", seed, "Master seed (generated and recorded if omitted)");
    diagnose->add_option("--manifest", manifest_path, "Manifest path");

    auto* fit = app.add_subcommand("fit", "Penalized Poisson regressions per statistic");
    fit->add_option("--input", input, "Games CSV")->required();
    fit->add_option("--out", out, "Output table path")->required();
    fit->add_flag("--json", as_json, "Emit JSON instead of CSV (default CSV)");
    fit->add_option("--season", season, "Season to fit (required for multi-season inputs)");
    fit->add_option("--folds", folds, "Cross-validation folds")->default_val(100);
    fit->add_option("--path-length", path_length, "Penalty path length")->default_val(100);
    fit->add_option("--min-ratio", min_ratio, "Smallest penalty as a fraction of the maximum")
        ->default_val(1e-4);
    fit->add_flag("--one-se", one_se, "Select penalty by the one-standard-error rule");
    fit->add_option("--seed", seed, "Master seed (generated and recorded if omitted)");
    fit->add_option("--threads", threads, "Parallelism cap, 0 = auto")->default_val(0);
    fit->add_option("--sidecar", sidecar, "Fit detail JSON (default: <out>.fits.json)");
    fit->add_option("--manifest", manifest_path, "Manifest path");

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic league");
    simulate->add_option("--out", sim.out, "Games CSV to write")->required();
    simulate->add_option("--truth", sim.truth, "Ground truth JSON (default: <out>.truth.json)");
    simulate->add_option("--seed", seed, "Master seed (generated and recorded if omitted)");
    simulate->add_option("--seasons", sim.seasons, "Number of seasons")->default_val(1);
    simulate->add_option("--teams", sim.teams, "Teams per gender-division (0 = defaults)")
        ->default_val(0);
    simulate->add_option("--games-per-team", sim.games_per_team,
                         "Games per team per season (0 = defaults)")
        ->default_val(0);
    simulate->add_option("--neutral-frac", sim.neutral_frac,
                         "Neutral-site fraction (default 0.075)");
    simulate->add_option("--home-mult", sim.home_mults,
                         "Home bias multiplier, STAT=VALUE (repeatable)");
    simulate->add_option("--referee-slope", sim.referee_slope,
                         "Home PF/FTA log-rate change per 1000 attendance")
        ->default_val(0.0);
    simulate->add_flag("--overdispersed", sim.overdispersed, "Gamma-mixed count rates");
    simulate->add_option("--gd", sim.gds, "Restrict to gender-divisions, e.g. MD1 (repeatable)");
    simulate->add_option("--manifest", manifest_path, "Manifest path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();

        const bool stochastic = name == "attendance-test" || name == "match-diagnose" ||
                                name == "fit" || name == "simulate";
        const std::uint64_t run_seed = stochastic ? seed.value_or(fresh_seed()) : 0;
        if (stochastic && !seed.has_value()) std::cout << "seed: " << run_seed << "\n";

        ManifestWriter manifest;
        manifest.command = name;
        manifest.argv = raw_args;
        manifest.seed = run_seed;
        if (!input.empty()) manifest.inputs.push_back(input);
        const std::string primary = name == "simulate" ? sim.out : (out.empty() ? name : out);
        manifest.path = manifest_path.empty() ? primary + ".manifest.json" : manifest_path;

        if (name == "validate") {
            manifest.parameters = {{"input", input}, {"strict", strict}};
            return run_validate(input, strict, report, std::move(manifest));
        }
        if (name == "summarize") {
            manifest.parameters = {{"input", input},
                                   {"out", out},
                                   {"json", as_json},
                                   {"plot_data", plot_data}};
            return run_summarize(input, out, as_json, plot_data, std::move(manifest));
        }
        if (name == "attendance-test") {
            manifest.parameters = {{"input", input},       {"out", out},
                                   {"json", as_json},      {"iterations", iterations},
                                   {"alpha_family", alpha_family}, {"bins", bins},
                                   {"threads", threads}};
            return run_attendance_test(input, out, as_json, iterations, alpha_family, bins,
                                       run_seed, threads, std::move(manifest));
        }
        if (name == "match-diagnose") {
            manifest.parameters = {{"input", input},
                                   {"out", out},
                                   {"gender", gender},
                                   {"division", division},
                                   {"bins", bins}};
            return run_match_diagnose(input, out, gender, division, bins, run_seed,
                                      std::move(manifest));
        }
        if (name == "fit") {
            if (sidecar.empty()) sidecar = out + ".fits.json";
            manifest.parameters = {{"input", input},     {"out", out},
                                   {"json", as_json},    {"season", season},
                                   {"folds", folds},     {"path_length", path_length},
                                   {"min_ratio", min_ratio}, {"one_se", one_se},
                                   {"threads", threads}, {"sidecar", sidecar}};
            return run_fit(input, out, as_json, season, folds, path_length, min_ratio, one_se,
                           run_seed, threads, sidecar, std::move(manifest));
        }
        if (name == "simulate") {
            sim.seed = run_seed;
            if (sim.truth.empty()) sim.truth = sim.out + ".truth.json";
            manifest.parameters = {{"out", sim.out},
                                   {"truth", sim.truth},
                                   {"seasons", sim.seasons},
                                   {"teams", sim.teams},
                                   {"games_per_team", sim.games_per_team},
                                   {"neutral_frac", sim.neutral_frac},
                                   {"referee_slope", sim.referee_slope},
                                   {"overdispersed", sim.overdispersed},
                                   {"home_mult", sim.home_mults},
                                   {"gd", sim.gds}};
            return run_simulate(sim, std::move(manifest));
        }
        throw hc::error("unknown subcommand: " + name);
    } catch (const hc::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
