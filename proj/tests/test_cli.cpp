#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "homecourt/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = HOMECOURT_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("homecourt_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

int run_capture(const std::string& args, const std::string& capture_file) {
    const std::string cmd = cli + " " + args + " >" + capture_file + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string simulate_small(const TempDir& dir, const std::string& name = "games.csv",
                           const std::string& extra = "") {
    const std::string out = dir.file(name);
    REQUIRE(run("simulate --out " + out +
                " --seed 5 --teams 10 --games-per-team 16 --gd MD1 --gd WD3 " + extra) == 0);
    return out;
}

} // namespace

TEST_CASE("cli: simulate then validate round trip") {
    TempDir dir;
    const auto games = simulate_small(dir);
    CHECK(fs::exists(games));
    CHECK(fs::exists(games + ".truth.json"));
    CHECK(fs::exists(games + ".manifest.json"));
    CHECK(run("validate --input " + games + " --strict") == 0);
}

TEST_CASE("cli: validate reports and fails strictly on bad rows") {
    TempDir dir;
    const auto games = simulate_small(dir);
    std::string csv = slurp(games);
    const auto pos = csv.find('\n', csv.find('\n') + 1);  // end of first data row
    std::string first_row = csv.substr(csv.find('\n') + 1, pos - csv.find('\n') - 1);
    // Corrupt one numeric cell of the first data row.
    std::string broken = csv;
    broken.replace(broken.find(",H,"), 3, ",Z,");
    const auto bad = dir.file("bad.csv");
    std::ofstream(bad, std::ios::binary) << broken;

    CHECK(run("validate --input " + bad) == 0);
    CHECK(run("validate --input " + bad + " --strict") == 1);

    const auto report = dir.file("report.json");
    CHECK(run("validate --input " + bad + " --report " + report) == 0);
    const auto j = json::parse(slurp(report));
    CHECK(j["errors"].size() >= 1);
}

TEST_CASE("cli: exit codes") {
    TempDir dir;
    CHECK(run("summarize --input /nonexistent.csv --out " + dir.file("x.csv")) == 1);
    CHECK(run("summarize --no-such-flag") == 2);
    CHECK(run("not-a-command") == 2);
    CHECK(run("") == 2);  // missing subcommand
}

TEST_CASE("cli: help lists the documented defaults") {
    TempDir dir;
    const auto help_file = dir.file("help.txt");
    CHECK(run_capture("attendance-test --help", help_file) == 0);
    const auto help = slurp(help_file);
    CHECK(help.find("1000") != std::string::npos);   // iterations
    CHECK(help.find("0.05") != std::string::npos);   // family alpha
    CHECK(help.find("25") != std::string::npos);     // bins

    CHECK(run_capture("fit --help", help_file) == 0);
    const auto fit_help = slurp(help_file);
    CHECK(fit_help.find("100") != std::string::npos);  // folds and path length
}

TEST_CASE("cli: summarize CSV and JSON") {
    TempDir dir;
    const auto games = simulate_small(dir);
    const auto out_csv = dir.file("summary.csv");
    REQUIRE(run("summarize --input " + games + " --out " + out_csv) == 0);
    const auto csv = slurp(out_csv);
    CHECK(csv.rfind("stat,gender,division,season,comparison,value,n_games\n", 0) == 0);
    CHECK(csv.find("AST") != std::string::npos);
    CHECK(fs::exists(out_csv + ".manifest.json"));

    const auto out_json = dir.file("summary.json");
    REQUIRE(run("summarize --input " + games + " --out " + out_json + " --json --plot-data") ==
            0);
    const auto j = json::parse(slurp(out_json));
    REQUIRE(j.is_array());
    bool pooled = false;
    for (const auto& row : j) pooled |= row["season"] == "all";
    CHECK(pooled);
}

TEST_CASE("cli: attendance-test output, formatting and replay") {
    TempDir dir;
    const auto games = simulate_small(dir);
    const auto out = dir.file("table.csv");
    const std::string args = "attendance-test --input " + games + " --out " + out +
                             " --iterations 12 --seed 9 --threads 2";
    REQUIRE(run(args) == 0);
    const auto table = slurp(out);
    CHECK(table.find("row_type,stat,overall,MD1,MD1_sig,WD3,WD3_sig") == 0);
    CHECK(table.find("cutoff_low") != std::string::npos);
    CHECK(table.find("cutoff_high") != std::string::npos);
    CHECK(table.find("e-0") != std::string::npos);  // scientific p-values

    // Byte-identical replay from the manifest's recorded argv.
    const auto manifest = json::parse(slurp(out + ".manifest.json"));
    CHECK(manifest["command"] == "attendance-test");
    CHECK(manifest["seed"] == 9);
    std::string replay_args;
    const auto& argv = manifest["argv"];
    for (std::size_t i = 1; i < argv.size(); ++i) {
        replay_args += std::string(argv[i]);
        replay_args += ' ';
    }
    const auto first = table;
    REQUIRE(run(replay_args) == 0);
    CHECK(slurp(out) == first);

    // Thread count must not change the bytes.
    REQUIRE(run("attendance-test --input " + games + " --out " + out +
                " --iterations 12 --seed 9 --threads 1") == 0);
    CHECK(slurp(out) == first);

    const auto out_json = dir.file("table.json");
    REQUIRE(run("attendance-test --input " + games + " --out " + out_json +
                " --iterations 12 --seed 9 --json") == 0);
    const auto j = json::parse(slurp(out_json));
    CHECK(j["n_tests"] == 28);  // 14 stats x 2 simulated pools
    CHECK(j["cells"].size() == 28);
}

TEST_CASE("cli: omitted seed is generated and recorded") {
    TempDir dir;
    const auto games = simulate_small(dir);
    const auto out = dir.file("t.csv");
    const auto echo = dir.file("stdout.txt");
    REQUIRE(run_capture("attendance-test --input " + games + " --out " + out +
                        " --iterations 5",
                        echo) == 0);
    CHECK(slurp(echo).find("seed:") != std::string::npos);
    const auto manifest = json::parse(slurp(out + ".manifest.json"));
    CHECK(manifest["seed"].get<std::uint64_t>() != 0);
}

TEST_CASE("cli: match-diagnose emits the three-distribution summary") {
    TempDir dir;
    const auto games = simulate_small(dir);
    const auto out = dir.file("diag.json");
    REQUIRE(run("match-diagnose --input " + games + " --out " + out +
                " --gender M --division 1 --seed 4") == 0);
    const auto j = json::parse(slurp(out));
    CHECK(j["bin_edges"].size() == 26);
    CHECK(j["low_bin_counts"].size() == 25);
    CHECK(j["matched_bin_counts"].size() == 25);
    CHECK(j.contains("pre_ks"));
    CHECK(j.contains("post_ks"));
    CHECK(j["distributions"]["low"]["values"].size() > 0);
    CHECK(j["distributions"]["matched_high"]["values"].size() > 0);
}

TEST_CASE("cli: fit produces the impact table and sidecar") {
    TempDir dir;
    const auto games = simulate_small(dir, "games.csv", "--home-mult BLK=1.2");
    const auto out = dir.file("impacts.csv");
    REQUIRE(run("fit --input " + games + " --out " + out +
                " --folds 4 --path-length 10 --seed 2 --threads 2") == 0);
    const auto table = slurp(out);
    CHECK(table.rfind("feature,", 0) == 0);
    CHECK(table.find("BLK") != std::string::npos);
    CHECK(table.find("home_overall") != std::string::npos);
    CHECK(table.find("possessions") != std::string::npos);

    const auto sidecar = json::parse(slurp(out + ".fits.json"));
    CHECK(sidecar["fits"].size() == 8);
    for (const auto& f : sidecar["fits"]) {
        CHECK(f["ok"] == true);
        CHECK(f["kkt_residual"].get<double>() <= 1e-6);
    }
}

TEST_CASE("cli: output directory env override") {
    TempDir dir;
    const auto games = simulate_small(dir);
    const auto subdir = dir.file("outputs");
    fs::create_directories(subdir);
    const std::string cmd = "HOMECOURT_OUT_DIR=" + subdir + " " + cli + " summarize --input " +
                            games + " --out rel.csv >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(subdir + "/rel.csv"));
    CHECK(fs::exists(subdir + "/rel.csv.manifest.json"));
}
