#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "anisolab/config.hpp"
#include "anisolab/errors.hpp"
#include "anisolab/scenario.hpp"

using namespace aniso;

namespace {
RunOptions det_opts() {
    RunOptions o;
    o.deterministic = true;
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}
}  // namespace

TEST_CASE("lyapunov runs are deterministic and carry verdicts") {
    const ParsedConfig cfg = parse_config_text(
        "[lyapunov]\n"
        "iterations = 4000\n"
        "burn_in = 50\n");
    const RunReport a = run_scenario("lyapunov", cfg, det_opts());
    const RunReport b = run_scenario("lyapunov", cfg, det_opts());
    CHECK(a.json == b.json);
    CHECK(!a.json.empty());
    CHECK(a.subcommand == "lyapunov");
    CHECK(!a.config_hash.empty());
    CHECK(a.config_hash == b.config_hash);
    REQUIRE(!a.verdicts.empty());
    CHECK(a.all_passed);
    // The report embeds the resolved defaults.
    CHECK(a.resolved_config.find("iterations") != std::string::npos);
    CHECK(a.json.find("\"schema\": \"anisolab-report-v1\"") != std::string::npos);
    CHECK(a.json.find("\"deterministic\": true") != std::string::npos);
    // Timings are suppressed in deterministic mode.
    CHECK(a.json.find("timings_ms") == std::string::npos);
}

TEST_CASE("determinant scenario reproduces the closed form and exports tables") {
    const ParsedConfig cfg = parse_config_text(
        "[determinant]\n"
        "n_max = 5\n");
    const RunReport rep = run_scenario("determinant", cfg, det_opts());
    CHECK(rep.all_passed);
    bool saw_sums = false;
    for (const auto& [name, text] : rep.plots) {
        if (name == "sums") saw_sums = true;
        CHECK(!text.empty());
    }
    CHECK(saw_sums);
    CHECK(!export_plot_data(rep, "coefficients").empty());
    CHECK_THROWS_AS((void)export_plot_data(rep, "no-such-table"), ConfigError);

    bool saw_orbit_csv = false;
    for (const auto& [name, text] : rep.files) {
        if (name == "orbit_sums.csv") {
            saw_orbit_csv = true;
            CHECK(text.find("n,") == 0);
        }
    }
    CHECK(saw_orbit_csv);
}

TEST_CASE("seed precedence follows the override flag") {
    const ParsedConfig cfg = parse_config_text("seed = 11\n[lyapunov]\niterations = 500\n");
    RunOptions o = det_opts();
    const RunReport from_config = run_scenario("lyapunov", cfg, o);
    CHECK(from_config.json.find("\"seed\": 11") != std::string::npos);
    o.seed = 99;
    o.seed_overridden = true;
    const RunReport from_cli = run_scenario("lyapunov", cfg, o);
    CHECK(from_cli.json.find("\"seed\": 99") != std::string::npos);
}

TEST_CASE("unknown subcommands and unknown keys are configuration errors") {
    const ParsedConfig cfg = parse_config_text("");
    CHECK_THROWS_AS(run_scenario("does-not-exist", cfg, det_opts()), ConfigError);

    const ParsedConfig typo = parse_config_text("[lyapunov]\niterationz = 10\n");
    CHECK_THROWS_AS(run_scenario("lyapunov", typo, det_opts()), ConfigError);
}

TEST_CASE("reports persist to disk with every declared artifact") {
    const ParsedConfig cfg = parse_config_text("[determinant]\nn_max = 4\n");
    const RunReport rep = run_scenario("determinant", cfg, det_opts());

    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "anisolab_test_persist";
    std::filesystem::remove_all(dir);
    persist_report(rep, dir.string());

    CHECK(slurp(dir / "report.json") == rep.json);
    CHECK(slurp(dir / "resolved_config.toml") == rep.resolved_config);
    for (const auto& [name, text] : rep.files) {
        CHECK(slurp(dir / name) == text);
    }
    for (const auto& [name, text] : rep.plots) {
        CHECK(slurp(dir / (name + ".dat")) == text);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("norm scenario evaluates the single-mode example") {
    const ParsedConfig cfg = parse_config_text(
        "[norm]\n"
        "field = \"mode\"\n"
        "mode = [16, 0]\n"
        "[params]\n"
        "t = 0.5\n"
        "s = -1.0\n"
        "p = 1.0\n"
        "[leaves]\n"
        "count = 3\n"
        "length = 0.5\n");
    const RunReport rep = run_scenario("norm", cfg, det_opts());
    CHECK(rep.all_passed);
    CHECK(rep.json.find("\"argmax_level\": 4") != std::string::npos);
}
