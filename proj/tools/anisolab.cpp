#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "anisolab/config.hpp"
#include "anisolab/errors.hpp"
#include "anisolab/scenario.hpp"

namespace {

constexpr const char* kUsage =
    "usage: anisolab <subcommand> --config PATH [options]\n"
    "\n"
    "subcommands:\n"
    "  spectrum         truncated transfer-operator eigenvalues\n"
    "  determinant      orbit sums, determinant series, zeros\n"
    "  norm             anisotropic norm of a chosen field\n"
    "  ly-check         contraction constants vs measured growth\n"
    "  lyapunov         Lyapunov exponents along an orbit\n"
    "  pathology        half-plane multiplier blow-up experiments\n"
    "  probe-indicator  indicator-function multiplier probe\n"
    "\n"
    "options:\n"
    "  --config PATH    TOML configuration file (required)\n"
    "  --out DIR        write report.json, tables, and plot data to DIR\n"
    "  --seed U64       override the config seed\n"
    "  --threads N      worker threads (default 1)\n"
    "  --deterministic  byte-stable reports (timings omitted)\n"
    "  --gate           exit 4 when any verdict fails\n"
    "  --plot NAME      print one named plot table to stdout\n"
    "  --help           this message\n";

struct CliArgs {
    std::string subcommand;
    std::string config_path;
    std::string plot;
    aniso::RunOptions run;
    bool help = false;
};

std::uint64_t parse_u64(const std::string& text, const char* flag) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos, 10);
        if (pos != text.size()) throw std::invalid_argument(text);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw aniso::ConfigError(std::string(flag) + " expects an unsigned integer, got '" +
                                 text + "'");
    }
}

CliArgs parse_args(int argc, char** argv) {
    CliArgs args;
    int i = 1;
    if (i < argc && argv[i][0] != '-') {
        args.subcommand = argv[i];
        ++i;
    }
    auto need_value = [&](const char* flag) -> std::string {
        if (i + 1 >= argc) throw aniso::ConfigError(std::string(flag) + " needs a value");
        return argv[++i];
    };
    for (; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--help" || a == "-h") {
            args.help = true;
        } else if (a == "--config") {
            args.config_path = need_value("--config");
        } else if (a == "--out") {
            args.run.out_dir = need_value("--out");
        } else if (a == "--seed") {
            args.run.seed = parse_u64(need_value("--seed"), "--seed");
            args.run.seed_overridden = true;
        } else if (a == "--threads") {
            args.run.threads = static_cast<int>(parse_u64(need_value("--threads"), "--threads"));
            if (args.run.threads < 1) throw aniso::ConfigError("--threads must be >= 1");
        } else if (a == "--deterministic") {
            args.run.deterministic = true;
        } else if (a == "--gate") {
            args.run.gate = true;
        } else if (a == "--plot") {
            args.plot = need_value("--plot");
        } else {
            throw aniso::ConfigError("unknown option '" + a + "'");
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CliArgs args;
    try {
        args = parse_args(argc, argv);
    } catch (const aniso::ConfigError& e) {
        std::fprintf(stderr, "anisolab: %s\n%s", e.what(), kUsage);
        return 2;
    }
    if (args.help || argc <= 1) {
        std::fputs(kUsage, stdout);
        return 0;
    }

    try {
        if (args.subcommand.empty()) {
            throw aniso::ConfigError("missing subcommand");
        }
        if (args.config_path.empty()) {
            throw aniso::ConfigError("missing --config PATH");
        }
        const aniso::ParsedConfig cfg = aniso::load_config_file(args.config_path);
        const aniso::RunReport report =
            aniso::run_scenario(args.subcommand, cfg, args.run);
        if (!args.run.out_dir.empty()) {
            aniso::persist_report(report, args.run.out_dir);
        }
        if (!args.plot.empty()) {
            std::fputs(aniso::export_plot_data(report, args.plot).c_str(), stdout);
        } else if (args.run.out_dir.empty()) {
            std::fputs(report.json.c_str(), stdout);
        }
        for (const aniso::Verdict& v : report.verdicts) {
            std::fprintf(stderr, "[%s] %s: %s\n", v.pass ? "pass" : "FAIL", v.name.c_str(),
                         v.detail.c_str());
        }
        if (args.run.gate && !report.all_passed) {
            std::fprintf(stderr, "anisolab: gate failed\n");
            return 4;
        }
        return 0;
    } catch (const aniso::ConfigError& e) {
        std::fprintf(stderr, "anisolab: config error: %s\n", e.what());
        return 2;
    } catch (const aniso::NumericError& e) {
        std::fprintf(stderr, "anisolab: numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "anisolab: %s\n", e.what());
        return 3;
    }
}
