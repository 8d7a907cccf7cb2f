// mcdist: batch front end for frequency-response distortion analysis of
// diffusion-based molecular communication channels.
//
// Exit status: 0 success (an infeasible design is an answer), 2 config
// error, 3 numerical failure.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mcdist/mcdist.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void report(const std::vector<std::filesystem::path>& files) {
    for (const auto& f : files) {
        std::cout << f.string() << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distortion analysis and design of diffusion-based molecular communication channels"};
    app.set_version_flag("--version", std::string(mcdist::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    mcdist::CommandOptions opt;
    std::string out_dir = ".";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario or table config (JSON, // comments allowed)")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Q/R report plus gain and phase-delay curves");
    add_common(analyze);
    analyze->add_option("--points", opt.points, "curve samples (log-spaced over the band)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));

    CLI::App* design = app.add_subcommand("design", "distortion-constrained communication distance bound");
    add_common(design);

    CLI::App* sweep = app.add_subcommand("sweep", "normalized Q/R matrices over (omega1', omega2')");
    add_common(sweep);

    CLI::App* simulate = app.add_subcommand("simulate", "square-wave time traces and activation timing");
    add_common(simulate);
    simulate->add_option("--route", opt.route, "fourier | fdm | both")
        ->check(CLI::IsMember({"fourier", "fdm", "both"}));

    CLI::App* table = app.add_subcommand("table", "highest distortion-free band per molecular species");
    add_common(table);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    opt.out_dir = out_dir;

    try {
        if (table->parsed()) {
            report(mcdist::cmd_table(mcdist::load_table(config_path), opt));
            return 0;
        }
        const mcdist::Scenario sc = mcdist::load_scenario(config_path);
        if (analyze->parsed()) report(mcdist::cmd_analyze(sc, opt));
        if (design->parsed()) report(mcdist::cmd_design(sc, opt));
        if (sweep->parsed()) report(mcdist::cmd_sweep(sc, opt));
        if (simulate->parsed()) report(mcdist::cmd_simulate(sc, opt));
    } catch (const mcdist::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const mcdist::ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
