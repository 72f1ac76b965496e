#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace glfock;
    CLI::App app{"glfock: generalized Fock spaces, Bargmann transforms, sigma products and lattice frames"};
    app.require_subcommand(1);

    std::string config;
    cli::Overrides ov;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--out", ov.out, "output file (default stdout)");
        sub->add_option("--format", ov.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { ov.seed = s; },
                                                "seed for randomized checks");
    };

    auto* info = app.add_subcommand("phi-info", "coefficients, order/degree, psi and radius bounds");
    add_common(info);

    std::string suite;
    auto* check = app.add_subcommand("check", "run a property suite; exit 0 iff every assertion holds");
    add_common(check);
    check->add_option("--suite", suite, "moments | duality | bargmann | weierstrass | reproduce")
        ->required()
        ->check(CLI::IsMember({"moments", "duality", "bargmann", "weierstrass", "reproduce"}));

    cli::SweepArgs sweep;
    auto* frames = app.add_subcommand("frames-sweep", "Gabor frame bounds over a range of lattice sizes");
    add_common(frames);
    frames->add_option("--s-min", sweep.s_min, "smallest lattice size");
    frames->add_option("--s-max", sweep.s_max, "largest lattice size");
    frames->add_option("--steps", sweep.steps, "number of sizes, endpoints included");
    frames->add_option("--window-n", sweep.window_n, "Hermite index of the window");

    auto* wtable = app.add_subcommand("weierstrass-table", "|1-E| against |Omega| on a disk grid");
    add_common(wtable);

    auto* dens = app.add_subcommand("density", "upper and lower counting densities of a point set");
    add_common(dens);

    auto* round = app.add_subcommand("bargmann-roundtrip", "sample a Hermite function, transform and invert");
    add_common(round);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kConfig;
    }

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    return cli::guarded(name.c_str(), [&]() -> int {
        const auto cfg = cli::load(config, ov);
        if (sub == info) return cli::phi_info(cfg);
        if (sub == check) return cli::check(cfg, suite);
        if (sub == frames) return cli::frames_sweep(cfg, sweep);
        if (sub == wtable) return cli::weierstrass_table(cfg);
        if (sub == dens) return cli::density_cmd(cfg);
        return cli::bargmann_roundtrip(cfg);
    });
}
