#include <iostream>

#include <CLI11.hpp>

#include "orthantloop/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"One-loop N-point scalar integrals via Gaussian orthant probabilities"};
    app.require_subcommand(1, 1);

    oloop::RunRequest req;
    std::string format = "text";
    double tol = req.quad.rel_tol;
    double contour_c = 0.0;
    long samples = req.mc.samples;
    std::uint64_t seed = req.mc.seed;
    int order = -1;

    const std::pair<const char*, const char*> commands[] = {
        {"compute", "evaluate the integral of a config"},
        {"validate", "run consistency checks (built-in set, or the given config against the oracle)"},
        {"expand", "eps-expansion coefficients of J(d - 2 eps)"},
        {"tensor", "rank-2 five-point reduction into scalar eps series"},
        {"oracle", "brute-force oracle estimates"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", req.config_path, "config file")->check(CLI::ExistingFile);
        sub->add_option("--tol", tol, "relative quadrature tolerance");
        sub->add_option("--mc-samples", samples, "Monte Carlo samples");
        sub->add_option("--seed", seed, "Monte Carlo seed");
        sub->add_option("--order", order, "eps expansion order");
        sub->add_option("--format", format, "text|csv|jsonlines")
            ->check(CLI::IsMember({"text", "csv", "jsonlines"}));
        sub->add_option("--contour-c", contour_c, "abscissa of the outermost contour (0 picks it)");
        sub->add_option("--set", req.overrides, "key=value override of a config entry")->take_all();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        req.command = oloop::parse_command(app.get_subcommands().front()->get_name());
        req.output_format = oloop::parse_format(format);
    } catch (const oloop::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    req.quad.rel_tol = tol;
    req.quad.contour_abscissa_c = contour_c;
    req.mc.samples = samples;
    req.mc.seed = seed;
    if (order >= 0) req.order = order;
    return oloop::run(req, std::cout, std::cerr);
}
