#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nlstab/report.hpp"

int main(int argc, char** argv) {
    nlstab::RunConfig config;
    CLI::App app{"Stability thresholds and energy checks for attractive-repulsive power-law energies"};
    app.require_subcommand(1);

    double gamma = 0.0;
    double mass = 0.0;
    int k_max = 0;
    std::string format;
    std::string out;

    const char* commands[][2] = {
        {"thresholds", "stability thresholds and regime"},
        {"spectrum", "eigenvalues, ratio sequence and X_k"},
        {"potential", "potential of the unit ball on a radial grid"},
        {"verify", "run the verification suite"},
        {"fuglede", "energy change along a harmonic mode"},
        {"counterexample", "search for a mass transfer lowering the energy"},
        {"mass-report", "thresholds and stability class in terms of the mass"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--d", config.d, "dimension")->capture_default_str();
        sub->add_option("--alpha", config.alpha, "repulsive exponent")->capture_default_str();
        sub->add_option("--beta", config.beta, "attractive exponent")->capture_default_str();
        auto* g = sub->add_option("--gamma", gamma, "attraction strength");
        auto* m = sub->add_option("--mass", mass, "mass");
        g->excludes(m);
        sub->add_option("--kmax", k_max, "largest degree");
        sub->add_option("--tol", config.tol, "tolerance")->capture_default_str();
        sub->add_option("--samples", config.samples, "Monte Carlo samples")->capture_default_str();
        sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out, "output file (default stdout)");
        sub->add_option("--degree", config.degree, "harmonic degree")->capture_default_str();
        sub->add_option("--t", config.t_list, "amplitudes")->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nlstab::exit_code::invalid;
    }

    CLI::App* sub = app.get_subcommands().front();
    config.subcommand = sub->get_name();
    if (sub->count("--gamma")) config.gamma = gamma;
    if (sub->count("--mass")) config.mass = mass;
    if (sub->count("--kmax")) config.k_max = k_max;
    if (sub->count("--format")) config.format = format;
    if (sub->count("--out")) config.out = out;

    const nlstab::Emission em = nlstab::run_command(config);
    if (!em.diagnostics.empty()) std::cerr << "error: " << em.diagnostics << '\n';
    if (config.out) {
        std::ofstream f(*config.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open " << *config.out << '\n';
            return nlstab::exit_code::invalid;
        }
        f << em.text;
    } else {
        std::cout << em.text;
    }
    return em.exit_code;
}
