// Writes a synthetic manifold file for the CLI.

#include "zpdehn/nzdehn.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Write a synthetic Neumann-Zagier potential as a manifold file"};
    std::uint64_t seed = 0;
    std::size_t cusps = 1;
    unsigned trunc = 8;
    double trust = 0.5;
    bool quadratic = false, no_mixing = false;
    std::string out;
    app.add_option("--seed", seed, "RNG seed")->required();
    app.add_option("--cusps", cusps, "number of cusps")->check(CLI::Range(1, 3));
    app.add_option("--trunc", trunc, "truncation degree (even)");
    app.add_option("--trust-radius", trust, "trust radius");
    app.add_flag("--quadratic", quadratic, "drop all higher-order terms");
    app.add_flag("--no-mixing", no_mixing, "no mixed coefficients");
    app.add_option("--out", out, "output path")->required();
    CLI11_PARSE(app, argc, argv);

    zpdehn::ShapeSpec spec;
    spec.mixing = !no_mixing;
    spec.trust_radius = trust;
    auto pot = zpdehn::synth_potential(seed, cusps, trunc, spec);
    if (quadratic) pot.coefficients.clear();
    std::ofstream f(out);
    if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
    }
    f << zpdehn::write_manifold(pot);
    return 0;
}
