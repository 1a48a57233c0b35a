// Samples random single forms and records the distribution of the ratio
// prod |b_i| / |v| for the reduced kernel basis. The threshold written to the
// output file is the observed maximum rounded up to three decimals.

#include "zpdehn/lattice.hpp"
#include "zpdehn/samplers.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>

int main(int argc, char** argv) {
    CLI::App app{"Calibrate the kernel basis ratio threshold"};
    std::size_t n = 4, samples = 20000;
    long max_abs = 1000000;
    std::uint64_t seed = 1;
    std::string out;
    app.add_option("--n", n, "number of variables")->check(CLI::Range(2, 8));
    app.add_option("--samples", samples, "number of forms");
    app.add_option("--max-abs", max_abs, "entry bound");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--out", out, "output file")->required();
    CLI11_PARSE(app, argc, argv);

    std::mt19937_64 rng(seed);
    std::vector<double> ratios;
    ratios.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i)
        ratios.push_back(zpdehn::siegel_basis(zpdehn::sample::random_form(rng, n, max_abs)).ratio);
    std::sort(ratios.begin(), ratios.end());
    double mx = ratios.back();
    double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(samples);
    auto quantile = [&](double q) { return ratios[static_cast<std::size_t>(q * static_cast<double>(samples - 1))]; };
    double threshold = std::ceil(mx * 1000) / 1000;

    std::ofstream f(out);
    f << std::setprecision(6) << std::fixed;
    f << "# kernel basis ratio calibration, single forms\n";
    f << "n " << n << "\nmax_abs " << max_abs << "\nsamples " << samples << "\nseed " << seed << "\n";
    f << "mean " << mean << "\nq50 " << quantile(0.5) << "\nq99 " << quantile(0.99) << "\nmax " << mx << "\n";
    f << "lll_bound " << zpdehn::lll_product_bound(n - 1) << "\n";
    f << "threshold " << threshold << "\n";
    std::cout << "threshold " << threshold << " (max " << mx << ", lll bound " << zpdehn::lll_product_bound(n - 1) << ")\n";
    return 0;
}
