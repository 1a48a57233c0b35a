#pragma once

// Aberth iteration at fixed MPFR precision with inclusion disks. A double
// precision pass supplies starting points; the multiprecision pass polishes.
//
// Inclusion: with W_i = f(z_i) / (lead * prod_{j != i} (z_i - z_j)) the disks
// D(z_i, d |W_i|) cover all roots, and a connected union of m disks holds m
// roots. Pairwise disjoint disks therefore isolate one root each.

#include "zpdehn/errors.hpp"
#include "zpdehn/hpnum.hpp"
#include "zpdehn/upoly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <vector>

namespace zpdehn::detail {

constexpr unsigned kTierDigits[] = {50, 100, 160, 320};
constexpr unsigned kTierCount = 4;

inline unsigned tier_bits(unsigned tier) {
    return static_cast<unsigned>(kTierDigits[tier] * 3.3219280948873623);
}

inline unsigned tier_for_bits(unsigned bits) {
    for (unsigned t = 0; t < kTierCount; ++t)
        if (tier_bits(t) >= bits) return t;
    throw Error(ErrorKind::PrecisionExhausted, "precision above " + std::to_string(tier_bits(kTierCount - 1)) + " bits");
}

// Calls f(std::integral_constant<unsigned, digits>) for the tier.
template <class F>
decltype(auto) with_tier(unsigned tier, F&& f) {
    switch (tier) {
        case 0: return f(std::integral_constant<unsigned, 50>{});
        case 1: return f(std::integral_constant<unsigned, 100>{});
        case 2: return f(std::integral_constant<unsigned, 160>{});
        default: return f(std::integral_constant<unsigned, 320>{});
    }
}

template <unsigned D>
MpReal<D> to_mp(const BigInt& c) {
    return MpReal<D>(c.get_str());
}

template <unsigned D>
struct RootSet {
    std::vector<MpComplex<D>> z;
    std::vector<MpReal<D>> radius;
    bool certified = false;
};

inline std::vector<std::complex<double>> aberth_double(const IntPoly& f) {
    const std::size_t d = degree(f);
    std::vector<double> c(d + 1);
    for (std::size_t k = 0; k <= d; ++k) c[k] = f[k].get_d();
    double r0 = c[0] != 0 ? std::pow(std::abs(c[0] / c[d]), 1.0 / static_cast<double>(d)) : 1.0;
    if (!std::isfinite(r0) || r0 == 0) r0 = 1.0;
    std::vector<std::complex<double>> z(d);
    for (std::size_t k = 0; k < d; ++k)
        z[k] = std::polar(r0, 2 * M_PI * static_cast<double>(k) / static_cast<double>(d) + 0.4);
    for (int it = 0; it < 500; ++it) {
        double move = 0;
        for (std::size_t i = 0; i < d; ++i) {
            std::complex<double> p = c[d], dp = 0;
            for (std::size_t k = d; k-- > 0;) dp = dp * z[i] + p, p = p * z[i] + c[k];
            if (p == 0.0) continue;
            std::complex<double> w = p / dp, s = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            std::complex<double> step = w / (1.0 - w * s);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[i] -= step;
            move = std::max(move, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        if (move < 1e-14) break;
    }
    return z;
}

// Bounds [lo, hi] on log M(f) from double-precision roots and inclusion
// disks, with rounding slack inflated generously; nullopt when the disks overlap.
inline std::optional<std::pair<double, double>> log_mahler_bounds_double(const IntPoly& f) {
    const std::size_t d = degree(f);
    auto z = aberth_double(f);
    std::vector<double> c(d + 1);
    for (std::size_t k = 0; k <= d; ++k) c[k] = f[k].get_d();
    const double u = 1e-15;
    std::vector<double> rad(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::complex<double> p = c[d];
        double scale = std::abs(c[d]), az = std::abs(z[i]);
        for (std::size_t k = d; k-- > 0;) p = p * z[i] + c[k], scale = scale * az + std::abs(c[k]);
        double den = std::abs(c[d]);
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) den *= std::abs(z[i] - z[j]);
        if (!(den > 0)) return std::nullopt;
        rad[i] = 2 * static_cast<double>(d) * (std::abs(p) + 8 * static_cast<double>(d) * u * scale) / den +
                 u * (1 + az);
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(z[i] - z[j]) <= rad[i] + rad[j]) return std::nullopt;
    double lo = std::log(std::abs(c[d])), hi = lo;
    for (std::size_t i = 0; i < d; ++i) {
        double m = std::abs(z[i]);
        lo += std::max(0.0, std::log(std::max(m - rad[i], 1e-300)));
        hi += std::max(0.0, std::log(m + rad[i]));
    }
    return std::make_pair(lo - 1e-12, hi + 1e-12);
}

// Roots sorted by (real part, imaginary part); real parts closer than
// 10^(-D/2) relative count as equal so that conjugate pairs order stably.
template <unsigned D>
RootSet<D> certified_roots(const IntPoly& poly) {
    using R = MpReal<D>;
    using C = MpComplex<D>;
    IntPoly f = poly;
    trim(f);
    const std::size_t d = degree(f);
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "roots of a constant polynomial");
    std::vector<R> c(d + 1), ac(d + 1);
    for (std::size_t k = 0; k <= d; ++k) c[k] = to_mp<D>(f[k]), ac[k] = abs(c[k]);
    const R eps = pow(R(2), 1 - static_cast<int>(D * 3.3219280948873623));

    RootSet<D> out;
    if (d == 1) {
        out.z = {C(-c[0] / c[1], R(0))};
        out.radius = {eps * abs(c[0] / c[1]) * 4};
        out.certified = true;
        return out;
    }
    auto start = aberth_double(f);
    std::vector<C> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = C(R(start[i].real()), R(start[i].imag()));

    auto eval = [&](const C& x, C& p, C& dp) {
        p = C(c[d]);
        dp = C(0);
        for (std::size_t k = d; k-- > 0;) dp = dp * x + p, p = p * x + c[k];
    };
    const R stop = eps * 256;
    for (int it = 0; it < 400; ++it) {
        R move = 0;
        for (std::size_t i = 0; i < d; ++i) {
            C p, dp;
            eval(z[i], p, dp);
            if (p == C(0)) continue;
            C w = p / dp, s(0);
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) s += C(1) / (z[i] - z[j]);
            C step = w / (C(1) - w * s);
            z[i] -= step;
            R rel = abs(step) / std::max<R>(R(1), abs(z[i]));
            if (rel > move) move = rel;
        }
        if (move < stop) break;
    }

    out.z = z;
    out.radius.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        C p, dp;
        eval(z[i], p, dp);
        R az = abs(z[i]), bound = 0, pw = 1;
        for (std::size_t k = 0; k <= d; ++k) bound += ac[k] * pw, pw *= az;
        R num = abs(p) + 4 * R(static_cast<long>(d)) * eps * bound;
        R den = abs(c[d]);
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) den *= abs(z[i] - z[j]);
        out.radius[i] = den == 0 ? R(1e30) : R(static_cast<long>(d)) * num / den * (1 + R(1e-6));
    }
    out.certified = true;
    for (std::size_t i = 0; i < d && out.certified; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (abs(z[i] - z[j]) <= out.radius[i] + out.radius[j]) {
                out.certified = false;
                break;
            }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    const R tie = pow(R(10), -static_cast<int>(D / 2));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const R ra = out.z[a].real(), rb = out.z[b].real();
        if (abs(ra - rb) > tie * std::max<R>(R(1), abs(ra))) return ra < rb;
        return out.z[a].imag() < out.z[b].imag();
    });
    RootSet<D> sorted;
    sorted.certified = out.certified;
    for (std::size_t i : order) sorted.z.push_back(out.z[i]), sorted.radius.push_back(out.radius[i]);
    return sorted;
}

}  // namespace zpdehn::detail
