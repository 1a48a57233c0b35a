#pragma once

// Fixed-precision MPFR reals and complexes. Digit counts are decimal; the
// tiers used by root refinement are 50, 100 and 160 digits (about 170, 335
// and 533 bits).

#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>

namespace zpdehn {

template <unsigned Digits>
using MpReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                             boost::multiprecision::et_off>;
template <unsigned Digits>
using MpComplex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<boost::multiprecision::mpfr_float_backend<Digits>>,
    boost::multiprecision::et_off>;

using HighReal = MpReal<160>;
using HighComplex = MpComplex<160>;

constexpr unsigned kHighDigits = 160;
constexpr unsigned kHighBits = 533;

template <class C>
std::complex<double> to_cd(const C& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class C>
C from_cd(const std::complex<double>& z) {
    using R = typename C::value_type;
    return C(R(z.real()), R(z.imag()));
}

}  // namespace zpdehn
