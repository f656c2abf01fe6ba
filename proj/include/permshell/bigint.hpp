#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "permshell/error.hpp"

namespace permshell {

using BigInt = boost::multiprecision::cpp_int;

/// log2 of a positive big integer, accurate to double precision for any size.
inline double log2_big(const BigInt& x) {
    if (x <= 0) throw InvalidParameter("log2_big: argument must be positive");
    const auto msb = static_cast<long>(boost::multiprecision::msb(x));
    if (msb < 1000) return std::log2(x.convert_to<double>());
    const long shift = msb - 60;
    BigInt top = x >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline BigInt factorial_big(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// n! / (m_1! ... m_u!) with n = sum(m), computed as a product of binomials.
inline BigInt multinomial(std::span<const int> m) {
    BigInt r = 1;
    int total = 0;
    for (int mi : m) {
        if (mi < 0) throw InvalidParameter("multinomial: negative multiplicity");
        for (int k = 1; k <= mi; ++k) {
            ++total;
            r *= total;
            r /= k;
        }
    }
    return r;
}

inline BigInt pow2_big(unsigned k) { return BigInt(1) << k; }

/// Uniform draw from [0, bound) by rejection on the smallest covering bit width.
template <class Rng>
BigInt uniform_below(const BigInt& bound, Rng& rng) {
    if (bound <= 0) throw InvalidParameter("uniform_below: bound must be positive");
    if (bound == 1) return 0;
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(BigInt(bound - 1))) + 1;
    const unsigned words = (bits + 63) / 64;
    for (;;) {
        BigInt r = 0;
        for (unsigned w = 0; w < words; ++w) {
            r <<= 64;
            r |= static_cast<std::uint64_t>(rng());
        }
        r &= (BigInt(1) << bits) - 1;
        if (r < bound) return r;
    }
}

/// Inverse of a modulo m (requires gcd(a, m) = 1).
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    if (m == 1) return 0;
    BigInt old_r = a % m, r = m;
    BigInt old_s = 1, s = 0;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw InvalidParameter("mod_inverse: arguments are not coprime");
    old_s %= m;
    if (old_s < 0) old_s += m;
    return old_s;
}

inline BigInt gcd_big(BigInt a, BigInt b) {
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace permshell
