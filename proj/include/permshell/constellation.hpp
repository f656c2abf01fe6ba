#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "permshell/error.hpp"

namespace permshell {

/// 2p-PAM with unnormalized odd amplitudes 1, 3, ..., 2p-1.
struct Pam {
    int p = 1;
    std::vector<int> amplitudes;
    int bits_per_symbol = 1;

    int amp_bits() const { return bits_per_symbol - 1; }
    int size() const { return 2 * p; }
    int max_amplitude() const { return 2 * p - 1; }

    /// Rank of a positive amplitude, or -1 if it is not a level of this PAM.
    int rank_of(int amplitude) const {
        if (amplitude < 1 || amplitude > max_amplitude() || amplitude % 2 == 0) return -1;
        return (amplitude - 1) / 2;
    }

    std::vector<int> symbols() const {
        std::vector<int> s;
        s.reserve(amplitudes.size() * 2);
        for (auto it = amplitudes.rbegin(); it != amplitudes.rend(); ++it) s.push_back(-*it);
        for (int a : amplitudes) s.push_back(a);
        return s;
    }

    /// Mean energy under the uniform distribution, (4p^2 - 1) / 3.
    double average_power() const {
        double s = 0.0;
        for (int a : amplitudes) s += static_cast<double>(a) * a;
        return s / static_cast<double>(amplitudes.size());
    }
};

inline Pam make_pam(int p) {
    if (p < 1 || !std::has_single_bit(static_cast<unsigned>(p)))
        throw InvalidParameter("make_pam: p must be a positive power of two, got " + std::to_string(p));
    Pam pam;
    pam.p = p;
    for (int i = 0; i < p; ++i) pam.amplitudes.push_back(2 * i + 1);
    pam.bits_per_symbol = 1 + std::countr_zero(static_cast<unsigned>(p));
    return pam;
}

/// Amplitude levels for any p >= 1. Shell censuses and trellises are defined
/// for every p; labeling and demapping expect a power of two (make_pam).
inline Pam make_pam_levels(int p) {
    if (p < 1) throw InvalidParameter("make_pam_levels: p must be positive, got " + std::to_string(p));
    Pam pam;
    pam.p = p;
    for (int i = 0; i < p; ++i) pam.amplitudes.push_back(2 * i + 1);
    pam.bits_per_symbol = 1 + static_cast<int>(std::bit_width(static_cast<unsigned>(p - 1)));
    return pam;
}

/// Sign-magnitude labeling: sign bit first (0 = positive), then the
/// binary-reflected Gray code of the amplitude rank, MSB first.
struct Labeling {
    int amp_width = 0;
    int sign_bit_position = 0;
    std::vector<std::uint32_t> amp_code;  // indexed by amplitude rank

    /// Bit `k` (0 = MSB) of the amplitude label of rank `rank`.
    int amp_bit(int rank, int k) const {
        return static_cast<int>((amp_code[rank] >> (amp_width - 1 - k)) & 1U);
    }
};

inline std::uint32_t gray_code(std::uint32_t rank) { return rank ^ (rank >> 1); }

inline Labeling make_labeling(const Pam& pam) {
    Labeling lab;
    lab.amp_width = pam.amp_bits();
    lab.sign_bit_position = 0;
    for (int r = 0; r < pam.p; ++r) lab.amp_code.push_back(gray_code(static_cast<std::uint32_t>(r)));
    return lab;
}

/// Per-symbol label as a string of '0'/'1', sign bit first.
inline std::string label_of(const Pam& pam, const Labeling& lab, int symbol) {
    const int rank = pam.rank_of(std::abs(symbol));
    if (symbol == 0 || rank < 0)
        throw InvalidSymbol("label_of: " + std::to_string(symbol) + " is not a " +
                            std::to_string(pam.size()) + "-PAM symbol");
    std::string out;
    out.push_back(symbol < 0 ? '1' : '0');
    for (int k = 0; k < lab.amp_width; ++k) out.push_back(lab.amp_bit(rank, k) ? '1' : '0');
    return out;
}

}  // namespace permshell
