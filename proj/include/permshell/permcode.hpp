#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "permshell/bigint.hpp"
#include "permshell/error.hpp"

namespace permshell {

/// One permutation code: the distinct amplitudes `mu` (ascending) and their
/// multiplicities `m`. Variant I codewords are the distinct rearrangements of
/// the initial vector; Variant II additionally allows every sign pattern.
class TypeClass {
public:
    TypeClass() = default;

    TypeClass(std::vector<int> mu, std::vector<int> m) : mu_(std::move(mu)), m_(std::move(m)) {
        if (mu_.empty() || mu_.size() != m_.size())
            throw InvalidParameter("TypeClass: mu and m must be non-empty and of equal length");
        for (std::size_t i = 0; i < mu_.size(); ++i) {
            if (mu_[i] <= 0) throw InvalidParameter("TypeClass: amplitudes must be positive");
            if (i > 0 && mu_[i] <= mu_[i - 1])
                throw InvalidParameter("TypeClass: amplitudes must be strictly increasing");
            if (m_[i] < 1) throw InvalidParameter("TypeClass: multiplicities must be >= 1");
            n_ += m_[i];
            energy_ += static_cast<long>(m_[i]) * mu_[i] * mu_[i];
        }
        size_ = multinomial(m_);
    }

    /// Builds the type from any arrangement of positive amplitudes.
    static TypeClass from_initial_vector(std::span<const int> x) {
        std::vector<int> sorted(x.begin(), x.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> mu, m;
        for (int a : sorted) {
            if (!mu.empty() && mu.back() == a) {
                ++m.back();
            } else {
                mu.push_back(a);
                m.push_back(1);
            }
        }
        return TypeClass(std::move(mu), std::move(m));
    }

    const std::vector<int>& mu() const { return mu_; }
    const std::vector<int>& m() const { return m_; }
    int u() const { return static_cast<int>(mu_.size()); }
    int n() const { return n_; }
    long energy() const { return energy_; }
    /// Variant I cardinality n! / (m_1! ... m_u!).
    const BigInt& size() const { return size_; }

    std::vector<int> initial_vector() const {
        std::vector<int> x;
        x.reserve(n_);
        for (int i = 0; i < u(); ++i) x.insert(x.end(), m_[i], mu_[i]);
        return x;
    }

    /// Index of amplitude `a` in mu, or -1.
    int letter_of(int a) const {
        auto it = std::lower_bound(mu_.begin(), mu_.end(), a);
        if (it == mu_.end() || *it != a) return -1;
        return static_cast<int>(it - mu_.begin());
    }

    int multiplicity_of(int a) const {
        const int l = letter_of(a);
        return l < 0 ? 0 : m_[l];
    }

    friend bool operator==(const TypeClass& a, const TypeClass& b) {
        return a.mu_ == b.mu_ && a.m_ == b.m_;
    }

private:
    std::vector<int> mu_;
    std::vector<int> m_;
    int n_ = 0;
    long energy_ = 0;
    BigInt size_ = 0;
};

struct SizeAndRate {
    BigInt size;
    double rate_v1 = 0.0;  // bits per dimension
    double rate_v2 = 0.0;
};

inline SizeAndRate size_and_rate(const TypeClass& tc) {
    SizeAndRate r;
    r.size = tc.size();
    r.rate_v1 = log2_big(tc.size()) / tc.n();
    r.rate_v2 = 1.0 + r.rate_v1;
    return r;
}

/// floor(log2 size): number of index bits an expurgated code carries.
inline int index_bits(const BigInt& size) {
    if (size <= 0) throw InvalidParameter("index_bits: size must be positive");
    return static_cast<int>(boost::multiprecision::msb(size));
}

/// Lexicographic unranking of a multiset permutation. Returns letter indices
/// into mu (0-based); the codeword is mu[c].
inline std::vector<int> encode_v1(BigInt q, const TypeClass& tc) {
    if (q < 0 || q >= tc.size())
        throw IndexOutOfRange("encode_v1: index " + q.str() + " outside [0, " + tc.size().str() + ")");
    const int n = tc.n();
    std::vector<int> m = tc.m();
    BigInt size = tc.size();
    BigInt size_temp;
    std::vector<int> c(n);
    for (int index = 1; index <= n; ++index) {
        int letter = 0;
        size_temp = 0;
        while (q >= 0) {
            ++letter;
            size_temp = size * m[letter - 1] / (n - index + 1);
            q -= size_temp;
        }
        size = size_temp;
        q += size_temp;
        c[index - 1] = letter - 1;
        --m[letter - 1];
    }
    return c;
}

/// Inverse of encode_v1.
inline BigInt inv_encode_v1(std::span<const int> c, const TypeClass& tc) {
    const int n = tc.n();
    if (static_cast<int>(c.size()) != n)
        throw InvalidCodeword("inv_encode_v1: codeword length " + std::to_string(c.size()) +
                              " != n = " + std::to_string(n));
    std::vector<int> m = tc.m();
    for (int l : c) {
        if (l < 0 || l >= tc.u() || --m[l] < 0)
            throw InvalidCodeword("inv_encode_v1: index vector is not an arrangement of the type");
    }
    m = tc.m();
    BigInt size = tc.size();
    BigInt q = 0;
    for (int index = 1; index <= n; ++index) {
        const int letter = c[index - 1];
        for (int k = 0; k < letter; ++k) q += size * m[k] / (n - index + 1);
        size = size * m[letter] / (n - index + 1);
        --m[letter];
    }
    return q;
}

inline std::vector<int> amplitudes_of(std::span<const int> letters, const TypeClass& tc) {
    std::vector<int> x(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i) x[i] = tc.mu()[letters[i]];
    return x;
}

/// Letter indices of an unsigned codeword; throws if an amplitude is foreign
/// to the type or the multiplicities do not match.
inline std::vector<int> letters_of(std::span<const int> amplitudes, const TypeClass& tc) {
    if (static_cast<int>(amplitudes.size()) != tc.n())
        throw InvalidCodeword("letters_of: length mismatch");
    std::vector<int> c(amplitudes.size());
    std::vector<int> count(tc.u(), 0);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        const int l = tc.letter_of(amplitudes[i]);
        if (l < 0) throw InvalidCodeword("letters_of: amplitude " + std::to_string(amplitudes[i]) + " not in type");
        c[i] = l;
        ++count[l];
    }
    if (count != tc.m()) throw InvalidCodeword("letters_of: multiplicities do not match the type");
    return c;
}

using Bits = std::vector<std::uint8_t>;

/// Number of input bits of the Variant II encoder, floor(n * rate_v2).
inline int v2_input_bits(const TypeClass& tc) { return tc.n() + index_bits(tc.size()); }

/// Variant II encoder: the first n bits are signs (1 = negative), the
/// remaining bits are q, most significant first.
inline std::vector<int> encode_v2(std::span<const std::uint8_t> bits, const TypeClass& tc) {
    const int k = v2_input_bits(tc);
    if (static_cast<int>(bits.size()) != k)
        throw InvalidParameter("encode_v2: expected " + std::to_string(k) + " bits, got " +
                               std::to_string(bits.size()));
    BigInt q = 0;
    for (int i = tc.n(); i < k; ++i) {
        q <<= 1;
        q |= bits[i] & 1U;
    }
    std::vector<int> x = amplitudes_of(encode_v1(q, tc), tc);
    for (int i = 0; i < tc.n(); ++i)
        if (bits[i] & 1U) x[i] = -x[i];
    return x;
}

inline Bits decode_v2(std::span<const int> signed_codeword, const TypeClass& tc) {
    const int n = tc.n();
    const int ka = index_bits(tc.size());
    std::vector<int> amps(signed_codeword.size());
    Bits bits(n + ka, 0);
    for (std::size_t i = 0; i < signed_codeword.size(); ++i) {
        amps[i] = std::abs(signed_codeword[i]);
        if (i < bits.size()) bits[i] = signed_codeword[i] < 0 ? 1 : 0;
    }
    BigInt q = inv_encode_v1(letters_of(amps, tc), tc);
    if (q >= pow2_big(static_cast<unsigned>(ka)))
        throw InvalidCodeword("decode_v2: codeword index outside the expurgated range");
    for (int i = n + ka - 1; i >= n; --i) {
        bits[i] = static_cast<std::uint8_t>(static_cast<unsigned>(q & 1));
        q >>= 1;
    }
    return bits;
}

/// Affine spreading of expurgated indices over the full code:
/// q = (e * i + d) mod M for i in [0, 2^k_a).
struct CodeIndexMap {
    int k_a = 0;
    BigInt modulus = 1;
    BigInt e = 1;
    BigInt d = 0;
    BigInt e_inv = 1;

    BigInt capacity() const { return pow2_big(static_cast<unsigned>(k_a)); }
};

inline CodeIndexMap make_identity_map(const BigInt& modulus) {
    CodeIndexMap map;
    map.modulus = modulus;
    map.k_a = index_bits(modulus);
    map.e = 1;
    map.d = 0;
    map.e_inv = modulus == 1 ? BigInt(0) : BigInt(1);
    return map;
}

inline CodeIndexMap make_index_map(const BigInt& modulus, const BigInt& e, const BigInt& d) {
    CodeIndexMap map;
    map.modulus = modulus;
    map.k_a = index_bits(modulus);
    if (e <= 0 || (modulus > 1 && e >= modulus) || gcd_big(e, modulus) != 1)
        throw InvalidParameter("make_index_map: e must lie in [1, M) and be coprime with M");
    if (d < 0 || d >= map.capacity()) throw InvalidParameter("make_index_map: d must lie in [0, 2^k_a)");
    map.e = e;
    map.d = d;
    map.e_inv = mod_inverse(e, modulus);
    return map;
}

/// (e, d) drawn from a PRNG seeded with the shared 64-bit seed; e is an odd
/// integer in [1, M) coprime with M, d is uniform on [0, 2^k_a).
inline CodeIndexMap make_index_map(const BigInt& modulus, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BigInt e = 1;
    if (modulus > 2) {
        const BigInt odd_count = modulus / 2;  // odd values below M
        do {
            e = 2 * uniform_below(odd_count, rng) + 1;
        } while (gcd_big(e, modulus) != 1);
    }
    const BigInt d = uniform_below(pow2_big(static_cast<unsigned>(index_bits(modulus))), rng);
    return make_index_map(modulus, e, d);
}

inline BigInt spread(const BigInt& i, const CodeIndexMap& map) {
    if (i < 0 || i >= map.capacity())
        throw IndexOutOfRange("spread: index " + i.str() + " outside [0, 2^" + std::to_string(map.k_a) + ")");
    return (map.e * i + map.d) % map.modulus;
}

/// Recovers i from q, or nullopt when q is not the image of an expurgated index.
inline std::optional<BigInt> unspread(const BigInt& q, const CodeIndexMap& map) {
    if (q < 0 || q >= map.modulus) return std::nullopt;
    BigInt diff = (q - map.d) % map.modulus;
    if (diff < 0) diff += map.modulus;
    BigInt i = (map.e_inv * diff) % map.modulus;
    if (i >= map.capacity()) return std::nullopt;
    return i;
}

}  // namespace permshell
