#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "permshell/bigint.hpp"
#include "permshell/constellation.hpp"
#include "permshell/error.hpp"
#include "permshell/permcode.hpp"

namespace permshell {

namespace detail {

inline TypeClass type_from_full_multiplicities(const Pam& pam, const std::vector<int>& full_m) {
    std::vector<int> mu, m;
    for (int r = 0; r < pam.p; ++r) {
        if (full_m[r] > 0) {
            mu.push_back(pam.amplitudes[r]);
            m.push_back(full_m[r]);
        }
    }
    return TypeClass(std::move(mu), std::move(m));
}

inline std::vector<int> full_multiplicities(const Pam& pam, const TypeClass& tc) {
    std::vector<int> full(pam.p, 0);
    for (int l = 0; l < tc.u(); ++l) {
        const int r = pam.rank_of(tc.mu()[l]);
        if (r < 0) throw InvalidParameter("amplitude " + std::to_string(tc.mu()[l]) + " is not a PAM level");
        full[r] = tc.m()[l];
    }
    return full;
}

// Descending size, ties broken by descending lexicographic order on m.
inline void sort_by_size(std::vector<std::vector<int>>& ms, std::vector<BigInt>* sizes = nullptr) {
    std::vector<std::pair<BigInt, std::vector<int>>> keyed;
    keyed.reserve(ms.size());
    for (auto& m : ms) keyed.emplace_back(multinomial(m), std::move(m));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;
    });
    ms.clear();
    if (sizes) sizes->clear();
    for (auto& [s, m] : keyed) {
        if (sizes) sizes->push_back(s);
        ms.push_back(std::move(m));
    }
}

}  // namespace detail

/// All multiplicity vectors (m_1..m_p) over the PAM levels with sum n and
/// energy sum m_i a_i^2 = energy, sorted by descending class size.
inline std::vector<std::vector<int>> enumerate_multiplicities(int n, long energy, const Pam& pam) {
    std::vector<std::vector<int>> out;
    if (n < 1 || energy < n) return out;
    const int p = pam.p;
    std::vector<int> m(p, 0);
    // m_1 is eliminated by the count constraint; each higher level adds a^2 - 1
    // of excess energy over the all-ones word.
    std::function<void(int, int, long)> rec = [&](int level, int rem_count, long rem_excess) {
        if (level == 0) {
            if (rem_excess == 0) {
                m[0] = rem_count;
                out.push_back(m);
            }
            return;
        }
        const long step = static_cast<long>(pam.amplitudes[level]) * pam.amplitudes[level] - 1;
        const long max_k = std::min<long>(rem_count, rem_excess / step);
        for (long k = 0; k <= max_k; ++k) {
            m[level] = static_cast<int>(k);
            rec(level - 1, rem_count - static_cast<int>(k), rem_excess - k * step);
        }
        m[level] = 0;
    };
    rec(p - 1, n, energy - n);
    detail::sort_by_size(out);
    return out;
}

inline std::vector<TypeClass> enumerate_type_classes(int n, long energy, const Pam& pam) {
    std::vector<TypeClass> classes;
    for (const auto& m : enumerate_multiplicities(n, energy, pam))
        classes.push_back(detail::type_from_full_multiplicities(pam, m));
    return classes;
}

/// A union of equal-energy type classes: a complete shell code, a maximal
/// k-class partial shell code, or a single permutation code.
class ShellCode {
public:
    static ShellCode complete(int n, long energy, const Pam& pam) {
        auto ms = enumerate_multiplicities(n, energy, pam);
        if (ms.empty())
            throw InvalidParameter("no type classes for (n=" + std::to_string(n) + ", E=" +
                                   std::to_string(energy) + ", p=" + std::to_string(pam.p) + ")");
        const int t = static_cast<int>(ms.size());
        return ShellCode(n, energy, pam, std::move(ms), t);
    }

    /// The union of the k largest classes of the complete shell.
    static ShellCode partial(int n, long energy, const Pam& pam, int k) {
        auto ms = enumerate_multiplicities(n, energy, pam);
        if (ms.empty()) throw InvalidParameter("partial shell: infeasible (n, E, p)");
        if (k < 1) throw InvalidParameter("partial shell: k must be >= 1");
        const int t = static_cast<int>(ms.size());
        if (k < t) ms.resize(k);
        return ShellCode(n, energy, pam, std::move(ms), t);
    }

    /// A single permutation code viewed as a one-class shell.
    static ShellCode single(const TypeClass& tc, const Pam& pam) {
        std::vector<std::vector<int>> ms{detail::full_multiplicities(pam, tc)};
        return ShellCode(tc.n(), tc.energy(), pam, std::move(ms), 0);
    }

    /// Arbitrary equal-energy classes; reordered by descending size.
    static ShellCode from_classes(const std::vector<TypeClass>& classes, const Pam& pam) {
        if (classes.empty()) throw InvalidParameter("from_classes: no classes");
        std::vector<std::vector<int>> ms;
        for (const auto& tc : classes) {
            if (tc.n() != classes.front().n() || tc.energy() != classes.front().energy())
                throw InvalidParameter("from_classes: classes differ in length or energy");
            ms.push_back(detail::full_multiplicities(pam, tc));
        }
        detail::sort_by_size(ms);
        return ShellCode(classes.front().n(), classes.front().energy(), pam, std::move(ms), 0);
    }

    int n() const { return n_; }
    long energy() const { return energy_; }
    const Pam& pam() const { return pam_; }
    int k() const { return static_cast<int>(classes_.size()); }
    /// Class count of the complete shell this code was cut from (0 if unknown).
    int complete_count() const { return complete_count_; }
    const std::vector<TypeClass>& classes() const { return classes_; }
    const TypeClass& type_class(int i) const { return classes_.at(i); }
    /// Multiplicities over every PAM level (zeros included) of class i.
    const std::vector<int>& full_m(int i) const { return full_m_.at(i); }
    const BigInt& class_size(int i) const { return classes_.at(i).size(); }
    /// Prefix sums of Variant I class sizes; cumulative()[i] counts classes 0..i.
    const std::vector<BigInt>& cumulative() const { return cumulative_; }
    const BigInt& size() const { return cumulative_.back(); }
    BigInt cumulative_before(int i) const { return i == 0 ? BigInt(0) : cumulative_[i - 1]; }

    /// Class index of an unsigned codeword, or nullopt if its type is not retained.
    std::optional<int> class_of(std::span<const int> amplitudes) const {
        std::vector<int> full(pam_.p, 0);
        if (static_cast<int>(amplitudes.size()) != n_) return std::nullopt;
        for (int a : amplitudes) {
            const int r = pam_.rank_of(std::abs(a));
            if (r < 0) return std::nullopt;
            ++full[r];
        }
        for (int i = 0; i < k(); ++i)
            if (full_m_[i] == full) return i;
        return std::nullopt;
    }

    /// Amplitudes that occur in at least one retained class, ascending.
    std::vector<int> amplitude_union() const {
        std::vector<int> out;
        for (int r = 0; r < pam_.p; ++r) {
            for (const auto& fm : full_m_) {
                if (fm[r] > 0) {
                    out.push_back(pam_.amplitudes[r]);
                    break;
                }
            }
        }
        return out;
    }

private:
    ShellCode(int n, long energy, Pam pam, std::vector<std::vector<int>> ms, int complete_count)
        : n_(n), energy_(energy), pam_(std::move(pam)), full_m_(std::move(ms)), complete_count_(complete_count) {
        BigInt acc = 0;
        for (const auto& m : full_m_) {
            classes_.push_back(detail::type_from_full_multiplicities(pam_, m));
            acc += classes_.back().size();
            cumulative_.push_back(acc);
        }
    }

    int n_ = 0;
    long energy_ = 0;
    Pam pam_;
    std::vector<std::vector<int>> full_m_;
    std::vector<TypeClass> classes_;
    std::vector<BigInt> cumulative_;
    int complete_count_ = 0;
};

struct ShellIndex {
    int klass = 0;             // 0-based class index
    std::vector<int> letters;  // indices into the class's mu
};

/// Locates the class by binary search on the cumulative sizes, then unranks
/// within it.
inline ShellIndex encode_shell(const BigInt& q, const ShellCode& shell) {
    if (q < 0 || q >= shell.size())
        throw IndexOutOfRange("encode_shell: index " + q.str() + " outside [0, " + shell.size().str() + ")");
    const auto& cs = shell.cumulative();
    const auto it = std::upper_bound(cs.begin(), cs.end(), q);
    const int klass = static_cast<int>(it - cs.begin());
    const BigInt offset = q - shell.cumulative_before(klass);
    return ShellIndex{klass, encode_v1(offset, shell.type_class(klass))};
}

inline BigInt inv_encode_shell(const ShellIndex& idx, const ShellCode& shell) {
    if (idx.klass < 0 || idx.klass >= shell.k()) throw InvalidCodeword("inv_encode_shell: class out of range");
    return shell.cumulative_before(idx.klass) + inv_encode_v1(idx.letters, shell.type_class(idx.klass));
}

inline std::vector<int> encode_shell_amplitudes(const BigInt& q, const ShellCode& shell) {
    const auto idx = encode_shell(q, shell);
    return amplitudes_of(idx.letters, shell.type_class(idx.klass));
}

/// Rank of an unsigned codeword in the shell, or nullopt if it is not a member.
inline std::optional<BigInt> inv_encode_shell_amplitudes(std::span<const int> amplitudes, const ShellCode& shell) {
    const auto klass = shell.class_of(amplitudes);
    if (!klass) return std::nullopt;
    const auto& tc = shell.type_class(*klass);
    return shell.cumulative_before(*klass) + inv_encode_v1(letters_of(amplitudes, tc), tc);
}

/// Variant II rate in bits per dimension: (n + log2 |C_I|) / n.
inline double shell_rate(const ShellCode& shell) {
    return (shell.n() + log2_big(shell.size())) / shell.n();
}

/// Rate of the k largest classes relative to the whole shell, on Variant II sizes.
inline double partial_rate_fraction(const ShellCode& shell, int k) {
    if (k < 1 || k > shell.k()) throw InvalidParameter("partial_rate_fraction: k out of range");
    return (shell.n() + log2_big(shell.cumulative()[k - 1])) / (shell.n() + log2_big(shell.size()));
}

struct BoltzmannFit {
    int n = 0;
    long energy = 0;
    Pam pam;
    double lambda = 0.0;
    std::vector<double> m_real;
};

namespace detail {

// Multiplicities n * exp(lambda a_i^2) / Z, evaluated with a max shift.
inline std::vector<double> boltzmann_weights(const Pam& pam, int n, double lambda) {
    std::vector<double> logw;
    for (int a : pam.amplitudes) logw.push_back(lambda * a * a);
    const double mx = *std::max_element(logw.begin(), logw.end());
    double z = 0.0;
    for (double& l : logw) {
        l = std::exp(l - mx);
        z += l;
    }
    for (double& l : logw) l = n * l / z;
    return logw;
}

}  // namespace detail

/// Solves for lambda by bisection so the Boltzmann multiplicities meet the
/// energy constraint. Energy is increasing in lambda.
inline BoltzmannFit boltzmann_fit(int n, long energy, const Pam& pam) {
    const long max_e = static_cast<long>(n) * pam.max_amplitude() * pam.max_amplitude();
    if (n < 1 || energy <= n || energy >= max_e)
        throw DegenerateDistribution("boltzmann_fit: energy must lie strictly between n and n(2p-1)^2");
    auto energy_at = [&](double lambda) {
        const auto m = detail::boltzmann_weights(pam, n, lambda);
        double e = 0.0;
        for (int r = 0; r < pam.p; ++r) e += m[r] * pam.amplitudes[r] * pam.amplitudes[r];
        return e;
    };
    double lo = -50.0, hi = 50.0;
    const double target = static_cast<double>(energy);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double e = energy_at(mid);
        if (std::abs(e - target) <= 1e-12 * target) {
            lo = hi = mid;
            break;
        }
        (e < target ? lo : hi) = mid;
        if (hi - lo <= 0.0) break;
    }
    BoltzmannFit fit;
    fit.n = n;
    fit.energy = energy;
    fit.pam = pam;
    fit.lambda = 0.5 * (lo + hi);
    fit.m_real = detail::boltzmann_weights(pam, n, fit.lambda);
    return fit;
}

/// Integer multiplicity vectors within +-radius of the Boltzmann solution that
/// satisfy both constraints; the k largest, in class order.
inline std::vector<std::vector<int>> largest_classes_near_boltzmann(const BoltzmannFit& fit, int k, int radius) {
    if (radius < 0) throw InvalidParameter("largest_classes_near_boltzmann: radius must be >= 0");
    const int p = fit.pam.p;
    std::vector<int> lo(p), hi(p);
    for (int r = 0; r < p; ++r) {
        lo[r] = std::max(0, static_cast<int>(std::ceil(fit.m_real[r] - radius - 1e-9)));
        hi[r] = static_cast<int>(std::floor(fit.m_real[r] + radius + 1e-9));
    }
    std::vector<std::vector<int>> found;
    std::vector<int> m(p, 0);
    std::function<void(int, int, long)> rec = [&](int level, int rem_count, long rem_energy) {
        if (level == 0) {
            if (rem_count >= lo[0] && rem_count <= hi[0] && rem_energy == rem_count) {
                m[0] = rem_count;
                found.push_back(m);
            }
            return;
        }
        const long a2 = static_cast<long>(fit.pam.amplitudes[level]) * fit.pam.amplitudes[level];
        for (int v = lo[level]; v <= hi[level] && v <= rem_count && v * a2 <= rem_energy; ++v) {
            m[level] = v;
            rec(level - 1, rem_count - v, rem_energy - v * a2);
        }
        m[level] = 0;
    };
    rec(p - 1, fit.n, fit.energy);
    detail::sort_by_size(found);
    if (static_cast<int>(found.size()) > k) found.resize(k);
    return found;
}

}  // namespace permshell
