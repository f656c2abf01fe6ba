#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "permshell/assignment.hpp"
#include "permshell/constellation.hpp"
#include "permshell/error.hpp"
#include "permshell/permcode.hpp"
#include "permshell/shellcode.hpp"

namespace permshell {

inline constexpr double kDefaultLlrMax = 60.0;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Received word y = x + sigma z.
struct SoftWord {
    std::vector<double> y;
    double sigma = 1.0;
    double energy_y = 0.0;

    SoftWord() = default;
    SoftWord(std::vector<double> y_, double sigma_) : y(std::move(y_)), sigma(sigma_) {
        if (!(sigma > 0.0)) throw InvalidParameter("SoftWord: sigma must be positive");
        for (double v : y) energy_y += v * v;
    }

    int n() const { return static_cast<int>(y.size()); }
    double inv_var() const { return 1.0 / (sigma * sigma); }
};

/// Natural-log LLRs, log P(b=0)/P(b=1), grouped per symbol: sign bit first,
/// then the amplitude label bits MSB first.
struct LlrVector {
    std::vector<double> llr;
    int bits_per_symbol = 1;

    double at(int position, int bit) const { return llr[position * bits_per_symbol + bit]; }
    double sign(int position) const { return at(position, 0); }
    double amp(int position, int k) const { return at(position, 1 + k); }
};

inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// log f_o(y | x) = -(E_y + E)/(2 sigma^2) - n log(sqrt(2 pi) sigma) + sum log cosh(y_i x_i / sigma^2).
inline double orbit_loglik(std::span<const int> x, const SoftWord& sw) {
    if (!(sw.sigma > 0.0)) throw InvalidParameter("orbit_loglik: sigma must be positive");
    if (x.size() != sw.y.size()) throw InvalidParameter("orbit_loglik: length mismatch");
    const double iv = sw.inv_var();
    double energy = 0.0, s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        energy += static_cast<double>(x[i]) * x[i];
        s += log_cosh(sw.y[i] * x[i] * iv);
    }
    const double n = static_cast<double>(x.size());
    return -(sw.energy_y + energy) * 0.5 * iv - n * std::log(std::sqrt(2.0 * std::numbers::pi) * sw.sigma) + s;
}

/// Per-position log-weights over amplitude ranks, log w_j(a) (unnormalised,
/// -inf where a is impossible), turned into label LLRs. The sign bit uses
/// P(+ | a, y_j) = e^t / (2 cosh t), t = y_j a / sigma^2.
inline LlrVector llrs_from_amplitude_metrics(const std::vector<std::vector<double>>& logw, const SoftWord& sw,
                                             const Pam& pam, const Labeling& lab,
                                             double llr_max = kDefaultLlrMax) {
    const int n = sw.n();
    LlrVector out;
    out.bits_per_symbol = pam.bits_per_symbol;
    out.llr.assign(static_cast<std::size_t>(n) * pam.bits_per_symbol, 0.0);
    auto clamp = [&](double num, double den) {
        if (num == kNegInf && den == kNegInf) return 0.0;
        const double v = num - den;
        return std::clamp(v, -llr_max, llr_max);
    };
    const double iv = sw.inv_var();
    for (int j = 0; j < n; ++j) {
        double pos = kNegInf, neg = kNegInf;
        for (int r = 0; r < pam.p; ++r) {
            if (logw[j][r] == kNegInf) continue;
            const double t = sw.y[j] * pam.amplitudes[r] * iv;
            const double lc = log_cosh(t);
            pos = log_sum_exp(pos, logw[j][r] + t - lc);
            neg = log_sum_exp(neg, logw[j][r] - t - lc);
        }
        out.llr[j * pam.bits_per_symbol] = clamp(pos, neg);
        for (int k = 0; k < lab.amp_width; ++k) {
            double zero = kNegInf, one = kNegInf;
            for (int r = 0; r < pam.p; ++r) {
                if (lab.amp_bit(r, k)) one = log_sum_exp(one, logw[j][r]);
                else zero = log_sum_exp(zero, logw[j][r]);
            }
            out.llr[j * pam.bits_per_symbol + 1 + k] = clamp(zero, one);
        }
    }
    return out;
}

/// Marginal amplitude prior of a shell: sum_c |C_c| m_a(c) / (n sum_c |C_c|).
inline std::vector<double> symbol_prior(const ShellCode& code) {
    std::vector<double> prior(code.pam().p, 0.0);
    const double total_log = log2_big(code.size());
    for (int c = 0; c < code.k(); ++c) {
        const double weight = std::exp2(log2_big(code.class_size(c)) - total_log);
        for (int r = 0; r < code.pam().p; ++r) prior[r] += weight * code.full_m(c)[r] / code.n();
    }
    return prior;
}

/// Symbol-by-symbol demapping: each position is treated as independent with
/// the code's marginal amplitude prior over all 2p symbols.
inline LlrVector llr_symbol_by_symbol(const SoftWord& sw, const ShellCode& code,
                                      double llr_max = kDefaultLlrMax) {
    const Pam& pam = code.pam();
    const auto prior = symbol_prior(code);
    const double iv = sw.inv_var();
    std::vector<std::vector<double>> logw(sw.n(), std::vector<double>(pam.p, kNegInf));
    for (int j = 0; j < sw.n(); ++j) {
        for (int r = 0; r < pam.p; ++r) {
            if (prior[r] <= 0.0) continue;
            const double a = pam.amplitudes[r];
            // log m_a + log(N(y; a) + N(y; -a)) up to a per-position constant.
            logw[j][r] = std::log(prior[r]) - 0.5 * a * a * iv + log_cosh(sw.y[j] * a * iv);
        }
    }
    return llrs_from_amplitude_metrics(logw, sw, pam, make_labeling(pam), llr_max);
}

inline LlrVector llr_symbol_by_symbol(const SoftWord& sw, const TypeClass& tc, const Pam& pam,
                                      double llr_max = kDefaultLlrMax) {
    return llr_symbol_by_symbol(sw, ShellCode::single(tc, pam), llr_max);
}

/// Exact demapping by enumeration of every unsigned codeword that survives
/// expurgation; the sign patterns of each orbit are summed in closed form.
/// Precomputes the membership mask once per code and index map.
class ExactDemapper {
public:
    static constexpr std::size_t kDefaultBudget = std::size_t{1} << 22;

    ExactDemapper(const ShellCode& code, std::optional<CodeIndexMap> map = std::nullopt,
                  std::size_t budget = kDefaultBudget, double llr_max = kDefaultLlrMax)
        : code_(code), llr_max_(llr_max) {
        if (code.size() > budget)
            throw BudgetExceeded("exact demapping: " + code.size().str() + " unsigned codewords exceed the budget of " +
                                 std::to_string(budget));
        const auto total = code.size().convert_to<std::size_t>();
        if (map) {
            if (map->modulus != code.size())
                throw InvalidParameter("exact demapping: index map modulus differs from the code size");
            member_.assign(total, 0);
            const auto cap = map->capacity().convert_to<std::size_t>();
            for (std::size_t i = 0; i < cap; ++i) member_[spread(BigInt(i), *map).convert_to<std::size_t>()] = 1;
        }
    }

    LlrVector operator()(const SoftWord& sw) const {
        const Pam& pam = code_.pam();
        const int n = code_.n();
        if (sw.n() != n) throw InvalidParameter("exact demapping: word length mismatch");
        const double iv = sw.inv_var();

        // Reference: best orbit over all classes bounds every term from above.
        std::vector<double> abs_y(n);
        for (int j = 0; j < n; ++j) abs_y[j] = std::abs(sw.y[j]);
        std::vector<double> sorted_y = abs_y;
        std::sort(sorted_y.begin(), sorted_y.end());
        double ref = kNegInf;
        for (const auto& tc : code_.classes()) {
            const auto x = tc.initial_vector();
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += log_cosh(x[k] * sorted_y[k] * iv);
            ref = std::max(ref, s);
        }

        std::vector<std::vector<double>> acc(n, std::vector<double>(pam.p, 0.0));
        std::size_t q = 0;
        std::vector<int> path(n);
        std::vector<double> partial(n + 1, 0.0);
        for (int c = 0; c < code_.k(); ++c) {
            const TypeClass& tc = code_.type_class(c);
            std::vector<std::vector<double>> table(n, std::vector<double>(tc.u()));
            std::vector<int> rank(tc.u());
            for (int l = 0; l < tc.u(); ++l) {
                rank[l] = pam.rank_of(tc.mu()[l]);
                for (int j = 0; j < n; ++j) table[j][l] = log_cosh(sw.y[j] * tc.mu()[l] * iv);
            }
            std::vector<int> left = tc.m();
            // Depth-first walk in lexicographic order: leaf counter == codeword rank.
            auto walk = [&](auto&& self, int depth) -> void {
                if (depth == n) {
                    if (member_.empty() || member_[q]) {
                        const double w = std::exp(partial[n] - ref);
                        for (int j = 0; j < n; ++j) acc[j][rank[path[j]]] += w;
                    }
                    ++q;
                    return;
                }
                for (int l = 0; l < tc.u(); ++l) {
                    if (left[l] == 0) continue;
                    --left[l];
                    path[depth] = l;
                    partial[depth + 1] = partial[depth] + table[depth][l];
                    self(self, depth + 1);
                    ++left[l];
                }
            };
            walk(walk, 0);
        }

        std::vector<std::vector<double>> logw(n, std::vector<double>(pam.p, kNegInf));
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < pam.p; ++r)
                if (acc[j][r] > 0.0) logw[j][r] = std::log(acc[j][r]);
        return llrs_from_amplitude_metrics(logw, sw, pam, make_labeling(pam), llr_max_);
    }

    const ShellCode& code() const { return code_; }

private:
    ShellCode code_;
    std::vector<std::uint8_t> member_;  // empty: every codeword is a member
    double llr_max_;
};

inline LlrVector llr_exact(const SoftWord& sw, const ShellCode& code, std::optional<CodeIndexMap> map = std::nullopt,
                           std::size_t budget = ExactDemapper::kDefaultBudget) {
    return ExactDemapper(code, std::move(map), budget)(sw);
}

namespace detail {

// Sum of log cosh over the sorted matching of `x` (ascending) and the sorted
// |y| values with one entry of each removed.
inline double sorted_sum_skipping(const std::vector<int>& x, int skip_x, const std::vector<double>& ys, int skip_y,
                                  double iv) {
    double s = 0.0;
    const int n = static_cast<int>(x.size());
    int xi = 0, yi = 0;
    for (int k = 0; k < n - 1; ++k) {
        if (xi == skip_x) ++xi;
        if (yi == skip_y) ++yi;
        s += log_cosh(x[xi] * ys[yi] * iv);
        ++xi;
        ++yi;
    }
    return s;
}

}  // namespace detail

/// Most likely orbit of `tc` with position j frozen to amplitude s: y_j and one
/// copy of s are removed and the rest is matched by sorting.
inline std::vector<int> frozen_best_orbit(const SoftWord& sw, const TypeClass& tc, int j, int s) {
    const int n = tc.n();
    if (sw.n() != n) throw InvalidParameter("frozen_best_orbit: length mismatch");
    if (j < 0 || j >= n) throw InvalidParameter("frozen_best_orbit: position out of range");
    if (tc.letter_of(s) < 0) throw InvalidParameter("frozen_best_orbit: amplitude " + std::to_string(s) + " not in type");
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
        if (i != j) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(sw.y[a]) < std::abs(sw.y[b]); });
    std::vector<int> x = tc.initial_vector();
    x.erase(std::find(x.begin(), x.end(), s));
    std::vector<int> out(n);
    out[j] = s;
    for (int k = 0; k < n - 1; ++k) out[order[k]] = x[k];
    return out;
}

/// Orbit decoding with frozen symbols. For every position j and amplitude a
/// the best orbit with c_j = a (best over classes) enters the LLR sums.
/// `op_count`, if given, accumulates the number of log-cosh evaluations.
inline LlrVector llr_orbit_frozen(const SoftWord& sw, const ShellCode& code, double llr_max = kDefaultLlrMax,
                                  std::size_t* op_count = nullptr) {
    const Pam& pam = code.pam();
    const int n = code.n();
    if (sw.n() != n) throw InvalidParameter("llr_orbit_frozen: length mismatch");
    const double iv = sw.inv_var();

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(sw.y[a]) < std::abs(sw.y[b]); });
    std::vector<double> ys(n);
    std::vector<int> pos_rank(n);
    for (int k = 0; k < n; ++k) {
        ys[k] = std::abs(sw.y[order[k]]);
        pos_rank[order[k]] = k;
    }

    std::vector<std::vector<double>> logw(n, std::vector<double>(pam.p, kNegInf));
    std::size_t ops = 0;
    for (const auto& tc : code.classes()) {
        const auto x = tc.initial_vector();
        for (int l = 0; l < tc.u(); ++l) {
            const int s = tc.mu()[l];
            const int r = pam.rank_of(s);
            const int skip_x = static_cast<int>(std::lower_bound(x.begin(), x.end(), s) - x.begin());
            for (int j = 0; j < n; ++j) {
                const double v = log_cosh(s * ys[pos_rank[j]] * iv) +
                                 detail::sorted_sum_skipping(x, skip_x, ys, pos_rank[j], iv);
                ops += static_cast<std::size_t>(n);
                logw[j][r] = std::max(logw[j][r], v);
            }
        }
    }
    if (op_count) *op_count += ops;
    return llrs_from_amplitude_metrics(logw, sw, pam, make_labeling(pam), llr_max);
}

inline LlrVector llr_orbit_frozen(const SoftWord& sw, const TypeClass& tc, const Pam& pam,
                                  double llr_max = kDefaultLlrMax) {
    return llr_orbit_frozen(sw, ShellCode::single(tc, pam), llr_max);
}

}  // namespace permshell
