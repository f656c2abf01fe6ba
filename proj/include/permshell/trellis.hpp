#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "permshell/bigint.hpp"
#include "permshell/constellation.hpp"
#include "permshell/demap.hpp"
#include "permshell/error.hpp"
#include "permshell/shellcode.hpp"

namespace permshell {

/// Trellis of the complete (n, E, p) shell code. States are accumulated
/// energies; every left-to-right path is one unsigned codeword.
class EnergyTrellis {
public:
    struct Edge {
        int rank;  // amplitude rank
        int next;  // state index at depth + 1
    };

    EnergyTrellis(int n, long energy, const Pam& pam) : n_(n), energy_(energy), pam_(pam) {
        if (n < 1) throw InvalidParameter("EnergyTrellis: n must be positive");
        if (energy < n) throw EmptyTrellis("EnergyTrellis: energy below n admits no codeword");
        const auto e = static_cast<std::size_t>(energy);
        std::vector<std::vector<char>> fwd(n + 1, std::vector<char>(e + 1, 0));
        std::vector<std::vector<char>> bwd(n + 1, std::vector<char>(e + 1, 0));
        fwd[0][0] = 1;
        for (int d = 0; d < n; ++d)
            for (std::size_t s = 0; s <= e; ++s)
                if (fwd[d][s])
                    for (int a : pam.amplitudes)
                        if (s + a * a <= e) fwd[d + 1][s + a * a] = 1;
        bwd[n][e] = 1;
        for (int d = n - 1; d >= 0; --d)
            for (std::size_t s = 0; s <= e; ++s)
                for (int a : pam.amplitudes)
                    if (s + a * a <= e && bwd[d + 1][s + a * a]) {
                        bwd[d][s] = 1;
                        break;
                    }
        if (!(fwd[n][e] && bwd[0][0])) throw EmptyTrellis("EnergyTrellis: no codeword with the requested energy");

        states_.resize(n + 1);
        std::vector<std::vector<int>> index(n + 1, std::vector<int>(e + 1, -1));
        for (int d = 0; d <= n; ++d)
            for (std::size_t s = 0; s <= e; ++s)
                if (fwd[d][s] && bwd[d][s]) {
                    index[d][s] = static_cast<int>(states_[d].size());
                    states_[d].push_back(static_cast<long>(s));
                }
        edges_.resize(n);
        for (int d = 0; d < n; ++d) {
            edges_[d].resize(states_[d].size());
            for (std::size_t i = 0; i < states_[d].size(); ++i) {
                const long s = states_[d][i];
                for (int r = 0; r < pam.p; ++r) {
                    const long t = s + static_cast<long>(pam.amplitudes[r]) * pam.amplitudes[r];
                    if (t <= energy && index[d + 1][t] >= 0) edges_[d][i].push_back({r, index[d + 1][t]});
                }
            }
        }
    }

    int n() const { return n_; }
    long energy() const { return energy_; }
    const Pam& pam() const { return pam_; }

    /// Sorted accumulated energies of the states at `depth`.
    const std::vector<long>& states(int depth) const { return states_[depth]; }
    const std::vector<std::vector<Edge>>& edges(int depth) const { return edges_[depth]; }

    std::vector<int> state_counts() const {
        std::vector<int> c;
        for (const auto& s : states_) c.push_back(static_cast<int>(s.size()));
        return c;
    }

    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& layer : edges_)
            for (const auto& out : layer) total += out.size();
        return total;
    }

    /// Number of unsigned codewords, by forward counting.
    BigInt path_count() const {
        std::vector<BigInt> cur(1, BigInt(1));
        for (int d = 0; d < n_; ++d) {
            std::vector<BigInt> next(states_[d + 1].size(), BigInt(0));
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (const auto& ed : edges_[d][i]) next[ed.next] += cur[i];
            cur = std::move(next);
        }
        return cur[0];
    }

private:
    int n_;
    long energy_;
    Pam pam_;
    std::vector<std::vector<long>> states_;
    std::vector<std::vector<std::vector<Edge>>> edges_;
};

inline EnergyTrellis build_trellis(int n, long energy, const Pam& pam) { return EnergyTrellis(n, energy, pam); }

struct BcjrWorkspace {
    std::vector<std::vector<double>> alpha;
    std::vector<std::vector<double>> beta;
};

namespace detail {

inline std::vector<std::vector<double>> branch_metrics(const EnergyTrellis& t, const SoftWord& sw) {
    if (!(sw.sigma > 0.0)) throw InvalidParameter("bcjr: sigma must be positive");
    if (sw.n() != t.n()) throw InvalidParameter("bcjr: word length mismatch");
    const double iv = sw.inv_var();
    std::vector<std::vector<double>> g(t.n(), std::vector<double>(t.pam().p));
    for (int j = 0; j < t.n(); ++j)
        for (int r = 0; r < t.pam().p; ++r) {
            const double a = t.pam().amplitudes[r];
            g[j][r] = log_cosh(sw.y[j] * a * iv) - 0.5 * a * a * iv;
        }
    return g;
}

}  // namespace detail

/// Log-domain forward-backward pass. Returns log P(|x_j| = a_r | y) per
/// position and amplitude rank, normalised per position.
inline std::vector<std::vector<double>> bcjr_log_posteriors(const EnergyTrellis& t, const SoftWord& sw,
                                                            BcjrWorkspace* ws = nullptr) {
    const int n = t.n();
    const int p = t.pam().p;
    const auto g = detail::branch_metrics(t, sw);
    BcjrWorkspace local;
    BcjrWorkspace& w = ws ? *ws : local;
    w.alpha.assign(n + 1, {});
    w.beta.assign(n + 1, {});
    for (int d = 0; d <= n; ++d) {
        w.alpha[d].assign(t.states(d).size(), kNegInf);
        w.beta[d].assign(t.states(d).size(), kNegInf);
    }
    w.alpha[0][0] = 0.0;
    for (int d = 0; d < n; ++d)
        for (std::size_t i = 0; i < t.states(d).size(); ++i)
            for (const auto& e : t.edges(d)[i])
                w.alpha[d + 1][e.next] = log_sum_exp(w.alpha[d + 1][e.next], w.alpha[d][i] + g[d][e.rank]);
    w.beta[n][0] = 0.0;
    for (int d = n - 1; d >= 0; --d)
        for (std::size_t i = 0; i < t.states(d).size(); ++i)
            for (const auto& e : t.edges(d)[i])
                w.beta[d][i] = log_sum_exp(w.beta[d][i], g[d][e.rank] + w.beta[d + 1][e.next]);

    std::vector<std::vector<double>> post(n, std::vector<double>(p, kNegInf));
    for (int d = 0; d < n; ++d) {
        for (std::size_t i = 0; i < t.states(d).size(); ++i)
            for (const auto& e : t.edges(d)[i])
                post[d][e.rank] = log_sum_exp(post[d][e.rank], w.alpha[d][i] + g[d][e.rank] + w.beta[d + 1][e.next]);
        double z = kNegInf;
        for (double v : post[d]) z = log_sum_exp(z, v);
        for (double& v : post[d])
            if (v != kNegInf) v -= z;
    }
    return post;
}

inline std::vector<std::vector<double>> bcjr_posteriors(const EnergyTrellis& t, const SoftWord& sw) {
    auto post = bcjr_log_posteriors(t, sw);
    for (auto& row : post)
        for (double& v : row) v = std::exp(v);
    return post;
}

inline LlrVector bcjr_llrs(const EnergyTrellis& t, const SoftWord& sw, const Labeling& lab,
                           double llr_max = kDefaultLlrMax) {
    return llrs_from_amplitude_metrics(bcjr_log_posteriors(t, sw), sw, t.pam(), lab, llr_max);
}

inline LlrVector bcjr_llrs(const EnergyTrellis& t, const SoftWord& sw, double llr_max = kDefaultLlrMax) {
    return bcjr_llrs(t, sw, make_labeling(t.pam()), llr_max);
}

/// Viterbi on the BCJR metrics, then a class-membership check against a
/// (partial) shell. Returns the signed codeword, or nullopt on reject.
inline std::optional<std::vector<int>> hard_decode_with_membership(const EnergyTrellis& t, const SoftWord& sw,
                                                                   const ShellCode& shell) {
    if (shell.n() != t.n() || shell.energy() != t.energy())
        throw InvalidParameter("hard_decode_with_membership: shell and trellis parameters differ");
    const int n = t.n();
    const auto g = detail::branch_metrics(t, sw);
    std::vector<std::vector<double>> score(n + 1);
    std::vector<std::vector<std::pair<int, int>>> from(n + 1);  // (previous state, rank)
    for (int d = 0; d <= n; ++d) {
        score[d].assign(t.states(d).size(), kNegInf);
        from[d].assign(t.states(d).size(), {-1, -1});
    }
    score[0][0] = 0.0;
    for (int d = 0; d < n; ++d)
        for (std::size_t i = 0; i < t.states(d).size(); ++i)
            for (const auto& e : t.edges(d)[i]) {
                const double v = score[d][i] + g[d][e.rank];
                if (v > score[d + 1][e.next]) {
                    score[d + 1][e.next] = v;
                    from[d + 1][e.next] = {static_cast<int>(i), e.rank};
                }
            }
    std::vector<int> amps(n);
    int s = 0;
    for (int d = n; d > 0; --d) {
        const auto [prev, rank] = from[d][s];
        amps[d - 1] = t.pam().amplitudes[rank];
        s = prev;
    }
    if (!shell.class_of(amps)) return std::nullopt;
    for (int j = 0; j < n; ++j)
        if (sw.y[j] < 0.0) amps[j] = -amps[j];
    return amps;
}

}  // namespace permshell
