#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "permshell/assignment.hpp"
#include "permshell/constellation.hpp"
#include "permshell/demap.hpp"
#include "permshell/ldpc.hpp"
#include "permshell/permcode.hpp"
#include "permshell/shellcode.hpp"
#include "permshell/stats.hpp"
#include "permshell/trellis.hpp"

namespace permshell {

using Rng = std::mt19937_64;

/// PRNG stream for one shard of a run.
inline Rng shard_rng(std::uint64_t seed, std::uint64_t shard) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
    return Rng(seq);
}

/// Runs `body(shard, begin, end)` over fixed-size shards of [0, count). Shard
/// boundaries do not depend on the worker count, so results are identical for
/// any number of workers.
inline void run_sharded(std::size_t count, std::size_t shard_size, unsigned workers,
                        const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t shards = (count + shard_size - 1) / shard_size;
    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, shards));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t s; (s = next.fetch_add(1)) < shards && !failed;) {
            try {
                body(s, s * shard_size, std::min(count, (s + 1) * shard_size));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

inline constexpr std::size_t kShardSize = 64;

/// Per-dimension SNR E / (n sigma^2).
struct ChannelConfig {
    double sigma = 1.0;
    double snr_db = 0.0;
    std::uint64_t seed = 0;

    static ChannelConfig from_snr_db(long energy, int n, double snr_db, std::uint64_t seed = 0) {
        if (energy <= 0 || n <= 0) throw InvalidParameter("ChannelConfig: energy and n must be positive");
        const double snr = std::pow(10.0, snr_db / 10.0);
        return {std::sqrt(static_cast<double>(energy) / (n * snr)), snr_db, seed};
    }

    static ChannelConfig from_sigma(long energy, int n, double sigma, std::uint64_t seed = 0) {
        if (!(sigma > 0.0)) throw InvalidParameter("ChannelConfig: sigma must be positive");
        return {sigma, 10.0 * std::log10(static_cast<double>(energy) / (n * sigma * sigma)), seed};
    }
};

inline double awgn_capacity(double snr_db) { return 0.5 * std::log2(1.0 + std::pow(10.0, snr_db / 10.0)); }

/// SNR / (2^(2 rho) - 1) in dB, rho in bits per dimension.
inline double snr_norm_db(double snr_db, double rho) {
    return snr_db - 10.0 * std::log10(std::exp2(2.0 * rho) - 1.0);
}

template <class G>
SoftWord awgn(std::span<const int> x, double sigma, G& rng) {
    if (!(sigma > 0.0)) throw InvalidParameter("awgn: sigma must be positive");
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + sigma * z(rng);
    return SoftWord(std::move(y), sigma);
}

/// Variant II codeword from an unsigned one and random signs.
template <class G>
std::vector<int> apply_random_signs(std::vector<int> x, G& rng) {
    for (auto& v : x)
        if (rng() & 1U) v = -v;
    return x;
}

// ---------------------------------------------------------------------------
// Mutual information

struct MiEstimate {
    double mi = 0.0;  // bits per dimension
    double std_err = 0.0;
    std::size_t trials = 0;
    std::size_t list_size = 0;
    double entropy = 0.0;  // log2(|C_II|) / n
};

/// Log-rewards sum_i log cosh(|y_i| x_i / sigma^2) of the L most likely orbits
/// of the code, best first.
inline std::vector<double> best_orbit_rewards(const ShellCode& code, const SoftWord& sw, std::size_t L) {
    std::vector<double> rows(sw.n());
    for (int j = 0; j < sw.n(); ++j) rows[j] = std::abs(sw.y[j]);
    std::vector<double> all;
    for (const auto& tc : code.classes()) {
        AssignmentInstance<LogCoshRule> inst;
        inst.w_rows = rows;
        inst.w_cols.assign(tc.mu().begin(), tc.mu().end());
        inst.capacity = tc.m();
        inst.rule = LogCoshRule{sw.inv_var()};
        const auto kb = murty_k_best(inst, L);
        for (const auto& s : kb.solutions) all.push_back(s.reward);
    }
    std::sort(all.begin(), all.end(), std::greater<>());
    if (all.size() > L) all.resize(L);
    return all;
}

/// Monte-Carlo estimate of I(X; Y) / n with p(y) approximated by the L most
/// likely orbits. Uniform inputs over the whole Variant II code.
inline MiEstimate mi_montecarlo(const ShellCode& code, double sigma, std::size_t trials, std::size_t L,
                                std::uint64_t seed, unsigned workers = 0) {
    if (L < 1) throw InvalidParameter("mi_montecarlo: L must be >= 1");
    if (!(sigma > 0.0)) throw InvalidParameter("mi_montecarlo: sigma must be positive");
    const int n = code.n();
    const double log_m = log2_big(code.size()) * std::numbers::ln2;
    const double log_norm = n * std::log(std::sqrt(2.0 * std::numbers::pi) * sigma);
    std::vector<double> info(trials);
    run_sharded(trials, kShardSize, workers, [&](std::size_t shard, std::size_t b, std::size_t e) {
        Rng rng = shard_rng(seed, shard);
        for (std::size_t t = b; t < e; ++t) {
            const BigInt q = uniform_below(code.size(), rng);
            const auto x = apply_random_signs(encode_shell_amplitudes(q, code), rng);
            const SoftWord sw = awgn(std::span<const int>(x), sigma, rng);
            double d2 = 0.0;
            for (int j = 0; j < n; ++j) d2 += (sw.y[j] - x[j]) * (sw.y[j] - x[j]);
            const double log_pyx = -0.5 * d2 * sw.inv_var() - log_norm;
            const auto rewards = best_orbit_rewards(code, sw, L);
            double lse = kNegInf;
            for (double r : rewards) lse = log_sum_exp(lse, r);
            const double log_fo_const = -0.5 * (sw.energy_y + static_cast<double>(code.energy())) * sw.inv_var() - log_norm;
            const double log_py = lse + log_fo_const - log_m;
            info[t] = (log_pyx - log_py) / (n * std::numbers::ln2);
        }
    });
    MiEstimate est;
    est.mi = mean_of(info);
    est.std_err = bootstrap_se(info, seed ^ 0x5bd1e995ULL);
    est.trials = trials;
    est.list_size = L;
    est.entropy = (n + log2_big(code.size())) / n;
    return est;
}

// ---------------------------------------------------------------------------
// PAM baselines

/// Maxwell-Boltzmann distribution exp(-nu x^2) / Z over pam.symbols().
inline std::vector<double> mb_distribution(const Pam& pam, double nu) {
    const auto sym = pam.symbols();
    std::vector<double> p(sym.size());
    double z = 0.0;
    for (std::size_t i = 0; i < sym.size(); ++i) z += p[i] = std::exp(-nu * (sym[i] * sym[i] - 1.0));
    for (double& v : p) v /= z;
    return p;
}

/// Scalar-channel MI in bits for the given distribution over pam.symbols(),
/// with SNR = E[x^2] / sigma^2.
inline double pam_mi(const Pam& pam, const std::vector<double>& probs, double snr_db) {
    const auto sym = pam.symbols();
    if (probs.size() != sym.size()) throw InvalidParameter("pam_mi: distribution size mismatch");
    double total = 0.0, power = 0.0;
    for (std::size_t i = 0; i < sym.size(); ++i) {
        if (probs[i] < 0.0) throw InvalidParameter("pam_mi: negative probability");
        total += probs[i];
        power += probs[i] * sym[i] * sym[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidParameter("pam_mi: distribution does not sum to 1");
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    double mi = 0.0;
    for (std::size_t k = 0; k < sym.size(); ++k) {
        if (probs[k] == 0.0) continue;
        auto f = [&](double z) {
            double lse = kNegInf;
            for (std::size_t l = 0; l < sym.size(); ++l) {
                if (probs[l] == 0.0) continue;
                const double d = sym[k] - sym[l];
                lse = log_sum_exp(lse, std::log(probs[l]) - (d * d + 2.0 * d * sigma * z) / (2.0 * sigma * sigma));
            }
            return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) * (-lse / std::numbers::ln2);
        };
        mi += probs[k] * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -15.0, 15.0, 15, 1e-12);
    }
    return std::max(0.0, mi);
}

inline double pam_mi_uniform(const Pam& pam, double snr_db) {
    return pam_mi(pam, std::vector<double>(pam.size(), 1.0 / pam.size()), snr_db);
}

/// MI of the best Maxwell-Boltzmann input at this SNR (nu >= 0, including the
/// uniform distribution nu = 0).
inline double pam_mi_mb(const Pam& pam, double snr_db, double* nu_out = nullptr) {
    auto neg = [&](double nu) { return -pam_mi(pam, mb_distribution(pam, nu), snr_db); };
    const auto [nu, v] = boost::math::tools::brent_find_minima(neg, 0.0, 1.0, 40);
    const double uniform = -neg(0.0);
    if (uniform >= -v) {
        if (nu_out) *nu_out = 0.0;
        return uniform;
    }
    if (nu_out) *nu_out = nu;
    return -v;
}

// ---------------------------------------------------------------------------
// Demapper dispatch

enum class DemapMethod { Exact, Sbs, Orbit, Bcjr };

inline std::string to_string(DemapMethod m) {
    switch (m) {
        case DemapMethod::Exact: return "exact";
        case DemapMethod::Sbs: return "sbs";
        case DemapMethod::Orbit: return "orbit";
        case DemapMethod::Bcjr: return "bcjr";
    }
    return "?";
}

inline DemapMethod parse_demap_method(const std::string& s) {
    if (s == "exact") return DemapMethod::Exact;
    if (s == "sbs") return DemapMethod::Sbs;
    if (s == "orbit") return DemapMethod::Orbit;
    if (s == "bcjr") return DemapMethod::Bcjr;
    throw InvalidParameter("unknown demapper '" + s + "' (expected exact, sbs, orbit or bcjr)");
}

/// One demapper bound to a code. BCJR runs on the trellis of the complete
/// shell with the code's (n, E).
class Demapper {
public:
    Demapper(DemapMethod method, const ShellCode& code, std::optional<CodeIndexMap> map = std::nullopt,
             std::size_t budget = ExactDemapper::kDefaultBudget)
        : method_(method), code_(code) {
        if (method == DemapMethod::Exact) exact_ = std::make_shared<ExactDemapper>(code, map, budget);
        if (method == DemapMethod::Bcjr)
            trellis_ = std::make_shared<EnergyTrellis>(code.n(), code.energy(), code.pam());
    }

    LlrVector operator()(const SoftWord& sw) const {
        switch (method_) {
            case DemapMethod::Exact: return (*exact_)(sw);
            case DemapMethod::Sbs: return llr_symbol_by_symbol(sw, code_);
            case DemapMethod::Orbit: return llr_orbit_frozen(sw, code_);
            case DemapMethod::Bcjr: return bcjr_llrs(*trellis_, sw);
        }
        return {};
    }

    DemapMethod method() const { return method_; }

private:
    DemapMethod method_;
    ShellCode code_;
    std::shared_ptr<const ExactDemapper> exact_;
    std::shared_ptr<const EnergyTrellis> trellis_;
};

/// Label bits of a signed codeword in LlrVector order.
inline Bits label_bits(std::span<const int> x, const Pam& pam, const Labeling& lab) {
    Bits out;
    out.reserve(x.size() * pam.bits_per_symbol);
    for (int v : x) {
        const int r = pam.rank_of(std::abs(v));
        if (v == 0 || r < 0) throw InvalidSymbol("label_bits: " + std::to_string(v) + " is not a PAM symbol");
        out.push_back(v < 0 ? 1 : 0);
        for (int k = 0; k < lab.amp_width; ++k) out.push_back(static_cast<std::uint8_t>(lab.amp_bit(r, k)));
    }
    return out;
}

/// Amplitude rank from Gray-coded label bits, MSB first.
inline int rank_from_gray_bits(std::span<const std::uint8_t> bits) {
    unsigned g = 0;
    for (auto b : bits) g = (g << 1) | (b & 1U);
    unsigned r = g;
    for (unsigned s = g >> 1; s; s >>= 1) r ^= s;
    return static_cast<int>(r);
}

/// log2(1 + e^{-s lambda}) with s = +1 for bit 0 and -1 for bit 1.
inline double bit_cross_entropy(std::uint8_t bit, double llr) {
    const double t = bit ? llr : -llr;  // log2(1 + e^t)
    return (std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)))) / std::numbers::ln2;
}

// ---------------------------------------------------------------------------
// BMD rates

struct BmdEstimate {
    DemapMethod method = DemapMethod::Sbs;
    double rate = 0.0;       // bits per codeword
    double entropy_B = 0.0;  // H(B)
    double cond_sum = 0.0;   // sum_i H(B_i | Y), cross-entropy estimate
    double std_err = 0.0;
    std::size_t trials = 0;
    std::vector<double> per_trial;  // cross-entropy sum per word

    double rate_per_dim(int n) const { return rate / n; }
};

/// BMD rates of several demappers on the same transmitted words. Inputs are
/// uniform over the 2^k_a expurgated indices with uniform signs.
inline std::vector<BmdEstimate> bmd_montecarlo(const ShellCode& code, std::optional<CodeIndexMap> map,
                                               const std::vector<DemapMethod>& methods, double sigma,
                                               std::size_t trials, std::uint64_t seed, unsigned workers = 0) {
    const CodeIndexMap m = map ? *map : make_identity_map(code.size());
    if (m.modulus != code.size()) throw InvalidParameter("bmd_montecarlo: index map modulus differs from code size");
    std::vector<Demapper> demappers;
    for (auto meth : methods) demappers.emplace_back(meth, code, m);
    const Labeling lab = make_labeling(code.pam());
    std::vector<std::vector<double>> cond(methods.size(), std::vector<double>(trials));
    run_sharded(trials, kShardSize, workers, [&](std::size_t shard, std::size_t b, std::size_t e) {
        Rng rng = shard_rng(seed, shard);
        for (std::size_t t = b; t < e; ++t) {
            const BigInt i = uniform_below(m.capacity(), rng);
            const auto x = apply_random_signs(encode_shell_amplitudes(spread(i, m), code), rng);
            const auto bits = label_bits(x, code.pam(), lab);
            const SoftWord sw = awgn(std::span<const int>(x), sigma, rng);
            for (std::size_t d = 0; d < demappers.size(); ++d) {
                const auto llr = demappers[d](sw);
                double h = 0.0;
                for (std::size_t k = 0; k < bits.size(); ++k) h += bit_cross_entropy(bits[k], llr.llr[k]);
                cond[d][t] = h;
            }
        }
    });
    std::vector<BmdEstimate> out;
    for (std::size_t d = 0; d < methods.size(); ++d) {
        BmdEstimate est;
        est.method = methods[d];
        est.entropy_B = code.n() + m.k_a;
        est.cond_sum = mean_of(cond[d]);
        est.rate = std::max(est.entropy_B - est.cond_sum, 0.0);
        est.std_err = bootstrap_se(cond[d], seed ^ (0x9e3779b97f4a7c15ULL + d));
        est.trials = trials;
        est.per_trial = std::move(cond[d]);
        out.push_back(std::move(est));
    }
    return out;
}

// ---------------------------------------------------------------------------
// PAS with an LDPC code

/// Placement of permutation-code label bits inside one LDPC frame. Amplitude
/// label bits and surplus sign bits are systematic; parity bits become signs.
struct PasLayout {
    int codewords = 0;        // permutation codewords per frame
    int n = 0;                // symbols per permutation codeword
    int bits_per_symbol = 0;
    int surplus_sign_bits = 0;
    int info_bits = 0;        // net information bits per frame
    std::vector<int> ldpc_pos;  // frame label index -> LDPC codeword position
    std::vector<int> info_slot;  // LDPC info-vector entry -> frame label index
    std::vector<int> surplus_slot;  // sign slots carrying systematic data

    double rho() const { return static_cast<double>(info_bits) / (codewords * n); }
};

inline PasLayout make_pas_layout(const ShellCode& code, const CodeIndexMap& map, const SystematicEncoder& enc) {
    const int bps = code.pam().bits_per_symbol;
    const int n = code.n();
    const int frame = enc.n();
    const int per_cw = n * bps;
    const std::string arith = "N = " + std::to_string(frame) + ", K = " + std::to_string(enc.k()) +
                              ", n = " + std::to_string(n) + ", bits per symbol = " + std::to_string(bps);
    if (frame % per_cw != 0)
        throw SetupError("PAS layout: frame length is not a multiple of n * bits per symbol (" + arith + ")");
    PasLayout lay;
    lay.codewords = frame / per_cw;
    lay.n = n;
    lay.bits_per_symbol = bps;
    const int sign_bits = lay.codewords * n;
    const int parity = frame - enc.k();
    if (parity > sign_bits)
        throw SetupError("PAS layout: " + std::to_string(parity) + " parity bits exceed " +
                         std::to_string(sign_bits) + " sign positions (" + arith + ")");
    lay.surplus_sign_bits = sign_bits - parity;
    lay.info_bits = lay.codewords * map.k_a + lay.surplus_sign_bits;

    std::vector<int> amp_slots, sign_slots;
    for (int s = 0; s < lay.codewords * n; ++s) {
        sign_slots.push_back(s * bps);
        for (int k = 1; k < bps; ++k) amp_slots.push_back(s * bps + k);
    }
    lay.ldpc_pos.assign(frame, -1);
    const auto& info = enc.info_positions();
    const auto& par = enc.parity_positions();
    int ii = 0;
    for (int slot : amp_slots) {
        lay.info_slot.push_back(slot);
        lay.ldpc_pos[slot] = info[ii++];
    }
    for (int s = 0; s < lay.surplus_sign_bits; ++s) {
        lay.info_slot.push_back(sign_slots[s]);
        lay.surplus_slot.push_back(sign_slots[s]);
        lay.ldpc_pos[sign_slots[s]] = info[ii++];
    }
    for (int p = 0; p < parity; ++p) lay.ldpc_pos[sign_slots[lay.surplus_sign_bits + p]] = par[p];
    return lay;
}

struct BlerEstimate {
    DemapMethod method = DemapMethod::Sbs;
    double bler = 0.0;  // permutation-codeword block error rate
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t blocks = 0;
    std::size_t block_errors = 0;
    std::size_t frames = 0;
    std::size_t frame_errors = 0;
    std::vector<double> errors_per_frame;
};

/// End-to-end PAS simulation. All demappers see the same frames and noise.
inline std::vector<BlerEstimate> pas_bler(const ShellCode& code, const CodeIndexMap& map, const ParityCheck& pc,
                                          const std::vector<DemapMethod>& methods, double sigma, std::size_t frames,
                                          std::uint64_t seed, int max_iter = 50, unsigned workers = 0,
                                          PasLayout* layout_out = nullptr) {
    if (map.modulus != code.size()) throw InvalidParameter("pas_bler: index map modulus differs from code size");
    const SystematicEncoder enc(pc);
    const PasLayout lay = make_pas_layout(code, map, enc);
    if (layout_out) *layout_out = lay;
    std::vector<Demapper> demappers;
    for (auto meth : methods) demappers.emplace_back(meth, code, map);
    const Labeling lab = make_labeling(code.pam());
    const int n = code.n();
    const int bps = lay.bits_per_symbol;
    const int per_cw = n * bps;

    std::vector<std::vector<double>> errs(methods.size(), std::vector<double>(frames, 0.0));
    run_sharded(frames, 8, workers, [&](std::size_t shard, std::size_t b, std::size_t e) {
        Rng rng = shard_rng(seed, shard);
        for (std::size_t f = b; f < e; ++f) {
            // Data: one expurgated index per codeword plus surplus sign bits.
            std::vector<BigInt> sent(lay.codewords);
            Bits labels(static_cast<std::size_t>(lay.codewords) * per_cw, 0);
            for (int c = 0; c < lay.codewords; ++c) {
                sent[c] = uniform_below(map.capacity(), rng);
                const auto amps = encode_shell_amplitudes(spread(sent[c], map), code);
                const auto bits = label_bits(amps, code.pam(), lab);
                std::copy(bits.begin(), bits.end(), labels.begin() + c * per_cw);
            }
            for (int slot : lay.surplus_slot) labels[slot] = rng() & 1U;
            Bits info(enc.k());
            for (std::size_t i = 0; i < info.size(); ++i) info[i] = labels[lay.info_slot[i]];
            const auto cw = enc.encode(info);
            for (std::size_t slot = 0; slot < labels.size(); ++slot) labels[slot] = cw[lay.ldpc_pos[slot]];

            std::vector<SoftWord> rx(lay.codewords);
            for (int c = 0; c < lay.codewords; ++c) {
                std::vector<int> x(n);
                for (int j = 0; j < n; ++j) {
                    const int base = c * per_cw + j * bps;
                    const int r = rank_from_gray_bits(std::span<const std::uint8_t>(labels).subspan(base + 1, bps - 1));
                    x[j] = code.pam().amplitudes[r] * (labels[base] ? -1 : 1);
                }
                rx[c] = awgn(std::span<const int>(x), sigma, rng);
            }

            for (std::size_t d = 0; d < demappers.size(); ++d) {
                std::vector<double> llr(enc.n());
                for (int c = 0; c < lay.codewords; ++c) {
                    const auto l = demappers[d](rx[c]);
                    for (int k = 0; k < per_cw; ++k) llr[lay.ldpc_pos[c * per_cw + k]] = l.llr[k];
                }
                const auto dec = bp_decode(pc, llr, max_iter);
                std::vector<char> bad(lay.codewords, 0);
                for (int c = 0; c < lay.codewords; ++c) {
                    std::vector<int> amps(n);
                    for (int j = 0; j < n; ++j) {
                        Bits ab(bps - 1);
                        for (int k = 1; k < bps; ++k) ab[k - 1] = dec.bits[lay.ldpc_pos[c * per_cw + j * bps + k]];
                        amps[j] = code.pam().amplitudes[rank_from_gray_bits(ab)];
                    }
                    const auto q = inv_encode_shell_amplitudes(amps, code);
                    const auto i = q ? unspread(*q, map) : std::nullopt;
                    if (!(i && *i == sent[c])) bad[c] = 1;
                }
                for (int slot : lay.surplus_slot)
                    if (dec.bits[lay.ldpc_pos[slot]] != labels[slot]) bad[slot / per_cw] = 1;
                errs[d][f] = std::count(bad.begin(), bad.end(), 1);
            }
        }
    });

    std::vector<BlerEstimate> out;
    for (std::size_t d = 0; d < methods.size(); ++d) {
        BlerEstimate est;
        est.method = methods[d];
        est.frames = frames;
        est.blocks = frames * lay.codewords;
        for (double v : errs[d]) {
            est.block_errors += static_cast<std::size_t>(v);
            if (v > 0) ++est.frame_errors;
        }
        est.bler = est.blocks ? static_cast<double>(est.block_errors) / est.blocks : 0.0;
        std::tie(est.ci_lo, est.ci_hi) = wilson_interval(est.block_errors, est.blocks);
        est.errors_per_frame = std::move(errs[d]);
        out.push_back(std::move(est));
    }
    return out;
}

}  // namespace permshell
