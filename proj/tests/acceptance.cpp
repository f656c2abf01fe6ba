// Acceptance checks. Usage: acceptance [criterion ...]; with no arguments
// every criterion runs. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "permshell/permshell.hpp"

using namespace permshell;

namespace {

// Tolerances and budgets.
constexpr double kLlrTriple = 0.005;
constexpr double kOrbitRel = 1e-9;
constexpr double kTableLog2 = 0.01;
constexpr double kBoltzmannM = 0.01;
constexpr double kBoltzmannLambda = 0.001;
constexpr double kBcjrAbs = 1e-9;
constexpr double kSaturation = 0.01;
constexpr std::size_t kBmdTrials = 10000;
constexpr double kBmdSnrDb = 10.0;
constexpr std::size_t kPasFrames = 2000;
constexpr double kPasSnrDb = 12.0;
constexpr std::size_t kMiTrials = 2000;
constexpr std::size_t kListN50 = 15625;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string data(const std::string& name) { return std::string(PERMSHELL_TEST_DATA) + "/" + name; }

void criterion1(Outcome& o) {
    const std::vector<double> x{1, 1, 1, 1, 1, 1, 1, 3};
    const std::vector<double> z{2.1, 0.2, 0.1, 1.5, 0.7, 1.6, -1.9, 0.2};
    std::vector<double> y(8);
    for (int i = 0; i < 8; ++i) y[i] = x[i] + z[i];
    const SoftWord sw(y, 1.0);
    const auto code = ShellCode::single(TypeClass({1, 3}, {7, 1}), make_pam(2));
    const double e = llr_exact(sw, code).amp(0, 0);
    const double s = llr_symbol_by_symbol(sw, code).amp(0, 0);
    const double f = llr_orbit_frozen(sw, code).amp(0, 0);
    o.detail << "exact=" << fmt(e) << " sbs=" << fmt(s) << " orbit=" << fmt(f);
    o.check(std::abs(e - 0.69) <= kLlrTriple, "exact");
    o.check(std::abs(s + 0.25) <= kLlrTriple, "sbs");
    o.check(std::abs(f - 0.20) <= kLlrTriple, "orbit");
}

void criterion2(Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-6.0, 6.0), s(0.2, 4.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng() % 10);
        std::vector<int> x(n);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = 2 * static_cast<int>(rng() % 4) + 1;
            y[i] = u(rng);
        }
        const SoftWord sw(y, s(rng));
        // Sign sum in the log domain with long double accumulation.
        std::vector<long double> terms;
        for (long m = 0; m < (1L << n); ++m) {
            long double d2 = 0.0L;
            for (int i = 0; i < n; ++i) {
                const long double c = (m >> i & 1) ? -x[i] : x[i];
                d2 += (y[i] - c) * (y[i] - c);
            }
            terms.push_back(-d2 / (2.0L * sw.sigma * sw.sigma));
        }
        const long double top = *std::max_element(terms.begin(), terms.end());
        long double acc = 0.0L;
        for (long double v : terms) acc += std::exp(v - top);
        const long double log_sum = top + std::log(acc) - n * std::log(2.0L) -
                                    n * std::log(std::sqrt(2.0L * std::numbers::pi_v<long double>) * sw.sigma);
        const double rel = std::expm1(static_cast<double>(orbit_loglik(x, sw) - log_sum));
        worst = std::max(worst, std::abs(rel));
    }
    o.detail << "max rel err " << worst;
    o.check(worst < kOrbitRel, "relative error");
}

void criterion3(Outcome& o) {
    AssignmentInstance<> ex;
    ex.w_rows = {1, 2, 3, 4};
    ex.w_cols = {1, 2, 3, 4};
    std::vector<double> got;
    for (const auto& s : murty_k_best(ex, 5).solutions) got.push_back(s.reward);
    o.check(got == std::vector<double>{30, 29, 29, 29, 28}, "4x4 ranking");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    int mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        AssignmentInstance<> inst;
        for (int i = 0; i < n; ++i) {
            inst.w_rows.push_back(u(rng));
            inst.w_cols.push_back(u(rng));
        }
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<double> bf;
        do {
            double r = 0.0;
            for (int i = 0; i < n; ++i) r += inst.w_rows[i] * inst.w_cols[perm[i]];
            bf.push_back(r);
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::sort(bf.begin(), bf.end());
        std::vector<double> mk;
        for (const auto& s : murty_k_best(inst, bf.size()).solutions) mk.push_back(s.reward);
        std::sort(mk.begin(), mk.end());
        bool same = mk.size() == bf.size();
        for (std::size_t i = 0; same && i < bf.size(); ++i) same = std::abs(mk[i] - bf[i]) < 1e-9;
        if (!same) ++mismatches;
    }
    o.detail << "4x4 ranking";
    for (double r : got) o.detail << " " << r;
    o.detail << "; random mismatches " << mismatches << "/100";
    o.check(mismatches == 0, "random instances");
}

void criterion4(Outcome& o) {
    const Pam pam = make_pam(4);
    const auto shell = ShellCode::complete(8, 32, pam);
    bool ok = shell.k() == 2;
    if (ok) {
        ok = shell.type_class(0).initial_vector() == std::vector<int>{1, 1, 1, 1, 1, 3, 3, 3} &&
             shell.class_size(0) * pow2_big(8) == 14336 &&
             shell.type_class(1).initial_vector() == std::vector<int>{1, 1, 1, 1, 1, 1, 1, 5} &&
             shell.class_size(1) * pow2_big(8) == 2048;
    }
    o.check(ok, "(8,32,4) classes");
    const auto t = enumerate_type_classes(50, 530, pam).size();
    o.check(t == 113, "class count");
    o.detail << "(8,32,4) ok=" << ok << " t(50,530,4)=" << t << " log2 sizes";
    const std::vector<std::pair<std::vector<int>, double>> table{
        {{24, 15, 7, 4}, 79.87}, {{21, 18, 8, 3}, 79.40}, {{23, 15, 9, 3}, 78.45}};
    for (const auto& [m, want] : table) {
        const double got = log2_big(TypeClass({1, 3, 5, 7}, m).size());
        o.detail << " " << fmt(got, 2) << "/" << fmt(want, 2);
        o.check(std::abs(got - want) <= kTableLog2, "log2 size of class " + std::to_string(m[0]) + "," +
                                                        std::to_string(m[1]) + "," + std::to_string(m[2]) + "," +
                                                        std::to_string(m[3]));
    }
}

void criterion5(Outcome& o) {
    const auto fit = boltzmann_fit(50, 530, make_pam(4));
    const std::vector<double> want{22.38, 16.12, 8.37, 3.13};
    o.detail << "lambda=" << fmt(fit.lambda) << " m=";
    for (int i = 0; i < 4; ++i) {
        o.detail << (i ? "," : "") << fmt(fit.m_real[i], 3);
        o.check(std::abs(fit.m_real[i] - want[i]) <= kBoltzmannM, "m_" + std::to_string(i + 1));
    }
    o.check(std::abs(fit.lambda + 0.041) <= kBoltzmannLambda, "lambda");
}

void criterion6(Outcome& o) {
    int checked = 0;
    for (const auto& pr : presets()) {
        const auto code = pr.build();
        if (code.size() > 100000) continue;
        ++checked;
        for (int c = 0; c < code.k(); ++c) {
            const auto& tc = code.type_class(c);
            const long size = code.class_size(c).convert_to<long>();
            std::vector<int> prev;
            for (long i = 0; i < size; ++i) {
                const auto letters = encode_v1(BigInt(i), tc);
                if (inv_encode_v1(letters, tc) != i) {
                    o.check(false, pr.name + " inverse at " + std::to_string(i));
                    return;
                }
                const auto x = amplitudes_of(letters, tc);
                if (i > 0 && !(prev < x)) {
                    o.check(false, pr.name + " monotone at " + std::to_string(i));
                    return;
                }
                prev = x;
            }
        }
    }
    const TypeClass code2({1, 3, 5, 7}, {5, 3, 3, 1});
    const auto boundary = amplitudes_of(encode_v1(pow2_big(16) - 1, code2), code2);
    o.detail << checked << " presets exhausted; boundary";
    for (int v : boundary) o.detail << " " << v;
    o.check(boundary == std::vector<int>{3, 5, 1, 3, 1, 1, 1, 3, 5, 1, 5, 7}, "boundary codeword");
}

void criterion7(Outcome& o) {
    const auto code = ShellCode::complete(8, 32, make_pam(4));
    const auto t = build_trellis(8, 32, code.pam());
    const ExactDemapper exact(code);
    Rng rng(7);
    double worst = 0.0;
    for (double sigma : {0.3, 1.0, 3.0}) {
        for (int w = 0; w < 100; ++w) {
            const auto x = apply_random_signs(encode_shell_amplitudes(uniform_below(code.size(), rng), code), rng);
            const auto sw = awgn(std::span<const int>(x), sigma, rng);
            const auto a = bcjr_llrs(t, sw);
            const auto b = exact(sw);
            for (std::size_t k = 0; k < a.llr.size(); ++k) worst = std::max(worst, std::abs(a.llr[k] - b.llr[k]));
        }
    }
    o.detail << "max abs diff " << worst;
    o.check(worst <= kBcjrAbs, "max abs diff");
}

void criterion8(Outcome& o) {
    int shells = 0, state_violations = 0, path_mismatches = 0;
    long worst_excess = 0;
    for (int n : {8, 12, 16, 24, 32, 48, 64}) {
        for (int p : {2, 3, 4}) {
            const Pam pam = make_pam_levels(p);
            const long a2 = static_cast<long>(pam.amplitudes.back()) * pam.amplitudes.back();
            const long top = (n * (a2 - 1)) / 8;
            for (int step = 1; step <= 5; ++step) {
                const long e = n + 8 * std::max(1L, top * step / 6);
                std::vector<TypeClass> classes;
                try {
                    classes = enumerate_type_classes(n, e, pam);
                } catch (const Error&) {
                    continue;
                }
                if (classes.empty()) continue;
                ++shells;
                const auto trellis = build_trellis(n, e, pam);
                const long bound = (e - n) / 8;
                for (int d = 3; d <= n - 3; ++d) {
                    const long s = static_cast<long>(trellis.states(d).size());
                    if (s > bound) {
                        ++state_violations;
                        worst_excess = std::max(worst_excess, s - bound);
                    }
                }
                BigInt total = 0;
                for (const auto& tc : classes) total += size_and_rate(tc).size;
                if (trellis.path_count() != total) ++path_mismatches;
            }
        }
    }
    o.detail << shells << " shells; depths 3..n-3 over (E-n)/8: " << state_violations << " (max excess " << worst_excess
             << "); path mismatches " << path_mismatches;
    o.check(state_violations == 0, "state bound");
    o.check(path_mismatches == 0, "path count");
}

void criterion9(Outcome& o) {
    const auto code = find_preset("n12code2").build();
    const auto map = make_index_map(code.size(), std::uint64_t{9});
    const auto ch = ChannelConfig::from_snr_db(code.energy(), code.n(), kBmdSnrDb);
    const auto est =
        bmd_montecarlo(code, map, {DemapMethod::Exact, DemapMethod::Sbs, DemapMethod::Orbit}, ch.sigma, kBmdTrials, 9);
    const auto& ex = est[0];
    const auto& sbs = est[1];
    const auto& orb = est[2];
    // Rates differ by mean(H_sbs - H_orbit) on the same words.
    const auto gap = bootstrap_paired_ci(sbs.per_trial, orb.per_trial, 91);
    const auto ex_orb = bootstrap_paired_ci(orb.per_trial, ex.per_trial, 92);
    const auto ex_sbs = bootstrap_paired_ci(sbs.per_trial, ex.per_trial, 93);
    o.detail << "snr " << kBmdSnrDb << " dB: bmd exact=" << fmt(ex.rate) << " orbit=" << fmt(orb.rate)
             << " sbs=" << fmt(sbs.rate) << " bits/word; orbit-sbs CI [" << fmt(gap.first) << ", "
             << fmt(gap.second) << "]";
    o.check(gap.first > 0.0, "orbit over sbs gap");
    o.check(ex_orb.second >= 0.0 && ex_sbs.second >= 0.0, "exact not below the others");

    const auto pc = load_alist(data("qc648_r23.alist"));
    const auto pch = ChannelConfig::from_snr_db(code.energy(), code.n(), kPasSnrDb);
    const auto bler = pas_bler(code, map, pc, {DemapMethod::Sbs, DemapMethod::Orbit}, pch.sigma, kPasFrames, 19);
    const auto diff = bootstrap_paired_ci(bler[1].errors_per_frame, bler[0].errors_per_frame, 94);
    o.detail << "; pas " << kPasSnrDb << " dB bler sbs=" << bler[0].bler << " orbit=" << bler[1].bler
             << " orbit-sbs errors/frame CI [" << fmt(diff.first) << ", " << fmt(diff.second) << "]";
    o.check(diff.second <= 0.0, "bler orbit <= sbs");
}

void criterion10(Outcome& o) {
    std::vector<std::pair<MiEstimate, double>> all;  // estimate, snr
    const auto code2 = find_preset("n12code2").build();
    {
        const auto ch = ChannelConfig::from_snr_db(code2.energy(), code2.n(), 30.0);
        const auto est = mi_montecarlo(code2, ch.sigma, kMiTrials, 16, 101);
        all.emplace_back(est, 30.0);
        const double want = std::log2(110880.0 * 4096.0) / 12.0;
        o.detail << "n12 30dB mi=" << fmt(est.mi) << " want " << fmt(want);
        o.check(std::abs(est.mi - want) <= kSaturation, "saturation");
    }
    for (const char* name : {"demo8", "shell8_32_4"}) {
        const auto code = find_preset(name).build();
        const auto full = static_cast<std::size_t>(code.size().convert_to<long>());
        for (double snr : {6.0, 12.0}) {
            const auto ch = ChannelConfig::from_snr_db(code.energy(), code.n(), snr);
            const auto a = mi_montecarlo(code, ch.sigma, kMiTrials, 4, 103);
            const auto b = mi_montecarlo(code, ch.sigma, kMiTrials, full, 103);
            all.emplace_back(a, snr);
            all.emplace_back(b, snr);
            if (snr == 12.0) {
                o.detail << "; " << name << " 12dB L=4 " << fmt(a.mi) << " L=" << full << " " << fmt(b.mi);
                o.check(std::abs(a.mi - b.mi) <= 2 * std::max(a.std_err, b.std_err), std::string("small L ") + name);
            }
        }
    }
    // n = 50 code against uniform 8-PAM on a grid, list size 5^6.
    const auto code50 = find_preset("n50code2").build();
    const Pam pam = make_pam(4);
    std::vector<double> delta;
    o.detail << "; n50 grid";
    for (double snr : {12.0, 14.0, 16.0, 18.0, 20.0, 22.0}) {
        const auto ch = ChannelConfig::from_snr_db(code50.energy(), code50.n(), snr);
        const auto est = mi_montecarlo(code50, ch.sigma, kMiTrials / 2, kListN50, 105);
        all.emplace_back(est, snr);
        const double u = pam_mi_uniform(pam, snr);
        delta.push_back(est.mi - u);
        o.detail << " " << snr << ":" << fmt(est.mi, 3) << "/" << fmt(u, 3);
    }
    bool crossing = false;
    for (std::size_t i = 0; i + 1 < delta.size(); ++i) crossing |= (delta[i] > 0) != (delta[i + 1] > 0);
    o.check(crossing, "n50 crossing of uniform 8-PAM");
    int over = 0;
    for (const auto& [e, snr] : all)
        if (e.mi > awgn_capacity(snr) + 3 * e.std_err) {
            ++over;
            o.detail << "; over capacity at " << snr << " dB: " << fmt(e.mi) << " > " << fmt(awgn_capacity(snr))
                     << " (L=" << e.list_size << ")";
        }
    o.detail << "; above capacity " << over << "/" << all.size();
    o.check(over == 0, "capacity ceiling");
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                              criterion5, criterion6, criterion7, criterion8,
                                                              criterion9, criterion10};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1-10 ...]\n");
            return 2;
        }
        which.push_back(c);
    }
    if (which.empty())
        for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) which.push_back(c);
    int failures = 0;
    for (int c : which) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[c - 1](o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s (%.1f s) %s\n", c, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures ? 1 : 0;
}
