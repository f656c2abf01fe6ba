// Command-line front end: census, trellis statistics, encoding, LLR demos and
// simulation campaigns writing CSV plus a JSON manifest.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permshell/permshell.hpp"

using namespace permshell;
using json = nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("--snr: cannot parse '" + tok + "' in '" + text + "'");
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw ConfigError("--snr expects a value or start:step:stop, got '" + text + "'");
    const double a = parts[0], step = parts[1], b = parts[2];
    if (!(step > 0.0) || b < a) throw ConfigError("--snr needs step > 0 and stop >= start, got '" + text + "'");
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(a + i * step);
    return grid;
}

// Independent stream per SNR point, so a resumed run reproduces a full one.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x51u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string signed_vector(const std::vector<int>& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + std::to_string(x[i]);
    return s;
}

int cmd_census(int n, long energy, int p) {
    const Pam pam = make_pam_levels(p);
    const auto classes = enumerate_type_classes(n, energy, pam);
    if (classes.empty()) {
        std::cerr << "census: no type class has n = " << n << ", E = " << energy << ", p = " << p
                  << " (energy must be reachable as a sum of n odd squares up to " << pam.max_amplitude() << "^2)\n";
        return kExitConfig;
    }
    const auto shell = ShellCode::from_classes(classes, pam);
    std::cout << "class";
    for (int r = 0; r < p; ++r) std::cout << ",m" << r + 1;
    std::cout << ",size_log2,cumulative_log2\n";
    for (int c = 0; c < shell.k(); ++c) {
        std::cout << c;
        for (int v : shell.full_m(c)) std::cout << "," << v;
        std::cout << "," << fmt(log2_big(shell.class_size(c)), 4) << ","
                  << fmt(log2_big(shell.cumulative()[c]), 4) << "\n";
    }
    return 0;
}

int cmd_trellis(int n, long energy, int p) {
    const auto t = build_trellis(n, energy, make_pam_levels(p));
    std::cout << "depth,states\n";
    for (int d = 0; d <= n; ++d) std::cout << d << "," << t.states(d).size() << "\n";
    std::cout << "# edges " << t.edge_count() << ", paths " << to_string(t.path_count()) << ", (E-n)/8 = "
              << (energy - n) / 8 << "\n";
    return 0;
}

int cmd_encode(const std::string& preset, const std::string& index, const std::string& signs) {
    const auto code = find_preset(preset).build();
    BigInt q;
    try {
        q = BigInt(index);
    } catch (const std::exception&) {
        throw ConfigError("--index: not an integer: '" + index + "'");
    }
    const auto amps = encode_shell_amplitudes(q, code);
    auto x = amps;
    if (!signs.empty()) {
        if (signs.size() != x.size()) throw ConfigError("--signs needs " + std::to_string(x.size()) + " bits");
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (signs[j] != '0' && signs[j] != '1') throw ConfigError("--signs takes only 0 and 1");
            if (signs[j] == '1') x[j] = -x[j];
        }
    }
    const auto back = inv_encode_shell_amplitudes(amps, code);
    std::cout << signed_vector(x) << "\n";
    std::cout << "# class " << code.class_of(amps).value_or(-1) << ", index round trip "
              << (back && *back == q ? "ok" : "FAILED") << "\n";
    return 0;
}

int cmd_llr_demo(const std::string& preset, const std::string& method, std::vector<double> y, double sigma) {
    const auto m = parse_demap_method(method);
    ShellCode code = find_preset(preset).build();
    if (y.empty()) {
        // Default word: x = (1,...,1,3) plus a fixed noise draw.
        const std::vector<double> z{2.1, 0.2, 0.1, 1.5, 0.7, 1.6, -1.9, 0.2};
        y.resize(8);
        for (int i = 0; i < 8; ++i) y[i] = (i == 7 ? 3.0 : 1.0) + z[i];
    }
    if (static_cast<int>(y.size()) != code.n())
        throw ConfigError("--y has " + std::to_string(y.size()) + " values but the code has n = " +
                          std::to_string(code.n()));
    const Demapper d(m, code);
    const auto llr = d(SoftWord(y, sigma));
    std::cout << "position,bit,llr\n";
    for (int j = 0; j < code.n(); ++j)
        for (int b = 0; b < llr.bits_per_symbol; ++b) std::cout << j << "," << b << "," << fmt(llr.at(j, b)) << "\n";
    return 0;
}

struct SimConfig {
    std::string kind;
    std::string code = "n12code2";
    std::string snr = "10";
    std::size_t trials = 10000;
    std::size_t list = 0;
    std::uint64_t seed = 1;
    std::uint64_t index_seed = 1;
    std::vector<std::string> demappers;
    std::string ldpc;
    std::string out;
    unsigned workers = 0;
    int max_iter = 50;
};

int cmd_simulate(const SimConfig& cfg) {
    const Preset& preset = find_preset(cfg.code);
    const auto code = preset.build();
    const auto grid = parse_grid(cfg.snr);
    if (cfg.trials == 0) throw ConfigError("--trials must be positive");
    if (cfg.out.empty()) throw ConfigError("--out is required");
    std::vector<DemapMethod> methods;
    for (const auto& s : cfg.demappers) methods.push_back(parse_demap_method(s));
    if (cfg.kind != "mi" && methods.empty()) throw ConfigError("simulate " + cfg.kind + " needs --demapper");
    if (cfg.kind == "bler" && cfg.ldpc.empty()) throw ConfigError("simulate bler needs --ldpc");
    const std::size_t L = cfg.list ? cfg.list : (code.n() >= 50 ? 15625 : 1024);
    const auto map = make_index_map(code.size(), cfg.index_seed);
    std::optional<ParityCheck> pc;
    if (!cfg.ldpc.empty()) {
        pc = load_alist(cfg.ldpc);
        make_pas_layout(code, map, SystematicEncoder(*pc));  // fail early on arithmetic
    }

    // Resume: keep rows of SNR points already written.
    std::set<std::string> done;
    bool fresh = true;
    if (std::filesystem::exists(cfg.out)) {
        std::ifstream in(cfg.out);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("snr_db,", 0) == 0) continue;
            done.insert(line.substr(0, line.find(',')));
            fresh = false;
        }
    }
    std::ofstream csv(cfg.out, fresh ? std::ios::trunc : std::ios::app);
    if (!csv) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    if (fresh) {
        csv << "# snr_db = 10 log10(E / (n sigma^2)), per dimension. snr_norm_db uses rho = value (mi, bmd) or "
               "the PAS information rate (bler), in bits per dimension\n";
        csv << "snr_db,snr_norm_db,metric,value,std_err\n";
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double snr = grid[i];
        const std::string key = fmt(snr, 3);
        if (done.contains(key)) continue;
        const auto ch = ChannelConfig::from_snr_db(code.energy(), code.n(), snr);
        const auto seed = point_seed(cfg.seed, i);
        std::ostringstream rows;
        if (cfg.kind == "mi") {
            const auto est = mi_montecarlo(code, ch.sigma, cfg.trials, L, seed, cfg.workers);
            rows << key << "," << fmt(snr_norm_db(snr, est.mi), 4) << ",mi," << fmt(est.mi) << ","
                 << fmt(est.std_err) << "\n";
        } else if (cfg.kind == "bmd") {
            for (const auto& est : bmd_montecarlo(code, map, methods, ch.sigma, cfg.trials, seed, cfg.workers)) {
                const double r = est.rate_per_dim(code.n());
                rows << key << "," << fmt(snr_norm_db(snr, r), 4) << ",bmd_" << to_string(est.method) << ","
                     << fmt(r) << "," << fmt(est.std_err / code.n()) << "\n";
            }
        } else {
            PasLayout lay;
            const auto res = pas_bler(code, map, *pc, methods, ch.sigma, cfg.trials, seed, cfg.max_iter, cfg.workers,
                                      &lay);
            for (const auto& est : res) {
                const double se = std::sqrt(est.bler * (1.0 - est.bler) / std::max<std::size_t>(est.blocks, 1));
                rows << key << "," << fmt(snr_norm_db(snr, lay.rho()), 4) << ",bler_" << to_string(est.method)
                     << "," << fmt(est.bler, 8) << "," << fmt(se, 8) << "\n";
            }
        }
        csv << rows.str();
        csv.flush();
        if (!csv) throw std::runtime_error("write failed on " + cfg.out);
        std::cerr << "snr " << key << " dB done\n";
    }

    json manifest;
    manifest["kind"] = cfg.kind;
    manifest["code"] = {{"preset", preset.name},       {"description", preset.description},
                        {"n", code.n()},               {"energy", code.energy()},
                        {"p", code.pam().p},           {"classes", code.k()},
                        {"size", to_string(code.size())}, {"census_hash", census_hash(code)}};
    manifest["snr"] = cfg.snr;
    manifest["snr_definition"] = "E / (n sigma^2) per dimension";
    manifest["trials"] = cfg.trials;
    manifest["list_size"] = L;
    manifest["seed"] = cfg.seed;
    manifest["index_map"] = {{"seed", cfg.index_seed}, {"k_a", map.k_a}, {"e", to_string(map.e)},
                             {"d", to_string(map.d)}};
    manifest["demappers"] = cfg.demappers;
    manifest["ldpc"] = cfg.ldpc;
    manifest["max_iter"] = cfg.max_iter;
    manifest["shard_size"] = kShardSize;
    std::ofstream mf(cfg.out + ".json");
    mf << manifest.dump(2) << "\n";
    if (!mf) throw std::runtime_error("cannot write manifest " + cfg.out + ".json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation and shell code modulation toolkit"};
    app.require_subcommand(1);

    int n = 0, p = 4;
    long energy = 0;
    auto* census = app.add_subcommand("census", "List the type classes of a complete shell code");
    census->add_option("-n", n, "block length")->required();
    census->add_option("-E", energy, "squared norm")->required();
    census->add_option("-p", p, "number of amplitudes")->check(CLI::Range(1, 64));

    auto* trellis = app.add_subcommand("trellis", "State counts of the energy trellis");
    trellis->add_option("-n", n, "block length")->required();
    trellis->add_option("-E", energy, "squared norm")->required();
    trellis->add_option("-p", p, "number of amplitudes")->check(CLI::Range(1, 64));

    std::string preset = "demo8", index = "0", signs;
    auto* encode = app.add_subcommand("encode", "Map an index (and sign bits) to a codeword");
    encode->add_option("--code", preset, "code preset");
    encode->add_option("--index", index, "codeword index");
    encode->add_option("--signs", signs, "sign bits, 1 = negative");

    std::string method = "orbit";
    std::vector<double> y;
    double sigma = 1.0;
    auto* llr = app.add_subcommand("llr-demo", "Per-bit LLRs of one received word");
    llr->add_option("--code", preset, "code preset");
    llr->add_option("--method", method, "exact, sbs, orbit or bcjr");
    llr->add_option("--y", y, "received word (default: a fixed 8-symbol demo word)");
    llr->add_option("--sigma", sigma, "noise standard deviation")->check(CLI::PositiveNumber);

    SimConfig sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo campaign over an SNR grid");
    simulate->add_option("kind", sim.kind, "mi, bmd or bler")->required()->check(CLI::IsMember({"mi", "bmd", "bler"}));
    simulate->add_option("--code", sim.code, "code preset");
    simulate->add_option("--snr", sim.snr, "SNR in dB: value or start:step:stop");
    simulate->add_option("--trials", sim.trials, "words (mi, bmd) or LDPC frames (bler) per point");
    simulate->add_option("--L", sim.list, "orbit list size for mi (default 1024, or 5^6 for n >= 50)");
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--index-seed", sim.index_seed, "seed of the index spreading map");
    simulate->add_option("--demapper", sim.demappers, "exact, sbs, orbit or bcjr (repeatable)");
    simulate->add_option("--ldpc", sim.ldpc, "alist file of the LDPC code (bler)");
    simulate->add_option("--out", sim.out, "CSV output path; manifest goes to <out>.json")->required();
    simulate->add_option("--workers", sim.workers, "worker threads (0: all cores)");
    simulate->add_option("--max-iter", sim.max_iter, "BP iterations")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*census) return cmd_census(n, energy, p);
        if (*trellis) return cmd_trellis(n, energy, p);
        if (*encode) return cmd_encode(preset, index, signs);
        if (*llr) return cmd_llr_demo(preset, method, y, sigma);
        if (*simulate) return cmd_simulate(sim);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SetupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EmptyTrellis& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
