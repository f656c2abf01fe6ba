#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "permshell/constellation.hpp"
#include "permshell/error.hpp"
#include "permshell/permcode.hpp"
#include "permshell/shellcode.hpp"

namespace permshell {

struct Preset {
    std::string name;
    std::string description;
    int p = 4;
    int n = 0;
    long energy = 0;
    int k = 0;                 // 0: complete shell; > 0: k largest classes
    std::vector<int> full_m;   // single type class when non-empty

    ShellCode build() const {
        const Pam pam = make_pam_levels(p);
        if (!full_m.empty()) return ShellCode::single(detail::type_from_full_multiplicities(pam, full_m), pam);
        if (k > 0) return ShellCode::partial(n, energy, pam, k);
        return ShellCode::complete(n, energy, pam);
    }
};

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        std::vector<Preset> v;
        auto single = [&](std::string name, std::string desc, int p, std::vector<int> m) {
            Preset pr;
            pr.name = std::move(name);
            pr.description = std::move(desc);
            pr.p = p;
            pr.full_m = std::move(m);
            const Pam pam = make_pam_levels(p);
            for (int r = 0; r < p; ++r) {
                pr.n += pr.full_m[r];
                pr.energy += static_cast<long>(pr.full_m[r]) * pam.amplitudes[r] * pam.amplitudes[r];
            }
            v.push_back(std::move(pr));
        };
        auto shell = [&](std::string name, std::string desc, int p, int n, long e, int k) {
            Preset pr;
            pr.name = std::move(name);
            pr.description = std::move(desc);
            pr.p = p;
            pr.n = n;
            pr.energy = e;
            pr.k = k;
            v.push_back(std::move(pr));
        };
        single("n12code1", "n=12 permutation code 1^5 3^5 5 7", 4, {5, 5, 1, 1});
        single("n12code2", "n=12 permutation code 1^5 3^3 5^3 7", 4, {5, 3, 3, 1});
        single("n12code3", "n=12 permutation code 1^4 3^4 5^2 7^2", 4, {4, 4, 2, 2});
        single("n12code4", "n=12 permutation code 1^4 3^2 5^4 7^2", 4, {4, 2, 4, 2});
        single("n12code5", "n=12 permutation code 1^3 3^3 5^3 7^3", 4, {3, 3, 3, 3});
        single("n50code1", "largest class of the (50, 354, 4) shell", 4, {27, 17, 5, 1});
        single("n50code2", "largest class of the (50, 530, 4) shell", 4, {23, 15, 9, 3});
        single("n50code3", "largest class of the (50, 706, 4) shell", 4, {18, 16, 10, 6});
        single("n50code4", "largest class of the (50, 882, 4) shell", 4, {15, 14, 12, 9});
        single("n50code5", "largest class of the (50, 1058, 4) shell", 4, {13, 12, 12, 13});
        single("demo8", "n=8 permutation code 1^7 3 over 4-PAM", 2, {7, 1});
        shell("shell8_32_4", "complete (8, 32, 4) shell", 4, 8, 32, 0);
        shell("shell8_32_3", "complete (8, 32, 3) shell", 3, 8, 32, 0);
        shell("shell50_530_4", "complete (50, 530, 4) shell", 4, 50, 530, 0);
        shell("shell50_530_4_k3", "three largest classes of the (50, 530, 4) shell", 4, 50, 530, 3);
        shell("shell50_530_4_k4", "four largest classes of the (50, 530, 4) shell", 4, 50, 530, 4);
        return v;
    }();
    return all;
}

inline const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    std::string known;
    for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw InvalidParameter("unknown code preset '" + name + "' (known: " + known + ")");
}

/// FNV-1a over the class list, for run manifests.
inline std::string census_hash(const ShellCode& code) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](long v) {
        const std::string s = std::to_string(v) + ",";
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    mix(code.n());
    mix(code.energy());
    mix(code.pam().p);
    for (int c = 0; c < code.k(); ++c)
        for (int v : code.full_m(c)) mix(v);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace permshell
