#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "permshell/shellcode.hpp"

using namespace permshell;

namespace {

// Signed points of M^n with squared norm E, by brute force.
long sphere_points(int n, long energy, const Pam& pam) {
    long count = 0;
    std::function<void(int, long)> rec = [&](int depth, long e) {
        if (e > energy) return;
        if (depth == n) {
            if (e == energy) ++count;
            return;
        }
        for (int a : pam.amplitudes) rec(depth + 1, e + a * a);  // positive half
    };
    rec(0, 0);
    return count << n;  // each unsigned point has 2^n sign variants
}

}  // namespace

TEST(Census, EightThirtyTwoFour) {
    const Pam pam = make_pam(4);
    const auto shell = ShellCode::complete(8, 32, pam);
    ASSERT_EQ(shell.k(), 2);
    EXPECT_EQ(shell.type_class(0).initial_vector(), (std::vector<int>{1, 1, 1, 1, 1, 3, 3, 3}));
    EXPECT_EQ(shell.type_class(1).initial_vector(), (std::vector<int>{1, 1, 1, 1, 1, 1, 1, 5}));
    EXPECT_EQ(shell.class_size(0) * pow2_big(8), 14336);
    EXPECT_EQ(shell.class_size(1) * pow2_big(8), 2048);
}

TEST(Census, ClassCounts) {
    const Pam pam = make_pam(4);
    EXPECT_EQ(enumerate_type_classes(50, 530, pam).size(), 113u);
    EXPECT_EQ(enumerate_type_classes(25, 305, pam).size(), 34u);
    EXPECT_EQ(enumerate_type_classes(100, 996, pam).size(), 369u);
    const auto one = enumerate_type_classes(2, 2, make_pam(1));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].initial_vector(), (std::vector<int>{1, 1}));
    EXPECT_TRUE(enumerate_type_classes(2, 3, make_pam(2)).empty());
}

TEST(Census, MatchesSphereCount) {
    for (int p : {1, 2, 4}) {
        const Pam pam = make_pam(p);
        for (int n = 1; n <= 7; ++n)
            for (long e = n; e <= n * (2 * p - 1) * (2 * p - 1); ++e) {
                BigInt total = 0;
                for (const auto& tc : enumerate_type_classes(n, e, pam)) {
                    EXPECT_EQ(tc.n(), n);
                    EXPECT_EQ(tc.energy(), e);
                    total += tc.size();
                }
                ASSERT_EQ(total * pow2_big(n), sphere_points(n, e, pam)) << n << " " << e << " p=" << p;
            }
    }
}

TEST(Census, SortedBySizeWithDeterministicTies) {
    const Pam pam = make_pam(4);
    const auto shell = ShellCode::complete(50, 530, pam);
    for (int i = 0; i + 1 < shell.k(); ++i) {
        ASSERT_GE(shell.class_size(i), shell.class_size(i + 1));
        if (shell.class_size(i) == shell.class_size(i + 1)) {
            ASSERT_GT(shell.full_m(i), shell.full_m(i + 1));
        }
        ASSERT_LT(shell.cumulative()[i], shell.cumulative()[i + 1]);
    }
    EXPECT_EQ(shell.full_m(0), (std::vector<int>{23, 15, 9, 3}));
    EXPECT_EQ(shell.full_m(1), (std::vector<int>{21, 18, 8, 3}));
    EXPECT_EQ(shell.full_m(2), (std::vector<int>{24, 15, 7, 4}));
    EXPECT_NEAR(log2_big(shell.class_size(0)), 78.4512, 1e-4);
    EXPECT_NEAR(log2_big(shell.class_size(1)), 78.3467, 1e-4);
    EXPECT_NEAR(log2_big(shell.class_size(2)), 78.0362, 1e-4);
}

TEST(Census, ClassCountGrowthBound) {
    // t(n, E, p) <= (n + 1)^(p - 1): each of m_2..m_p ranges over [0, n].
    for (int p : {2, 4}) {
        const Pam pam = make_pam(p);
        for (int n : {4, 8, 16}) {
            std::size_t best = 0;
            for (long e = n; e <= n * (2 * p - 1) * (2 * p - 1); e += 8)
                best = std::max(best, enumerate_type_classes(n, e, pam).size());
            EXPECT_LE(static_cast<double>(best), std::pow(n + 1.0, p - 1));
        }
    }
}

TEST(Census, InfeasibleShellThrows) {
    EXPECT_THROW(ShellCode::complete(2, 3, make_pam(2)), InvalidParameter);
}

TEST(EncodeShell, ClassBoundaries) {
    const auto shell = ShellCode::complete(8, 32, make_pam(4));
    auto idx = encode_shell(0, shell);
    EXPECT_EQ(idx.klass, 0);
    EXPECT_EQ(encode_shell_amplitudes(0, shell), (std::vector<int>{1, 1, 1, 1, 1, 3, 3, 3}));
    idx = encode_shell(shell.cumulative()[0], shell);
    EXPECT_EQ(idx.klass, 1);
    EXPECT_EQ(encode_shell_amplitudes(shell.cumulative()[0], shell), (std::vector<int>{1, 1, 1, 1, 1, 1, 1, 5}));
    EXPECT_THROW(encode_shell(64, shell), IndexOutOfRange);
}

TEST(EncodeShell, FullRoundTrip) {
    const auto shell = ShellCode::complete(8, 32, make_pam(4));
    ASSERT_EQ(shell.size(), 64);
    for (int q = 0; q < 64; ++q) {
        const auto x = encode_shell_amplitudes(q, shell);
        ASSERT_EQ(inv_encode_shell(encode_shell(q, shell), shell), q);
        ASSERT_EQ(*inv_encode_shell_amplitudes(x, shell), q);
    }
    const auto partial = ShellCode::partial(8, 32, make_pam(4), 1);
    EXPECT_FALSE(inv_encode_shell_amplitudes(std::vector<int>{1, 1, 1, 1, 1, 1, 1, 5}, partial).has_value());
}

TEST(EncodeShell, PartialRoundTripLarge) {
    const auto shell = ShellCode::partial(50, 530, make_pam(4), 4);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const BigInt q = uniform_below(shell.size(), rng);
        ASSERT_EQ(*inv_encode_shell_amplitudes(encode_shell_amplitudes(q, shell), shell), q);
    }
}

TEST(Rates, PartialFraction) {
    const auto shell = ShellCode::complete(50, 530, make_pam(4));
    EXPECT_GE(partial_rate_fraction(shell, 10), 0.99);
    EXPECT_DOUBLE_EQ(partial_rate_fraction(shell, shell.k()), 1.0);
    const auto small = ShellCode::complete(8, 32, make_pam(4));
    EXPECT_NEAR(partial_rate_fraction(small, 1), std::log2(14336.0) / std::log2(16384.0), 1e-12);
    EXPECT_NEAR(shell_rate(small), (8 + 6.0) / 8, 1e-12);
}

TEST(Boltzmann, FiftyFiveThirty) {
    const auto fit = boltzmann_fit(50, 530, make_pam(4));
    EXPECT_NEAR(fit.lambda, -0.041, 0.001);
    const std::vector<double> expect{22.38, 16.12, 8.37, 3.13};
    double n = 0.0, e = 0.0;
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(fit.m_real[i], expect[i], 0.01);
        n += fit.m_real[i];
        e += fit.m_real[i] * (2 * i + 1) * (2 * i + 1);
    }
    EXPECT_NEAR(n, 50.0, 50.0 * 1e-10);
    EXPECT_NEAR(e, 530.0, 530.0 * 1e-10);
}

TEST(Boltzmann, UniformAndLimits) {
    const Pam pam = make_pam(4);
    EXPECT_NEAR(boltzmann_fit(40, 40 * 21, pam).lambda, 0.0, 1e-9);
    const auto low = boltzmann_fit(50, 52, pam);
    const auto lower = boltzmann_fit(50, 51, pam);
    EXPECT_LT(low.lambda, 0.0);
    EXPECT_LT(lower.lambda, low.lambda);
    EXPECT_GT(lower.m_real[0], 49.5);
    EXPECT_THROW(boltzmann_fit(50, 50, pam), DegenerateDistribution);
    EXPECT_THROW(boltzmann_fit(50, 50 * 49, pam), DegenerateDistribution);
}

TEST(Boltzmann, NeighbourhoodSearchAgreesWithCensus) {
    const Pam pam = make_pam(4);
    const auto fit = boltzmann_fit(50, 530, pam);
    const auto near = largest_classes_near_boltzmann(fit, 3, 3);
    const auto shell = ShellCode::complete(50, 530, pam);
    ASSERT_EQ(near.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(near[i], shell.full_m(i));

    const auto small = largest_classes_near_boltzmann(boltzmann_fit(8, 32, pam), 1, 3);
    ASSERT_EQ(small.size(), 1u);
    EXPECT_EQ(small[0], (std::vector<int>{5, 3, 0, 0}));
}
