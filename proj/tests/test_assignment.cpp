#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <numeric>
#include <random>

#include "permshell/assignment.hpp"

using namespace permshell;

namespace {

AssignmentInstance<> four_by_four() {
    AssignmentInstance<> inst;
    inst.w_rows = {1, 2, 3, 4};
    inst.w_cols = {1, 2, 3, 4};
    return inst;
}

// Rewards of every assignment (distinct value patterns when columns repeat).
template <class Rule>
std::vector<double> brute_force_rewards(const AssignmentInstance<Rule>& inst) {
    std::vector<int> cols;
    for (int c = 0; c < inst.cols(); ++c) cols.insert(cols.end(), inst.capacity_of(c), c);
    std::sort(cols.begin(), cols.end());
    std::vector<double> out;
    do {
        bool ok = true;
        for (int r = 0; r < inst.n(); ++r)
            if (inst.forbidden.contains({r, cols[r]})) ok = false;
        if (ok) out.push_back(matching_reward(inst, cols));
    } while (std::next_permutation(cols.begin(), cols.end()));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace

TEST(SolveSorted, FourByFour) {
    const auto m = solve_sorted(four_by_four());
    EXPECT_EQ(m.col_of_row, (std::vector<int>{0, 1, 2, 3}));
    EXPECT_DOUBLE_EQ(m.reward, 30.0);
}

TEST(SolveSorted, ConstantRowWeights) {
    AssignmentInstance<> inst;
    inst.w_rows = {2, 2, 2};
    inst.w_cols = {1, 5, 7};
    EXPECT_DOUBLE_EQ(solve_sorted(inst).reward, 2.0 * 13.0);
}

TEST(SolveSorted, MatchesBruteForce) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng() % 7);
        AssignmentInstance<> a;
        AssignmentInstance<LogCoshRule> b;
        for (int i = 0; i < n; ++i) {
            a.w_rows.push_back(u(rng));
            a.w_cols.push_back(u(rng));
        }
        b.w_rows = a.w_rows;
        b.w_cols = a.w_cols;
        b.rule = LogCoshRule{0.7};
        ASSERT_NEAR(solve_sorted(a).reward, brute_force_rewards(a).front(), 1e-9);
        ASSERT_NEAR(solve_sorted(b).reward, brute_force_rewards(b).front(), 1e-9);
    }
}

TEST(SolveSorted, MatchesHungarian) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + static_cast<int>(rng() % 20);
        AssignmentInstance<LogCoshRule> inst;
        inst.rule = LogCoshRule{1.3};
        for (int i = 0; i < n; ++i) {
            inst.w_rows.push_back(u(rng));
            inst.w_cols.push_back(2 * static_cast<int>(rng() % 4) + 1);
        }
        std::vector<std::vector<double>> w(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[i][j] = inst.weight(i, j);
        ASSERT_NEAR(solve_sorted(inst).reward, solve_hungarian(w)->reward, 1e-9);
    }
}

TEST(SolveAlmostMultiplicative, CellOne) {
    auto inst = four_by_four();
    inst.forbidden = {{3, 3}};
    const auto m = solve_almost_multiplicative(inst);
    ASSERT_TRUE(m);
    EXPECT_DOUBLE_EQ(m->reward, 29.0);
}

TEST(SolveAlmostMultiplicative, CellOneThree) {
    // Include (a4, b3) and (a3, b4), exclude (a2, b2): the reduced instance is
    // rows {a2, a1} against columns {b2, b1}.
    AssignmentInstance<> reduced;
    reduced.w_rows = {2, 1};
    reduced.w_cols = {2, 1};
    reduced.forbidden = {{0, 0}};
    const auto m = solve_almost_multiplicative(reduced);
    ASSERT_TRUE(m);
    EXPECT_DOUBLE_EQ(m->reward + 4 * 3 + 3 * 4, 28.0);
}

TEST(SolveAlmostMultiplicative, ReducesToSorted) {
    const auto inst = four_by_four();
    EXPECT_DOUBLE_EQ(solve_almost_multiplicative(inst)->reward, solve_sorted(inst).reward);
}

TEST(SolveAlmostMultiplicative, InfeasibleAndMisplacedConstraints) {
    auto inst = four_by_four();
    inst.forbidden = {{3, 0}, {3, 1}, {3, 2}, {3, 3}};
    EXPECT_FALSE(solve_almost_multiplicative(inst).has_value());
    inst.forbidden = {{0, 0}};
    EXPECT_THROW(solve_almost_multiplicative(inst), InvalidParameter);
    inst.forbidden = {{3, 0}, {2, 0}};
    EXPECT_THROW(solve_almost_multiplicative(inst), InvalidParameter);
}

TEST(SolveAlmostMultiplicative, MatchesBruteForce) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 5);
        AssignmentInstance<> inst;
        for (int i = 0; i < n; ++i) {
            inst.w_rows.push_back(u(rng));
            inst.w_cols.push_back(u(rng));
        }
        const int top = static_cast<int>(std::max_element(inst.w_rows.begin(), inst.w_rows.end()) - inst.w_rows.begin());
        for (int c = 0; c < n; ++c)
            if (rng() % 3 == 0) inst.forbidden.insert({top, c});
        const auto bf = brute_force_rewards(inst);
        const auto m = solve_almost_multiplicative(inst);
        ASSERT_EQ(m.has_value(), !bf.empty());
        if (m) {
            ASSERT_NEAR(m->reward, bf.front(), 1e-9);
        }
    }
}

TEST(Murty, FourByFourRanking) {
    const auto list = murty_k_best(four_by_four(), 5);
    std::vector<double> rewards;
    for (const auto& s : list.solutions) rewards.push_back(s.reward);
    EXPECT_EQ(rewards, (std::vector<double>{30, 29, 29, 29, 28}));
}

TEST(Murty, SingleSolutionIsSorted) {
    const auto inst = four_by_four();
    const auto list = murty_k_best(inst, 1);
    ASSERT_EQ(list.solutions.size(), 1u);
    EXPECT_EQ(list.solutions[0].col_of_row, solve_sorted(inst).col_of_row);
}

TEST(Murty, FullEnumerationMatchesBruteForce) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        AssignmentInstance<> inst;
        for (int i = 0; i < n; ++i) {
            inst.w_rows.push_back(u(rng));
            inst.w_cols.push_back(u(rng));
        }
        const auto bf = brute_force_rewards(inst);
        const auto list = murty_k_best(inst, bf.size() + 3);
        ASSERT_EQ(list.solutions.size(), bf.size());
        std::set<std::vector<int>> distinct;
        for (std::size_t i = 0; i < bf.size(); ++i) {
            ASSERT_NEAR(list.solutions[i].reward, bf[i], 1e-9);
            distinct.insert(list.solutions[i].col_of_row);
        }
        ASSERT_EQ(distinct.size(), bf.size());
    }
}

TEST(Murty, MultisetColumnsListDistinctCodewords) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        AssignmentInstance<LogCoshRule> inst;
        inst.rule = LogCoshRule{0.8};
        inst.w_cols = {1, 3, 5, 7};
        inst.capacity = {static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), 1, static_cast<int>(rng() % 2)};
        const int n = std::accumulate(inst.capacity.begin(), inst.capacity.end(), 0);
        for (int i = 0; i < n; ++i) inst.w_rows.push_back(u(rng));
        const auto bf = brute_force_rewards(inst);  // distinct arrangements of the multiset
        const auto list = murty_k_best(inst, 100000);
        ASSERT_EQ(list.solutions.size(), bf.size());
        for (std::size_t i = 0; i < bf.size(); ++i) ASSERT_NEAR(list.solutions[i].reward, bf[i], 1e-9);
        for (std::size_t i = 1; i < list.solutions.size(); ++i)
            ASSERT_LE(list.solutions[i].reward, list.solutions[i - 1].reward + 1e-12);
    }
}

TEST(Murty, RootExclusionsInTopRow) {
    auto inst = four_by_four();
    inst.forbidden = {{3, 3}};
    const auto list = murty_k_best(inst, 24);
    EXPECT_EQ(list.solutions.size(), 18u);
    for (const auto& s : list.solutions) EXPECT_NE(s.col_of_row[3], 3);
    EXPECT_DOUBLE_EQ(list.solutions.front().reward, 29.0);
}

TEST(Murty, AllowedFilterKeepsExpanding) {
    // Only matchings where row 0 takes column 3 are allowed; these sit deep in
    // the ranking, so rejected ancestors must still be expanded.
    const auto inst = four_by_four();
    const auto list = murty_k_best(inst, 6, [](const Matching& m) { return m.col_of_row[0] == 3; });
    ASSERT_EQ(list.solutions.size(), 6u);
    std::vector<double> expect;
    std::vector<int> cols{0, 1, 2, 3};
    do
        if (cols[0] == 3) expect.push_back(matching_reward(inst, cols));
    while (std::next_permutation(cols.begin(), cols.end()));
    std::sort(expect.begin(), expect.end(), std::greater<>());
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(list.solutions[i].col_of_row[0], 3);
        EXPECT_DOUBLE_EQ(list.solutions[i].reward, expect[i]);
    }
    EXPECT_GT(list.expanded, 6u);
}

TEST(Hungarian, SmallOracle) {
    const std::vector<std::vector<double>> w{{1, 2, 3}, {2, 4, 6}, {3, 6, 9}};
    EXPECT_DOUBLE_EQ(solve_hungarian(w)->reward, 14.0);
}
