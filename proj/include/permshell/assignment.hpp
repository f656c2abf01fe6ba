#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "permshell/error.hpp"

namespace permshell {

/// log(cosh(t)) without overflow: |t| - log 2 + log1p(exp(-2|t|)).
inline double log_cosh(double t) {
    const double a = std::abs(t);
    return a - 0.69314718055994530942 + std::log1p(std::exp(-2.0 * a));
}

struct ProductRule {
    double operator()(double u, double v) const { return u * v; }
};

/// Orbit-likelihood weight log cosh(u v / sigma^2); supermodular for u, v >= 0.
struct LogCoshRule {
    double inv_var = 1.0;
    double operator()(double u, double v) const { return log_cosh(u * v * inv_var); }
};

/// A balanced assignment problem between rows U and columns V. Columns may
/// carry a multiplicity, in which case a solution assigns each row one column
/// value and column j is used exactly capacity[j] times; with all capacities
/// equal to one this is the ordinary perfect-matching problem. Forbidden
/// (row, column) pairs carry weight -infinity.
template <class Rule = ProductRule>
struct AssignmentInstance {
    std::vector<double> w_rows;
    std::vector<double> w_cols;
    std::vector<int> capacity;  // empty means all ones
    std::set<std::pair<int, int>> forbidden;
    Rule rule{};

    int n() const { return static_cast<int>(w_rows.size()); }
    int cols() const { return static_cast<int>(w_cols.size()); }
    int capacity_of(int j) const { return capacity.empty() ? 1 : capacity[j]; }

    double weight(int row, int col) const { return rule(w_rows[row], w_cols[col]); }

    void validate() const {
        long total = 0;
        for (int j = 0; j < cols(); ++j) {
            if (capacity_of(j) < 0) throw InvalidParameter("assignment: negative capacity");
            total += capacity_of(j);
        }
        if (total != n()) throw InvalidParameter("assignment: total column capacity must equal the row count");
        for (const auto& [r, c] : forbidden)
            if (r < 0 || r >= n() || c < 0 || c >= cols()) throw InvalidParameter("assignment: forbidden edge out of range");
    }
};

struct Matching {
    std::vector<int> col_of_row;
    double reward = 0.0;
};

template <class Rule>
double matching_reward(const AssignmentInstance<Rule>& inst, const std::vector<int>& col_of_row) {
    double r = 0.0;
    for (int i = 0; i < inst.n(); ++i) r += inst.weight(i, col_of_row[i]);
    return r;
}

namespace detail {

inline std::vector<int> rows_by_weight_desc(const std::vector<double>& w) {
    std::vector<int> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
    return order;
}

}  // namespace detail

/// Rearrangement-inequality solver: rows and columns are matched in the same
/// weight order. Optimal for the product rule and for any rule that is
/// non-decreasing and supermodular in (row weight, column weight).
template <class Rule>
Matching solve_sorted(const AssignmentInstance<Rule>& inst) {
    inst.validate();
    if (!inst.forbidden.empty()) throw InvalidParameter("solve_sorted: instance has forbidden edges");
    const auto rows = detail::rows_by_weight_desc(inst.w_rows);
    const auto cols = detail::rows_by_weight_desc(inst.w_cols);
    Matching m;
    m.col_of_row.assign(inst.n(), -1);
    std::size_t ci = 0;
    int used = 0;
    for (int row : rows) {
        while (used >= inst.capacity_of(cols[ci])) {
            ++ci;
            used = 0;
        }
        m.col_of_row[row] = cols[ci];
        ++used;
    }
    m.reward = matching_reward(inst, m.col_of_row);
    return m;
}

/// Solver for instances whose forbidden edges all sit in one row a* of maximal
/// row weight: a* takes the allowed column of largest weight, the rest is
/// solved by sorting. Returns nullopt when every column of a* is forbidden.
template <class Rule>
std::optional<Matching> solve_almost_multiplicative(const AssignmentInstance<Rule>& inst) {
    inst.validate();
    if (inst.forbidden.empty()) return solve_sorted(inst);
    const int star = inst.forbidden.begin()->first;
    for (const auto& [r, c] : inst.forbidden)
        if (r != star) throw InvalidParameter("solve_almost_multiplicative: forbidden edges span several rows");
    for (int i = 0; i < inst.n(); ++i)
        if (inst.w_rows[i] > inst.w_rows[star])
            throw InvalidParameter("solve_almost_multiplicative: constrained row is not of maximal weight");

    const auto cols = detail::rows_by_weight_desc(inst.w_cols);
    int pick = -1;
    for (int c : cols) {
        if (inst.capacity_of(c) > 0 && !inst.forbidden.contains({star, c})) {
            pick = c;
            break;
        }
    }
    if (pick < 0) return std::nullopt;

    std::vector<int> rows = detail::rows_by_weight_desc(inst.w_rows);
    std::erase(rows, star);
    std::vector<int> left(inst.cols());
    for (int c = 0; c < inst.cols(); ++c) left[c] = inst.capacity_of(c);
    --left[pick];

    Matching m;
    m.col_of_row.assign(inst.n(), -1);
    m.col_of_row[star] = pick;
    std::size_t ci = 0;
    for (int row : rows) {
        while (left[cols[ci]] == 0) ++ci;
        m.col_of_row[row] = cols[ci];
        --left[cols[ci]];
    }
    m.reward = matching_reward(inst, m.col_of_row);
    return m;
}

struct KBestList {
    std::vector<Matching> solutions;  // non-increasing reward
    std::size_t expanded = 0;         // cells popped, including disallowed ones
};

/// Ranked enumeration of assignments (Murty) specialised to monotone
/// supermodular weights. Each popped solution is partitioned along an
/// enumeration of its edges ordered by descending row weight, so every child
/// cell has its forbidden edges in the top free row and is solved in
/// O(#columns) from per-column prefix sums. Children are kept as (parent,
/// position) pairs and only materialised when popped.
///
/// `allowed`, when set, filters the output; rejected candidates are still
/// expanded since their descendants may be allowed.
template <class Rule>
KBestList murty_k_best(const AssignmentInstance<Rule>& inst, std::size_t L,
                       const std::function<bool(const Matching&)>& allowed = {}) {
    inst.validate();
    if (L < 1) throw InvalidParameter("murty_k_best: L must be >= 1");
    const int n = inst.n();
    const int nc = inst.cols();
    const auto rank_row = detail::rows_by_weight_desc(inst.w_rows);
    const auto col_order = detail::rows_by_weight_desc(inst.w_cols);

    std::vector<int> root_excl;
    if (!inst.forbidden.empty()) {
        const int top = rank_row[0];
        for (const auto& [r, c] : inst.forbidden) {
            if (inst.w_rows[r] != inst.w_rows[top])
                throw InvalidParameter("murty_k_best: forbidden edges must lie in a row of maximal weight");
            if (r != top) throw InvalidParameter("murty_k_best: forbidden edges span several rows");
            root_excl.push_back(c);
        }
    }

    // prefix[c][r] = sum of weights of column c over ranks [0, r).
    std::vector<std::vector<double>> prefix(nc, std::vector<double>(n + 1, 0.0));
    for (int c = 0; c < nc; ++c)
        for (int r = 0; r < n; ++r) prefix[c][r + 1] = prefix[c][r] + inst.weight(rank_row[r], c);
    auto w_at = [&](int rank, int c) { return prefix[c][rank + 1] - prefix[c][rank]; };

    struct Popped {
        std::vector<int> col_at_rank;
        std::vector<double> prefix_reward;  // reward of ranks [0, r)
        std::vector<int> excl;
        int depth = 0;
    };
    std::vector<Popped> popped;

    struct Entry {
        double reward;
        std::uint64_t seq;
        int parent;  // -1 for the root cell
        int offset;  // child rank is parent.depth + offset
        bool operator<(const Entry& o) const {
            if (reward != o.reward) return reward < o.reward;
            return seq > o.seq;  // FIFO among ties
        }
    };
    std::priority_queue<Entry> frontier;
    std::uint64_t seq = 0;

    // Best completion given remaining column counts, rank r forced onto the
    // best allowed column. Returns false if infeasible.
    std::vector<int> left(nc);
    auto best_completion = [&](int r, const std::vector<int>& excl, double base, double& reward,
                               std::vector<int>* out) -> bool {
        int pick = -1;
        for (int c : col_order) {
            if (left[c] > 0 && std::find(excl.begin(), excl.end(), c) == excl.end()) {
                pick = c;
                break;
            }
        }
        if (pick < 0) return false;
        reward = base + w_at(r, pick);
        if (out) (*out)[r] = pick;
        --left[pick];
        int start = r + 1;
        for (int c : col_order) {
            const int cnt = left[c];
            if (cnt == 0) continue;
            reward += prefix[c][start + cnt] - prefix[c][start];
            if (out)
                for (int t = start; t < start + cnt; ++t) (*out)[t] = c;
            start += cnt;
        }
        ++left[pick];
        return true;
    };

    auto reset_left = [&]() {
        for (int c = 0; c < nc; ++c) left[c] = inst.capacity_of(c);
    };

    {
        reset_left();
        double reward = 0.0;
        if (!best_completion(0, root_excl, 0.0, reward, nullptr)) return {};
        frontier.push({reward, seq++, -1, 0});
    }

    KBestList out;
    std::vector<int> scratch(n);
    while (!frontier.empty() && out.solutions.size() < L) {
        const Entry top = frontier.top();
        frontier.pop();

        // Materialise the popped cell.
        Popped cell;
        reset_left();
        if (top.parent < 0) {
            cell.depth = 0;
            cell.excl = root_excl;
        } else {
            const Popped& par = popped[top.parent];
            cell.depth = par.depth + top.offset;
            for (int t = 0; t < cell.depth; ++t) {
                scratch[t] = par.col_at_rank[t];
                --left[scratch[t]];
            }
            if (top.offset == 0) {
                cell.excl = par.excl;
                cell.excl.push_back(par.col_at_rank[par.depth]);
            } else {
                cell.excl = {par.col_at_rank[cell.depth]};
            }
        }
        double reward = 0.0;
        const double base = top.parent < 0 ? 0.0 : popped[top.parent].prefix_reward[cell.depth];
        best_completion(cell.depth, cell.excl, base, reward, &scratch);
        cell.col_at_rank = scratch;
        cell.prefix_reward.assign(n + 1, 0.0);
        for (int t = 0; t < n; ++t) cell.prefix_reward[t + 1] = cell.prefix_reward[t] + w_at(t, scratch[t]);
        ++out.expanded;

        Matching m;
        m.col_of_row.assign(n, -1);
        for (int t = 0; t < n; ++t) m.col_of_row[rank_row[t]] = scratch[t];
        m.reward = cell.prefix_reward[n];
        const bool keep = !allowed || allowed(m);
        if (keep) out.solutions.push_back(std::move(m));
        if (out.solutions.size() >= L) break;

        // Partition the rest of the cell along its free edges in rank order.
        const int self = static_cast<int>(popped.size());
        reset_left();
        for (int t = 0; t < cell.depth; ++t) --left[cell.col_at_rank[t]];
        std::vector<int> single(1);
        for (int r = cell.depth; r < n - 1; ++r) {
            if (r > cell.depth) --left[cell.col_at_rank[r - 1]];
            const std::vector<int>* excl = &cell.excl;
            std::vector<int> first_excl;
            if (r == cell.depth) {
                first_excl = cell.excl;
                first_excl.push_back(cell.col_at_rank[r]);
                excl = &first_excl;
            } else {
                single[0] = cell.col_at_rank[r];
                excl = &single;
            }
            double child_reward = 0.0;
            if (best_completion(r, *excl, cell.prefix_reward[r], child_reward, nullptr))
                frontier.push({child_reward, seq++, self, r - cell.depth});
        }
        popped.push_back(std::move(cell));
    }
    return out;
}

/// O(n^3) Hungarian solver on a dense weight matrix (maximisation). Entries
/// equal to -infinity are forbidden. Used as an independent oracle.
inline std::optional<Matching> solve_hungarian(const std::vector<std::vector<double>>& w) {
    const int n = static_cast<int>(w.size());
    const double inf = std::numeric_limits<double>::infinity();
    double big = 1.0;
    for (const auto& row : w)
        for (double x : row)
            if (std::isfinite(x)) big = std::max(big, std::abs(x));
    const double forbid_cost = 4.0 * big * (n + 1) + 1.0;
    auto cost = [&](int i, int j) { return std::isfinite(w[i][j]) ? -w[i][j] : forbid_cost; };

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    Matching m;
    m.col_of_row.assign(n, -1);
    for (int j = 1; j <= n; ++j) m.col_of_row[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) {
        const double x = w[i][m.col_of_row[i]];
        if (!std::isfinite(x)) return std::nullopt;
        m.reward += x;
    }
    return m;
}

}  // namespace permshell
