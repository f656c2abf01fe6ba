#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "permshell/error.hpp"

namespace permshell {

/// Sparse binary parity-check matrix; indices are 0-based.
struct ParityCheck {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<int>> row_idx;
    std::vector<std::vector<int>> col_idx;

    double design_rate() const { return static_cast<double>(cols - rows) / cols; }

    std::size_t edges() const {
        std::size_t e = 0;
        for (const auto& r : row_idx) e += r.size();
        return e;
    }

    bool syndrome_zero(const std::vector<std::uint8_t>& bits) const {
        for (const auto& r : row_idx) {
            unsigned s = 0;
            for (int c : r) s ^= bits[c];
            if (s & 1U) return false;
        }
        return true;
    }

    static ParityCheck from_rows(int cols, std::vector<std::vector<int>> rows) {
        ParityCheck pc;
        pc.rows = static_cast<int>(rows.size());
        pc.cols = cols;
        pc.col_idx.assign(cols, {});
        for (int r = 0; r < pc.rows; ++r) {
            auto& row = rows[r];
            std::sort(row.begin(), row.end());
            if (std::adjacent_find(row.begin(), row.end()) != row.end())
                throw InvalidParameter("ParityCheck: duplicate entry in row " + std::to_string(r));
            for (int c : row) {
                if (c < 0 || c >= cols) throw InvalidParameter("ParityCheck: column index out of range");
                pc.col_idx[c].push_back(r);
            }
        }
        pc.row_idx = std::move(rows);
        return pc;
    }
};

namespace detail {

class AlistReader {
public:
    explicit AlistReader(std::istream& in) {
        std::string line;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            lines_.emplace_back(number, line);
        }
    }

    /// Integers of the next non-blank line.
    std::vector<long> next(const char* what) {
        if (pos_ >= lines_.size())
            throw ParseError(std::string("alist: unexpected end of file reading ") + what,
                             lines_.empty() ? 0 : lines_.back().first);
        const auto& [number, text] = lines_[pos_++];
        line_ = number;
        std::istringstream ss(text);
        std::vector<long> out;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t used = 0;
                out.push_back(std::stol(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError("alist: non-integer token '" + tok + "' in " + what, number);
            }
        }
        return out;
    }

    int line() const { return line_; }

private:
    std::vector<std::pair<int, std::string>> lines_;
    std::size_t pos_ = 0;
    int line_ = 0;
};

}  // namespace detail

inline ParityCheck parse_alist(std::istream& in) {
    detail::AlistReader rd(in);
    auto fail = [&](const std::string& msg) { throw ParseError("alist: " + msg, rd.line()); };

    auto dims = rd.next("dimensions");
    if (dims.size() != 2 || dims[0] <= 0 || dims[1] <= 0) fail("expected 'N M' with positive counts");
    const int n = static_cast<int>(dims[0]);
    const int m = static_cast<int>(dims[1]);
    auto maxdeg = rd.next("maximum degrees");
    if (maxdeg.size() != 2 || maxdeg[0] <= 0 || maxdeg[1] <= 0) fail("expected 'max_col_degree max_row_degree'");
    auto col_deg = rd.next("column degrees");
    if (static_cast<int>(col_deg.size()) != n) fail("expected " + std::to_string(n) + " column degrees");
    auto row_deg = rd.next("row degrees");
    if (static_cast<int>(row_deg.size()) != m) fail("expected " + std::to_string(m) + " row degrees");
    for (long d : col_deg)
        if (d < 0 || d > maxdeg[0]) fail("column degree exceeds the declared maximum");
    for (long d : row_deg)
        if (d < 0 || d > maxdeg[1]) fail("row degree exceeds the declared maximum");

    auto read_lists = [&](int count, const std::vector<long>& deg, long bound, const char* what) {
        std::vector<std::vector<int>> lists(count);
        for (int i = 0; i < count; ++i) {
            auto v = rd.next(what);
            std::vector<int> entries;
            for (long x : v) {
                if (x == 0) continue;
                if (x < 1 || x > bound) fail(std::string(what) + " index " + std::to_string(x) + " out of range");
                entries.push_back(static_cast<int>(x - 1));
            }
            if (static_cast<long>(entries.size()) != deg[i])
                fail(std::string(what) + " " + std::to_string(i + 1) + " has " + std::to_string(entries.size()) +
                     " entries, degree header says " + std::to_string(deg[i]));
            lists[i] = std::move(entries);
        }
        return lists;
    };
    auto cols = read_lists(n, col_deg, m, "column list");
    auto rows = read_lists(m, row_deg, n, "row list");

    ParityCheck pc;
    try {
        pc = ParityCheck::from_rows(n, rows);
    } catch (const InvalidParameter& e) {
        fail(e.what());
    }
    for (int c = 0; c < n; ++c) {
        std::sort(cols[c].begin(), cols[c].end());
        if (cols[c] != pc.col_idx[c]) fail("column list " + std::to_string(c + 1) + " disagrees with the row lists");
    }
    return pc;
}

inline ParityCheck load_alist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("alist: cannot open " + path, 0);
    return parse_alist(in);
}

struct BpResult {
    std::vector<std::uint8_t> bits;
    std::vector<double> posterior;
    bool converged = false;
    int iterations = 0;
};

/// Sum-product decoding with tanh-rule check updates. A bit is decided as 1
/// when its posterior LLR is <= 0.
inline BpResult bp_decode(const ParityCheck& pc, const std::vector<double>& llr_in, int max_iter = 50) {
    if (static_cast<int>(llr_in.size()) != pc.cols) throw InvalidParameter("bp_decode: LLR length mismatch");
    constexpr double kClip = 1.0 - 1e-15;
    // Edge e of row r: (r, row_idx[r][k]); messages stored per row-edge.
    std::vector<std::size_t> row_start(pc.rows + 1, 0);
    for (int r = 0; r < pc.rows; ++r) row_start[r + 1] = row_start[r] + pc.row_idx[r].size();
    std::vector<std::vector<std::size_t>> col_edges(pc.cols);
    for (int r = 0; r < pc.rows; ++r)
        for (std::size_t k = 0; k < pc.row_idx[r].size(); ++k)
            col_edges[pc.row_idx[r][k]].push_back(row_start[r] + k);
    const std::size_t ne = row_start[pc.rows];
    std::vector<double> c2v(ne, 0.0), v2c(ne, 0.0), t(ne);

    BpResult res;
    res.bits.assign(pc.cols, 0);
    res.posterior = llr_in;
    for (int it = 1; it <= max_iter; ++it) {
        for (int v = 0; v < pc.cols; ++v) {
            double total = llr_in[v];
            for (auto e : col_edges[v]) total += c2v[e];
            for (auto e : col_edges[v]) v2c[e] = total - c2v[e];
        }
        for (int r = 0; r < pc.rows; ++r) {
            const std::size_t b = row_start[r], e = row_start[r + 1];
            // Products excluding each edge via prefix/suffix passes (no division by zero).
            for (std::size_t k = b; k < e; ++k) t[k] = std::tanh(0.5 * v2c[k]);
            double prefix = 1.0;
            for (std::size_t k = b; k < e; ++k) {
                c2v[k] = prefix;
                prefix *= t[k];
            }
            double suffix = 1.0;
            for (std::size_t k = e; k-- > b;) {
                const double prod = std::clamp(c2v[k] * suffix, -kClip, kClip);
                c2v[k] = 2.0 * std::atanh(prod);
                suffix *= t[k];
            }
        }
        for (int v = 0; v < pc.cols; ++v) {
            double total = llr_in[v];
            for (auto e : col_edges[v]) total += c2v[e];
            res.posterior[v] = total;
            res.bits[v] = total <= 0.0 ? 1 : 0;
        }
        res.iterations = it;
        if (pc.syndrome_zero(res.bits)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

/// Systematic encoder from GF(2) elimination of H. Pivots are searched from
/// the rightmost column, so for codes with a parity part on the right the
/// parity positions come out as the last columns.
class SystematicEncoder {
public:
    explicit SystematicEncoder(const ParityCheck& pc) : n_(pc.cols), m_(pc.rows) {
        const std::size_t words = (static_cast<std::size_t>(n_) + 63) / 64;
        std::vector<std::vector<std::uint64_t>> h(m_, std::vector<std::uint64_t>(words, 0));
        for (int r = 0; r < m_; ++r)
            for (int c : pc.row_idx[r]) h[r][c / 64] |= std::uint64_t{1} << (c % 64);
        auto bit = [&](int r, int c) { return (h[r][c / 64] >> (c % 64)) & 1U; };

        std::vector<int> pivot_col;
        int rank = 0;
        for (int c = n_ - 1; c >= 0 && rank < m_; --c) {
            int p = -1;
            for (int r = rank; r < m_; ++r)
                if (bit(r, c)) {
                    p = r;
                    break;
                }
            if (p < 0) continue;
            std::swap(h[rank], h[p]);
            for (int r = 0; r < m_; ++r)
                if (r != rank && bit(r, c))
                    for (std::size_t w = 0; w < words; ++w) h[r][w] ^= h[rank][w];
            pivot_col.push_back(c);
            ++rank;
        }
        if (rank < m_)
            throw SetupError("SystematicEncoder: parity-check matrix has rank " + std::to_string(rank) + " < " +
                             std::to_string(m_) + " rows");

        std::vector<char> is_parity(n_, 0);
        for (int c : pivot_col) is_parity[c] = 1;
        for (int c = 0; c < n_; ++c)
            if (!is_parity[c]) info_pos_.push_back(c);
        // Parity bit at pivot_col[r] = sum over info columns of h[r][col] * u.
        parity_pos_ = pivot_col;
        coef_.assign(m_, std::vector<std::uint64_t>((info_pos_.size() + 63) / 64, 0));
        for (int r = 0; r < m_; ++r)
            for (std::size_t i = 0; i < info_pos_.size(); ++i)
                if (bit(r, info_pos_[i])) coef_[r][i / 64] |= std::uint64_t{1} << (i % 64);
    }

    int n() const { return n_; }
    int k() const { return static_cast<int>(info_pos_.size()); }
    const std::vector<int>& info_positions() const { return info_pos_; }
    const std::vector<int>& parity_positions() const { return parity_pos_; }

    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info) const {
        if (static_cast<int>(info.size()) != k())
            throw InvalidParameter("SystematicEncoder: expected " + std::to_string(k()) + " info bits");
        std::vector<std::uint64_t> packed((info.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < info.size(); ++i)
            if (info[i] & 1U) packed[i / 64] |= std::uint64_t{1} << (i % 64);
        std::vector<std::uint8_t> cw(n_, 0);
        for (std::size_t i = 0; i < info.size(); ++i) cw[info_pos_[i]] = info[i] & 1U;
        for (int r = 0; r < m_; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t w = 0; w < packed.size(); ++w) acc ^= packed[w] & coef_[r][w];
            cw[parity_pos_[r]] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
        }
        return cw;
    }

    std::vector<std::uint8_t> extract_info(const std::vector<std::uint8_t>& codeword) const {
        std::vector<std::uint8_t> u(info_pos_.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = codeword[info_pos_[i]];
        return u;
    }

private:
    int n_;
    int m_;
    std::vector<int> info_pos_;
    std::vector<int> parity_pos_;
    std::vector<std::vector<std::uint64_t>> coef_;
};

}  // namespace permshell
