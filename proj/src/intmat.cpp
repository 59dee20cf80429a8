#include "nilbal/intmat.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace nilbal {

IntMat IntMat::operator*(const IntMat& o) const {
    assert(cols_ == o.rows_);
    IntMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& a = (*this)(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Int& b = o(k, j);
                if (b != 0) r(i, j) += a * b;
            }
        }
    return r;
}

IntMat IntMat::operator+(const IntMat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    IntMat r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

IntMat IntMat::operator-(const IntMat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    IntMat r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

void IntMat::swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMat::swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMat::add_row(int dst, int src, const Int& c) {
    if (c == 0) return;
    for (int j = 0; j < cols_; ++j)
        if ((*this)(src, j) != 0) (*this)(dst, j) += c * (*this)(src, j);
}

void IntMat::add_col(int dst, int src, const Int& c) {
    if (c == 0) return;
    for (int i = 0; i < rows_; ++i)
        if ((*this)(i, src) != 0) (*this)(i, dst) += c * (*this)(i, src);
}

void IntMat::negate_row(int i) {
    for (int j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
}

void IntMat::negate_col(int j) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
}

std::vector<Int> IntMat::col(int j) const {
    std::vector<Int> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void IntMat::set_col(int j, const std::vector<Int>& v) {
    assert(int(v.size()) == rows_);
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

std::string IntMat::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < cols_; ++j) os << (*this)(i, j) << (j + 1 < cols_ ? " " : "");
        os << (i + 1 < rows_ ? ";\n" : "]");
    }
    return os.str();
}

std::vector<Int> SnfResult::diagonal() const {
    std::vector<Int> d;
    int n = std::min(D.rows(), D.cols());
    for (int i = 0; i < n; ++i) d.push_back(D(i, i));
    return d;
}

namespace {

// quotient with symmetric remainder: a = q*b + r, |r| <= |b|/2
Int round_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (r != 0) {
        Int b2 = abs(b);
        if (2 * abs(r) > b2) {
            if ((r > 0) == (b > 0)) q += 1; else q -= 1;
        }
    }
    return q;
}

// locate the nonzero entry of minimal absolute value in the trailing block
bool find_pivot(const IntMat& d, int t, int& pi, int& pj) {
    bool found = false;
    Int best;
    for (int i = t; i < d.rows(); ++i)
        for (int j = t; j < d.cols(); ++j) {
            const Int& x = d(i, j);
            if (x == 0) continue;
            Int a = abs(x);
            if (!found || a < best) { found = true; best = a; pi = i; pj = j; }
        }
    return found;
}

} // namespace

SnfResult smith_normal_form(const IntMat& a) {
    SnfResult r;
    r.D = a;
    r.U = IntMat::identity(a.rows());
    r.V = IntMat::identity(a.cols());
    IntMat& d = r.D;
    int n = std::min(a.rows(), a.cols());

    for (int t = 0; t < n; ++t) {
        int pi, pj;
        if (!find_pivot(d, t, pi, pj)) break;    // trailing block is zero
        d.swap_rows(t, pi); r.U.swap_rows(t, pi);
        d.swap_cols(t, pj); r.V.swap_cols(t, pj);

        for (;;) {
            // clear column t below the pivot
            bool clean = true;
            for (int i = t + 1; i < d.rows(); ++i) {
                if (d(i, t) == 0) continue;
                Int q = round_div(d(i, t), d(t, t));
                d.add_row(i, t, -q); r.U.add_row(i, t, -q);
                if (d(i, t) != 0) clean = false;
            }
            // clear row t
            for (int j = t + 1; j < d.cols(); ++j) {
                if (d(t, j) == 0) continue;
                Int q = round_div(d(t, j), d(t, t));
                d.add_col(j, t, -q); r.V.add_col(j, t, -q);
                if (d(t, j) != 0) clean = false;
            }
            if (!clean) {
                // a smaller remainder exists somewhere in row/column t
                int qi = t, qj = t;
                Int best = abs(d(t, t));
                for (int i = t; i < d.rows(); ++i)
                    if (d(i, t) != 0 && abs(d(i, t)) < best) { best = abs(d(i, t)); qi = i; qj = t; }
                for (int j = t; j < d.cols(); ++j)
                    if (d(t, j) != 0 && abs(d(t, j)) < best) { best = abs(d(t, j)); qi = t; qj = j; }
                d.swap_rows(t, qi); r.U.swap_rows(t, qi);
                d.swap_cols(t, qj); r.V.swap_cols(t, qj);
                continue;
            }
            // pivot divides the rest of the block?
            bool divides = true;
            int bi = -1, bj = -1;
            for (int i = t + 1; i < d.rows() && divides; ++i)
                for (int j = t + 1; j < d.cols(); ++j)
                    if (d(i, j) % d(t, t) != 0) { divides = false; bi = i; bj = j; break; }
            if (divides) break;
            d.add_row(t, bi, 1); r.U.add_row(t, bi, 1);
            (void)bj;
        }
        if (d(t, t) < 0) { d.negate_row(t); r.U.negate_row(t); }
    }
    for (int i = 0; i < n; ++i)
        if (d(i, i) != 0) ++r.rank;
    return r;
}

std::vector<Int> snf_diagonal(const IntMat& a) {
    return smith_normal_form(a).diagonal();
}

int rank_z(const IntMat& a) {
    // fraction-free Gaussian elimination; avoids the transform bookkeeping
    IntMat m = a;
    int rank = 0;
    int rr = m.rows(), cc = m.cols();
    for (int c = 0; c < cc && rank < rr; ++c) {
        int piv = -1;
        for (int i = rank; i < rr; ++i)
            if (m(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        m.swap_rows(rank, piv);
        for (int i = rank + 1; i < rr; ++i) {
            if (m(i, c) == 0) continue;
            Int g = gcd(m(rank, c), m(i, c));
            Int fi = m(rank, c) / g, fr = m(i, c) / g;
            for (int j = c; j < cc; ++j) m(i, j) = fi * m(i, j) - fr * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

Int det(const IntMat& a) {
    assert(a.rows() == a.cols());
    // Bareiss
    int n = a.rows();
    if (n == 0) return 1;
    IntMat m = a;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            m.swap_rows(k, piv);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

IntMat kernel_lattice(const IntMat& a) {
    SnfResult s = smith_normal_form(a);
    int n = a.cols();
    std::vector<int> zero_cols;
    for (int j = 0; j < n; ++j) {
        bool z = j >= std::min(a.rows(), a.cols()) || s.D(j, j) == 0;
        if (z) zero_cols.push_back(j);
    }
    IntMat k(n, int(zero_cols.size()));
    for (size_t c = 0; c < zero_cols.size(); ++c)
        for (int i = 0; i < n; ++i) k(i, int(c)) = s.V(i, zero_cols[c]);
    return k;
}

std::optional<std::vector<Int>> solve_z(const SnfResult& s, const std::vector<Int>& b) {
    int rows = s.U.cols();   // = rows of A
    int cols = s.V.rows();   // = cols of A
    assert(int(b.size()) == rows);
    std::vector<Int> ub(rows, 0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j)
            if (s.U(i, j) != 0 && b[j] != 0) ub[i] += s.U(i, j) * b[j];
    std::vector<Int> y(cols, 0);
    int n = std::min(rows, cols);
    for (int i = 0; i < rows; ++i) {
        Int di = (i < n) ? s.D(i, i) : Int(0);
        if (di == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % di != 0) return std::nullopt;
            y[i] = ub[i] / di;
        }
    }
    std::vector<Int> x(cols, 0);
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < cols; ++j)
            if (s.V(i, j) != 0 && y[j] != 0) x[i] += s.V(i, j) * y[j];
    return x;
}

std::optional<std::vector<Int>> solve_z(const IntMat& a, const std::vector<Int>& b) {
    return solve_z(smith_normal_form(a), b);
}

bool lattice_member(const SnfResult& s, const std::vector<Int>& v) {
    return solve_z(s, v).has_value();
}

bool lattice_member(const IntMat& l, const std::vector<Int>& v) {
    return solve_z(l, v).has_value();
}

IntMat lattice_sum(const IntMat& a, const IntMat& b) {
    assert(a.rows() == b.rows() || a.cols() == 0 || b.cols() == 0);
    int rows = a.cols() ? a.rows() : b.rows();
    IntMat r(rows, a.cols() + b.cols());
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

IntMat lattice_preimage(const IntMat& m, const IntMat& l) {
    // kernel of [M | -L], projected onto the first n coordinates
    int n = m.cols(), k = l.cols();
    IntMat stacked(m.rows(), n + k);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < n; ++j) stacked(i, j) = m(i, j);
        for (int j = 0; j < k; ++j) stacked(i, n + j) = -l(i, j);
    }
    IntMat ker = kernel_lattice(stacked);
    IntMat out(n, ker.cols());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < ker.cols(); ++j) out(i, j) = ker(i, j);
    return out;
}

bool lattice_equal(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows() && a.cols() && b.cols()) return false;
    SnfResult sa = smith_normal_form(a), sb = smith_normal_form(b);
    for (int j = 0; j < b.cols(); ++j)
        if (!lattice_member(sa, b.col(j))) return false;
    for (int j = 0; j < a.cols(); ++j)
        if (!lattice_member(sb, a.col(j))) return false;
    return true;
}

IntMat lattice_canonical(const IntMat& l) {
    // column Hermite form, deterministic; zero columns dropped
    IntMat m = l;
    int rows = m.rows(), cols = m.cols();
    int c = 0;
    for (int r = 0; r < rows && c < cols; ++r) {
        // gcd out row r across columns c..
        for (;;) {
            int piv = -1;
            Int best;
            for (int j = c; j < cols; ++j)
                if (m(r, j) != 0 && (piv < 0 || abs(m(r, j)) < best)) { piv = j; best = abs(m(r, j)); }
            if (piv < 0) break;
            m.swap_cols(c, piv);
            bool done = true;
            for (int j = c + 1; j < cols; ++j) {
                if (m(r, j) == 0) continue;
                Int q = round_div(m(r, j), m(r, c));
                m.add_col(j, c, -q);
                if (m(r, j) != 0) done = false;
            }
            if (done) break;
        }
        if (c < cols && m(r, c) != 0) {
            if (m(r, c) < 0) m.negate_col(c);
            // reduce earlier columns against this pivot
            for (int j = 0; j < c; ++j) {
                Int q = m(r, j) / m(r, c);
                if (m(r, j) % m(r, c) < 0) q -= 1;
                m.add_col(j, c, -q);
            }
            ++c;
        }
    }
    // keep the first c columns (pivots); the rest are zero
    IntMat out(rows, c);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = m(i, j);
    return out;
}

SparseSnfResult sparse_snf(const SparseIntMat& m) {
    // row-major working form with hash-ish maps per row and per column
    int rows = m.rows, cols = m.cols;
    std::vector<std::map<int, Int>> row(rows);
    for (int c = 0; c < cols; ++c)
        for (auto& [r, v] : m.col_entries[c])
            if (v != 0) {
                auto& cell = row[r][c];
                cell += v;
                if (cell == 0) row[r].erase(c);
            }
    std::vector<std::set<int>> col_rows(cols);
    for (int r = 0; r < rows; ++r)
        for (auto& [c, v] : row[r]) col_rows[c].insert(r);

    SparseSnfResult res;
    std::vector<char> row_done(rows, 0), col_done(cols, 0);

    auto eliminate = [&](int pr, int pc) {
        Int piv = row[pr][pc];
        // clear column pc using row pr
        std::vector<int> rows_in_col(col_rows[pc].begin(), col_rows[pc].end());
        for (int r : rows_in_col) {
            if (r == pr || row_done[r]) continue;
            auto it = row[r].find(pc);
            if (it == row[r].end()) continue;
            Int f = it->second / piv;   // piv is a unit here: exact
            for (auto& [c, v] : row[pr]) {
                auto& cell = row[r][c];
                bool was = cell != 0;
                cell -= f * v;
                if (cell == 0) { row[r].erase(c); if (was) col_rows[c].erase(r); }
                else if (!was) col_rows[c].insert(r);
            }
        }
        row_done[pr] = 1;
        col_done[pc] = 1;
        for (auto& [c, v] : row[pr]) col_rows[c].erase(pr);
        res.rank++;
    };

    // repeatedly take a +-1 pivot with small Markowitz cost
    for (;;) {
        int best_r = -1, best_c = -1;
        long long best_cost = -1;
        for (int r = 0; r < rows; ++r) {
            if (row_done[r] || row[r].empty()) continue;
            for (auto& [c, v] : row[r]) {
                if (col_done[c]) continue;
                if (v != 1 && v != -1) continue;
                long long cost = (long long)(row[r].size() - 1) * (long long)(col_rows[c].size() - 1);
                if (best_cost < 0 || cost < best_cost) {
                    best_cost = cost; best_r = r; best_c = c;
                    if (cost == 0) break;
                }
            }
            if (best_cost == 0) break;
        }
        if (best_r < 0) break;
        eliminate(best_r, best_c);   // unit pivot: invariant factor 1
    }

    // dense fallback on what is left
    std::vector<int> live_rows, live_cols;
    for (int r = 0; r < rows; ++r)
        if (!row_done[r] && !row[r].empty()) live_rows.push_back(r);
    std::set<int> lc;
    for (int r : live_rows)
        for (auto& [c, v] : row[r])
            if (!col_done[c]) lc.insert(c);
    live_cols.assign(lc.begin(), lc.end());
    if (!live_rows.empty() && !live_cols.empty()) {
        IntMat rest(int(live_rows.size()), int(live_cols.size()));
        std::map<int, int> cidx;
        for (size_t j = 0; j < live_cols.size(); ++j) cidx[live_cols[j]] = int(j);
        for (size_t i = 0; i < live_rows.size(); ++i)
            for (auto& [c, v] : row[live_rows[i]])
                if (cidx.count(c)) rest(int(i), cidx[c]) = v;
        auto diag = snf_diagonal(rest);
        for (auto& d : diag) {
            if (d == 0) continue;
            res.rank++;
            if (d > 1) res.nontrivial_factors.push_back(d);
        }
    }
    std::sort(res.nontrivial_factors.begin(), res.nontrivial_factors.end());
    return res;
}

} // namespace nilbal
