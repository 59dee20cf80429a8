#pragma once

// Exact integer matrices and Smith normal form. All entries are arbitrary
// precision; this is the substrate for every abelianization and H2 torsion
// computation in the library.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

namespace nilbal {

using Int = boost::multiprecision::cpp_int;

class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMat zero(int rows, int cols) { return IntMat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return e_[size_t(i) * cols_ + j]; }
    const Int& operator()(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    bool is_zero() const {
        for (const auto& x : e_) if (x != 0) return false;
        return true;
    }

    IntMat operator*(const IntMat& o) const;
    IntMat operator+(const IntMat& o) const;
    IntMat operator-(const IntMat& o) const;
    IntMat transpose() const;

    void swap_rows(int i, int j);
    void swap_cols(int i, int j);
    void add_row(int dst, int src, const Int& c);   // row dst += c * row src
    void add_col(int dst, int src, const Int& c);
    void negate_row(int i);
    void negate_col(int i);

    // column j as a vector
    std::vector<Int> col(int j) const;
    void set_col(int j, const std::vector<Int>& v);

    std::string str() const;

private:
    int rows_, cols_;
    std::vector<Int> e_;
};

// U * A * V = D with U, V unimodular, D diagonal with d1 | d2 | ... >= 0.
struct SnfResult {
    IntMat U, D, V;
    int rank = 0;                    // number of nonzero diagonal entries
    std::vector<Int> diagonal() const;
};

SnfResult smith_normal_form(const IntMat& a);

// Invariant factors only (no transforms); cheaper and used by the sparse paths.
std::vector<Int> snf_diagonal(const IntMat& a);

int rank_z(const IntMat& a);       // rank over Z (= rank over Q)

// Determinant (square matrices), by fraction-free elimination.
Int det(const IntMat& a);

// Basis of the integer kernel lattice {x : A x = 0}, as matrix columns.
IntMat kernel_lattice(const IntMat& a);

// One solution x of A x = b over Z, if any.
std::optional<std::vector<Int>> solve_z(const SnfResult& snf_of_a, const std::vector<Int>& b);
std::optional<std::vector<Int>> solve_z(const IntMat& a, const std::vector<Int>& b);

// ---- lattices ------------------------------------------------------------
// A lattice in Z^n is given by the column span of a matrix.

// Is v in the column span of L over Z?
bool lattice_member(const IntMat& l, const std::vector<Int>& v);
bool lattice_member(const SnfResult& snf_of_l, const std::vector<Int>& v);

// Concatenate columns.
IntMat lattice_sum(const IntMat& a, const IntMat& b);

// {x in Z^n : M x in span(L)}, as columns. M is m x n, L is m x k.
IntMat lattice_preimage(const IntMat& m, const IntMat& l);

// Mutual inclusion of column spans.
bool lattice_equal(const IntMat& a, const IntMat& b);

// Reduce a generating set: columns of a canonical column-style Hermite form.
IntMat lattice_canonical(const IntMat& l);

// ---- sparse SNF ----------------------------------------------------------
// Invariant factors and rank of a large sparse integer matrix. Unit pivots
// are eliminated greedily with Markowitz-style pivot choice; whatever is left
// falls back to the dense routine.
struct SparseIntMat {
    int rows = 0, cols = 0;
    // per-column list of (row, value)
    std::vector<std::vector<std::pair<int, long long>>> col_entries;
    void add(int r, int c, long long v) { col_entries[c].push_back({r, v}); }
};

struct SparseSnfResult {
    int rank = 0;
    std::vector<Int> nontrivial_factors;   // invariant factors > 1
};

SparseSnfResult sparse_snf(const SparseIntMat& m);

} // namespace nilbal
