#pragma once

// Dense linear algebra over F_p for small p, plus packed F_2 vectors used by
// the bar-complex reductions where dimensions run into the thousands.

#include <cassert>
#include <cstdint>
#include <vector>

namespace nilbal {

class ModpMat {
public:
    ModpMat() : p_(2), rows_(0), cols_(0) {}
    ModpMat(int p, int rows, int cols)
        : p_(p), rows_(rows), cols_(cols), e_(size_t(rows) * cols, 0) {}

    static ModpMat identity(int p, int n) {
        ModpMat m(p, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int p() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    uint32_t& operator()(int i, int j) { return e_[size_t(i) * cols_ + j]; }
    uint32_t operator()(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

    void set(int i, int j, long long v) {
        long long r = v % p_;
        if (r < 0) r += p_;
        (*this)(i, j) = uint32_t(r);
    }

    bool operator==(const ModpMat& o) const {
        return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool is_zero() const {
        for (auto x : e_) if (x) return false;
        return true;
    }

    ModpMat operator*(const ModpMat& o) const {
        assert(p_ == o.p_ && cols_ == o.rows_);
        ModpMat r(p_, rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                uint64_t a = (*this)(i, k);
                if (!a) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    uint64_t v = r(i, j) + a * o(k, j);
                    r(i, j) = uint32_t(v % p_);
                }
            }
        return r;
    }
    ModpMat operator-(const ModpMat& o) const {
        assert(p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_);
        ModpMat r(p_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i)
            r.e_[i] = (e_[i] + p_ - o.e_[i]) % p_;
        return r;
    }
    ModpMat operator+(const ModpMat& o) const {
        assert(p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_);
        ModpMat r(p_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i)
            r.e_[i] = (e_[i] + o.e_[i]) % p_;
        return r;
    }
    ModpMat transpose() const {
        ModpMat r(p_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

private:
    int p_, rows_, cols_;
    std::vector<uint32_t> e_;
};

int rank(const ModpMat& m);
int nullity(const ModpMat& m);                 // dim ker (m as a map from col-space)
ModpMat kernel_basis(const ModpMat& m);        // columns = basis of {x : m x = 0}
int kernel_dim_minus_identity(const ModpMat& m);   // dim ker(m - I)
int coker_dim(const ModpMat& m);               // rows - rank

// Intersection of kernels of (m_i - I): the subspace fixed by every m_i.
int fixed_space_dim(const std::vector<ModpMat>& ms);
ModpMat fixed_space_basis(const std::vector<ModpMat>& ms);

// Is (m - I) nilpotent? Returns the minimal e with (m - I)^e = 0, or -1.
int unipotent_index(const ModpMat& m);

long long mod_pow(long long b, long long e, long long m);
long long mod_inverse(long long a, long long m);   // a unit mod m
bool is_prime(long long n);

// ---- packed F_2 vectors ---------------------------------------------------

struct F2Vec {
    std::vector<uint64_t> w;
    explicit F2Vec(int bits = 0) : w((bits + 63) / 64, 0) {}
    void set(int i) { w[i >> 6] ^= (uint64_t(1) << (i & 63)); }
    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void operator^=(const F2Vec& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
    bool zero() const {
        for (auto x : w) if (x) return false;
        return true;
    }
    int lowest_bit() const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i]) return int(i * 64 + __builtin_ctzll(w[i]));
        return -1;
    }
};

// Incremental echelon basis over F_2, indexed by lowest set bit.
class F2Echelon {
public:
    explicit F2Echelon(int dim) : dim_(dim), pivot_row_(dim, -1) {}
    int dim() const { return dim_; }
    int rank() const { return int(rows_.size()); }
    // reduce v in place against the basis; returns the residue's pivot or -1
    int reduce(F2Vec& v) const {
        for (;;) {
            int b = v.lowest_bit();
            if (b < 0) return -1;
            int r = pivot_row_[b];
            if (r < 0) return b;
            v ^= rows_[r];
        }
    }
    // insert (after reduction); returns true if rank grew
    bool insert(F2Vec v) {
        int b = reduce(v);
        if (b < 0) return false;
        pivot_row_[b] = int(rows_.size());
        rows_.push_back(std::move(v));
        return true;
    }
    const std::vector<F2Vec>& rows() const { return rows_; }
    int pivot_of_row(int r) const {
        for (int b = 0; b < dim_; ++b)
            if (pivot_row_[b] == r) return b;
        return -1;
    }

private:
    int dim_;
    std::vector<int> pivot_row_;
    std::vector<F2Vec> rows_;
};

// ---- byte vectors mod p (odd p) --------------------------------------------

struct ZpVec {
    int p;
    std::vector<uint16_t> v;
    ZpVec(int p_, int dim) : p(p_), v(dim, 0) {}
    void axpy(uint32_t c, const ZpVec& o) {   // v += c * o
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = uint16_t((v[i] + c * o.v[i]) % p);
    }
    bool zero() const {
        for (auto x : v) if (x) return false;
        return true;
    }
    int lowest_nz() const {
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i]) return int(i);
        return -1;
    }
};

class ZpEchelon {
public:
    ZpEchelon(int p, int dim) : p_(p), dim_(dim), pivot_row_(dim, -1) {}
    int rank() const { return int(rows_.size()); }
    int reduce(ZpVec& v) const {
        for (;;) {
            int b = v.lowest_nz();
            if (b < 0) return -1;
            int r = pivot_row_[b];
            if (r < 0) return b;
            uint32_t c = uint32_t((int64_t(p_) - v.v[b]) % p_);   // v += c*row kills b (row has 1 at b)
            v.axpy(c, rows_[r]);
        }
    }
    bool insert(ZpVec v) {
        int b = reduce(v);
        if (b < 0) return false;
        // normalize pivot to 1
        uint32_t inv = uint32_t(mod_inverse(v.v[b], p_));
        for (auto& x : v.v) x = uint16_t((uint32_t(x) * inv) % p_);
        pivot_row_[b] = int(rows_.size());
        rows_.push_back(std::move(v));
        return true;
    }
    const std::vector<ZpVec>& rows() const { return rows_; }

private:
    int p_, dim_;
    std::vector<int> pivot_row_;
    std::vector<ZpVec> rows_;
};

} // namespace nilbal
