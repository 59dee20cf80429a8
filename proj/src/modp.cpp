#include "nilbal/modp.hpp"

namespace nilbal {

long long mod_pow(long long b, long long e, long long m) {
    long long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = (__int128(r) * b) % m;
        b = (__int128(b) * b) % m;
        e >>= 1;
    }
    return r;
}

long long mod_inverse(long long a, long long m) {
    long long g = m, x = 0, x1 = 1, a1 = a % m;
    if (a1 < 0) a1 += m;
    long long b = a1;
    long long m0 = m;
    // extended euclid
    long long r0 = m0, r1 = b, s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long t = r0 - q * r1; r0 = r1; r1 = t;
        t = s0 - q * s1; s0 = s1; s1 = t;
    }
    (void)g; (void)x; (void)x1;
    long long inv = s0 % m0;
    if (inv < 0) inv += m0;
    return inv;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// row echelon in place; returns rank
int echelonize(ModpMat& m) {
    int p = m.p();
    int rank = 0;
    for (int c = 0; c < m.cols() && rank < m.rows(); ++c) {
        int piv = -1;
        for (int i = rank; i < m.rows(); ++i)
            if (m(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(piv, j));
        uint64_t inv = uint64_t(mod_inverse(m(rank, c), p));
        for (int j = c; j < m.cols(); ++j) m(rank, j) = uint32_t(m(rank, j) * inv % p);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == rank || !m(i, c)) continue;
            uint64_t f = p - m(i, c);
            for (int j = c; j < m.cols(); ++j)
                m(i, j) = uint32_t((m(i, j) + f * m(rank, j)) % p);
        }
        ++rank;
    }
    return rank;
}

} // namespace

int rank(const ModpMat& m) {
    ModpMat c = m;
    return echelonize(c);
}

int nullity(const ModpMat& m) { return m.cols() - rank(m); }

ModpMat kernel_basis(const ModpMat& m) {
    int p = m.p();
    ModpMat e = m;
    echelonize(e);
    // pivot columns
    std::vector<int> pivot_col;
    std::vector<char> is_pivot(m.cols(), 0);
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        if (e(r, c)) { pivot_col.push_back(c); is_pivot[c] = 1; ++r; }
    }
    int k = m.cols() - int(pivot_col.size());
    ModpMat ker(p, m.cols(), k);
    int out = 0;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        ker(c, out) = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i)
            ker(pivot_col[i], out) = uint32_t((p - e(int(i), c)) % p);
        ++out;
    }
    return ker;
}

int kernel_dim_minus_identity(const ModpMat& m) {
    ModpMat d = m - ModpMat::identity(m.p(), m.rows());
    return nullity(d);
}

int coker_dim(const ModpMat& m) { return m.rows() - rank(m); }

int fixed_space_dim(const std::vector<ModpMat>& ms) {
    return fixed_space_basis(ms).cols();
}

ModpMat fixed_space_basis(const std::vector<ModpMat>& ms) {
    if (ms.empty()) return ModpMat();
    int p = ms[0].p(), n = ms[0].rows();
    ModpMat stacked(p, n * int(ms.size()), n);
    for (size_t k = 0; k < ms.size(); ++k) {
        ModpMat d = ms[k] - ModpMat::identity(p, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) stacked(int(k) * n + i, j) = d(i, j);
    }
    return kernel_basis(stacked);
}

int unipotent_index(const ModpMat& m) {
    int n = m.rows();
    ModpMat d = m - ModpMat::identity(m.p(), n);
    if (d.is_zero()) return 0;
    ModpMat pw = d;                       // pw = d^e at the top of iteration e
    for (int e = 1; e <= n; ++e) {
        if (pw.is_zero()) return e;
        if (e < n) pw = pw * d;
    }
    return -1;                            // nilpotency over a field needs index <= n
}

} // namespace nilbal
