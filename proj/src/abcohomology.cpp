#include "nilbal/abcohomology.hpp"

#include "nilbal/errors.hpp"

namespace nilbal {

namespace {

struct Indexing {
    std::vector<int> xs;      // generators alive in A/pA (free or p | d_i)
    std::vector<int> ys;      // torsion generators with p | d_i
    int h() const { return int(xs.size()); }
    int t() const { return int(ys.size()); }
    int wedge_dim() const { return h() * (h() - 1) / 2; }
    // position of the pair a < b in the wedge block
    int wpos(int a, int b) const { return a * (2 * h() - a - 1) / 2 + (b - a - 1); }
};

Indexing make_indexing(const FinAbGroup& a, long long p) {
    Indexing ix;
    for (int i = 0; i < a.ngens(); ++i) {
        Int d = a.gen_order(i);
        if (d == 0 || d % p == 0) ix.xs.push_back(i);
        if (d != 0 && d % p == 0) ix.ys.push_back(i);
    }
    return ix;
}

// entry of the Ext/Tor block: (d_j * M(i,j) / d_i) mod p, rows/cols over ys
uint32_t ext_entry(const FinAbGroup& a, const IntMat& m, long long p, int gi, int gj) {
    Int di = a.gen_order(gi), dj = a.gen_order(gj);
    Int v = (dj * m(gi, gj)) / di;
    Int r = v % p;
    if (r < 0) r += p;
    return r.convert_to<uint32_t>();
}

} // namespace

// induced map of psi on (A/pA) ^ (A/pA), column convention
static ModpMat wedge_block(const FinAbGroup& a, const AbHom& psi, long long p);

bool exponent_two_regime(const FinAbGroup& a, long long p) {
    if (p != 2) return false;
    for (auto& d : a.invariant_factors())
        if (d == 2) return true;
    return false;
}

H2Decomposition h2_split_dims(const FinAbGroup& a, long long p) {
    if (!is_prime(p)) throw ParameterInvalid("p must be prime");
    Indexing ix = make_indexing(a, p);
    H2Decomposition d;
    d.p = p;
    d.wedge_dim = ix.wedge_dim();
    d.tor_dim = ix.t();
    d.ext_dim = ix.t();
    d.regime = exponent_two_regime(a, p) ? H2Decomposition::ExponentTwo : H2Decomposition::Split;
    if (d.regime == H2Decomposition::ExponentTwo) {
        int e = 0;      // exponent-2 entries among the x's
        for (int i : ix.xs)
            if (a.gen_order(i) == 2) ++e;
        d.im_sq_dim = e;
        d.im_b_odot_dim = d.wedge_dim - e * (e - 1) / 2;
    }
    return d;
}

static ModpMat wedge_block(const FinAbGroup& a, const AbHom& psi, long long p) {
    Indexing ix = make_indexing(a, p);
    const IntMat& m = psi.matrix();
    int h = ix.h(), w = ix.wedge_dim();
    // induced map on A/pA, column convention
    ModpMat c(int(p), h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            Int v = m(ix.xs[i], ix.xs[j]) % p;
            if (v < 0) v += p;
            c(i, j) = v.convert_to<uint32_t>();
        }
    ModpMat out(int(p), w, w);
    // e_a ^ e_b -> (sum_k c_ka e_k) ^ (sum_l c_lb e_l)
    for (int A = 0; A < h; ++A)
        for (int B = A + 1; B < h; ++B) {
            int col = ix.wpos(A, B);
            for (int k = 0; k < h; ++k)
                for (int l = 0; l < h; ++l) {
                    if (k == l) continue;
                    uint64_t coeff = uint64_t(c(k, A)) * c(l, B) % p;
                    if (!coeff) continue;
                    if (k < l)
                        out(ix.wpos(k, l), col) = uint32_t((out(ix.wpos(k, l), col) + coeff) % p);
                    else
                        out(ix.wpos(l, k), col) =
                            uint32_t((out(ix.wpos(l, k), col) + (p - coeff)) % p);
                }
        }
    return out;
}

ModpMat h2_homology_matrix(const FinAbGroup& a, const AbHom& psi, long long p) {
    if (exponent_two_regime(a, p))
        throw ParameterInvalid("homology model only applies in the split regime");
    Indexing ix = make_indexing(a, p);
    const IntMat& m = psi.matrix();
    int t = ix.t(), w = ix.wedge_dim();
    ModpMat wb = wedge_block(a, psi, p);
    ModpMat out(int(p), w + t, w + t);
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) out(i, j) = wb(i, j);
    // tor block on Ker(p id): basis (d_i/p) g_i
    for (int j = 0; j < t; ++j)
        for (int i = 0; i < t; ++i)
            out(w + i, w + j) = ext_entry(a, m, p, ix.ys[i], ix.ys[j]);
    return out;
}

ModpMat h2_cohomology_matrix(const FinAbGroup& a, const AbHom& psi, long long p) {
    Indexing ix = make_indexing(a, p);
    const IntMat& m = psi.matrix();
    int h = ix.h(), t = ix.t(), w = ix.wedge_dim();
    // pullback on H^1: psi^* x_i = sum_k C(i,k) x_k with C(i,k) = M(i,k) mod p
    ModpMat c(int(p), h, h);
    for (int i = 0; i < h; ++i)
        for (int k = 0; k < h; ++k) {
            Int v = m(ix.xs[i], ix.xs[k]) % p;
            if (v < 0) v += p;
            c(i, k) = v.convert_to<uint32_t>();
        }
    // y position of an x index, when its factor has order exactly 2
    std::vector<int> sq_target(h, -1);
    for (int i = 0; i < h; ++i)
        if (p == 2 && a.gen_order(ix.xs[i]) == 2)
            for (int j = 0; j < t; ++j)
                if (ix.ys[j] == ix.xs[i]) sq_target[i] = j;

    ModpMat out(int(p), w + t, w + t);
    for (int A = 0; A < h; ++A)
        for (int B = A + 1; B < h; ++B) {
            int col = ix.wpos(A, B);
            // psi^*(x_A x_B) = (sum_k C(A,k) x_k)(sum_l C(B,l) x_l)
            for (int k = 0; k < h; ++k) {
                uint64_t ca = c(A, k);
                if (!ca) continue;
                for (int l = 0; l < h; ++l) {
                    uint64_t cb = c(B, l);
                    if (!cb) continue;
                    uint64_t coeff = ca * cb % p;
                    if (k == l) {
                        if (sq_target[k] >= 0)    // x_k^2 = y_k for order-2 factors
                            out(w + sq_target[k], col) =
                                uint32_t((out(w + sq_target[k], col) + coeff) % p);
                        continue;                 // otherwise x_k^2 = 0
                    }
                    if (k < l)
                        out(ix.wpos(k, l), col) = uint32_t((out(ix.wpos(k, l), col) + coeff) % p);
                    else {
                        uint64_t s = (p == 2) ? coeff : (p - coeff) % p;
                        out(ix.wpos(l, k), col) = uint32_t((out(ix.wpos(l, k), col) + s) % p);
                    }
                }
            }
        }
    // psi^*(y_i) = sum_j ((d_j M(i,j))/d_i mod p) y_j : column w+i
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            uint32_t e = ext_entry(a, m, p, ix.ys[i], ix.ys[j]);
            if (e) out(w + j, w + i) = e;
        }
    return out;
}

FixedH2Dims fixed_h2_dims(const FinAbGroup& a, const std::vector<AbHom>& autos, long long p) {
    for (auto& f : autos)
        if (!is_unipotent(f)) throw NotUnipotent("automorphism is not unipotent");
    FixedH2Dims out;
    out.decomposition = h2_split_dims(a, p);
    int total = out.decomposition.total();
    if (total == 0) {
        out.cohomology = 0;
        out.homology = 0;
        out.wedge_kernel = 0;
        return out;
    }
    std::vector<ModpMat> coh;
    for (auto& f : autos) coh.push_back(h2_cohomology_matrix(a, f, p));
    out.cohomology = autos.empty() ? total : fixed_space_dim(coh);
    // the wedge W = F (x) H_2(A;Z) is a natural submodule in every regime,
    // so its kernel block is meaningful even when the full splitting is not
    {
        int w = out.decomposition.wedge_dim;
        std::vector<ModpMat> wedges;
        for (auto& f : autos) wedges.push_back(wedge_block(a, f, p));
        out.wedge_kernel = autos.empty() ? w : fixed_space_dim(wedges);
    }
    if (out.decomposition.regime == H2Decomposition::Split) {
        std::vector<ModpMat> hom;
        for (auto& f : autos) hom.push_back(h2_homology_matrix(a, f, p));
        out.homology = autos.empty() ? total : fixed_space_dim(hom);
    }
    return out;
}

int fixed_h2_dim_formula(const FinAbGroup& a, const std::vector<AbHom>& autos, long long p) {
    return fixed_h2_dims(a, autos, p).cohomology;
}

} // namespace nilbal
