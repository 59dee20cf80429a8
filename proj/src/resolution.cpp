#include "nilbal/resolution.hpp"

#include "nilbal/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nilbal {

namespace {

// ---- base complexes ----

FreeComplex base_complex(const PcTower& t) {
    FreeComplex c;
    long long k = t.base_order();
    GroupRingElem zm1 =
        GroupRingElem(t.generator(0), 1) - GroupRingElem(t.identity(), 1);
    if (k == 1) {
        c.rank = {1, 0, 0, 0};
        c.d[1] = RingMat(0, 1);
        c.d[2] = RingMat(0, 0);
        c.d[3] = RingMat(0, 0);
        return c;
    }
    if (k == 0) {
        c.rank = {1, 1, 0, 0};
        c.d[1] = RingMat(1, 1);
        c.d[1].at(0, 0) = zm1;
        c.d[2] = RingMat(0, 1);
        c.d[3] = RingMat(0, 0);
        return c;
    }
    c.rank = {1, 1, 1, 1};
    c.d[1] = RingMat(1, 1);
    c.d[1].at(0, 0) = zm1;
    c.d[2] = RingMat(1, 1);
    c.d[2].at(0, 0) = norm_element(t);
    c.d[3] = RingMat(1, 1);
    c.d[3].at(0, 0) = zm1;
    return c;
}

GroupRingElem extend_width(const GroupRingElem& x, int width) {
    GroupRingElem r;
    for (auto& [m, co] : x.terms()) {
        Monomial mm = m;
        mm.e.resize(width, 0);
        r.add(mm, co);
    }
    return r;
}

GroupRingElem truncate_width(const GroupRingElem& x, int width) {
    GroupRingElem r;
    for (auto& [m, co] : x.terms()) {
        Monomial mm(width);
        for (int i = 0; i < width; ++i) mm.e[i] = m.e[i];
        r.add(mm, co);
    }
    return r;
}

// conjugation by the top generator of `full`, acting on subtower ring elements
GroupRingElem psi_apply(const PcTower& full, const GroupRingElem& x, long long s = 1) {
    int top = full.ngens() - 1;
    GroupRingElem ext = extend_width(x, full.ngens());
    GroupRingElem out;
    for (auto& [m, co] : ext.terms()) out.add(full.conj_pow(top, s, m), co);
    return truncate_width(out, full.ngens() - 1);
}

RingMat psi_mat(const PcTower& full, const RingMat& m) {
    RingMat r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = psi_apply(full, m.at(i, j));
    return r;
}

// sum_{i<n} z^{i} for n >= 0, and the Fox-style -(z^-1 + ... + z^n) for n < 0
GroupRingElem geometric(const PcTower& t, long long n) {
    GroupRingElem r;
    if (n >= 0)
        for (long long i = 0; i < n; ++i) r.add(t.generator(0, i), 1);
    else
        for (long long i = -1; i >= n; --i) r.add(t.generator(0, i), -1);
    return r;
}

// closed-form lift of conjugation over a base-only resolution
std::array<RingMat, 4> base_lift(const PcTower& full, const PcTower& sub, const FreeComplex& c) {
    std::array<RingMat, 4> p;
    p[0] = RingMat(1, 1);
    p[0].at(0, 0) = GroupRingElem::one(sub);
    long long k = sub.base_order();
    if (k == 1) return p;
    // conjugation sends the base generator to its n-th power
    Monomial img = full.level(1).conj[0];
    long long n = img.e[0];
    p[1] = RingMat(1, 1);
    p[1].at(0, 0) = geometric(sub, n);
    if (k == 0) return p;
    p[2] = RingMat(1, 1);
    p[2].at(0, 0) = GroupRingElem(sub.identity(), n);
    p[3] = RingMat(1, 1);
    p[3].at(0, 0) = ring_scale(geometric(sub, n), n);
    (void)c;
    return p;
}

// generic degree-by-degree solver: find P with P * M = rhs over the subtower
// ring, entries supported on a bounded monomial set
std::optional<RingMat> solve_transfer(const PcTower& sub, const RingMat& m, const RingMat& rhs,
                                      int expansions) {
    int rows = rhs.rows, mid = m.rows, cols = m.cols;
    // candidate support: quotients of rhs monomials by M monomials
    std::set<Monomial> support;
    support.insert(sub.identity());
    std::set<Monomial> msup, rsup;
    for (auto& e : m.e)
        for (auto& [mon, c] : e.terms()) msup.insert(mon);
    for (auto& e : rhs.e)
        for (auto& [mon, c] : e.terms()) rsup.insert(mon);
    for (auto& r : rsup)
        for (auto& mm : msup) support.insert(sub.mul(r, sub.inv(mm)));
    for (int round = 0; round <= expansions; ++round) {
        if (round > 0) {
            std::set<Monomial> bigger = support;
            for (auto& s : support)
                for (int g = 0; g < sub.ngens(); ++g) {
                    bigger.insert(sub.mul(s, sub.generator(g)));
                    bigger.insert(sub.mul(s, sub.generator(g, -1)));
                }
            support = std::move(bigger);
        }
        std::vector<Monomial> supp(support.begin(), support.end());
        int ns = int(supp.size());
        // precompute s * M(b, c)
        std::vector<std::vector<GroupRingElem>> smc(size_t(ns) * mid,
                                                    std::vector<GroupRingElem>());
        RingMat out(rows, mid);
        bool all_rows = true;
        for (int a = 0; a < rows && all_rows; ++a) {
            // equation monomials per column c
            std::vector<std::map<Monomial, int>> rowidx(cols);
            int neq = 0;
            auto touch = [&](int c, const Monomial& mon) {
                if (!rowidx[c].count(mon)) rowidx[c][mon] = 0;
            };
            for (int c = 0; c < cols; ++c) {
                for (auto& [mon, co] : rhs.at(a, c).terms()) touch(c, mon);
                for (int b = 0; b < mid; ++b)
                    for (auto& [mon, co] : m.at(b, c).terms())
                        for (auto& s : supp) touch(c, sub.mul(s, mon));
            }
            for (int c = 0; c < cols; ++c)
                for (auto& [mon, id] : rowidx[c]) id = neq++;
            IntMat sys(neq, mid * ns);
            std::vector<Int> b(neq, 0);
            for (int c = 0; c < cols; ++c)
                for (auto& [mon, co] : rhs.at(a, c).terms()) b[rowidx[c][mon]] = co;
            for (int bb = 0; bb < mid; ++bb)
                for (int si = 0; si < ns; ++si)
                    for (int c = 0; c < cols; ++c)
                        for (auto& [mon, co] : m.at(bb, c).terms()) {
                            Monomial sm = sub.mul(supp[si], mon);
                            sys(rowidx[c][sm], bb * ns + si) += co;
                        }
            auto sol = solve_z(sys, b);
            if (!sol) {
                all_rows = false;
                break;
            }
            for (int bb = 0; bb < mid; ++bb) {
                GroupRingElem e;
                for (int si = 0; si < ns; ++si) e.add(supp[si], (*sol)[bb * ns + si]);
                out.at(a, bb) = e;
            }
        }
        if (all_rows) return out;
    }
    return std::nullopt;
}

std::array<RingMat, 4> solve_lifts(const PcTower& full, const PcTower& sub,
                                   const FreeComplex& c) {
    if (sub.nlevels() == 0) {
        auto p = base_lift(full, sub, c);
        return p;
    }
    std::array<RingMat, 4> p;
    p[0] = RingMat(1, 1);
    p[0].at(0, 0) = GroupRingElem::one(sub);
    for (int n = 1; n <= 3; ++n) {
        if (c.rank[n] == 0) {
            p[n] = RingMat(0, 0);
            continue;
        }
        RingMat rhs = ring_mat_mul(sub, psi_mat(full, c.d[n]), p[n - 1]);
        auto sol = solve_transfer(sub, c.d[n], rhs, 2);
        if (!sol)
            throw LiftFailure("no chain-map lift in degree " + std::to_string(n) +
                              " within the support bound");
        p[n] = *sol;
    }
    return p;
}

void verify_lifts(const PcTower& full, const PcTower& sub, const FreeComplex& c,
                  const std::array<RingMat, 4>& p) {
    for (int n = 1; n <= 3; ++n) {
        if (c.rank[n] == 0) continue;
        RingMat lhs = ring_mat_mul(sub, p[n], c.d[n]);
        RingMat rhs = ring_mat_mul(sub, psi_mat(full, c.d[n]), p[n - 1]);
        for (size_t i = 0; i < lhs.e.size(); ++i)
            if (!(lhs.e[i] == rhs.e[i]))
                throw LiftFailure("lifting identity fails in degree " + std::to_string(n));
    }
}

FreeComplex mapping_cone(const PcTower& full, const FreeComplex& c,
                         const std::array<RingMat, 4>& lift) {
    int top = full.ngens() - 1;
    int width = full.ngens();
    Monomial tinv = full.generator(top, -1);
    auto phi = [&](const GroupRingElem& entry) {
        GroupRingElem ext = extend_width(entry, width), r;
        for (auto& [mo, co] : ext.terms()) r.add(full.mul(tinv, mo), co);
        return r;
    };
    FreeComplex out;
    out.rank = {c.rank[0], c.rank[1] + c.rank[0], c.rank[2] + c.rank[1],
                c.rank[3] + c.rank[2]};
    GroupRingElem one(full.identity(), 1);
    for (int n = 1; n <= 3; ++n) {
        RingMat m(out.rank[n], out.rank[n - 1]);
        // untwisted rows
        for (int i = 0; i < c.rank[n]; ++i)
            for (int j = 0; j < c.rank[n - 1]; ++j)
                m.at(i, j) = extend_width(c.d[n].at(i, j), width);
        // cone rows: [Phi - 1 | -d_{n-1}]
        for (int j = 0; j < c.rank[n - 1]; ++j) {
            for (int l = 0; l < c.rank[n - 1]; ++l) {
                GroupRingElem e = phi(lift[n - 1].at(j, l));
                if (l == j) e = e - one;
                m.at(c.rank[n] + j, l) = e;
            }
            if (n >= 2)
                for (int l = 0; l < c.rank[n - 2]; ++l)
                    m.at(c.rank[n] + j, c.rank[n - 1] + l) =
                        extend_width(c.d[n - 1].at(j, l), width).negate();
        }
        out.d[n] = m;
    }
    return out;
}

void verify_complex(const PcTower& t, const FreeComplex& c) {
    for (int n = 2; n <= 3; ++n) {
        if (c.rank[n] == 0 || c.rank[n - 1] == 0) continue;
        RingMat prod = ring_mat_mul(t, c.d[n], c.d[n - 1]);
        if (!ring_mat_is_zero(prod))
            throw LiftFailure("d o d != 0 in degree " + std::to_string(n));
    }
}

ModpMat to_modp(const IntMat& m, long long p) {
    ModpMat r(int(p), m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Int v = m(i, j) % p;
            if (v < 0) v += p;
            r(i, j) = v.convert_to<uint32_t>();
        }
    return r;
}

} // namespace

TowerResolution wang_resolution(const PcTower& t) {
    if (t.nlevels() == 0) {
        TowerResolution r{t, base_complex(t), std::nullopt, {}, {}};
        verify_complex(t, r.full);
        return r;
    }
    PcTower sub = t.prefix(t.nlevels() - 1);
    TowerResolution inner = wang_resolution(sub);
    TowerResolution r{t, FreeComplex{}, sub, inner.full, {}};
    r.lift = solve_lifts(t, sub, r.sub);
    verify_lifts(t, sub, r.sub, r.lift);
    r.full = mapping_cone(t, r.sub, r.lift);
    verify_complex(t, r.full);
    return r;
}

namespace {

// small dense quotient-space bookkeeping over F_p (column vectors)
struct SmallQuotient {
    long long p;
    int amb;
    std::vector<std::vector<uint32_t>> rows;   // echelon, pivots normalized to 1
    std::vector<int> piv;

    SmallQuotient(long long p_, int amb_) : p(p_), amb(amb_) {}

    bool reduce(std::vector<uint32_t>& v) const {
        for (size_t r = 0; r < rows.size(); ++r) {
            uint32_t c = v[piv[r]];
            if (!c) continue;
            uint64_t f = p - c;
            for (int i = 0; i < amb; ++i) v[i] = uint32_t((v[i] + f * rows[r][i]) % p);
        }
        for (auto x : v)
            if (x) return false;
        return true;
    }
    void insert(std::vector<uint32_t> v) {
        if (reduce(v)) return;
        int pv = -1;
        for (int i = 0; i < amb; ++i)
            if (v[i]) { pv = i; break; }
        uint64_t inv = uint64_t(mod_inverse(v[pv], p));
        for (auto& x : v) x = uint32_t(x * inv % p);
        rows.push_back(std::move(v));
        piv.push_back(pv);
    }
};

} // namespace

KHomologyData subtower_homology_data(const TowerResolution& r, long long p) {
    if (!r.subtower) throw ParameterInvalid("tower has no subtower");
    KHomologyData out;
    out.p = p;
    // transpose to column convention
    ModpMat d1 = to_modp(augment(r.sub.d[1]), p).transpose();
    ModpMat d2 = to_modp(augment(r.sub.d[2]), p).transpose();
    ModpMat d3 = to_modp(augment(r.sub.d[3]), p).transpose();
    ModpMat p1 = to_modp(augment(r.lift[1]), p).transpose();
    ModpMat p2 = to_modp(augment(r.lift[2]), p).transpose();

    auto degree = [&](const ModpMat& dn, const ModpMat& dn1, const ModpMat& lift_t, int cn,
                      ModpMat& map_out) {
        // H = ker(dn)/im(dn1), induced map = lift_t on representatives
        ModpMat cyc = dn.rows() > 0 ? kernel_basis(dn) : ModpMat::identity(int(p), cn);
        SmallQuotient bnd(p, cn);
        for (int j = 0; j < dn1.cols(); ++j) {
            std::vector<uint32_t> v(cn);
            for (int i = 0; i < cn; ++i) v[i] = dn1(i, j);
            bnd.insert(std::move(v));
        }
        // representatives
        std::vector<std::vector<uint32_t>> reps;
        std::vector<int> rep_piv;
        for (int j = 0; j < cyc.cols(); ++j) {
            std::vector<uint32_t> v(cn);
            for (int i = 0; i < cn; ++i) v[i] = cyc(i, j);
            if (bnd.reduce(v)) continue;
            // reduce against previous reps
            bool zero = false;
            for (;;) {
                int pv = -1;
                for (int i = 0; i < cn; ++i)
                    if (v[i]) { pv = i; break; }
                if (pv < 0) { zero = true; break; }
                int hit = -1;
                for (size_t t2 = 0; t2 < reps.size(); ++t2)
                    if (rep_piv[t2] == pv) { hit = int(t2); break; }
                if (hit < 0) break;
                uint64_t f = p - v[pv];
                for (int i = 0; i < cn; ++i)
                    v[i] = uint32_t((v[i] + f * reps[hit][i]) % p);
            }
            if (zero) continue;
            int pv = -1;
            for (int i = 0; i < cn; ++i)
                if (v[i]) { pv = i; break; }
            uint64_t inv = uint64_t(mod_inverse(v[pv], p));
            for (auto& x : v) x = uint32_t(x * inv % p);
            reps.push_back(v);
            rep_piv.push_back(pv);
        }
        int h = int(reps.size());
        map_out = ModpMat(int(p), h, h);
        for (int col = 0; col < h; ++col) {
            std::vector<uint32_t> img(cn, 0);
            for (int i = 0; i < cn; ++i) {
                uint64_t acc = 0;
                for (int k2 = 0; k2 < cn; ++k2)
                    acc += uint64_t(lift_t(i, k2)) * reps[col][k2] % p;
                img[i] = uint32_t(acc % p);
            }
            bnd.reduce(img);
            for (;;) {
                int pv = -1;
                for (int i = 0; i < cn; ++i)
                    if (img[i]) { pv = i; break; }
                if (pv < 0) break;
                int hit = -1;
                for (size_t t2 = 0; t2 < reps.size(); ++t2)
                    if (rep_piv[t2] == pv) { hit = int(t2); break; }
                if (hit < 0) throw std::logic_error("homology class escaped its basis");
                uint32_t coef = img[pv];
                map_out(hit, col) = coef;
                uint64_t f = p - coef;
                for (int i = 0; i < cn; ++i)
                    img[i] = uint32_t((img[i] + f * reps[hit][i]) % p);
            }
        }
        return h;
    };

    out.h1_dim = degree(d1, d2, p1, r.sub.rank[1], out.h1_map);
    out.h2_dim = degree(d2, d3, p2, r.sub.rank[2], out.h2_map);
    return out;
}

WangBetti wang_identity_check(const KHomologyData& k, bool require_unipotent) {
    if (require_unipotent) {
        if (k.h1_dim > 0 && unipotent_index(k.h1_map) < 0)
            throw NotUnipotent("H1 induced map is not unipotent");
        if (k.h2_dim > 0 && unipotent_index(k.h2_map) < 0)
            throw NotUnipotent("H2 induced map is not unipotent");
    }
    WangBetti w;
    int cok1 = 0, ker1 = 0, cok2 = 0;
    if (k.h1_dim > 0) {
        ModpMat d = k.h1_map - ModpMat::identity(int(k.p), k.h1_dim);
        int r = rank(d);
        cok1 = k.h1_dim - r;
        ker1 = k.h1_dim - r;
    }
    if (k.h2_dim > 0) {
        ModpMat d = k.h2_map - ModpMat::identity(int(k.p), k.h2_dim);
        cok2 = k.h2_dim - rank(d);
    }
    w.beta1 = 1 + cok1;
    w.beta2 = cok2 + ker1;
    w.h2_cyclic_module = cok2 <= 1;
    return w;
}

BettiReport betti(const PcTower& t, const BettiOptions& opt) {
    TowerResolution res = wang_resolution(t);
    BettiReport rep;
    rep.hirsch = t.hirsch_length();
    rep.nilpotent = t.is_nilpotent();

    IntMat e1 = augment(res.full.d[1]);
    IntMat e2 = augment(res.full.d[2]);
    IntMat e3 = augment(res.full.d[3]);
    auto beta_at = [&](long long p) -> std::array<int, 3> {
        int r1, r2, r3;
        if (p == 0) {
            r1 = rank_z(e1);
            r2 = rank_z(e2);
            r3 = rank_z(e3);
        } else {
            r1 = rank(to_modp(e1, p));
            r2 = rank(to_modp(e2, p));
            r3 = rank(to_modp(e3, p));
        }
        return {res.full.rank[0] - r1, res.full.rank[1] - r1 - r2,
                res.full.rank[2] - r2 - r3};
    };

    if (opt.with_rationals) {
        auto b = beta_at(0);
        rep.beta0_q = b[0];
        rep.beta1_q = b[1];
        rep.beta2_q = b[2];
    }
    std::vector<long long> primes = opt.primes;
    if (primes.empty()) {
        std::set<long long> ps{2, 3, 5};
        long long k = t.base_order();
        for (long long q = 2; q * q <= k; ++q)
            if (k % q == 0) {
                ps.insert(q);
                while (k % q == 0) k /= q;
            }
        if (k > 1) ps.insert(k);
        primes.assign(ps.begin(), ps.end());
    }
    for (long long p : primes) {
        auto b = beta_at(p);
        rep.per_prime.push_back({p, b[1], b[2]});
    }

    if (opt.integral_h2) {
        int r2 = rank_z(e2), r3 = rank_z(e3);
        int free_rank = (res.full.rank[2] - r2) - r3;
        auto diag = snf_diagonal(e3);
        rep.integral_h2 = FinAbGroup::from_diagonal(diag, free_rank);
    }

    rep.verdict = BettiReport::BalancedConsistent;
    if (opt.with_rationals && rep.beta2_q > rep.beta1_q) {
        rep.verdict = BettiReport::NotHomologicallyBalanced;
        rep.witness_prime = 0;
    }
    for (auto& [p, b1, b2] : rep.per_prime)
        if (b2 > b1 && rep.verdict != BettiReport::NotHomologicallyBalanced) {
            rep.verdict = BettiReport::NotHomologicallyBalanced;
            rep.witness_prime = p;
        }

    if (opt.wang_cross_check && t.nlevels() >= 1) {
        for (long long p : primes) {
            KHomologyData kd = subtower_homology_data(res, p);
            auto b = beta_at(p);
            BettiReport::WangCheck wc;
            wc.p = p;
            wc.lhs = b[2] - b[1] + 1;
            int cok2 = kd.h2_dim;
            if (kd.h2_dim > 0)
                cok2 = kd.h2_dim -
                       rank(kd.h2_map - ModpMat::identity(int(p), kd.h2_dim));
            wc.rhs = cok2;
            wc.ok = wc.lhs == wc.rhs;
            rep.wang_checks.push_back(wc);
        }
    }
    return rep;
}

EulerDims euler_dims(long long p, const ModpMat& act_x, const ModpMat& act_y) {
    if (!is_prime(p)) throw ParameterInvalid("p must be prime");
    int n = act_x.rows();
    if (act_y.rows() != n || act_x.cols() != n || act_y.cols() != n)
        throw ParameterInvalid("actions must be square of equal size");
    if (!(act_x * act_y == act_y * act_x)) throw NonCommuting("actions do not commute");
    ModpMat xm1 = act_x - ModpMat::identity(int(p), n);
    ModpMat ym1 = act_y - ModpMat::identity(int(p), n);
    // d1 : A^2 -> A, (a,b) -> (x-1)a + (y-1)b
    ModpMat d1(int(p), n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d1(i, j) = xm1(i, j);
            d1(i, n + j) = ym1(i, j);
        }
    // d2 : A -> A^2, a -> ((y-1)a, (1-x)a)
    ModpMat d2(int(p), 2 * n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d2(i, j) = ym1(i, j);
            d2(n + i, j) = uint32_t((p - xm1(i, j)) % p);
        }
    int r1 = rank(d1), r2 = rank(d2);
    EulerDims e;
    e.b0 = n - r1;
    e.b2 = n - r2;
    e.b1 = 2 * n - r1 - r2;
    return e;
}

// ---- Fox-Lyndon ---------------------------------------------------------------

PcTower partial3_tower(long long k, long long f, long long l) {
    PcTower t(k, "z");
    {
        std::vector<Monomial> imgs(1, Monomial(1));
        imgs[0].e[0] = l % k;           // y z y^-1 = z^l
        t.add_level("y", imgs);
    }
    long long m = mod_inverse(l, k);
    {
        std::vector<Monomial> imgs(2, Monomial(2));
        imgs[0].e[0] = (k - 1) % k;     // x z x^-1 = z^-1
        imgs[1].e[1] = 1;               // x y x^-1 = y z^{f m}
        imgs[1].e[0] = (f % k) * m % k;
        t.add_level("x", imgs);
    }
    return t;
}

FoxLyndonRecord fox_lyndon_check(long long k, long long f, long long l) {
    if (k < 8 || (k & (k - 1)) != 0) throw ParameterInvalid("k must be a power of 2, k >= 8");
    if (f < 1 || k % f != 0) throw ParameterInvalid("f must divide k");
    if (!(1 < l && l < k) || l % 4 != 1)
        throw ParameterInvalid("l must satisfy 1 < l < k and l = 1 mod 4");
    FoxLyndonRecord rec;
    rec.k = k;
    rec.f = f;
    rec.l = l;
    rec.m = mod_inverse(l, k);
    rec.w = (rec.m * l - 1) / k;

    PcTower t = partial3_tower(k, f, l);
    auto mono = [&](long long h, long long i, long long j) {
        Monomial m(3);
        m.e[2] = h;
        m.e[1] = i;
        m.e[0] = ((j % k) + k) % k;
        return GroupRingElem(m, 1);
    };
    GroupRingElem one = GroupRingElem::one(t);
    GroupRingElem X = mono(1, 0, 0), Y = mono(0, 1, 0), Z = mono(0, 0, 1);
    auto mul2 = [&](const GroupRingElem& a, const GroupRingElem& b) { return ring_mul(t, a, b); };
    auto sigma = [&](long long count, long long step) {
        GroupRingElem r;
        for (long long i = 0; i < count; ++i) r.add(t.generator(0, (i * step) % k), 1);
        return r;
    };
    GroupRingElem nu = norm_element(t);

    // differentials of the Fox-Lyndon partial resolution
    // rows r,s,t,u; columns e_x, e_y, e_z
    RingMat d2(4, 3);
    d2.at(0, 0) = mul2(mul2(GroupRingElem(t.generator(0, f % k), 1), Y), one) - one;  // z^f y - 1
    d2.at(0, 1) = GroupRingElem(t.generator(0, f % k), 1) - X;                        // z^f - x
    d2.at(0, 2) = sigma(f, 1);
    d2.at(1, 2) = nu;
    d2.at(2, 0) = Z - one;
    d2.at(2, 2) = one + mul2(Z, X);
    d2.at(3, 1) = GroupRingElem(t.generator(0, l % k), 1) - one;                      // z^l - 1
    d2.at(3, 2) = sigma(l, 1) - Y;
    RingMat d1(3, 1);
    d1.at(0, 0) = X - one;
    d1.at(1, 0) = Y - one;
    d1.at(2, 0) = Z - one;

    rec.d1d2_zero = ring_mat_is_zero(ring_mat_mul(t, d2, d1));

    // norm identities
    {
        bool ok = mul2(Z, nu) == nu && mul2(nu, nu) == ring_scale(nu, k);
        ok = ok && mul2(X, nu) == mul2(nu, X) && mul2(Y, nu) == mul2(nu, Y);
        rec.norm_identities = ok;
        rec.yx_nu_identity = mul2(mul2(Y, X), nu) == mul2(mul2(X, Y), nu);
    }

    // the solved syzygy family
    auto family_check = [&](int variant) {
        GroupRingElem sig_m = sigma(rec.m, 1);
        GroupRingElem sig_ml = sigma(rec.m, l);
        GroupRingElem sig_f = sigma(f, 1);
        GroupRingElem sig_l = sigma(l, 1);
        GroupRingElem zf = GroupRingElem(t.generator(0, f % k), 1);
        GroupRingElem zl = GroupRingElem(t.generator(0, l % k), 1);
        GroupRingElem zfm = GroupRingElem(t.generator(0, (f % k) * rec.m % k), 1);
        std::vector<GroupRingElem> monos;
        for (long long h = -2; h <= 2; ++h)
            for (long long i = -2; i <= 2; ++i) {
                if (std::abs(h) + std::abs(i) > 2) continue;
                monos.push_back(mono(h, i, 0));
            }
        bool eq_ok = true, eps_ok = true;
        for (int slot = 0; slot < 4 && eq_ok; ++slot)
            for (auto& mn : monos) {
                GroupRingElem a, b, c, d;
                if (slot == 0) {
                    const GroupRingElem& A = mn;
                    a = mul2(A, Z - one);
                    c = mul2(A, mul2(mul2(Y, zfm), sig_m) - one).negate();
                    d = mul2(A, mul2(mul2(Z, X) + zf, sig_ml)).negate();
                    GroupRingElem xpm =
                        variant > 0 ? (X + one) : (X - one);
                    b = ring_scale(mul2(A, xpm), rec.w);
                } else if (slot == 1) {
                    b = mul2(mn, Z - one);
                } else if (slot == 2) {
                    const GroupRingElem& C = mn;
                    c = mul2(C, nu);
                    b = mul2(C, X + one).negate();
                } else {
                    const GroupRingElem& D = mn;
                    d = mul2(D, nu);
                    b = mul2(D, GroupRingElem(t.identity(), l) - Y).negate();
                }
                GroupRingElem e1 = mul2(a, d2.at(0, 0)) + mul2(c, d2.at(2, 0));
                GroupRingElem e2 = mul2(a, d2.at(0, 1)) + mul2(d, d2.at(3, 1));
                GroupRingElem e3 = mul2(a, sig_f) + mul2(b, nu) + mul2(c, d2.at(2, 2)) +
                                   mul2(d, sig_l - Y);
                if (!(e1.is_zero() && e2.is_zero() && e3.is_zero())) {
                    eq_ok = false;
                    break;
                }
                for (auto* x : {&a, &b, &c, &d})
                    if (x->augmentation_mod(2) != 0) eps_ok = false;
            }
        return std::make_pair(eq_ok, eps_ok);
    };
    auto [okp, epsp] = family_check(+1);
    if (okp) {
        rec.b_variant = +1;
        rec.syzygy_family = true;
        rec.eps2_vanishes = epsp;
    } else {
        auto [okm, epsm] = family_check(-1);
        rec.b_variant = okm ? -1 : 0;
        rec.syzygy_family = okm;
        rec.eps2_vanishes = okm && epsm;
    }

    // kernel of the mod-2 augmented d2
    {
        ModpMat j2(2, 4, 3);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) j2.set(i, j, d2.at(i, j).augmentation_mod(2));
        rec.kernel_dim = 4 - rank(j2);
    }
    rec.beta1 = functor_dims(t.abelianization(), 2).tensor;

    // independent route through the Wang resolution
    BettiOptions bo;
    bo.primes = {2};
    bo.with_rationals = false;
    bo.integral_h2 = false;
    bo.wang_cross_check = false;
    BettiReport br = betti(t, bo);
    rec.beta1_resolution = int(br.per_prime[0][1]);
    rec.beta2_resolution = int(br.per_prime[0][2]);
    return rec;
}

} // namespace nilbal
