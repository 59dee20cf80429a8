#include "nilbal/abelian.hpp"

#include "nilbal/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace nilbal {

FinAbGroup::FinAbGroup(int free_rank, std::vector<Int> invariant_factors)
    : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2) throw ParameterInvalid("invariant factor < 2");
        if (i + 1 < factors_.size() && factors_[i + 1] % factors_[i] != 0)
            throw ParameterInvalid("invariant factors must form a divisibility chain");
    }
}

FinAbGroup FinAbGroup::from_diagonal(const std::vector<Int>& diag, int extra_free) {
    // repair a diagonal into a divisibility chain via pairwise gcd/lcm passes
    std::vector<Int> d;
    int free_rank = extra_free;
    for (auto& x : diag) {
        Int a = abs(x);
        if (a == 0) ++free_rank;
        else if (a > 1) d.push_back(a);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i + 1 < d.size(); ++i)
            for (size_t j = i + 1; j < d.size(); ++j) {
                Int g = gcd(d[i], d[j]);
                if (d[j] % d[i] != 0) {
                    Int l = d[i] / g * d[j];
                    d[i] = g;
                    d[j] = l;
                    changed = true;
                }
            }
    }
    std::sort(d.begin(), d.end());
    std::vector<Int> keep;
    for (auto& x : d)
        if (x > 1) keep.push_back(x);
    return FinAbGroup(free_rank, keep);
}

Int FinAbGroup::order() const {
    Int o = 1;
    for (auto& d : factors_) o *= d;
    return o;
}

Int FinAbGroup::exponent() const {
    return factors_.empty() ? Int(1) : factors_.back();
}

std::vector<long long> FinAbGroup::primes() const {
    std::vector<long long> ps;
    Int e = exponent();
    for (long long p = 2; Int(p) * p <= e; ++p)
        if (e % p == 0) {
            ps.push_back(p);
            while (e % p == 0) e /= p;
        }
    if (e > 1) ps.push_back(e.convert_to<long long>());
    return ps;
}

std::string FinAbGroup::str() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank_ > 0) {
        os << "Z";
        if (free_rank_ > 1) os << "^" << free_rank_;
        first = false;
    }
    for (auto& d : factors_) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

FunctorDims functor_dims(const FinAbGroup& a, long long p) {
    if (!is_prime(p)) throw ParameterInvalid("p must be prime");
    int t = 0;
    for (auto& d : a.invariant_factors())
        if (d % p == 0) ++t;
    FunctorDims f;
    f.tensor = a.free_rank() + t;
    f.tor = t;
    f.hom = a.free_rank() + t;
    f.ext = t;
    return f;
}

AbHom::AbHom(FinAbGroup source, FinAbGroup target, IntMat matrix)
    : source_(std::move(source)), target_(std::move(target)), m_(std::move(matrix)) {
    if (m_.rows() != target_.ngens() || m_.cols() != source_.ngens())
        throw ParameterInvalid("hom matrix has wrong shape");
    reduce();
    // order of the image of generator j must divide the order of generator j
    for (int j = 0; j < source_.ngens(); ++j) {
        Int dj = source_.gen_order(j);
        if (dj == 0) continue;                   // free source generator
        for (int i = 0; i < target_.ngens(); ++i) {
            Int di = target_.gen_order(i);
            if (di == 0) {
                if (m_(i, j) != 0)
                    throw ParameterInvalid("torsion generator mapped into the free part");
            } else if ((dj * m_(i, j)) % di != 0) {
                throw ParameterInvalid("hom does not respect generator orders");
            }
        }
    }
}

void AbHom::reduce() {
    for (int i = 0; i < target_.ngens(); ++i) {
        Int di = target_.gen_order(i);
        if (di == 0) continue;
        for (int j = 0; j < m_.cols(); ++j) {
            Int v = m_(i, j) % di;
            if (v < 0) v += di;
            m_(i, j) = v;
        }
    }
}

AbHom AbHom::identity(const FinAbGroup& a) {
    return AbHom(a, a, IntMat::identity(a.ngens()));
}

AbHom AbHom::mult_by(const FinAbGroup& a, const Int& n) {
    IntMat m(a.ngens(), a.ngens());
    for (int i = 0; i < a.ngens(); ++i) m(i, i) = n;
    return AbHom(a, a, m);
}

AbHom AbHom::compose(const AbHom& inner) const {
    if (!(inner.target_ == source_)) throw ParameterInvalid("compose: type mismatch");
    return AbHom(inner.source_, target_, m_ * inner.m_);
}

AbHom AbHom::operator-(const AbHom& o) const {
    if (!(source_ == o.source_ && target_ == o.target_))
        throw ParameterInvalid("difference: type mismatch");
    return AbHom(source_, target_, m_ - o.m_);
}

AbHom AbHom::pow(int e) const {
    if (!is_endo()) throw ParameterInvalid("pow needs an endomorphism");
    AbHom r = identity(source_);
    for (int i = 0; i < e; ++i) r = compose(r);
    return r;
}

bool AbHom::is_zero() const {
    for (int i = 0; i < m_.rows(); ++i)
        for (int j = 0; j < m_.cols(); ++j)
            if (m_(i, j) != 0) return false;   // entries already reduced
    return true;
}

bool AbHom::is_automorphism() const {
    if (!is_endo()) return false;
    // surjective iff [M | relations] has trivial cokernel; surjective
    // endomorphisms of finitely generated abelian groups are automorphisms
    IntMat stacked = lattice_sum(m_, relation_lattice(target_));
    auto diag = snf_diagonal(stacked);
    int n = target_.ngens();
    int ones = 0;
    for (auto& d : diag)
        if (d == 1) ++ones;
    return ones == n;
}

ModpMat AbHom::mod_p(long long p) const {
    std::vector<int> src, tgt;
    for (int j = 0; j < source_.ngens(); ++j)
        if (source_.gen_order(j) == 0 || source_.gen_order(j) % p == 0) src.push_back(j);
    for (int i = 0; i < target_.ngens(); ++i)
        if (target_.gen_order(i) == 0 || target_.gen_order(i) % p == 0) tgt.push_back(i);
    ModpMat r(int(p), int(tgt.size()), int(src.size()));
    for (size_t i = 0; i < tgt.size(); ++i)
        for (size_t j = 0; j < src.size(); ++j) {
            Int v = m_(tgt[i], src[j]) % p;
            if (v < 0) v += p;
            r(int(i), int(j)) = v.convert_to<uint32_t>();
        }
    return r;
}

std::optional<int> unipotent_index(const AbHom& f) {
    if (!f.is_endo()) throw ParameterInvalid("unipotency needs an endomorphism");
    if (!f.is_automorphism()) throw NotAutomorphism("map is not an automorphism");
    const FinAbGroup& a = f.source();
    AbHom d = f - AbHom::identity(a);
    if (d.is_zero()) return 0;
    // index <= free rank + log2(torsion order) + 1
    int bound = a.free_rank() + 1;
    for (auto& di : a.invariant_factors()) {
        Int x = di;
        while (x > 1) { x /= 2; ++bound; }
    }
    AbHom pw = d;
    for (int e = 1; e <= bound; ++e) {
        if (pw.is_zero()) return e;
        pw = d.compose(pw);
    }
    return std::nullopt;
}

bool is_unipotent(const AbHom& f) { return unipotent_index(f).has_value(); }

FinAbGroup abelianize(const Presentation& p) {
    return abelianize_with_maps(p).group;
}

AbelianizationMaps abelianize_with_maps(const Presentation& p) {
    // cokernel of the transposed exponent matrix: Z^gens / row-span(relators)
    IntMat m = exponent_matrix(p).transpose();     // gens x rels
    SnfResult s = smith_normal_form(m);
    int g = p.ngens();
    int n = std::min(m.rows(), m.cols());
    // coordinate i of the cokernel is (Ux)_i mod D(i,i)
    std::vector<int> tors_rows, free_rows;
    for (int i = 0; i < g; ++i) {
        Int di = (i < n) ? s.D(i, i) : Int(0);
        if (di == 0) free_rows.push_back(i);
        else if (di > 1) tors_rows.push_back(i);
    }
    std::vector<Int> factors;
    for (int i : tors_rows) factors.push_back(s.D(i, i));
    AbelianizationMaps out{FinAbGroup(int(free_rows.size()), factors), IntMat(), IntMat()};
    // rows ordered: free then torsion, matching the standard generating system
    std::vector<int> order;
    order.insert(order.end(), free_rows.begin(), free_rows.end());
    order.insert(order.end(), tors_rows.begin(), tors_rows.end());
    out.to_coords = IntMat(int(order.size()), g);
    for (size_t i = 0; i < order.size(); ++i)
        for (int j = 0; j < g; ++j) out.to_coords(int(i), j) = s.U(order[i], j);
    // section: columns of U^{-1} at the chosen rows; U^{-1} from solving U X = I
    IntMat uinv = IntMat::identity(g);
    {
        SnfResult su = smith_normal_form(s.U);
        IntMat inv(g, g);
        for (int c = 0; c < g; ++c) {
            std::vector<Int> e(g, 0);
            e[c] = 1;
            auto x = solve_z(su, e);
            inv.set_col(c, *x);     // U unimodular: always solvable
        }
        uinv = inv;
    }
    out.from_coords = IntMat(g, int(order.size()));
    for (int i = 0; i < g; ++i)
        for (size_t j = 0; j < order.size(); ++j)
            out.from_coords(i, int(j)) = uinv(i, order[j]);
    return out;
}

IntMat relation_lattice(const FinAbGroup& a) {
    int n = a.ngens();
    IntMat l(n, a.torsion_count());
    for (int i = 0; i < a.torsion_count(); ++i)
        l(a.free_rank() + i, i) = a.invariant_factors()[i];
    return l;
}

IntMat fixed_sublattice(const FinAbGroup& a, const std::vector<AbHom>& fs) {
    int n = a.ngens();
    if (fs.empty()) return IntMat::identity(n);
    // {x : (M_f - I) x in relation lattice for all f}
    IntMat stacked(n * int(fs.size()), n);
    IntMat rels(n * int(fs.size()), a.torsion_count() * int(fs.size()));
    IntMat rel = relation_lattice(a);
    for (size_t k = 0; k < fs.size(); ++k) {
        IntMat d = fs[k].matrix() - IntMat::identity(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) stacked(int(k) * n + i, j) = d(i, j);
            for (int j = 0; j < rel.cols(); ++j)
                rels(int(k) * n + i, int(k) * rel.cols() + j) = rel(i, j);
        }
    }
    IntMat pre = lattice_preimage(stacked, rels);
    return lattice_canonical(pre);
}

FinAbGroup hom_kernel_structure(const AbHom& f) {
    // P = {x : M x in target relations}; Ker f = P / source relations
    const FinAbGroup& src = f.source();
    IntMat p = lattice_preimage(f.matrix(), relation_lattice(f.target()));
    p = lattice_canonical(lattice_sum(p, relation_lattice(src)));
    // express the source relation lattice in the basis of P
    SnfResult sp = smith_normal_form(p);
    IntMat rel = relation_lattice(src);
    IntMat y(p.cols(), rel.cols());
    for (int j = 0; j < rel.cols(); ++j) {
        auto sol = solve_z(sp, rel.col(j));
        if (!sol) throw std::logic_error("relation lattice escaped its preimage");
        y.set_col(j, *sol);
    }
    auto diag = snf_diagonal(y);
    int rank = 0;
    for (auto& d : diag)
        if (d != 0) ++rank;
    return FinAbGroup::from_diagonal(diag, p.cols() - rank);
}

Filtration unipotent_filtration(const FinAbGroup& a_in, const std::vector<AbHom>& gens_in,
                                std::optional<long long> mod_p) {
    FinAbGroup a = a_in;
    std::vector<AbHom> gens = gens_in;
    if (mod_p) {
        long long p = *mod_p;
        // replace A by A/pA with the induced maps
        std::vector<int> keep;
        for (int i = 0; i < a.ngens(); ++i)
            if (a.gen_order(i) == 0 || a.gen_order(i) % p == 0) keep.push_back(i);
        std::vector<Int> fac(keep.size(), Int(p));
        FinAbGroup q(0, fac);
        std::vector<AbHom> qgens;
        for (auto& f : gens) {
            IntMat m(int(keep.size()), int(keep.size()));
            for (size_t i = 0; i < keep.size(); ++i)
                for (size_t j = 0; j < keep.size(); ++j) {
                    Int v = f.matrix()(keep[i], keep[j]) % p;
                    if (v < 0) v += p;
                    m(int(i), int(j)) = v;
                }
            qgens.push_back(AbHom(q, q, m));
        }
        a = q;
        gens = qgens;
    }

    for (auto& f : gens)
        if (!is_unipotent(f)) throw NotUnipotent("generator does not act unipotently");

    int n = a.ngens();
    IntMat fixed = fixed_sublattice(a, gens);
    IntMat rel = relation_lattice(a);
    Filtration out;
    // C_i = n^{i-1} A + A^fixed; termination within the unipotency bound
    IntMat cur = IntMat::identity(n);
    int bound = 2 * n + 2;
    for (auto& d : a.invariant_factors()) {
        Int x = d;
        while (x > 1) { x /= 2; ++bound; }
    }
    for (int step = 0;; ++step) {
        IntMat ci = lattice_canonical(lattice_sum(lattice_sum(cur, fixed), rel));
        if (!out.steps.empty() && lattice_equal(out.steps.back(), ci)) break;
        out.steps.push_back(ci);
        if (lattice_equal(ci, lattice_sum(fixed, rel))) break;
        if (step > bound)
            throw NotUnipotent("augmentation ideal powers do not reach the fixed subgroup");
        // next: images (g-1)*cur for all generators
        IntMat next(n, 0);
        for (auto& f : gens) {
            IntMat d = f.matrix() - IntMat::identity(n);
            next = lattice_sum(next, d * cur);
        }
        cur = lattice_canonical(next);
    }
    out.fixed = out.steps.back();
    return out;
}

// ---- automorphism enumeration ----------------------------------------------

namespace {

struct EntrySpec {
    long long step;      // allowed values: multiples of step
    long long modulus;   // entries live mod modulus
    long long count() const { return modulus / step; }
};

std::vector<EntrySpec> entry_specs(const FinAbGroup& t) {
    int s = t.torsion_count();
    std::vector<EntrySpec> specs(size_t(s) * s);
    auto d = t.invariant_factors();
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            long long di = d[i].convert_to<long long>();
            long long dj = d[j].convert_to<long long>();
            long long g = std::gcd(di, dj);
            specs[size_t(i) * s + j] = {di / g, di};
        }
    return specs;
}

// is M (s x s, entries mod d_i per row) an automorphism of the p-primary
// group? For a finite abelian group it suffices that the map is surjective,
// which we test prime by prime on T/pT.
bool small_is_automorphism(const FinAbGroup& t, const std::vector<long long>& m,
                           const std::vector<long long>& primes) {
    int s = t.torsion_count();
    for (long long p : primes) {
        // rows/cols with p | d_i (all of them when t is a p-group)
        std::vector<int> idx;
        for (int i = 0; i < s; ++i)
            if (t.invariant_factors()[i] % p == 0) idx.push_back(i);
        int k = int(idx.size());
        if (k == 0) continue;
        ModpMat mp(int(p), k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                mp.set(i, j, m[size_t(idx[i]) * s + idx[j]]);
        if (rank(mp) < k) return false;
    }
    return true;
}

bool small_is_unipotent(const FinAbGroup& t, const std::vector<long long>& m) {
    int s = t.torsion_count();
    std::vector<long long> d(s);
    for (int i = 0; i < s; ++i) d[i] = t.invariant_factors()[i].convert_to<long long>();
    std::vector<long long> x(m);     // x = M - I, reduced per row
    for (int i = 0; i < s; ++i)
        x[size_t(i) * s + i] = (x[size_t(i) * s + i] - 1 + d[i]) % d[i];
    auto is_zero = [&](const std::vector<long long>& v) {
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                if (v[size_t(i) * s + j] % d[i] != 0) return false;
        return true;
    };
    int bound = 1;
    for (int i = 0; i < s; ++i) {
        long long v = d[i];
        while (v > 1) { v /= 2; ++bound; }
    }
    std::vector<long long> pw = x;
    for (int e = 0; e < bound; ++e) {
        if (is_zero(pw)) return true;
        std::vector<long long> nx(size_t(s) * s, 0);
        for (int i = 0; i < s; ++i)
            for (int k = 0; k < s; ++k) {
                long long a = x[size_t(i) * s + k];
                if (!a) continue;
                for (int j = 0; j < s; ++j)
                    nx[size_t(i) * s + j] =
                        (nx[size_t(i) * s + j] + a * pw[size_t(k) * s + j]) % d[i];
            }
        pw = nx;
    }
    return is_zero(pw);
}

} // namespace

long long aut_candidate_count(const FinAbGroup& t) {
    auto specs = entry_specs(t);
    long long total = 1;
    for (auto& sp : specs) {
        total *= sp.count();
        if (total > (1LL << 62) / 4) return total;   // saturate
    }
    return total;
}

AutEnumeration enumerate_automorphisms(const FinAbGroup& t, bool unipotent_only,
                                       long long max_candidates) {
    AutEnumeration out;
    if (!t.is_finite()) throw ParameterInvalid("enumeration needs a finite group");
    int s = t.torsion_count();
    out.candidate_count = aut_candidate_count(t);
    if (out.candidate_count > max_candidates) {
        out.complete = false;
        return out;
    }
    out.complete = true;
    if (s == 0) {
        out.mats.push_back({});
        return out;
    }
    auto specs = entry_specs(t);
    std::vector<long long> primes = t.primes();
    std::vector<long long> digit(size_t(s) * s, 0);
    std::vector<long long> m(size_t(s) * s, 0);
    for (;;) {
        for (size_t i = 0; i < m.size(); ++i) m[i] = digit[i] * specs[i].step;
        if (small_is_automorphism(t, m, primes) &&
            (!unipotent_only || small_is_unipotent(t, m)))
            out.mats.push_back(m);
        // odometer
        size_t k = 0;
        while (k < digit.size()) {
            if (++digit[k] < specs[k].count()) break;
            digit[k] = 0;
            ++k;
        }
        if (k == digit.size()) break;
    }
    return out;
}

AbHom hom_from_small(const FinAbGroup& t, const std::vector<long long>& mat) {
    int s = t.torsion_count();
    IntMat m(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = mat[size_t(i) * s + j];
    return AbHom(t, t, m);
}

} // namespace nilbal
