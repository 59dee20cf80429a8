#include "nilbal/fingroup.hpp"

#include "nilbal/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>

namespace nilbal {

// ---- Todd-Coxeter -----------------------------------------------------------

namespace {

struct Enumerator {
    int ncols;
    std::vector<std::vector<int>> rels;    // relators as column strings
    std::vector<int32_t> tab;              // rows of ncols entries
    std::vector<int32_t> uf;
    std::deque<int32_t> dead;
    long long max_cosets;
    long long nalive = 0;
    long long lookahead_mark;

    static int inv_col(int x) { return x ^ 1; }

    explicit Enumerator(const Presentation& p, long long maxc) : max_cosets(maxc) {
        ncols = 2 * std::max(1, p.ngens());
        for (auto& r : p.relators()) {
            std::vector<int> cols;
            for (auto& l : r.letters()) {
                int c = l.exp > 0 ? 2 * l.gen : 2 * l.gen + 1;
                long long k = l.exp > 0 ? l.exp : -l.exp;
                for (long long i = 0; i < k; ++i) cols.push_back(c);
            }
            if (!cols.empty()) rels.push_back(std::move(cols));
        }
        lookahead_mark = std::max<long long>(4096, maxc / 8);
        new_coset();
    }

    int rep(int c) {
        int r = c;
        while (uf[r] != r) r = uf[r];
        while (uf[c] != r) {
            int nx = uf[c];
            uf[c] = r;
            c = nx;
        }
        return r;
    }

    int32_t& entry(int c, int x) { return tab[size_t(c) * ncols + x]; }

    int get(int c, int x) {
        int32_t& e = entry(c, x);
        if (e >= 0) {
            int r = rep(e);
            e = r;          // replace-on-read keeps live rows current
            return r;
        }
        return -1;
    }

    int new_coset() {
        long long id = (long long)(tab.size()) / ncols;
        if (id >= max_cosets)
            throw CosetLimitExceeded("coset limit " + std::to_string(max_cosets) +
                                     " exceeded (group may be infinite or too large)");
        tab.insert(tab.end(), ncols, -1);
        uf.push_back(int32_t(id));
        ++nalive;
        return int(id);
    }

    void merge(int a, int b) {
        a = rep(a);
        b = rep(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        uf[b] = a;
        --nalive;
        dead.push_back(b);
    }

    void coincidence(int a, int b) {
        merge(a, b);
        while (!dead.empty()) {
            int e = dead.front();
            dead.pop_front();
            for (int x = 0; x < ncols; ++x) {
                int f = entry(e, x);
                if (f < 0) continue;
                entry(e, x) = -1;
                if (entry(f, inv_col(x)) == e) entry(f, inv_col(x)) = -1;
                int mu = rep(e), nu = rep(f);
                int mx = get(mu, x);
                if (mx >= 0) {
                    merge(nu, mx);
                } else {
                    int nix = get(nu, inv_col(x));
                    if (nix >= 0) {
                        merge(mu, nix);
                    } else {
                        entry(mu, x) = nu;
                        entry(nu, inv_col(x)) = mu;
                    }
                }
            }
        }
    }

    // scan relator w from coset c; fill defines new cosets to close the cycle
    void scan(int c, const std::vector<int>& w, bool fill) {
        int f = rep(c), b = f;
        int i = 0, j = int(w.size()) - 1;
        for (;;) {
            int t;
            while (i <= j && (t = get(f, w[i])) >= 0) {
                f = t;
                ++i;
            }
            if (i > j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j >= i && (t = get(b, inv_col(w[j]))) >= 0) {
                b = t;
                --j;
            }
            if (j < i) {
                coincidence(f, b);
                return;
            }
            if (i == j) {
                entry(f, w[i]) = b;
                entry(b, inv_col(w[i])) = f;
                return;
            }
            if (!fill) return;
            int nc = new_coset();
            entry(f, w[i]) = nc;
            entry(nc, inv_col(w[i])) = f;
        }
    }

    void lookahead() {
        long long total = (long long)(tab.size()) / ncols;
        for (int c = 0; c < total; ++c) {
            if (rep(c) != c) continue;
            for (auto& r : rels) {
                scan(c, r, false);
                if (rep(c) != c) break;
            }
        }
    }

    void run() {
        long long total;
        for (int c = 0; c < (total = (long long)(tab.size()) / ncols); ++c) {
            if (rep(c) != c) continue;
            bool died = false;
            for (auto& r : rels) {
                scan(c, r, true);
                if (rep(c) != c) { died = true; break; }
            }
            if (died) continue;
            for (int x = 0; x < ncols; ++x) {
                if (rep(c) != c) break;
                if (get(c, x) < 0) {
                    int nc = new_coset();
                    entry(c, x) = nc;
                    entry(nc, inv_col(x)) = c;
                }
            }
            if ((long long)(tab.size()) / ncols >= lookahead_mark) {
                lookahead();
                lookahead_mark *= 2;
            }
        }
    }

    // live rows, renumbered by BFS from coset 0 through columns in order
    std::vector<int32_t> closed_table(bool standardize) {
        long long total = (long long)(tab.size()) / ncols;
        std::vector<int32_t> index(total, -1);
        std::vector<int32_t> order;
        if (standardize) {
            order.push_back(0);
            index[0] = 0;
            for (size_t h = 0; h < order.size(); ++h) {
                int c = order[h];
                for (int x = 0; x < ncols; ++x) {
                    int d = get(c, x);
                    if (d >= 0 && index[d] < 0) {
                        index[d] = int32_t(order.size());
                        order.push_back(d);
                    }
                }
            }
        } else {
            for (int c = 0; c < total; ++c)
                if (rep(c) == c) {
                    index[c] = int32_t(order.size());
                    order.push_back(c);
                }
        }
        std::vector<int32_t> out(order.size() * ncols, -1);
        for (size_t i = 0; i < order.size(); ++i)
            for (int x = 0; x < ncols; ++x) {
                int d = get(order[i], x);
                out[i * ncols + x] = d >= 0 ? index[d] : -1;
            }
        return out;
    }
};

} // namespace

FiniteGroup coset_enumerate(const Presentation& p, long long max_cosets) {
    Enumerator e(p, max_cosets);
    e.run();
    return FiniteGroup(std::max(1, p.ngens()), e.closed_table(true));
}

long long coset_enumerate_order(const Presentation& p, long long max_cosets) {
    Enumerator e(p, max_cosets);
    e.run();
    return e.nalive;
}

// ---- FiniteGroup -------------------------------------------------------------

FiniteGroup::FiniteGroup(int ngens, std::vector<int32_t> coset_table)
    : ngens_(ngens), table_(std::move(coset_table)) {
    if (ngens_ <= 0 || table_.size() % (2 * ngens_) != 0)
        throw ParameterInvalid("bad coset table shape");
    n_ = int(table_.size() / (2 * ngens_));
    gen_elem_.resize(ngens_);
    for (int g = 0; g < ngens_; ++g) gen_elem_[g] = act(0, 2 * g);
    finish_init();
}

FiniteGroup::FiniteGroup(std::vector<int32_t> mult_table, std::vector<int> generator_elements) {
    n_ = int(std::lround(std::sqrt(double(mult_table.size()))));
    if (size_t(n_) * n_ != mult_table.size())
        throw ParameterInvalid("multiplication table is not square");
    mult_ = std::move(mult_table);
    for (int x = 0; x < n_; ++x)
        if (mult_[x] != x || mult_[size_t(x) * n_] != x)
            throw ParameterInvalid("identity must sit at index 0");
    gen_elem_ = generator_elements;
    ngens_ = int(gen_elem_.size());
    if (ngens_ == 0) throw ParameterInvalid("need at least one generator");
    // inverse of each generator by row scan
    std::vector<int> gen_inv(ngens_);
    for (int g = 0; g < ngens_; ++g) {
        int e = gen_elem_[g];
        int vi = -1;
        for (int y = 0; y < n_; ++y)
            if (mult_[size_t(e) * n_ + y] == 0) { vi = y; break; }
        if (vi < 0) throw ParameterInvalid("generator has no inverse; not a group table");
        gen_inv[g] = vi;
    }
    table_.assign(size_t(n_) * 2 * ngens_, -1);
    for (int x = 0; x < n_; ++x)
        for (int g = 0; g < ngens_; ++g) {
            table_[size_t(x) * 2 * ngens_ + 2 * g] = mult_[size_t(x) * n_ + gen_elem_[g]];
            table_[size_t(x) * 2 * ngens_ + 2 * g + 1] = mult_[size_t(x) * n_ + gen_inv[g]];
        }
    finish_init();
}

void FiniteGroup::finish_init() {
    // rows and columns must be permutations
    for (int x = 0; x < 2 * ngens_; ++x) {
        std::vector<char> seen(n_, 0);
        for (int c = 0; c < n_; ++c) {
            int d = act(c, x);
            if (d < 0 || d >= n_ || seen[d])
                throw ParameterInvalid("coset table column is not a permutation");
            seen[d] = 1;
        }
    }
    // Schreier tree
    parent_.assign(n_, -1);
    parent_letter_.assign(n_, -1);
    std::vector<int> order;
    order.push_back(0);
    parent_[0] = 0;
    for (size_t h = 0; h < order.size(); ++h) {
        int c = order[h];
        for (int x = 0; x < 2 * ngens_; ++x) {
            int d = act(c, x);
            if (parent_[d] < 0) {
                parent_[d] = c;
                parent_letter_[d] = x;
                order.push_back(d);
            }
        }
    }
    if (int(order.size()) != n_)
        throw ParameterInvalid("generators do not generate the group");
    // inverses
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
        auto w = word_of(a);
        int x = 0;
        for (auto it = w.rbegin(); it != w.rend(); ++it) x = act(x, *it ^ 1);
        inv_[a] = x;
    }
}

std::vector<int> FiniteGroup::word_of(int x) const {
    std::vector<int> w;
    while (x != 0) {
        w.push_back(parent_letter_[x]);
        x = parent_[x];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

void FiniteGroup::build_mult_table(size_t limit_bytes) {
    if (!mult_.empty()) return;
    if (size_t(n_) * n_ * sizeof(int32_t) > limit_bytes)
        throw SizeLimit("multiplication table too large for order " + std::to_string(n_));
    mult_.assign(size_t(n_) * n_, -1);
    // BFS order guarantees parents are filled before children
    std::vector<int> order;
    order.push_back(0);
    std::vector<char> seen(n_, 0);
    seen[0] = 1;
    for (size_t h = 0; h < order.size(); ++h) {
        int c = order[h];
        for (int x = 0; x < 2 * ngens_; ++x) {
            int d = act(c, x);
            if (!seen[d]) { seen[d] = 1; order.push_back(d); }
        }
    }
    for (int a = 0; a < n_; ++a) mult_[size_t(a) * n_] = a;
    for (int b : order) {
        if (b == 0) continue;
        int pb = parent_[b], lb = parent_letter_[b];
        for (int a = 0; a < n_; ++a)
            mult_[size_t(a) * n_ + b] = act(mult_[size_t(a) * n_ + pb], lb);
    }
}

int FiniteGroup::mult(int a, int b) const {
    if (!mult_.empty()) return mult_[size_t(a) * n_ + b];
    int x = a;
    int c = b;
    // walk b's Schreier word without materializing it
    std::vector<int> w;
    while (c != 0) {
        w.push_back(parent_letter_[c]);
        c = parent_[c];
    }
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = act(x, *it);
    return x;
}

int FiniteGroup::inverse(int a) const { return inv_[a]; }

int FiniteGroup::element_order(int a) const {
    int x = a, k = 1;
    while (x != 0) {
        x = mult(x, a);
        ++k;
    }
    return k;
}

int FiniteGroup::conjugate(int g, int x) const { return mult(mult(g, x), inv_[g]); }

int FiniteGroup::commutator(int a, int b) const {
    return mult(mult(a, b), mult(inv_[a], inv_[b]));
}

std::vector<int> FiniteGroup::subgroup_closure(const std::vector<int>& gens) const {
    std::vector<char> in(n_, 0);
    std::vector<int> elems;
    elems.push_back(0);
    in[0] = 1;
    for (size_t h = 0; h < elems.size(); ++h)
        for (int s : gens) {
            int y = mult(elems[h], s);
            if (!in[y]) { in[y] = 1; elems.push_back(y); }
        }
    std::sort(elems.begin(), elems.end());
    return elems;
}

std::vector<int> FiniteGroup::normal_closure(const std::vector<int>& t) const {
    std::vector<int> gens = t;
    for (;;) {
        auto h = subgroup_closure(gens);
        std::vector<char> in(n_, 0);
        for (int x : h) in[x] = 1;
        bool grew = false;
        for (int x : h) {
            if (x == 0) continue;
            for (int ge : gen_elem_) {
                int c = conjugate(ge, x);
                if (!in[c]) { gens.push_back(c); in[c] = 1; grew = true; }
            }
        }
        if (!grew) return h;
    }
}

bool FiniteGroup::verify(const Presentation& p) const {
    if (p.ngens() != ngens_) return false;
    for (auto& r : p.relators()) {
        std::vector<int> cols;
        for (auto& l : r.letters()) {
            int c = l.exp > 0 ? 2 * l.gen : 2 * l.gen + 1;
            long long k = l.exp > 0 ? l.exp : -l.exp;
            for (long long i = 0; i < k; ++i) cols.push_back(c);
        }
        for (int x = 0; x < n_; ++x) {
            int y = x;
            for (int c : cols) y = act(y, c);
            if (y != x) return false;
        }
    }
    return true;
}

// ---- lower central series ----------------------------------------------------

LowerCentralSeries lower_central_series(const FiniteGroup& g) {
    LowerCentralSeries out;
    std::vector<int> whole(g.order());
    std::iota(whole.begin(), whole.end(), 0);
    out.terms.push_back(whole);

    // gamma_2 from commutators of the generators
    std::vector<int> comms;
    for (int i = 0; i < g.ngens(); ++i)
        for (int j = 0; j < g.ngens(); ++j) {
            if (i == j) continue;
            int c = g.commutator(g.generator_element(i), g.generator_element(j));
            if (c != 0) comms.push_back(c);
        }
    std::vector<int> cur = g.normal_closure(comms);
    for (;;) {
        out.terms.push_back(cur);
        if (cur.size() == 1) break;                       // reached the trivial group
        std::vector<int> next_gens;
        for (int s = 0; s < g.ngens(); ++s)
            for (int x : cur) {
                if (x == 0) continue;
                int c = g.commutator(g.generator_element(s), x);
                if (c != 0) next_gens.push_back(c);
            }
        std::vector<int> next = g.normal_closure(next_gens);
        if (next.size() == cur.size()) {                  // stabilized above 1
            out.nilpotent = false;
            out.nilpotency_class = -1;
            return out;
        }
        cur = std::move(next);
    }
    out.nilpotent = true;
    out.nilpotency_class = int(out.terms.size()) - 1;
    return out;
}

bool is_nilpotent(const FiniteGroup& g) { return lower_central_series(g).nilpotent; }

// ---- automorphisms -----------------------------------------------------------

GrpAutomorphism::GrpAutomorphism(const FiniteGroup& g, std::vector<int32_t> image)
    : image_(std::move(image)) {
    int n = g.order();
    if (int(image_.size()) != n) throw NotAutomorphism("image has wrong size");
    std::vector<char> seen(n, 0);
    for (int x : image_) {
        if (x < 0 || x >= n || seen[x]) throw NotAutomorphism("image is not a bijection");
        seen[x] = 1;
    }
    if (image_[0] != 0) throw NotAutomorphism("identity must be fixed");
    // multiplicative on (element, generator) pairs, hence everywhere
    for (int a = 0; a < n; ++a)
        for (int gi = 0; gi < g.ngens(); ++gi) {
            int ge = g.generator_element(gi);
            if (image_[g.mult(a, ge)] != g.mult(image_[a], image_[ge]))
                throw NotAutomorphism("image is not multiplicative");
        }
}

GrpAutomorphism GrpAutomorphism::from_gen_images(const FiniteGroup& g,
                                                 const std::vector<int>& images) {
    if (int(images.size()) != g.ngens()) throw NotAutomorphism("need one image per generator");
    int n = g.order();
    std::vector<int32_t> im(n, -1);
    im[0] = 0;
    // propagate along the Schreier tree; column 2g is gen g, 2g+1 its inverse
    std::vector<int> gen_inv(g.ngens());
    for (int gi = 0; gi < g.ngens(); ++gi) gen_inv[gi] = g.inverse(images[gi]);
    std::vector<int> order;
    order.push_back(0);
    for (size_t h = 0; h < order.size(); ++h) {
        int c = order[h];
        for (int x = 0; x < 2 * g.ngens(); ++x) {
            int d = g.act(c, x);
            if (im[d] >= 0) continue;
            int gi = x / 2;
            int target = (x % 2 == 0) ? images[gi] : gen_inv[gi];
            im[d] = g.mult(im[c], target);
            order.push_back(d);
        }
    }
    return GrpAutomorphism(g, im);
}

// ---- bar complex --------------------------------------------------------------

namespace {

// policy-free building blocks shared by the F2 and odd-p paths

struct SparseCol {
    // entries (position, sign) with sign in {+1,-1}
    std::array<std::pair<int, int>, 4> e;
    int k = 0;
    void add(int pos, int sgn) { e[size_t(k++)] = {pos, sgn}; }
};

} // namespace

struct BarHomology::Impl {
    long long p = 2;
    int n = 0;              // non-identity elements
    bool want_reps = true;

    // F2 state
    std::unique_ptr<F2Echelon> f2_im_d2, f2_bnd3;
    std::vector<std::pair<int, F2Vec>> f2_reps;      // H2 representatives
    // odd-p state
    std::unique_ptr<ZpEchelon> zp_im_d2, zp_bnd3;
    std::vector<std::pair<int, ZpVec>> zp_reps;

    std::vector<int> h1_pos_of_cell;      // cell -> H1 basis index or -1
    std::vector<int> h1_basis_cells;

    int cell2(int i, int j) const { return (i - 1) * n + (j - 1); }

    SparseCol d2_col(const FiniteGroup& g, int a, int b) const {
        SparseCol c;
        c.add(b - 1, +1);
        int ab = g.mult(a, b);
        if (ab != 0) c.add(ab - 1, -1);
        c.add(a - 1, +1);
        return c;
    }
    SparseCol d3_col(const FiniteGroup& g, int a, int b, int cc) const {
        SparseCol c;
        c.add(cell2(b, cc), +1);
        int ab = g.mult(a, b);
        if (ab != 0) c.add(cell2(ab, cc), -1);
        int bc = g.mult(b, cc);
        if (bc != 0) c.add(cell2(a, bc), +1);
        c.add(cell2(a, b), -1);
        return c;
    }
};

BarHomology::BarHomology(const FiniteGroup& g_in, long long p, const BarOptions& opt) {
    if (!is_prime(p)) throw ParameterInvalid("bar oracle needs a prime");
    if (g_in.order() > opt.size_limit)
        throw SizeLimit("bar complex limited to order " + std::to_string(opt.size_limit) +
                        ", got " + std::to_string(g_in.order()));
    FiniteGroup g = g_in;
    g.build_mult_table();

    impl_ = std::make_shared<Impl>();
    impl_->p = p;
    impl_->n = g.order() - 1;
    impl_->want_reps = opt.want_reps;
    int n = impl_->n;
    dims_[0] = 1;
    if (n == 0) { dims_[1] = dims_[2] = 0; return; }
    size_t dim2 = size_t(n) * n;

    if (p == 2) {
        impl_->f2_im_d2 = std::make_unique<F2Echelon>(n);
        impl_->f2_bnd3 = std::make_unique<F2Echelon>(int(dim2));
        auto& im_d2 = *impl_->f2_im_d2;
        auto& bnd3 = *impl_->f2_bnd3;
        // kernel of d2 with combination tracking
        std::vector<std::pair<F2Vec, F2Vec>> pivots;   // (reduced d2 col, combination)
        std::vector<int> pivot_of(n, -1);
        std::vector<F2Vec> kernel;
        for (int a = 1; a <= n + 0; ++a)
            for (int b = 1; b <= n; ++b) {
                auto col = impl_->d2_col(g, a, b);
                F2Vec v(n), comb{int(dim2)};
                for (int t = 0; t < col.k; ++t) v.set(col.e[t].first);
                comb.set(impl_->cell2(a, b));
                for (;;) {
                    int lb = v.lowest_bit();
                    if (lb < 0) break;
                    int pr = pivot_of[lb];
                    if (pr < 0) break;
                    v ^= pivots[pr].first;
                    comb ^= pivots[pr].second;
                }
                int lb = v.lowest_bit();
                if (lb < 0) {
                    kernel.push_back(std::move(comb));
                } else {
                    pivot_of[lb] = int(pivots.size());
                    pivots.push_back({std::move(v), std::move(comb)});
                    im_d2.insert(pivots.back().first);   // copy into the H1 reducer
                }
            }
        int r2 = int(pivots.size());
        dims_[1] = n - r2;
        // H1 basis: non-pivot 1-cells
        impl_->h1_pos_of_cell.assign(n, -1);
        {
            // pivots of im_d2
            std::vector<char> isp(n, 0);
            for (int r = 0; r < im_d2.rank(); ++r) {
                int b = im_d2.rows()[r].lowest_bit();
                isp[b] = 1;
            }
            for (int c = 0; c < n; ++c)
                if (!isp[c]) {
                    impl_->h1_pos_of_cell[c] = int(impl_->h1_basis_cells.size());
                    impl_->h1_basis_cells.push_back(c);
                }
        }
        // boundaries from d3
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int c = 1; c <= n; ++c) {
                    auto col = impl_->d3_col(g, a, b, c);
                    F2Vec v{int(dim2)};
                    for (int t = 0; t < col.k; ++t) v.w[size_t(col.e[t].first) >> 6] ^= uint64_t(1) << (col.e[t].first & 63);
                    bnd3.insert(std::move(v));
                }
        dims_[2] = int(kernel.size()) - bnd3.rank();
        // H2 representatives
        if (opt.want_reps) {
            for (auto& z : kernel) {
                F2Vec v = z;
                if (bnd3.reduce(v) < 0) continue;
                // reduce against existing reps
                for (;;) {
                    int lb = v.lowest_bit();
                    if (lb < 0) break;
                    bool hit = false;
                    for (auto& [pv, rv] : impl_->f2_reps)
                        if (pv == lb) { v ^= rv; hit = true; break; }
                    if (!hit) break;
                }
                int lb = v.lowest_bit();
                if (lb >= 0) impl_->f2_reps.push_back({lb, std::move(v)});
            }
        }
    } else {
        int ip = int(p);
        impl_->zp_im_d2 = std::make_unique<ZpEchelon>(ip, n);
        impl_->zp_bnd3 = std::make_unique<ZpEchelon>(ip, int(dim2));
        auto& im_d2 = *impl_->zp_im_d2;
        auto& bnd3 = *impl_->zp_bnd3;
        std::vector<std::pair<ZpVec, ZpVec>> pivots;
        std::vector<int> pivot_of(n, -1);
        std::vector<ZpVec> kernel;
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                auto col = impl_->d2_col(g, a, b);
                ZpVec v(ip, n), comb(ip, int(dim2));
                for (int t = 0; t < col.k; ++t) {
                    int pos = col.e[t].first;
                    v.v[pos] = uint16_t((v.v[pos] + (col.e[t].second > 0 ? 1 : ip - 1)) % ip);
                }
                comb.v[impl_->cell2(a, b)] = 1;
                for (;;) {
                    int lb = v.lowest_nz();
                    if (lb < 0) break;
                    int pr = pivot_of[lb];
                    if (pr < 0) break;
                    uint32_t c0 = uint32_t((p - v.v[lb]) % p);
                    v.axpy(c0, pivots[pr].first);
                    comb.axpy(c0, pivots[pr].second);
                }
                int lb = v.lowest_nz();
                if (lb < 0) {
                    kernel.push_back(std::move(comb));
                } else {
                    // normalize pivot to 1 in both
                    uint32_t inv = uint32_t(mod_inverse(v.v[lb], p));
                    for (auto& x : v.v) x = uint16_t(uint32_t(x) * inv % p);
                    for (auto& x : comb.v) x = uint16_t(uint32_t(x) * inv % p);
                    pivot_of[lb] = int(pivots.size());
                    pivots.push_back({v, comb});
                    im_d2.insert(std::move(v));
                }
            }
        int r2 = int(pivots.size());
        dims_[1] = n - r2;
        impl_->h1_pos_of_cell.assign(n, -1);
        {
            std::vector<char> isp(n, 0);
            for (auto& row : im_d2.rows()) isp[row.lowest_nz()] = 1;
            for (int c = 0; c < n; ++c)
                if (!isp[c]) {
                    impl_->h1_pos_of_cell[c] = int(impl_->h1_basis_cells.size());
                    impl_->h1_basis_cells.push_back(c);
                }
        }
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int c = 1; c <= n; ++c) {
                    auto col = impl_->d3_col(g, a, b, c);
                    ZpVec v{ip, int(dim2)};
                    for (int t = 0; t < col.k; ++t) {
                        int pos = col.e[t].first;
                        v.v[pos] = uint16_t((v.v[pos] + (col.e[t].second > 0 ? 1 : ip - 1)) % ip);
                    }
                    bnd3.insert(std::move(v));
                }
        dims_[2] = int(kernel.size()) - bnd3.rank();
        if (opt.want_reps) {
            for (auto& z : kernel) {
                ZpVec v = z;
                if (bnd3.reduce(v) < 0) continue;
                for (;;) {
                    int lb = v.lowest_nz();
                    if (lb < 0) break;
                    bool hit = false;
                    for (auto& [pv, rv] : impl_->zp_reps)
                        if (pv == lb) {
                            uint32_t c0 = uint32_t((p - v.v[lb]) % p);
                            v.axpy(c0, rv);
                            hit = true;
                            break;
                        }
                    if (!hit) break;
                }
                int lb = v.lowest_nz();
                if (lb >= 0) {
                    uint32_t inv = uint32_t(mod_inverse(v.v[lb], p));
                    for (auto& x : v.v) x = uint16_t(uint32_t(x) * inv % p);
                    impl_->zp_reps.push_back({lb, std::move(v)});
                }
            }
        }
    }
}

ModpMat BarHomology::induced(const GrpAutomorphism& a, int degree) const {
    const auto& im = a.image();
    int n = impl_->n;
    long long p = impl_->p;
    if (degree == 0) return ModpMat::identity(int(p), 1);
    if (degree == 1) {
        int h = dims_[1];
        ModpMat m(int(p), h, h);
        for (int j = 0; j < h; ++j) {
            int cell = impl_->h1_basis_cells[j];
            int img = im[cell + 1] - 1;
            if (p == 2) {
                F2Vec v(n);
                v.set(img);
                impl_->f2_im_d2->reduce(v);
                for (int c = 0; c < n; ++c)
                    if (v.get(c)) m(impl_->h1_pos_of_cell[c], j) = 1;
            } else {
                ZpVec v(int(p), n);
                v.v[img] = 1;
                impl_->zp_im_d2->reduce(v);
                for (int c = 0; c < n; ++c)
                    if (v.v[c]) m(impl_->h1_pos_of_cell[c], j) = v.v[c];
            }
        }
        return m;
    }
    // degree 2
    int h = dims_[2];
    ModpMat m(int(p), h, h);
    auto map_cell = [&](int cell) {
        int i = cell / n + 1, j = cell % n + 1;
        return impl_->cell2(im[i], im[j]);
    };
    for (int col = 0; col < h; ++col) {
        if (p == 2) {
            const F2Vec& z = impl_->f2_reps[col].second;
            F2Vec v(n * n);
            for (int c = 0; c < n * n; ++c)
                if (z.get(c)) v.w[size_t(map_cell(c)) >> 6] ^= uint64_t(1) << (map_cell(c) & 63);
            impl_->f2_bnd3->reduce(v);
            // coordinates against the reps
            for (;;) {
                int lb = v.lowest_bit();
                if (lb < 0) break;
                bool hit = false;
                for (int r = 0; r < h; ++r)
                    if (impl_->f2_reps[r].first == lb) {
                        v ^= impl_->f2_reps[r].second;
                        m(r, col) = 1;
                        hit = true;
                        break;
                    }
                if (!hit) throw std::logic_error("cycle image escaped the H2 basis");
            }
        } else {
            int ip = int(p);
            const ZpVec& z = impl_->zp_reps[col].second;
            ZpVec v(ip, n * n);
            for (int c = 0; c < n * n; ++c)
                if (z.v[c]) {
                    int mc = map_cell(c);
                    v.v[mc] = uint16_t((v.v[mc] + z.v[c]) % ip);
                }
            impl_->zp_bnd3->reduce(v);
            for (;;) {
                int lb = v.lowest_nz();
                if (lb < 0) break;
                bool hit = false;
                for (int r = 0; r < h; ++r)
                    if (impl_->zp_reps[r].first == lb) {
                        uint32_t c0 = v.v[lb];
                        m(r, col) = c0;
                        v.axpy(uint32_t((p - c0) % p), impl_->zp_reps[r].second);
                        hit = true;
                        break;
                    }
                if (!hit) throw std::logic_error("cycle image escaped the H2 basis");
            }
        }
    }
    return m;
}

std::array<int, 3> bar_homology_dims(const FiniteGroup& g, long long p, int size_limit) {
    BarOptions opt;
    opt.size_limit = size_limit;
    opt.want_reps = false;
    BarHomology b(g, p, opt);
    return {b.dim(0), b.dim(1), b.dim(2)};
}

FinAbGroup integral_h2_bar(const FiniteGroup& g_in, int size_limit) {
    if (g_in.order() > size_limit)
        throw SizeLimit("integral bar limited to order " + std::to_string(size_limit));
    FiniteGroup g = g_in;
    g.build_mult_table();
    int n = g.order() - 1;
    if (n == 0) return FinAbGroup();
    // rank of d2 over Z
    SparseIntMat d2;
    d2.rows = n;
    d2.cols = n * n;
    d2.col_entries.resize(size_t(n) * n);
    auto cell2 = [&](int i, int j) { return (i - 1) * n + (j - 1); };
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            int c = cell2(a, b);
            d2.add(b - 1, c, 1);
            int ab = g.mult(a, b);
            if (ab != 0) d2.add(ab - 1, c, -1);
            d2.add(a - 1, c, 1);
        }
    auto s2 = sparse_snf(d2);
    long long null2 = (long long)(n) * n - s2.rank;

    SparseIntMat d3;
    d3.rows = n * n;
    d3.cols = n * n * n;
    d3.col_entries.resize(size_t(n) * n * n);
    long long idx = 0;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = 1; c <= n; ++c, ++idx) {
                d3.add(cell2(b, c), int(idx), 1);
                int ab = g.mult(a, b);
                if (ab != 0) d3.add(cell2(ab, c), int(idx), -1);
                int bc = g.mult(b, c);
                if (bc != 0) d3.add(cell2(a, bc), int(idx), 1);
                d3.add(cell2(a, b), int(idx), -1);
            }
    auto s3 = sparse_snf(d3);
    // torsion of C2/im(d3) equals torsion of ker(d2)/im(d3) since C2/ker is free
    int free_rank = int(null2 - s3.rank);
    std::vector<Int> diag = s3.nontrivial_factors;
    return FinAbGroup::from_diagonal(diag, free_rank);
}

int fixed_h2_dim(const FiniteGroup& k, const std::vector<GrpAutomorphism>& autos, long long p,
                 const BarOptions& opt) {
    BarHomology bh(k, p, opt);
    int h = bh.dim(2);
    if (h == 0) return 0;
    if (autos.empty()) return h;
    std::vector<ModpMat> duals;
    for (auto& a : autos) duals.push_back(bh.induced(a, 2).transpose());
    return fixed_space_dim(duals);
}

ModpMat induced_on_h1(const FiniteGroup& g, const GrpAutomorphism& a, long long p) {
    BarOptions opt;
    opt.size_limit = g.order();
    BarHomology bh(g, p, opt);
    return bh.induced(a, 1);
}

} // namespace nilbal

namespace nilbal {

FiniteGroup finite_abelian_group(const FinAbGroup& a) {
    if (!a.is_finite()) throw ParameterInvalid("finite group required");
    int s = a.torsion_count();
    std::vector<long long> d(s);
    long long n = 1;
    for (int i = 0; i < s; ++i) {
        d[i] = a.invariant_factors()[i].convert_to<long long>();
        n *= d[i];
    }
    std::vector<long long> stride(s, 1);
    for (int i = 1; i < s; ++i) stride[i] = stride[i - 1] * d[i - 1];
    std::vector<int32_t> table(size_t(n) * n);
    for (long long x = 0; x < n; ++x)
        for (long long y = 0; y < n; ++y) {
            long long z = 0;
            for (int i = 0; i < s; ++i) {
                long long xi = (x / stride[i]) % d[i], yi = (y / stride[i]) % d[i];
                z += ((xi + yi) % d[i]) * stride[i];
            }
            table[size_t(x) * n + y] = int32_t(z);
        }
    std::vector<int> gens;
    for (int i = 0; i < s; ++i) gens.push_back(int(stride[i] % n));
    if (gens.empty()) gens.push_back(0);
    return FiniteGroup(std::move(table), gens);
}

GrpAutomorphism abelian_table_automorphism(const FiniteGroup& g, const FinAbGroup& a,
                                           const IntMat& m) {
    int s = a.torsion_count();
    std::vector<long long> d(s);
    long long n = 1;
    for (int i = 0; i < s; ++i) {
        d[i] = a.invariant_factors()[i].convert_to<long long>();
        n *= d[i];
    }
    if (g.order() != n) throw ParameterInvalid("table does not match the group");
    std::vector<long long> stride(s, 1);
    for (int i = 1; i < s; ++i) stride[i] = stride[i - 1] * d[i - 1];
    std::vector<int32_t> image(n);
    for (long long x = 0; x < n; ++x) {
        long long z = 0;
        for (int i = 0; i < s; ++i) {
            long long acc = 0;
            for (int j = 0; j < s; ++j) {
                long long xj = (x / stride[j]) % d[j];
                long long mij = (m(i, j) % d[i]).convert_to<long long>();
                acc += mij % d[i] * (xj % d[i]) % d[i];
            }
            z += ((acc % d[i] + d[i]) % d[i]) * stride[i];
        }
        image[x] = int32_t(z);
    }
    return GrpAutomorphism(g, std::move(image));
}

} // namespace nilbal
