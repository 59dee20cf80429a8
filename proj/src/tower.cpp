#include "nilbal/tower.hpp"

#include "nilbal/errors.hpp"
#include "nilbal/modp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace nilbal {

PcTower::PcTower(long long base_order, std::string base_name) : base_order_(base_order) {
    if (base_order < 0) throw InvalidTower("base order must be >= 0");
    names_.push_back(std::move(base_name));
}

int PcTower::gen_index(const std::string& n) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == n) return int(i);
    return -1;
}

Monomial PcTower::generator(int i, long long e) const {
    Monomial m(ngens());
    if (i == 0 && base_order_ == 1) return m;
    m.e[i] = e;
    if (i == 0 && base_order_ >= 2) {
        m.e[0] %= base_order_;
        if (m.e[0] < 0) m.e[0] += base_order_;
    }
    return m;
}

// right-multiply the normal form acc by g_level^exp
static void merge_letter(const PcTower& t, Monomial& acc, int level, long long exp);

Monomial PcTower::conj_apply(int level, bool inverse, const Monomial& m) const {
    // image of a lower-level monomial under conjugation by g_level^{+-1}
    const Level& lv = levels_[level - 1];
    Monomial out = identity();
    for (int i = int(m.e.size()) - 1; i >= 0; --i) {
        if (i >= level || m.e[i] == 0) continue;
        const Monomial& img = inverse ? lv.conj_inv[i] : lv.conj[i];
        Monomial p = pow(img, m.e[i]);
        out = mul(out, p);
    }
    return out;
}

Monomial PcTower::conj_pow(int level, long long s, const Monomial& m) const {
    Monomial cur = m;
    bool inverse = s < 0;
    long long n = inverse ? -s : s;
    // binary powering over automorphism application
    // phi^n(m) computed by repeated squaring of the generator images
    if (n == 0) return cur;
    if (n <= 4) {
        for (long long i = 0; i < n; ++i) cur = conj_apply(level, inverse, cur);
        return cur;
    }
    // build phi^n generator images by repeated squaring
    int width = level;     // generators 0..level-1
    std::vector<Monomial> base_imgs(width), acc_imgs(width);
    for (int i = 0; i < width; ++i) {
        base_imgs[i] = inverse ? levels_[level - 1].conj_inv[i] : levels_[level - 1].conj[i];
        acc_imgs[i] = generator(i);
    }
    auto apply_images = [&](const std::vector<Monomial>& imgs, const Monomial& x) {
        Monomial out = identity();
        for (int i = int(x.e.size()) - 1; i >= 0; --i) {
            if (i >= width || x.e[i] == 0) continue;
            out = mul(out, pow(imgs[i], x.e[i]));
        }
        return out;
    };
    long long k = n;
    while (k > 0) {
        if (k & 1) {
            std::vector<Monomial> nxt(width);
            for (int i = 0; i < width; ++i) nxt[i] = apply_images(base_imgs, acc_imgs[i]);
            acc_imgs = std::move(nxt);
        }
        k >>= 1;
        if (k) {
            std::vector<Monomial> sq(width);
            for (int i = 0; i < width; ++i) sq[i] = apply_images(base_imgs, base_imgs[i]);
            base_imgs = std::move(sq);
        }
    }
    return apply_images(acc_imgs, cur);
}

static void merge_letter(const PcTower& t, Monomial& acc, int level, long long exp) {
    if (exp == 0) return;
    if (level == 0 && t.base_order() == 1) return;
    // split acc below `level`
    Monomial low(int(acc.e.size()));
    bool has_low = false;
    for (int i = 0; i < level; ++i) {
        if (acc.e[i]) {
            low.e[i] = acc.e[i];
            acc.e[i] = 0;
            has_low = true;
        }
    }
    acc.e[level] += exp;
    if (level == 0 && t.base_order() >= 2) {
        acc.e[0] %= t.base_order();
        if (acc.e[0] < 0) acc.e[0] += t.base_order();
    }
    if (!has_low) return;
    // acc * low * g^exp = acc * g^exp * (g^-exp low g^exp)
    Monomial moved = t.conj_pow(level, -exp, low);
    for (int i = int(moved.e.size()) - 1; i >= 0; --i)
        if (moved.e[i]) merge_letter(t, acc, i, moved.e[i]);
}

Monomial PcTower::mul(const Monomial& a, const Monomial& b) const {
    Monomial acc = a;
    if (int(acc.e.size()) != ngens()) acc.e.resize(ngens(), 0);
    for (int i = int(b.e.size()) - 1; i >= 0; --i)
        if (b.e[i]) merge_letter(*this, acc, i, b.e[i]);
    return acc;
}

Monomial PcTower::inv(const Monomial& a) const {
    Monomial out = identity();
    for (int i = 0; i < int(a.e.size()); ++i)    // lowest level first: reversed order
        if (a.e[i]) merge_letter(*this, out, i, -a.e[i]);
    return out;
}

Monomial PcTower::pow(const Monomial& a, long long n) const {
    if (n == 0) return identity();
    Monomial base = n > 0 ? a : inv(a);
    long long k = n > 0 ? n : -n;
    // quick path: single-generator monomials
    if (base.top_level() >= 0) {
        int tl = base.top_level();
        bool single = true;
        for (int i = 0; i < tl; ++i)
            if (base.e[i]) { single = false; break; }
        if (single) {
            Monomial m = identity();
            m.e[tl] = base.e[tl] * k;
            if (tl == 0 && base_order_ >= 2) {
                m.e[0] %= base_order_;
                if (m.e[0] < 0) m.e[0] += base_order_;
            }
            return m;
        }
    }
    Monomial acc = identity(), sq = base;
    while (k > 0) {
        if (k & 1) acc = mul(acc, sq);
        k >>= 1;
        if (k) sq = mul(sq, sq);
    }
    return acc;
}

Monomial PcTower::collect_word(const std::vector<std::pair<int, long long>>& letters) const {
    Monomial acc = identity();
    for (auto& [g, e] : letters) merge_letter(*this, acc, g, e);
    return acc;
}

Monomial PcTower::collect(const Word& w) const {
    Monomial acc = identity();
    for (auto& l : w.letters()) merge_letter(*this, acc, l.gen, l.exp);
    return acc;
}

void PcTower::add_level(const std::string& name, std::vector<Monomial> conj_images) {
    if (int(conj_images.size()) != ngens())
        throw InvalidTower("level needs one conjugation image per existing generator");
    Level lv;
    lv.name = name;
    lv.conj = std::move(conj_images);
    for (auto& m : lv.conj) m.e.resize(ngens() + 1, 0);

    // filtration check: the image of g_i may only use generators <= i, and the
    // leading exponent must be invertible
    for (int i = 0; i < ngens(); ++i) {
        const Monomial& img = lv.conj[i];
        for (int j = i + 1; j < int(img.e.size()); ++j)
            if (img.e[j])
                throw InvalidTower("conjugation image of " + names_[i] +
                                   " escapes its filtration level");
        long long lead = img.e[i];
        if (i == 0) {
            if (base_order_ == 0 && lead != 1 && lead != -1)
                throw InvalidTower("base conjugation exponent must be +-1 over Z");
            if (base_order_ >= 2 && std::gcd(lead % base_order_, base_order_) != 1)
                throw InvalidTower("base conjugation exponent is not a unit");
            if (base_order_ == 1 && !img.is_identity())
                throw InvalidTower("trivial base admits only the identity image");
        } else if (lead != 1 && lead != -1) {
            throw InvalidTower("leading conjugation exponent of an infinite generator must be +-1");
        }
    }

    // temporarily install the level so the group operations see it
    names_.push_back(name);
    levels_.push_back(lv);
    int li = nlevels();
    try {
        // derive the inverse images by triangular back-substitution
        levels_.back().conj_inv.resize(li);
        for (int i = 0; i < li; ++i) {
            // solve conj(x) = g_i
            Monomial target = generator(i);
            Monomial x = identity();
            Monomial residue = target;
            for (int lvl = i; lvl >= 0; --lvl) {
                long long need = residue.e[lvl];
                if (need == 0) continue;
                long long lead = levels_.back().conj[lvl].e[lvl];
                long long coef;
                if (lvl == 0 && base_order_ >= 2) {
                    coef = (mod_inverse(lead, base_order_) * (need % base_order_)) % base_order_;
                } else {
                    coef = need / lead;    // lead = +-1
                }
                if (coef == 0) continue;
                Monomial step = generator(lvl, coef);
                x = mul(x, step);
                // residue = conj(x)^-1 * target
                Monomial cx = conj_apply(li, false, x);
                residue = mul(inv(cx), target);
                if (residue.top_level() >= lvl)
                    throw InvalidTower("conjugation is not invertible on the subtower");
            }
            if (!residue.is_identity())
                throw InvalidTower("conjugation is not invertible on the subtower");
            levels_.back().conj_inv[i] = x;
        }
        validate_new_level(levels_.back());
    } catch (...) {
        names_.pop_back();
        levels_.pop_back();
        throw;
    }
}

void PcTower::validate_new_level(const Level& lv) const {
    int li = nlevels();
    // inverse really inverts
    for (int i = 0; i < li; ++i) {
        Monomial x = conj_apply(li, false, lv.conj_inv[i]);
        if (!(x == generator(i)))
            throw InvalidTower("derived inverse conjugation failed on " + names_[i]);
    }
    // the base relation is respected
    if (base_order_ >= 2) {
        Monomial img = pow(lv.conj[0], base_order_);
        if (!img.is_identity())
            throw InvalidTower("conjugation image of the base violates its order");
    }
    // confluence: conjugation respects existing conjugation relations
    for (int j = 1; j < li; ++j)
        for (int i = 0; i < j; ++i) {
            // phi(g_j g_i g_j^-1) = phi(g_j) phi(g_i) phi(g_j)^-1
            Monomial lhs = conj_apply(li, false, levels_[j - 1].conj[i]);
            Monomial pj = conj_apply(li, false, generator(j));
            Monomial pi = conj_apply(li, false, generator(i));
            Monomial rhs = mul(mul(pj, pi), inv(pj));
            if (!(lhs == rhs))
                throw InvalidTower("conjugation by " + lv.name +
                                   " does not respect the relation between " + names_[j] +
                                   " and " + names_[i]);
        }
}

std::string PcTower::str(const Monomial& m) const {
    std::ostringstream os;
    bool first = true;
    for (int i = int(m.e.size()) - 1; i >= 0; --i) {
        if (!m.e[i]) continue;
        if (!first) os << "*";
        os << names_[i];
        if (m.e[i] != 1) os << "^" << m.e[i];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

PcTower PcTower::prefix(int nlevels_kept) const {
    PcTower t(base_order_, names_[0]);
    for (int i = 1; i <= nlevels_kept; ++i) {
        std::vector<Monomial> imgs;
        for (int j = 0; j < i; ++j) {
            Monomial m = levels_[i - 1].conj[j];
            m.e.resize(i, 0);    // images only involve generators < i
            imgs.push_back(std::move(m));
        }
        t.add_level(levels_[i - 1].name, imgs);
    }
    return t;
}

FinAbGroup PcTower::abelianization() const {
    // generators g_0..g_n; relations: base order, and conj relations
    // g_l g_i g_l^-1 = w  abelianize to  g_i - w^{ab} = 0
    std::vector<std::vector<Int>> rows;
    int n = ngens();
    if (base_order_ >= 1) {
        std::vector<Int> r(n, 0);
        r[0] = base_order_;
        rows.push_back(r);
    }
    for (int l = 1; l <= nlevels(); ++l)
        for (int i = 0; i < l; ++i) {
            std::vector<Int> r(n, 0);
            r[i] += 1;
            const Monomial& img = levels_[l - 1].conj[i];
            for (int j = 0; j < int(img.e.size()); ++j) r[j] -= img.e[j];
            bool nz = false;
            for (auto& x : r) nz = nz || x != 0;
            if (nz) rows.push_back(r);
        }
    IntMat m(int(rows.size()), n);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < n; ++j) m(int(i), j) = rows[i][j];
    auto diag = snf_diagonal(m);
    int rank = 0;
    for (auto& d : diag)
        if (d != 0) ++rank;
    return FinAbGroup::from_diagonal(diag, n - rank);
}

AbHom PcTower::top_conj_on_sub_abelianization() const {
    if (nlevels() == 0) throw InvalidTower("tower has no top level");
    PcTower sub = prefix(nlevels() - 1);
    // abelianization with maps, through a presentation of the subtower
    std::vector<std::string> gnames;
    for (int i = 0; i < sub.ngens(); ++i) gnames.push_back(sub.gen_name(i));
    std::vector<Word> rels;
    if (base_order_ >= 1) rels.push_back(Word::generator(0, base_order_));
    for (int l = 1; l <= sub.nlevels(); ++l)
        for (int i = 0; i < l; ++i) {
            Word w = Word::generator(l) * Word::generator(i) * Word::generator(l, -1);
            const Monomial& img = sub.levels_[l - 1].conj[i];
            Word wi;
            for (int j = int(img.e.size()) - 1; j >= 0; --j)
                if (img.e[j]) wi.append(j, img.e[j]);
            rels.push_back(w * wi.inverse());
        }
    Presentation pres(gnames, rels);
    auto maps = abelianize_with_maps(pres);
    // column j of the top conjugation on the subtower, in ab coordinates
    const Level& top = levels_.back();
    int k = maps.group.ngens();
    IntMat mat(k, k);
    for (int j = 0; j < sub.ngens(); ++j) {
        // exponent vector of conj image of g_j
        std::vector<Int> ev(sub.ngens(), 0);
        for (int i = 0; i < int(top.conj[j].e.size()) && i < sub.ngens(); ++i)
            ev[i] = top.conj[j].e[i];
        // to coords: y = to_coords * ev
        for (int r = 0; r < k; ++r) {
            Int s = 0;
            for (int c = 0; c < sub.ngens(); ++c) s += maps.to_coords(r, c) * ev[c];
            // accumulate against the section applied to e_j
            mat(r, j) = s;    // temporarily: image of presentation gen j
        }
    }
    // transport: column for ab generator i = mat * from_coords(:, i)
    IntMat out(k, k);
    for (int i = 0; i < k; ++i)
        for (int r = 0; r < k; ++r) {
            Int s = 0;
            for (int j = 0; j < sub.ngens(); ++j)
                s += mat(r, j) * maps.from_coords(j, i);
            out(r, i) = s;
        }
    return AbHom(maps.group, maps.group, out);
}

bool PcTower::is_nilpotent() const {
    for (int l = 1; l <= nlevels(); ++l) {
        PcTower pre = prefix(l);
        AbHom f = pre.top_conj_on_sub_abelianization();
        if (!f.is_automorphism()) return false;
        if (!is_unipotent(f)) return false;
    }
    return true;
}

// ---- group ring ---------------------------------------------------------------

void GroupRingElem::add(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) terms_.emplace(m, c);
    else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

GroupRingElem GroupRingElem::operator+(const GroupRingElem& o) const {
    GroupRingElem r = *this;
    for (auto& [m, c] : o.terms_) r.add(m, c);
    return r;
}

GroupRingElem GroupRingElem::operator-(const GroupRingElem& o) const {
    GroupRingElem r = *this;
    for (auto& [m, c] : o.terms_) r.add(m, -c);
    return r;
}

GroupRingElem GroupRingElem::negate() const {
    GroupRingElem r;
    for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Int GroupRingElem::augmentation() const {
    Int s = 0;
    for (auto& [m, c] : terms_) s += c;
    return s;
}

long long GroupRingElem::augmentation_mod(long long p) const {
    Int s = augmentation() % p;
    if (s < 0) s += p;
    return s.convert_to<long long>();
}

GroupRingElem ring_mul(const PcTower& t, const GroupRingElem& a, const GroupRingElem& b) {
    GroupRingElem r;
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) r.add(t.mul(ma, mb), ca * cb);
    return r;
}

GroupRingElem ring_scale(const GroupRingElem& a, const Int& c) {
    GroupRingElem r;
    if (c == 0) return r;
    for (auto& [m, k] : a.terms()) r.add(m, c * k);
    return r;
}

GroupRingElem ring_conj(const PcTower& t, int level, long long s, const GroupRingElem& a) {
    GroupRingElem r;
    for (auto& [m, c] : a.terms()) r.add(t.conj_pow(level, s, m), c);
    return r;
}

GroupRingElem norm_element(const PcTower& t) {
    if (t.base_order() < 1) throw InvalidTower("norm element needs a finite base");
    GroupRingElem r;
    for (long long i = 0; i < t.base_order(); ++i) r.add(t.generator(0, i), 1);
    return r;
}

GroupRingElem ring_from_word(const PcTower& t, const Word& w, const Int& c) {
    return GroupRingElem(t.collect(w), c);
}

RingMat ring_mat_mul(const PcTower& t, const RingMat& a, const RingMat& b) {
    RingMat r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (int j = 0; j < b.cols; ++j) {
                if (b.at(k, j).is_zero()) continue;
                r.at(i, j) = r.at(i, j) + ring_mul(t, a.at(i, k), b.at(k, j));
            }
        }
    return r;
}

bool ring_mat_is_zero(const RingMat& a) {
    for (auto& x : a.e)
        if (!x.is_zero()) return false;
    return true;
}

IntMat augment(const RingMat& a) {
    IntMat m(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) m(i, j) = a.at(i, j).augmentation();
    return m;
}

} // namespace nilbal
