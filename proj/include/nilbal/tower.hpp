#pragma once

// Iterated extension towers over a cyclic (or trivial, or Z) base: normal
// monomial forms, collection, and exact group-ring arithmetic. The normal
// form puts later generators to the left of earlier ones, with the base
// generator rightmost and its exponent reduced mod the base order.

#include "nilbal/abelian.hpp"
#include "nilbal/intmat.hpp"
#include "nilbal/word.hpp"

#include <map>
#include <string>
#include <vector>

namespace nilbal {

// exponent vector by generator index; index 0 is the base generator
struct Monomial {
    std::vector<long long> e;
    explicit Monomial(int ngens = 0) : e(ngens, 0) {}
    bool is_identity() const {
        for (auto x : e) if (x) return false;
        return true;
    }
    int top_level() const {
        for (int i = int(e.size()) - 1; i >= 0; --i)
            if (e[i]) return i;
        return -1;
    }
    auto operator<=>(const Monomial& o) const = default;
};

class PcTower {
public:
    struct Level {
        std::string name;
        std::vector<Monomial> conj;       // conj[i] = g_level g_i g_level^-1
        std::vector<Monomial> conj_inv;   // derived: g_level^-1 g_i g_level
    };

    // base_order: 0 = Z, 1 = trivial, k >= 2 = Z/k
    PcTower(long long base_order, std::string base_name);

    // conj_images[i] = image of generator i under conjugation by the new
    // generator, as a monomial over the existing generators
    void add_level(const std::string& name, std::vector<Monomial> conj_images);

    long long base_order() const { return base_order_; }
    int nlevels() const { return int(levels_.size()); }
    int ngens() const { return nlevels() + 1; }
    const std::string& gen_name(int i) const { return names_[i]; }
    int gen_index(const std::string& n) const;
    const Level& level(int i) const { return levels_[i - 1]; }   // i >= 1

    int hirsch_length() const { return nlevels() + (base_order_ == 0 ? 1 : 0); }

    // ---- group operations (collection) ----
    Monomial identity() const { return Monomial(ngens()); }
    Monomial generator(int i, long long e = 1) const;
    Monomial mul(const Monomial& a, const Monomial& b) const;
    Monomial inv(const Monomial& a) const;
    Monomial pow(const Monomial& a, long long n) const;
    // conjugation action of generator `level` (power s) on a monomial of
    // strictly lower levels
    Monomial conj_pow(int level, long long s, const Monomial& m) const;

    // word over tower generators -> normal form
    Monomial collect_word(const std::vector<std::pair<int, long long>>& letters) const;
    Monomial collect(const Word& w) const;     // gen indices = tower indices

    std::string str(const Monomial& m) const;

    // tower restricted to generators < level (prefix subtower)
    PcTower prefix(int nlevels_kept) const;

    // abelianization of the full tower, with the exponent projection
    FinAbGroup abelianization() const;
    // matrix of the map induced on the abelianization of the prefix subtower
    // by conjugation with the top generator
    AbHom top_conj_on_sub_abelianization() const;

    bool is_nilpotent() const;    // every level's conjugation is unipotent on
                                  // the subtower abelianization

private:
    void validate_new_level(const Level& lv) const;
    Monomial conj_apply(int level, bool inverse, const Monomial& m) const;

    long long base_order_;
    std::vector<std::string> names_;
    std::vector<Level> levels_;
};

// ---- group ring -------------------------------------------------------------

class GroupRingElem {
public:
    GroupRingElem() = default;
    GroupRingElem(const Monomial& m, Int c) {
        if (c != 0) terms_[m] = std::move(c);
    }
    static GroupRingElem zero() { return GroupRingElem(); }
    static GroupRingElem one(const PcTower& t) { return GroupRingElem(t.identity(), 1); }

    void add(const Monomial& m, const Int& c);
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Int>& terms() const { return terms_; }
    int support_size() const { return int(terms_.size()); }

    GroupRingElem operator+(const GroupRingElem& o) const;
    GroupRingElem operator-(const GroupRingElem& o) const;
    GroupRingElem negate() const;

    Int augmentation() const;
    long long augmentation_mod(long long p) const;

    bool operator==(const GroupRingElem& o) const { return terms_ == o.terms_; }

private:
    std::map<Monomial, Int> terms_;
};

GroupRingElem ring_mul(const PcTower& t, const GroupRingElem& a, const GroupRingElem& b);
GroupRingElem ring_scale(const GroupRingElem& a, const Int& c);
// apply conjugation by the top generator (power s) to every monomial
GroupRingElem ring_conj(const PcTower& t, int level, long long s, const GroupRingElem& a);
// sum_{i=0}^{k-1} g0^i : the base norm element
GroupRingElem norm_element(const PcTower& t);
GroupRingElem ring_from_word(const PcTower& t, const Word& w, const Int& c = 1);

// matrices over the group ring, row-major
struct RingMat {
    int rows = 0, cols = 0;
    std::vector<GroupRingElem> e;
    RingMat() = default;
    RingMat(int r, int c) : rows(r), cols(c), e(size_t(r) * c) {}
    GroupRingElem& at(int i, int j) { return e[size_t(i) * cols + j]; }
    const GroupRingElem& at(int i, int j) const { return e[size_t(i) * cols + j]; }
};

RingMat ring_mat_mul(const PcTower& t, const RingMat& a, const RingMat& b);
bool ring_mat_is_zero(const RingMat& a);
IntMat augment(const RingMat& a);   // entrywise augmentation

} // namespace nilbal
