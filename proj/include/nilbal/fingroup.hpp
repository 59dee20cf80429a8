#pragma once

// Concrete finite groups: Todd-Coxeter coset enumeration over the trivial
// subgroup, lower central series, and a normalized bar-complex (co)homology
// oracle in degrees <= 2 over F_p and Z.

#include "nilbal/abelian.hpp"
#include "nilbal/modp.hpp"
#include "nilbal/presentation.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace nilbal {

class FiniteGroup {
public:
    // from a closed coset table over the trivial subgroup;
    // column layout: 2*g = action of generator g, 2*g+1 = its inverse
    FiniteGroup(int ngens, std::vector<int32_t> coset_table);

    // from an explicit multiplication table (identity must be index 0);
    // generator_elements picks a generating set
    FiniteGroup(std::vector<int32_t> mult_table, std::vector<int> generator_elements);

    int order() const { return n_; }
    int ngens() const { return ngens_; }
    int generator_element(int g) const { return gen_elem_[g]; }

    int act(int x, int col) const { return table_[size_t(x) * 2 * ngens_ + col]; }
    int act_gen(int x, int g, bool inverse = false) const { return act(x, 2 * g + (inverse ? 1 : 0)); }

    bool has_mult_table() const { return !mult_.empty(); }
    void build_mult_table(size_t limit_bytes = size_t(1) << 31);

    int mult(int a, int b) const;      // O(1) with table, word-walk otherwise
    int inverse(int a) const;
    int element_order(int a) const;
    int conjugate(int g, int x) const; // g x g^-1
    int commutator(int a, int b) const;

    // subgroup generated by the given elements, as a sorted element list
    std::vector<int> subgroup_closure(const std::vector<int>& gens) const;
    // smallest subgroup containing gens and normal in the whole group
    std::vector<int> normal_closure(const std::vector<int>& gens) const;

    bool verify(const Presentation& p) const;  // relators hold, rows are permutations

    std::vector<int> word_of(int x) const;     // letters (columns) from identity to x

private:
    void finish_init();
    int n_ = 0;
    int ngens_ = 0;
    std::vector<int32_t> table_;       // n x (2*ngens)
    std::vector<int32_t> parent_, parent_letter_;
    std::vector<int32_t> mult_;        // optional n x n
    std::vector<int32_t> inv_;
    std::vector<int> gen_elem_;
};

struct CosetEnumerationOptions {
    long long max_cosets = 1'000'000;
    bool standardize = true;
};

// Enumerates cosets of the trivial subgroup; the result is the regular
// representation. Throws CosetLimitExceeded when the table would outgrow
// max_cosets (the group may be infinite or just too large).
FiniteGroup coset_enumerate(const Presentation& p, long long max_cosets = 1'000'000);

// Order only (no FiniteGroup construction constraints beyond the table).
long long coset_enumerate_order(const Presentation& p, long long max_cosets = 1'000'000);

struct LowerCentralSeries {
    std::vector<std::vector<int>> terms;   // gamma_1 = G (element list), ...
    bool nilpotent;
    int nilpotency_class;                  // valid when nilpotent
};
LowerCentralSeries lower_central_series(const FiniteGroup& g);
bool is_nilpotent(const FiniteGroup& g);

// Multiplicative bijection, stored as a permutation of element indices.
class GrpAutomorphism {
public:
    GrpAutomorphism(const FiniteGroup& g, std::vector<int32_t> image);
    // determined by images of the group generators
    static GrpAutomorphism from_gen_images(const FiniteGroup& g, const std::vector<int>& images);
    const std::vector<int32_t>& image() const { return image_; }
    int operator()(int x) const { return image_[x]; }

private:
    std::vector<int32_t> image_;
};

// ---- bar complex oracle -----------------------------------------------------

struct BarOptions {
    int size_limit = 48;            // |G| cap for degree-2 homology
    bool want_reps = true;          // keep data needed for induced maps
};

class BarHomology {
public:
    // H_i(G; F_p) for i <= 2 from the normalized bar complex
    BarHomology(const FiniteGroup& g, long long p, const BarOptions& opt = {});

    int dim(int degree) const { return dims_[degree]; }

    // matrix of the map induced on H_degree by the automorphism
    ModpMat induced(const GrpAutomorphism& a, int degree) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    int dims_[3];
};

// dim H_i(G;F_p), i = 0,1,2 (throws SizeLimit past the bound)
std::array<int, 3> bar_homology_dims(const FiniteGroup& g, long long p, int size_limit = 48);

// H_2(G; Z) in invariant-factor form via integral SNF of the normalized bar
// differentials. |G| <= size_limit.
FinAbGroup integral_h2_bar(const FiniteGroup& g, int size_limit = 32);

// dim of the subspace of H^2(K;F_p) fixed by all the given automorphisms;
// induced maps on cohomology are the transposes of the homology ones.
int fixed_h2_dim(const FiniteGroup& k, const std::vector<GrpAutomorphism>& autos, long long p,
                 const BarOptions& opt = {});

// Abelianization of a finite group through a presentation certified against
// it, together with the map induced by an automorphism given on generators.
ModpMat induced_on_h1(const FiniteGroup& g, const GrpAutomorphism& a, long long p);

// Explicit multiplication table of a finite abelian group in invariant-factor
// form; elements are mixed-radix tuples, generators the unit vectors.
FiniteGroup finite_abelian_group(const FinAbGroup& a);

// The permutation induced on finite_abelian_group(a) by an endomorphism
// matrix on the standard generators.
GrpAutomorphism abelian_table_automorphism(const FiniteGroup& g, const FinAbGroup& a,
                                           const IntMat& m);

} // namespace nilbal
