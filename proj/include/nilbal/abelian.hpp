#pragma once

// Finitely generated abelian groups in invariant-factor form, homomorphisms
// between them, unipotency, fixed subgroups and the filtration attached to a
// unipotent action.

#include "nilbal/intmat.hpp"
#include "nilbal/modp.hpp"
#include "nilbal/presentation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilbal {

// Z^free_rank + Z/d_1 + ... + Z/d_s with d_1 | d_2 | ... and each d_i >= 2.
// The standard generating system lists free generators first.
class FinAbGroup {
public:
    FinAbGroup() : free_rank_(0) {}
    FinAbGroup(int free_rank, std::vector<Int> invariant_factors);

    // normal form of an arbitrary diagonal (drops units, sorts, fixes chain)
    static FinAbGroup from_diagonal(const std::vector<Int>& diag, int extra_free = 0);

    int free_rank() const { return free_rank_; }
    const std::vector<Int>& invariant_factors() const { return factors_; }
    int torsion_count() const { return int(factors_.size()); }
    int ngens() const { return free_rank_ + torsion_count(); }
    bool is_finite() const { return free_rank_ == 0; }
    bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
    bool is_cyclic() const {
        return ngens() <= 1;
    }
    Int order() const;                    // torsion order (finite groups)
    Int exponent() const;                 // largest invariant factor, 1 if trivial

    // order of generator i in the standard system: 0 for free generators
    Int gen_order(int i) const {
        return i < free_rank_ ? Int(0) : factors_[i - free_rank_];
    }

    std::vector<long long> primes() const;     // primes dividing the torsion order

    bool operator==(const FinAbGroup& o) const {
        return free_rank_ == o.free_rank_ && factors_ == o.factors_;
    }

    std::string str() const;     // e.g. "Z^2 + Z/2 + Z/4"

private:
    int free_rank_;
    std::vector<Int> factors_;
};

struct FunctorDims {
    int tensor;   // dim A/pA
    int tor;      // dim Ker(p id_A)
    int hom;      // dim Hom(A, F_p)
    int ext;      // dim Ext(A, F_p)
};
FunctorDims functor_dims(const FinAbGroup& a, long long p);

// Homomorphism between groups in their standard generating systems; column j
// holds the image of generator j. Entries of torsion target rows are kept
// reduced mod the row order. Validity (orders of images divide orders of
// sources) is checked on construction.
class AbHom {
public:
    AbHom() = default;
    AbHom(FinAbGroup source, FinAbGroup target, IntMat matrix);

    static AbHom identity(const FinAbGroup& a);
    static AbHom mult_by(const FinAbGroup& a, const Int& n);

    const FinAbGroup& source() const { return source_; }
    const FinAbGroup& target() const { return target_; }
    const IntMat& matrix() const { return m_; }

    AbHom compose(const AbHom& inner) const;   // this o inner
    AbHom operator*(const AbHom& o) const { return compose(o); }
    AbHom operator-(const AbHom& o) const;
    AbHom pow(int e) const;                    // endomorphisms only

    bool is_zero() const;                      // zero as a map
    bool is_endo() const { return source_ == target_; }
    bool is_automorphism() const;              // surjectivity (Hopfian)

    bool operator==(const AbHom& o) const {
        return source_ == o.source_ && target_ == o.target_ && m_ == o.m_;
    }

    // matrix of the induced map on A/pA (rows/cols restricted to generators
    // that survive mod p: free ones and those with p | d_i)
    ModpMat mod_p(long long p) const;

private:
    void reduce();
    FinAbGroup source_, target_;
    IntMat m_;
};

// Minimal N with (f - id)^N = 0 on A; 0 when f = id. Throws NotAutomorphism
// when f is not invertible. Returns nullopt when f - id is not nilpotent.
std::optional<int> unipotent_index(const AbHom& f);
bool is_unipotent(const AbHom& f);

// Cokernel of the exponent matrix, in invariant-factor form.
FinAbGroup abelianize(const Presentation& p);

// Also expose the projection Z^ngens -> coordinates of the abelianization and
// a section, for transporting automorphisms.
struct AbelianizationMaps {
    FinAbGroup group;
    IntMat to_coords;     // ngens(group) x ngens(presentation)
    IntMat from_coords;   // ngens(presentation) x ngens(group)
};
AbelianizationMaps abelianize_with_maps(const Presentation& p);

// Submodule chain A = A_1 > ... > A_k = A^N > 0 for a unipotent action:
// (g-1) A_i <= A_{i+1} for every generator g, and A_k is the full fixed
// subgroup. Each step is a lattice of column generators in the coordinates
// of A's standard system. Throws NotUnipotent.
struct Filtration {
    std::vector<IntMat> steps;     // first = full group, last = fixed subgroup
    IntMat fixed;                  // = steps.back()
};
Filtration unipotent_filtration(const FinAbGroup& a, const std::vector<AbHom>& gens,
                                std::optional<long long> mod_p = std::nullopt);

// The relation lattice of A in its standard coordinates: columns d_i e_i.
IntMat relation_lattice(const FinAbGroup& a);

// Fixed subgroup {x in A : f(x) = x for all f}, as lattice columns.
IntMat fixed_sublattice(const FinAbGroup& a, const std::vector<AbHom>& fs);

// Abstract structure of Ker f = {x in source : f(x) = 0}.
FinAbGroup hom_kernel_structure(const AbHom& f);

// ---- automorphism enumeration ---------------------------------------------

// All automorphisms (or just the unipotent ones) of a finite abelian group,
// as small integer matrices on the standard generating system. Enumeration
// iterates candidate generator-image tuples and filters by invertibility;
// the candidate count is capped to keep sweeps at desk scale.
struct AutEnumeration {
    bool complete = false;              // false when the cap was exceeded
    long long candidate_count = 0;
    std::vector<std::vector<long long>> mats;  // row-major s x s
};

long long aut_candidate_count(const FinAbGroup& t);
AutEnumeration enumerate_automorphisms(const FinAbGroup& t, bool unipotent_only,
                                       long long max_candidates = 10'000'000);

AbHom hom_from_small(const FinAbGroup& t, const std::vector<long long>& mat);

} // namespace nilbal
