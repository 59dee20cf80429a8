#pragma once

// Closed-form dimensions and explicit bases of H_2 and H^2 of finitely
// generated abelian groups with F_p coefficients, with induced automorphism
// actions.
//
// H^2(A;F_p) is modelled on the basis {x_i x_j : i < j} u {y_i}, where x_i
// runs over the generator functionals surviving mod p and y_i is the degree-2
// class of the i-th torsion factor with p | d_i (the Bockstein class; x_i^2
// when d_i = 2 and p = 2). This model is exact in both regimes; only for
// p = 2 with an exponent-2 summand does the square term make the action
// non-block-diagonal.
//
// The homology splitting H_2 = (A/pA ^ A/pA) + Ker(p id) carries the induced
// action blockwise only in the split regime (p odd, or p = 2 without an
// exponent-2 summand); the exponent-two homology action is delegated to the
// bar oracle by callers.

#include "nilbal/abelian.hpp"
#include "nilbal/modp.hpp"

#include <optional>

namespace nilbal {

struct H2Decomposition {
    long long p;
    int wedge_dim;        // dim (A/pA) ^ (A/pA)
    int tor_dim;          // dim Ker(p id_A)
    int ext_dim;          // dim Ext(A, F_p)
    enum Regime { Split, ExponentTwo } regime;
    int total() const { return wedge_dim + tor_dim; }
    // populated in the exponent-two regime:
    int im_b_odot_dim = -1;    // dim of the image of B* (.) A* under cup product
    int im_sq_dim = -1;        // dim Sq(A*)
};

H2Decomposition h2_split_dims(const FinAbGroup& a, long long p);

bool exponent_two_regime(const FinAbGroup& a, long long p);

// Matrix of the map induced by psi on H_2(A;F_p) in the wedge + tor basis.
// Split regime only (throws ParameterInvalid otherwise).
ModpMat h2_homology_matrix(const FinAbGroup& a, const AbHom& psi, long long p);

// Matrix of the pullback psi^* on H^2(A;F_p) in the {x_i x_j} u {y_i} basis.
// Valid in all regimes.
ModpMat h2_cohomology_matrix(const FinAbGroup& a, const AbHom& psi, long long p);

struct FixedH2Dims {
    H2Decomposition decomposition;
    int cohomology;                   // dim H^2(A;F_p)^N, from the model
    std::optional<int> homology;      // split regime only
    // dim of the kernel of (H_2(psi)-I) restricted to the wedge block
    std::optional<int> wedge_kernel;
};

// Fixed-space dimensions under the subgroup generated by the given
// automorphisms. All of them must be unipotent (throws NotUnipotent).
FixedH2Dims fixed_h2_dims(const FinAbGroup& a, const std::vector<AbHom>& autos, long long p);

// The spec'd operation: dim H^2(A;F_p)^N.
int fixed_h2_dim_formula(const FinAbGroup& a, const std::vector<AbHom>& autos, long long p);

} // namespace nilbal
