#pragma once

// Free resolutions of Z over the group ring of a tower, built as iterated
// mapping cones over a chain map lifting each level's conjugation. Exactness
// in degrees <= 2 is certified symbolically (d o d = 0 plus the lifting
// identities). Betti numbers come from augmenting the differentials.

#include "nilbal/abelian.hpp"
#include "nilbal/modp.hpp"
#include "nilbal/tower.hpp"

#include <array>
#include <optional>
#include <vector>

namespace nilbal {

struct FreeComplex {
    std::array<int, 4> rank{1, 0, 0, 0};
    std::array<RingMat, 4> d;       // d[n] : rank[n] x rank[n-1], n = 1..3
};

struct TowerResolution {
    PcTower tower;
    FreeComplex full;
    // data of the top level (towers with >= 1 level): resolution of the
    // subtower and the chain map lifting conjugation by the top generator
    std::optional<PcTower> subtower;
    FreeComplex sub;
    std::array<RingMat, 4> lift;    // P_0..P_3 over the subtower ring
};

TowerResolution wang_resolution(const PcTower& t);

// homology of a small F_p chain complex given by matrices (row convention:
// the map sends basis row vectors through the matrix)
struct FieldComplexHomology {
    long long p;
    std::array<int, 3> dims;
    // induced map of a compatible endomorphism (entries: matrices acting on
    // each degree) on H_degree
    std::array<std::vector<std::vector<uint32_t>>, 3> reps;   // basis cycles
};

struct BettiReport {
    int beta0_q = 1, beta1_q = 0, beta2_q = 0;
    std::vector<std::array<long long, 3>> per_prime;   // {p, beta1, beta2}
    std::optional<FinAbGroup> integral_h2;
    enum Verdict { BalancedConsistent, NotHomologicallyBalanced, Undetermined } verdict =
        Undetermined;
    long long witness_prime = -1;    // 0 encodes the rationals
    int hirsch = 0;
    bool nilpotent = false;
    struct WangCheck {
        long long p;
        int lhs;        // beta2 - beta1 + 1 from the resolution
        int rhs;        // dim Cok(H2(psi)-I) on the subtower homology
        bool ok;
    };
    std::vector<WangCheck> wang_checks;
};

struct BettiOptions {
    std::vector<long long> primes;     // empty: defaults (base primes + 2,3,5)
    bool with_rationals = true;
    bool integral_h2 = true;
    bool wang_cross_check = true;
};

BettiReport betti(const PcTower& t, const BettiOptions& opt = {});

// Subtower homology data feeding the Wang rank identities.
struct KHomologyData {
    long long p = 2;
    int h1_dim = 0, h2_dim = 0;
    ModpMat h1_map, h2_map;      // induced maps (column convention)
};

struct WangBetti {
    int beta1, beta2;
    bool h2_cyclic_module;       // dim H2/(t-1)H2 <= 1
};

// beta_1 = 1 + dim Cok(H1(psi)-I); beta_2 = dim Cok(H2(psi)-I) + dim Ker(H1(psi)-I).
WangBetti wang_identity_check(const KHomologyData& k, bool require_unipotent = true);

// Homology of the subtower with the top-level induced maps, over F_p.
KHomologyData subtower_homology_data(const TowerResolution& r, long long p);

// dims of H_*(Z^2; A) from 0 -> A -> A^2 -> A -> 0 with commuting actions
struct EulerDims {
    int b0, b1, b2;
};
EulerDims euler_dims(long long p, const ModpMat& act_x, const ModpMat& act_y);

// ---- Fox-Lyndon verification -------------------------------------------------

struct FoxLyndonRecord {
    long long k, f, l, m, w;
    bool d1d2_zero = false;
    bool norm_identities = false;     // z nu = nu, nu^2 = k nu, nu central
    bool yx_nu_identity = false;      // y x nu = x y nu
    bool syzygy_family = false;       // the solved (a,b,c,d) family lies in Ker d2
    bool eps2_vanishes = false;       // eps_2 of each family member is 0
    // which b-term closed the third equation: +1 for w A (x+1), -1 for w A (x-1)
    int b_variant = 0;
    int kernel_dim = -1;              // dim Ker(F_2 (x) d2)
    int beta1 = -1;                   // from the abelianization
    int beta1_resolution = -1;        // independent Wang-resolution route
    int beta2_resolution = -1;
    bool ok() const {
        return d1d2_zero && norm_identities && yx_nu_identity && syzygy_family &&
               eps2_vanishes && kernel_dim == beta1 + 1 &&
               beta1_resolution == beta1 && beta2_resolution == beta1 + 1;
    }
};

// Throws ParameterInvalid unless k = 2^n >= 8, f | k, 1 < l < k, l = 1 mod 4.
FoxLyndonRecord fox_lyndon_check(long long k, long long f, long long l);

// The tower of the group <x,y,z | [x,y]=z^f, z^k, xzx^-1=z^-1, yzy^-1=z^l>,
// levels ordered z, y, x.
PcTower partial3_tower(long long k, long long f, long long l);

} // namespace nilbal
