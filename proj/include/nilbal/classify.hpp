#pragma once

// Catalog of named groups and exhaustive desk-scale verifiers for the
// classification statements the library is built around.

#include "nilbal/abcohomology.hpp"
#include "nilbal/fingroup.hpp"
#include "nilbal/resolution.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nilbal {

// How an expected property was pinned down.
enum class Evidence { Known, Derived, Elementary };

struct CatalogEntry {
    std::string name;
    Presentation pres;
    std::optional<PcTower> tower;

    // finite extensions of Z by a non-cyclic kernel carry the kernel and the
    // conjugation images instead of a tower
    std::optional<Presentation> finite_kernel;          // presentation of K
    std::vector<Word> kernel_conj_images;               // images of K's generators

    struct Expect {
        std::optional<long long> order;                 // finite groups
        std::optional<FinAbGroup> abelianization;
        std::optional<int> hirsch;
        std::optional<bool> nilpotent;
        std::optional<BettiReport::Verdict> balance;
        std::optional<long long> witness_prime;
        Evidence evidence = Evidence::Derived;
    } expect;
};

std::vector<CatalogEntry> builtin_catalog();

struct EntryResult {
    std::string name;
    bool ok = true;
    std::vector<std::string> failures;
    std::optional<BettiReport> report;
    std::optional<long long> order;
    std::optional<FinAbGroup> abelianization;
};

EntryResult check_catalog_entry(const CatalogEntry& e, long long max_cosets = 1'000'000);

// Betti data of a finite-kernel extension K x| Z through the bar oracle.
BettiReport finite_kernel_betti(const Presentation& kernel, const std::vector<Word>& conj_images,
                                const std::vector<long long>& primes, long long max_cosets,
                                int bar_limit = 48);

// true iff m | (n-1)^e for some e; e is then minimal
struct SemidirectNilpotency {
    bool nilpotent;
    int exponent;      // minimal e, valid when nilpotent
};
SemidirectNilpotency semidirect_nilpotent(long long m, long long n);

// invariant-factor forms agree
bool abelianization_isomorphic(const Presentation& a, const Presentation& b);

// ---- sweep reports -------------------------------------------------------------

struct SweepRecord {
    std::string group_id;
    std::string params;
    long long p = 0;
    long long beta1 = -1, beta2 = -1;
    std::string verdict;
    long long witness = -1;
    bool failure = false;
    std::string note;
};

struct SweepReport {
    std::string name;
    std::vector<SweepRecord> records;
    std::vector<std::string> skipped;   // groups excluded by the enumeration guard
    long long checked = 0;
    long long failures = 0;
};

struct SweepOptions {
    long long bound = 64;               // |T| bound
    long long max_candidates = 10'000'000;
    int bar_cross_check_limit = 32;     // bar oracle used when |T_p| fits
    long long bar_psi_limit = 200'000;  // and the automorphism count fits
    int jobs = 1;
};

// Theorem: a semidirect product T x| Z over finite abelian T is homologically
// balanced for all p | |T| only when T is cyclic. Exhaustive per p-group
// within the candidate guard; composite T assembled from its Sylow parts.
SweepReport verify_theorem_h1(const SweepOptions& opt = {});

// For every finite abelian A with p-torsion and dim A/pA > 1 and every
// unipotent psi: homology and cohomology fixed-space dims agree and exceed 1;
// model dims match the bar oracle.
SweepReport verify_cycboth(const SweepOptions& opt = {});   // opt.bound caps |A|

// randomized check of the rank identities for H_*(Z^2; A)
SweepReport verify_euler(int trials, const std::vector<long long>& primes, int max_dim = 8,
                         uint64_t seed = 20240901);

// the (k, f, l) grid of the Fox-Lyndon verification
SweepReport verify_partial3(long long kmax = 16);

// run every catalog entry's checks
SweepReport verify_catalog(long long max_cosets = 1'000'000);

// all abelian groups of order <= bound (each as invariant factors)
std::vector<FinAbGroup> abelian_groups_up_to(long long bound);

// parameter enumeration records for the CLI
struct EnumRecord {
    std::string family;
    std::string params;
    std::optional<long long> order;
    std::string abelianization;
    bool nilpotent = false;
    std::string balance;
};

std::vector<EnumRecord> enum_semidirect(long long m_lo, long long m_hi, long long n_lo,
                                        long long n_hi, long long max_cosets);
std::vector<EnumRecord> enum_metacyclic(long long p, long long r_lo, long long r_hi,
                                        long long s_lo, long long s_hi, long long t_lo,
                                        long long t_hi, long long max_cosets);
std::vector<EnumRecord> enum_q8k(long long k_lo, long long k_hi, long long a_lo, long long a_hi,
                                 long long max_cosets);

// presentation builders used by the catalog and the enumerations
Presentation metacyclic_presentation(long long p, long long r, long long s, long long t);
Presentation q8k_za_presentation(long long k, long long a);
Presentation semidirect_presentation(long long m, long long n);
Presentation semidirect_finite_presentation(long long m, long long n);  // adds t^ord = 1
PcTower semidirect_tower(long long m, long long n);
PcTower gamma_q_tower(long long q);
PcTower omega_tower();
PcTower heisenberg_mod_p_tower(long long p);
PcTower z_tower();
PcTower z2_tower();

long long multiplicative_order(long long n, long long m);

} // namespace nilbal
