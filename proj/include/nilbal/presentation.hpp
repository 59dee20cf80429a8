#pragma once

// Finite group presentations: the .grp DSL, Fox derivatives and the
// augmented Jacobian of the presentation 2-complex.

#include "nilbal/intmat.hpp"
#include "nilbal/word.hpp"

#include <string>
#include <vector>

namespace nilbal {

class Presentation {
public:
    Presentation() = default;
    Presentation(std::vector<std::string> gens, std::vector<Word> rels);

    int ngens() const { return int(gen_names_.size()); }
    int nrels() const { return int(relators_.size()); }
    const std::vector<std::string>& generator_names() const { return gen_names_; }
    const std::vector<Word>& relators() const { return relators_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    int gen_index(const std::string& name) const;   // -1 if unknown

    bool operator==(const Presentation& o) const {
        return gen_names_ == o.gen_names_ && relators_ == o.relators_;
    }

private:
    std::string name_;
    std::vector<std::string> gen_names_;
    std::vector<Word> relators_;
};

// Parse DSL source. Accepts either a bare presentation
//   < a, t | a^4, t*a*t^-1*a >
// or the .grp file form
//   group K = < a, t | ... >
// Relations u = v become relators u v^-1; [a,b] = a b a^-1 b^-1.
// '#' starts a comment. Throws ParseError.
Presentation parse_presentation(const std::string& text);

std::string render(const Presentation& p);
std::string render(const Word& w, const std::vector<std::string>& gen_names);

// Fox derivative d(rel)/d(gen) in the free group ring:
// d(uv) = du + u.dv, d(g) = 1, d(g^-1) = -g^-1.
FreeRingElem fox_derivative(const Word& rel, int gen);

struct BalanceAccounting {
    int generators;
    int relators;
    int deficiency;      // generators - relators
    bool balanced;       // deficiency == 0
};
BalanceAccounting balance_accounting(const Presentation& p);

// Exponent-sum matrix (relators x generators); abelianized Fox Jacobian.
IntMat exponent_matrix(const Presentation& p);

// Augmented Fox Jacobian: entry (i,j) = eps(d rel_i / d gen_j), reduced mod p
// when characteristic > 0 (entries kept as integers for characteristic 0).
IntMat epsilon_jacobian(const Presentation& p, long long characteristic);

// Nullity of the row space map F^rels -> F^gens of the eps_p Jacobian.
int epsilon_jacobian_kernel_dim(const Presentation& p, long long characteristic);

} // namespace nilbal
