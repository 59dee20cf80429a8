#pragma once

// Freely reduced words in a free group and finitely supported integer
// combinations of them (the free group ring).

#include "nilbal/intmat.hpp"

#include <map>
#include <string>
#include <vector>

namespace nilbal {

// A word is a sequence of letters (generator index, nonzero exponent) with
// adjacent letters on distinct generators. Reduction happens eagerly.
class Word {
public:
    struct Letter {
        int gen;
        long long exp;
        bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
        auto operator<=>(const Letter& o) const = default;
    };

    Word() = default;
    Word(std::initializer_list<Letter> ls) {
        for (auto& l : ls) append(l.gen, l.exp);
    }

    static Word generator(int g, long long e = 1) {
        Word w;
        w.append(g, e);
        return w;
    }

    void append(int gen, long long exp);       // multiply by gen^exp on the right
    void append(const Word& w);
    Word inverse() const;
    Word operator*(const Word& o) const;
    Word pow(long long e) const;

    bool empty() const { return letters_.empty(); }
    size_t size() const { return letters_.size(); }
    const std::vector<Letter>& letters() const { return letters_; }

    long long exponent_sum(int gen) const;
    int max_gen() const;                       // largest generator index, -1 if empty

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    auto operator<=>(const Word& o) const { return letters_ <=> o.letters_; }

private:
    std::vector<Letter> letters_;
};

// Finitely supported map Word -> Z; no zero coefficients are stored.
class FreeRingElem {
public:
    FreeRingElem() = default;
    static FreeRingElem one() { return FreeRingElem(Word(), 1); }
    FreeRingElem(const Word& w, Int c) {
        if (c != 0) terms_[w] = std::move(c);
    }

    void add(const Word& w, const Int& c);
    FreeRingElem operator+(const FreeRingElem& o) const;
    FreeRingElem operator-(const FreeRingElem& o) const;
    FreeRingElem operator*(const FreeRingElem& o) const;
    FreeRingElem left_mul(const Word& w, const Int& c = 1) const;  // c*w * this

    bool is_zero() const { return terms_.empty(); }
    const std::map<Word, Int>& terms() const { return terms_; }

    Int augmentation() const;                  // sum of coefficients

    bool operator==(const FreeRingElem& o) const { return terms_ == o.terms_; }

private:
    std::map<Word, Int> terms_;
};

} // namespace nilbal
