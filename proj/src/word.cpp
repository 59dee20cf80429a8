#include "nilbal/word.hpp"

namespace nilbal {

void Word::append(int gen, long long exp) {
    if (exp == 0) return;
    if (!letters_.empty() && letters_.back().gen == gen) {
        letters_.back().exp += exp;
        if (letters_.back().exp == 0) letters_.pop_back();
        return;
    }
    letters_.push_back({gen, exp});
}

void Word::append(const Word& w) {
    for (auto& l : w.letters_) append(l.gen, l.exp);
}

Word Word::inverse() const {
    Word r;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        r.append(it->gen, -it->exp);
    return r;
}

Word Word::operator*(const Word& o) const {
    Word r = *this;
    r.append(o);
    return r;
}

Word Word::pow(long long e) const {
    if (e == 0) return Word();
    Word base = e > 0 ? *this : inverse();
    long long n = e > 0 ? e : -e;
    if (letters_.size() == 1) {
        Word r;
        r.append(base.letters_[0].gen, base.letters_[0].exp * n);
        return r;
    }
    Word r;
    for (long long i = 0; i < n; ++i) r.append(base);
    return r;
}

long long Word::exponent_sum(int gen) const {
    long long s = 0;
    for (auto& l : letters_)
        if (l.gen == gen) s += l.exp;
    return s;
}

int Word::max_gen() const {
    int m = -1;
    for (auto& l : letters_) m = std::max(m, l.gen);
    return m;
}

void FreeRingElem::add(const Word& w, const Int& c) {
    if (c == 0) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

FreeRingElem FreeRingElem::operator+(const FreeRingElem& o) const {
    FreeRingElem r = *this;
    for (auto& [w, c] : o.terms_) r.add(w, c);
    return r;
}

FreeRingElem FreeRingElem::operator-(const FreeRingElem& o) const {
    FreeRingElem r = *this;
    for (auto& [w, c] : o.terms_) r.add(w, -c);
    return r;
}

FreeRingElem FreeRingElem::operator*(const FreeRingElem& o) const {
    FreeRingElem r;
    for (auto& [w1, c1] : terms_)
        for (auto& [w2, c2] : o.terms_) r.add(w1 * w2, c1 * c2);
    return r;
}

FreeRingElem FreeRingElem::left_mul(const Word& w, const Int& c) const {
    FreeRingElem r;
    for (auto& [t, k] : terms_) r.add(w * t, c * k);
    return r;
}

Int FreeRingElem::augmentation() const {
    Int s = 0;
    for (auto& [w, c] : terms_) s += c;
    return s;
}

} // namespace nilbal
