#include "nilbal/presentation.hpp"

#include "nilbal/errors.hpp"
#include "nilbal/modp.hpp"

#include <cctype>
#include <sstream>

namespace nilbal {

Presentation::Presentation(std::vector<std::string> gens, std::vector<Word> rels)
    : gen_names_(std::move(gens)), relators_(std::move(rels)) {
    for (size_t i = 0; i < gen_names_.size(); ++i)
        for (size_t j = i + 1; j < gen_names_.size(); ++j)
            if (gen_names_[i] == gen_names_[j])
                throw ParameterInvalid("duplicate generator name: " + gen_names_[i]);
    for (auto& r : relators_)
        if (r.max_gen() >= int(gen_names_.size()))
            throw ParameterInvalid("relator uses generator index out of range");
}

int Presentation::gen_index(const std::string& name) const {
    for (size_t i = 0; i < gen_names_.size(); ++i)
        if (gen_names_[i] == name) return int(i);
    return -1;
}

namespace {

struct Token {
    enum Kind { Ident, Number, Sym, End } kind;
    std::string text;
    long long value = 0;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        // skip whitespace and comments
        for (;;) {
            while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) bump();
            if (pos_ < s_.size() && s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') bump();
                continue;
            }
            break;
        }
        tok_.line = line_; tok_.col = col_;
        if (pos_ >= s_.size()) { tok_.kind = Token::End; tok_.text = "<end>"; return; }
        char c = s_[pos_];
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::string id;
            while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) {
                id += s_[pos_];
                bump();
            }
            tok_.kind = Token::Ident; tok_.text = id;
            return;
        }
        if (std::isdigit((unsigned char)c) || (c == '-' && pos_ + 1 < s_.size() && std::isdigit((unsigned char)s_[pos_ + 1]))) {
            std::string num;
            if (c == '-') { num += c; bump(); }
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
                num += s_[pos_];
                bump();
            }
            tok_.kind = Token::Number; tok_.text = num; tok_.value = std::stoll(num);
            return;
        }
        tok_.kind = Token::Sym; tok_.text = std::string(1, c);
        bump();
    }
    void bump() {
        if (s_[pos_] == '\n') { ++line_; col_ = 1; } else ++col_;
        ++pos_;
    }
    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Presentation run() {
        std::string name;
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "group") {
            lex_.next();
            Token n = expect(Token::Ident, "group name");
            name = n.text;
            expect_sym("=");
        }
        expect_sym("<");
        // generators
        if (is_sym("|"))
            fail("empty generator list");
        for (;;) {
            Token g = expect(Token::Ident, "generator name");
            gens_.push_back(g.text);
            if (is_sym(",")) { lex_.next(); continue; }
            break;
        }
        for (size_t i = 0; i < gens_.size(); ++i)
            for (size_t j = i + 1; j < gens_.size(); ++j)
                if (gens_[i] == gens_[j]) fail("duplicate generator name " + gens_[i]);
        expect_sym("|");
        // relators (possibly none)
        std::vector<Word> rels;
        if (!is_sym(">")) {
            for (;;) {
                rels.push_back(relation());
                if (is_sym(",")) { lex_.next(); continue; }
                break;
            }
        }
        expect_sym(">");
        if (lex_.peek().kind != Token::End) fail("trailing input after '>'");
        Presentation p(gens_, rels);
        p.set_name(name);
        return p;
    }

private:
    Word relation() {
        Word lhs = expr();
        if (is_sym("=")) {
            lex_.next();
            Word rhs = expr();
            return lhs * rhs.inverse();
        }
        return lhs;
    }

    Word expr() {
        Word w = term();
        for (;;) {
            if (is_sym("*")) { lex_.next(); w.append(term()); continue; }
            // juxtaposition: another factor begins
            const Token& t = lex_.peek();
            if (t.kind == Token::Ident || (t.kind == Token::Sym && (t.text == "(" || t.text == "["))) {
                w.append(term());
                continue;
            }
            break;
        }
        return w;
    }

    Word term() {
        Word f = factor();
        if (is_sym("^")) {
            lex_.next();
            Token e = expect(Token::Number, "integer exponent");
            return f.pow(e.value);
        }
        return f;
    }

    Word factor() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Ident) {
            Token id = lex_.next();
            int g = -1;
            for (size_t i = 0; i < gens_.size(); ++i)
                if (gens_[i] == id.text) { g = int(i); break; }
            if (g < 0) fail("unknown generator '" + id.text + "'", id);
            return Word::generator(g);
        }
        if (is_sym("(")) {
            lex_.next();
            Word w = expr();
            expect_sym(")");
            return w;
        }
        if (is_sym("[")) {
            lex_.next();
            Word u = expr();
            expect_sym(",");
            Word v = expr();
            expect_sym("]");
            return u * v * u.inverse() * v.inverse();
        }
        fail("expected a generator, '(' or '['");
        return Word();
    }

    bool is_sym(const char* s) const {
        return lex_.peek().kind == Token::Sym && lex_.peek().text == s;
    }
    Token expect(Token::Kind k, const std::string& what) {
        if (lex_.peek().kind != k) fail("expected " + what);
        return lex_.next();
    }
    void expect_sym(const char* s) {
        if (!is_sym(s)) fail(std::string("expected '") + s + "'");
        lex_.next();
    }
    [[noreturn]] void fail(const std::string& msg) { fail(msg, lex_.peek()); }
    [[noreturn]] void fail(const std::string& msg, const Token& at) {
        throw ParseError(at.line, at.col, msg + " (got '" + at.text + "')");
    }

    Lexer lex_;
    std::vector<std::string> gens_;
};

} // namespace

Presentation parse_presentation(const std::string& text) {
    return Parser(text).run();
}

std::string render(const Word& w, const std::vector<std::string>& gen_names) {
    if (w.empty())   // identity relator; reparses to the empty word
        return gen_names.empty() ? std::string()
                                 : gen_names[0] + "*" + gen_names[0] + "^-1";
    std::ostringstream os;
    bool first = true;
    for (auto& l : w.letters()) {
        if (!first) os << "*";
        os << gen_names[l.gen];
        if (l.exp != 1) os << "^" << l.exp;
        first = false;
    }
    return os.str();
}

std::string render(const Presentation& p) {
    std::ostringstream os;
    if (!p.name().empty()) os << "group " << p.name() << " = ";
    os << "< ";
    for (int i = 0; i < p.ngens(); ++i)
        os << p.generator_names()[i] << (i + 1 < p.ngens() ? ", " : " ");
    os << "|";
    for (int i = 0; i < p.nrels(); ++i)
        os << (i ? ", " : " ") << render(p.relators()[i], p.generator_names());
    os << " >";
    return os.str();
}

FreeRingElem fox_derivative(const Word& rel, int gen) {
    FreeRingElem d;
    Word prefix;
    for (auto& l : rel.letters()) {
        if (l.gen == gen) {
            // d(g^e): e>0 -> 1 + g + ... + g^{e-1}; e<0 -> -(g^-1 + ... + g^e)
            if (l.exp > 0) {
                for (long long i = 0; i < l.exp; ++i)
                    d.add(prefix * Word::generator(gen, i), 1);
            } else {
                for (long long i = -1; i >= l.exp; --i)
                    d.add(prefix * Word::generator(gen, i), -1);
            }
        }
        prefix.append(l.gen, l.exp);
    }
    return d;
}

BalanceAccounting balance_accounting(const Presentation& p) {
    BalanceAccounting b;
    b.generators = p.ngens();
    b.relators = p.nrels();
    b.deficiency = b.generators - b.relators;
    b.balanced = b.deficiency == 0;
    return b;
}

IntMat exponent_matrix(const Presentation& p) {
    IntMat m(p.nrels(), p.ngens());
    for (int i = 0; i < p.nrels(); ++i)
        for (int j = 0; j < p.ngens(); ++j)
            m(i, j) = p.relators()[i].exponent_sum(j);
    return m;
}

IntMat epsilon_jacobian(const Presentation& p, long long characteristic) {
    IntMat m = exponent_matrix(p);    // eps(d r/d g) = exponent sum of g in r
    if (characteristic > 0) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                Int v = m(i, j) % characteristic;
                if (v < 0) v += characteristic;
                m(i, j) = v;
            }
    }
    return m;
}

int epsilon_jacobian_kernel_dim(const Presentation& p, long long characteristic) {
    IntMat m = epsilon_jacobian(p, characteristic);
    if (characteristic == 0) return p.nrels() - rank_z(m);
    ModpMat mp(int(characteristic), m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            mp(i, j) = uint32_t(m(i, j) % characteristic);
    return p.nrels() - rank(mp);
}

} // namespace nilbal
