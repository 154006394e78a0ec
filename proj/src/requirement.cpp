#include "ikl/requirement.hpp"

#include <cctype>
#include <sstream>

#include "ikl/errors.hpp"

namespace ikl {

ExprPtr Expr::make_bit(std::size_t c) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Bit;
    e->bit = c;
    return e;
}

ExprPtr Expr::make_in(std::string symbol) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::In;
    e->symbol = std::move(symbol);
    return e;
}

ExprPtr Expr::make_not(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Not;
    e->lhs = std::move(inner);
    return e;
}

ExprPtr Expr::make_binary(Kind k, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::Bit: return a.bit == b.bit;
    case Expr::Kind::In: return a.symbol == b.symbol;
    case Expr::Kind::Not: return expr_equal(*a.lhs, *b.lhs);
    default: return expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
    }
}

bool Requirement::operator==(const Requirement& o) const {
    return kind == o.kind && bound == o.bound && word == o.word && expr_equal(*body, *o.body);
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    Requirement parse() {
        Requirement r;
        const std::string head = keyword();
        if (head == "always") {
            r.kind = Requirement::Kind::Always;
        } else if (head == "never") {
            r.kind = Requirement::Kind::Never;
        } else if (head == "within") {
            r.kind = Requirement::Kind::Within;
            r.bound = number();
        } else if (head == "after") {
            r.kind = Requirement::Kind::After;
            r.word = quoted_word();
        } else {
            fail("expected always, never, within or after");
        }
        r.body = implication();
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected trailing input");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("requirement syntax error at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    std::string keyword() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::size_t number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a non-negative integer");
        try {
            return std::stoul(s_.substr(start, pos_ - start));
        } catch (const std::out_of_range&) {
            pos_ = start;
            fail("integer out of range");
        }
    }

    std::vector<std::string> quoted_word() {
        expect("\"");
        const std::size_t close = s_.find('"', pos_);
        if (close == std::string::npos) fail("unterminated quoted word");
        std::istringstream in(s_.substr(pos_, close - pos_));
        std::vector<std::string> syms;
        for (std::string sym; in >> sym;) syms.push_back(sym);
        pos_ = close + 1;
        return syms;
    }

    std::string symbol() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '&' || c == '|' ||
                c == '!' || c == '"')
                break;
            if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') break;
            ++pos_;
        }
        if (start == pos_) fail("expected a symbol");
        return s_.substr(start, pos_ - start);
    }

    ExprPtr implication() {
        ExprPtr lhs = disjunction();
        if (accept("->")) return Expr::make_binary(Expr::Kind::Implies, lhs, implication());
        return lhs;
    }

    ExprPtr disjunction() {
        ExprPtr e = conjunction();
        while (accept("|")) e = Expr::make_binary(Expr::Kind::Or, e, conjunction());
        return e;
    }

    ExprPtr conjunction() {
        ExprPtr e = unary();
        while (accept("&")) e = Expr::make_binary(Expr::Kind::And, e, unary());
        return e;
    }

    ExprPtr unary() {
        if (accept("!")) return Expr::make_not(unary());
        if (accept("(")) {
            ExprPtr e = implication();
            expect(")");
            return e;
        }
        skip_ws();
        const std::size_t start = pos_;
        const std::string kw = keyword();
        if (kw == "bit") {
            expect("[");
            const std::size_t c = number();
            expect("]");
            return Expr::make_bit(c);
        }
        if (kw == "in") {
            expect("==");
            return Expr::make_in(symbol());
        }
        pos_ = start;
        fail("expected bit[<c>], in == <symbol>, '!' or '('");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

bool is_binary(const Expr& e) {
    return e.kind == Expr::Kind::And || e.kind == Expr::Kind::Or || e.kind == Expr::Kind::Implies;
}

std::string operand(const Expr& e) {
    return is_binary(e) ? "(" + to_string(e) + ")" : to_string(e);
}

} // namespace

Requirement parse_requirement(const std::string& text) {
    return Parser(text).parse();
}

std::string to_string(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Bit: return "bit[" + std::to_string(e.bit) + "]";
    case Expr::Kind::In: return "in == " + e.symbol;
    case Expr::Kind::Not: return "!" + operand(*e.lhs);
    case Expr::Kind::And: return operand(*e.lhs) + " & " + operand(*e.rhs);
    case Expr::Kind::Or: return operand(*e.lhs) + " | " + operand(*e.rhs);
    case Expr::Kind::Implies: return operand(*e.lhs) + " -> " + operand(*e.rhs);
    }
    throw InternalError("unknown expression kind");
}

std::string to_string(const Requirement& r) {
    switch (r.kind) {
    case Requirement::Kind::Always: return "always " + to_string(*r.body);
    case Requirement::Kind::Never: return "never " + to_string(*r.body);
    case Requirement::Kind::Within: return "within " + std::to_string(r.bound) + " " + to_string(*r.body);
    case Requirement::Kind::After: {
        std::string w;
        for (const auto& s : r.word) w += (w.empty() ? "" : " ") + s;
        return "after \"" + w + "\" " + to_string(*r.body);
    }
    }
    throw InternalError("unknown requirement kind");
}

namespace {

void validate_expr(const Expr& e, const Alphabet& alphabet, std::size_t bits) {
    switch (e.kind) {
    case Expr::Kind::Bit:
        if (e.bit >= bits) {
            throw InputError("requirement uses bit[" + std::to_string(e.bit) + "] but outputs have " +
                             std::to_string(bits) + " bits");
        }
        return;
    case Expr::Kind::In:
        if (!alphabet.find(e.symbol)) throw InputError("requirement uses unknown symbol '" + e.symbol + "'");
        return;
    case Expr::Kind::Not: validate_expr(*e.lhs, alphabet, bits); return;
    default:
        validate_expr(*e.lhs, alphabet, bits);
        validate_expr(*e.rhs, alphabet, bits);
    }
}

} // namespace

void validate_requirement(const Requirement& r, const Alphabet& alphabet, std::size_t bits) {
    validate_expr(*r.body, alphabet, bits);
    for (const auto& s : r.word) {
        if (!alphabet.find(s)) throw InputError("requirement uses unknown symbol '" + s + "'");
    }
}

bool evaluate(const Expr& e, std::span<const std::uint8_t> output, std::optional<Symbol> last, const Alphabet& alphabet) {
    switch (e.kind) {
    case Expr::Kind::Bit: return output[e.bit] != 0;
    case Expr::Kind::In: return last && alphabet[*last] == e.symbol;
    case Expr::Kind::Not: return !evaluate(*e.lhs, output, last, alphabet);
    case Expr::Kind::And: return evaluate(*e.lhs, output, last, alphabet) && evaluate(*e.rhs, output, last, alphabet);
    case Expr::Kind::Or: return evaluate(*e.lhs, output, last, alphabet) || evaluate(*e.rhs, output, last, alphabet);
    case Expr::Kind::Implies:
        return !evaluate(*e.lhs, output, last, alphabet) || evaluate(*e.rhs, output, last, alphabet);
    }
    throw InternalError("unknown expression kind");
}

bool trace_violates(const Requirement& r, const Alphabet& alphabet, const Word& word,
                    const std::vector<BitVector>& outputs) {
    if (outputs.size() != word.size() + 1) throw InternalError("trace needs one output per prefix");
    auto holds = [&](std::size_t i) {
        std::optional<Symbol> last;
        if (i > 0) last = word[i - 1];
        const bool v = evaluate(*r.body, outputs[i].raw(), last, alphabet);
        return r.kind == Requirement::Kind::Never ? !v : v;
    };
    switch (r.kind) {
    case Requirement::Kind::Always:
    case Requirement::Kind::Never:
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            if (!holds(i)) return true;
        }
        return false;
    case Requirement::Kind::Within:
        if (word.size() < r.bound) return false;
        for (std::size_t i = 0; i <= r.bound; ++i) {
            if (holds(i)) return false;
        }
        return true;
    case Requirement::Kind::After: {
        if (word.size() < r.word.size()) return false;
        for (std::size_t i = 0; i < r.word.size(); ++i) {
            if (alphabet[word[i]] != r.word[i]) return false;
        }
        return !holds(r.word.size());
    }
    }
    throw InternalError("unknown requirement kind");
}

} // namespace ikl
