#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ikl/kripke.hpp"

namespace ikl {

/// Boolean state formula over output bits and the last input symbol.
struct Expr {
    enum class Kind { Bit, In, Not, And, Or, Implies };

    Kind kind;
    std::size_t bit = 0;          // Bit
    std::string symbol;           // In
    std::shared_ptr<const Expr> lhs;  // Not uses lhs only
    std::shared_ptr<const Expr> rhs;

    static std::shared_ptr<const Expr> make_bit(std::size_t c);
    static std::shared_ptr<const Expr> make_in(std::string symbol);
    static std::shared_ptr<const Expr> make_not(std::shared_ptr<const Expr> e);
    static std::shared_ptr<const Expr> make_binary(Kind k, std::shared_ptr<const Expr> l, std::shared_ptr<const Expr> r);
};

using ExprPtr = std::shared_ptr<const Expr>;

bool expr_equal(const Expr& a, const Expr& b);

struct Requirement {
    enum class Kind { Always, Never, Within, After };

    Kind kind;
    ExprPtr body;
    std::size_t bound = 0;          // Within
    std::vector<std::string> word;  // After, as symbol names

    bool operator==(const Requirement& o) const;
};

/// Grammar:
///   req  := "always" expr | "never" expr | "within" <k> expr | "after" '"' sym* '"' expr
///   expr := imp ; imp := or ("->" imp)? ; or := and ("|" and)* ; and := un ("&" un)*
///   un   := "!" un | "(" expr ")" | "bit[" <c> "]" | "in" "==" sym
/// Throws InputError with the 1-based column of the offending token.
Requirement parse_requirement(const std::string& text);

/// Inverse of parse_requirement up to whitespace and redundant parentheses.
std::string to_string(const Requirement& r);
std::string to_string(const Expr& e);

/// Throws InputError if a bit index is outside `bits` or a symbol is not in
/// the alphabet.
void validate_requirement(const Requirement& r, const Alphabet& alphabet, std::size_t bits);

/// `last` is the symbol that led to the current state, or nullopt at the
/// start of a run (where every `in == s` atom is false).
bool evaluate(const Expr& e, std::span<const std::uint8_t> output, std::optional<Symbol> last, const Alphabet& alphabet);

/// Whether one observed run violates r. `outputs[i]` is the output after the
/// first i symbols of `word`, so outputs.size() == word.size() + 1.
bool trace_violates(const Requirement& r, const Alphabet& alphabet, const Word& word,
                    const std::vector<BitVector>& outputs);

} // namespace ikl
