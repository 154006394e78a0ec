#pragma once

#include <map>
#include <set>
#include <vector>

#include "ikl/kripke.hpp"
#include "ikl/teacher.hpp"

namespace ikl {

/// A state name in the learner tables: the distinguished dead state or an
/// input word.
class StateName {
public:
    static StateName dead() { return StateName{}; }
    static StateName word(Word w) { return StateName{std::move(w)}; }

    bool is_dead() const noexcept { return dead_; }
    /// Only meaningful for word names.
    const Word& as_word() const noexcept { return word_; }

    bool operator==(const StateName&) const = default;

private:
    StateName() = default;
    explicit StateName(Word w) : dead_(false), word_(std::move(w)) {}

    bool dead_ = true;
    Word word_;
};

/// Concatenation modulo the dead state: f(dead, s) = dead, f(w, s) = w.s
StateName f_concat(const StateName& name, Symbol s);

/// A set of indices into the distinguishing-string list, ascending.
using ClassSet = std::vector<std::size_t>;

struct IdTables {
    std::size_t alphabet_size = 0;
    std::set<Word, ShortLex> prefixes;      // P
    std::set<Word, ShortLex> names;         // T = P plus one-symbol extensions
    std::vector<Word> distinguishing;       // V, v_0 = epsilon
    std::map<Word, ClassSet, ShortLex> classes;  // E on T; E(dead) is empty

    const ClassSet& class_of(const StateName& name) const;
};

struct IdResult {
    Dfa dfa;
    IdTables tables;
};

/// Angluin's ID algorithm against a 1-bit teacher. `prefixes` must contain
/// epsilon; the result is the canonical minimal DFA when it is live complete
/// for the target. Violations and distinguishing suffixes are chosen
/// shortlex-least, with the dead name ordered after every word.
IdResult id_learn(Teacher& teacher, const std::set<Word>& prefixes);

/// Quotient DFA of terminated tables. State 0 is the class of epsilon; states
/// are numbered in order of first appearance over T in shortlex order.
/// A class seen only on the frontier T - P is sent to the empty class on
/// every symbol, so the result is always total.
Dfa quotient_synthesize(const IdTables& tables, const Alphabet& alphabet);

} // namespace ikl
