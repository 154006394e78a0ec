#pragma once
// Small hand-built structures shared by the unit tests.

#include <string>
#include <vector>

#include "ikl/kripke.hpp"

namespace fx {

using ikl::Alphabet;
using ikl::KripkeStructure;
using ikl::StateId;
using ikl::Word;

inline Alphabet ab() { return Alphabet({"a", "b"}); }

/// delta(q, a) = 1 - q, delta(q, b) = q, lambda(q) = q.
inline KripkeStructure parity() {
    return KripkeStructure(ab(), 1, 0, {1, 0, 0, 1}, {0, 1});
}

/// Counts a's mod 4 and outputs the count mod 2.
inline KripkeStructure mod4_parity() {
    return KripkeStructure(ab(), 1, 0, {1, 0, 2, 1, 3, 2, 0, 3}, {0, 1, 0, 1});
}

inline KripkeStructure constant(const Alphabet& alpha, std::vector<std::uint8_t> row) {
    const std::size_t k = row.size();
    return KripkeStructure(alpha, k, 0, std::vector<StateId>(alpha.size(), 0), std::move(row));
}

/// Over {a}: q0 -> q1 -> q2 -> q1, lambda = 0, 1, 1.
inline KripkeStructure chain() {
    return KripkeStructure(Alphabet({"a"}), 1, 0, {1, 2, 1}, {0, 1, 1});
}

/// 1-bit DFA accepting the words over {a, b} that end in "ab".
inline KripkeStructure ends_ab() {
    // 0: no progress, 1: saw a, 2: saw ab
    return KripkeStructure(ab(), 1, 0, {1, 0, 1, 2, 1, 0}, {0, 0, 1});
}

/// Counter mod m over a single symbol; only state `accepting` outputs 1.
inline KripkeStructure counter(std::size_t m, std::size_t accepting) {
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    for (std::size_t q = 0; q < m; ++q) {
        trans.push_back(static_cast<StateId>((q + 1) % m));
        labels.push_back(q == accepting ? 1 : 0);
    }
    return KripkeStructure(Alphabet({"a"}), 1, 0, trans, labels);
}

inline Word w(const Alphabet& alpha, const std::string& text) { return alpha.parse_word(text); }

} // namespace fx
