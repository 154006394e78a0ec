#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ikl {

using StateId = std::uint32_t;
using Symbol = std::uint32_t;

/// An input string: symbol indices into an Alphabet. Empty is epsilon.
using Word = std::vector<Symbol>;

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

/// Shorter words first, then lexicographic by symbol index.
struct ShortLex {
    bool operator()(const Word& a, const Word& b) const noexcept;
};

Word concat(const Word& a, const Word& b);

/// Ordered set of distinct symbol tokens. Symbol order fixes every
/// iteration order in the library.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& operator[](Symbol s) const { return symbols_.at(s); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    std::optional<Symbol> find(std::string_view token) const;
    Symbol index_of(std::string_view token) const;

    /// Throws InputError if any index is out of range.
    void validate(const Word& w) const;

    /// Whitespace-separated tokens; empty text is epsilon.
    Word parse_word(std::string_view text) const;
    std::string format_word(const Word& w) const;

    /// Comma-separated token list, e.g. "a,b,c".
    static Alphabet from_csv(std::string_view text);

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> symbols_;
};

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t width, bool value = false) : bits_(width, value ? 1 : 0) {}

    /// Parses a string of '0'/'1'. Throws InputError on anything else.
    static BitVector from_string(std::string_view text);

    std::size_t width() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_.at(i) != 0; }
    void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }
    std::string to_string() const;
    std::span<const std::uint8_t> raw() const noexcept { return bits_; }

    bool operator==(const BitVector&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Deterministic k-bit Kripke structure: a total transition function over
/// dense state ids and a k-bit output label on every state. Immutable.
class KripkeStructure {
public:
    /// `transitions` is row-major: entry q * |alphabet| + s is delta(q, s).
    /// `labels` is row-major: entry q * bits + c is bit c of lambda(q).
    KripkeStructure(Alphabet alphabet, std::size_t bits, StateId initial,
                    std::vector<StateId> transitions, std::vector<std::uint8_t> labels);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t num_states() const noexcept { return num_states_; }
    std::size_t bits() const noexcept { return bits_; }
    StateId initial() const noexcept { return initial_; }

    StateId next(StateId q, Symbol s) const { return transitions_[q * alphabet_.size() + s]; }
    std::span<const StateId> successors(StateId q) const {
        return {transitions_.data() + q * alphabet_.size(), alphabet_.size()};
    }
    /// Bit c (0-based) of lambda(q).
    bool label(StateId q, std::size_t c) const { return labels_[q * bits_ + c] != 0; }
    std::span<const std::uint8_t> label_row(StateId q) const {
        return {labels_.data() + q * bits_, bits_};
    }
    BitVector output(StateId q) const;

    StateId delta_star(StateId q, const Word& w) const;
    /// lambda(delta*(q0, w)); for epsilon this is lambda(q0).
    BitVector lambda_star(const Word& w) const;

    const std::vector<StateId>& transitions() const noexcept { return transitions_; }
    const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

    bool operator==(const KripkeStructure&) const = default;

private:
    Alphabet alphabet_;
    std::size_t num_states_ = 0;
    std::size_t bits_ = 0;
    StateId initial_ = 0;
    std::vector<StateId> transitions_;
    std::vector<std::uint8_t> labels_;
};

/// 1-bit view of a Kripke structure with accepting set {q : lambda(q) = 1}.
class Dfa {
public:
    explicit Dfa(KripkeStructure structure);

    const KripkeStructure& kripke() const noexcept { return structure_; }
    std::size_t num_states() const noexcept { return structure_.num_states(); }
    StateId initial() const noexcept { return structure_.initial(); }
    StateId next(StateId q, Symbol s) const { return structure_.next(q, s); }
    bool accepting(StateId q) const { return structure_.label(q, 0); }
    bool accepts(const Word& w) const { return accepting(structure_.delta_star(structure_.initial(), w)); }

    bool operator==(const Dfa&) const = default;

private:
    KripkeStructure structure_;
};

/// The i-th projection, i in 1..k.
KripkeStructure project(const KripkeStructure& a, std::size_t i);

class EquivalenceResult {
public:
    static EquivalenceResult equal() { return EquivalenceResult{}; }
    static EquivalenceResult witness(Word w) { return EquivalenceResult{std::move(w)}; }

    bool is_equal() const noexcept { return !witness_.has_value(); }
    explicit operator bool() const noexcept { return is_equal(); }
    /// Only meaningful when !is_equal().
    const Word& witness() const { return witness_.value(); }

private:
    EquivalenceResult() = default;
    explicit EquivalenceResult(Word w) : witness_(std::move(w)) {}
    std::optional<Word> witness_;
};

/// Exact check by breadth-first search of the synchronous pair graph. A
/// witness is the shortest, lexicographically least distinguishing word.
EquivalenceResult behaviourally_equivalent(const KripkeStructure& a, const KripkeStructure& b);

std::set<Word> prefix_closure(const std::set<Word>& words);

/// States reachable from the initial state, ascending.
std::vector<StateId> reachable_states(const KripkeStructure& a);

/// Drops unreachable states; surviving states keep their relative order, so
/// a fully reachable input is returned unchanged.
KripkeStructure restrict_to_reachable(const KripkeStructure& a);

/// Shortest lexicographically least access word for every reachable state
/// (nullopt for unreachable ones).
std::vector<std::optional<Word>> access_words(const KripkeStructure& a);

/// True iff the reachable parts are isomorphic via a bijection fixing the
/// initial states and both structures have no unreachable states.
bool isomorphic(const KripkeStructure& a, const KripkeStructure& b);

/// Random structure with all n states reachable. Deterministic in seed.
KripkeStructure random_kripke(std::uint64_t seed, std::size_t n, std::size_t bits, const Alphabet& alphabet);

} // namespace ikl
