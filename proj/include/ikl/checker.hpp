#pragma once

#include <string>
#include <variant>

#include "ikl/kripke.hpp"
#include "ikl/requirement.hpp"

namespace ikl {

struct Pass {
    bool operator==(const Pass&) const = default;
};

struct Counterexample {
    Word word;
    /// The sub-formula found false, unparsed.
    std::string reason;
    bool operator==(const Counterexample&) const = default;
};

using Verdict = std::variant<Pass, Counterexample>;

/// Checks r on h. Counterexamples are shortest, then lexicographically
/// least. `within k p` is read over every run: it fails when some length-k
/// input drives h through k+1 states none of which satisfies p. Throws
/// InputError if r does not fit h's alphabet or width.
Verdict check(const KripkeStructure& h, const Requirement& r);

/// Outputs of h along w, one per prefix (ε first).
std::vector<BitVector> run_outputs(const KripkeStructure& h, const Word& w);

} // namespace ikl
