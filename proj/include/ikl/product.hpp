#pragma once

#include <vector>

#include "ikl/fid_learner.hpp"
#include "ikl/kripke.hpp"

namespace ikl {

/// Reachable part of the direct product of 1-bit factors: a k-bit structure
/// whose state tuples are discovered breadth-first from the initial tuple in
/// symbol order (state 0 is the initial tuple). Bit i of a product state is
/// the output of factor i. Runs in O(k * m * |alphabet|) for m reachable
/// tuples.
///
/// Any factors are accepted; only minimal factors guarantee that each
/// projection of the result maps onto its factor surjectively.
KripkeStructure subdirect_product(const std::vector<KripkeStructure>& factors);

/// Convenience overload for a learned family.
KripkeStructure subdirect_product(const DfaFamily& family);

/// Same result as subdirect_product, plus the factor tuple of every state.
struct ProductWithTuples {
    KripkeStructure product;
    std::vector<std::vector<StateId>> tuples;
};
ProductWithTuples subdirect_product_with_tuples(const std::vector<KripkeStructure>& factors);

} // namespace ikl
