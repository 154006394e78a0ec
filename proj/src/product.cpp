#include "ikl/product.hpp"

#include <algorithm>
#include <unordered_set>

#include "ikl/errors.hpp"

namespace ikl {
namespace {

struct FlatProduct {
    KripkeStructure product;
    std::vector<StateId> flat;  // k entries per product state
};

// Tuples live in one flat array; the hash set stores state ids and hashes
// the tuple they index. The candidate tuple is staged at the end of the
// array so lookups need no separate key.
FlatProduct build(const std::vector<KripkeStructure>& factors) {
    if (factors.empty()) throw InputError("product needs at least one factor");
    const Alphabet& alphabet = factors.front().alphabet();
    for (const auto& f : factors) {
        if (!(f.alphabet() == alphabet)) throw InputError("product factors must share one alphabet");
        if (f.bits() != 1) throw InputError("product factors must be 1-bit structures");
    }
    const std::size_t k = factors.size();
    const std::size_t sigma = alphabet.size();

    std::vector<StateId> flat;
    auto tuple = [&](StateId id) { return flat.data() + std::size_t{id} * k; };
    auto hash = [&](StateId id) {
        std::uint64_t h = 0x84222325cbf29ce4ull;
        const StateId* t = tuple(id);
        for (std::size_t i = 0; i < k; ++i) h ^= t[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    };
    auto eq = [&](StateId x, StateId y) { return std::equal(tuple(x), tuple(x) + k, tuple(y)); };
    std::unordered_set<StateId, decltype(hash), decltype(eq)> ids(64, hash, eq);

    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    for (std::size_t i = 0; i < k; ++i) flat.push_back(factors[i].initial());
    ids.insert(0);

    // Product states double as the BFS queue.
    for (StateId head = 0; std::size_t{head} * k < flat.size(); ++head) {
        for (std::size_t i = 0; i < k; ++i) labels.push_back(factors[i].label(tuple(head)[i], 0));
        for (Symbol s = 0; s < sigma; ++s) {
            const StateId candidate = static_cast<StateId>(flat.size() / k);
            for (std::size_t i = 0; i < k; ++i) flat.push_back(factors[i].next(flat[std::size_t{head} * k + i], s));
            auto [it, fresh] = ids.insert(candidate);
            if (!fresh) flat.resize(flat.size() - k);
            trans.push_back(*it);
        }
    }
    return FlatProduct{KripkeStructure(alphabet, k, 0, std::move(trans), std::move(labels)), std::move(flat)};
}

} // namespace

ProductWithTuples subdirect_product_with_tuples(const std::vector<KripkeStructure>& factors) {
    FlatProduct p = build(factors);
    const std::size_t k = factors.size();
    std::vector<std::vector<StateId>> tuples;
    for (std::size_t i = 0; i < p.flat.size(); i += k) tuples.emplace_back(p.flat.begin() + static_cast<std::ptrdiff_t>(i), p.flat.begin() + static_cast<std::ptrdiff_t>(i + k));
    return ProductWithTuples{std::move(p.product), std::move(tuples)};
}

KripkeStructure subdirect_product(const std::vector<KripkeStructure>& factors) {
    return build(factors).product;
}

KripkeStructure subdirect_product(const DfaFamily& family) {
    std::vector<KripkeStructure> factors;
    factors.reserve(family.size());
    for (const auto& d : family) factors.push_back(d.kripke());
    return subdirect_product(factors);
}

} // namespace ikl
