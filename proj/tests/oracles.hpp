#pragma once
// Brute-force reference implementations used only by the tests. Nothing here
// calls the library's algorithms; only its data types.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ikl/kripke.hpp"

namespace oracle {

using ikl::Alphabet;
using ikl::KripkeStructure;
using ikl::StateId;
using ikl::Symbol;
using ikl::Word;

inline Alphabet letters(std::size_t n) {
    std::vector<std::string> syms;
    for (std::size_t i = 0; i < n; ++i) syms.push_back(std::string(1, static_cast<char>('a' + i)));
    return Alphabet(syms);
}

/// Every word of length <= maxlen in shortlex order.
inline std::vector<Word> words_up_to(std::size_t sigma, std::size_t maxlen) {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= maxlen; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (Symbol s = 0; s < sigma; ++s) {
                Word w = out[i];
                w.push_back(s);
                out.push_back(std::move(w));
            }
        }
        begin = end;
    }
    return out;
}

inline std::vector<std::uint8_t> out_at(const KripkeStructure& a, const Word& w) {
    StateId q = a.initial();
    for (Symbol s : w) q = a.next(q, s);
    auto row = a.label_row(q);
    return {row.begin(), row.end()};
}

/// Exhaustive comparison on all words up to maxlen.
inline bool agree_up_to(const KripkeStructure& a, const KripkeStructure& b, std::size_t maxlen) {
    for (const Word& w : words_up_to(a.alphabet().size(), maxlen)) {
        if (out_at(a, w) != out_at(b, w)) return false;
    }
    return true;
}

/// Pair-graph reachability with a std::set, depth-first.
inline bool equivalent(const KripkeStructure& a, const KripkeStructure& b) {
    std::set<std::pair<StateId, StateId>> seen;
    std::vector<std::pair<StateId, StateId>> stack{{a.initial(), b.initial()}};
    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        if (!seen.insert({p, q}).second) continue;
        auto rp = a.label_row(p);
        auto rq = b.label_row(q);
        if (!std::equal(rp.begin(), rp.end(), rq.begin(), rq.end())) return false;
        for (Symbol s = 0; s < a.alphabet().size(); ++s) stack.push_back({a.next(p, s), b.next(q, s)});
    }
    return true;
}

/// Reachable part renumbered in symbol-ordered BFS discovery order. Two
/// deterministic structures are isomorphic on their reachable parts iff
/// their canonical forms are equal.
inline KripkeStructure canonical(const KripkeStructure& a) {
    const std::size_t sigma = a.alphabet().size();
    std::vector<long> id(a.num_states(), -1);
    std::vector<StateId> order{a.initial()};
    id[a.initial()] = 0;
    for (std::size_t h = 0; h < order.size(); ++h) {
        for (Symbol s = 0; s < sigma; ++s) {
            StateId r = a.next(order[h], s);
            if (id[r] < 0) {
                id[r] = static_cast<long>(order.size());
                order.push_back(r);
            }
        }
    }
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    for (StateId q : order) {
        for (Symbol s = 0; s < sigma; ++s) trans.push_back(static_cast<StateId>(id[a.next(q, s)]));
        auto row = a.label_row(q);
        labels.insert(labels.end(), row.begin(), row.end());
    }
    return KripkeStructure(a.alphabet(), a.bits(), 0, trans, labels);
}

inline bool isomorphic(const KripkeStructure& a, const KripkeStructure& b) {
    return a.num_states() == b.num_states() && canonical(a) == canonical(b);
}

/// Moore-style signature refinement; returns a class id per state.
inline std::vector<std::uint32_t> moore_classes(const KripkeStructure& a) {
    const std::size_t n = a.num_states();
    const std::size_t sigma = a.alphabet().size();
    std::vector<std::uint32_t> cls(n);
    {
        std::map<std::vector<std::uint8_t>, std::uint32_t> ids;
        for (StateId q = 0; q < n; ++q) {
            auto row = a.label_row(q);
            cls[q] = ids.emplace(std::vector<std::uint8_t>(row.begin(), row.end()), ids.size()).first->second;
        }
    }
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n);
        for (StateId q = 0; q < n; ++q) {
            std::vector<std::uint32_t> sig{cls[q]};
            for (Symbol s = 0; s < sigma; ++s) sig.push_back(cls[a.next(q, s)]);
            next[q] = ids.emplace(sig, ids.size()).first->second;
        }
        const std::size_t before = std::set<std::uint32_t>(cls.begin(), cls.end()).size();
        cls = next;
        if (ids.size() == before) return cls;
    }
}

/// The minimal structure equivalent to a, in canonical numbering.
inline KripkeStructure minimal(const KripkeStructure& a) {
    const KripkeStructure r = canonical(a);
    const auto cls = moore_classes(r);
    const std::size_t blocks = std::set<std::uint32_t>(cls.begin(), cls.end()).size();
    const std::size_t sigma = r.alphabet().size();
    std::vector<StateId> trans(blocks * sigma);
    std::vector<std::uint8_t> labels(blocks * r.bits());
    for (StateId q = 0; q < r.num_states(); ++q) {
        for (Symbol s = 0; s < sigma; ++s) trans[cls[q] * sigma + s] = cls[r.next(q, s)];
        for (std::size_t c = 0; c < r.bits(); ++c) labels[cls[q] * r.bits() + c] = r.label(q, c);
    }
    return canonical(KripkeStructure(r.alphabet(), r.bits(), cls[r.initial()], trans, labels));
}

inline KripkeStructure projection(const KripkeStructure& a, std::size_t c) {
    std::vector<std::uint8_t> labels;
    for (StateId q = 0; q < a.num_states(); ++q) labels.push_back(a.label(q, c));
    return KripkeStructure(a.alphabet(), 1, a.initial(), a.transitions(), labels);
}

/// Shortest lexicographically least access word per state (nullopt if
/// unreachable).
inline std::vector<std::optional<Word>> access(const KripkeStructure& a) {
    std::vector<std::optional<Word>> acc(a.num_states());
    std::deque<StateId> queue{a.initial()};
    acc[a.initial()] = Word{};
    while (!queue.empty()) {
        const StateId q = queue.front();
        queue.pop_front();
        for (Symbol s = 0; s < a.alphabet().size(); ++s) {
            const StateId r = a.next(q, s);
            if (acc[r]) continue;
            Word w = *acc[q];
            w.push_back(s);
            acc[r] = w;
            queue.push_back(r);
        }
    }
    return acc;
}

/// States of a 1-bit structure from which an accepting state is reachable.
inline std::vector<bool> live_states(const KripkeStructure& a) {
    const std::size_t n = a.num_states();
    std::vector<bool> live(n, false);
    for (StateId q = 0; q < n; ++q) live[q] = a.label(q, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId q = 0; q < n; ++q) {
            if (live[q]) continue;
            for (Symbol s = 0; s < a.alphabet().size(); ++s) {
                if (live[a.next(q, s)]) {
                    live[q] = changed = true;
                    break;
                }
            }
        }
    }
    return live;
}

/// Access words of every reachable live state, plus epsilon. Prefix-closed
/// because BFS access words are.
inline std::set<Word> live_complete(const KripkeStructure& one_bit) {
    const auto acc = access(one_bit);
    const auto live = live_states(one_bit);
    std::set<Word> out{Word{}};
    for (StateId q = 0; q < one_bit.num_states(); ++q) {
        if (acc[q] && live[q]) out.insert(*acc[q]);
    }
    return out;
}

/// Full direct product over all tuples (mixed radix, factor 0 least
/// significant), reachable or not.
inline KripkeStructure full_product(const std::vector<KripkeStructure>& f) {
    const std::size_t k = f.size();
    const std::size_t sigma = f[0].alphabet().size();
    std::size_t total = 1;
    for (const auto& x : f) total *= x.num_states();
    auto decode = [&](std::size_t idx) {
        std::vector<StateId> t(k);
        for (std::size_t i = 0; i < k; ++i) {
            t[i] = static_cast<StateId>(idx % f[i].num_states());
            idx /= f[i].num_states();
        }
        return t;
    };
    auto encode = [&](const std::vector<StateId>& t) {
        std::size_t idx = 0;
        for (std::size_t i = k; i-- > 0;) idx = idx * f[i].num_states() + t[i];
        return idx;
    };
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto t = decode(idx);
        for (std::size_t i = 0; i < k; ++i) labels.push_back(f[i].label(t[i], 0));
        for (Symbol s = 0; s < sigma; ++s) {
            std::vector<StateId> u(k);
            for (std::size_t i = 0; i < k; ++i) u[i] = f[i].next(t[i], s);
            trans.push_back(static_cast<StateId>(encode(u)));
        }
    }
    std::vector<StateId> init(k);
    for (std::size_t i = 0; i < k; ++i) init[i] = f[i].initial();
    return KripkeStructure(f[0].alphabet(), k, static_cast<StateId>(encode(init)), trans, labels);
}

/// A structure of n states that folds onto `base` (every state q behaves
/// like base state h(q)), so its Nerode quotient has at most base's size.
/// Unreachable states are possible.
inline KripkeStructure inflate(std::uint64_t seed, const KripkeStructure& base, std::size_t n) {
    std::mt19937_64 rng(seed);
    const std::size_t m = base.num_states();
    const std::size_t sigma = base.alphabet().size();
    std::vector<StateId> h(n);
    std::vector<std::vector<StateId>> pre(m);
    for (StateId q = 0; q < n; ++q) {
        h[q] = q < m ? q : static_cast<StateId>(rng() % m);
        pre[h[q]].push_back(q);
    }
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    for (StateId q = 0; q < n; ++q) {
        for (Symbol s = 0; s < sigma; ++s) {
            const auto& options = pre[base.next(h[q], s)];
            trans.push_back(options[rng() % options.size()]);
        }
        auto row = base.label_row(h[q]);
        labels.insert(labels.end(), row.begin(), row.end());
    }
    return KripkeStructure(base.alphabet(), base.bits(), base.initial(), trans, labels);
}

/// Synchronous composition: every component reads the same input and the
/// output row is the components' rows concatenated. Reachable part only.
inline KripkeStructure compose(const std::vector<KripkeStructure>& parts) {
    const std::size_t sigma = parts[0].alphabet().size();
    std::size_t bits = 0;
    for (const auto& p : parts) bits += p.bits();
    std::map<std::vector<StateId>, StateId> id;
    std::vector<std::vector<StateId>> order;
    std::vector<StateId> init;
    for (const auto& p : parts) init.push_back(p.initial());
    id.emplace(init, 0);
    order.push_back(init);
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    for (std::size_t h = 0; h < order.size(); ++h) {
        const std::vector<StateId> t = order[h];
        for (std::size_t i = 0; i < parts.size(); ++i) {
            auto row = parts[i].label_row(t[i]);
            labels.insert(labels.end(), row.begin(), row.end());
        }
        for (Symbol s = 0; s < sigma; ++s) {
            std::vector<StateId> u;
            for (std::size_t i = 0; i < parts.size(); ++i) u.push_back(parts[i].next(t[i], s));
            auto [it, fresh] = id.emplace(u, static_cast<StateId>(order.size()));
            if (fresh) order.push_back(u);
            trans.push_back(it->second);
        }
    }
    return KripkeStructure(parts[0].alphabet(), bits, 0, trans, labels);
}

inline std::size_t reachable_count(const KripkeStructure& a) {
    return canonical(a).num_states();
}

} // namespace oracle
