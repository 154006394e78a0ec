#include "ikl/kripke.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ikl/errors.hpp"

namespace ikl {

std::size_t WordHash::operator()(const Word& w) const noexcept {
    // FNV-1a over the symbol indices.
    std::uint64_t h = 1469598103934665603ull ^ w.size();
    for (Symbol s : w) {
        h ^= s + 0x9e3779b9u;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

bool ShortLex::operator()(const Word& a, const Word& b) const noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

Word concat(const Word& a, const Word& b) {
    Word out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InputError("alphabet must be non-empty");
    std::unordered_set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.empty()) throw InputError("alphabet symbol must be non-empty");
        for (unsigned char ch : s) {
            if (ch <= ' ' || ch == 0x7f) throw InputError("alphabet symbol '" + s + "' contains whitespace or control characters");
        }
        if (!seen.insert(s).second) throw InputError("duplicate alphabet symbol '" + s + "'");
    }
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i] == token) return static_cast<Symbol>(i);
    }
    return std::nullopt;
}

Symbol Alphabet::index_of(std::string_view token) const {
    if (auto s = find(token)) return *s;
    throw InputError("unknown symbol '" + std::string(token) + "'");
}

void Alphabet::validate(const Word& w) const {
    for (Symbol s : w) {
        if (s >= symbols_.size()) {
            throw InputError("symbol index " + std::to_string(s) + " out of range for alphabet of size " +
                             std::to_string(symbols_.size()));
        }
    }
}

Word Alphabet::parse_word(std::string_view text) const {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) w.push_back(index_of(tok));
    return w;
}

std::string Alphabet::format_word(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += (*this)[w[i]];
    }
    return out;
}

Alphabet Alphabet::from_csv(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return Alphabet(std::move(out));
}

// ---------------------------------------------------------------------------
// BitVector

BitVector BitVector::from_string(std::string_view text) {
    BitVector v(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            v.bits_[i] = 1;
        } else if (text[i] != '0') {
            throw InputError("malformed bit string '" + std::string(text) + "'");
        }
    }
    return v;
}

std::string BitVector::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

// ---------------------------------------------------------------------------
// KripkeStructure

KripkeStructure::KripkeStructure(Alphabet alphabet, std::size_t bits, StateId initial,
                                 std::vector<StateId> transitions, std::vector<std::uint8_t> labels)
    : alphabet_(std::move(alphabet)), bits_(bits), initial_(initial),
      transitions_(std::move(transitions)), labels_(std::move(labels)) {
    if (bits_ == 0) throw InputError("Kripke structure needs at least one output bit");
    if (transitions_.size() % alphabet_.size() != 0) throw InputError("transition table size is not a multiple of |alphabet|");
    num_states_ = transitions_.size() / alphabet_.size();
    if (num_states_ == 0) throw InputError("Kripke structure needs at least one state");
    if (labels_.size() != num_states_ * bits_) throw InputError("label table does not hold exactly k bits per state");
    if (initial_ >= num_states_) throw InputError("initial state out of range");
    for (StateId t : transitions_) {
        if (t >= num_states_) throw InputError("transition target out of range");
    }
    for (auto& b : labels_) b = b ? 1 : 0;
}

BitVector KripkeStructure::output(StateId q) const {
    BitVector v(bits_);
    for (std::size_t c = 0; c < bits_; ++c) v.set(c, label(q, c));
    return v;
}

StateId KripkeStructure::delta_star(StateId q, const Word& w) const {
    if (q >= num_states_) throw InputError("state id out of range");
    alphabet_.validate(w);
    for (Symbol s : w) q = next(q, s);
    return q;
}

BitVector KripkeStructure::lambda_star(const Word& w) const {
    return output(delta_star(initial_, w));
}

Dfa::Dfa(KripkeStructure structure) : structure_(std::move(structure)) {
    if (structure_.bits() != 1) throw InputError("a DFA is a 1-bit Kripke structure");
}

// ---------------------------------------------------------------------------
// Derived operations

KripkeStructure project(const KripkeStructure& a, std::size_t i) {
    if (i < 1 || i > a.bits()) {
        throw InputError("projection index " + std::to_string(i) + " outside 1.." + std::to_string(a.bits()));
    }
    std::vector<std::uint8_t> labels(a.num_states());
    for (StateId q = 0; q < a.num_states(); ++q) labels[q] = a.label(q, i - 1);
    return KripkeStructure(a.alphabet(), 1, a.initial(), a.transitions(), std::move(labels));
}

EquivalenceResult behaviourally_equivalent(const KripkeStructure& a, const KripkeStructure& b) {
    if (!(a.alphabet() == b.alphabet())) throw InputError("equivalence check: alphabets differ");
    if (a.bits() != b.bits()) throw InputError("equivalence check: output widths differ");

    const std::size_t nb = b.num_states();
    const std::size_t sigma = a.alphabet().size();
    constexpr std::uint64_t kNone = ~std::uint64_t{0};
    // Visited pairs only; pair id = qa * nb + qb. Dense tables would be
    // quadratic in the state counts.
    struct Back {
        std::uint64_t parent;
        Symbol via;
    };
    std::unordered_map<std::uint64_t, Back> back;

    auto word_to = [&](std::uint64_t id) {
        Word w;
        for (auto it = back.find(id); it->second.parent != kNone; it = back.find(id)) {
            w.push_back(it->second.via);
            id = it->second.parent;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    std::uint64_t start = std::uint64_t{a.initial()} * nb + b.initial();
    std::deque<std::uint64_t> queue{start};
    back.emplace(start, Back{kNone, 0});
    while (!queue.empty()) {
        std::uint64_t id = queue.front();
        queue.pop_front();
        auto qa = static_cast<StateId>(id / nb);
        auto qb = static_cast<StateId>(id % nb);
        auto ra = a.label_row(qa);
        auto rb = b.label_row(qb);
        if (!std::equal(ra.begin(), ra.end(), rb.begin())) return EquivalenceResult::witness(word_to(id));
        for (Symbol s = 0; s < sigma; ++s) {
            std::uint64_t nid = std::uint64_t{a.next(qa, s)} * nb + b.next(qb, s);
            if (!back.emplace(nid, Back{id, s}).second) continue;
            queue.push_back(nid);
        }
    }
    return EquivalenceResult::equal();
}

std::set<Word> prefix_closure(const std::set<Word>& words) {
    std::set<Word> out;
    for (const auto& w : words) {
        for (std::size_t len = 0; len <= w.size(); ++len) out.emplace(w.begin(), w.begin() + len);
    }
    return out;
}

std::vector<std::optional<Word>> access_words(const KripkeStructure& a) {
    std::vector<std::optional<Word>> out(a.num_states());
    std::deque<StateId> queue{a.initial()};
    out[a.initial()] = Word{};
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        for (Symbol s = 0; s < a.alphabet().size(); ++s) {
            StateId r = a.next(q, s);
            if (out[r]) continue;
            Word w = *out[q];
            w.push_back(s);
            out[r] = std::move(w);
            queue.push_back(r);
        }
    }
    return out;
}

std::vector<StateId> reachable_states(const KripkeStructure& a) {
    std::vector<bool> seen(a.num_states(), false);
    std::vector<StateId> stack{a.initial()};
    seen[a.initial()] = true;
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (StateId r : a.successors(q)) {
            if (!seen[r]) {
                seen[r] = true;
                stack.push_back(r);
            }
        }
    }
    std::vector<StateId> out;
    for (StateId q = 0; q < a.num_states(); ++q) {
        if (seen[q]) out.push_back(q);
    }
    return out;
}

KripkeStructure restrict_to_reachable(const KripkeStructure& a) {
    auto keep = reachable_states(a);
    if (keep.size() == a.num_states()) return a;
    constexpr StateId kGone = ~StateId{0};
    std::vector<StateId> rename(a.num_states(), kGone);
    for (std::size_t i = 0; i < keep.size(); ++i) rename[keep[i]] = static_cast<StateId>(i);
    const std::size_t sigma = a.alphabet().size();
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    trans.reserve(keep.size() * sigma);
    labels.reserve(keep.size() * a.bits());
    for (StateId q : keep) {
        for (StateId r : a.successors(q)) trans.push_back(rename[r]);
        auto row = a.label_row(q);
        labels.insert(labels.end(), row.begin(), row.end());
    }
    return KripkeStructure(a.alphabet(), a.bits(), rename[a.initial()], std::move(trans), std::move(labels));
}

bool isomorphic(const KripkeStructure& a, const KripkeStructure& b) {
    if (!(a.alphabet() == b.alphabet()) || a.bits() != b.bits() || a.num_states() != b.num_states()) return false;
    constexpr StateId kUnset = ~StateId{0};
    std::vector<StateId> fwd(a.num_states(), kUnset), bwd(b.num_states(), kUnset);
    std::deque<StateId> queue{a.initial()};
    fwd[a.initial()] = b.initial();
    bwd[b.initial()] = a.initial();
    std::size_t mapped = 1;
    while (!queue.empty()) {
        StateId p = queue.front();
        queue.pop_front();
        StateId q = fwd[p];
        auto rp = a.label_row(p);
        auto rq = b.label_row(q);
        if (!std::equal(rp.begin(), rp.end(), rq.begin())) return false;
        for (Symbol s = 0; s < a.alphabet().size(); ++s) {
            StateId np = a.next(p, s), nq = b.next(q, s);
            if (fwd[np] == kUnset && bwd[nq] == kUnset) {
                fwd[np] = nq;
                bwd[nq] = np;
                ++mapped;
                queue.push_back(np);
            } else if (fwd[np] != nq || bwd[nq] != np) {
                return false;
            }
        }
    }
    return mapped == a.num_states();
}

KripkeStructure random_kripke(std::uint64_t seed, std::size_t n, std::size_t bits, const Alphabet& alphabet) {
    if (n == 0) throw InputError("random_kripke: need at least one state");
    if (bits == 0) throw InputError("random_kripke: need at least one output bit");
    std::mt19937_64 rng(seed);
    auto below = [&](std::uint64_t bound) { return rng() % bound; };

    const std::size_t sigma = alphabet.size();
    constexpr StateId kUnset = ~StateId{0};
    std::vector<StateId> trans(n * sigma, kUnset);

    // Spanning tree first: attach every new state to a free slot of an
    // already attached one. There is always a free slot since i attached
    // states own i * |sigma| slots and use i - 1 of them.
    std::vector<std::size_t> free_slots;
    for (std::size_t s = 0; s < sigma; ++s) free_slots.push_back(s);
    for (std::size_t q = 1; q < n; ++q) {
        std::size_t pick = below(free_slots.size());
        std::size_t slot = free_slots[pick];
        free_slots[pick] = free_slots.back();
        free_slots.pop_back();
        trans[slot] = static_cast<StateId>(q);
        for (std::size_t s = 0; s < sigma; ++s) free_slots.push_back(q * sigma + s);
    }
    for (auto& t : trans) {
        if (t == kUnset) t = static_cast<StateId>(below(n));
    }
    std::vector<std::uint8_t> labels(n * bits);
    for (auto& b : labels) b = static_cast<std::uint8_t>(below(2));
    return KripkeStructure(alphabet, bits, 0, std::move(trans), std::move(labels));
}

} // namespace ikl
