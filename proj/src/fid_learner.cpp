#include "ikl/fid_learner.hpp"

#include <algorithm>
#include <deque>

#include "ikl/errors.hpp"

namespace ikl {

bool consistent(const DfaFamily& family, const Word& s, const RecordedAnswers& recorded) {
    std::vector<StateId> at(family.size());
    for (std::size_t c = 0; c < family.size(); ++c) at[c] = family[c].initial();
    for (std::size_t len = 0;; ++len) {
        auto answer = recorded(Word(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(len)));
        if (!answer || answer->width() != family.size()) return false;
        for (std::size_t c = 0; c < family.size(); ++c) {
            if (family[c].accepting(at[c]) != (*answer)[c]) return false;
        }
        if (len == s.size()) return true;
        for (std::size_t c = 0; c < family.size(); ++c) at[c] = family[c].next(at[c], s[len]);
    }
}

bool consistent(const DfaFamily& family, const Word& s, const CachedTeacher& teacher) {
    return consistent(family, s, [&](const Word& w) { return teacher.lookup(w); });
}

// ---------------------------------------------------------------------------

std::size_t FidLearner::ClassSetHash::operator()(const ClassSet& c) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull ^ c.size();
    for (std::size_t i : c) {
        h ^= i + 0x9e3779b97f4a7c15ull;
        h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
}

FidLearner::ClassId FidLearner::Channel::intern(ClassSet set) {
    auto [it, fresh] = ids.emplace(std::move(set), static_cast<ClassId>(sets.size()));
    if (fresh) sets.push_back(it->first);
    return it->second;
}

FidLearner::FidLearner(Teacher& teacher, FidOptions options)
    : teacher_(teacher), alphabet_(teacher.alphabet()), options_(options) {
    const std::size_t k = teacher_.bits();
    if (k == 0) throw InputError("teacher must declare at least one output bit");
    channels_.resize(k);
    for (auto& ch : channels_) {
        ch.suffixes.push_back(Word{});
        ch.intern(ClassSet{});
    }

    // P_0 = {epsilon}, T_0 = {epsilon} + alphabet.
    nodes_.push_back(Node{kNone, 0, false});
    children_.assign(alphabet_.size(), kNone);
    for (auto& ch : channels_) ch.class_of.push_back(0);
    std::vector<NodeId> fresh{0};
    mark_prefix(0, fresh);
    seed(fresh);
    lazy_refine();
    family_ = synthesize();
    ++stats_.syntheses;
}

Word FidLearner::word_of(NodeId n) const {
    Word w;
    while (nodes_[n].parent != kNone) {
        w.push_back(nodes_[n].symbol);
        n = nodes_[n].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::optional<FidLearner::NodeId> FidLearner::find_node(const Word& w) const {
    NodeId n = 0;
    for (Symbol s : w) {
        if (s >= alphabet_.size()) return std::nullopt;
        n = children_[std::size_t{n} * alphabet_.size() + s];
        if (n == kNone) return std::nullopt;
    }
    return n;
}

FidLearner::NodeId FidLearner::add_node(NodeId parent, Symbol s) {
    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{parent, s, false});
    children_.resize(children_.size() + alphabet_.size(), kNone);
    children_[std::size_t{parent} * alphabet_.size() + s] = id;
    for (auto& ch : channels_) ch.class_of.push_back(0);
    return id;
}

void FidLearner::mark_prefix(NodeId n, std::vector<NodeId>& fresh) {
    if (nodes_[n].prefix) return;
    nodes_[n].prefix = true;
    ++num_prefixes_;
    for (Symbol s = 0; s < alphabet_.size(); ++s) {
        if (children_[std::size_t{n} * alphabet_.size() + s] == kNone) fresh.push_back(add_node(n, s));
    }
}

// Classes for names new to T: replay every existing distinguishing string
// of each channel.
void FidLearner::seed(const std::vector<NodeId>& fresh) {
    for (NodeId n : fresh) {
        const Word base = word_of(n);
        std::unordered_map<Word, BitVector, WordHash> asked;
        auto ask = [&](const Word& v) -> const BitVector& {
            auto it = asked.find(v);
            if (it == asked.end()) it = asked.emplace(v, teacher_.query(concat(base, v))).first;
            return it->second;
        };
        for (std::size_t c = 0; c < channels_.size(); ++c) {
            Channel& ch = channels_[c];
            ClassSet set;
            for (std::size_t j = 0; j < ch.suffixes.size(); ++j) {
                const BitVector& bits = ask(ch.suffixes[j]);
                if (bits.width() != channels_.size()) throw TeacherError("teacher answered with the wrong bit width");
                if (bits[c]) set.push_back(j);
            }
            ch.class_of[n] = ch.intern(std::move(set));
        }
    }
}

std::vector<FidLearner::NodeId> FidLearner::name_order() const {
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    order.push_back(0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        NodeId n = order[i];
        if (!nodes_[n].prefix) continue;
        for (Symbol s = 0; s < alphabet_.size(); ++s) order.push_back(child(n, s));
    }
    return order;
}

std::vector<FidLearner::NodeId> FidLearner::prefix_order() const {
    std::vector<NodeId> order;
    for (NodeId n : name_order()) {
        if (nodes_[n].prefix) order.push_back(n);
    }
    return order;
}

std::optional<FidLearner::Violation> FidLearner::find_violation(std::size_t c, const std::vector<NodeId>& order) const {
    const Channel& ch = channels_[c];
    const std::size_t sigma = alphabet_.size();
    auto same_successors = [&](NodeId a, NodeId b) {
        for (Symbol s = 0; s < sigma; ++s) {
            if (cls(ch, child(a, s)) != cls(ch, child(b, s))) return false;
        }
        return true;
    };

    // `order` is P' in search order; group positions by class.
    std::vector<std::vector<std::size_t>> groups(ch.sets.size());
    for (std::size_t i = 0; i < order.size(); ++i) groups[cls(ch, order[i])].push_back(i);

    std::optional<std::size_t> best_alpha;
    for (const auto& g : groups) {
        if (g.size() < 2) continue;
        // Earliest member with a later member whose successor classes differ.
        const NodeId last = order[g.back()];
        bool uniform = true;
        std::optional<std::size_t> candidate;
        for (std::size_t idx = g.size() - 1; idx-- > 0;) {
            const bool same = same_successors(order[g[idx]], last);
            if (!(uniform && same)) candidate = g[idx];
            uniform = uniform && same;
        }
        if (candidate && (!best_alpha || *candidate < *best_alpha)) best_alpha = candidate;
    }
    if (!best_alpha) return std::nullopt;

    const NodeId alpha = order[*best_alpha];
    const auto& g = groups[cls(ch, alpha)];
    for (std::size_t pos : g) {
        if (pos <= *best_alpha) continue;
        const NodeId beta = order[pos];
        for (Symbol s = 0; s < sigma; ++s) {
            if (cls(ch, child(alpha, s)) != cls(ch, child(beta, s))) return Violation{c, alpha, beta, s};
        }
    }
    throw InternalError("violation search lost its witness");
}

std::optional<FidLearner::Violation> FidLearner::find_violation(const std::vector<NodeId>& order) const {
    for (std::size_t c = 0; c < channels_.size(); ++c) {
        if (auto v = find_violation(c, order)) return v;
    }
    return std::nullopt;
}

void FidLearner::lazy_refine() {
    std::vector<NodeId> order = prefix_order();
    order.push_back(kDead);

    while (auto v = find_violation(order)) {
        ++stats_.refinements;
        const Channel& origin = channels_[v->channel];
        const NodeId a_next = child(v->alpha, v->symbol);
        const NodeId b_next = child(v->beta, v->symbol);
        const ClassSet& ea = origin.sets[cls(origin, a_next)];
        const ClassSet& eb = origin.sets[cls(origin, b_next)];
        ClassSet diff;
        std::set_symmetric_difference(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(diff));
        const std::size_t gamma = *std::min_element(diff.begin(), diff.end(), [&](std::size_t x, std::size_t y) {
            return ShortLex{}(origin.suffixes[x], origin.suffixes[y]);
        });
        Word suffix{v->symbol};
        suffix.insert(suffix.end(), origin.suffixes[gamma].begin(), origin.suffixes[gamma].end());

        // The guard is evaluated once, against the tables as they were when
        // the violation was found.
        std::vector<std::size_t> refine;
        for (std::size_t c = 0; c < channels_.size(); ++c) {
            const Channel& ch = channels_[c];
            if (cls(ch, v->alpha) != cls(ch, v->beta) || cls(ch, a_next) == cls(ch, b_next)) continue;
            if (std::find(ch.suffixes.begin(), ch.suffixes.end(), suffix) != ch.suffixes.end()) {
                ++stats_.duplicate_skips;
                continue;
            }
            refine.push_back(c);
        }
        if (refine.empty() || refine.front() != v->channel) throw InternalError("violating channel failed its own guard");

        std::vector<std::size_t> index(channels_.size());
        std::vector<std::vector<ClassId>> plus(channels_.size());
        for (std::size_t c : refine) {
            Channel& ch = channels_[c];
            index[c] = ch.suffixes.size();
            ch.suffixes.push_back(suffix);
            plus[c].assign(ch.sets.size(), kNone);
            ++stats_.channel_extensions;
        }
        const std::size_t n_names = nodes_.size();
        for (NodeId n = 0; n < n_names; ++n) {
            const BitVector bits = teacher_.query(concat(word_of(n), suffix));
            if (bits.width() != channels_.size()) throw TeacherError("teacher answered with the wrong bit width");
            for (std::size_t c : refine) {
                if (!bits[c]) continue;
                Channel& ch = channels_[c];
                const ClassId old = ch.class_of[n];
                if (plus[c][old] == kNone) {
                    ClassSet grown = ch.sets[old];
                    grown.push_back(index[c]);
                    plus[c][old] = ch.intern(std::move(grown));
                }
                ch.class_of[n] = plus[c][old];
            }
        }
    }
}

const FamilySnapshot& FidLearner::process(const Word& s) {
    alphabet_.validate(s);
    ++processed_;

    std::vector<NodeId> fresh;
    NodeId n = 0;
    for (Symbol sym : s) {
        n = child(n, sym);
        mark_prefix(n, fresh);
    }
    seed(fresh);
    lazy_refine();

    if (options_.force_synthesis) {
        FamilySnapshot next = synthesize();
        ++stats_.syntheses;
        if (!(*next == *family_)) family_ = std::move(next);
    } else if (!table_consistent(*family_, s)) {
        family_ = synthesize();
        ++stats_.syntheses;
    }
    return family_;
}

bool FidLearner::table_consistent(const DfaFamily& family, const Word& s) const {
    // Bit c of lambda*(p) is recorded as membership of v_0 = epsilon in E^c(p).
    return consistent(family, s, [&](const Word& w) -> std::optional<BitVector> {
        auto node = find_node(w);
        if (!node) return std::nullopt;
        BitVector out(channels_.size());
        for (std::size_t c = 0; c < channels_.size(); ++c) {
            const ClassSet& set = channels_[c].sets[channels_[c].class_of[*node]];
            out.set(c, !set.empty() && set.front() == 0);
        }
        return out;
    });
}

Dfa FidLearner::synthesize_channel(std::size_t c, const std::vector<NodeId>& order) const {
    const Channel& ch = channels_[c];
    const std::size_t sigma = alphabet_.size();
    constexpr StateId kUnset = ~StateId{0};

    std::vector<StateId> state_of(ch.sets.size(), kUnset);
    std::vector<ClassId> class_of_state;
    auto intern = [&](ClassId k) {
        if (state_of[k] == kUnset) {
            state_of[k] = static_cast<StateId>(class_of_state.size());
            class_of_state.push_back(k);
        }
        return state_of[k];
    };
    for (NodeId n : order) intern(cls(ch, n));

    std::vector<StateId> trans;
    auto set_edge = [&](StateId from, Symbol s, StateId to) {
        if (trans.size() < class_of_state.size() * sigma) trans.resize(class_of_state.size() * sigma, kUnset);
        StateId& slot = trans[std::size_t{from} * sigma + s];
        if (slot != kUnset && slot != to) throw InternalError("channel tables are not a congruence; cannot synthesize");
        slot = to;
    };

    std::vector<bool> prefix_class(ch.sets.size(), false);
    prefix_class[0] = true;  // the dead name
    for (NodeId n : order) {
        if (!nodes_[n].prefix) continue;
        const ClassId k = cls(ch, n);
        prefix_class[k] = true;
        const StateId from = state_of[k];
        for (Symbol s = 0; s < sigma; ++s) set_edge(from, s, k == 0 ? from : state_of[cls(ch, child(n, s))]);
    }
    for (NodeId n : order) {
        const ClassId k = cls(ch, n);
        if (nodes_[n].prefix || k == 0 || prefix_class[k]) continue;
        const StateId from = state_of[k];
        const StateId sink = intern(0);
        for (Symbol s = 0; s < sigma; ++s) set_edge(from, s, sink);
    }
    if (state_of[0] != kUnset) {
        for (Symbol s = 0; s < sigma; ++s) set_edge(state_of[0], s, state_of[0]);
    }

    trans.resize(class_of_state.size() * sigma, kUnset);
    if (std::find(trans.begin(), trans.end(), kUnset) != trans.end()) {
        throw InternalError("synthesized automaton is not total");
    }
    std::vector<std::uint8_t> labels(class_of_state.size());
    for (std::size_t q = 0; q < class_of_state.size(); ++q) {
        const ClassSet& set = ch.sets[class_of_state[q]];
        labels[q] = !set.empty() && set.front() == 0;
    }
    return Dfa(KripkeStructure(alphabet_, 1, 0, std::move(trans), std::move(labels)));
}

FamilySnapshot FidLearner::synthesize() const {
    const auto order = name_order();
    auto family = std::make_shared<DfaFamily>();
    family->reserve(channels_.size());
    for (std::size_t c = 0; c < channels_.size(); ++c) family->push_back(synthesize_channel(c, order));
    return family;
}

std::vector<Word> FidLearner::prefixes() const {
    std::vector<Word> out;
    for (NodeId n : prefix_order()) out.push_back(word_of(n));
    return out;
}

std::vector<Word> FidLearner::names() const {
    std::vector<Word> out;
    for (NodeId n : name_order()) out.push_back(word_of(n));
    return out;
}

ClassSet FidLearner::class_of(std::size_t channel, const Word& name) const {
    auto node = find_node(name);
    if (!node) throw InputError("word is not a state name in T");
    const Channel& ch = channels_.at(channel);
    return ch.sets[ch.class_of[*node]];
}

} // namespace ikl
