#include "ikl/id_learner.hpp"

#include <algorithm>
#include <optional>

#include "ikl/errors.hpp"

namespace ikl {

StateName f_concat(const StateName& name, Symbol s) {
    if (name.is_dead()) return StateName::dead();
    Word w = name.as_word();
    w.push_back(s);
    return StateName::word(std::move(w));
}

const ClassSet& IdTables::class_of(const StateName& name) const {
    static const ClassSet empty;
    if (name.is_dead()) return empty;
    auto it = classes.find(name.as_word());
    if (it == classes.end()) throw InternalError("class requested for a name outside T");
    return it->second;
}

namespace {

struct Violation {
    StateName alpha;
    StateName beta;
    Symbol symbol;
};

// P' in search order: words in shortlex order, then the dead name.
std::vector<StateName> primed_prefixes(const IdTables& t) {
    std::vector<StateName> out;
    out.reserve(t.prefixes.size() + 1);
    for (const auto& w : t.prefixes) out.push_back(StateName::word(w));
    out.push_back(StateName::dead());
    return out;
}

std::optional<Violation> find_violation(const IdTables& t) {
    auto names = primed_prefixes(t);
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            if (t.class_of(names[i]) != t.class_of(names[j])) continue;
            for (Symbol s = 0; s < t.alphabet_size; ++s) {
                if (t.class_of(f_concat(names[i], s)) != t.class_of(f_concat(names[j], s))) {
                    return Violation{names[i], names[j], s};
                }
            }
        }
    }
    return std::nullopt;
}

ClassSet symmetric_difference(const ClassSet& a, const ClassSet& b) {
    ClassSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

IdResult id_learn(Teacher& teacher, const std::set<Word>& prefixes) {
    if (teacher.bits() != 1) throw InputError("ID learns a single DFA; teacher must have one output bit");
    if (!prefixes.contains(Word{})) throw InputError("ID requires epsilon in the prefix set");
    const Alphabet& alphabet = teacher.alphabet();

    IdTables t;
    t.alphabet_size = alphabet.size();
    for (const auto& w : prefixes) {
        alphabet.validate(w);
        t.prefixes.insert(w);
    }
    for (const auto& w : t.prefixes) {
        t.names.insert(w);
        for (Symbol s = 0; s < alphabet.size(); ++s) {
            Word e = w;
            e.push_back(s);
            t.names.insert(std::move(e));
        }
    }

    t.distinguishing.push_back(Word{});
    for (const auto& w : t.names) {
        ClassSet c;
        if (teacher.query(w)[0]) c.push_back(0);
        t.classes.emplace(w, std::move(c));
    }

    while (auto v = find_violation(t)) {
        auto diff = symmetric_difference(t.class_of(f_concat(v->alpha, v->symbol)),
                                         t.class_of(f_concat(v->beta, v->symbol)));
        std::size_t best = *std::min_element(diff.begin(), diff.end(), [&](std::size_t a, std::size_t b) {
            return ShortLex{}(t.distinguishing[a], t.distinguishing[b]);
        });
        Word suffix{v->symbol};
        suffix.insert(suffix.end(), t.distinguishing[best].begin(), t.distinguishing[best].end());
        const std::size_t index = t.distinguishing.size();
        t.distinguishing.push_back(suffix);
        for (auto& [w, cls] : t.classes) {
            if (teacher.query(concat(w, suffix))[0]) cls.push_back(index);
        }
    }

    Dfa dfa = quotient_synthesize(t, alphabet);
    return IdResult{std::move(dfa), std::move(t)};
}

Dfa quotient_synthesize(const IdTables& t, const Alphabet& alphabet) {
    if (alphabet.size() != t.alphabet_size) throw InputError("alphabet does not match the tables");
    const ClassSet empty;
    constexpr StateId kUnset = ~StateId{0};

    std::map<ClassSet, StateId> state_of;
    std::vector<const ClassSet*> classes;
    auto intern = [&](const ClassSet& c) {
        auto [it, fresh] = state_of.emplace(c, static_cast<StateId>(classes.size()));
        if (fresh) classes.push_back(&it->first);
        return it->second;
    };
    // Epsilon is the shortlex-least name, so its class becomes state 0.
    for (const auto& [w, cls] : t.classes) intern(cls);

    std::vector<StateId> trans;
    auto set_edge = [&](StateId from, Symbol s, StateId to) {
        StateId& slot = trans[from * t.alphabet_size + s];
        if (slot != kUnset && slot != to) throw InternalError("tables are not a congruence; cannot synthesize");
        slot = to;
    };
    auto grow = [&] { trans.resize(classes.size() * t.alphabet_size, kUnset); };
    grow();

    auto wire = [&](const ClassSet& from_cls, const StateName& name) {
        StateId from = intern(from_cls);
        grow();
        for (Symbol s = 0; s < t.alphabet_size; ++s) {
            StateId to = from_cls.empty() ? from : intern(t.class_of(f_concat(name, s)));
            grow();
            set_edge(from, s, to);
        }
    };

    bool empty_is_state = state_of.contains(empty);
    for (const auto& w : t.prefixes) wire(t.classes.at(w), StateName::word(w));

    std::set<ClassSet> prefix_classes;
    for (const auto& w : t.prefixes) prefix_classes.insert(t.classes.at(w));
    for (const auto& w : t.names) {
        const ClassSet& cls = t.classes.at(w);
        if (t.prefixes.contains(w) || cls.empty() || prefix_classes.contains(cls)) continue;
        StateId from = intern(cls);
        StateId sink = intern(empty);
        grow();
        empty_is_state = true;
        for (Symbol s = 0; s < t.alphabet_size; ++s) set_edge(from, s, sink);
    }
    if (empty_is_state) {
        StateId sink = intern(empty);
        grow();
        for (Symbol s = 0; s < t.alphabet_size; ++s) set_edge(sink, s, sink);
    }

    if (std::find(trans.begin(), trans.end(), kUnset) != trans.end()) {
        throw InternalError("synthesized automaton is not total");
    }
    std::vector<std::uint8_t> labels(classes.size());
    for (std::size_t q = 0; q < classes.size(); ++q) {
        labels[q] = !classes[q]->empty() && classes[q]->front() == 0;
    }
    return Dfa(KripkeStructure(alphabet, 1, 0, std::move(trans), std::move(labels)));
}

} // namespace ikl
