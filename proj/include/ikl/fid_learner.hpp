#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ikl/id_learner.hpp"
#include "ikl/kripke.hpp"
#include "ikl/teacher.hpp"

namespace ikl {

/// One DFA per output channel, all over the same alphabet.
using DfaFamily = std::vector<Dfa>;

/// Families are immutable snapshots; an unchanged hypothesis is the same
/// object as its predecessor.
using FamilySnapshot = std::shared_ptr<const DfaFamily>;

/// Recorded answer lookup: returns lambda*(w) if it is already known.
using RecordedAnswers = std::function<std::optional<BitVector>(const Word&)>;

/// True iff for every prefix p of s (epsilon and s included) and every
/// channel c, member c accepts p exactly when bit c of the recorded answer
/// for p is set. A missing answer counts as inconsistent.
bool consistent(const DfaFamily& family, const Word& s, const RecordedAnswers& recorded);
bool consistent(const DfaFamily& family, const Word& s, const CachedTeacher& teacher);

struct FidOptions {
    /// Synthesize a fresh family after every string, even when the previous
    /// one is consistent with it. A result equal to the previous family
    /// keeps the previous snapshot.
    bool force_synthesis = false;
};

struct FidStats {
    std::uint64_t refinements = 0;         // outer iterations of lazy refinement
    std::uint64_t channel_extensions = 0;  // sum over channels of i_c
    std::uint64_t duplicate_skips = 0;     // guarded channels that already held v
    std::uint64_t syntheses = 0;
};

/// Incremental learner for the family of 1-bit projections of a k-bit
/// teacher. Construction performs the initialisation step (tables for
/// epsilon and every single symbol, refined to a fixpoint) and synthesizes
/// the first family; process() then consumes one input string at a time.
///
/// State names live in a prefix tree: every node is a name in T, and the
/// nodes flagged as prefixes form the prefix-closed set P. The dead name is
/// implicit and always carries the empty class.
class FidLearner {
public:
    explicit FidLearner(Teacher& teacher, FidOptions options = {});

    /// Extends the tables with the prefixes of s, refines, and returns the
    /// new hypothesis family (the previous snapshot if s was consistent).
    const FamilySnapshot& process(const Word& s);

    const FamilySnapshot& family() const noexcept { return family_; }
    /// Number of strings processed so far (t).
    std::size_t processed() const noexcept { return processed_; }
    std::size_t channels() const noexcept { return channels_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const FidStats& stats() const noexcept { return stats_; }

    /// Synthesizes a family from the current tables without touching the
    /// stored hypothesis.
    FamilySnapshot synthesize() const;

    // Table introspection. Channels are 0-based here.
    std::vector<Word> prefixes() const;  // P_k, shortlex
    std::vector<Word> names() const;     // T_k, shortlex
    const std::vector<Word>& distinguishing(std::size_t channel) const { return channels_.at(channel).suffixes; }
    /// E^c(name); throws InputError if the word is not in T_k.
    ClassSet class_of(std::size_t channel, const Word& name) const;
    std::size_t num_names() const noexcept { return nodes_.size(); }
    std::size_t num_prefixes() const noexcept { return num_prefixes_; }

private:
    using NodeId = std::uint32_t;
    using ClassId = std::uint32_t;
    static constexpr NodeId kNone = ~NodeId{0};
    static constexpr NodeId kDead = kNone - 1;

    struct Node {
        NodeId parent;
        Symbol symbol;
        bool prefix;
    };

    struct ClassSetHash {
        std::size_t operator()(const ClassSet& c) const noexcept;
    };

    struct Channel {
        std::vector<Word> suffixes;                 // V_c, v_0 = epsilon
        std::vector<ClassSet> sets;                 // interned, id 0 is the empty set
        std::unordered_map<ClassSet, ClassId, ClassSetHash> ids;
        std::vector<ClassId> class_of;              // per node

        ClassId intern(ClassSet set);
    };

    struct Violation {
        std::size_t channel;
        NodeId alpha;
        NodeId beta;
        Symbol symbol;
    };

    NodeId child(NodeId n, Symbol s) const {
        return n == kDead ? kDead : children_[std::size_t{n} * alphabet_.size() + s];
    }
    ClassId cls(const Channel& ch, NodeId n) const { return n == kDead ? 0 : ch.class_of[n]; }
    Word word_of(NodeId n) const;
    std::optional<NodeId> find_node(const Word& w) const;
    NodeId add_node(NodeId parent, Symbol s);
    void mark_prefix(NodeId n, std::vector<NodeId>& fresh);
    void seed(const std::vector<NodeId>& fresh);
    std::vector<NodeId> prefix_order() const;
    std::vector<NodeId> name_order() const;
    std::optional<Violation> find_violation(const std::vector<NodeId>& order) const;
    std::optional<Violation> find_violation(std::size_t channel, const std::vector<NodeId>& order) const;
    void lazy_refine();
    Dfa synthesize_channel(std::size_t channel, const std::vector<NodeId>& order) const;
    bool table_consistent(const DfaFamily& family, const Word& s) const;

    Teacher& teacher_;
    Alphabet alphabet_;
    FidOptions options_;
    std::vector<Node> nodes_;
    std::vector<NodeId> children_;
    std::size_t num_prefixes_ = 0;
    std::vector<Channel> channels_;
    FamilySnapshot family_;
    std::size_t processed_ = 0;
    FidStats stats_;
};

} // namespace ikl
