#pragma once

#include <cstdint>
#include <vector>

#include "ikl/kripke.hpp"

namespace ikl {

/// A partition of the states 0..n-1 into disjoint non-empty blocks.
/// Always stored in canonical form: members ascending, blocks ordered by
/// their smallest member. Two partitions with the same blocks compare equal.
class Partition {
public:
    Partition(std::vector<std::vector<StateId>> blocks, std::size_t num_states);
    /// `block_of[q]` is an arbitrary block label for state q.
    static Partition from_labels(const std::vector<std::uint32_t>& block_of);
    static Partition identity(std::size_t num_states);

    std::size_t num_states() const noexcept { return block_of_.size(); }
    std::size_t num_blocks() const noexcept { return blocks_.size(); }
    const std::vector<StateId>& block(std::size_t i) const { return blocks_.at(i); }
    const std::vector<std::vector<StateId>>& blocks() const noexcept { return blocks_; }
    std::uint32_t block_of(StateId q) const { return block_of_.at(q); }

    bool operator==(const Partition&) const = default;

private:
    Partition() = default;
    std::vector<std::vector<StateId>> blocks_;
    std::vector<std::uint32_t> block_of_;
};

/// One block split during minimisation. Block numbers are the algorithm's
/// own (0-based, in creation order): `block` keeps the states whose
/// successor lies in the splitter, `new_block` receives the rest.
struct SplitEvent {
    Symbol symbol;
    std::size_t splitter;
    std::size_t block;
    std::size_t new_block;
    std::vector<StateId> kept;   // empty unless tracing
    std::vector<StateId> moved;  // empty unless tracing
};

struct MinimiseOptions {
    bool trace = false;
};

struct MinimiseResult {
    /// The input restricted to its reachable states; `partition` refers to
    /// its state ids (identical to the input's when all are reachable).
    KripkeStructure reachable;
    Partition partition;
    KripkeStructure quotient;
    /// The initial partition by output label.
    Partition initial_partition;
    /// States moved between blocks and block sub-partitions.
    std::uint64_t moves = 0;
    bool early_exit = false;
    std::vector<SplitEvent> trace;
};

/// Hopcroft-style computation of the Nerode congruence of a deterministic
/// Kripke structure and its quotient. Unreachable states are dropped first.
/// Worst case O(|alphabet| * n log n).
MinimiseResult minimise(const KripkeStructure& a, MinimiseOptions options = {});

/// Pairwise table-filling Nerode congruence, O(n^2 * |alphabet|) per pass.
Partition nerode_bruteforce(const KripkeStructure& a);

/// Quotient by a congruence. State i of the result is block i; the initial
/// state is the block of the input's initial state. Throws InputError naming
/// a violating pair if the partition is not output-uniform or not closed
/// under transitions.
KripkeStructure quotient(const KripkeStructure& a, const Partition& p);

} // namespace ikl
