#include "ikl/minimiser.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ikl/errors.hpp"

namespace ikl {

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<std::vector<StateId>> blocks, std::size_t num_states) {
    block_of_.assign(num_states, ~std::uint32_t{0});
    for (auto& b : blocks) {
        if (b.empty()) throw InputError("partition blocks must be non-empty");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (StateId q : blocks[i]) {
            if (q >= num_states) throw InputError("partition member out of range");
            if (block_of_[q] != ~std::uint32_t{0}) throw InputError("partition blocks overlap at state " + std::to_string(q));
            block_of_[q] = static_cast<std::uint32_t>(i);
        }
    }
    for (std::size_t q = 0; q < num_states; ++q) {
        if (block_of_[q] == ~std::uint32_t{0}) throw InputError("partition does not cover state " + std::to_string(q));
    }
    blocks_ = std::move(blocks);
}

Partition Partition::from_labels(const std::vector<std::uint32_t>& block_of) {
    std::map<std::uint32_t, std::vector<StateId>> groups;
    for (std::size_t q = 0; q < block_of.size(); ++q) groups[block_of[q]].push_back(static_cast<StateId>(q));
    std::vector<std::vector<StateId>> blocks;
    for (auto& [label, members] : groups) blocks.push_back(std::move(members));
    return Partition(std::move(blocks), block_of.size());
}

Partition Partition::identity(std::size_t num_states) {
    std::vector<std::uint32_t> labels(num_states);
    for (std::size_t q = 0; q < num_states; ++q) labels[q] = static_cast<std::uint32_t>(q);
    return from_labels(labels);
}

// ---------------------------------------------------------------------------
// Hopcroft refinement

namespace {

/// Blocks and the per-symbol sub-partitions B(s, i) kept as contiguous
/// ranges of permutation arrays, so that moving a state is a swap. Ranges
/// are "storages"; the algorithm's block numbers map onto storages and the
/// smaller half of a split always gets the fresh storage.
class Refiner {
public:
    Refiner(const KripkeStructure& a, bool trace) : a_(a), n_(a.num_states()), sigma_(a.alphabet().size()), trace_(trace) {}

    MinimiseResult run();

private:
    struct Range {
        std::size_t first;
        std::size_t end;
        std::size_t size() const { return end - first; }
    };

    std::size_t sub_size(Symbol s, std::size_t block) const { return sub_range_[s][block_storage_[block]].size(); }
    void mark(StateId r);
    void split(std::size_t storage, Symbol symbol, std::size_t splitter);
    void enqueue_after_split(std::size_t j, std::size_t count);

    const KripkeStructure& a_;
    const std::size_t n_;
    const std::size_t sigma_;
    const bool trace_;

    // Predecessors per symbol, CSR layout.
    std::vector<std::vector<std::size_t>> pred_start_;
    std::vector<std::vector<StateId>> pred_;

    std::vector<StateId> elems_;
    std::vector<std::size_t> loc_;
    std::vector<std::size_t> storage_of_;
    std::vector<Range> range_;
    std::vector<std::size_t> marked_;  // per storage: marked states at the front

    std::vector<std::vector<StateId>> sub_elems_;
    std::vector<std::vector<std::size_t>> sub_loc_;
    std::vector<std::vector<Range>> sub_range_;
    std::vector<std::vector<bool>> has_pred_;

    std::vector<std::size_t> block_storage_;
    std::vector<std::size_t> storage_block_;

    std::vector<std::set<std::size_t>> waiting_;
    std::vector<std::size_t> touched_;

    std::uint64_t moves_ = 0;
    std::vector<SplitEvent> events_;
};

void Refiner::mark(StateId r) {
    const std::size_t st = storage_of_[r];
    const std::size_t pos = loc_[r];
    const std::size_t front = range_[st].first + marked_[st];
    if (pos < front) return;  // already marked
    if (marked_[st] == 0) touched_.push_back(st);
    std::swap(elems_[pos], elems_[front]);
    loc_[elems_[pos]] = pos;
    loc_[elems_[front]] = front;
    ++marked_[st];
    ++moves_;
}

void Refiner::split(std::size_t st, Symbol symbol, std::size_t splitter) {
    const Range whole = range_[st];
    const std::size_t m = marked_[st];
    // Termination variant: the rewritten block must shrink strictly.
    if (m == 0 || m >= whole.size()) throw InternalError("split of a block that does not shrink");

    const Range kept{whole.first, whole.first + m};
    const Range rest{whole.first + m, whole.end};
    const bool move_kept = kept.size() <= rest.size();
    const Range small = move_kept ? kept : rest;
    const Range large = move_kept ? rest : kept;

    const std::size_t fresh = range_.size();
    range_.push_back(small);
    range_[st] = large;
    marked_.push_back(0);
    for (std::size_t p = small.first; p < small.end; ++p) storage_of_[elems_[p]] = fresh;
    moves_ += small.size();

    for (Symbol s = 0; s < sigma_; ++s) {
        Range sr = sub_range_[s][st];
        std::size_t front = sr.first;
        for (std::size_t p = small.first; p < small.end; ++p) {
            const StateId q = elems_[p];
            if (!has_pred_[s][q]) continue;
            const std::size_t pos = sub_loc_[s][q];
            std::swap(sub_elems_[s][pos], sub_elems_[s][front]);
            sub_loc_[s][sub_elems_[s][pos]] = pos;
            sub_loc_[s][sub_elems_[s][front]] = front;
            ++front;
            ++moves_;
        }
        sub_range_[s].push_back(Range{sr.first, front});
        sub_range_[s][st] = Range{front, sr.end};
    }

    const std::size_t j = storage_block_[st];
    const std::size_t count = block_storage_.size();
    const std::size_t kept_storage = move_kept ? fresh : st;
    const std::size_t rest_storage = move_kept ? st : fresh;
    block_storage_[j] = kept_storage;
    block_storage_.push_back(rest_storage);
    storage_block_.resize(range_.size());
    storage_block_[kept_storage] = j;
    storage_block_[rest_storage] = count;

    SplitEvent ev{symbol, splitter, j, count, {}, {}};
    if (trace_) {
        for (std::size_t p = kept.first; p < kept.end; ++p) ev.kept.push_back(elems_[p]);
        for (std::size_t p = rest.first; p < rest.end; ++p) ev.moved.push_back(elems_[p]);
        std::sort(ev.kept.begin(), ev.kept.end());
        std::sort(ev.moved.begin(), ev.moved.end());
    }
    events_.push_back(std::move(ev));

    enqueue_after_split(j, count);
}

// Only one half is enqueued per symbol: j when it is not waiting and has no
// more incoming transitions than the new block (ties go to j), otherwise the
// new block. Empty sub-partitions are never enqueued.
void Refiner::enqueue_after_split(std::size_t j, std::size_t count) {
    for (Symbol s = 0; s < sigma_; ++s) {
        const std::size_t sj = sub_size(s, j);
        const std::size_t sc = sub_size(s, count);
        if (!waiting_[s].contains(j) && 0 < sj && sj <= sc) {
            waiting_[s].insert(j);
        } else if (sc > 0) {
            waiting_[s].insert(count);
        }
    }
}

MinimiseResult Refiner::run() {
    // Initial partition by output label, numbered by first occurrence.
    std::map<std::vector<std::uint8_t>, std::size_t> by_label;
    std::vector<std::size_t> initial_block(n_);
    for (StateId q = 0; q < n_; ++q) {
        auto row = a_.label_row(q);
        auto [it, fresh] = by_label.emplace(std::vector<std::uint8_t>(row.begin(), row.end()), by_label.size());
        initial_block[q] = it->second;
    }
    const std::size_t blocks = by_label.size();
    std::vector<std::uint32_t> labels(initial_block.begin(), initial_block.end());
    Partition initial = Partition::from_labels(labels);

    auto finish = [&](bool early) {
        std::vector<std::uint32_t> block_of(n_);
        for (StateId q = 0; q < n_; ++q) {
            block_of[q] = early ? labels[q] : static_cast<std::uint32_t>(storage_block_[storage_of_[q]]);
        }
        Partition p = Partition::from_labels(block_of);
        KripkeStructure q = quotient(a_, p);
        return MinimiseResult{a_, std::move(p), std::move(q), std::move(initial), moves_, early, std::move(events_)};
    };
    if (blocks == n_) return finish(true);

    // Block storages in initial-block order.
    elems_.resize(n_);
    loc_.resize(n_);
    storage_of_.resize(n_);
    range_.assign(blocks, Range{0, 0});
    {
        std::vector<std::size_t> sizes(blocks, 0);
        for (StateId q = 0; q < n_; ++q) ++sizes[initial_block[q]];
        std::size_t acc = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            range_[b] = Range{acc, acc};
            acc += sizes[b];
        }
        for (StateId q = 0; q < n_; ++q) {
            const std::size_t b = initial_block[q];
            const std::size_t pos = range_[b].end++;
            elems_[pos] = q;
            loc_[q] = pos;
            storage_of_[q] = b;
        }
    }
    marked_.assign(blocks, 0);
    block_storage_.resize(blocks);
    storage_block_.resize(blocks);
    for (std::size_t b = 0; b < blocks; ++b) block_storage_[b] = storage_block_[b] = b;

    pred_start_.assign(sigma_, std::vector<std::size_t>(n_ + 1, 0));
    pred_.assign(sigma_, std::vector<StateId>(n_));
    has_pred_.assign(sigma_, std::vector<bool>(n_, false));
    for (Symbol s = 0; s < sigma_; ++s) {
        auto& start = pred_start_[s];
        for (StateId r = 0; r < n_; ++r) ++start[a_.next(r, s) + 1];
        for (std::size_t q = 0; q < n_; ++q) start[q + 1] += start[q];
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (StateId r = 0; r < n_; ++r) pred_[s][fill[a_.next(r, s)]++] = r;
        for (StateId q = 0; q < n_; ++q) has_pred_[s][q] = start[q + 1] > start[q];
    }

    // Sub-partitions B(s, i): states of block i with an s-predecessor.
    sub_elems_.assign(sigma_, {});
    sub_loc_.assign(sigma_, std::vector<std::size_t>(n_, 0));
    sub_range_.assign(sigma_, std::vector<Range>(blocks, Range{0, 0}));
    for (Symbol s = 0; s < sigma_; ++s) {
        for (std::size_t b = 0; b < blocks; ++b) {
            sub_range_[s][b].first = sub_elems_[s].size();
            for (std::size_t p = range_[b].first; p < range_[b].end; ++p) {
                const StateId q = elems_[p];
                if (!has_pred_[s][q]) continue;
                sub_loc_[s][q] = sub_elems_[s].size();
                sub_elems_[s].push_back(q);
            }
            sub_range_[s][b].end = sub_elems_[s].size();
        }
    }

    waiting_.assign(sigma_, {});
    for (Symbol s = 0; s < sigma_; ++s) {
        for (std::size_t b = 0; b < blocks; ++b) {
            if (sub_size(s, b) > 0) waiting_[s].insert(b);
        }
    }

    bool splittable = true;
    std::vector<StateId> splitter;
    while (splittable) {
        for (Symbol s = 0; s < sigma_; ++s) {
            while (!waiting_[s].empty()) {
                const std::size_t i = *waiting_[s].begin();
                waiting_[s].erase(waiting_[s].begin());

                // Freeze the splitter before any block (including i) changes.
                const Range sr = sub_range_[s][block_storage_[i]];
                splitter.assign(sub_elems_[s].begin() + static_cast<std::ptrdiff_t>(sr.first),
                                sub_elems_[s].begin() + static_cast<std::ptrdiff_t>(sr.end));
                touched_.clear();
                for (StateId q : splitter) {
                    for (std::size_t p = pred_start_[s][q]; p < pred_start_[s][q + 1]; ++p) mark(pred_[s][p]);
                }
                // Blocks in ascending algorithm order.
                std::sort(touched_.begin(), touched_.end(),
                          [&](std::size_t x, std::size_t y) { return storage_block_[x] < storage_block_[y]; });
                for (std::size_t st : touched_) {
                    if (marked_[st] < range_[st].size()) split(st, s, i);
                    marked_[st] = 0;
                }
            }
        }
        splittable = std::any_of(waiting_.begin(), waiting_.end(), [](const auto& w) { return !w.empty(); });
    }
    return finish(false);
}

} // namespace

MinimiseResult minimise(const KripkeStructure& a, MinimiseOptions options) {
    KripkeStructure reachable = restrict_to_reachable(a);
    Refiner r(reachable, options.trace);
    return r.run();
}

Partition nerode_bruteforce(const KripkeStructure& a) {
    const std::size_t n = a.num_states();
    const std::size_t sigma = a.alphabet().size();
    std::vector<std::uint8_t> distinct(n * n, 0);
    for (StateId p = 0; p < n; ++p) {
        for (StateId q = 0; q < n; ++q) {
            auto rp = a.label_row(p);
            auto rq = a.label_row(q);
            distinct[p * n + q] = !std::equal(rp.begin(), rp.end(), rq.begin());
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId p = 0; p < n; ++p) {
            for (StateId q = p + 1; q < n; ++q) {
                if (distinct[p * n + q]) continue;
                for (Symbol s = 0; s < sigma; ++s) {
                    if (distinct[a.next(p, s) * n + a.next(q, s)]) {
                        distinct[p * n + q] = distinct[q * n + p] = 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    std::vector<std::uint32_t> label(n, ~std::uint32_t{0});
    for (StateId p = 0; p < n; ++p) {
        if (label[p] != ~std::uint32_t{0}) continue;
        label[p] = p;
        for (StateId q = p + 1; q < n; ++q) {
            if (!distinct[p * n + q]) label[q] = p;
        }
    }
    return Partition::from_labels(label);
}

KripkeStructure quotient(const KripkeStructure& a, const Partition& p) {
    if (p.num_states() != a.num_states()) throw InputError("partition size does not match the structure");
    const std::size_t sigma = a.alphabet().size();
    std::vector<StateId> trans;
    std::vector<std::uint8_t> labels;
    trans.reserve(p.num_blocks() * sigma);
    labels.reserve(p.num_blocks() * a.bits());
    for (std::size_t b = 0; b < p.num_blocks(); ++b) {
        const auto& members = p.block(b);
        const StateId rep = members.front();
        auto rrow = a.label_row(rep);
        for (StateId q : members) {
            auto row = a.label_row(q);
            if (!std::equal(row.begin(), row.end(), rrow.begin())) {
                throw InputError("not a congruence: states " + std::to_string(rep) + " and " + std::to_string(q) +
                                 " share a block but have different outputs");
            }
            for (Symbol s = 0; s < sigma; ++s) {
                if (p.block_of(a.next(q, s)) != p.block_of(a.next(rep, s))) {
                    throw InputError("not a congruence: states " + std::to_string(rep) + " and " + std::to_string(q) +
                                     " share a block but their '" + a.alphabet()[s] + "'-successors do not");
                }
            }
        }
        for (Symbol s = 0; s < sigma; ++s) trans.push_back(p.block_of(a.next(rep, s)));
        labels.insert(labels.end(), rrow.begin(), rrow.end());
    }
    return KripkeStructure(a.alphabet(), a.bits(), p.block_of(a.initial()), std::move(trans), std::move(labels));
}

} // namespace ikl
