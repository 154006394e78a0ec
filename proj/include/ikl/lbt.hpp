#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "ikl/fid_learner.hpp"
#include "ikl/kripke.hpp"
#include "ikl/requirement.hpp"
#include "ikl/teacher.hpp"

namespace ikl {

struct LbtConfig {
    Requirement requirement;
    /// Test strings executed on the SUT (one per iteration).
    std::uint64_t max_queries = 100000;
    double max_seconds = 3600.0;
    std::uint64_t seed = 1;
    /// Convergence window: the last n+1 hypotheses must agree.
    std::size_t n = 50;
    /// Probability of asking the model checker before drawing at random.
    double model_check_ratio = 1.0;
    FidOptions fid = {};
};

enum class QuerySource { Init, ModelChecker, Random };
enum class LbtVerdict { TrueNegativeFound, ConvergedNoViolation, BudgetExhausted, TeacherFailure };

std::string to_string(QuerySource s);
std::string to_string(LbtVerdict v);

using Hypothesis = std::shared_ptr<const KripkeStructure>;

struct IterationRecord {
    std::size_t iter = 0;
    QuerySource source = QuerySource::Init;
    std::size_t query_len = 0;
    std::vector<std::size_t> family_states;  // per channel
    std::size_t product_states = 0;
    std::size_t min_states = 0;
    std::uint64_t cum_queries = 0;     // output queries asked, repeats included
    std::uint64_t unique_queries = 0;  // distinct words sent to the SUT
    bool hypothesis_changed = false;
};

struct LbtReport {
    LbtVerdict verdict = LbtVerdict::BudgetExhausted;
    /// TrueNegativeFound: the failing test and the SUT outputs along it.
    Word witness;
    std::vector<BitVector> observed;
    std::string error;  // TeacherFailure
    std::vector<IterationRecord> iterations;
    Hypothesis final_hypothesis;
};

/// Called once per hypothesis (iteration 0 is the initial one).
using LbtObserver = std::function<void(const IterationRecord&, const Hypothesis&, const FidLearner&)>;

/// Strings already executed, with per-length counts so that exhausted
/// lengths can be skipped.
class UsedStrings {
public:
    bool contains(const Word& w) const { return set_.contains(w); }
    bool insert(const Word& w);
    std::size_t count_of_length(std::size_t len) const { return len < per_length_.size() ? per_length_[len] : 0; }
    std::size_t size() const noexcept { return set_.size(); }

private:
    std::unordered_set<Word, WordHash> set_;
    std::vector<std::size_t> per_length_;
};

/// Unused string of length at most `cap`: the length is geometric
/// (p = 0.2) over the lengths that still have unused strings, the string
/// uniform within that length. nullopt when every string up to `cap` is used.
std::optional<Word> next_random_query(std::mt19937_64& rng, const UsedStrings& used, std::size_t alphabet_size,
                                      std::size_t cap);

/// True iff history has at least n+1 entries and each successive pair among
/// the last n+1 is behaviourally equivalent. Shared snapshots count as equal
/// without a check.
bool n_equivalence_converged(const std::vector<Hypothesis>& history, std::size_t n);

/// The learn / model-check / test loop. Throws InputError if the config or
/// requirement does not fit the teacher.
LbtReport lbt_run(Teacher& teacher, const LbtConfig& cfg, const LbtObserver& observer = {});

} // namespace ikl
