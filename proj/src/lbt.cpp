#include "ikl/lbt.hpp"

#include <chrono>

#include "ikl/checker.hpp"
#include "ikl/errors.hpp"
#include "ikl/minimiser.hpp"
#include "ikl/product.hpp"

namespace ikl {

std::string to_string(QuerySource s) {
    switch (s) {
    case QuerySource::Init: return "init";
    case QuerySource::ModelChecker: return "model-checker";
    case QuerySource::Random: return "random";
    }
    return "?";
}

std::string to_string(LbtVerdict v) {
    switch (v) {
    case LbtVerdict::TrueNegativeFound: return "true-negative";
    case LbtVerdict::ConvergedNoViolation: return "converged";
    case LbtVerdict::BudgetExhausted: return "budget-exhausted";
    case LbtVerdict::TeacherFailure: return "teacher-failure";
    }
    return "?";
}

bool UsedStrings::insert(const Word& w) {
    if (!set_.insert(w).second) return false;
    if (per_length_.size() <= w.size()) per_length_.resize(w.size() + 1, 0);
    ++per_length_[w.size()];
    return true;
}

namespace {

constexpr double kLengthP = 0.2;
constexpr std::size_t kEnumerateLimit = 4096;

// |alphabet|^len, saturating at limit + 1.
std::size_t stratum_size(std::size_t alphabet_size, std::size_t len, std::size_t limit) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) {
        total *= alphabet_size;
        if (total > limit) return limit + 1;
    }
    return total;
}

Word decode(std::size_t index, std::size_t alphabet_size, std::size_t len) {
    Word w(len);
    for (std::size_t i = len; i-- > 0;) {
        w[i] = static_cast<Symbol>(index % alphabet_size);
        index /= alphabet_size;
    }
    return w;
}

} // namespace

std::optional<Word> next_random_query(std::mt19937_64& rng, const UsedStrings& used, std::size_t alphabet_size,
                                      std::size_t cap) {
    if (alphabet_size == 0) throw InputError("empty alphabet");
    // Strata larger than the used set can never be exhausted; lengths whose
    // geometric weight underflows carry no mass and are dropped.
    std::vector<double> weights;
    bool any = false;
    bool roomy = false;
    std::size_t stratum = 1;
    double w = kLengthP;
    for (std::size_t len = 0; len <= cap && w > 0.0; ++len) {
        const bool free = roomy || used.count_of_length(len) < stratum;
        weights.push_back(free ? w : 0.0);
        any = any || free;
        w *= 1.0 - kLengthP;
        if (!roomy) {
            if (stratum > used.size() / alphabet_size) {
                roomy = true;
            } else {
                stratum *= alphabet_size;
            }
        }
    }
    if (!any) return std::nullopt;
    std::discrete_distribution<std::size_t> pick_length(weights.begin(), weights.end());
    const std::size_t len = pick_length(rng);

    if (stratum_size(alphabet_size, len, kEnumerateLimit) <= kEnumerateLimit) {
        const std::size_t total = stratum_size(alphabet_size, len, kEnumerateLimit);
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < total; ++i) {
            if (!used.contains(decode(i, alphabet_size, len))) free.push_back(i);
        }
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
        return decode(free[pick(rng)], alphabet_size, len);
    }
    // Large stratum with at least one free string: rejection sampling.
    std::uniform_int_distribution<Symbol> sym(0, static_cast<Symbol>(alphabet_size - 1));
    for (;;) {
        Word w(len);
        for (auto& s : w) s = sym(rng);
        if (!used.contains(w)) return w;
    }
}

bool n_equivalence_converged(const std::vector<Hypothesis>& history, std::size_t n) {
    if (n == 0) throw InputError("convergence window n must be at least 1");
    if (history.size() < n + 1) return false;
    for (std::size_t i = history.size() - n; i < history.size(); ++i) {
        if (history[i] == history[i - 1]) continue;
        if (!behaviourally_equivalent(*history[i - 1], *history[i])) return false;
    }
    return true;
}

LbtReport lbt_run(Teacher& teacher, const LbtConfig& cfg, const LbtObserver& observer) {
    if (cfg.n == 0) throw InputError("convergence window n must be at least 1");
    if (!(cfg.model_check_ratio >= 0.0 && cfg.model_check_ratio <= 1.0)) {
        throw InputError("model-check ratio must lie in [0, 1]");
    }
    if (cfg.max_queries == 0 || !(cfg.max_seconds > 0.0)) throw InputError("budgets must be positive");
    validate_requirement(cfg.requirement, teacher.alphabet(), teacher.bits());

    const auto started = std::chrono::steady_clock::now();
    const Alphabet& alphabet = teacher.alphabet();
    CachedTeacher cache(teacher);
    std::mt19937_64 rng(cfg.seed);
    std::bernoulli_distribution ask_checker(cfg.model_check_ratio);
    UsedStrings used;
    LbtReport report;
    std::vector<Hypothesis> history;

    try {
        FidLearner fid(cache, cfg.fid);
        FamilySnapshot family = fid.family();

        IterationRecord rec;
        auto rebuild = [&](const FamilySnapshot& f) {
            rec.family_states.clear();
            for (const auto& d : *f) rec.family_states.push_back(d.num_states());
            KripkeStructure product = subdirect_product(*f);
            rec.product_states = product.num_states();
            auto h = std::make_shared<const KripkeStructure>(minimise(product).quotient);
            rec.min_states = h->num_states();
            return h;
        };
        auto publish = [&](const Hypothesis& h) {
            rec.cum_queries = cache.query_count();
            rec.unique_queries = cache.unique_count();
            report.iterations.push_back(rec);
            history.push_back(h);
            if (observer) observer(rec, h, fid);
        };

        Hypothesis h = rebuild(family);
        rec.hypothesis_changed = true;
        publish(h);
        std::size_t cap = 4 * (rec.product_states + 1);

        for (std::size_t t = 1;; ++t) {
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            if (t > cfg.max_queries || elapsed > cfg.max_seconds) {
                report.verdict = LbtVerdict::BudgetExhausted;
                break;
            }

            // Steps 2 and 3: pick the next test.
            std::optional<Word> test;
            QuerySource source = QuerySource::Random;
            if (ask_checker(rng)) {
                Verdict v = check(*h, cfg.requirement);
                if (auto* ce = std::get_if<Counterexample>(&v); ce && !used.contains(ce->word)) {
                    test = ce->word;
                    source = QuerySource::ModelChecker;
                }
            }
            while (!test) {
                test = next_random_query(rng, used, alphabet.size(), cap);
                if (!test) cap *= 2;
            }
            used.insert(*test);

            std::vector<BitVector> outputs;
            outputs.reserve(test->size() + 1);
            Word prefix;
            outputs.push_back(cache.query(prefix));
            for (Symbol s : *test) {
                prefix.push_back(s);
                outputs.push_back(cache.query(prefix));
            }
            if (trace_violates(cfg.requirement, alphabet, *test, outputs)) {
                report.verdict = LbtVerdict::TrueNegativeFound;
                report.witness = *test;
                report.observed = std::move(outputs);
                rec.iter = t;
                rec.source = source;
                rec.query_len = test->size();
                rec.hypothesis_changed = false;
                rec.cum_queries = cache.query_count();
                rec.unique_queries = cache.unique_count();
                report.iterations.push_back(rec);
                break;
            }

            // Steps 1 and 4: refine and rebuild only if the family changed.
            const FamilySnapshot& next = fid.process(*test);
            rec.iter = t;
            rec.source = source;
            rec.query_len = test->size();
            rec.hypothesis_changed = next != family;
            if (rec.hypothesis_changed) {
                family = next;
                h = rebuild(family);
                cap = std::max(cap, 4 * (rec.product_states + 1));
            }
            publish(h);

            if (n_equivalence_converged(history, cfg.n)) {
                report.verdict = LbtVerdict::ConvergedNoViolation;
                break;
            }
        }
    } catch (const TeacherError& e) {
        report.verdict = LbtVerdict::TeacherFailure;
        report.error = e.what();
    }
    report.final_hypothesis = history.empty() ? nullptr : history.back();
    return report;
}

} // namespace ikl
