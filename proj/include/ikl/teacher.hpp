#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ikl/kripke.hpp"

namespace ikl {

/// Answers output queries lambda*(w) about a system under test. Answers
/// must be deterministic; every call to query() counts as one query.
class Teacher {
public:
    virtual ~Teacher() = default;

    virtual const Alphabet& alphabet() const = 0;
    virtual std::size_t bits() const = 0;

    BitVector query(const Word& w) {
        ++queries_;
        return answer(w);
    }
    std::uint64_t query_count() const noexcept { return queries_; }

protected:
    virtual BitVector answer(const Word& w) = 0;

private:
    std::uint64_t queries_ = 0;
};

/// In-process teacher backed by a known structure.
class KripkeTeacher final : public Teacher {
public:
    explicit KripkeTeacher(KripkeStructure model) : model_(std::move(model)) {}

    const Alphabet& alphabet() const override { return model_.alphabet(); }
    std::size_t bits() const override { return model_.bits(); }
    const KripkeStructure& model() const noexcept { return model_; }

protected:
    BitVector answer(const Word& w) override { return model_.lambda_star(w); }

private:
    KripkeStructure model_;
};

using QueryLog = std::vector<std::pair<Word, BitVector>>;

/// Memoizing layer. query_count() counts every request made to the cache;
/// the wrapped teacher's own counter only sees cache misses.
class CachedTeacher final : public Teacher {
public:
    explicit CachedTeacher(Teacher& inner) : inner_(inner) {}

    const Alphabet& alphabet() const override { return inner_.alphabet(); }
    std::size_t bits() const override { return inner_.bits(); }

    /// Cached answer without counting or forwarding.
    std::optional<BitVector> lookup(const Word& w) const;

    /// First-seen order, one entry per distinct word.
    const QueryLog& log() const noexcept { return log_; }
    std::uint64_t unique_count() const noexcept { return log_.size(); }
    const Teacher& inner() const noexcept { return inner_; }

protected:
    BitVector answer(const Word& w) override;

private:
    Teacher& inner_;
    std::unordered_map<Word, std::size_t, WordHash> index_;
    QueryLog log_;
};

} // namespace ikl
