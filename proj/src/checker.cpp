#include "ikl/checker.hpp"

#include <algorithm>

#include "ikl/errors.hpp"

namespace ikl {
namespace {

// A configuration is a state plus the symbol that entered it; `in == s`
// atoms need the latter. Slot |alphabet| stands for "no symbol yet".
class Configs {
public:
    explicit Configs(const KripkeStructure& h) : h_(h), sigma_(h.alphabet().size()) {}

    std::size_t size() const { return h_.num_states() * (sigma_ + 1); }
    std::size_t start() const { return h_.initial() * (sigma_ + 1) + sigma_; }
    std::size_t next(std::size_t c, Symbol s) const { return h_.next(state(c), s) * (sigma_ + 1) + s; }

    bool holds(const Expr& e, std::size_t c) const {
        const std::size_t l = c % (sigma_ + 1);
        std::optional<Symbol> last;
        if (l < sigma_) last = static_cast<Symbol>(l);
        return evaluate(e, h_.label_row(state(c)), last, h_.alphabet());
    }

private:
    StateId state(std::size_t c) const { return static_cast<StateId>(c / (sigma_ + 1)); }

    const KripkeStructure& h_;
    std::size_t sigma_;
};

std::optional<Word> first_violation(const Configs& cs, const Expr& phi, std::size_t sigma) {
    constexpr std::size_t none = ~std::size_t{0};
    std::vector<std::size_t> parent(cs.size(), none);
    std::vector<Symbol> via(cs.size(), 0);
    std::vector<bool> seen(cs.size(), false);
    std::vector<std::size_t> queue{cs.start()};
    seen[cs.start()] = true;
    // Symbol-ordered BFS dequeues configurations in shortlex order of their
    // access words.
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t c = queue[head];
        if (!cs.holds(phi, c)) {
            Word w;
            for (std::size_t x = c; parent[x] != none; x = parent[x]) w.push_back(via[x]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (Symbol s = 0; s < sigma; ++s) {
            const std::size_t d = cs.next(c, s);
            if (seen[d]) continue;
            seen[d] = true;
            parent[d] = c;
            via[d] = s;
            queue.push_back(d);
        }
    }
    return std::nullopt;
}

// bad[d][c]: some length-d input from c visits only configurations where
// phi is false (including c itself).
std::optional<Word> bounded_violation(const Configs& cs, const Expr& phi, std::size_t sigma, std::size_t k) {
    const std::size_t m = cs.size();
    std::vector<bool> fails(m);
    for (std::size_t c = 0; c < m; ++c) fails[c] = !cs.holds(phi, c);
    std::vector<std::vector<bool>> bad(k + 1, std::vector<bool>(m, false));
    bad[0] = fails;
    for (std::size_t d = 1; d <= k; ++d) {
        for (std::size_t c = 0; c < m; ++c) {
            if (!fails[c]) continue;
            for (Symbol s = 0; s < sigma && !bad[d][c]; ++s) bad[d][c] = bad[d - 1][cs.next(c, s)];
        }
    }
    std::size_t c = cs.start();
    if (!bad[k][c]) return std::nullopt;
    Word w;
    for (std::size_t d = k; d > 0; --d) {
        Symbol s = 0;
        while (!bad[d - 1][cs.next(c, s)]) ++s;
        w.push_back(s);
        c = cs.next(c, s);
    }
    return w;
}

} // namespace

std::vector<BitVector> run_outputs(const KripkeStructure& h, const Word& w) {
    std::vector<BitVector> out;
    out.reserve(w.size() + 1);
    StateId q = h.initial();
    out.push_back(h.output(q));
    for (Symbol s : w) {
        q = h.next(q, s);
        out.push_back(h.output(q));
    }
    return out;
}

Verdict check(const KripkeStructure& h, const Requirement& r) {
    validate_requirement(r, h.alphabet(), h.bits());
    const Configs cs(h);
    const std::size_t sigma = h.alphabet().size();

    switch (r.kind) {
    case Requirement::Kind::Always:
    case Requirement::Kind::Never: {
        const ExprPtr phi = r.kind == Requirement::Kind::Never ? Expr::make_not(r.body) : r.body;
        if (auto w = first_violation(cs, *phi, sigma)) return Counterexample{std::move(*w), to_string(*phi)};
        return Pass{};
    }
    case Requirement::Kind::Within:
        if (auto w = bounded_violation(cs, *r.body, sigma, r.bound)) return Counterexample{std::move(*w), to_string(*r.body)};
        return Pass{};
    case Requirement::Kind::After: {
        Word w;
        for (const auto& s : r.word) w.push_back(h.alphabet().index_of(s));
        std::size_t c = cs.start();
        for (Symbol s : w) c = cs.next(c, s);
        if (!cs.holds(*r.body, c)) return Counterexample{std::move(w), to_string(*r.body)};
        return Pass{};
    }
    }
    throw InternalError("unknown requirement kind");
}

} // namespace ikl
