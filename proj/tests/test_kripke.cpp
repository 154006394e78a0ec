#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "ikl/errors.hpp"
#include "ikl/kripke.hpp"
#include "ikl/kripke_io.hpp"
#include "oracles.hpp"

using namespace ikl;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t sigma, std::size_t max_len) {
    Word w(rng() % (max_len + 1));
    for (auto& s : w) s = static_cast<Symbol>(rng() % sigma);
    return w;
}

} // namespace

TEST_CASE("alphabet rejects duplicates and unknown tokens") {
    CHECK_THROWS_AS(Alphabet({"a", "a"}), InputError);
    CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), InputError);
    const Alphabet al = fx::ab();
    CHECK(al.parse_word("a b a") == Word{0, 1, 0});
    CHECK(al.parse_word("").empty());
    CHECK_THROWS_AS(al.parse_word("a c"), InputError);
    CHECK(al.format_word({1, 0}) == "b a");
    CHECK(Alphabet::from_csv("up,down,open") == Alphabet({"up", "down", "open"}));
}

TEST_CASE("structure construction checks its tables") {
    CHECK_THROWS_AS(KripkeStructure(fx::ab(), 1, 0, {0, 2}, {0}), InputError);
    CHECK_THROWS_AS(KripkeStructure(fx::ab(), 1, 1, {0, 0}, {0}), InputError);
    CHECK_THROWS_AS(KripkeStructure(fx::ab(), 2, 0, {0, 0}, {0}), InputError);
}

TEST_CASE("delta_star and lambda_star on the parity automaton") {
    const auto p = fx::parity();
    const auto al = p.alphabet();
    CHECK(p.delta_star(1, {}) == 1);
    CHECK(p.delta_star(0, fx::w(al, "a a b")) == 0);
    CHECK(p.delta_star(0, fx::w(al, "a b a")) == 0);
    CHECK(p.lambda_star({}) == BitVector::from_string("0"));
    CHECK(p.lambda_star(fx::w(al, "a")) == BitVector::from_string("1"));
    CHECK(p.lambda_star(fx::w(al, "a a")) == BitVector::from_string("0"));
    CHECK_THROWS_AS(p.delta_star(0, Word{2}), InputError);
}

TEST_CASE("delta_star is a monoid action") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_kripke(rng(), 1 + rng() % 10, 2, oracle::letters(3));
        for (int j = 0; j < 20; ++j) {
            const Word u = random_word(rng, 3, 6);
            const Word v = random_word(rng, 3, 6);
            const StateId q = static_cast<StateId>(rng() % a.num_states());
            CHECK(a.delta_star(q, concat(u, v)) == a.delta_star(a.delta_star(q, u), v));
        }
    }
}

TEST_CASE("projection is 1-based and reads one bit") {
    const auto p = fx::parity();
    CHECK(project(p, 1) == p);
    CHECK_THROWS_AS(project(p, 0), InputError);
    CHECK_THROWS_AS(project(p, 2), InputError);

    const auto c = fx::constant(fx::ab(), {0, 1});
    const auto second = project(c, 2);
    CHECK(second.bits() == 1);
    CHECK(second.label(0, 0));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_kripke(rng(), 1 + rng() % 8, 3, oracle::letters(2));
        for (std::size_t bit = 1; bit <= 3; ++bit) {
            const auto pr = project(a, bit);
            for (int j = 0; j < 10; ++j) {
                const Word w = random_word(rng, 2, 8);
                CHECK(pr.lambda_star(w)[0] == a.lambda_star(w)[bit - 1]);
            }
        }
    }
}

TEST_CASE("behavioural equivalence examples") {
    const auto p = fx::parity();
    CHECK(behaviourally_equivalent(p, p).is_equal());
    const auto zero = fx::constant(fx::ab(), {0});
    const auto one = fx::constant(fx::ab(), {1});
    const auto r = behaviourally_equivalent(zero, one);
    REQUIRE_FALSE(r.is_equal());
    CHECK(r.witness().empty());

    const auto m4 = fx::mod4_parity();
    CHECK(oracle::agree_up_to(p, m4, p.num_states() * m4.num_states()));
    CHECK(behaviourally_equivalent(p, m4).is_equal());

    CHECK_THROWS_AS(behaviourally_equivalent(p, fx::constant(oracle::letters(3), {0})), InputError);
    CHECK_THROWS_AS(behaviourally_equivalent(zero, fx::constant(fx::ab(), {0, 0})), InputError);
}

TEST_CASE("equivalence agrees with brute-force language comparison") {
    std::mt19937_64 rng(11);
    int unequal = 0;
    for (int i = 0; i < 300; ++i) {
        const auto al = oracle::letters(2);
        const auto a = random_kripke(rng(), 1 + rng() % 6, 1, al);
        const auto b = random_kripke(rng(), 1 + rng() % 6, 1, al);
        const auto ab = behaviourally_equivalent(a, b);
        const auto ba = behaviourally_equivalent(b, a);
        CHECK(ab.is_equal() == ba.is_equal());
        CHECK(ab.is_equal() == oracle::equivalent(a, b));
        if (a.num_states() * b.num_states() <= 16) {
            CHECK(ab.is_equal() == oracle::agree_up_to(a, b, a.num_states() * b.num_states()));
        }
        if (!ab.is_equal()) {
            ++unequal;
            const Word& w = ab.witness();
            CHECK(a.lambda_star(w) != b.lambda_star(w));
            // Shortest: every shorter word agrees.
            if (!w.empty()) CHECK(oracle::agree_up_to(a, b, w.size() - 1));
        }
    }
    CHECK(unequal > 0);
}

TEST_CASE("equivalence witness is lexicographically least among shortest") {
    // Differ only after "b a".
    const Alphabet al = fx::ab();
    const KripkeStructure a(al, 1, 0, {0, 1, 2, 1, 2, 2}, {0, 0, 0});
    const KripkeStructure b(al, 1, 0, {0, 1, 2, 1, 2, 2}, {0, 0, 1});
    const auto r = behaviourally_equivalent(a, b);
    REQUIRE_FALSE(r.is_equal());
    CHECK(r.witness() == fx::w(al, "b a"));
}

TEST_CASE("prefix closure") {
    const Alphabet al = fx::ab();
    CHECK(prefix_closure({fx::w(al, "a b")}) == std::set<Word>{{}, {0}, {0, 1}});
    CHECK(prefix_closure({Word{}}) == std::set<Word>{{}});
    CHECK(prefix_closure({}).empty());
    CHECK(prefix_closure({fx::w(al, "a b"), fx::w(al, "b")}) == std::set<Word>{{}, {0}, {0, 1}, {1}});
}

TEST_CASE("random structures are reachable and deterministic in the seed") {
    const auto al = oracle::letters(3);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 1 + seed % 17;
        const auto a = random_kripke(seed, n, 2, al);
        CHECK(a.num_states() == n);
        CHECK(reachable_states(a).size() == n);
        CHECK(oracle::reachable_count(a) == n);
        CHECK(random_kripke(seed, n, 2, al) == a);
    }
    const auto one = random_kripke(9, 1, 1, al);
    CHECK(one.transitions() == std::vector<StateId>{0, 0, 0});
}

TEST_CASE("reachability restriction and access words") {
    const Alphabet al({"a"});
    // State 1 is unreachable.
    const KripkeStructure a(al, 1, 0, {2, 0, 0}, {0, 1, 1});
    CHECK(reachable_states(a) == std::vector<StateId>{0, 2});
    const auto r = restrict_to_reachable(a);
    CHECK(r.num_states() == 2);
    CHECK(behaviourally_equivalent(a, r).is_equal());
    const auto acc = access_words(a);
    CHECK(acc[0] == Word{});
    CHECK_FALSE(acc[1].has_value());
    CHECK(acc[2] == Word{0});
    CHECK(restrict_to_reachable(fx::chain()) == fx::chain());
}

TEST_CASE("isomorphism ignores state numbering") {
    const auto p = fx::parity();
    const KripkeStructure swapped(fx::ab(), 1, 1, {1, 0, 0, 1}, {1, 0});
    CHECK(isomorphic(p, swapped));
    CHECK_FALSE(isomorphic(p, fx::mod4_parity()));
}

TEST_CASE("dfa view round-trips") {
    const Dfa d(fx::ends_ab());
    CHECK(d.kripke() == fx::ends_ab());
    const Alphabet al = fx::ab();
    CHECK(d.accepts(fx::w(al, "b a b")));
    CHECK_FALSE(d.accepts(fx::w(al, "a b a")));
    CHECK_THROWS_AS(Dfa(fx::constant(al, {0, 1})), InputError);
}

TEST_CASE("text format round trip") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 25; ++i) {
        const auto a = random_kripke(rng(), 1 + rng() % 12, 1 + rng() % 4, oracle::letters(1 + rng() % 4));
        std::stringstream ss;
        write_kripke(ss, a);
        CHECK(read_kripke(ss) == a);
    }
}

TEST_CASE("text format rejects malformed files") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_kripke(in);
    };
    const std::string head = "kripke 2 1\nalphabet a b\ninitial 0\nstate 0 0\nstate 1 1\n";
    const std::string trans = "trans 0 a 1\ntrans 0 b 0\ntrans 1 a 0\ntrans 1 b 1\n";
    CHECK(parse(head + trans) == fx::parity());
    CHECK(parse("# comment\n\n" + head + trans) == fx::parity());
    CHECK_THROWS_AS(parse(head + "trans 0 a 1\ntrans 0 b 0\ntrans 1 a 0\n"), InputError);
    CHECK_THROWS_AS(parse(head + trans + "trans 1 b 0\n"), InputError);
    CHECK_THROWS_AS(parse(head + "trans 0 a 1\ntrans 0 b 0\ntrans 1 a 0\ntrans 1 c 1\n"), InputError);
    CHECK_THROWS_AS(parse("kripke 2 1\nalphabet a b\ninitial 0\nstate 0 0\nstate 1 10\n" + trans), InputError);
    CHECK_THROWS_AS(parse("kripke 2 1\nalphabet a b\ninitial 5\nstate 0 0\nstate 1 1\n" + trans), InputError);
    CHECK_THROWS_AS(parse(""), InputError);
}
