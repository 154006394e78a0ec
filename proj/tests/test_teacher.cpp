#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "ikl/errors.hpp"
#include "ikl/external_teacher.hpp"
#include "ikl/kripke_io.hpp"
#include "ikl/sut_server.hpp"
#include "ikl/teacher.hpp"
#include "oracles.hpp"

using namespace ikl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("ikl_teacher_" + std::to_string(getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string sut_command(const fs::path& model) {
    return std::string("'") + IKL_SUT_PATH + "' '" + model.string() + "'";
}

Word random_word(std::mt19937_64& rng, std::size_t sigma, std::size_t max_len) {
    Word w(rng() % (max_len + 1));
    for (auto& s : w) s = static_cast<Symbol>(rng() % sigma);
    return w;
}

} // namespace

TEST_CASE("kripke teacher answers lambda star and counts") {
    KripkeTeacher t(fx::parity());
    CHECK(t.query({}) == BitVector::from_string("0"));
    CHECK(t.query({0}) == BitVector::from_string("1"));
    CHECK(t.query({0, 1}) == BitVector::from_string("1"));
    CHECK(t.query_count() == 3);
    CHECK(t.bits() == 1);
    CHECK(t.alphabet() == fx::ab());
}

TEST_CASE("cache deduplicates and keeps first-seen order") {
    KripkeTeacher inner(fx::parity());
    CachedTeacher cache(inner);
    const Word w1{0}, w2{1, 0, 0};
    const BitVector a = cache.query(w1);
    const BitVector b = cache.query(w1);
    CHECK(a == b);
    CHECK(inner.query_count() == 1);
    CHECK(cache.query_count() == 2);
    cache.query(w2);
    REQUIRE(cache.log().size() == 2);
    CHECK(cache.log()[0] == std::make_pair(w1, a));
    CHECK(cache.log()[1].first == w2);
    CHECK(cache.unique_count() == 2);
    CHECK(cache.lookup(w2) == BitVector::from_string("0"));
    CHECK_FALSE(cache.lookup({1}).has_value());
    CHECK(cache.query_count() == 3);
}

TEST_CASE("teacher answers are deterministic") {
    std::mt19937_64 rng(1);
    const auto a = random_kripke(4, 12, 3, oracle::letters(3));
    KripkeTeacher t(a);
    for (int i = 0; i < 100; ++i) {
        const Word w = random_word(rng, 3, 10);
        CHECK(t.query(w) == t.query(w));
    }
}

TEST_CASE("server speaks the wire protocol") {
    std::istringstream in("RESET\nSTEP a\nSTEP a\nSTEP b\nSTEP z\nJUMP\n\nRESET\nQUIT\nRESET\n");
    std::ostringstream out;
    const std::size_t handled = serve_kripke(in, out, fx::parity());
    CHECK(handled == 8);
    CHECK(out.str() == "OK 0\nOK 1\nOK 0\nOK 0\nERR unknown symbol z\nERR bad command\nOK 0\n");
}

TEST_CASE("external teacher agrees with the in-process teacher") {
    TempDir dir;
    const auto model = random_kripke(21, 15, 4, Alphabet({"up", "down", "open", "close"}));
    const fs::path file = dir.path / "m.kripke";
    save_kripke(file, model);

    ExternalTeacher ext(sut_command(file), model.alphabet(), model.bits());
    KripkeTeacher ref(model);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const Word w = random_word(rng, 4, 12);
        REQUIRE(ext.query(w) == ref.query(w));
        CHECK(ext.last_trace().size() == w.size() + 1);
    }
    CHECK(ext.query_count() == 1000);
}

TEST_CASE("external teacher reports the per-step outputs") {
    TempDir dir;
    const fs::path file = dir.path / "p.kripke";
    save_kripke(file, fx::parity());
    ExternalTeacher ext(sut_command(file), fx::ab(), 1);
    CHECK(ext.query({0, 1, 0}) == BitVector::from_string("0"));
    std::vector<std::string> trace;
    for (const auto& b : ext.last_trace()) trace.push_back(b.to_string());
    CHECK(trace == std::vector<std::string>{"0", "1", "1", "0"});
}

TEST_CASE("protocol violations become teacher errors") {
    const Alphabet al = fx::ab();
    SUBCASE("wrong width") {
        ExternalTeacher ext("while read l; do echo 'OK 01'; done", al, 1);
        CHECK_THROWS_AS(ext.query({0}), TeacherError);
    }
    SUBCASE("not a bit string") {
        ExternalTeacher ext("while read l; do echo 'OK 2'; done", al, 1);
        CHECK_THROWS_AS(ext.query({}), TeacherError);
    }
    SUBCASE("error reply") {
        ExternalTeacher ext("while read l; do echo 'ERR jammed'; done", al, 1);
        CHECK_THROWS_WITH_AS(ext.query({0}), doctest::Contains("jammed"), TeacherError);
    }
    SUBCASE("garbage reply") {
        ExternalTeacher ext("while read l; do echo 'HELLO'; done", al, 1);
        CHECK_THROWS_AS(ext.query({0}), TeacherError);
    }
    SUBCASE("stream closed mid-query") {
        ExternalTeacher ext("read l; echo 'OK 0'; exit 0", al, 1);
        CHECK_THROWS_AS(ext.query({0, 1}), TeacherError);
        // A dead SUT stays dead.
        CHECK_THROWS_AS(ext.query({}), TeacherError);
    }
    SUBCASE("command not found") {
        ExternalTeacher ext("/nonexistent/sut-binary 2>/dev/null", al, 1);
        CHECK_THROWS_AS(ext.query({}), TeacherError);
    }
}
