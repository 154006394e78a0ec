#include "ikl/kripke_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ikl/errors.hpp"

namespace ikl {
namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // Next meaningful line split into tokens; empty vector at end of input.
    std::vector<std::string> next() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::istringstream ls(line);
            std::vector<std::string> toks;
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (toks.empty() || toks[0][0] == '#') continue;
            return toks;
        }
        return {};
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("kripke file, line " + std::to_string(line_no) + ": " + msg);
    }

    std::size_t number(const std::string& tok) const {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) fail("expected a number, got '" + tok + "'");
        try {
            return std::stoull(tok);
        } catch (const std::exception&) {
            fail("number out of range: '" + tok + "'");
        }
    }
};

} // namespace

void write_kripke(std::ostream& out, const KripkeStructure& a) {
    const auto& alpha = a.alphabet();
    out << "kripke " << a.num_states() << ' ' << a.bits() << '\n';
    out << "alphabet";
    for (const auto& s : alpha.symbols()) out << ' ' << s;
    out << '\n';
    out << "initial " << a.initial() << '\n';
    for (StateId q = 0; q < a.num_states(); ++q) out << "state " << q << ' ' << a.output(q).to_string() << '\n';
    for (StateId q = 0; q < a.num_states(); ++q) {
        for (Symbol s = 0; s < alpha.size(); ++s) out << "trans " << q << ' ' << alpha[s] << ' ' << a.next(q, s) << '\n';
    }
}

KripkeStructure read_kripke(std::istream& in) {
    LineReader r{in};

    auto header = r.next();
    if (header.size() != 3 || header[0] != "kripke") r.fail("expected 'kripke <n> <k>'");
    const std::size_t n = r.number(header[1]);
    const std::size_t k = r.number(header[2]);
    if (n == 0) r.fail("state count must be positive");
    if (k == 0) r.fail("bit width must be positive");

    auto alpha_line = r.next();
    if (alpha_line.size() < 2 || alpha_line[0] != "alphabet") r.fail("expected 'alphabet <sym> ...'");
    std::optional<Alphabet> alphabet;
    try {
        alphabet.emplace(std::vector<std::string>(alpha_line.begin() + 1, alpha_line.end()));
    } catch (const InputError& e) {
        r.fail(e.what());
    }
    const std::size_t sigma = alphabet->size();

    auto init_line = r.next();
    if (init_line.size() != 2 || init_line[0] != "initial") r.fail("expected 'initial <qid>'");
    const std::size_t initial = r.number(init_line[1]);
    if (initial >= n) r.fail("initial state out of range");

    std::vector<std::uint8_t> labels(n * k, 0);
    std::vector<bool> have_state(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        auto t = r.next();
        if (t.size() != 3 || t[0] != "state") r.fail("expected 'state <qid> <bits>'");
        const std::size_t q = r.number(t[1]);
        if (q >= n) r.fail("state id out of range");
        if (have_state[q]) r.fail("duplicate state " + std::to_string(q));
        have_state[q] = true;
        if (t[2].size() != k) r.fail("label of state " + std::to_string(q) + " is not " + std::to_string(k) + " bits wide");
        for (std::size_t c = 0; c < k; ++c) {
            if (t[2][c] != '0' && t[2][c] != '1') r.fail("malformed bit string '" + t[2] + "'");
            labels[q * k + c] = t[2][c] == '1';
        }
    }

    constexpr StateId kUnset = ~StateId{0};
    std::vector<StateId> trans(n * sigma, kUnset);
    for (std::size_t i = 0; i < n * sigma; ++i) {
        auto t = r.next();
        if (t.empty()) r.fail("missing transitions: expected " + std::to_string(n * sigma) + ", got " + std::to_string(i));
        if (t.size() != 4 || t[0] != "trans") r.fail("expected 'trans <qid> <sym> <qid>'");
        const std::size_t q = r.number(t[1]);
        if (q >= n) r.fail("state id out of range");
        auto s = alphabet->find(t[2]);
        if (!s) r.fail("unknown symbol '" + t[2] + "'");
        const std::size_t target = r.number(t[3]);
        if (target >= n) r.fail("transition target out of range");
        auto& slot = trans[q * sigma + *s];
        if (slot != kUnset) r.fail("duplicate transition from state " + t[1] + " on '" + t[2] + "'");
        slot = static_cast<StateId>(target);
    }
    if (!r.next().empty()) r.fail("unexpected trailing content");

    return KripkeStructure(std::move(*alphabet), k, static_cast<StateId>(initial), std::move(trans), std::move(labels));
}

void save_kripke(const std::filesystem::path& path, const KripkeStructure& a) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    write_kripke(out, a);
    if (!out) throw InputError("write failed for " + path.string());
}

KripkeStructure load_kripke(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return read_kripke(in);
}

} // namespace ikl
