// ikl: learn, minimise, compose, check and test deterministic Kripke structures.
//
// Exit codes: 0 success or pass, 1 counterexample or true negative,
// 2 usage or input error, 3 teacher or protocol error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ikl/checker.hpp"
#include "ikl/errors.hpp"
#include "ikl/external_teacher.hpp"
#include "ikl/fid_learner.hpp"
#include "ikl/id_learner.hpp"
#include "ikl/kripke_io.hpp"
#include "ikl/lbt.hpp"
#include "ikl/minimiser.hpp"
#include "ikl/product.hpp"
#include "ikl/requirement.hpp"

namespace fs = std::filesystem;
using namespace ikl;

namespace {

constexpr int kOk = 0;
constexpr int kFound = 1;
constexpr int kInputError = 2;
constexpr int kTeacherError = 3;

struct Globals {
    std::uint64_t seed = 1;
    bool verbose = false;
};

struct SutArgs {
    std::string sut;
    std::string alphabet;
    std::size_t bits = 0;
};

// A readable file is a model; anything else is a shell command.
std::unique_ptr<Teacher> open_sut(const SutArgs& a) {
    std::error_code ec;
    if (fs::is_regular_file(a.sut, ec)) return std::make_unique<KripkeTeacher>(load_kripke(a.sut));
    if (a.alphabet.empty() || a.bits == 0) {
        throw InputError("--sut '" + a.sut + "' is not a model file; a command needs --alphabet and --bits");
    }
    return std::make_unique<ExternalTeacher>(a.sut, Alphabet::from_csv(a.alphabet), a.bits);
}

void add_sut_options(CLI::App* cmd, SutArgs& a) {
    cmd->add_option("--sut", a.sut, "Model file or SUT command")->required();
    cmd->add_option("--alphabet", a.alphabet, "Comma-separated symbols (command SUTs)");
    cmd->add_option("--bits", a.bits, "Output width (command SUTs)");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Requirement files may carry '#' comment lines.
Requirement load_requirement(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string text;
    for (std::string line; std::getline(in, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        text += line + " ";
    }
    return parse_requirement(text);
}

std::vector<Word> load_queries(const fs::path& p, const Alphabet& alphabet) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot open " + p.string());
    std::vector<Word> out;
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;
        try {
            out.push_back(alphabet.parse_word(line));
        } catch (const InputError& e) {
            throw InputError(p.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

// Optional file output; stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw InputError("cannot write " + path);
    }
    std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

// ---------------------------------------------------------------------------

struct LearnArgs {
    std::string algo = "fid";
    SutArgs sut;
    std::string queries;
    std::string out_dir = ".";
    std::string csv;
};

int run_learn(const LearnArgs& a, const Globals& g) {
    auto teacher = open_sut(a.sut);
    const auto queries = load_queries(a.queries, teacher->alphabet());
    fs::create_directories(a.out_dir);
    Sink csv(a.csv);
    csv.get() << "t,channel,states,queries\n";

    if (a.algo == "id") {
        std::set<Word> p{Word{}};
        p.insert(queries.begin(), queries.end());
        IdResult r = id_learn(*teacher, prefix_closure(p));
        save_kripke(fs::path(a.out_dir) / "dfa.kripke", r.dfa.kripke());
        csv.get() << queries.size() << ",1," << r.dfa.num_states() << "," << teacher->query_count() << "\n";
        return kOk;
    }
    if (a.algo != "fid") throw InputError("--algo must be fid or id");

    CachedTeacher cache(*teacher);
    FidLearner fid(cache);
    auto emit = [&](std::size_t t, const DfaFamily& family) {
        for (std::size_t c = 0; c < family.size(); ++c) {
            const std::string name = "family_" + std::to_string(t) + "_ch" + std::to_string(c + 1) + ".kripke";
            save_kripke(fs::path(a.out_dir) / name, family[c].kripke());
            csv.get() << t << "," << c + 1 << "," << family[c].num_states() << "," << cache.query_count() << "\n";
        }
    };
    FamilySnapshot last = fid.family();
    emit(0, *last);
    for (std::size_t t = 0; t < queries.size(); ++t) {
        const FamilySnapshot& f = fid.process(queries[t]);
        if (f != last) {
            emit(t + 1, *f);
            last = f;
        }
        if (g.verbose) std::cerr << "t=" << t + 1 << " queries=" << cache.query_count() << "\n";
    }
    return kOk;
}

struct MinimiseArgs {
    std::string in;
    std::string out;
    std::string partition_csv;
    bool trace = false;
};

int run_minimise(const MinimiseArgs& a, const Globals&) {
    const KripkeStructure input = load_kripke(a.in);
    const MinimiseResult r = minimise(input, MinimiseOptions{a.trace});
    save_kripke(a.out, r.quotient);

    // Report in the input's own state ids.
    const std::vector<StateId> original = reachable_states(input);
    if (!a.partition_csv.empty()) {
        std::ofstream csv(a.partition_csv);
        if (!csv) throw InputError("cannot write " + a.partition_csv);
        csv << "state,block\n";
        for (StateId q = 0; q < original.size(); ++q) csv << original[q] << "," << r.partition.block_of(q) << "\n";
    }
    if (a.trace) {
        auto ids = [&](const std::vector<StateId>& v) {
            std::string s;
            for (StateId q : v) s += (s.empty() ? "" : " ") + std::to_string(original[q]);
            return s;
        };
        for (const auto& e : r.trace) {
            std::cout << "split symbol=" << input.alphabet()[e.symbol] << " splitter=" << e.splitter
                      << " block=" << e.block << " new=" << e.new_block << " kept={" << ids(e.kept) << "} moved={"
                      << ids(e.moved) << "}\n";
        }
    }
    std::cout << "states " << input.num_states() << " -> " << r.quotient.num_states() << "\n";
    return kOk;
}

int run_product(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<KripkeStructure> factors;
    for (const auto& p : inputs) factors.push_back(load_kripke(p));
    const KripkeStructure product = subdirect_product(factors);
    save_kripke(out, product);
    std::cout << "states " << product.num_states() << "\n";
    return kOk;
}

int run_check(const std::string& model, const std::string& req, const Globals& g) {
    const KripkeStructure h = load_kripke(model);
    const Requirement r = load_requirement(req);
    const Verdict v = check(h, r);
    if (std::holds_alternative<Pass>(v)) {
        std::cout << "pass\n";
        return kOk;
    }
    const auto& ce = std::get<Counterexample>(v);
    std::cout << h.alphabet().format_word(ce.word) << "\n";
    if (g.verbose) std::cerr << "violated: " << ce.reason << "\n";
    return kFound;
}

struct LbtArgs {
    SutArgs sut;
    std::string req;
    std::size_t n = 50;
    std::uint64_t max_queries = 100000;
    double max_seconds = 3600.0;
    double ratio = 1.0;
    std::string csv;
};

int run_lbt(const LbtArgs& a, const Globals& g) {
    auto teacher = open_sut(a.sut);
    LbtConfig cfg{load_requirement(a.req), a.max_queries, a.max_seconds, g.seed, a.n, a.ratio};
    const LbtReport report = lbt_run(*teacher, cfg);

    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv) throw InputError("cannot write " + a.csv);
        csv << "iter,source,query_len,family_states,product_states,min_states,cum_queries,verdict\n";
        for (std::size_t i = 0; i < report.iterations.size(); ++i) {
            const auto& rec = report.iterations[i];
            std::string fam;
            for (std::size_t s : rec.family_states) fam += (fam.empty() ? "" : " ") + std::to_string(s);
            const bool last = i + 1 == report.iterations.size();
            csv << rec.iter << "," << to_string(rec.source) << "," << rec.query_len << "," << fam << ","
                << rec.product_states << "," << rec.min_states << "," << rec.cum_queries << ","
                << (last ? to_string(report.verdict) : "running") << "\n";
        }
    }

    const std::size_t iterations = report.iterations.empty() ? 0 : report.iterations.back().iter;
    std::cout << "verdict " << to_string(report.verdict) << "\n";
    std::cout << "iterations " << iterations << "\n";
    if (report.final_hypothesis) std::cout << "hypothesis_states " << report.final_hypothesis->num_states() << "\n";
    switch (report.verdict) {
    case LbtVerdict::TrueNegativeFound:
        std::cout << "witness " << teacher->alphabet().format_word(report.witness) << "\n";
        for (const auto& o : report.observed) std::cout << "observed " << o.to_string() << "\n";
        return kFound;
    case LbtVerdict::TeacherFailure:
        std::cerr << "ikl: teacher error: " << report.error << "\n";
        return kTeacherError;
    default:
        return kOk;
    }
}

struct GenArgs {
    std::size_t states = 0;
    std::size_t bits = 0;
    std::string alphabet;
    std::string out;
};

int run_gen(const GenArgs& a, const Globals& g) {
    if (a.states == 0 || a.bits == 0) throw InputError("--states and --bits must be positive");
    const KripkeStructure k = random_kripke(g.seed, a.states, a.bits, Alphabet::from_csv(a.alphabet));
    Sink out(a.out);
    write_kripke(out.get(), k);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental learning of deterministic Kripke structures"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

    LearnArgs learn;
    auto* c_learn = app.add_subcommand("learn", "Learn from a query file");
    c_learn->add_option("--algo", learn.algo, "fid or id")->check(CLI::IsMember({"fid", "id"}));
    add_sut_options(c_learn, learn.sut);
    c_learn->add_option("--queries", learn.queries, "One input string per line")->required();
    c_learn->add_option("-o,--out", learn.out_dir, "Output directory");
    c_learn->add_option("--csv", learn.csv, "CSV summary (default stdout)");

    MinimiseArgs mini;
    auto* c_min = app.add_subcommand("minimise", "Minimise a structure");
    c_min->add_option("input", mini.in)->required();
    c_min->add_option("-o,--out", mini.out)->required();
    c_min->add_option("--emit-partition", mini.partition_csv, "Write state,block CSV");
    c_min->add_flag("--trace", mini.trace, "Print split events");

    std::vector<std::string> prod_in;
    std::string prod_out;
    auto* c_prod = app.add_subcommand("product", "Subdirect product of 1-bit structures");
    c_prod->add_option("inputs", prod_in)->required();
    c_prod->add_option("-o,--out", prod_out)->required();

    std::string check_model;
    std::string check_req;
    auto* c_check = app.add_subcommand("check", "Check a requirement on a model");
    c_check->add_option("model", check_model)->required();
    c_check->add_option("--req", check_req)->required();

    LbtArgs lbt;
    auto* c_lbt = app.add_subcommand("lbt", "Learning-based testing of a SUT");
    add_sut_options(c_lbt, lbt.sut);
    c_lbt->add_option("--req", lbt.req)->required();
    c_lbt->add_option("--n", lbt.n, "Convergence window");
    c_lbt->add_option("--max-queries", lbt.max_queries, "Test budget");
    c_lbt->add_option("--max-seconds", lbt.max_seconds, "Wall-clock budget");
    c_lbt->add_option("--model-check-ratio", lbt.ratio, "Chance of asking the model checker first");
    c_lbt->add_option("--csv", lbt.csv, "Per-iteration CSV");

    GenArgs gen;
    auto* c_gen = app.add_subcommand("gen", "Random reachable structure");
    c_gen->add_option("--states", gen.states)->required();
    c_gen->add_option("--bits", gen.bits)->required();
    c_gen->add_option("--alphabet", gen.alphabet)->required();
    c_gen->add_option("-o,--out", gen.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*c_learn) return run_learn(learn, g);
        if (*c_min) return run_minimise(mini, g);
        if (*c_prod) return run_product(prod_in, prod_out);
        if (*c_check) return run_check(check_model, check_req, g);
        if (*c_lbt) return run_lbt(lbt, g);
        if (*c_gen) return run_gen(gen, g);
    } catch (const TeacherError& e) {
        std::cerr << "ikl: teacher error: " << e.what() << "\n";
        return kTeacherError;
    } catch (const InputError& e) {
        std::cerr << "ikl: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "ikl: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
