// acceptance.cpp -- runs the acceptance criteria end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.
//
// Usage: roca_acceptance [--cli PATH]   (PATH defaults to ../tools/roca
// relative to this binary; the CLI criterion shells out to it.)

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>
#include <unistd.h>

#include "roca/cli.hpp"
#include "roca/corpus.hpp"
#include "roca/grammar.hpp"
#include "roca/omega.hpp"
#include "roca/oracle.hpp"
#include "roca/series.hpp"
#include "roca/validate.hpp"

using namespace roca;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    int id;
    bool passed;
    std::string label;
    std::string detail;
    double seconds;
};

std::vector<Criterion> results;

template <typename Fn>
void run_criterion(int id, const std::string& label, Fn&& fn) {
    const auto t0 = Clock::now();
    std::string detail;
    bool passed = false;
    try {
        passed = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    results.push_back({id, passed, label, detail, secs});
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "criterion " << id << ": " << (passed ? "PASS" : "FAIL") << "  " << label << " ("
         << secs << "s)";
    if (!passed && !detail.empty()) line << "\n  " << detail;
    std::cout << line.str() << std::endl;
}

// --- criterion 1: semiring and star axioms -------------------------------

bool semiring_axioms(std::string& detail) {
    const auto t0 = Clock::now();
    long long checked = 0;
    auto laws = [&](const Weight& a, const Weight& b, const Weight& c) {
        const Domain d = a.domain;
        const Weight zero = Weight::zero(d), one = Weight::one(d);
        bool ok = (a + b) + c == a + (b + c);
        ok = ok && a + b == b + a;
        ok = ok && (a * b) * c == a * (b * c);
        ok = ok && a * (b + c) == a * b + a * c;
        ok = ok && (a + b) * c == a * c + b * c;
        ok = ok && a + zero == a && a * one == a && one * a == a;
        ok = ok && (a * zero).is_zero() && (zero * a).is_zero();
        ok = ok && star(a) == one + a * star(a);
        ++checked;
        return ok;
    };
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                if (!laws(Weight::boolean(a), Weight::boolean(b), Weight::boolean(c))) {
                    detail = "bool law violation";
                    return false;
                }
    std::vector<Weight> pool{Weight::nat(0), Weight::nat(1), Weight::nat(2), Weight::nat(3),
                             Weight::nat(5), Weight::nat(7), Weight::infinity()};
    for (const Weight& a : pool)
        for (const Weight& b : pool)
            for (const Weight& c : pool)
                if (!laws(a, b, c)) {
                    detail = "natinf law violation on named values";
                    return false;
                }
    std::mt19937_64 rng(20260811);
    while (checked < 1200) {
        auto pick = [&]() {
            const int r = static_cast<int>(rng() % 10);
            if (r == 0) return Weight::infinity();
            return Weight::nat(rng() % 50);
        };
        if (!laws(pick(), pick(), pick())) {
            detail = "natinf law violation on sampled values";
            return false;
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= 1.0) {
        detail = "took " + std::to_string(secs) + "s (budget 1s)";
        return false;
    }
    detail = std::to_string(checked) + " triples";
    return true;
}

// --- shared corpora --------------------------------------------------------

std::vector<CorpusEntry> residual_corpus() {
    // C_L, C_inf, and 100 seeded random automata, half bool, half natinf
    // with weights beyond {0,1}.
    std::vector<CorpusEntry> corpus;
    corpus.push_back({"lukasiewicz", parse_automaton(std::string(kLukasiewiczBool))});
    corpus.push_back({"pumped-natinf", parse_automaton(std::string(kPumpedNatInf))});
    std::mt19937_64 rng(424242);
    for (int t = 0; t < 50; ++t) {
        RandomAutomatonOptions opts;
        opts.domain = Domain::Bool;
        corpus.push_back({"bool-" + std::to_string(t), random_automaton(rng, opts)});
    }
    for (int t = 0; t < 50; ++t) {
        RandomAutomatonOptions opts;
        opts.domain = Domain::NatInf;
        opts.unit_weights = false;
        corpus.push_back({"natinf-" + std::to_string(t), random_automaton(rng, opts)});
    }
    return corpus;
}

std::vector<CorpusEntry> bool_corpus() {
    std::vector<CorpusEntry> corpus;
    corpus.push_back({"lukasiewicz", parse_automaton(std::string(kLukasiewiczBool))});
    std::mt19937_64 rng(515151);
    RandomAutomatonOptions opts;
    opts.domain = Domain::Bool;
    for (int t = 0; t < 24; ++t)
        corpus.push_back({"bool-" + std::to_string(t), random_automaton(rng, opts)});
    return corpus;
}

std::vector<CorpusEntry> natinf_corpus() {
    std::vector<CorpusEntry> corpus;
    corpus.push_back({"lukasiewicz-natinf", parse_automaton(std::string(kLukasiewiczNatInf))});
    corpus.push_back({"pumped-natinf", parse_automaton(std::string(kPumpedNatInf))});
    corpus.push_back({"ambiguous-natinf", parse_automaton(std::string(kAmbiguousNatInf))});
    std::mt19937_64 rng(616161);
    RandomAutomatonOptions opts;
    opts.domain = Domain::NatInf;
    for (int t = 0; t < 22; ++t)
        corpus.push_back({"natinf-" + std::to_string(t), random_automaton(rng, opts)});
    return corpus;
}

std::vector<CorpusEntry> scoreboard_corpus() { return validation_corpus(20260811, 4, 4); }

bool criterion_fixpoint(std::string& detail) {
    const auto t0 = Clock::now();
    CheckOptions opts;
    opts.max_len = 8;
    int count = 0;
    for (const auto& entry : residual_corpus()) {
        CheckResult r = check_fixpoint_residual(entry.automaton, opts);
        ++count;
        if (!r.passed) {
            detail = entry.name + ": " + r.detail;
            return false;
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= 20.0) {
        detail = "took " + std::to_string(secs) + "s (budget 20s)";
        return false;
    }
    detail = std::to_string(count) + " automata";
    return true;
}

bool criterion_powers(std::string& detail) {
    CheckOptions opts;
    opts.max_len = 8;
    int count = 0;
    for (const auto& entry : scoreboard_corpus()) {
        auto [step, closed] = check_power_identities(entry.automaton, opts);
        ++count;
        if (!step.passed) {
            detail = entry.name + ": " + step.detail;
            return false;
        }
        if (!closed.passed) {
            detail = entry.name + ": " + closed.detail;
            return false;
        }
    }
    detail = std::to_string(count) + " automata, powers 1..3";
    return true;
}

bool criterion_grammar_language(std::string& detail) {
    const auto t0 = Clock::now();
    CheckOptions opts;
    opts.max_len = 8;
    opts.omega_up_bound = 4;
    opts.segment_bound = 12;
    int count = 0;
    for (const auto& entry : bool_corpus()) {
        CheckResult fin = check_finite_language_agreement(entry.automaton, opts);
        if (!fin.passed) {
            detail = entry.name + " (finite): " + fin.detail;
            return false;
        }
        CheckResult om = check_omega_agreement(entry.automaton, opts);
        if (!om.passed) {
            detail = entry.name + " (omega): " + om.detail;
            return false;
        }
        ++count;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= 60.0) {
        detail = "took " + std::to_string(secs) + "s (budget 60s)";
        return false;
    }
    detail = std::to_string(count) + " automata, |w| <= 8 and |u|,|v| <= 4";
    return true;
}

bool criterion_counts(std::string& detail) {
    CheckOptions opts;
    opts.max_len = 8;
    int count = 0;
    for (const auto& entry : natinf_corpus()) {
        CheckResult r = check_derivation_count_agreement(entry.automaton, opts);
        if (!r.passed) {
            detail = entry.name + ": " + r.detail;
            return false;
        }
        ++count;
    }
    // The pumped automaton must witness the infinite case on both sides.
    RocAutomaton pumped = parse_automaton(std::string(kPumpedNatInf));
    MixedGrammar g = triple_pair_construct(pumped);
    const Weight d = count_finite_derivations(g, {1});
    RunReport rep = oracle_count_runs(pumped, {1}, -1, -1, 0);
    if (!d.is_infinite() || !rep.count.is_infinite() || !rep.complete) {
        detail = "pumped automaton did not reach infinity on both sides";
        return false;
    }
    detail = std::to_string(count) + " automata, infinite case included";
    return true;
}

bool criterion_unfoldings(std::string& detail) {
    CheckOptions opts;
    opts.counter_up_bound = 3;
    int count = 0;
    for (const auto& entry : scoreboard_corpus()) {
        auto [decomp, unfold] = check_counter_unfoldings(entry.automaton, opts);
        if (!decomp.passed) {
            detail = entry.name + " (decomposition): " + decomp.detail;
            return false;
        }
        if (!unfold.passed) {
            detail = entry.name + " (unfolding): " + unfold.detail;
            return false;
        }
        ++count;
    }
    detail = std::to_string(count) + " automata, every state, |u|,|v| <= 3";
    return true;
}

// --- criterion 7: the CLI fixture, bit for bit ----------------------------

std::string cli_path = "";

struct ShellResult {
    int status;
    std::string out;
};

ShellResult shell(const std::string& command) {
    std::array<char, 4096> buffer{};
    std::string out;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return {127, ""};
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), got);
    const int rc = pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : 128, out};
}

bool criterion_cli_fixture(std::string& detail) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("roca-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path luka = dir / "lukasiewicz.roc";
    const fs::path luka0 = dir / "lukasiewicz-k0.roc";
    std::ofstream(luka) << kLukasiewiczBool;
    std::ofstream(luka0) << "semiring bool\nstates 1\nalphabet a b\nrepeated 0\n"
                            "initial 1 eps 1\nfinal 1 eps 1\npush 1 1 a 1\npop 1 1 b 1\n";

    auto expect = [&](const std::string& args, int status, const std::string& out,
                      const std::string& what) {
        ShellResult r = shell(cli_path + " " + args);
        if (r.status != status || r.out != out) {
            detail = what + ": expected status " + std::to_string(status) + " output " + out +
                     " -- got status " + std::to_string(r.status) + " output " + r.out;
            return false;
        }
        return true;
    };

    // The grammar of the fixture is the S -> aSS | b grammar under
    // S = [1,p,1]; the whole document is frozen here, byte for byte.
    const std::string grammar_doc =
        "{\n"
        "  \"n\": 1,\n"
        "  \"alphabet\": [\n"
        "    \"a\",\n"
        "    \"b\"\n"
        "  ],\n"
        "  \"k\": 1,\n"
        "  \"productions_x\": [\n"
        "    [\n"
        "      \"x0\",\n"
        "      \"[1,p,1]\"\n"
        "    ],\n"
        "    [\n"
        "      \"[1,p,1]\",\n"
        "      \"a\",\n"
        "      \"[1,p,1]\",\n"
        "      \"[1,p,1]\"\n"
        "    ],\n"
        "    [\n"
        "      \"[1,p,1]\",\n"
        "      \"b\"\n"
        "    ]\n"
        "  ],\n"
        "  \"productions_z\": [\n"
        "    [\n"
        "      \"z0\",\n"
        "      \"[1,p]\"\n"
        "    ],\n"
        "    [\n"
        "      \"[1,p]\",\n"
        "      \"a\",\n"
        "      \"[1,p]\"\n"
        "    ],\n"
        "    [\n"
        "      \"[1,p]\",\n"
        "      \"a\",\n"
        "      \"[1,p,1]\",\n"
        "      \"[1,p]\"\n"
        "    ]\n"
        "  ]\n"
        "}\n";
    if (!expect("grammar --automaton " + luka.string(), 0, grammar_doc, "grammar export")) return false;

    const std::string l = luka.string();
    bool ok = expect("weight --automaton " + l + " --word b", 0, "1\n", "weight b") &&
              expect("weight --automaton " + l + " --word abb", 0, "1\n", "weight abb") &&
              expect("weight --automaton " + l + " --word aabbb", 0, "1\n", "weight aabbb") &&
              expect("weight --automaton " + l + " --word ab", 0, "0\n", "weight ab") &&
              expect("weight --automaton " + l + " --word ba", 0, "0\n", "weight ba") &&
              expect("weight --automaton " + l + " --word ''", 0, "0\n", "weight eps") &&
              expect("member --automaton " + l + " --word abb", 0, "accept\n", "member abb") &&
              expect("member --automaton " + l + " --word ba", 0, "reject\n", "member ba") &&
              expect("omega --automaton " + l + " --prefix '' --period a", 0, "accept\n",
                     "omega a^w") &&
              expect("omega --automaton " + l + " --prefix '' --period ab", 0, "accept\n",
                     "omega (ab)^w") &&
              expect("omega --automaton " + l + " --prefix b --period a", 0, "reject\n",
                     "omega b a^w");
    const std::string l0 = luka0.string();
    ok = ok &&
         expect("omega --automaton " + l0 + " --prefix '' --period a", 0, "reject\n",
                "omega a^w with k=0") &&
         expect("omega --automaton " + l0 + " --prefix '' --period ab", 0, "reject\n",
                "omega (ab)^w with k=0") &&
         expect("omega --automaton " + l0 + " --prefix b --period a", 0, "reject\n",
                "omega b a^w with k=0") &&
         expect("weight --automaton " + l0 + " --word abb", 0, "1\n", "finite part with k=0");
    fs::remove_all(dir);
    if (ok) detail = "exact outputs over " + std::string("15 invocations");
    return ok;
}

bool criterion_scoreboard(std::string& detail) {
    namespace fs = std::filesystem;
    const auto t0 = Clock::now();
    const fs::path dir = fs::temp_directory_path() / ("roca-scoreboard-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    int count = 0;
    for (const auto& entry : scoreboard_corpus()) {
        // Round-trip through the CLI: write the automaton file, then run the
        // full validate and compare commands on it.
        const fs::path file = dir / (entry.name + ".roc");
        {
            std::ofstream f(file);
            const RocAutomaton& a = entry.automaton;
            f << "semiring " << to_string(a.domain) << "\n";
            f << "states " << a.n << "\n";
            f << "alphabet";
            for (const auto& letter : a.alphabet) f << " " << letter;
            f << "\nrepeated " << a.k << "\n";
            auto dump_poly = [&](const char* directive, int i, int j, const LetterPolynomial& p) {
                for (const auto& [letter, w] : p.terms) {
                    f << directive << " " << i + 1;
                    if (j >= 0) f << " " << j + 1;
                    f << " " << (letter == kEpsilon ? "eps" : a.alphabet[letter]) << " "
                      << to_string(w) << "\n";
                }
            };
            for (int i = 0; i < a.n; ++i) dump_poly("initial", i, -1, a.initial[i]);
            for (int i = 0; i < a.n; ++i) dump_poly("final", i, -1, a.final_states[i]);
            for (int i = 0; i < a.n; ++i)
                for (int j = 0; j < a.n; ++j) {
                    dump_poly("push", i, j, a.push_block[i][j]);
                    dump_poly("stay", i, j, a.stay_block[i][j]);
                    dump_poly("pop", i, j, a.pop_block[i][j]);
                }
        }
        ShellResult validate = shell(cli_path + " validate --automaton " + file.string());
        if (validate.status != 0) {
            detail = entry.name + ": validate exited " + std::to_string(validate.status) + "\n" +
                     validate.out;
            fs::remove_all(dir);
            return false;
        }
        int lines = 0;
        std::istringstream stream(validate.out);
        std::string line;
        while (std::getline(stream, line)) {
            ++lines;
            if (line.find(": PASS") == std::string::npos) {
                detail = entry.name + ": " + line;
                fs::remove_all(dir);
                return false;
            }
        }
        if (lines != 8) {
            detail = entry.name + ": expected 8 scoreboard rows, saw " + std::to_string(lines);
            fs::remove_all(dir);
            return false;
        }
        ShellResult compare = shell(cli_path + " compare --automaton " + file.string());
        if (compare.status != 0 || compare.out != "equivalent up to bounds\n") {
            detail = entry.name + ": compare said " + compare.out;
            fs::remove_all(dir);
            return false;
        }
        ++count;
    }
    fs::remove_all(dir);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= 60.0) {
        detail = "took " + std::to_string(secs) + "s (budget 60s)";
        return false;
    }
    detail = std::to_string(count) + " automata through validate + compare";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    namespace fs = std::filesystem;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];
    if (cli_path.empty()) {
        fs::path self(argv[0]);
        cli_path = (self.parent_path() / ".." / "tools" / "roca").string();
    }

    run_criterion(1, "semiring and star axioms", semiring_axioms);
    run_criterion(2, "star-block fixpoint residual over the corpus", criterion_fixpoint);
    run_criterion(3, "star-block power identities against the oracle", criterion_powers);
    run_criterion(4, "grammar vs automaton language agreement", criterion_grammar_language);
    run_criterion(5, "derivation counts vs run counts", criterion_counts);
    run_criterion(6, "counter decomposition and one-step unfolding", criterion_unfoldings);
    run_criterion(7, "reference fixture through the CLI, bit for bit", criterion_cli_fixture);
    run_criterion(8, "full validate and compare scoreboard", criterion_scoreboard);

    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    std::cout << (ok ? "all criteria passed" : "criteria FAILED") << std::endl;
    return ok ? 0 : 1;
}
