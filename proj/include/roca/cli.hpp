// cli.hpp -- command-line front end. Kept as a library function so tests
// can drive it without spawning processes; tools/main.cpp is a shim.
//
// Exit status: 2 on usage errors, 1 on failed validation or a found
// disagreement, 0 otherwise.

#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "roca/automaton.hpp"
#include "roca/corpus.hpp"
#include "roca/grammar.hpp"
#include "roca/omega.hpp"
#include "roca/oracle.hpp"
#include "roca/series.hpp"
#include "roca/upword.hpp"
#include "roca/validate.hpp"

namespace roca {

namespace detail {

inline std::string move_text(const RocAutomaton& aut, const Move& m) {
    const char* kind = m.kind == MoveKind::Push ? "push" : m.kind == MoveKind::Stay ? "stay" : "pop";
    const std::string letter = m.letter == kEpsilon ? "eps" : aut.letter_name(m.letter);
    return std::string(kind) + "(" + std::to_string(m.from + 1) + "," + std::to_string(m.to + 1) +
           "," + letter + ")";
}

inline std::string moves_text(const RocAutomaton& aut, const std::vector<Move>& moves) {
    if (moves.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (i) out += ' ';
        out += move_text(aut, moves[i]);
    }
    return out;
}

inline std::string endpoint_letter(const RocAutomaton& aut, int letter) {
    return letter == kEpsilon ? "eps" : aut.letter_name(letter);
}

inline std::string witness_text(const RocAutomaton& aut, const RunWitness& w) {
    return "[" + std::to_string(w.start_state + 1) + "," + endpoint_letter(aut, w.initial_letter) +
           "] " + moves_text(aut, w.moves) + " [" + std::to_string(w.end_state + 1) + "," +
           endpoint_letter(aut, w.final_letter) + "]";
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"weighted omega-restricted one-counter automata"};
    app.name("roca");
    app.require_subcommand(1);

    struct {
        std::string automaton;
        std::string word;
        std::string prefix;
        std::string period;
        int max_len = 8;
        int segment_bound = 12;
        int counter_bound = -1;
        long long step_bound = -1;
        bool witness = false;
        int witnesses = 0;
        bool json = false;
        std::uint64_t seed = 1;
    } opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--automaton", opt.automaton, "automaton file")->required();
        cmd->add_flag("--json", opt.json, "machine-readable output");
        return cmd;
    };
    CLI::App* weight_cmd = add_common(app.add_subcommand("weight", "coefficient of a finite word"));
    weight_cmd->add_option("--word", opt.word, "query word");
    CLI::App* member_cmd = add_common(app.add_subcommand("member", "finite-word membership"));
    member_cmd->add_option("--word", opt.word, "query word");
    CLI::App* count_cmd =
        add_common(app.add_subcommand("count", "number of leftmost derivations of a word"));
    count_cmd->add_option("--word", opt.word, "query word");
    count_cmd->add_option("--counter-bound", opt.counter_bound, "oracle counter bound");
    count_cmd->add_option("--step-bound", opt.step_bound, "oracle step bound");
    count_cmd->add_option("--witnesses", opt.witnesses, "print up to N run transcripts");
    CLI::App* omega_cmd =
        add_common(app.add_subcommand("omega", "membership of an ultimately periodic word"));
    omega_cmd->add_option("--prefix", opt.prefix, "finite prefix (may be \"\")");
    omega_cmd->add_option("--period", opt.period, "period, repeated forever")->required();
    omega_cmd->add_flag("--witness", opt.witness, "print a lasso certificate");
    CLI::App* grammar_cmd =
        add_common(app.add_subcommand("grammar", "export the triple-pair grammar"));
    CLI::App* validate_cmd =
        add_common(app.add_subcommand("validate", "run the per-identity check suite"));
    validate_cmd->add_option("--max-len", opt.max_len, "finite word bound");
    validate_cmd->add_option("--segment-bound", opt.segment_bound, "omega segment bound");
    validate_cmd->add_option("--counter-bound", opt.counter_bound, "oracle counter bound");
    validate_cmd->add_option("--step-bound", opt.step_bound, "oracle step bound");
    validate_cmd->add_option("--seed", opt.seed, "seed for sampled enumerations");
    CLI::App* compare_cmd =
        add_common(app.add_subcommand("compare", "grammar vs automaton semantics"));
    compare_cmd->add_option("--max-len", opt.max_len, "finite word bound");
    compare_cmd->add_option("--segment-bound", opt.segment_bound, "omega segment bound");
    compare_cmd->add_option("--seed", opt.seed, "seed for sampled enumerations");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        for (const CLI::App* sub : app.get_subcommands(nullptr))
            if (sub->parsed()) {
                out << sub->help();
                return 0;
            }
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::ifstream file(opt.automaton);
        if (!file) {
            err << "error: cannot open " << opt.automaton << "\n";
            return 2;
        }
        RocAutomaton aut;
        try {
            aut = parse_automaton(file);
        } catch (const ParseError& e) {
            err << "error: " << opt.automaton << ": " << e.what() << "\n";
            return 2;
        }

        if (app.got_subcommand(weight_cmd) || app.got_subcommand(member_cmd)) {
            const Word w = parse_letters(aut, opt.word);
            const Weight value = weight_of_word(aut, w);
            const bool member = !value.is_zero();
            if (opt.json) {
                nlohmann::ordered_json doc;
                doc["command"] = app.got_subcommand(weight_cmd) ? "weight" : "member";
                doc["word"] = opt.word;
                if (app.got_subcommand(weight_cmd)) doc["value"] = to_string(value);
                doc["result"] = member ? "accept" : "reject";
                out << doc.dump(2) << "\n";
            } else if (app.got_subcommand(weight_cmd)) {
                out << to_string(value) << "\n";
            } else {
                out << (member ? "accept" : "reject") << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(count_cmd)) {
            const Word w = parse_letters(aut, opt.word);
            const MixedGrammar g = triple_pair_construct(aut);
            const DerivCount d = count_finite_derivations(g, w);
            RunReport report;
            if (opt.witnesses > 0)
                report = oracle_count_runs(aut, w, opt.counter_bound, opt.step_bound, opt.witnesses);
            if (opt.json) {
                nlohmann::ordered_json doc;
                doc["command"] = "count";
                doc["word"] = opt.word;
                doc["value"] = to_string(d);
                if (opt.witnesses > 0) {
                    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
                    for (const auto& wit : report.witnesses)
                        ws.push_back(detail::witness_text(aut, wit));
                    doc["witnesses"] = std::move(ws);
                }
                out << doc.dump(2) << "\n";
            } else {
                out << to_string(d) << "\n";
                for (const auto& wit : report.witnesses)
                    out << "witness: " << detail::witness_text(aut, wit) << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(omega_cmd)) {
            const RocAutomaton proj = bool_projection(aut);
            const UPWord w = parse_upword(proj, opt.prefix, opt.period);
            const bool accepted = behavior_omega_member(proj, w);
            std::optional<LassoCertificate> cert;
            int cert_state = -1;
            if (accepted && opt.witness) {
                // Certificate for the first initial entry whose tail accepts.
                for (int m = 0; m < proj.n && !cert; ++m)
                    for (const auto& [a, wi] : proj.initial[static_cast<std::size_t>(m)].terms) {
                        if (a == kEpsilon) {
                            cert = find_lasso(proj, m, 1, w);
                        } else if (up_letter(w, 0) == a) {
                            cert = find_lasso(proj, m, 1, up_tail(w, 1));
                        }
                        if (cert) {
                            cert_state = m;
                            break;
                        }
                    }
            }
            if (opt.json) {
                nlohmann::ordered_json doc;
                doc["command"] = "omega";
                doc["prefix"] = opt.prefix;
                doc["period"] = opt.period;
                doc["result"] = accepted ? "accept" : "reject";
                if (cert) {
                    nlohmann::ordered_json c;
                    c["start"] = cert_state + 1;
                    c["counter"] = cert->start_counter;
                    nlohmann::ordered_json stem = nlohmann::ordered_json::array();
                    for (const auto& m : cert->stem) stem.push_back(detail::move_text(proj, m));
                    nlohmann::ordered_json cyc = nlohmann::ordered_json::array();
                    for (const auto& m : cert->cycle) cyc.push_back(detail::move_text(proj, m));
                    c["stem"] = std::move(stem);
                    c["cycle"] = std::move(cyc);
                    c["drift"] = cert->drift;
                    doc["certificate"] = std::move(c);
                }
                out << doc.dump(2) << "\n";
            } else {
                out << (accepted ? "accept" : "reject") << "\n";
                if (cert) {
                    out << "start " << cert_state + 1 << " counter " << cert->start_counter << "\n";
                    out << "stem: " << detail::moves_text(proj, cert->stem) << "\n";
                    out << "cycle: " << detail::moves_text(proj, cert->cycle) << "\n";
                    out << "drift: " << cert->drift << "\n";
                }
            }
            return 0;
        }

        if (app.got_subcommand(grammar_cmd)) {
            const MixedGrammar g = triple_pair_construct(aut);
            const std::string doc = export_grammar(g);
            out << doc;  // already machine readable; --json is the same document
            return 0;
        }

        if (app.got_subcommand(validate_cmd)) {
            CheckOptions copts;
            copts.max_len = opt.max_len;
            copts.segment_bound = opt.segment_bound;
            copts.seed = opt.seed;
            copts.oracle_counter_bound = opt.counter_bound;
            copts.oracle_step_bound = opt.step_bound;
            const std::vector<CheckResult> results = validate_automaton(aut, copts);
            bool ok = true;
            if (opt.json) {
                nlohmann::ordered_json doc;
                doc["command"] = "validate";
                nlohmann::ordered_json rows = nlohmann::ordered_json::array();
                for (const auto& r : results) {
                    ok = ok && r.passed;
                    nlohmann::ordered_json row;
                    row["id"] = r.id;
                    row["name"] = r.name;
                    row["status"] = r.passed ? "PASS" : "FAIL";
                    if (!r.detail.empty()) row["detail"] = r.detail;
                    rows.push_back(std::move(row));
                }
                doc["checks"] = std::move(rows);
                doc["ok"] = ok;
                out << doc.dump(2) << "\n";
            } else {
                for (const auto& r : results) {
                    ok = ok && r.passed;
                    out << r.id << " " << r.name << ": " << (r.passed ? "PASS" : "FAIL");
                    if (!r.passed && !r.detail.empty()) out << " (" << r.detail << ")";
                    out << "\n";
                }
            }
            return ok ? 0 : 1;
        }

        if (app.got_subcommand(compare_cmd)) {
            CheckOptions copts;
            copts.max_len = opt.max_len;
            copts.segment_bound = opt.segment_bound;
            copts.seed = opt.seed;
            const CompareOutcome outcome = compare_grammar_automaton(aut, copts);
            if (opt.json) {
                nlohmann::ordered_json doc;
                doc["command"] = "compare";
                doc["equivalent"] = outcome.equivalent;
                if (!outcome.equivalent) doc["description"] = outcome.description;
                out << doc.dump(2) << "\n";
            } else {
                out << (outcome.equivalent ? "equivalent up to bounds" : outcome.description) << "\n";
            }
            return outcome.equivalent ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no command\n";
    return 2;
}

}  // namespace roca
