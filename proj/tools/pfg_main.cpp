// pfg: intersect finite state automata with context-free and definite
// clause grammars, emit parse-forest grammars, and poke at the
// undecidability boundary with the built-in correspondence-problem
// encoder.
//
// Exit codes: 0 non-empty/success, 1 empty/no solution, 2 unknown,
// 64 usage errors, 65 malformed input or violated preconditions.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pfg/forest.hpp"
#include "pfg/fsa.hpp"
#include "pfg/grammar.hpp"
#include "pfg/parser.hpp"
#include "pfg/pcp.hpp"
#include "pfg/product.hpp"

namespace {

constexpr int kExitNonEmpty = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pfg::ParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw pfg::ParseError("cannot write '" + path + "'");
    out << content;
}

std::string join(const std::vector<std::string>& toks, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out += sep;
        out += toks[i];
    }
    return out;
}

int exit_code(pfg::Emptiness e) {
    switch (e) {
        case pfg::Emptiness::NonEmpty: return kExitNonEmpty;
        case pfg::Emptiness::Empty: return kExitEmpty;
        case pfg::Emptiness::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

struct StrategyFlags {
    std::string name = "auto";
    double tau = 0.05;
    std::size_t depth = 16;
};

void add_strategy_flags(CLI::App* cmd, StrategyFlags& flags) {
    cmd->add_option("--strategy", flags.name,
                    "DCG strategy: acyclic | threshold | skeleton | unrestricted "
                    "(default: cfg parse for CFGs, skeleton for DCGs)")
        ->check(CLI::IsMember({"auto", "cfg", "acyclic", "threshold", "skeleton",
                               "unrestricted"}));
    cmd->add_option("--tau", flags.tau, "probability threshold in (0,1)");
    cmd->add_option("--depth", flags.depth, "depth bound for --strategy unrestricted");
}

pfg::Strategy pick_strategy(const StrategyFlags& flags, const pfg::Grammar& g) {
    if (flags.name == "auto")
        return pfg::is_context_free(g) ? pfg::Strategy::cfg_exact()
                                       : pfg::Strategy::skeleton();
    if (flags.name == "cfg") return pfg::Strategy::cfg_exact();
    if (flags.name == "acyclic") return pfg::Strategy::acyclic_only();
    if (flags.name == "threshold") return pfg::Strategy::threshold(flags.tau);
    if (flags.name == "skeleton") return pfg::Strategy::skeleton();
    return pfg::Strategy::unrestricted(flags.depth);
}

/// Runs the intersection under the picked strategy; reports the
/// verdict + rule count on stderr and returns the verdict exit code.
int run_intersection(const pfg::Grammar& g, const pfg::Fsa& m, const pfg::Strategy& strat,
                     bool do_reduce, const std::optional<std::string>& out_path,
                     const std::optional<std::string>& tree_dot,
                     bool print_tree) {
    pfg::DcgResult result;
    if (strat.kind == pfg::Strategy::Kind::CfgExact) {
        result.forest = pfg::intersect_cfg(g, m);
        result.exhaustive = true;
    } else {
        result = pfg::intersect_dcg(g, m, strat);
    }
    pfg::Verdict verdict = pfg::verdict_from(result);

    const pfg::ForestGrammar* out = &result.forest;
    pfg::ForestGrammar reduced;
    if (do_reduce) {
        reduced = pfg::reduce(result.forest);
        out = &reduced;
    }
    std::string text = pfg::print_forest(*out);
    if (out_path)
        spill(*out_path, text);
    else if (!print_tree)
        std::cout << text;

    if (print_tree) {
        if (verdict.witness) {
            std::cout << "tree: " << verdict.witness->str() << "\n";
            std::cout << "frontier: " << join(verdict.witness->frontier()) << "\n";
        } else {
            std::cout << "no tree\n";
        }
    }
    if (tree_dot && verdict.witness) spill(*tree_dot, pfg::tree_to_dot(*verdict.witness));

    std::cerr << "verdict: " << pfg::to_string(verdict.kind) << " ("
              << out->rules().size() << " rules)\n";
    return exit_code(verdict.kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parse-forest grammars from FSA/CFG and FSA/DCG intersection"};
    app.require_subcommand(1);

    // ---- intersect ----
    std::string grammar_path, fsa_path;
    std::string method = "parser";
    bool do_reduce = false;
    std::optional<std::string> out_path, fsa_dot;
    StrategyFlags strategy_flags;
    CLI::App* cmd_intersect =
        app.add_subcommand("intersect", "intersect a grammar with an automaton");
    cmd_intersect->add_option("grammar", grammar_path, "grammar file")->required();
    cmd_intersect->add_option("fsa", fsa_path, "automaton file")->required();
    cmd_intersect->add_option("--method", method, "naive | parser (default parser)")
        ->check(CLI::IsMember({"naive", "parser"}));
    cmd_intersect->add_flag("--reduce", do_reduce,
                            "emit only productive-and-reachable rules");
    cmd_intersect->add_option("--out", out_path, "forest output file (default stdout)");
    cmd_intersect->add_option("--fsa-dot", fsa_dot, "write the automaton as Graphviz dot");
    add_strategy_flags(cmd_intersect, strategy_flags);

    // ---- parse ----
    std::string parse_grammar_path;
    std::vector<std::string> sentence;
    std::optional<std::string> parse_out, tree_dot;
    bool parse_reduce = false;
    CLI::App* cmd_parse = app.add_subcommand("parse", "parse a sentence (chain automaton)");
    cmd_parse->add_option("grammar", parse_grammar_path, "grammar file")->required();
    cmd_parse->add_option("tokens", sentence, "sentence tokens (may be empty)");
    cmd_parse->add_option("--out", parse_out, "also write the forest to this file");
    cmd_parse->add_option("--tree-dot", tree_dot, "write the first tree as Graphviz dot");
    cmd_parse->add_flag("--reduce", parse_reduce, "reduce the forest before writing");

    // ---- pcp ----
    std::string instance_path;
    bool encode_only = false, solve = false, via_intersection = false;
    std::size_t max_m = 4, chain_len = 4;
    double loop_weight = 0.5;
    std::string pcp_strategy = "threshold";
    double pcp_tau = 0.05;
    std::optional<std::string> grammar_out, fsa_out;
    CLI::App* cmd_pcp = app.add_subcommand("pcp", "correspondence-problem demonstrator");
    cmd_pcp->add_option("instance", instance_path, "instance file")->required();
    cmd_pcp->add_flag("--encode-only", encode_only, "write the encoding grammar + fsa");
    cmd_pcp->add_flag("--solve", solve, "run the bounded brute-force search");
    cmd_pcp->add_flag("--via-intersection", via_intersection,
                      "solve through the grammar/automaton intersection");
    cmd_pcp->add_option("--max", max_m, "search bound for --solve (default 4)");
    cmd_pcp->add_option("--chain", chain_len,
                        "chain length x^m for --via-intersection --strategy acyclic");
    cmd_pcp->add_option("--loop-weight", loop_weight,
                        "loop transition probability (default 0.5)");
    cmd_pcp->add_option("--strategy", pcp_strategy, "acyclic | threshold (default)")
        ->check(CLI::IsMember({"acyclic", "threshold"}));
    cmd_pcp->add_option("--tau", pcp_tau, "threshold for --strategy threshold");
    cmd_pcp->add_option("--grammar-out", grammar_out, "encoding grammar path");
    cmd_pcp->add_option("--fsa-out", fsa_out, "encoding automaton path");

    // ---- check ----
    std::string check_path;
    CLI::App* cmd_check = app.add_subcommand("check", "report grammar properties");
    cmd_check->add_option("grammar", check_path, "grammar file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_intersect) {
            pfg::Grammar g = pfg::parse_grammar(slurp(grammar_path));
            pfg::Fsa m = pfg::parse_fsa(slurp(fsa_path));
            if (fsa_dot) spill(*fsa_dot, pfg::fsa_to_dot(m));
            if (method == "naive") {
                pfg::ForestGrammar f = pfg::intersect_naive(g, m);
                if (do_reduce) f = pfg::reduce(f);
                std::string text = pfg::print_forest(f);
                if (out_path)
                    spill(*out_path, text);
                else
                    std::cout << text;
                bool empty = pfg::is_empty(f);
                std::cerr << "verdict: " << (empty ? "empty" : "non-empty") << " ("
                          << f.rules().size() << " rules)\n";
                return empty ? kExitEmpty : kExitNonEmpty;
            }
            pfg::Strategy strat = pick_strategy(strategy_flags, g);
            return run_intersection(g, m, strat, do_reduce, out_path, std::nullopt, false);
        }

        if (*cmd_parse) {
            pfg::Grammar g = pfg::parse_grammar(slurp(parse_grammar_path));
            pfg::Fsa m = pfg::Fsa::from_string(sentence);
            pfg::Strategy strat = pfg::is_context_free(g) ? pfg::Strategy::cfg_exact()
                                                          : pfg::Strategy::acyclic_only();
            return run_intersection(g, m, strat, parse_reduce, parse_out, tree_dot, true);
        }

        if (*cmd_pcp) {
            pfg::PcpInstance p = pfg::parse_pcp(slurp(instance_path));
            if (encode_only) {
                auto [g, m] = pfg::encode(p);
                std::string stem = instance_path;
                if (auto dot = stem.rfind('.'); dot != std::string::npos)
                    stem = stem.substr(0, dot);
                std::string gpath = grammar_out.value_or(stem + ".gr");
                std::string mpath = fsa_out.value_or(stem + ".fsa");
                spill(gpath, pfg::print_grammar(g));
                spill(mpath, pfg::print_fsa(m));
                std::cerr << "wrote " << gpath << " and " << mpath << "\n";
                return kExitNonEmpty;
            }
            if (solve) {
                auto sol = pfg::solve_bounded(p, max_m);
                if (!sol) {
                    std::cout << "no solution up to m=" << max_m << "\n";
                    return kExitEmpty;
                }
                for (std::size_t i = 0; i < sol->indices.size(); ++i)
                    std::cout << (i ? " " : "") << sol->indices[i];
                std::cout << " -> " << sol->witness << "\n";
                return kExitNonEmpty;
            }
            if (via_intersection) {
                pfg::DcgResult result;
                pfg::PcpInstance inst = p;
                if (pcp_strategy == "acyclic") {
                    auto [g, m] = pfg::encode(p);
                    (void)m;
                    pfg::Fsa chain = pfg::Fsa::from_string(
                        std::vector<std::string>(chain_len, "x"));
                    result = pfg::intersect_dcg(g, chain, pfg::Strategy::acyclic_only());
                } else {
                    auto [g, m] = pfg::encode(p, loop_weight);
                    result = pfg::intersect_dcg(g, m, pfg::Strategy::threshold(pcp_tau));
                }
                pfg::Verdict verdict = pfg::verdict_from(result);
                if (verdict.witness) {
                    auto sol = pfg::recover_solution(inst, result.forest, *verdict.witness);
                    if (sol) {
                        for (std::size_t i = 0; i < sol->indices.size(); ++i)
                            std::cout << (i ? " " : "") << sol->indices[i];
                        std::cout << " -> " << sol->witness << "\n";
                        return kExitNonEmpty;
                    }
                }
                std::cout << (verdict.kind == pfg::Emptiness::Empty
                                  ? "no solution (intersection empty)"
                                  : "no solution found (unknown)")
                          << "\n";
                return exit_code(verdict.kind);
            }
            std::cerr << "pcp needs one of --encode-only, --solve, --via-intersection\n";
            return kExitUsage;
        }

        if (*cmd_check) {
            pfg::Grammar g = pfg::parse_grammar(slurp(check_path));
            bool cf = pfg::is_context_free(g);
            bool olp = pfg::offline_parsable(g);
            std::set<std::string> cats, terms;
            for (const pfg::Rule& r : g.rules) {
                cats.insert(pfg::skeleton_name(r.lhs));
                for (const pfg::RhsItem& item : r.rhs) {
                    if (item.is_terminal)
                        terms.insert(item.symbol);
                    else
                        cats.insert(pfg::skeleton_name(item.category));
                }
            }
            std::cout << "context-free: " << (cf ? "yes" : "no") << "\n";
            std::cout << "off-line parsable: " << (olp ? "yes" : "no") << "\n";
            std::cout << "rules: " << g.rules.size() << "\n";
            std::cout << "categories: " << cats.size() << "\n";
            std::cout << "terminals: " << terms.size() << "\n";
            return kExitNonEmpty;
        }
    } catch (const pfg::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return kExitUsage;
}
