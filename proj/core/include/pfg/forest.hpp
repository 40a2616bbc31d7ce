#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pfg/grammar.hpp"
#include "pfg/term.hpp"

namespace pfg {

/// A grammar symbol decorated with the automaton states it spans:
/// either a category term (nonterminal) or a terminal symbol. Printed
/// `p(s,q0,q2)`, `p(+s,q1,q2)`, `p(-a,q0,q1)` depending on position.
struct DecoratedSymbol {
    static DecoratedSymbol category(Term cat, std::string from, std::string to);
    static DecoratedSymbol terminal(std::string symbol, std::string from, std::string to);

    bool is_terminal = false;
    Term cat = Term::nil();  // valid when !is_terminal
    std::string symbol;      // valid when is_terminal
    std::string from;
    std::string to;

    bool operator==(const DecoratedSymbol& other) const;
    bool operator<(const DecoratedSymbol& other) const;

    /// Rendering with the given position mark ('\0' for none, '+'/'-'
    /// for rhs occurrences).
    std::string str(char mark = '\0') const;
};

/// The original DCG rule a forest rule was obtained from; carried so
/// trees can be re-validated by unification independently of parse
/// time.
struct ForestConstraint {
    std::size_t rule_index = 0;
    Rule original;

    bool operator==(const ForestConstraint& other) const {
        return rule_index == other.rule_index && original == other.original;
    }
};

/// One rule of a parse-forest grammar. Lexical rules (lhs decorated
/// over a terminal, written `p(a,q0,q1) -> a`) have an empty rhs; all
/// other rules chain states through their rhs.
struct ForestRule {
    DecoratedSymbol lhs;
    std::vector<DecoratedSymbol> rhs;
    std::optional<ForestConstraint> constraint;

    bool is_lexical() const { return lhs.is_terminal; }
    std::string str() const;
};

struct ParseTree {
    DecoratedSymbol node;
    std::size_t rule_index = 0;  // index into the forest's rule list
    std::vector<ParseTree> children;

    std::size_t node_count() const;
    /// Left-to-right terminal leaves.
    std::vector<std::string> frontier() const;
    /// Canonical rendering, e.g. `(s,0,4 (a,0,1 a) (s,1,3 ...) (b,3,4 b))`.
    std::string str() const;
};

struct ExtractOptions {
    /// Cap on tree node count; when unset the search grows its budget
    /// until `limit` trees are found, the forest is exhausted, or an
    /// internal ceiling is reached.
    std::optional<std::size_t> max_nodes;
    /// Skip trees whose frontier is longer than this.
    std::optional<std::size_t> max_frontier;
};

/// A parse-forest grammar: the output object of the intersection
/// routines. Rules are kept in first-emission order and may legally be
/// unreachable from the start symbols; reduction is always an explicit
/// call.
class ForestGrammar {
public:
    /// Appends a rule, asserting the state-chaining invariant
    /// (std::logic_error on violation). Duplicate rules are kept once.
    void add_rule(ForestRule rule);
    void add_start(DecoratedSymbol start);
    /// Original top category, used when validating trees of a
    /// constraint-carrying forest.
    void set_top_constraint(Term top) { top_constraint_ = std::move(top); }

    const std::vector<ForestRule>& rules() const { return rules_; }
    const std::vector<DecoratedSymbol>& starts() const { return starts_; }
    const std::optional<Term>& top_constraint() const { return top_constraint_; }
    bool has_constraints() const;

    bool operator==(const ForestGrammar& other) const;

private:
    std::vector<ForestRule> rules_;
    std::set<std::string> keys_;
    std::vector<DecoratedSymbol> starts_;
    std::optional<Term> top_constraint_;
};

/// True iff no start symbol is productive (bottom-up fixpoint;
/// constraints are ignored, so for constraint-carrying forests this is
/// only a necessary condition for a validated tree to exist).
bool is_empty(const ForestGrammar& f);

/// Up to `limit` distinct parse trees rooted at start symbols,
/// enumerated by increasing node count (ties broken by rule order).
/// When the forest carries constraints each candidate tree is
/// re-validated by unification along the tree and invalid trees are
/// discarded without counting. When `complete` is given it is set to
/// true iff the candidate inventory was enumerated exhaustively (so an
/// empty result proves no validated tree exists).
std::vector<ParseTree> extract_trees(const ForestGrammar& f, std::size_t limit,
                                     ExtractOptions opts = {}, bool* complete = nullptr);

/// Runs a constraint validation pass over one tree: unifies the
/// attached original rules along the tree (standardized apart), plus
/// the forest's top constraint at the root. Trees of constraint-free
/// forests are always valid.
bool validate_tree(const ForestGrammar& f, const ParseTree& tree);

/// All frontiers of length <= k of constraint-valid trees. For
/// constraint-free forests this is computed exactly by bounded-length
/// dynamic programming; otherwise trees are enumerated with an
/// exhaustion check and a std::runtime_error is thrown if the forest
/// admits unboundedly large candidate trees.
std::vector<std::vector<std::string>> enumerate_strings(const ForestGrammar& f, std::size_t k);

/// Text format, mirroring the rule notation of the intersection
/// construction, plus `orig`/`orig-top` lines and `@i` tags carrying
/// attached constraints when present:
///   start p(s,q0,q2)
///   p(s,q0,q2) -> p(-a,q0,q1) p(+s,q1,q2) p(-b,q2,q2)
///   p(a,q0,q1) -> a
ForestGrammar parse_forest(std::string_view input);
std::string print_forest(const ForestGrammar& f);

/// Graphviz rendering of one extracted tree.
std::string tree_to_dot(const ParseTree& tree);

}  // namespace pfg
