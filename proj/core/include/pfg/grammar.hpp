#pragma once

#include <string>
#include <vector>

#include "pfg/term.hpp"

namespace pfg {

/// One right-hand-side item: a terminal symbol or a nonterminal
/// category term. In the text format terminals are written `-a`,
/// nonterminals `+cat`.
struct RhsItem {
    static RhsItem terminal(std::string symbol);
    static RhsItem nonterminal(Term category);

    bool is_terminal = false;
    std::string symbol;  // valid when is_terminal
    Term category = Term::nil();

    bool operator==(const RhsItem& other) const;
};

struct Rule {
    Term lhs = Term::nil();
    std::vector<RhsItem> rhs;

    bool operator==(const Rule& other) const = default;
};

/// A unified CFG/DCG: when every category is an atom the grammar is
/// context-free, otherwise rule application uses unification. Rules
/// are an ordered list so downstream output is deterministic.
struct Grammar {
    std::vector<Rule> rules;
    Term top = Term::atom("s");
};

/// True iff every category (rule lhs, nonterminal rhs payloads, top)
/// is a zero-argument compound.
bool is_context_free(const Grammar& g);

/// The context-free skeleton: each category collapses to its
/// functor/arity name (`r/4`; zero-arity categories keep their name).
/// Rule shapes are preserved one for one, so skeleton rule i
/// corresponds to original rule i.
Grammar cf_skeleton(const Grammar& g);

/// Skeleton name of one category.
std::string skeleton_name(const Term& category);

/// True iff the context-free skeleton has no category deriving itself
/// through a derivation whose other leaves are all nullable, i.e. the
/// grammar admits only finitely many skeleton parses per string.
bool offline_parsable(const Grammar& g);

/// Text format, one declaration per line:
///   `top s`
///   `rule s -> -a +s -b`
///   `rule s ->`                          (empty rhs)
///   `rule r([1|A],A,[1,1,1|B],B) -> -x`  (DCG category)
Grammar parse_grammar(std::string_view input);
std::string print_grammar(const Grammar& g);
std::string print_rule(const Rule& r);

}  // namespace pfg
