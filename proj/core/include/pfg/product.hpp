#pragma once

#include <vector>

#include "pfg/forest.hpp"
#include "pfg/fsa.hpp"
#include "pfg/grammar.hpp"

namespace pfg {

/// The classical product construction: for each rule with n rhs
/// symbols one decorated rule per (n+1)-tuple of states, one lexical
/// rule per transition, a start symbol per (start, final) pair.
/// Throws std::invalid_argument on non-context-free input. Rules are
/// emitted in rule-then-state-tuple lexicographic order.
ForestGrammar intersect_naive(const Grammar& g, const Fsa& m);

/// Subgrammar of productive-and-reachable rules (language preserved,
/// idempotent). Constraints and start symbols are kept.
ForestGrammar reduce(const ForestGrammar& f);
/// Same for a plain context-free grammar; the start symbol is `top`.
Grammar reduce(const Grammar& g);

/// All terminal strings of length <= k derivable from a start symbol
/// (bounded-length dynamic programming; terminates on cyclic
/// grammars). For forests the decorated symbols act as nonterminals
/// and any attached constraints are ignored.
std::vector<std::vector<std::string>> language_upto(const Grammar& g, std::size_t k);
std::vector<std::vector<std::string>> language_upto(const ForestGrammar& f, std::size_t k);

}  // namespace pfg
