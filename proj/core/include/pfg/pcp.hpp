#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfg/forest.hpp"
#include "pfg/fsa.hpp"
#include "pfg/grammar.hpp"

namespace pfg {

/// A correspondence problem instance: two equal-length lists of
/// nonempty strings. Symbols are single characters.
struct PcpInstance {
    std::vector<std::string> list_a;
    std::vector<std::string> list_b;

    std::size_t size() const { return list_a.size(); }
    /// Throws std::invalid_argument on malformed instances.
    void check() const;
};

struct PcpSolution {
    std::vector<std::size_t> indices;  // 1-based pair indices
    std::string witness;

    bool operator==(const PcpSolution&) const = default;
};

/// Encodes an instance as a DCG plus automaton whose intersection is
/// nonempty iff the instance has a solution. Rule order: the top rule
/// (s -> +r(X,[],X,[])), the combination rule, then one lexical
/// difference-list rule per pair. The automaton has the single state q
/// with the loop q-x->q (weight configurable for the threshold
/// demonstrations). The resulting grammar is off-line parsable.
std::pair<Grammar, Fsa> encode(const PcpInstance& p, double loop_weight = 1.0);

/// Exhaustive search over index sequences of length <= max_m with
/// prefix pruning; returns the lexicographically least shortest
/// solution or nullopt.
std::optional<PcpSolution> solve_bounded(const PcpInstance& p, std::size_t max_m);

/// True iff the index sequence is nonempty and both concatenations
/// agree (and equal sol.witness when set).
bool verify_solution(const PcpInstance& p, const PcpSolution& sol);

/// Reads the pair index sequence off a validated parse tree of an
/// encoding intersection: in-order traversal of the lexical rule
/// applications (the forest's constraints map tree nodes back to
/// encoding rules). Returns nullopt if the tree does not decode.
std::optional<PcpSolution> recover_solution(const PcpInstance& p, const ForestGrammar& f,
                                            const ParseTree& tree);

/// Instance text format, one `pair <a> <b>` line per pair.
PcpInstance parse_pcp(std::string_view input);
std::string print_pcp(const PcpInstance& p);

}  // namespace pfg
