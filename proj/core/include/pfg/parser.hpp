#pragma once

#include <optional>

#include "pfg/forest.hpp"
#include "pfg/fsa.hpp"
#include "pfg/grammar.hpp"

namespace pfg {

/// Termination strategy for DCG intersection. The exact CFG parse
/// needs no strategy knobs; the DCG strategies trade completeness or
/// output tightness for termination on cyclic automata.
struct Strategy {
    enum class Kind {
        CfgExact,
        DcgAcyclicOnly,
        DcgThreshold,
        DcgSkeleton,
        DcgUnrestricted,
    };

    Kind kind = Kind::CfgExact;
    double tau = 0.0;        // DcgThreshold
    std::size_t depth = 0;   // DcgUnrestricted

    static Strategy cfg_exact() { return {Kind::CfgExact, 0.0, 0}; }
    static Strategy acyclic_only() { return {Kind::DcgAcyclicOnly, 0.0, 0}; }
    /// Throws std::invalid_argument unless tau lies in (0,1).
    static Strategy threshold(double tau);
    static Strategy skeleton() { return {Kind::DcgSkeleton, 0.0, 0}; }
    /// Throws std::invalid_argument unless depth_bound >= 1.
    static Strategy unrestricted(std::size_t depth_bound);

    const char* name() const;
};

struct ParseStats {
    std::size_t table_entries = 0;
    std::size_t answers = 0;
};

struct DcgResult {
    ForestGrammar forest;
    /// True when every parse of the intersection is represented in the
    /// forest as a constraint-valid tree (acyclic-only with an
    /// off-line parsable grammar, and the skeleton route). Incomplete
    /// strategies leave this false, so an empty validated inventory
    /// proves nothing.
    bool exhaustive = false;
};

/// Tabled top-down intersection of a context-free grammar with an
/// automaton. Terminates on every input; the forest derives exactly
/// the parse trees of the intersection. Throws std::invalid_argument
/// on non-context-free grammars.
ForestGrammar intersect_cfg(const Grammar& g, const Fsa& m, ParseStats* stats = nullptr);

/// DCG intersection under the selected strategy (CfgExact is not a
/// valid argument here). Forest rules carry their original DCG rules
/// as constraints so extracted trees can be re-validated.
DcgResult intersect_dcg(const Grammar& g, const Fsa& m, const Strategy& strat,
                        ParseStats* stats = nullptr);

enum class Emptiness { NonEmpty, Empty, Unknown };

struct Verdict {
    Emptiness kind = Emptiness::Unknown;
    std::optional<ParseTree> witness;  // constraint-validated, NonEmpty only
};

/// Three-valued emptiness of the intersection. Empty is only reported
/// when the strategy was exhaustive for the instance; NonEmpty always
/// carries a validated witness tree.
Verdict emptiness_verdict(const Grammar& g, const Fsa& m, const Strategy& strat);

/// Same verdict computed from an intersection already at hand.
Verdict verdict_from(const DcgResult& result);

const char* to_string(Emptiness e);

}  // namespace pfg
