#pragma once

#include <string>
#include <vector>

#include "pfg/fsa.hpp"
#include "pfg/grammar.hpp"

namespace pfg::testing {

/// top s; s -> -a +s -b; s -> (epsilon). The running a^n b^n example.
inline Grammar anbn() {
    return parse_grammar("top s\nrule s -> -a +s -b\nrule s ->\n");
}

/// The cyclic automaton for (aa)*b+: an even number of a's followed by
/// at least one b.
inline Fsa evenas() {
    Fsa m;
    m.add_start("q0");
    m.add_final("q2");
    m.add_transition("q0", "a", "q1");
    m.add_transition("q1", "a", "q0");
    m.add_transition("q0", "b", "q2");
    m.add_transition("q2", "b", "q2");
    return m;
}

inline std::vector<std::string> tokens(std::initializer_list<const char*> toks) {
    std::vector<std::string> out;
    for (const char* t : toks) out.emplace_back(t);
    return out;
}

inline std::string join(const std::vector<std::string>& toks, const char* sep = "") {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out += sep;
        out += toks[i];
    }
    return out;
}

}  // namespace pfg::testing
