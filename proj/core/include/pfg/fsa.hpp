#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pfg/text.hpp"

namespace pfg {

using StateId = std::string;

/// One labeled edge of an automaton. The weight is a probability in
/// (0,1]; unweighted automata simply keep the default 1.
struct Transition {
    StateId from;
    std::string label;
    StateId to;
    double weight = 1.0;

    bool operator==(const Transition&) const = default;
};

/// A finite state automaton: possibly nondeterministic, possibly
/// cyclic, with one or more start states. Immutable once built (the
/// add_* calls are for construction only); safe to share across
/// threads afterwards.
class Fsa {
public:
    /// Linear chain automaton spelling exactly `tokens`, states "0".."n".
    static Fsa from_string(std::span<const std::string> tokens);
    static Fsa from_string(std::initializer_list<std::string> tokens);

    void add_state(StateId name);
    /// Registers the endpoint states as needed. Throws on weight
    /// outside (0,1].
    void add_transition(StateId from, std::string label, StateId to, double weight = 1.0);
    void add_start(StateId name);
    void add_final(StateId name);

    const std::set<StateId>& states() const { return states_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::set<StateId>& starts() const { return starts_; }
    const std::set<StateId>& finals() const { return finals_; }

    bool is_start(const StateId& q) const { return starts_.count(q) > 0; }
    bool is_final(const StateId& q) const { return finals_.count(q) > 0; }

    /// True iff the transition graph has no cycle anywhere (self-loops
    /// count as cycles; reachability from start states is irrelevant).
    bool is_acyclic() const;

    /// Some cycle of states, e.g. {q0,q1,q0}, when the automaton is
    /// cyclic; nullopt otherwise.
    std::optional<std::vector<StateId>> find_cycle() const;

    /// Standard NFA simulation over the token sequence.
    bool accepts(std::span<const std::string> tokens) const;
    bool accepts(std::initializer_list<std::string> tokens) const;

    /// Checks the nonempty-starts and membership invariants; throws
    /// std::logic_error on violation. Readers call this.
    void check() const;

private:
    std::set<StateId> states_;
    std::vector<Transition> transitions_;
    std::set<StateId> starts_;
    std::set<StateId> finals_;
};

/// Product of the weights along a connected transition path (1.0 for
/// the empty path). Throws std::invalid_argument when consecutive
/// transitions do not connect.
double path_weight(std::span<const Transition> path);

/// Text format: `start q0` / `final q2` / `trans q0 a q1 [weight]`,
/// plus `state q` for states mentioned nowhere else. '#' comments.
Fsa parse_fsa(std::string_view input);
std::string print_fsa(const Fsa& fsa);

/// Graphviz rendering of the transition graph.
std::string fsa_to_dot(const Fsa& fsa);

}  // namespace pfg
