#include "pfg/fsa.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pfg {

Fsa Fsa::from_string(std::span<const std::string> tokens) {
    Fsa fsa;
    fsa.add_start("0");
    fsa.add_final(std::to_string(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i)
        fsa.add_transition(std::to_string(i), tokens[i], std::to_string(i + 1));
    return fsa;
}

Fsa Fsa::from_string(std::initializer_list<std::string> tokens) {
    return from_string(std::span<const std::string>(tokens.begin(), tokens.size()));
}

void Fsa::add_state(StateId name) { states_.insert(std::move(name)); }

void Fsa::add_transition(StateId from, std::string label, StateId to, double weight) {
    if (!(weight > 0.0 && weight <= 1.0))
        throw std::invalid_argument("transition weight must lie in (0,1], got " +
                                    std::to_string(weight));
    states_.insert(from);
    states_.insert(to);
    transitions_.push_back({std::move(from), std::move(label), std::move(to), weight});
}

void Fsa::add_start(StateId name) {
    states_.insert(name);
    starts_.insert(std::move(name));
}

void Fsa::add_final(StateId name) {
    states_.insert(name);
    finals_.insert(std::move(name));
}

void Fsa::check() const {
    if (starts_.empty()) throw std::logic_error("automaton has no start state");
}

namespace {

enum class Mark { White, Grey, Black };

bool dfs_cycle(const StateId& q, const std::map<StateId, std::vector<const Transition*>>& out,
               std::map<StateId, Mark>& marks, std::vector<StateId>& stack,
               std::vector<StateId>* cycle) {
    marks[q] = Mark::Grey;
    stack.push_back(q);
    if (auto it = out.find(q); it != out.end()) {
        for (const Transition* t : it->second) {
            Mark m = marks[t->to];
            if (m == Mark::Grey) {
                if (cycle) {
                    auto start = std::find(stack.begin(), stack.end(), t->to);
                    cycle->assign(start, stack.end());
                    cycle->push_back(t->to);
                }
                return true;
            }
            if (m == Mark::White && dfs_cycle(t->to, out, marks, stack, cycle)) return true;
        }
    }
    marks[q] = Mark::Black;
    stack.pop_back();
    return false;
}

}  // namespace

std::optional<std::vector<StateId>> Fsa::find_cycle() const {
    std::map<StateId, std::vector<const Transition*>> out;
    for (const Transition& t : transitions_) out[t.from].push_back(&t);
    std::map<StateId, Mark> marks;
    for (const StateId& q : states_) marks[q] = Mark::White;
    std::vector<StateId> stack;
    for (const StateId& q : states_) {
        if (marks[q] != Mark::White) continue;
        std::vector<StateId> cycle;
        if (dfs_cycle(q, out, marks, stack, &cycle)) return cycle;
    }
    return std::nullopt;
}

bool Fsa::is_acyclic() const { return !find_cycle().has_value(); }

bool Fsa::accepts(std::span<const std::string> tokens) const {
    std::set<StateId> current = starts_;
    for (const std::string& tok : tokens) {
        std::set<StateId> next;
        for (const Transition& t : transitions_)
            if (t.label == tok && current.count(t.from)) next.insert(t.to);
        current = std::move(next);
        if (current.empty()) return false;
    }
    for (const StateId& q : current)
        if (finals_.count(q)) return true;
    return false;
}

bool Fsa::accepts(std::initializer_list<std::string> tokens) const {
    return accepts(std::span<const std::string>(tokens.begin(), tokens.size()));
}

double path_weight(std::span<const Transition> path) {
    double w = 1.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0 && path[i - 1].to != path[i].from)
            throw std::invalid_argument("disconnected derivation trace: transition ending at '" +
                                        path[i - 1].to + "' followed by one starting at '" +
                                        path[i].from + "'");
        w *= path[i].weight;
    }
    return w;
}

namespace {

// Shortest representation that parses back to the same double.
std::string format_weight(double w) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace

Fsa parse_fsa(std::string_view input) {
    Fsa fsa;
    for (const auto& [line_no, line] : text::content_lines(input)) {
        std::istringstream is(line);
        std::string kind;
        is >> kind;
        if (kind == "state") {
            std::string q;
            if (!(is >> q)) throw ParseError("state declaration needs a name", line_no);
            fsa.add_state(q);
        } else if (kind == "start") {
            std::string q;
            if (!(is >> q)) throw ParseError("start declaration needs a state", line_no);
            fsa.add_start(q);
        } else if (kind == "final") {
            std::string q;
            if (!(is >> q)) throw ParseError("final declaration needs a state", line_no);
            fsa.add_final(q);
        } else if (kind == "trans") {
            std::string from, label, to;
            if (!(is >> from >> label >> to))
                throw ParseError("trans declaration needs 'from label to'", line_no);
            double weight = 1.0;
            if (std::string w; is >> w) {
                try {
                    std::size_t used = 0;
                    weight = std::stod(w, &used);
                    if (used != w.size()) throw std::invalid_argument(w);
                } catch (const std::exception&) {
                    throw ParseError("malformed transition weight '" + w + "'", line_no);
                }
            }
            try {
                fsa.add_transition(from, label, to, weight);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), line_no);
            }
        } else {
            throw ParseError("unknown declaration '" + kind + "'", line_no);
        }
        if (std::string extra; is >> extra)
            throw ParseError("trailing input '" + extra + "'", line_no);
    }
    fsa.check();
    return fsa;
}

std::string print_fsa(const Fsa& fsa) {
    std::ostringstream os;
    std::set<StateId> mentioned;
    for (const StateId& q : fsa.starts()) {
        os << "start " << q << "\n";
        mentioned.insert(q);
    }
    for (const StateId& q : fsa.finals()) {
        os << "final " << q << "\n";
        mentioned.insert(q);
    }
    for (const Transition& t : fsa.transitions()) {
        os << "trans " << t.from << " " << t.label << " " << t.to;
        if (t.weight != 1.0) os << " " << format_weight(t.weight);
        os << "\n";
        mentioned.insert(t.from);
        mentioned.insert(t.to);
    }
    for (const StateId& q : fsa.states())
        if (!mentioned.count(q)) os << "state " << q << "\n";
    return os.str();
}

std::string fsa_to_dot(const Fsa& fsa) {
    std::ostringstream os;
    os << "digraph fsa {\n  rankdir=LR;\n";
    for (const StateId& q : fsa.states()) {
        os << "  \"" << q << "\"";
        if (fsa.is_final(q)) os << " [shape=doublecircle]";
        else os << " [shape=circle]";
        os << ";\n";
    }
    int anchor = 0;
    for (const StateId& q : fsa.starts()) {
        os << "  start" << anchor << " [shape=point];\n";
        os << "  start" << anchor << " -> \"" << q << "\";\n";
        ++anchor;
    }
    for (const Transition& t : fsa.transitions()) {
        os << "  \"" << t.from << "\" -> \"" << t.to << "\" [label=\"" << t.label;
        if (t.weight != 1.0) os << "/" << format_weight(t.weight);
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace pfg
