#include "pfg/pcp.hpp"

#include <sstream>
#include <stdexcept>

namespace pfg {

void PcpInstance::check() const {
    if (list_a.empty()) throw std::invalid_argument("instance needs at least one pair");
    if (list_a.size() != list_b.size())
        throw std::invalid_argument("instance lists must have equal length");
    for (const std::string& s : list_a)
        if (s.empty()) throw std::invalid_argument("instance strings must be nonempty");
    for (const std::string& s : list_b)
        if (s.empty()) throw std::invalid_argument("instance strings must be nonempty");
}

namespace {

/// Difference-list pattern [c1,...,cn|Tail] for a pair string.
Term diff_list(const std::string& s, const Term& tail) {
    std::vector<Term> items;
    items.reserve(s.size());
    for (char c : s) items.push_back(Term::atom(std::string(1, c)));
    return Term::list(items, tail);
}

}  // namespace

std::pair<Grammar, Fsa> encode(const PcpInstance& p, double loop_weight) {
    p.check();
    Grammar g;
    g.top = Term::atom("s");

    // top rule: s -> r(X,[],X,[]) -- the two lists must match.
    {
        Rule r;
        r.lhs = Term::atom("s");
        r.rhs.push_back(RhsItem::nonterminal(Term::compound(
            "r", {Term::variable("X"), Term::nil(), Term::variable("X"), Term::nil()})));
        g.rules.push_back(std::move(r));
    }
    // combination rule: r(A0,A,B0,B) -> r(A0,A1,B0,B1) r(A1,A,B1,B).
    {
        Rule r;
        auto v = [](const char* n) { return Term::variable(n); };
        r.lhs = Term::compound("r", {v("A0"), v("A"), v("B0"), v("B")});
        r.rhs.push_back(RhsItem::nonterminal(
            Term::compound("r", {v("A0"), v("A1"), v("B0"), v("B1")})));
        r.rhs.push_back(RhsItem::nonterminal(
            Term::compound("r", {v("A1"), v("A"), v("B1"), v("B")})));
        g.rules.push_back(std::move(r));
    }
    // one lexical rule per pair, difference-list encoded.
    for (std::size_t i = 0; i < p.size(); ++i) {
        Rule r;
        r.lhs = Term::compound("r", {diff_list(p.list_a[i], Term::variable("A")),
                                     Term::variable("A"),
                                     diff_list(p.list_b[i], Term::variable("B")),
                                     Term::variable("B")});
        r.rhs.push_back(RhsItem::terminal("x"));
        g.rules.push_back(std::move(r));
    }

    Fsa m;
    m.add_start("q");
    m.add_final("q");
    m.add_transition("q", "x", "q", loop_weight);
    return {std::move(g), std::move(m)};
}

std::optional<PcpSolution> solve_bounded(const PcpInstance& p, std::size_t max_m) {
    p.check();
    if (max_m < 1) throw std::invalid_argument("solve_bounded needs max_m >= 1");

    // Depth-first over sequences of exactly length L in ascending
    // index order, shortest length first; abandon a prefix as soon as
    // neither concatenation is a prefix of the other.
    std::vector<std::size_t> indices;
    std::string a, b;
    auto dfs = [&](auto&& self, std::size_t remaining) -> bool {
        if (remaining == 0) return !indices.empty() && a == b;
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::size_t alen = a.size(), blen = b.size();
            a += p.list_a[i];
            b += p.list_b[i];
            bool compatible = a.compare(0, std::min(a.size(), b.size()), b, 0,
                                        std::min(a.size(), b.size())) == 0;
            if (compatible) {
                indices.push_back(i + 1);
                if (self(self, remaining - 1)) return true;
                indices.pop_back();
            }
            a.resize(alen);
            b.resize(blen);
        }
        return false;
    };
    for (std::size_t len = 1; len <= max_m; ++len) {
        if (dfs(dfs, len)) return PcpSolution{indices, a};
    }
    return std::nullopt;
}

bool verify_solution(const PcpInstance& p, const PcpSolution& sol) {
    if (sol.indices.empty()) return false;
    std::string a, b;
    for (std::size_t i : sol.indices) {
        if (i < 1 || i > p.size()) return false;
        a += p.list_a[i - 1];
        b += p.list_b[i - 1];
    }
    if (a != b) return false;
    return sol.witness.empty() || sol.witness == a;
}

std::optional<PcpSolution> recover_solution(const PcpInstance& p, const ForestGrammar& f,
                                            const ParseTree& tree) {
    // Walk the tree leftmost-first; the forest constraints map each
    // node back to an encoding rule, and pair i sits at rule i + 1
    // (after the top and combination rules).
    std::vector<std::size_t> indices;
    bool ok = true;
    auto walk = [&](auto&& self, const ParseTree& t) -> void {
        if (!ok) return;
        if (t.node.is_terminal) return;
        if (t.rule_index >= f.rules().size() || !f.rules()[t.rule_index].constraint) {
            ok = false;
            return;
        }
        std::size_t ri = f.rules()[t.rule_index].constraint->rule_index;
        if (ri >= 2) {
            if (ri - 1 > p.size()) {
                ok = false;
                return;
            }
            indices.push_back(ri - 1);
        }
        for (const ParseTree& c : t.children) self(self, c);
    };
    walk(walk, tree);
    if (!ok || indices.empty()) return std::nullopt;
    std::string a;
    for (std::size_t i : indices) a += p.list_a[i - 1];
    PcpSolution sol{std::move(indices), std::move(a)};
    if (!verify_solution(p, sol)) return std::nullopt;
    return sol;
}

PcpInstance parse_pcp(std::string_view input) {
    PcpInstance p;
    for (const auto& [line_no, line] : text::content_lines(input)) {
        std::istringstream is(line);
        std::string kind, a, b;
        is >> kind;
        if (kind != "pair") throw ParseError("unknown declaration '" + kind + "'", line_no);
        if (!(is >> a >> b)) throw ParseError("pair needs two strings", line_no);
        if (std::string extra; is >> extra)
            throw ParseError("trailing input '" + extra + "'", line_no);
        p.list_a.push_back(a);
        p.list_b.push_back(b);
    }
    try {
        p.check();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return p;
}

std::string print_pcp(const PcpInstance& p) {
    std::ostringstream os;
    for (std::size_t i = 0; i < p.list_a.size(); ++i)
        os << "pair " << p.list_a[i] << " " << p.list_b[i] << "\n";
    return os.str();
}

}  // namespace pfg
