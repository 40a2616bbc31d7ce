#include "pfg/grammar.hpp"

#include <map>
#include <set>
#include <sstream>

namespace pfg {

RhsItem RhsItem::terminal(std::string symbol) {
    RhsItem item;
    item.is_terminal = true;
    item.symbol = std::move(symbol);
    return item;
}

RhsItem RhsItem::nonterminal(Term category) {
    RhsItem item;
    item.is_terminal = false;
    item.category = std::move(category);
    return item;
}

bool RhsItem::operator==(const RhsItem& other) const {
    if (is_terminal != other.is_terminal) return false;
    return is_terminal ? symbol == other.symbol : category == other.category;
}

bool is_context_free(const Grammar& g) {
    if (!g.top.is_atom()) return false;
    for (const Rule& r : g.rules) {
        if (!r.lhs.is_atom()) return false;
        for (const RhsItem& item : r.rhs)
            if (!item.is_terminal && !item.category.is_atom()) return false;
    }
    return true;
}

std::string skeleton_name(const Term& category) {
    if (category.is_variable()) return "anon/0";
    if (category.arity() == 0) return category.name();
    return category.name() + "/" + std::to_string(category.arity());
}

Grammar cf_skeleton(const Grammar& g) {
    Grammar out;
    out.top = Term::atom(skeleton_name(g.top));
    out.rules.reserve(g.rules.size());
    for (const Rule& r : g.rules) {
        Rule sk;
        sk.lhs = Term::atom(skeleton_name(r.lhs));
        for (const RhsItem& item : r.rhs) {
            if (item.is_terminal)
                sk.rhs.push_back(item);
            else
                sk.rhs.push_back(RhsItem::nonterminal(Term::atom(skeleton_name(item.category))));
        }
        out.rules.push_back(std::move(sk));
    }
    return out;
}

bool offline_parsable(const Grammar& g) {
    Grammar sk = cf_skeleton(g);

    // Nullable fixpoint over skeleton nonterminal names.
    std::set<std::string> nullable;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& r : sk.rules) {
            if (nullable.count(r.lhs.name())) continue;
            bool all = true;
            for (const RhsItem& item : r.rhs) {
                if (item.is_terminal || !nullable.count(item.category.name())) {
                    all = false;
                    break;
                }
            }
            if (all) {
                nullable.insert(r.lhs.name());
                changed = true;
            }
        }
    }

    // A derives B in one step with all other leaves nullable.
    std::map<std::string, std::set<std::string>> edges;
    for (const Rule& r : sk.rules) {
        bool has_terminal = false;
        for (const RhsItem& item : r.rhs)
            if (item.is_terminal) has_terminal = true;
        if (has_terminal) continue;
        for (std::size_t i = 0; i < r.rhs.size(); ++i) {
            bool others_nullable = true;
            for (std::size_t j = 0; j < r.rhs.size(); ++j) {
                if (j == i) continue;
                if (!nullable.count(r.rhs[j].category.name())) {
                    others_nullable = false;
                    break;
                }
            }
            if (others_nullable)
                edges[r.lhs.name()].insert(r.rhs[i].category.name());
        }
    }

    // Cycle detection (self-edges included) over the unit-reach graph.
    std::map<std::string, int> mark;  // 0 white, 1 grey, 2 black
    std::vector<std::string> stack;
    auto dfs = [&](auto&& self, const std::string& a) -> bool {
        mark[a] = 1;
        if (auto it = edges.find(a); it != edges.end()) {
            for (const std::string& b : it->second) {
                if (mark[b] == 1) return true;
                if (mark[b] == 0 && self(self, b)) return true;
            }
        }
        mark[a] = 2;
        return false;
    };
    for (const auto& [a, _] : edges)
        if (mark[a] == 0 && dfs(dfs, a)) return false;
    return true;
}

namespace {

Rule parse_rule_body(text::Cursor& cur) {
    Rule rule;
    rule.lhs = parse_term(cur);
    cur.expect("->");
    while (!cur.at_end()) {
        if (cur.try_consume("-")) {
            std::string_view sym = cur.next();
            if (!text::is_ident(sym)) cur.fail("expected a terminal symbol after '-'");
            rule.rhs.push_back(RhsItem::terminal(std::string(sym)));
        } else if (cur.try_consume("+")) {
            rule.rhs.push_back(RhsItem::nonterminal(parse_term(cur)));
        } else {
            cur.fail("expected '+category' or '-terminal', got '" +
                     std::string(cur.peek()) + "'");
        }
    }
    return rule;
}

}  // namespace

Grammar parse_grammar(std::string_view input) {
    Grammar g;
    bool saw_top = false;
    for (const auto& [line_no, line] : text::content_lines(input)) {
        text::Cursor cur(line, line_no);
        std::string_view kind = cur.next();
        if (kind == "top") {
            g.top = parse_term(cur);
            if (!cur.at_end()) cur.fail("trailing input after top declaration");
            saw_top = true;
        } else if (kind == "rule") {
            g.rules.push_back(parse_rule_body(cur));
        } else {
            cur.fail("unknown declaration '" + std::string(kind) + "'");
        }
    }
    if (!saw_top) throw ParseError("grammar has no top declaration");
    return g;
}

std::string print_rule(const Rule& r) {
    std::ostringstream os;
    os << "rule " << r.lhs.str() << " ->";
    for (const RhsItem& item : r.rhs) {
        if (item.is_terminal)
            os << " -" << item.symbol;
        else
            os << " +" << item.category.str();
    }
    return os.str();
}

std::string print_grammar(const Grammar& g) {
    std::ostringstream os;
    os << "top " << g.top.str() << "\n";
    for (const Rule& r : g.rules) os << print_rule(r) << "\n";
    return os.str();
}

}  // namespace pfg
