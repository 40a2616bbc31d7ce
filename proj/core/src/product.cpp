#include "pfg/product.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace pfg {

namespace {

void require_cfg(const Grammar& g, const char* who) {
    if (!is_context_free(g))
        throw std::invalid_argument(std::string(who) +
                                    " requires a context-free grammar; intersect a DCG "
                                    "through intersect_dcg with an explicit strategy");
}

/// A grammar view shared by the reduction and enumeration algorithms:
/// nonterminals are interned symbol keys, rhs elements are either
/// terminal literals or nonterminal ids.
struct CfgView {
    struct Element {
        bool is_literal;
        std::string literal;
        std::size_t id;
    };
    struct ViewRule {
        std::size_t lhs;
        std::vector<Element> rhs;
    };

    std::vector<ViewRule> rules;
    std::vector<std::size_t> start_ids;
    std::size_t symbol_count = 0;

    std::map<std::string, std::size_t> intern_map;

    std::size_t intern(const std::string& key) {
        auto [it, fresh] = intern_map.emplace(key, symbol_count);
        if (fresh) ++symbol_count;
        return it->second;
    }
};

std::string view_key(const DecoratedSymbol& s) {
    return (s.is_terminal ? "T:" : "N:") + s.str();
}

CfgView make_view(const Grammar& g) {
    CfgView v;
    for (const Rule& r : g.rules) {
        CfgView::ViewRule vr;
        vr.lhs = v.intern(r.lhs.name());
        for (const RhsItem& item : r.rhs) {
            if (item.is_terminal)
                vr.rhs.push_back({true, item.symbol, 0});
            else
                vr.rhs.push_back({false, "", v.intern(item.category.name())});
        }
        v.rules.push_back(std::move(vr));
    }
    v.start_ids.push_back(v.intern(g.top.name()));
    return v;
}

CfgView make_view(const ForestGrammar& f) {
    CfgView v;
    for (const ForestRule& r : f.rules()) {
        CfgView::ViewRule vr;
        vr.lhs = v.intern(view_key(r.lhs));
        if (r.is_lexical()) {
            vr.rhs.push_back({true, r.lhs.symbol, 0});
        } else {
            for (const DecoratedSymbol& item : r.rhs)
                vr.rhs.push_back({false, "", v.intern(view_key(item))});
        }
        v.rules.push_back(std::move(vr));
    }
    for (const DecoratedSymbol& s : f.starts()) v.start_ids.push_back(v.intern(view_key(s)));
    return v;
}

/// Indices of the productive-and-reachable rules, in original order.
std::vector<std::size_t> useful_rules(const CfgView& v) {
    std::vector<bool> productive(v.symbol_count, false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : v.rules) {
            if (productive[r.lhs]) continue;
            bool all = true;
            for (const auto& e : r.rhs)
                if (!e.is_literal && !productive[e.id]) {
                    all = false;
                    break;
                }
            if (all) {
                productive[r.lhs] = true;
                changed = true;
            }
        }
    }
    auto rule_ok = [&](const CfgView::ViewRule& r) {
        if (!productive[r.lhs]) return false;
        for (const auto& e : r.rhs)
            if (!e.is_literal && !productive[e.id]) return false;
        return true;
    };
    std::vector<bool> reachable(v.symbol_count, false);
    for (std::size_t s : v.start_ids) reachable[s] = true;
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : v.rules) {
            if (!reachable[r.lhs] || !rule_ok(r)) continue;
            for (const auto& e : r.rhs) {
                if (!e.is_literal && !reachable[e.id]) {
                    reachable[e.id] = true;
                    changed = true;
                }
            }
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < v.rules.size(); ++i)
        if (reachable[v.rules[i].lhs] && rule_ok(v.rules[i])) keep.push_back(i);
    return keep;
}

using TokenString = std::vector<std::string>;

std::vector<TokenString> bounded_language(const CfgView& v, std::size_t k) {
    std::vector<std::set<TokenString>> lang(v.symbol_count);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : v.rules) {
            // All concatenations of the current sets, truncated at k.
            std::vector<TokenString> partial{{}};
            for (const auto& e : r.rhs) {
                std::vector<TokenString> next;
                for (const TokenString& acc : partial) {
                    if (e.is_literal) {
                        if (acc.size() + 1 > k) continue;
                        TokenString w = acc;
                        w.push_back(e.literal);
                        next.push_back(std::move(w));
                    } else {
                        for (const TokenString& sub : lang[e.id]) {
                            if (acc.size() + sub.size() > k) continue;
                            TokenString w = acc;
                            w.insert(w.end(), sub.begin(), sub.end());
                            next.push_back(std::move(w));
                        }
                    }
                }
                partial = std::move(next);
                if (partial.empty()) break;
            }
            for (TokenString& w : partial)
                if (lang[r.lhs].insert(std::move(w)).second) changed = true;
        }
    }
    std::set<TokenString> out;
    for (std::size_t s : v.start_ids) out.insert(lang[s].begin(), lang[s].end());
    return {out.begin(), out.end()};
}

}  // namespace

ForestGrammar intersect_naive(const Grammar& g, const Fsa& m) {
    require_cfg(g, "intersect_naive");
    std::vector<StateId> states(m.states().begin(), m.states().end());
    ForestGrammar out;

    for (std::size_t ri = 0; ri < g.rules.size(); ++ri) {
        const Rule& r = g.rules[ri];
        std::size_t n = r.rhs.size();
        if (states.empty()) continue;
        // Odometer over (n+1)-tuples of states, last position fastest.
        std::vector<std::size_t> tuple(n + 1, 0);
        bool done = false;
        while (!done) {
            ForestRule fr;
            fr.lhs = DecoratedSymbol::category(r.lhs, states[tuple.front()],
                                               states[tuple.back()]);
            for (std::size_t i = 0; i < n; ++i) {
                const RhsItem& item = r.rhs[i];
                const StateId& a = states[tuple[i]];
                const StateId& b = states[tuple[i + 1]];
                fr.rhs.push_back(item.is_terminal
                                     ? DecoratedSymbol::terminal(item.symbol, a, b)
                                     : DecoratedSymbol::category(item.category, a, b));
            }
            out.add_rule(std::move(fr));
            done = true;
            for (std::size_t pos = n + 1; pos-- > 0;) {
                if (++tuple[pos] < states.size()) {
                    done = false;
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }

    for (const Transition& t : m.transitions()) {
        ForestRule fr;
        fr.lhs = DecoratedSymbol::terminal(t.label, t.from, t.to);
        out.add_rule(std::move(fr));
    }

    for (const StateId& qs : m.starts())
        for (const StateId& qf : m.finals())
            out.add_start(DecoratedSymbol::category(g.top, qs, qf));
    return out;
}

ForestGrammar reduce(const ForestGrammar& f) {
    CfgView v = make_view(f);
    ForestGrammar out;
    for (std::size_t i : useful_rules(v)) out.add_rule(f.rules()[i]);
    for (const DecoratedSymbol& s : f.starts()) out.add_start(s);
    if (f.top_constraint()) out.set_top_constraint(*f.top_constraint());
    return out;
}

Grammar reduce(const Grammar& g) {
    require_cfg(g, "reduce");
    CfgView v = make_view(g);
    Grammar out;
    out.top = g.top;
    for (std::size_t i : useful_rules(v)) out.rules.push_back(g.rules[i]);
    return out;
}

std::vector<std::vector<std::string>> language_upto(const Grammar& g, std::size_t k) {
    require_cfg(g, "language_upto");
    return bounded_language(make_view(g), k);
}

std::vector<std::vector<std::string>> language_upto(const ForestGrammar& f, std::size_t k) {
    return bounded_language(make_view(f), k);
}

}  // namespace pfg
