#include "pfg/forest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pfg/product.hpp"

namespace pfg {

DecoratedSymbol DecoratedSymbol::category(Term cat, std::string from, std::string to) {
    DecoratedSymbol s;
    s.is_terminal = false;
    s.cat = std::move(cat);
    s.from = std::move(from);
    s.to = std::move(to);
    return s;
}

DecoratedSymbol DecoratedSymbol::terminal(std::string symbol, std::string from, std::string to) {
    DecoratedSymbol s;
    s.is_terminal = true;
    s.symbol = std::move(symbol);
    s.from = std::move(from);
    s.to = std::move(to);
    return s;
}

bool DecoratedSymbol::operator==(const DecoratedSymbol& other) const {
    if (is_terminal != other.is_terminal || from != other.from || to != other.to)
        return false;
    return is_terminal ? symbol == other.symbol : cat == other.cat;
}

bool DecoratedSymbol::operator<(const DecoratedSymbol& other) const {
    if (is_terminal != other.is_terminal) return is_terminal < other.is_terminal;
    if (from != other.from) return from < other.from;
    if (to != other.to) return to < other.to;
    if (is_terminal) return symbol < other.symbol;
    return cat < other.cat;
}

std::string DecoratedSymbol::str(char mark) const {
    std::ostringstream os;
    os << "p(";
    if (mark) os << mark;
    os << (is_terminal ? symbol : cat.str()) << "," << from << "," << to << ")";
    return os.str();
}

std::string ForestRule::str() const {
    std::ostringstream os;
    os << lhs.str() << " ->";
    if (is_lexical()) {
        os << " " << lhs.symbol;
    } else {
        for (const DecoratedSymbol& item : rhs)
            os << " " << item.str(item.is_terminal ? '-' : '+');
    }
    return os.str();
}

std::size_t ParseTree::node_count() const {
    std::size_t n = 1;
    for (const ParseTree& c : children) n += c.node_count();
    return n;
}

namespace {

void frontier_rec(const ParseTree& t, std::vector<std::string>& out) {
    if (t.node.is_terminal) {
        out.push_back(t.node.symbol);
        return;
    }
    for (const ParseTree& c : t.children) frontier_rec(c, out);
}

}  // namespace

std::vector<std::string> ParseTree::frontier() const {
    std::vector<std::string> out;
    frontier_rec(*this, out);
    return out;
}

namespace {

void tree_str_rec(const ParseTree& t, std::ostringstream& os) {
    os << "(";
    os << (t.node.is_terminal ? t.node.symbol : t.node.cat.str());
    os << "," << t.node.from << "," << t.node.to;
    if (t.node.is_terminal) {
        os << " " << t.node.symbol;
    } else {
        for (const ParseTree& c : t.children) {
            os << " ";
            tree_str_rec(c, os);
        }
    }
    os << ")";
}

}  // namespace

std::string ParseTree::str() const {
    std::ostringstream os;
    tree_str_rec(*this, os);
    return os.str();
}

namespace {

std::string rule_key(const ForestRule& rule) {
    std::string key = rule.str();
    if (rule.constraint) key += " @" + std::to_string(rule.constraint->rule_index);
    return key;
}

}  // namespace

void ForestGrammar::add_rule(ForestRule rule) {
    if (rule.is_lexical()) {
        if (!rule.rhs.empty())
            throw std::logic_error("lexical forest rule must have an empty rhs: " + rule.str());
    } else if (rule.rhs.empty()) {
        if (rule.lhs.from != rule.lhs.to)
            throw std::logic_error("epsilon forest rule must span a single state: " + rule.str());
    } else {
        if (rule.lhs.from != rule.rhs.front().from)
            throw std::logic_error("state chaining broken at rhs start: " + rule.str());
        for (std::size_t i = 0; i + 1 < rule.rhs.size(); ++i)
            if (rule.rhs[i].to != rule.rhs[i + 1].from)
                throw std::logic_error("state chaining broken inside rhs: " + rule.str());
        if (rule.rhs.back().to != rule.lhs.to)
            throw std::logic_error("state chaining broken at rhs end: " + rule.str());
    }
    std::string key = rule_key(rule);
    if (keys_.insert(key).second) rules_.push_back(std::move(rule));
}

void ForestGrammar::add_start(DecoratedSymbol start) {
    for (const DecoratedSymbol& s : starts_)
        if (s == start) return;
    starts_.push_back(std::move(start));
}

bool ForestGrammar::has_constraints() const {
    for (const ForestRule& r : rules_)
        if (r.constraint) return true;
    return false;
}

bool ForestGrammar::operator==(const ForestGrammar& other) const {
    if (starts_.size() != other.starts_.size() || rules_.size() != other.rules_.size())
        return false;
    for (std::size_t i = 0; i < starts_.size(); ++i)
        if (!(starts_[i] == other.starts_[i])) return false;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (!(rules_[i].lhs == other.rules_[i].lhs)) return false;
        if (rules_[i].rhs != other.rules_[i].rhs) return false;
        if (rules_[i].constraint != other.rules_[i].constraint) return false;
    }
    return top_constraint_ == other.top_constraint_;
}

namespace {

std::string symbol_key(const DecoratedSymbol& s) {
    return (s.is_terminal ? "T:" : "N:") + s.str();
}

}  // namespace

bool is_empty(const ForestGrammar& f) {
    std::set<std::string> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const ForestRule& r : f.rules()) {
            std::string lhs_key = symbol_key(r.lhs);
            if (productive.count(lhs_key)) continue;
            bool all = true;
            if (!r.is_lexical()) {
                for (const DecoratedSymbol& item : r.rhs) {
                    if (!productive.count(symbol_key(item))) {
                        all = false;
                        break;
                    }
                }
            }
            if (all) {
                productive.insert(lhs_key);
                changed = true;
            }
        }
    }
    for (const DecoratedSymbol& s : f.starts())
        if (productive.count(symbol_key(s))) return false;
    return true;
}

namespace {

/// Whether `rule` can derive occurrences of `sym`: states and kind must
/// match exactly, category terms must be unifiable (answer categories
/// of subproofs may be referenced by more instantiated parent items).
bool lhs_matches(const ForestRule& rule, const DecoratedSymbol& sym) {
    if (rule.lhs.is_terminal != sym.is_terminal) return false;
    if (rule.lhs.from != sym.from || rule.lhs.to != sym.to) return false;
    if (sym.is_terminal) return rule.lhs.symbol == sym.symbol;
    if (rule.lhs.cat.is_atom() && sym.cat.is_atom()) return rule.lhs.cat == sym.cat;
    Term renamed = rename_apart(rule.lhs.cat, variables(sym.cat));
    return unify(renamed, sym.cat).has_value();
}

class TreeGen {
public:
    // Type-erased callbacks keep the mutual recursion from blowing up
    // template instantiation depth.
    using Sink = std::function<bool(ParseTree&&, std::size_t)>;
    using Done = std::function<bool(std::size_t)>;

    TreeGen(const ForestGrammar& f, std::optional<std::size_t> max_frontier)
        : f_(f), max_frontier_(max_frontier) {}

    bool truncated() const { return truncated_; }

    /// Enumerates all trees for `sym` of node count <= budget, invoking
    /// the sink in rule order (deterministic). Returns false when the
    /// guard tripped and enumeration should stop.
    bool gen(const DecoratedSymbol& sym, std::size_t budget, const Sink& sink) {
        if (budget == 0) {
            truncated_ = true;
            return true;
        }
        for (std::size_t ri = 0; ri < f_.rules().size(); ++ri) {
            const ForestRule& rule = f_.rules()[ri];
            if (!lhs_matches(rule, sym)) continue;
            if (rule.is_lexical()) {
                ParseTree t{sym, ri, {}};
                if (max_frontier_ && 1 > *max_frontier_) continue;
                if (!sink(std::move(t), 1)) return false;
                continue;
            }
            std::vector<ParseTree> children;
            bool keep_going = combine(rule, 0, budget - 1, 0, children, [&](std::size_t flen) {
                ParseTree t{sym, ri, children};
                return sink(std::move(t), flen);
            });
            if (!keep_going) return false;
        }
        return true;
    }

private:
    /// Fills children[pos..] with all subtree combinations fitting in
    /// `budget`; calls done(frontier_len) for each complete combination.
    bool combine(const ForestRule& rule, std::size_t pos, std::size_t budget,
                 std::size_t frontier_len, std::vector<ParseTree>& children, const Done& done) {
        if (pos == rule.rhs.size()) return done(frontier_len);
        std::size_t remaining_min = rule.rhs.size() - pos - 1;  // one node each, minimum
        if (budget < 1 + remaining_min) {
            truncated_ = true;
            return true;
        }
        return gen(rule.rhs[pos], budget - remaining_min,
                   [&](ParseTree&& sub, std::size_t sub_frontier) {
                       std::size_t flen = frontier_len + sub_frontier;
                       if (max_frontier_ && flen > *max_frontier_) return true;
                       std::size_t used = sub.node_count();
                       children.push_back(std::move(sub));
                       bool cont = combine(rule, pos + 1, budget - used, flen, children, done);
                       children.pop_back();
                       return cont;
                   });
    }

    const ForestGrammar& f_;
    std::optional<std::size_t> max_frontier_;
    bool truncated_ = false;
};

struct ValidationContext {
    Subst subst;
    std::set<std::string> used;
};

bool unify_expect(const Term& expect, const Term& cat, ValidationContext& ctx);

bool validate_rec(const ForestGrammar& f, const ParseTree& tree,
                  const std::optional<Term>& expect, ValidationContext& ctx) {
    if (tree.rule_index >= f.rules().size()) return false;
    const ForestRule& rule = f.rules()[tree.rule_index];
    if (rule.is_lexical()) return true;
    if (!rule.constraint) {
        if (expect) {
            // Unconstrained rule under an expectation: only exact atoms check.
            if (!unify_expect(*expect, rule.lhs.cat, ctx)) return false;
        }
        for (const ParseTree& c : tree.children)
            if (!validate_rec(f, c, std::nullopt, ctx)) return false;
        return true;
    }
    const Rule& orig = rule.constraint->original;
    if (tree.children.size() != orig.rhs.size()) return false;

    std::vector<Term> terms;
    terms.push_back(orig.lhs);
    for (const RhsItem& item : orig.rhs)
        if (!item.is_terminal) terms.push_back(item.category);
    std::vector<Term> renamed = rename_apart(std::span<const Term>(terms), ctx.used);
    for (const Term& t : renamed)
        for (const std::string& v : variables(t)) ctx.used.insert(v);

    if (expect) {
        auto s = unify(*expect, renamed[0], ctx.subst);
        if (!s) return false;
        ctx.subst = std::move(*s);
    }
    std::size_t next_cat = 1;
    for (std::size_t i = 0; i < orig.rhs.size(); ++i) {
        const RhsItem& item = orig.rhs[i];
        const ParseTree& child = tree.children[i];
        if (item.is_terminal) {
            if (!child.node.is_terminal || child.node.symbol != item.symbol) return false;
        } else {
            if (!validate_rec(f, child, renamed[next_cat++], ctx)) return false;
        }
    }
    return true;
}

bool unify_expect(const Term& expect, const Term& cat, ValidationContext& ctx) {
    Term renamed = rename_apart(cat, ctx.used);
    for (const std::string& v : variables(renamed)) ctx.used.insert(v);
    auto s = unify(expect, renamed, ctx.subst);
    if (!s) return false;
    ctx.subst = std::move(*s);
    return true;
}

}  // namespace

bool validate_tree(const ForestGrammar& f, const ParseTree& tree) {
    if (!f.has_constraints()) return true;
    ValidationContext ctx;
    std::optional<Term> expect;
    if (f.top_constraint()) {
        expect = *f.top_constraint();
        for (const std::string& v : variables(*expect)) ctx.used.insert(v);
    }
    return validate_rec(f, tree, expect, ctx);
}

namespace {

struct Candidate {
    ParseTree tree;
    std::size_t size;
    std::size_t order;
};

/// One enumeration round at a fixed budget. Collects every start tree
/// of node count <= budget (frontier-capped when requested), in
/// deterministic order. Returns false if the global guard tripped.
bool collect_round(const ForestGrammar& f, std::size_t budget,
                   std::optional<std::size_t> max_frontier, std::vector<Candidate>& out,
                   bool& truncated) {
    constexpr std::size_t kGuard = 50000;
    TreeGen gen(f, max_frontier);
    std::size_t order = 0;
    bool ok = true;
    for (const DecoratedSymbol& start : f.starts()) {
        ok = gen.gen(start, budget, [&](ParseTree&& t, std::size_t) {
            out.push_back({std::move(t), 0, order++});
            return out.size() < kGuard;
        });
        if (!ok) break;
    }
    truncated = gen.truncated();
    for (Candidate& c : out) c.size = c.tree.node_count();
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.size != b.size) return a.size < b.size;
        return a.order < b.order;
    });
    return ok;
}

constexpr std::size_t kBudgetCeiling = 4096;

}  // namespace

std::vector<ParseTree> extract_trees(const ForestGrammar& f, std::size_t limit,
                                     ExtractOptions opts, bool* complete) {
    std::vector<ParseTree> result;
    if (complete) *complete = false;
    if (limit == 0) return result;
    if (f.starts().empty()) {
        if (complete) *complete = true;
        return result;
    }

    std::size_t budget = opts.max_nodes ? *opts.max_nodes : 16;
    std::size_t ceiling = opts.max_nodes ? *opts.max_nodes : kBudgetCeiling;
    while (true) {
        std::vector<Candidate> candidates;
        bool truncated = false;
        bool ok = collect_round(f, budget, opts.max_frontier, candidates, truncated);
        if (complete) *complete = ok && !truncated;
        result.clear();
        for (Candidate& c : candidates) {
            if (!validate_tree(f, c.tree)) continue;
            result.push_back(std::move(c.tree));
            if (result.size() == limit) return result;
        }
        if (!ok || !truncated || budget >= ceiling) return result;
        budget = std::min(budget * 2, ceiling);
    }
}

std::vector<std::vector<std::string>> enumerate_strings(const ForestGrammar& f, std::size_t k) {
    if (!f.has_constraints()) return language_upto(f, k);

    std::size_t budget = 16;
    while (true) {
        std::vector<Candidate> candidates;
        bool truncated = false;
        bool ok = collect_round(f, budget, k, candidates, truncated);
        if (!ok)
            throw std::runtime_error(
                "enumerate_strings: candidate tree enumeration did not converge");
        if (!truncated) {
            std::set<std::vector<std::string>> strings;
            for (const Candidate& c : candidates) {
                std::vector<std::string> w = c.tree.frontier();
                if (w.size() <= k && validate_tree(f, c.tree)) strings.insert(std::move(w));
            }
            return {strings.begin(), strings.end()};
        }
        if (budget >= kBudgetCeiling)
            throw std::runtime_error(
                "enumerate_strings: forest admits unboundedly large candidate trees");
        budget *= 2;
    }
}

namespace {

std::size_t parse_index(text::Cursor& cur, std::string_view tok) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string_view::npos)
        cur.fail("expected a rule index, got '" + std::string(tok) + "'");
    return std::stoul(std::string(tok));
}

DecoratedSymbol parse_decorated(text::Cursor& cur, bool rhs_position) {
    cur.expect("p");
    cur.expect("(");
    bool terminal = false;
    bool marked = false;
    if (cur.try_consume("-")) {
        terminal = true;
        marked = true;
    } else if (cur.try_consume("+")) {
        marked = true;
    }
    if (rhs_position && !marked)
        cur.fail("rhs forest symbols need a '+' or '-' mark");
    if (!rhs_position && marked)
        cur.fail("lhs forest symbols carry no '+'/'-' mark");
    DecoratedSymbol sym;
    if (terminal) {
        std::string_view tok = cur.next();
        if (!text::is_ident(tok)) cur.fail("expected a terminal symbol after '-'");
        sym.is_terminal = true;
        sym.symbol = std::string(tok);
    } else {
        sym.is_terminal = false;
        sym.cat = parse_term(cur);
    }
    cur.expect(",");
    std::string_view from = cur.next();
    if (!text::is_ident(from)) cur.fail("expected a state name");
    cur.expect(",");
    std::string_view to = cur.next();
    if (!text::is_ident(to)) cur.fail("expected a state name");
    cur.expect(")");
    sym.from = std::string(from);
    sym.to = std::string(to);
    return sym;
}

}  // namespace

ForestGrammar parse_forest(std::string_view input) {
    ForestGrammar f;
    std::map<std::size_t, Rule> originals;
    for (const auto& [line_no, line] : text::content_lines(input)) {
        text::Cursor cur(line, line_no);
        std::string_view head = cur.peek();
        if (head == "start") {
            cur.next();
            f.add_start(parse_decorated(cur, false));
            if (!cur.at_end()) cur.fail("trailing input after start symbol");
            continue;
        }
        if (head == "orig-top") {
            cur.next();
            f.set_top_constraint(parse_term(cur));
            if (!cur.at_end()) cur.fail("trailing input after orig-top");
            continue;
        }
        if (head == "orig") {
            cur.next();
            std::size_t orig_idx = parse_index(cur, cur.next());
            cur.expect("rule");
            Rule r;
            r.lhs = parse_term(cur);
            cur.expect("->");
            while (!cur.at_end()) {
                if (cur.try_consume("-")) {
                    std::string_view sym = cur.next();
                    if (!text::is_ident(sym)) cur.fail("expected a terminal symbol after '-'");
                    r.rhs.push_back(RhsItem::terminal(std::string(sym)));
                } else if (cur.try_consume("+")) {
                    r.rhs.push_back(RhsItem::nonterminal(parse_term(cur)));
                } else {
                    cur.fail("expected '+category' or '-terminal'");
                }
            }
            originals[orig_idx] = std::move(r);
            continue;
        }
        // Rule line.
        ForestRule rule;
        rule.lhs = parse_decorated(cur, false);
        cur.expect("->");
        if (rule.lhs.is_terminal) {
            std::string_view sym = cur.next();
            if (sym != rule.lhs.symbol)
                cur.fail("lexical rule rhs must repeat the terminal symbol");
        } else {
            while (!cur.at_end() && cur.peek() != "@")
                rule.rhs.push_back(parse_decorated(cur, true));
        }
        if (cur.try_consume("@")) {
            std::size_t i = parse_index(cur, cur.next());
            auto it = originals.find(i);
            if (it == originals.end())
                cur.fail("constraint tag @" + std::to_string(i) + " has no orig declaration");
            rule.constraint = ForestConstraint{i, it->second};
        }
        if (!cur.at_end()) cur.fail("trailing input after forest rule");
        try {
            f.add_rule(std::move(rule));
        } catch (const std::logic_error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return f;
}

std::string print_forest(const ForestGrammar& f) {
    std::ostringstream os;
    for (const DecoratedSymbol& s : f.starts()) os << "start " << s.str() << "\n";
    if (f.has_constraints()) {
        if (f.top_constraint()) os << "orig-top " << f.top_constraint()->str() << "\n";
        std::map<std::size_t, const Rule*> originals;
        for (const ForestRule& r : f.rules())
            if (r.constraint) originals.emplace(r.constraint->rule_index, &r.constraint->original);
        for (const auto& [idx, rule] : originals) {
            os << "orig " << idx << " " << print_rule(*rule) << "\n";
        }
    }
    for (const ForestRule& r : f.rules()) {
        os << r.str();
        if (r.constraint) os << " @" << r.constraint->rule_index;
        os << "\n";
    }
    return os.str();
}

namespace {

void dot_rec(const ParseTree& t, std::ostringstream& os, int& next_id, int parent) {
    int id = next_id++;
    std::string label = t.node.is_terminal
                            ? t.node.symbol + "," + t.node.from + "," + t.node.to
                            : t.node.cat.str() + "," + t.node.from + "," + t.node.to;
    os << "  n" << id << " [label=\"" << label << "\"];\n";
    if (parent >= 0) os << "  n" << parent << " -> n" << id << ";\n";
    if (t.node.is_terminal) {
        int leaf = next_id++;
        os << "  n" << leaf << " [label=\"" << t.node.symbol << "\" shape=plaintext];\n";
        os << "  n" << id << " -> n" << leaf << ";\n";
        return;
    }
    for (const ParseTree& c : t.children) dot_rec(c, os, next_id, id);
}

}  // namespace

std::string tree_to_dot(const ParseTree& tree) {
    std::ostringstream os;
    os << "digraph parse_tree {\n  node [shape=box];\n";
    int next_id = 0;
    int root = -1;
    dot_rec(tree, os, next_id, root);
    os << "}\n";
    return os.str();
}

}  // namespace pfg
