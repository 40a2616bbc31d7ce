#include "pfg/parser.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pfg/product.hpp"

namespace pfg {

Strategy Strategy::threshold(double tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("threshold tau must lie in (0,1), got " +
                                    std::to_string(tau));
    return {Kind::DcgThreshold, tau, 0};
}

Strategy Strategy::unrestricted(std::size_t depth_bound) {
    if (depth_bound < 1)
        throw std::invalid_argument("unrestricted depth bound must be >= 1");
    return {Kind::DcgUnrestricted, 0.0, depth_bound};
}

const char* Strategy::name() const {
    switch (kind) {
        case Kind::CfgExact: return "cfg-exact";
        case Kind::DcgAcyclicOnly: return "acyclic-only";
        case Kind::DcgThreshold: return "threshold";
        case Kind::DcgSkeleton: return "skeleton";
        case Kind::DcgUnrestricted: return "unrestricted";
    }
    return "?";
}

const char* to_string(Emptiness e) {
    switch (e) {
        case Emptiness::NonEmpty: return "non-empty";
        case Emptiness::Empty: return "empty";
        case Emptiness::Unknown: return "unknown";
    }
    return "?";
}

namespace {

/// One remembered rhs occurrence during a rule-body walk; categories
/// are dereferenced against the final substitution at answer time.
struct HisItem {
    bool is_terminal;
    std::string symbol;  // terminal
    Term category;       // nonterminal (renamed rule instance term)
    StateId from;
    StateId to;
};

/// Tabled top-down intersection over goals (category, from-state,
/// optional end-state). The end-state is pinned when the suffix of the
/// calling rule consists of terminals whose backward pre-image from
/// the caller's pinned end is a single state; this keeps goals exactly
/// as directed as the derivation they serve. Evaluation iterates all
/// goals to a global fixpoint, which handles left recursion and answer
/// reuse (variant goals share one table entry).
class Engine {
public:
    Engine(const Grammar& g, const Fsa& m, const Grammar* constraint_rules, double tau)
        : g_(g), m_(m), constraint_rules_(constraint_rules), tau_(tau) {
        for (const Transition& t : m.transitions()) {
            out_[t.from].push_back(&t);
            in_[t.label][t.to].push_back(t.from);
        }
        if (constraint_rules_) forest_.set_top_constraint(constraint_rules_->top);
    }

    void run() {
        for (const StateId& qs : m_.starts())
            for (const StateId& qf : m_.finals())
                get_goal(variant_normalize(g_.top), qs, qf, 1.0);
        bool changed = true;
        while (changed) {
            changed = false;
            changed_ = &changed;
            for (std::size_t i = 0; i < goals_.size(); ++i) evaluate(i);
        }
        for (const StateId& qs : m_.starts()) {
            for (const StateId& qf : m_.finals()) {
                std::size_t id = find_goal(variant_normalize(g_.top), qs, qf);
                for (const Answer& a : goals_[id].answers)
                    forest_.add_start(DecoratedSymbol::category(a.cat, qs, qf));
            }
        }
    }

    ForestGrammar take_forest() { return std::move(forest_); }

    ParseStats stats() const {
        ParseStats st;
        st.table_entries = goals_.size();
        for (const GoalRec& g : goals_) st.answers += g.answers.size();
        return st;
    }

private:
    struct Answer {
        StateId to;
        Term cat;  // variant-normalized dereferenced category
        double weight;
    };

    struct GoalRec {
        Term cat;  // variant-normalized
        StateId from;
        std::optional<StateId> to;
        double best_prefix = 0.0;
        std::vector<Answer> answers;
        std::map<std::string, std::size_t> answer_index;
    };

    static std::string goal_key(const Term& cat, const StateId& from,
                                const std::optional<StateId>& to) {
        return cat.str() + "\x01" + from + "\x01" + (to ? *to : std::string("\x02"));
    }

    std::size_t get_goal(const Term& cat, const StateId& from,
                         const std::optional<StateId>& to, double prefix) {
        std::string key = goal_key(cat, from, to);
        auto it = index_.find(key);
        if (it != index_.end()) {
            GoalRec& rec = goals_[it->second];
            if (prefix > rec.best_prefix) {
                rec.best_prefix = prefix;
                mark_changed();
            }
            return it->second;
        }
        goals_.push_back(GoalRec{cat, from, to, prefix, {}, {}});
        index_.emplace(std::move(key), goals_.size() - 1);
        mark_changed();
        return goals_.size() - 1;
    }

    std::size_t find_goal(const Term& cat, const StateId& from, const StateId& to) const {
        return index_.at(goal_key(cat, from, std::optional<StateId>(to)));
    }

    void mark_changed() {
        if (changed_) *changed_ = true;
    }

    /// Renames every variable in the given terms to a globally fresh
    /// name, keeping sharing.
    /// Map every variable to a fresh _R<n>; _R names never collide
    /// with the _G names of normalized categories or grammar
    /// variables, so instances are standardized apart for free.
    std::vector<Term> fresh_instance(std::span<const Term> terms) {
        std::vector<std::string> order;
        std::set<std::string> seen;
        for (const Term& t : terms) collect_variables(t, order, &seen);
        Subst rename;
        for (const std::string& v : order)
            rename.extend(v, Term::variable("_R" + std::to_string(fresh_++)), false);
        std::vector<Term> out;
        out.reserve(terms.size());
        for (const Term& t : terms) out.push_back(apply(rename, t));
        return out;
    }

    Term fresh_instance(const Term& t) {
        return fresh_instance(std::span<const Term>(&t, 1))[0];
    }

    void evaluate(std::size_t goal_id) {
        for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) try_rule(goal_id, ri);
    }

    void try_rule(std::size_t goal_id, std::size_t ri) {
        const Rule& rule = g_.rules[ri];
        std::vector<Term> terms;
        terms.push_back(rule.lhs);
        for (const RhsItem& item : rule.rhs)
            if (!item.is_terminal) terms.push_back(item.category);
        std::vector<Term> renamed = fresh_instance(std::span<const Term>(terms));

        auto s0 = unify(renamed[0], goals_[goal_id].cat);
        if (!s0) return;
        std::vector<Term> item_cats(renamed.begin() + 1, renamed.end());
        std::vector<HisItem> his;
        walk(goal_id, ri, renamed[0], item_cats, 0, 0, goals_[goal_id].from, *s0, 1.0, his);
    }

    /// Pinned end state for the subgoal at `pos`, propagated backward
    /// from the goal's pinned end through an all-terminal suffix.
    /// Returns nullopt when unconstrained and sets `dead` when the
    /// suffix admits no path at all.
    std::optional<StateId> back_propagate(std::size_t goal_id, const Rule& rule,
                                          std::size_t pos, bool& dead) {
        const std::optional<StateId>& target = goals_[goal_id].to;
        if (!target) return std::nullopt;
        for (std::size_t j = pos + 1; j < rule.rhs.size(); ++j)
            if (!rule.rhs[j].is_terminal) return std::nullopt;
        std::set<StateId> states{*target};
        for (std::size_t j = rule.rhs.size(); j-- > pos + 1;) {
            std::set<StateId> prev;
            auto lbl = in_.find(rule.rhs[j].symbol);
            if (lbl != in_.end()) {
                for (const StateId& q : states) {
                    auto it = lbl->second.find(q);
                    if (it != lbl->second.end()) prev.insert(it->second.begin(), it->second.end());
                }
            }
            states = std::move(prev);
            if (states.empty()) {
                dead = true;
                return std::nullopt;
            }
        }
        if (states.size() == 1) return *states.begin();
        return std::nullopt;
    }

    void walk(std::size_t goal_id, std::size_t ri, const Term& lhs_term,
              const std::vector<Term>& item_cats, std::size_t pos, std::size_t cat_pos,
              const StateId& state, const Subst& s, double weight, std::vector<HisItem>& his) {
        const Rule& rule = g_.rules[ri];
        if (pos == rule.rhs.size()) {
            complete(goal_id, ri, lhs_term, state, s, weight, his);
            return;
        }
        const RhsItem& item = rule.rhs[pos];
        if (item.is_terminal) {
            auto it = out_.find(state);
            if (it == out_.end()) return;
            for (const Transition* t : it->second) {
                if (t->label != item.symbol) continue;
                double w2 = weight * (tau_ > 0.0 ? t->weight : 1.0);
                if (tau_ > 0.0 && goals_[goal_id].best_prefix * w2 < tau_) continue;
                // The scan itself is recorded, mirroring the side
                // effect of a successful terminal step.
                ForestRule lex;
                lex.lhs = DecoratedSymbol::terminal(item.symbol, state, t->to);
                forest_.add_rule(std::move(lex));
                his.push_back({true, item.symbol, Term::nil(), state, t->to});
                walk(goal_id, ri, lhs_term, item_cats, pos + 1, cat_pos, t->to, s, w2, his);
                his.pop_back();
            }
            return;
        }

        bool dead = false;
        std::optional<StateId> pinned = back_propagate(goal_id, rule, pos, dead);
        if (dead) return;
        Term call_cat = apply(s, item_cats[cat_pos]);
        double prefix = tau_ > 0.0 ? goals_[goal_id].best_prefix * weight : 1.0;
        std::size_t sub = get_goal(variant_normalize(call_cat), state, pinned, prefix);
        for (std::size_t ai = 0; ai < goals_[sub].answers.size(); ++ai) {
            Answer ans = goals_[sub].answers[ai];  // copy: the vector may grow
            double w2 = weight * (tau_ > 0.0 ? ans.weight : 1.0);
            if (tau_ > 0.0 && goals_[goal_id].best_prefix * w2 < tau_) continue;
            Term ans_cat = fresh_instance(ans.cat);
            auto s2 = unify(item_cats[cat_pos], ans_cat, s);
            if (!s2) continue;
            his.push_back({false, "", item_cats[cat_pos], state, ans.to});
            walk(goal_id, ri, lhs_term, item_cats, pos + 1, cat_pos + 1, ans.to, *s2, w2, his);
            his.pop_back();
        }
    }

    void complete(std::size_t goal_id, std::size_t ri, const Term& lhs_term,
                  const StateId& end, const Subst& s, double weight,
                  const std::vector<HisItem>& his) {
        GoalRec& goal = goals_[goal_id];
        if (goal.to && *goal.to != end) return;

        // Dereference the whole rule instance at answer time and
        // normalize it as a unit so shared variables stay shared.
        std::vector<Term> derefed;
        derefed.push_back(apply(s, lhs_term));
        for (const HisItem& h : his)
            if (!h.is_terminal) derefed.push_back(apply(s, h.category));
        std::vector<Term> norm = variant_normalize(std::span<const Term>(derefed));

        ForestRule fr;
        fr.lhs = DecoratedSymbol::category(norm[0], goal.from, end);
        std::size_t cat_pos = 1;
        for (const HisItem& h : his) {
            fr.rhs.push_back(h.is_terminal
                                 ? DecoratedSymbol::terminal(h.symbol, h.from, h.to)
                                 : DecoratedSymbol::category(norm[cat_pos++], h.from, h.to));
        }
        if (constraint_rules_)
            fr.constraint = ForestConstraint{ri, constraint_rules_->rules[ri]};
        forest_.add_rule(std::move(fr));

        Answer ans{end, norm[0], weight};
        std::string key = ans.to + "\x01" + ans.cat.str();
        auto it = goal.answer_index.find(key);
        if (it == goal.answer_index.end()) {
            goal.answer_index.emplace(std::move(key), goal.answers.size());
            goal.answers.push_back(std::move(ans));
            mark_changed();
        } else if (tau_ > 0.0 && ans.weight > goal.answers[it->second].weight) {
            goal.answers[it->second].weight = ans.weight;
            mark_changed();
        }
    }

    const Grammar& g_;
    const Fsa& m_;
    const Grammar* constraint_rules_;
    double tau_;

    std::map<StateId, std::vector<const Transition*>> out_;
    std::map<std::string, std::map<StateId, std::vector<StateId>>> in_;

    std::vector<GoalRec> goals_;
    std::map<std::string, std::size_t> index_;
    ForestGrammar forest_;
    bool* changed_ = nullptr;
    std::size_t fresh_ = 0;
};

/// Plain depth-bounded SLD search (no tabling): the semi-decision
/// procedure behind DcgUnrestricted. The bound counts rule
/// applications along one branch; exhausting it sets the cutoff flag.
class BoundedSld {
public:
    BoundedSld(const Grammar& g, const Fsa& m, std::size_t depth_bound)
        : g_(g), m_(m), depth_(depth_bound) {
        for (const Transition& t : m.transitions()) out_[t.from].push_back(&t);
        forest_.set_top_constraint(g.top);
    }

    void run() {
        for (const StateId& qs : m_.starts()) {
            for (const StateId& qf : m_.finals()) {
                Term top = fresh_instance(g_.top);
                solve(top, qs, depth_, Subst{}, [&](const StateId& to, const Subst& s) {
                    if (to == qf)
                        forest_.add_start(DecoratedSymbol::category(
                            variant_normalize(apply(s, top)), qs, qf));
                });
            }
        }
    }

    bool cutoff() const { return cutoff_; }
    ForestGrammar take_forest() { return std::move(forest_); }

private:
    // Type-erased so the solve/walk mutual recursion does not nest
    // template instantiations without bound.
    using Yield = std::function<void(const StateId&, const Subst&)>;

    void solve(const Term& cat, const StateId& from, std::size_t depth, const Subst& s,
               const Yield& yield) {
        if (depth == 0) {
            cutoff_ = true;
            return;
        }
        for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) {
            const Rule& rule = g_.rules[ri];
            std::vector<Term> terms;
            terms.push_back(rule.lhs);
            for (const RhsItem& item : rule.rhs)
                if (!item.is_terminal) terms.push_back(item.category);
            std::vector<Term> renamed = fresh_instance(std::span<const Term>(terms));
            auto s0 = unify(renamed[0], apply(s, cat), s);
            if (!s0) continue;
            std::vector<Term> item_cats(renamed.begin() + 1, renamed.end());
            std::vector<HisItem> his;
            walk(ri, renamed[0], item_cats, 0, 0, from, *s0, depth - 1, his, yield);
        }
    }

    void walk(std::size_t ri, const Term& lhs_term, const std::vector<Term>& item_cats,
              std::size_t pos, std::size_t cat_pos, const StateId& state, const Subst& s,
              std::size_t depth, std::vector<HisItem>& his, const Yield& yield) {
        const Rule& rule = g_.rules[ri];
        if (pos == rule.rhs.size()) {
            emit(ri, lhs_term, state, s, his);
            yield(state, s);
            return;
        }
        const RhsItem& item = rule.rhs[pos];
        if (item.is_terminal) {
            auto it = out_.find(state);
            if (it == out_.end()) return;
            for (const Transition* t : it->second) {
                if (t->label != item.symbol) continue;
                ForestRule lex;
                lex.lhs = DecoratedSymbol::terminal(item.symbol, state, t->to);
                forest_.add_rule(std::move(lex));
                his.push_back({true, item.symbol, Term::nil(), state, t->to});
                walk(ri, lhs_term, item_cats, pos + 1, cat_pos, t->to, s, depth, his, yield);
                his.pop_back();
            }
            return;
        }
        solve(item_cats[cat_pos], state, depth, s,
              [&](const StateId& to, const Subst& s2) {
                  his.push_back({false, "", item_cats[cat_pos], state, to});
                  walk(ri, lhs_term, item_cats, pos + 1, cat_pos + 1, to, s2, depth, his,
                       yield);
                  his.pop_back();
              });
    }

    void emit(std::size_t ri, const Term& lhs_term, const StateId& end, const Subst& s,
              const std::vector<HisItem>& his) {
        std::vector<Term> derefed;
        derefed.push_back(apply(s, lhs_term));
        for (const HisItem& h : his)
            if (!h.is_terminal) derefed.push_back(apply(s, h.category));
        std::vector<Term> norm = variant_normalize(std::span<const Term>(derefed));
        ForestRule fr;
        StateId from = his.empty() ? end : his.front().from;
        fr.lhs = DecoratedSymbol::category(norm[0], from, end);
        std::size_t cat_pos = 1;
        for (const HisItem& h : his)
            fr.rhs.push_back(h.is_terminal
                                 ? DecoratedSymbol::terminal(h.symbol, h.from, h.to)
                                 : DecoratedSymbol::category(norm[cat_pos++], h.from, h.to));
        fr.constraint = ForestConstraint{ri, g_.rules[ri]};
        forest_.add_rule(std::move(fr));
    }

    std::vector<Term> fresh_instance(std::span<const Term> terms) {
        std::vector<std::string> order;
        std::set<std::string> seen;
        for (const Term& t : terms) collect_variables(t, order, &seen);
        Subst rename;
        for (const std::string& v : order)
            rename.extend(v, Term::variable("_R" + std::to_string(fresh_++)), false);
        std::vector<Term> out;
        out.reserve(terms.size());
        for (const Term& t : terms) out.push_back(apply(rename, t));
        return out;
    }

    Term fresh_instance(const Term& t) {
        return fresh_instance(std::span<const Term>(&t, 1))[0];
    }

    const Grammar& g_;
    const Fsa& m_;
    std::size_t depth_;
    std::map<StateId, std::vector<const Transition*>> out_;
    ForestGrammar forest_;
    bool cutoff_ = false;
    std::size_t fresh_ = 0;
};

}  // namespace

ForestGrammar intersect_cfg(const Grammar& g, const Fsa& m, ParseStats* stats) {
    if (!is_context_free(g))
        throw std::invalid_argument(
            "intersect_cfg requires a context-free grammar; use intersect_dcg with a "
            "strategy for definite clause grammars");
    Engine engine(g, m, nullptr, 0.0);
    engine.run();
    if (stats) *stats = engine.stats();
    return engine.take_forest();
}

DcgResult intersect_dcg(const Grammar& g, const Fsa& m, const Strategy& strat,
                        ParseStats* stats) {
    DcgResult result;
    switch (strat.kind) {
        case Strategy::Kind::CfgExact:
            throw std::invalid_argument("intersect_dcg needs a DCG strategy; call "
                                        "intersect_cfg for the exact CFG parse");
        case Strategy::Kind::DcgAcyclicOnly: {
            if (auto cycle = m.find_cycle()) {
                std::ostringstream os;
                os << "acyclic-only strategy requires an acyclic automaton; found cycle ";
                for (std::size_t i = 0; i < cycle->size(); ++i) {
                    if (i) os << " -> ";
                    os << (*cycle)[i];
                }
                throw std::invalid_argument(os.str());
            }
            Engine engine(g, m, &g, 0.0);
            engine.run();
            if (stats) *stats = engine.stats();
            result.forest = engine.take_forest();
            result.exhaustive = offline_parsable(g);
            return result;
        }
        case Strategy::Kind::DcgThreshold: {
            if (!(strat.tau > 0.0 && strat.tau < 1.0))
                throw std::invalid_argument("threshold tau must lie in (0,1)");
            Engine engine(g, m, &g, strat.tau);
            engine.run();
            if (stats) *stats = engine.stats();
            result.forest = engine.take_forest();
            result.exhaustive = false;  // pruning may drop parses
            return result;
        }
        case Strategy::Kind::DcgSkeleton: {
            Grammar sk = cf_skeleton(g);
            Engine engine(sk, m, &g, 0.0);
            engine.run();
            if (stats) *stats = engine.stats();
            result.forest = engine.take_forest();
            result.exhaustive = true;  // sound and complete by construction
            return result;
        }
        case Strategy::Kind::DcgUnrestricted: {
            if (strat.depth < 1)
                throw std::invalid_argument("unrestricted depth bound must be >= 1");
            BoundedSld sld(g, m, strat.depth);
            sld.run();
            if (stats) *stats = ParseStats{};
            result.forest = sld.take_forest();
            result.exhaustive = false;  // semi-decision procedure
            return result;
        }
    }
    throw std::logic_error("unreachable strategy kind");
}

Verdict verdict_from(const DcgResult& result) {
    // Extraction runs on the forest as produced: witness rule indices
    // stay meaningful to the caller, and rules referencing instances
    // of more general answer symbols (the DCG case) stay connected.
    Verdict v;
    bool complete = false;
    auto trees = extract_trees(result.forest, 1, {}, &complete);
    if (!trees.empty()) {
        v.kind = Emptiness::NonEmpty;
        v.witness = std::move(trees.front());
        return v;
    }
    v.kind = (result.exhaustive && complete) ? Emptiness::Empty : Emptiness::Unknown;
    return v;
}

Verdict emptiness_verdict(const Grammar& g, const Fsa& m, const Strategy& strat) {
    if (strat.kind == Strategy::Kind::CfgExact) {
        DcgResult r;
        r.forest = intersect_cfg(g, m);
        r.exhaustive = true;
        return verdict_from(r);
    }
    return verdict_from(intersect_dcg(g, m, strat));
}

}  // namespace pfg
