#include "pfg/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pfg {

Term Term::variable(std::string name) {
    return Term(std::make_shared<Node>(Node{true, std::move(name), {}}));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    return Term(std::make_shared<Node>(Node{false, std::move(functor), std::move(args)}));
}

Term Term::list(const std::vector<Term>& items) { return list(items, nil()); }

Term Term::list(const std::vector<Term>& items, Term tail) {
    Term acc = std::move(tail);
    for (auto it = items.rbegin(); it != items.rend(); ++it)
        acc = compound(".", {*it, acc});
    return acc;
}

bool Term::operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (node_->is_var != other.node_->is_var || node_->name != other.node_->name)
        return false;
    if (node_->args.size() != other.node_->args.size()) return false;
    for (std::size_t i = 0; i < node_->args.size(); ++i)
        if (!(node_->args[i] == other.node_->args[i])) return false;
    return true;
}

bool Term::operator<(const Term& other) const {
    if (node_->is_var != other.node_->is_var) return node_->is_var;
    if (node_->name != other.node_->name) return node_->name < other.node_->name;
    if (node_->args.size() != other.node_->args.size())
        return node_->args.size() < other.node_->args.size();
    for (std::size_t i = 0; i < node_->args.size(); ++i) {
        if (node_->args[i] < other.node_->args[i]) return true;
        if (other.node_->args[i] < node_->args[i]) return false;
    }
    return false;
}

namespace {

bool is_cons(const Term& t) {
    return t.is_compound() && t.name() == "." && t.arity() == 2;
}

bool is_nil(const Term& t) { return t.is_atom() && t.name() == "[]"; }

void print_term(const Term& t, std::ostream& os) {
    if (t.is_variable()) {
        os << t.name();
        return;
    }
    if (is_cons(t)) {
        os << '[';
        const Term* cur = &t;
        bool first = true;
        while (is_cons(*cur)) {
            if (!first) os << ',';
            print_term(cur->args()[0], os);
            first = false;
            cur = &cur->args()[1];
        }
        if (!is_nil(*cur)) {
            os << '|';
            print_term(*cur, os);
        }
        os << ']';
        return;
    }
    os << t.name();
    if (t.arity() > 0) {
        os << '(';
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i) os << ',';
            print_term(t.args()[i], os);
        }
        os << ')';
    }
}

}  // namespace

std::string Term::str() const {
    std::ostringstream os;
    print_term(*this, os);
    return os.str();
}

const Term* Subst::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term apply(const Subst& s, const Term& t) {
    if (s.empty()) return t;
    if (t.is_variable()) {
        const Term* bound = s.lookup(t.name());
        return bound ? *bound : t;
    }
    if (t.is_atom()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const Term& a : t.args()) {
        args.push_back(apply(s, a));
        if (args.back() != a) changed = true;
    }
    return changed ? Term::compound(t.name(), std::move(args)) : t;
}

namespace {

bool occurs(const std::string& var, const Term& t) {
    if (t.is_variable()) return t.name() == var;
    for (const Term& a : t.args())
        if (occurs(var, a)) return true;
    return false;
}

/// Replaces one variable inside a term (used to keep bindings resolved).
Term replace_var(const Term& t, const std::string& var, const Term& value) {
    if (t.is_variable()) return t.name() == var ? value : t;
    if (t.is_atom()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const Term& a : t.args()) {
        args.push_back(replace_var(a, var, value));
        if (args.back() != a) changed = true;
    }
    return changed ? Term::compound(t.name(), std::move(args)) : t;
}

}  // namespace

bool Subst::extend(const std::string& var, const Term& term, bool occurs_check) {
    Term resolved = apply(*this, term);
    if (resolved.is_variable() && resolved.name() == var) return true;
    if (occurs_check && occurs(var, resolved)) return false;
    for (auto& [v, bound] : map_) bound = replace_var(bound, var, resolved);
    map_.emplace(var, std::move(resolved));
    return true;
}

std::string Subst::str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [v, t] : map_) {
        if (!first) os << ", ";
        os << v << " -> " << t.str();
        first = false;
    }
    os << '}';
    return os.str();
}

namespace {

bool unify_rec(const Term& t1, const Term& t2, Subst& s, bool occurs_check) {
    Term a = apply(s, t1);
    Term b = apply(s, t2);
    if (a.is_variable()) {
        if (b.is_variable() && b.name() == a.name()) return true;
        return s.extend(a.name(), b, occurs_check);
    }
    if (b.is_variable()) return s.extend(b.name(), a, occurs_check);
    if (a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!unify_rec(a.args()[i], b.args()[i], s, occurs_check)) return false;
    return true;
}

}  // namespace

std::optional<Subst> unify(const Term& t1, const Term& t2, Subst s, bool occurs_check) {
    if (unify_rec(t1, t2, s, occurs_check)) return s;
    return std::nullopt;
}

void collect_variables(const Term& t, std::vector<std::string>& out,
                       std::set<std::string>* seen) {
    std::set<std::string> local;
    if (!seen) seen = &local;
    if (t.is_variable()) {
        if (seen->insert(t.name()).second) out.push_back(t.name());
        return;
    }
    for (const Term& a : t.args()) collect_variables(a, out, seen);
}

std::set<std::string> variables(const Term& t) {
    std::vector<std::string> order;
    collect_variables(t, order);
    return {order.begin(), order.end()};
}

namespace {

Term rename_with(const Term& t, const std::map<std::string, std::string>& names) {
    if (t.is_variable()) {
        auto it = names.find(t.name());
        return it == names.end() ? t : Term::variable(it->second);
    }
    if (t.is_atom()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args()) args.push_back(rename_with(a, names));
    return Term::compound(t.name(), std::move(args));
}

std::map<std::string, std::string> renaming_for(std::span<const Term> terms,
                                                const std::set<std::string>& used) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const Term& t : terms) collect_variables(t, order, &seen);

    std::set<std::string> taken = used;
    std::map<std::string, std::string> names;
    // First pass: variables that can keep their names reserve them.
    for (const std::string& v : order)
        if (!used.count(v)) taken.insert(v);
    for (const std::string& v : order) {
        if (!used.count(v)) {
            names.emplace(v, v);
            continue;
        }
        std::string fresh;
        for (std::size_t i = 1;; ++i) {
            fresh = v + std::to_string(i);
            if (!taken.count(fresh)) break;
        }
        taken.insert(fresh);
        names.emplace(v, fresh);
    }
    return names;
}

}  // namespace

Term rename_apart(const Term& t, const std::set<std::string>& used) {
    return rename_with(t, renaming_for(std::span<const Term>(&t, 1), used));
}

std::vector<Term> rename_apart(std::span<const Term> terms, const std::set<std::string>& used) {
    auto names = renaming_for(terms, used);
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& t : terms) out.push_back(rename_with(t, names));
    return out;
}

std::vector<Term> variant_normalize(std::span<const Term> terms) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const Term& t : terms) collect_variables(t, order, &seen);
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < order.size(); ++i)
        names.emplace(order[i], "_G" + std::to_string(i));
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& t : terms) out.push_back(rename_with(t, names));
    return out;
}

Term variant_normalize(const Term& t) {
    return variant_normalize(std::span<const Term>(&t, 1))[0];
}

bool is_variant(const Term& a, const Term& b) {
    return variant_normalize(a) == variant_normalize(b);
}

namespace {

bool is_variable_name(std::string_view name) {
    return !name.empty() &&
           (name[0] == '_' || std::isupper(static_cast<unsigned char>(name[0])));
}

Term parse_rec(text::Cursor& cur) {
    std::string_view tok = cur.peek();
    if (tok.empty()) cur.fail("expected a term");
    if (tok == "[") {
        cur.next();
        if (cur.try_consume("]")) return Term::nil();
        std::vector<Term> items;
        items.push_back(parse_rec(cur));
        while (cur.try_consume(",")) items.push_back(parse_rec(cur));
        Term tail = Term::nil();
        if (cur.try_consume("|")) tail = parse_rec(cur);
        cur.expect("]");
        return Term::list(items, std::move(tail));
    }
    if (!text::is_ident(tok))
        cur.fail("unexpected token '" + std::string(tok) + "' in term");
    cur.next();
    std::string name(tok);
    if (is_variable_name(name)) return Term::variable(std::move(name));
    if (cur.try_consume("(")) {
        std::vector<Term> args;
        if (!cur.try_consume(")")) {
            args.push_back(parse_rec(cur));
            while (cur.try_consume(",")) args.push_back(parse_rec(cur));
            cur.expect(")");
        }
        return Term::compound(std::move(name), std::move(args));
    }
    return Term::atom(std::move(name));
}

}  // namespace

Term parse_term(text::Cursor& cur) { return parse_rec(cur); }

Term parse_term(std::string_view input) {
    text::Cursor cur(input, 0);
    Term t = parse_rec(cur);
    if (!cur.at_end())
        cur.fail("trailing input after term: '" + std::string(cur.peek()) + "'");
    return t;
}

}  // namespace pfg
