#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pfg/text.hpp"

namespace pfg {

/// A first-order term: a variable or a compound (functor + argument
/// terms). Atoms are zero-argument compounds, lists are sugar for
/// "."/2 cells terminated by the "[]" atom. Immutable, cheap to copy.
class Term {
public:
    static Term variable(std::string name);
    static Term compound(std::string functor, std::vector<Term> args);
    static Term atom(std::string name) { return compound(std::move(name), {}); }
    /// Builds the list cell chain items..|tail (tail defaults to []).
    static Term list(const std::vector<Term>& items);
    static Term list(const std::vector<Term>& items, Term tail);
    static Term nil() { return atom("[]"); }

    bool is_variable() const { return node_->is_var; }
    bool is_compound() const { return !node_->is_var; }
    bool is_atom() const { return is_compound() && node_->args.empty(); }

    /// Variable name or functor name.
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }
    std::size_t arity() const { return node_->args.size(); }

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }
    /// Structural ordering, used for deterministic containers.
    bool operator<(const Term& other) const;

    /// Prolog-like surface syntax, with list sugar.
    std::string str() const;

private:
    struct Node {
        bool is_var;
        std::string name;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// An idempotent substitution: a finite map from variable names to
/// terms. Bindings are resolved eagerly at extension time, so applying
/// once equals applying to fixpoint.
class Subst {
public:
    Subst() = default;

    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const Term* lookup(const std::string& var) const;
    const std::map<std::string, Term>& bindings() const { return map_; }

    /// Binds var to term (term is first resolved against this
    /// substitution; occurs check optional). Returns false on an
    /// occurs-check failure. Not exposed for general use; unify() is
    /// the public entry point.
    bool extend(const std::string& var, const Term& term, bool occurs_check);

    std::string str() const;

private:
    std::map<std::string, Term> map_;
};

/// Applies a substitution (single simultaneous pass; sufficient because
/// substitutions are idempotent).
Term apply(const Subst& s, const Term& t);

/// Robinson unification with occurs check (on by default). Returns the
/// most general unifier extending `s`, or nullopt when none exists.
std::optional<Subst> unify(const Term& t1, const Term& t2, Subst s = {},
                           bool occurs_check = true);

/// Collects variable names in first-occurrence order.
void collect_variables(const Term& t, std::vector<std::string>& out,
                       std::set<std::string>* seen = nullptr);
std::set<std::string> variables(const Term& t);

/// Renames the variables of `t` consistently so that the result shares
/// no variable name with `used`. Variables not in `used` are kept.
Term rename_apart(const Term& t, const std::set<std::string>& used);
/// Same renaming applied consistently across several terms (used to
/// standardize whole rules apart).
std::vector<Term> rename_apart(std::span<const Term> terms, const std::set<std::string>& used);

/// Renames variables to _G0, _G1, ... in first-occurrence order across
/// the given terms; variants normalize to identical terms.
std::vector<Term> variant_normalize(std::span<const Term> terms);
Term variant_normalize(const Term& t);

/// True when the two terms are equal up to a consistent renaming of
/// variables.
bool is_variant(const Term& a, const Term& b);

/// Reads one term from Prolog-like text, e.g. `f(a, [1,0|B], X)`.
/// Identifiers starting with an uppercase letter or '_' are variables.
Term parse_term(std::string_view input);
Term parse_term(text::Cursor& cur);

}  // namespace pfg
