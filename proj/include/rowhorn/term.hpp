#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace rowhorn {

// A function or predicate symbol, identified by (name, arity).
struct Symbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

using VarId = std::uint64_t;

// Monotone fresh-variable counter for one engine session. Ids are never
// reused within a session; display hints are carried on the terms.
class VarGen {
public:
    VarId fresh() { return next_++; }
    std::uint64_t issued() const { return next_; }

private:
    std::uint64_t next_ = 0;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

// First-order term: a variable or a symbol application. Immutable and
// freely shareable. Cyclic (rational) structure is never materialized in
// the tree itself; it lives in substitutions whose bindings may refer back
// to their own domain through an App node.
class Term {
public:
    struct Var {
        VarId id;
        std::string hint;  // source-level name, printing only
    };
    struct App {
        Symbol sym;
        std::vector<TermPtr> args;
    };

    static TermPtr var(VarId id, std::string hint = {});
    static TermPtr app(Symbol sym, std::vector<TermPtr> args);
    static TermPtr constant(std::string name);

    bool is_var() const { return std::holds_alternative<Var>(node_); }
    bool is_app() const { return std::holds_alternative<App>(node_); }
    const Var& as_var() const { return std::get<Var>(node_); }
    const App& as_app() const { return std::get<App>(node_); }

private:
    explicit Term(Var v) : node_(std::move(v)) {}
    explicit Term(App a) : node_(std::move(a)) {}

    std::variant<Var, App> node_;
};

// Finite mapping VarId -> Term. Two disciplines share the type:
//  - finite mode keeps the map idempotent (bind_normalized rewrites the
//    existing range eagerly, so the domain never intersects range vars);
//  - rational mode inserts raw bindings that may be self-referential
//    through at least one App node (bind_raw).
class Substitution {
public:
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    bool contains(VarId v) const { return map_.count(v) != 0; }
    TermPtr lookup(VarId v) const;

    // Insert v -> t and substitute t for v throughout the existing range.
    // Keeps the idempotence invariant; t must not contain v.
    void bind_normalized(VarId v, TermPtr t);

    // Insert v -> t as-is (rational mode).
    void bind_raw(VarId v, TermPtr t);

    // Chase top-level variable bindings; stops at the first unbound
    // variable or application. Var-to-var chains are acyclic by
    // construction, so this terminates even for cyclic substitutions.
    TermPtr walk(TermPtr t) const;

    // Expand every bound variable in t. Reaches the fixpoint for
    // idempotent substitutions; for cyclic ones, a variable re-entered on
    // the current expansion path is left in place as the loop node.
    TermPtr apply(TermPtr t) const;

    const std::map<VarId, TermPtr>& entries() const { return map_; }
    void erase(VarId v) { map_.erase(v); }

private:
    TermPtr apply_rec(const TermPtr& t, std::set<VarId>& expanding) const;

    std::map<VarId, TermPtr> map_;
};

// Free variables of a term (no substitution involved), in first-occurrence
// order.
std::vector<VarId> term_vars(const TermPtr& t);

// Plain printing: hints when present (falling back to _<id>), f(a,b)
// application syntax. Ignores any substitution.
std::string to_string(const TermPtr& t);

// Printing under a (possibly cyclic) substitution. Bound variables are
// expanded; each cycle entry point is rendered as `mu V. body` with the
// bound occurrences printed as V. Binder names are V, V1, V2, ... per call.
std::string print_term(const TermPtr& t, const Substitution& subst);

}  // namespace rowhorn
