#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rowhorn/kind.hpp"
#include "rowhorn/term.hpp"

namespace rowhorn {

class TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

// Record field label; labels along one row spine are pairwise distinct.
using Label = std::string;

// Type-level syntax: variables and constructors (kind-annotated),
// application, function arrow, and row forms {} / {l : t | tail}.
class TypeExpr {
public:
    struct TVar {
        VarId id;
        Kind kind;
        std::string hint;
    };
    struct TCon {
        Symbol sym;  // arity derived from the kind
        Kind kind;
    };
    struct TApp {
        TypePtr fn, arg;
    };
    struct TArrow {
        TypePtr from, to;
    };
    struct REmpty {};
    struct RExt {
        Label label;
        TypePtr field;
        TypePtr tail;
    };

    static TypePtr tvar(VarId id, Kind kind, std::string hint = {});
    static TypePtr tcon(std::string name, Kind kind);
    static TypePtr tapp(TypePtr fn, TypePtr arg);
    static TypePtr tarrow(TypePtr from, TypePtr to);
    static TypePtr rempty();
    static TypePtr rext(Label label, TypePtr field, TypePtr tail);

    bool is_tvar() const { return std::holds_alternative<TVar>(node_); }
    bool is_tcon() const { return std::holds_alternative<TCon>(node_); }
    bool is_tapp() const { return std::holds_alternative<TApp>(node_); }
    bool is_tarrow() const { return std::holds_alternative<TArrow>(node_); }
    bool is_rempty() const { return std::holds_alternative<REmpty>(node_); }
    bool is_rext() const { return std::holds_alternative<RExt>(node_); }
    bool is_row() const { return is_rempty() || is_rext(); }

    const TVar& as_tvar() const { return std::get<TVar>(node_); }
    const TCon& as_tcon() const { return std::get<TCon>(node_); }
    const TApp& as_tapp() const { return std::get<TApp>(node_); }
    const TArrow& as_tarrow() const { return std::get<TArrow>(node_); }
    const RExt& as_rext() const { return std::get<RExt>(node_); }

private:
    template <typename N>
    explicit TypeExpr(N n) : node_(std::move(n)) {}

    std::variant<TVar, TCon, TApp, TArrow, REmpty, RExt> node_;
};

// Kind environment: built-in and declared type constructors, plus kinds
// for any type variables registered explicitly (variables also carry
// their kind intrinsically).
struct KindEnv {
    std::map<std::string, Kind> constructors;
    std::map<VarId, Kind> vars;

    // Int, String, Bool : *; List : * -> *; Rec : row -> *.
    static KindEnv builtins();
};

struct KindError {
    enum class Tag { Mismatch, Unbound };
    Tag tag;
    std::string message;
};

// Unique kind derivable for the expression, or a KindError (thrown).
// TApp requires an arrow function kind matching the argument; TArrow
// requires * on both sides; row spines require * fields, Row tails and
// distinct labels.
Kind kind_of(const KindEnv& env, const TypePtr& type);

// Structural kind of a type whose variables/constructors carry correct
// annotations; no environment lookups, no validation.
Kind kind_shallow(const TypePtr& type);

// Idempotent finite mapping VarId -> TypeExpr over finite (occurs-checked)
// types; same normalize-at-bind discipline as the term-level substitution.
class TypeSubst {
public:
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    bool contains(VarId v) const { return map_.count(v) != 0; }
    TypePtr lookup(VarId v) const;

    void bind(VarId v, TypePtr t);  // normalizes the existing range
    TypePtr walk(TypePtr t) const;
    TypePtr apply(TypePtr t) const;
    const std::map<VarId, TypePtr>& entries() const { return map_; }

private:
    std::map<VarId, TypePtr> map_;
};

// Free type variables in first-occurrence order.
std::vector<TypeExpr::TVar> type_vars(const TypePtr& t);
bool type_occurs(VarId v, const TypePtr& t);

// Structural equality (same shape, same var ids, same labels in the same
// order).
bool type_equal(const TypePtr& a, const TypePtr& b);

// A row spine split into its fields and tail (REmpty or a row TVar).
struct RowParts {
    std::vector<std::pair<Label, TypePtr>> fields;
    TypePtr tail;  // REmpty or TVar of kind row
};
RowParts row_parts(const TypeSubst& subst, TypePtr row);

// Canonical row form: labels sorted ascending by code point, tail last,
// field types untouched.
TypePtr row_normalize(const TypePtr& row);

// Why a unification failed, for error reporting upstream.
struct UnifyFailure {
    enum class Tag {
        Clash,        // constructor / shape mismatch
        Occurs,       // * variable occurs in the other side
        RowOccurs,    // row variable occurs in the residue it must absorb
        MissingLabel, // one-sided label met a closed row
        KindMismatch, // operands of different kinds
    };
    Tag tag = Tag::Clash;
    TypePtr left, right;
    Label label;
};

// Row unification: shared labels unify pointwise, one-sided labels move
// into the other side's tail variable (with a fresh common tail when both
// sides have residue). Fails on a closed tail meeting a residue, on field
// clashes, and on the row occurs check.
bool row_unify(TypeSubst& subst, const TypePtr& r1, const TypePtr& r2,
               VarGen& gen, UnifyFailure* why = nullptr);

// Structural unification with occurs check; Row-kinded positions delegate
// to row_unify, so the induced equivalence is structural equality modulo
// row reordering.
bool type_unify(TypeSubst& subst, const TypePtr& t1, const TypePtr& t2,
                VarGen& gen, UnifyFailure* why = nullptr);

std::optional<TypeSubst> type_unify(const TypePtr& t1, const TypePtr& t2,
                                    VarGen& gen, UnifyFailure* why = nullptr);

// Canonical printing: Int, Bool, T1 -> T2 (right-assoc), List T,
// Rec {a : Int, b : Bool | r}; rows sorted at every level. Variables print
// their hint, or _<id> when hintless.
std::string to_string(const TypePtr& t);

}  // namespace rowhorn
