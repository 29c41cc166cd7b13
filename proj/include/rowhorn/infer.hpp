#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rowhorn/ml_ast.hpp"
#include "rowhorn/type_expr.hpp"

namespace rowhorn {

// Quantified type: kind-annotated variable block over a body. Produced by
// generalize, consumed by instantiate.
struct Scheme {
    std::vector<std::pair<VarId, Kind>> quantified;
    TypePtr body;

    static Scheme mono(TypePtr type) { return Scheme{{}, std::move(type)}; }
};

// Ordered name -> scheme bindings, newest first; lookup returns the first
// match, so shadowing works.
class TypeEnv {
public:
    void push(std::string name, Scheme scheme);
    const Scheme* lookup(const std::string& name) const;
    const std::vector<std::pair<std::string, Scheme>>& bindings() const { return bindings_; }

    TypeEnv applied(const TypeSubst& subst) const;
    std::set<VarId> free_vars() const;

private:
    std::vector<std::pair<std::string, Scheme>> bindings_;  // newest last
};

struct InferError {
    enum class Variant {
        UnboundVariable,
        OccursViolation,
        TypeClash,
        MissingLabel,
        KindMismatch,
    };

    Variant variant;
    std::string message;  // human-readable, without the location
    SourceLoc loc;

    std::string to_string() const;  // "<message> at <line>:<col>"
};

// Free variables of the scheme body minus the quantified block.
std::set<VarId> scheme_free_vars(const Scheme& scheme);

// Quantifies exactly the variables (of any kind) free in the type but not
// free in the environment.
Scheme generalize(const TypeEnv& env, const TypePtr& type);

// Fresh variables of the same kinds for the quantified block.
TypePtr instantiate(const Scheme& scheme, VarGen& gen);

// First-match lookup; throws InferError{UnboundVariable} when absent.
const Scheme& lookup_env(const TypeEnv& env, const std::string& name, SourceLoc loc);

// Algorithm-W-style staged inference. Kinding runs as a separate stage:
// the result (and every row built along the way) is kind-checked under
// env, and kind errors surface as KindMismatch, never TypeClash.
// Throws InferError.
std::pair<TypeSubst, TypePtr> infer(const KindEnv& kinds, const TypeEnv& env,
                                    const MLPtr& term, VarGen& gen);

// Canonical scheme printing: quantified variables are renamed to
// a, b, c, ... (kind *) and r, r1, r2, ... (kind row) in first-occurrence
// order; kind annotations only for non-* kinds.
// `forall a. a -> a`, `forall a. forall r:row. Rec {name : a | r} -> a`.
std::string print_scheme(const Scheme& scheme);

}  // namespace rowhorn
