#pragma once

#include <optional>

#include "rowhorn/term.hpp"

namespace rowhorn {

// Most general unifier over finite trees; occurs check always on.
// Absence means clash or occurs violation. The returned substitution is
// idempotent.
std::optional<Substitution> unify_finite(const TermPtr& a, const TermPtr& b);

// Unification over rational trees: no occurs check, bindings may be
// cyclic through an App node. x = f(x) succeeds with x bound to the
// regular tree f(f(...)). Absence means symbol clash only.
std::optional<Substitution> unify_rational(const TermPtr& a, const TermPtr& b);

// Extend an existing substitution in place. Returns false (and leaves the
// substitution in an unspecified but safe state for backtracking callers
// that copied it) on failure.
bool unify_finite_into(Substitution& subst, const TermPtr& a, const TermPtr& b);
bool unify_rational_into(Substitution& subst, const TermPtr& a, const TermPtr& b);

// True iff a bijective variable renaming carries a onto b.
bool is_variant(const TermPtr& a, const TermPtr& b);

// Compare the unfoldings of two (possibly cyclic) terms up to the given
// depth: equal iff they agree on every node reachable within `depth`
// App levels.
bool equal_to_depth(const TermPtr& a, const Substitution& sa,
                    const TermPtr& b, const Substitution& sb, int depth);

// Bisimulation equality of rational terms under one substitution: true iff
// the infinite unfoldings of a and b coincide.
bool rational_equal(const Substitution& subst, const TermPtr& a, const TermPtr& b);

}  // namespace rowhorn
