#include "rowhorn/unify.hpp"

#include <utility>

namespace rowhorn {

namespace {

bool occurs(const Substitution& subst, VarId v, const TermPtr& t) {
    TermPtr w = subst.walk(t);
    if (w->is_var())
        return w->as_var().id == v;
    for (const auto& a : w->as_app().args)
        if (occurs(subst, v, a))
            return true;
    return false;
}

bool unify_fin(Substitution& subst, const TermPtr& a, const TermPtr& b) {
    TermPtr x = subst.walk(a);
    TermPtr y = subst.walk(b);
    if (x->is_var() && y->is_var() && x->as_var().id == y->as_var().id)
        return true;
    if (x->is_var()) {
        if (occurs(subst, x->as_var().id, y))
            return false;
        subst.bind_normalized(x->as_var().id, subst.apply(y));
        return true;
    }
    if (y->is_var()) {
        if (occurs(subst, y->as_var().id, x))
            return false;
        subst.bind_normalized(y->as_var().id, subst.apply(x));
        return true;
    }
    const auto& fa = x->as_app();
    const auto& fb = y->as_app();
    if (fa.sym != fb.sym)
        return false;
    for (std::size_t i = 0; i < fa.args.size(); ++i)
        if (!unify_fin(subst, fa.args[i], fb.args[i]))
            return false;
    return true;
}

// Pairs of application nodes already assumed equal on the current run.
// Finitely many node pairs exist (inputs plus substitution range), so
// memoizing them makes the rational procedure terminate on cyclic input.
using PairMemo = std::set<std::pair<const Term*, const Term*>>;

bool unify_rat(Substitution& subst, const TermPtr& a, const TermPtr& b, PairMemo& memo) {
    TermPtr x = subst.walk(a);
    TermPtr y = subst.walk(b);
    if (x->is_var() && y->is_var() && x->as_var().id == y->as_var().id)
        return true;
    if (x->is_var()) {
        subst.bind_raw(x->as_var().id, y);
        return true;
    }
    if (y->is_var()) {
        subst.bind_raw(y->as_var().id, x);
        return true;
    }
    const auto& fa = x->as_app();
    const auto& fb = y->as_app();
    if (fa.sym != fb.sym)
        return false;
    if (x.get() == y.get())
        return true;
    if (!memo.insert({x.get(), y.get()}).second)
        return true;
    for (std::size_t i = 0; i < fa.args.size(); ++i)
        if (!unify_rat(subst, fa.args[i], fb.args[i], memo))
            return false;
    return true;
}

}  // namespace

bool unify_finite_into(Substitution& subst, const TermPtr& a, const TermPtr& b) {
    return unify_fin(subst, a, b);
}

bool unify_rational_into(Substitution& subst, const TermPtr& a, const TermPtr& b) {
    PairMemo memo;
    return unify_rat(subst, a, b, memo);
}

std::optional<Substitution> unify_finite(const TermPtr& a, const TermPtr& b) {
    Substitution subst;
    if (!unify_finite_into(subst, a, b))
        return std::nullopt;
    return subst;
}

std::optional<Substitution> unify_rational(const TermPtr& a, const TermPtr& b) {
    Substitution subst;
    if (!unify_rational_into(subst, a, b))
        return std::nullopt;
    return subst;
}

namespace {

bool variant_rec(const TermPtr& a, const TermPtr& b,
                 std::map<VarId, VarId>& fwd, std::map<VarId, VarId>& bwd) {
    if (a->is_var() != b->is_var())
        return false;
    if (a->is_var()) {
        VarId va = a->as_var().id;
        VarId vb = b->as_var().id;
        auto f = fwd.find(va);
        auto g = bwd.find(vb);
        if (f == fwd.end() && g == bwd.end()) {
            fwd[va] = vb;
            bwd[vb] = va;
            return true;
        }
        return f != fwd.end() && g != bwd.end() && f->second == vb && g->second == va;
    }
    const auto& fa = a->as_app();
    const auto& fb = b->as_app();
    if (fa.sym != fb.sym)
        return false;
    for (std::size_t i = 0; i < fa.args.size(); ++i)
        if (!variant_rec(fa.args[i], fb.args[i], fwd, bwd))
            return false;
    return true;
}

}  // namespace

bool is_variant(const TermPtr& a, const TermPtr& b) {
    std::map<VarId, VarId> fwd, bwd;
    return variant_rec(a, b, fwd, bwd);
}

bool equal_to_depth(const TermPtr& a, const Substitution& sa,
                    const TermPtr& b, const Substitution& sb, int depth) {
    if (depth <= 0)
        return true;
    TermPtr x = sa.walk(a);
    TermPtr y = sb.walk(b);
    if (x->is_var() || y->is_var())
        return x->is_var() && y->is_var() && x->as_var().id == y->as_var().id;
    const auto& fa = x->as_app();
    const auto& fb = y->as_app();
    if (fa.sym != fb.sym)
        return false;
    for (std::size_t i = 0; i < fa.args.size(); ++i)
        if (!equal_to_depth(fa.args[i], sa, fb.args[i], sb, depth - 1))
            return false;
    return true;
}

namespace {

bool bisim(const Substitution& subst, const TermPtr& a, const TermPtr& b, PairMemo& memo) {
    TermPtr x = subst.walk(a);
    TermPtr y = subst.walk(b);
    if (x->is_var() || y->is_var())
        return x->is_var() && y->is_var() && x->as_var().id == y->as_var().id;
    const auto& fa = x->as_app();
    const auto& fb = y->as_app();
    if (fa.sym != fb.sym)
        return false;
    if (x.get() == y.get())
        return true;
    if (!memo.insert({x.get(), y.get()}).second)
        return true;
    for (std::size_t i = 0; i < fa.args.size(); ++i)
        if (!bisim(subst, fa.args[i], fb.args[i], memo))
            return false;
    return true;
}

}  // namespace

bool rational_equal(const Substitution& subst, const TermPtr& a, const TermPtr& b) {
    PairMemo memo;
    return bisim(subst, a, b, memo);
}

}  // namespace rowhorn
