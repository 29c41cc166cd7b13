#include "rowhorn/type_expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace rowhorn {

TypePtr TypeExpr::tvar(VarId id, Kind kind, std::string hint) {
    return TypePtr(new TypeExpr(TVar{id, std::move(kind), std::move(hint)}));
}

TypePtr TypeExpr::tcon(std::string name, Kind kind) {
    int arity = kind.arity();
    return TypePtr(new TypeExpr(TCon{Symbol{std::move(name), arity}, std::move(kind)}));
}

TypePtr TypeExpr::tapp(TypePtr fn, TypePtr arg) {
    return TypePtr(new TypeExpr(TApp{std::move(fn), std::move(arg)}));
}

TypePtr TypeExpr::tarrow(TypePtr from, TypePtr to) {
    return TypePtr(new TypeExpr(TArrow{std::move(from), std::move(to)}));
}

TypePtr TypeExpr::rempty() {
    return TypePtr(new TypeExpr(REmpty{}));
}

TypePtr TypeExpr::rext(Label label, TypePtr field, TypePtr tail) {
    return TypePtr(new TypeExpr(RExt{std::move(label), std::move(field), std::move(tail)}));
}

KindEnv KindEnv::builtins() {
    KindEnv env;
    env.constructors.emplace("Int", Kind::star());
    env.constructors.emplace("String", Kind::star());
    env.constructors.emplace("Bool", Kind::star());
    env.constructors.emplace("List", Kind::arrow(Kind::star(), Kind::star()));
    env.constructors.emplace("Rec", Kind::arrow(Kind::row(), Kind::star()));
    return env;
}

Kind kind_of(const KindEnv& env, const TypePtr& type) {
    if (type->is_tvar()) {
        const auto& v = type->as_tvar();
        auto it = env.vars.find(v.id);
        return it != env.vars.end() ? it->second : v.kind;
    }
    if (type->is_tcon()) {
        const auto& c = type->as_tcon();
        auto it = env.constructors.find(c.sym.name);
        if (it == env.constructors.end())
            throw KindError{KindError::Tag::Unbound,
                            "unbound type constructor '" + c.sym.name + "'"};
        return it->second;
    }
    if (type->is_tapp()) {
        const auto& app = type->as_tapp();
        Kind kf = kind_of(env, app.fn);
        Kind ka = kind_of(env, app.arg);
        if (!kf.is_arrow())
            throw KindError{KindError::Tag::Mismatch,
                            "expected a constructor kind, found " + to_string(kf)};
        if (!(kf.from() == ka))
            throw KindError{KindError::Tag::Mismatch,
                            "expected " + to_string(kf.from()) + ", found " + to_string(ka)};
        return kf.to();
    }
    if (type->is_tarrow()) {
        const auto& arr = type->as_tarrow();
        Kind kl = kind_of(env, arr.from);
        if (!kl.is_star())
            throw KindError{KindError::Tag::Mismatch,
                            "expected *, found " + to_string(kl)};
        Kind kr = kind_of(env, arr.to);
        if (!kr.is_star())
            throw KindError{KindError::Tag::Mismatch,
                            "expected *, found " + to_string(kr)};
        return Kind::star();
    }
    if (type->is_rempty())
        return Kind::row();

    // RExt: * field, Row tail, labels distinct along the spine.
    std::set<Label> seen;
    TypePtr node = type;
    while (node->is_rext()) {
        const auto& ext = node->as_rext();
        if (!seen.insert(ext.label).second)
            throw KindError{KindError::Tag::Mismatch,
                            "duplicate label '" + ext.label + "' in row"};
        Kind kf = kind_of(env, ext.field);
        if (!kf.is_star())
            throw KindError{KindError::Tag::Mismatch,
                            "expected *, found " + to_string(kf) + " for field '" +
                                ext.label + "'"};
        node = ext.tail;
    }
    Kind kt = node->is_rempty() ? Kind::row() : kind_of(env, node);
    if (!kt.is_row())
        throw KindError{KindError::Tag::Mismatch,
                        "expected row, found " + to_string(kt) + " as row tail"};
    return Kind::row();
}

Kind kind_shallow(const TypePtr& type) {
    if (type->is_tvar())
        return type->as_tvar().kind;
    if (type->is_tcon())
        return type->as_tcon().kind;
    if (type->is_tapp()) {
        Kind kf = kind_shallow(type->as_tapp().fn);
        return kf.is_arrow() ? kf.to() : Kind::star();
    }
    if (type->is_tarrow())
        return Kind::star();
    return Kind::row();
}

TypePtr TypeSubst::lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : it->second;
}

namespace {

TypePtr replace_tvar(const TypePtr& t, VarId v, const TypePtr& r) {
    if (t->is_tvar())
        return t->as_tvar().id == v ? r : t;
    if (t->is_tcon() || t->is_rempty())
        return t;
    if (t->is_tapp()) {
        const auto& app = t->as_tapp();
        TypePtr fn = replace_tvar(app.fn, v, r);
        TypePtr arg = replace_tvar(app.arg, v, r);
        return fn == app.fn && arg == app.arg ? t : TypeExpr::tapp(fn, arg);
    }
    if (t->is_tarrow()) {
        const auto& arr = t->as_tarrow();
        TypePtr from = replace_tvar(arr.from, v, r);
        TypePtr to = replace_tvar(arr.to, v, r);
        return from == arr.from && to == arr.to ? t : TypeExpr::tarrow(from, to);
    }
    const auto& ext = t->as_rext();
    TypePtr field = replace_tvar(ext.field, v, r);
    TypePtr tail = replace_tvar(ext.tail, v, r);
    return field == ext.field && tail == ext.tail ? t : TypeExpr::rext(ext.label, field, tail);
}

}  // namespace

void TypeSubst::bind(VarId v, TypePtr t) {
    assert(!type_occurs(v, t));
    for (auto& [w, s] : map_)
        s = replace_tvar(s, v, t);
    map_[v] = std::move(t);
}

TypePtr TypeSubst::walk(TypePtr t) const {
    while (t->is_tvar()) {
        TypePtr next = lookup(t->as_tvar().id);
        if (!next)
            return t;
        t = std::move(next);
    }
    return t;
}

TypePtr TypeSubst::apply(TypePtr t) const {
    t = walk(std::move(t));
    if (t->is_tvar() || t->is_tcon() || t->is_rempty())
        return t;
    if (t->is_tapp()) {
        const auto& app = t->as_tapp();
        return TypeExpr::tapp(apply(app.fn), apply(app.arg));
    }
    if (t->is_tarrow()) {
        const auto& arr = t->as_tarrow();
        return TypeExpr::tarrow(apply(arr.from), apply(arr.to));
    }
    const auto& ext = t->as_rext();
    return TypeExpr::rext(ext.label, apply(ext.field), apply(ext.tail));
}

namespace {

void collect_tvars(const TypePtr& t, std::vector<TypeExpr::TVar>& out, std::set<VarId>& seen) {
    if (t->is_tvar()) {
        if (seen.insert(t->as_tvar().id).second)
            out.push_back(t->as_tvar());
        return;
    }
    if (t->is_tapp()) {
        collect_tvars(t->as_tapp().fn, out, seen);
        collect_tvars(t->as_tapp().arg, out, seen);
    } else if (t->is_tarrow()) {
        collect_tvars(t->as_tarrow().from, out, seen);
        collect_tvars(t->as_tarrow().to, out, seen);
    } else if (t->is_rext()) {
        collect_tvars(t->as_rext().field, out, seen);
        collect_tvars(t->as_rext().tail, out, seen);
    }
}

}  // namespace

std::vector<TypeExpr::TVar> type_vars(const TypePtr& t) {
    std::vector<TypeExpr::TVar> out;
    std::set<VarId> seen;
    collect_tvars(t, out, seen);
    return out;
}

bool type_occurs(VarId v, const TypePtr& t) {
    if (t->is_tvar())
        return t->as_tvar().id == v;
    if (t->is_tapp())
        return type_occurs(v, t->as_tapp().fn) || type_occurs(v, t->as_tapp().arg);
    if (t->is_tarrow())
        return type_occurs(v, t->as_tarrow().from) || type_occurs(v, t->as_tarrow().to);
    if (t->is_rext())
        return type_occurs(v, t->as_rext().field) || type_occurs(v, t->as_rext().tail);
    return false;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
    if (a.get() == b.get())
        return true;
    if (a->is_tvar())
        return b->is_tvar() && a->as_tvar().id == b->as_tvar().id;
    if (a->is_tcon())
        return b->is_tcon() && a->as_tcon().sym == b->as_tcon().sym;
    if (a->is_tapp())
        return b->is_tapp() && type_equal(a->as_tapp().fn, b->as_tapp().fn) &&
               type_equal(a->as_tapp().arg, b->as_tapp().arg);
    if (a->is_tarrow())
        return b->is_tarrow() && type_equal(a->as_tarrow().from, b->as_tarrow().from) &&
               type_equal(a->as_tarrow().to, b->as_tarrow().to);
    if (a->is_rempty())
        return b->is_rempty();
    return b->is_rext() && a->as_rext().label == b->as_rext().label &&
           type_equal(a->as_rext().field, b->as_rext().field) &&
           type_equal(a->as_rext().tail, b->as_rext().tail);
}

RowParts row_parts(const TypeSubst& subst, TypePtr row) {
    RowParts parts;
    row = subst.walk(std::move(row));
    while (row->is_rext()) {
        const auto& ext = row->as_rext();
        parts.fields.emplace_back(ext.label, ext.field);
        row = subst.walk(ext.tail);
    }
    parts.tail = std::move(row);
    return parts;
}

TypePtr row_normalize(const TypePtr& row) {
    TypeSubst empty;
    RowParts parts = row_parts(empty, row);
    std::stable_sort(parts.fields.begin(), parts.fields.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    TypePtr out = parts.tail;
    for (auto it = parts.fields.rbegin(); it != parts.fields.rend(); ++it)
        out = TypeExpr::rext(it->first, it->second, out);
    return out;
}

namespace {

void set_failure(UnifyFailure* why, UnifyFailure::Tag tag, TypePtr l, TypePtr r,
                 Label label = {}) {
    if (why)
        *why = UnifyFailure{tag, std::move(l), std::move(r), std::move(label)};
}

TypePtr row_from_fields(const std::vector<std::pair<Label, TypePtr>>& fields, TypePtr tail) {
    TypePtr out = std::move(tail);
    for (auto it = fields.rbegin(); it != fields.rend(); ++it)
        out = TypeExpr::rext(it->first, it->second, out);
    return out;
}

// Bind a row tail variable to a row, enforcing the row occurs check.
bool bind_row_var(TypeSubst& subst, const TypeExpr::TVar& var, TypePtr row,
                  UnifyFailure* why) {
    TypePtr applied = subst.apply(std::move(row));
    if (type_occurs(var.id, applied)) {
        set_failure(why, UnifyFailure::Tag::RowOccurs, TypeExpr::tvar(var.id, var.kind, var.hint),
                    applied);
        return false;
    }
    subst.bind(var.id, std::move(applied));
    return true;
}

}  // namespace

bool row_unify(TypeSubst& subst, const TypePtr& r1, const TypePtr& r2,
               VarGen& gen, UnifyFailure* why) {
    RowParts p1 = row_parts(subst, r1);
    RowParts p2 = row_parts(subst, r2);

    // Labels present on both sides unify pointwise.
    std::map<Label, TypePtr> fields2;
    for (auto& [l, t] : p2.fields)
        fields2.emplace(l, t);
    std::vector<std::pair<Label, TypePtr>> only1;
    for (auto& [l, t] : p1.fields) {
        auto it = fields2.find(l);
        if (it == fields2.end()) {
            only1.emplace_back(l, t);
            continue;
        }
        if (!type_unify(subst, t, it->second, gen, why))
            return false;
        fields2.erase(it);
    }
    std::vector<std::pair<Label, TypePtr>> only2;
    for (auto& [l, t] : p2.fields)
        if (fields2.count(l))
            only2.emplace_back(l, t);

    // Tails may have been bound while unifying shared fields.
    TypePtr tail1 = subst.walk(p1.tail);
    TypePtr tail2 = subst.walk(p2.tail);

    if (only1.empty() && only2.empty()) {
        if (tail1->is_rempty() && tail2->is_rempty())
            return true;
        if (tail1->is_tvar() && tail2->is_tvar() &&
            tail1->as_tvar().id == tail2->as_tvar().id)
            return true;
        if (tail1->is_tvar())
            return bind_row_var(subst, tail1->as_tvar(), tail2, why);
        if (tail2->is_tvar())
            return bind_row_var(subst, tail2->as_tvar(), tail1, why);
        return true;  // both empty handled above
    }

    // A side with leftover labels needs an open tail on the other side.
    if (!only2.empty() && !tail1->is_tvar()) {
        set_failure(why, UnifyFailure::Tag::MissingLabel, r1, r2, only2.front().first);
        return false;
    }
    if (!only1.empty() && !tail2->is_tvar()) {
        set_failure(why, UnifyFailure::Tag::MissingLabel, r2, r1, only1.front().first);
        return false;
    }

    if (only1.empty()) {
        // tail1 absorbs only2, keeping r2's tail.
        return bind_row_var(subst, tail1->as_tvar(), row_from_fields(only2, tail2), why);
    }
    if (only2.empty()) {
        return bind_row_var(subst, tail2->as_tvar(), row_from_fields(only1, tail1), why);
    }

    // Residue on both sides: the same tail variable cannot absorb two
    // different residues.
    if (tail1->as_tvar().id == tail2->as_tvar().id) {
        set_failure(why, UnifyFailure::Tag::Clash, r1, r2);
        return false;
    }
    TypePtr shared = TypeExpr::tvar(gen.fresh(), Kind::row());
    if (!bind_row_var(subst, tail1->as_tvar(), row_from_fields(only2, shared), why))
        return false;
    return bind_row_var(subst, tail2->as_tvar(), row_from_fields(only1, shared), why);
}

bool type_unify(TypeSubst& subst, const TypePtr& t1, const TypePtr& t2,
                VarGen& gen, UnifyFailure* why) {
    TypePtr a = subst.walk(t1);
    TypePtr b = subst.walk(t2);

    Kind ka = kind_shallow(a);
    Kind kb = kind_shallow(b);
    if (!(ka == kb)) {
        set_failure(why, UnifyFailure::Tag::KindMismatch, a, b);
        return false;
    }
    if (ka.is_row())
        return row_unify(subst, a, b, gen, why);

    if (a->is_tvar() && b->is_tvar() && a->as_tvar().id == b->as_tvar().id)
        return true;
    if (a->is_tvar() || b->is_tvar()) {
        const TypePtr& var = a->is_tvar() ? a : b;
        const TypePtr& other = a->is_tvar() ? b : a;
        TypePtr applied = subst.apply(other);
        if (type_occurs(var->as_tvar().id, applied)) {
            set_failure(why, UnifyFailure::Tag::Occurs, var, applied);
            return false;
        }
        subst.bind(var->as_tvar().id, std::move(applied));
        return true;
    }
    if (a->is_tcon() && b->is_tcon()) {
        if (a->as_tcon().sym == b->as_tcon().sym)
            return true;
        set_failure(why, UnifyFailure::Tag::Clash, a, b);
        return false;
    }
    if (a->is_tapp() && b->is_tapp()) {
        return type_unify(subst, a->as_tapp().fn, b->as_tapp().fn, gen, why) &&
               type_unify(subst, a->as_tapp().arg, b->as_tapp().arg, gen, why);
    }
    if (a->is_tarrow() && b->is_tarrow()) {
        return type_unify(subst, a->as_tarrow().from, b->as_tarrow().from, gen, why) &&
               type_unify(subst, a->as_tarrow().to, b->as_tarrow().to, gen, why);
    }
    set_failure(why, UnifyFailure::Tag::Clash, a, b);
    return false;
}

std::optional<TypeSubst> type_unify(const TypePtr& t1, const TypePtr& t2,
                                    VarGen& gen, UnifyFailure* why) {
    TypeSubst subst;
    if (!type_unify(subst, t1, t2, gen, why))
        return std::nullopt;
    return subst;
}

namespace {

enum class Prec { Top, ArrowLhs, AppArg };

void print_type(const TypePtr& t, std::ostream& os, Prec prec);

void print_row(const TypePtr& row, std::ostream& os) {
    TypeSubst empty;
    RowParts parts = row_parts(empty, row);
    std::stable_sort(parts.fields.begin(), parts.fields.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    os << "{";
    for (std::size_t i = 0; i < parts.fields.size(); ++i) {
        if (i)
            os << ", ";
        os << parts.fields[i].first << " : ";
        print_type(parts.fields[i].second, os, Prec::Top);
    }
    if (!parts.tail->is_rempty()) {
        if (!parts.fields.empty())
            os << " ";
        os << "| ";
        print_type(parts.tail, os, Prec::Top);
    }
    os << "}";
}

void print_type(const TypePtr& t, std::ostream& os, Prec prec) {
    if (t->is_tvar()) {
        const auto& v = t->as_tvar();
        if (v.hint.empty())
            os << "_" << v.id;
        else
            os << v.hint;
        return;
    }
    if (t->is_tcon()) {
        os << t->as_tcon().sym.name;
        return;
    }
    if (t->is_rempty() || t->is_rext()) {
        print_row(t, os);
        return;
    }
    if (t->is_tarrow()) {
        bool parens = prec != Prec::Top;
        if (parens)
            os << "(";
        print_type(t->as_tarrow().from, os, Prec::ArrowLhs);
        os << " -> ";
        print_type(t->as_tarrow().to, os, Prec::Top);
        if (parens)
            os << ")";
        return;
    }
    const auto& app = t->as_tapp();
    bool parens = prec == Prec::AppArg;
    if (parens)
        os << "(";
    print_type(app.fn, os, Prec::ArrowLhs);
    os << " ";
    if (app.arg->is_row())
        print_row(app.arg, os);
    else
        print_type(app.arg, os, Prec::AppArg);
    if (parens)
        os << ")";
}

}  // namespace

std::string to_string(const TypePtr& t) {
    std::ostringstream os;
    print_type(t, os, Prec::Top);
    return os.str();
}

}  // namespace rowhorn
