#include "rowhorn/infer.hpp"

#include <algorithm>
#include <sstream>

namespace rowhorn {

void TypeEnv::push(std::string name, Scheme scheme) {
    bindings_.emplace_back(std::move(name), std::move(scheme));
}

const Scheme* TypeEnv::lookup(const std::string& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
        if (it->first == name)
            return &it->second;
    return nullptr;
}

TypeEnv TypeEnv::applied(const TypeSubst& subst) const {
    TypeEnv out;
    for (const auto& [name, scheme] : bindings_)
        out.push(name, Scheme{scheme.quantified, subst.apply(scheme.body)});
    return out;
}

std::set<VarId> scheme_free_vars(const Scheme& scheme) {
    std::set<VarId> free;
    for (const auto& v : type_vars(scheme.body))
        free.insert(v.id);
    for (const auto& [id, kind] : scheme.quantified)
        free.erase(id);
    return free;
}

std::set<VarId> TypeEnv::free_vars() const {
    std::set<VarId> free;
    for (const auto& [name, scheme] : bindings_) {
        auto f = scheme_free_vars(scheme);
        free.insert(f.begin(), f.end());
    }
    return free;
}

std::string InferError::to_string() const {
    return message + " at " + std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

Scheme generalize(const TypeEnv& env, const TypePtr& type) {
    std::set<VarId> env_free = env.free_vars();
    Scheme scheme;
    scheme.body = type;
    for (const auto& v : type_vars(type))
        if (!env_free.count(v.id))
            scheme.quantified.emplace_back(v.id, v.kind);
    return scheme;
}

TypePtr instantiate(const Scheme& scheme, VarGen& gen) {
    if (scheme.quantified.empty())
        return scheme.body;
    TypeSubst renaming;
    for (const auto& [id, kind] : scheme.quantified)
        renaming.bind(id, TypeExpr::tvar(gen.fresh(), kind));
    return renaming.apply(scheme.body);
}

const Scheme& lookup_env(const TypeEnv& env, const std::string& name, SourceLoc loc) {
    const Scheme* scheme = env.lookup(name);
    if (!scheme)
        throw InferError{InferError::Variant::UnboundVariable,
                         "unbound variable '" + name + "'", loc};
    return *scheme;
}

namespace {

[[noreturn]] void raise_unify_error(const UnifyFailure& why, SourceLoc loc) {
    switch (why.tag) {
    case UnifyFailure::Tag::MissingLabel:
        throw InferError{InferError::Variant::MissingLabel,
                         "record lacks label '" + why.label + "'", loc};
    case UnifyFailure::Tag::Occurs:
    case UnifyFailure::Tag::RowOccurs:
        throw InferError{InferError::Variant::OccursViolation,
                         "occurs check: '" + to_string(why.left) + "' in '" +
                             to_string(why.right) + "'",
                         loc};
    case UnifyFailure::Tag::KindMismatch:
        throw InferError{InferError::Variant::KindMismatch,
                         "kind mismatch between '" + to_string(why.left) + "' and '" +
                             to_string(why.right) + "'",
                         loc};
    case UnifyFailure::Tag::Clash:
    default:
        throw InferError{InferError::Variant::TypeClash,
                         "cannot unify '" + to_string(why.left) + "' with '" +
                             to_string(why.right) + "'",
                         loc};
    }
}

struct Inferencer {
    const KindEnv& kinds;
    VarGen& gen;

    TypePtr fresh_star() { return TypeExpr::tvar(gen.fresh(), Kind::star()); }
    TypePtr fresh_row() { return TypeExpr::tvar(gen.fresh(), Kind::row()); }

    TypePtr builtin(const char* name) const {
        return TypeExpr::tcon(name, kinds.constructors.at(name));
    }

    void unify(TypeSubst& subst, const TypePtr& a, const TypePtr& b, SourceLoc loc) {
        UnifyFailure why;
        if (!type_unify(subst, a, b, gen, &why))
            raise_unify_error(why, loc);
    }

    TypePtr visit(TypeSubst& subst, const TypeEnv& env, const MLPtr& term) {
        SourceLoc loc = term->loc();

        if (const auto* v = term->get_if<MLTerm::Var>())
            return instantiate(lookup_env(env, v->name, loc), gen);

        if (const auto* lam = term->get_if<MLTerm::Lam>()) {
            TypePtr param = fresh_star();
            TypeEnv inner = env;
            inner.push(lam->param, Scheme::mono(param));
            TypePtr body = visit(subst, inner, lam->body);
            return TypeExpr::tarrow(subst.apply(param), body);
        }

        if (const auto* app = term->get_if<MLTerm::App>()) {
            TypePtr fn = visit(subst, env, app->fn);
            TypePtr arg = visit(subst, env, app->arg);
            TypePtr result = fresh_star();
            // Row-aware unification realizes argument-type equivalence
            // modulo row reordering.
            unify(subst, subst.apply(fn), TypeExpr::tarrow(arg, result), loc);
            return subst.apply(result);
        }

        if (const auto* let = term->get_if<MLTerm::Let>()) {
            TypePtr bound = visit(subst, env, let->bound);
            TypeEnv inner = env.applied(subst);
            Scheme scheme = generalize(inner, subst.apply(bound));
            inner.push(let->name, std::move(scheme));
            return visit(subst, inner, let->body);
        }

        if (const auto* rec = term->get_if<MLTerm::LetRec>()) {
            // Monomorphic while inferring its own body, generalized after.
            TypePtr self = fresh_star();
            TypeEnv inner = env;
            inner.push(rec->name, Scheme::mono(self));
            TypePtr bound = visit(subst, inner, rec->bound);
            unify(subst, subst.apply(self), bound, loc);
            TypeEnv outer = env.applied(subst);
            Scheme scheme = generalize(outer, subst.apply(self));
            outer.push(rec->name, std::move(scheme));
            return visit(subst, outer, rec->body);
        }

        if (term->get_if<MLTerm::IntLit>())
            return builtin("Int");
        if (term->get_if<MLTerm::StrLit>())
            return builtin("String");
        if (term->get_if<MLTerm::EmptyRec>())
            return TypeExpr::tapp(builtin("Rec"), TypeExpr::rempty());

        if (const auto* ext = term->get_if<MLTerm::Extend>()) {
            TypePtr record = visit(subst, env, ext->record);
            TypePtr value = visit(subst, env, ext->value);
            TypePtr row = fresh_row();
            unify(subst, subst.apply(record), TypeExpr::tapp(builtin("Rec"), row), loc);
            // No overwriting: extending with an already-present label is an
            // error (its dual, a missing label, arises from Select).
            for (const auto& [l, t] : row_parts(subst, row).fields) {
                if (l == ext->label)
                    throw InferError{InferError::Variant::TypeClash,
                                     "record already has label '" + l + "'", loc};
            }
            return TypeExpr::tapp(builtin("Rec"),
                                  TypeExpr::rext(ext->label, subst.apply(value),
                                                 subst.apply(row)));
        }

        const auto* sel = term->get_if<MLTerm::Select>();
        TypePtr record = visit(subst, env, sel->record);
        TypePtr field = fresh_star();
        TypePtr row = fresh_row();
        unify(subst, subst.apply(record),
              TypeExpr::tapp(builtin("Rec"), TypeExpr::rext(sel->label, field, row)), loc);
        return subst.apply(field);
    }
};

}  // namespace

std::pair<TypeSubst, TypePtr> infer(const KindEnv& kinds, const TypeEnv& env,
                                    const MLPtr& term, VarGen& gen) {
    Inferencer inf{kinds, gen};
    TypeSubst subst;
    TypePtr type = inf.visit(subst, env, term);
    type = subst.apply(type);

    // Stage check: the inferred type must kind-check to * under the
    // kind environment.
    try {
        Kind k = kind_of(kinds, type);
        if (!k.is_star())
            throw InferError{InferError::Variant::KindMismatch,
                             "inferred type has kind " + to_string(k) + ", expected *",
                             term->loc()};
    } catch (const KindError& e) {
        throw InferError{InferError::Variant::KindMismatch, e.message, term->loc()};
    }
    return {std::move(subst), std::move(type)};
}

namespace {

// a, b, ..., z, a1, b1, ...
std::string star_name(int n) {
    std::string name(1, static_cast<char>('a' + n % 26));
    if (n >= 26)
        name += std::to_string(n / 26);
    return name;
}

// r, r1, r2, ...
std::string row_name(int n) {
    return n == 0 ? "r" : "r" + std::to_string(n);
}

TypePtr rename_vars(const TypePtr& t, const std::map<VarId, TypePtr>& names) {
    if (t->is_tvar()) {
        auto it = names.find(t->as_tvar().id);
        return it == names.end() ? t : it->second;
    }
    if (t->is_tcon() || t->is_rempty())
        return t;
    if (t->is_tapp())
        return TypeExpr::tapp(rename_vars(t->as_tapp().fn, names),
                              rename_vars(t->as_tapp().arg, names));
    if (t->is_tarrow())
        return TypeExpr::tarrow(rename_vars(t->as_tarrow().from, names),
                                rename_vars(t->as_tarrow().to, names));
    const auto& ext = t->as_rext();
    return TypeExpr::rext(ext.label, rename_vars(ext.field, names),
                          rename_vars(ext.tail, names));
}

// Deep canonical form: every row spine sorted.
TypePtr canonicalize(const TypePtr& t) {
    if (t->is_tvar() || t->is_tcon() || t->is_rempty())
        return t;
    if (t->is_tapp())
        return TypeExpr::tapp(canonicalize(t->as_tapp().fn), canonicalize(t->as_tapp().arg));
    if (t->is_tarrow())
        return TypeExpr::tarrow(canonicalize(t->as_tarrow().from),
                                canonicalize(t->as_tarrow().to));
    TypeSubst empty;
    RowParts parts = row_parts(empty, t);
    std::stable_sort(parts.fields.begin(), parts.fields.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    TypePtr out = parts.tail;
    for (auto it = parts.fields.rbegin(); it != parts.fields.rend(); ++it)
        out = TypeExpr::rext(it->first, canonicalize(it->second), out);
    return out;
}

}  // namespace

std::string print_scheme(const Scheme& scheme) {
    TypePtr body = canonicalize(scheme.body);

    // Quantifier order and names follow first occurrence in the canonical
    // body.
    std::map<VarId, Kind> quantified;
    for (const auto& [id, kind] : scheme.quantified)
        quantified.emplace(id, kind);

    std::map<VarId, TypePtr> names;
    std::vector<std::pair<std::string, Kind>> binders;
    int stars = 0, rows = 0;
    for (const auto& v : type_vars(body)) {
        auto it = quantified.find(v.id);
        if (it == quantified.end() || names.count(v.id))
            continue;
        std::string name = it->second.is_row() ? row_name(rows++) : star_name(stars++);
        binders.emplace_back(name, it->second);
        names.emplace(v.id, TypeExpr::tvar(v.id, it->second, name));
    }

    std::ostringstream os;
    for (const auto& [name, kind] : binders) {
        os << "forall " << name;
        if (!kind.is_star())
            os << ":" << to_string(kind);
        os << ". ";
    }
    os << to_string(rename_vars(body, names));
    return os.str();
}

}  // namespace rowhorn
