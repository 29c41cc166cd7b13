#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rowhorn/type_expr.hpp"
#include "rowhorn/unify.hpp"
#include "support/oracles.hpp"

using namespace rowhorn;
using namespace rowhorn::testing;

namespace {

TypePtr t_int() { return TypeExpr::tcon("Int", Kind::star()); }
TypePtr t_bool() { return TypeExpr::tcon("Bool", Kind::star()); }
TypePtr t_string() { return TypeExpr::tcon("String", Kind::star()); }
TypePtr t_list() { return TypeExpr::tcon("List", Kind::arrow(Kind::star(), Kind::star())); }
TypePtr t_rec() { return TypeExpr::tcon("Rec", Kind::arrow(Kind::row(), Kind::star())); }

TypePtr row(std::vector<std::pair<Label, TypePtr>> fields, TypePtr tail = nullptr) {
    TypePtr out = tail ? std::move(tail) : TypeExpr::rempty();
    for (auto it = fields.rbegin(); it != fields.rend(); ++it)
        out = TypeExpr::rext(it->first, it->second, out);
    return out;
}

}  // namespace

TEST_CASE("kind grammar round trip") {
    for (const char* text : {"*", "row", "* -> *", "row -> *", "(* -> *) -> row -> *"})
        CHECK(to_string(parse_kind(text)) == text);
    CHECK_THROWS_AS(parse_kind("* ->"), std::invalid_argument);
    CHECK_THROWS_AS(parse_kind("rowx"), std::invalid_argument);
}

TEST_CASE("kind_of fixtures") {
    KindEnv env = KindEnv::builtins();

    CHECK(kind_of(env, TypeExpr::tapp(t_list(), t_int())).is_star());
    CHECK(kind_of(env, TypeExpr::tapp(t_rec(), row({{"name", t_string()}, {"age", t_int()}})))
              .is_star());
    CHECK(kind_of(env, TypeExpr::rempty()).is_row());

    // List List is ill-kinded: expected *, found * -> *.
    try {
        kind_of(env, TypeExpr::tapp(t_list(), t_list()));
        FAIL("expected a kind error");
    } catch (const KindError& e) {
        CHECK(e.tag == KindError::Tag::Mismatch);
        CHECK(e.message == "expected *, found * -> *");
    }

    CHECK_THROWS_AS(kind_of(env, TypeExpr::tcon("Unknown", Kind::star())), KindError);

    // Arrows classify terms: both sides must be *.
    CHECK(kind_of(env, TypeExpr::tarrow(t_int(), t_bool())).is_star());
    CHECK_THROWS_AS(kind_of(env, TypeExpr::tarrow(t_list(), t_int())), KindError);

    // Duplicate labels are rejected at the kind stage.
    CHECK_THROWS_AS(
        kind_of(env, row({{"x", t_int()}, {"x", t_bool()}})),
        KindError);
}

TEST_CASE("kind_of consults the variable side of the environment") {
    KindEnv env = KindEnv::builtins();
    VarGen gen;
    VarId v = gen.fresh();
    env.vars.emplace(v, Kind::row());
    // The environment entry wins over the intrinsic annotation.
    CHECK(kind_of(env, TypeExpr::tvar(v, Kind::star())).is_row());
    CHECK(kind_of(env, TypeExpr::tvar(gen.fresh(), Kind::star())).is_star());
}

TEST_CASE("row_normalize sorts labels and keeps the tail last") {
    VarGen gen;
    TypePtr r = row({{"name", t_string()}, {"age", t_int()}});
    CHECK(to_string(row_normalize(r)) == "{age : Int, name : String}");
    CHECK(to_string(row_normalize(TypeExpr::rempty())) == "{}");

    TypePtr rho = TypeExpr::tvar(gen.fresh(), Kind::row(), "r");
    TypePtr open = row({{"b", t_bool()}}, rho);
    CHECK(to_string(row_normalize(open)) == "{b : Bool | r}");

    // Idempotent and multiset-preserving.
    TypePtr once = row_normalize(r);
    CHECK(type_equal(row_normalize(once), once));
}

TEST_CASE("row_unify: permuted closed rows need no substitution") {
    VarGen gen;
    TypePtr r1 = row({{"name", t_string()}, {"age", t_int()}});
    TypePtr r2 = row({{"age", t_int()}, {"name", t_string()}});

    TypeSubst s1;
    REQUIRE(row_unify(s1, r1, r2, gen));
    CHECK(s1.empty());
    TypeSubst s2;
    REQUIRE(row_unify(s2, r2, r1, gen));
    CHECK(s2.empty());
}

TEST_CASE("row_unify: open tail instantiation to empty and extended rows") {
    VarGen gen;
    VarId rho = gen.fresh();
    auto open = [&] { return row({{"name", t_string()}}, TypeExpr::tvar(rho, Kind::row(), "p")); };

    SUBCASE("against {name:String} the tail becomes {}") {
        TypeSubst subst;
        REQUIRE(row_unify(subst, open(), row({{"name", t_string()}}), gen));
        REQUIRE(subst.contains(rho));
        CHECK(subst.lookup(rho)->is_rempty());
    }
    SUBCASE("against {name:String, age:Int} the tail becomes {age:Int}") {
        TypeSubst subst;
        REQUIRE(row_unify(subst, open(), row({{"name", t_string()}, {"age", t_int()}}), gen));
        REQUIRE(subst.contains(rho));
        CHECK(to_string(subst.lookup(rho)) == "{age : Int}");
    }
}

TEST_CASE("row_unify: two open rows meet in a fresh common tail") {
    VarGen gen;
    VarId rho1 = gen.fresh(), rho2 = gen.fresh();
    TypePtr r1 = row({{"a", t_int()}}, TypeExpr::tvar(rho1, Kind::row()));
    TypePtr r2 = row({{"b", t_bool()}}, TypeExpr::tvar(rho2, Kind::row()));

    TypeSubst subst;
    REQUIRE(row_unify(subst, r1, r2, gen));
    TypePtr a1 = row_normalize(subst.apply(r1));
    TypePtr a2 = row_normalize(subst.apply(r2));
    CHECK(type_equal(a1, a2));
    CHECK(to_string(a1).rfind("{a : Int, b : Bool | ", 0) == 0);
}

TEST_CASE("row_unify: closed rows with disjoint labels fail") {
    VarGen gen;
    TypeSubst subst;
    UnifyFailure why;
    CHECK_FALSE(row_unify(subst, row({{"a", t_int()}}), row({{"b", t_bool()}}), gen, &why));
    CHECK(why.tag == UnifyFailure::Tag::MissingLabel);
}

TEST_CASE("row_unify: same tail variable with different residues fails") {
    VarGen gen;
    TypePtr shared = TypeExpr::tvar(gen.fresh(), Kind::row());
    TypePtr r1 = row({{"a", t_int()}}, shared);
    TypePtr r2 = row({{"b", t_bool()}}, shared);
    TypeSubst subst;
    CHECK_FALSE(row_unify(subst, r1, r2, gen));
}

TEST_CASE("row_unify: row occurs check") {
    VarGen gen;
    TypePtr rho = TypeExpr::tvar(gen.fresh(), Kind::row());
    // {x:Int | p} vs {x:Int, y:Bool | p}: p would have to absorb itself.
    TypePtr r1 = row({{"x", t_int()}}, rho);
    TypePtr r2 = row({{"x", t_int()}, {"y", t_bool()}}, rho);
    TypeSubst subst;
    UnifyFailure why;
    CHECK_FALSE(row_unify(subst, r1, r2, gen, &why));
    CHECK(why.tag == UnifyFailure::Tag::RowOccurs);
}

TEST_CASE("type_unify fixtures") {
    VarGen gen;

    SUBCASE("a -> a against Int -> Int") {
        TypePtr a = TypeExpr::tvar(gen.fresh(), Kind::star(), "a");
        TypeSubst subst;
        REQUIRE(type_unify(subst, TypeExpr::tarrow(a, a), TypeExpr::tarrow(t_int(), t_int()), gen));
        CHECK(to_string(subst.apply(a)) == "Int");
    }
    SUBCASE("record instantiation through Rec") {
        VarId rho = gen.fresh();
        TypePtr open = TypeExpr::tapp(t_rec(), row({{"name", t_string()}},
                                                   TypeExpr::tvar(rho, Kind::row())));
        TypePtr closed = TypeExpr::tapp(t_rec(), row({{"age", t_int()}, {"name", t_string()}}));
        TypeSubst subst;
        REQUIRE(type_unify(subst, open, closed, gen));
        CHECK(to_string(subst.lookup(rho)) == "{age : Int}");
    }
    SUBCASE("occurs check: a against List a") {
        TypePtr a = TypeExpr::tvar(gen.fresh(), Kind::star(), "a");
        TypeSubst subst;
        UnifyFailure why;
        CHECK_FALSE(type_unify(subst, a, TypeExpr::tapp(t_list(), a), gen, &why));
        CHECK(why.tag == UnifyFailure::Tag::Occurs);
    }
    SUBCASE("constructor clash") {
        TypeSubst subst;
        UnifyFailure why;
        CHECK_FALSE(type_unify(subst, t_int(), t_bool(), gen, &why));
        CHECK(why.tag == UnifyFailure::Tag::Clash);
    }
    SUBCASE("kind precondition violation") {
        TypeSubst subst;
        UnifyFailure why;
        CHECK_FALSE(type_unify(subst, t_int(), TypeExpr::rempty(), gen, &why));
        CHECK(why.tag == UnifyFailure::Tag::KindMismatch);
    }
}

TEST_CASE("type_unify agrees with term unification on row-free types") {
    // Types built from constructors c0/c1 and variables map to terms with
    // the same shape; success and applied results must agree.
    VarGen gen;
    TypePtr a = TypeExpr::tvar(gen.fresh(), Kind::star(), "a");
    TypePtr b = TypeExpr::tvar(gen.fresh(), Kind::star(), "b");
    TermPtr ta = Term::var(a->as_tvar().id, "a");
    TermPtr tb = Term::var(b->as_tvar().id, "b");

    auto arrow_term = [](TermPtr l, TermPtr r) {
        return Term::app(Symbol{"arrow", 2}, {std::move(l), std::move(r)});
    };

    struct Case {
        TypePtr ty1, ty2;
        TermPtr tm1, tm2;
    };
    std::vector<Case> cases = {
        {TypeExpr::tarrow(a, a), TypeExpr::tarrow(t_int(), t_int()),
         arrow_term(ta, ta), arrow_term(Term::constant("Int"), Term::constant("Int"))},
        {TypeExpr::tarrow(a, b), TypeExpr::tarrow(b, a),
         arrow_term(ta, tb), arrow_term(tb, ta)},
        {TypeExpr::tapp(t_list(), a), TypeExpr::tapp(t_list(), t_bool()),
         Term::app(Symbol{"List", 1}, {ta}), Term::app(Symbol{"List", 1}, {Term::constant("Bool")})},
        {a, TypeExpr::tapp(t_list(), a),
         ta, Term::app(Symbol{"List", 1}, {ta})},
        {t_int(), t_bool(), Term::constant("Int"), Term::constant("Bool")},
    };
    for (const auto& c : cases) {
        TypeSubst ts;
        bool ty_ok = type_unify(ts, c.ty1, c.ty2, gen);
        auto tm = unify_finite(c.tm1, c.tm2);
        CHECK(ty_ok == tm.has_value());
    }
}

TEST_CASE("row property suite: 1000 random pairs") {
    VarGen gen;
    RowGen rows(20240817, gen);

    int successes = 0, failures = 0;
    for (int i = 0; i < 1000; ++i) {
        RowCase c1 = rows.random_row();
        RowCase c2 = rows.random_row();

        // Normalization preserves the field multiset, the tail and the kind.
        {
            TypeSubst empty;
            RowParts before = row_parts(empty, c1.row);
            RowParts after = row_parts(empty, row_normalize(c1.row));
            REQUIRE(before.fields.size() == after.fields.size());
            REQUIRE(type_equal(before.tail, after.tail));
            auto key = [](const std::pair<Label, TypePtr>& f) {
                return f.first + ":" + to_string(f.second);
            };
            std::multiset<std::string> b, a;
            for (const auto& f : before.fields)
                b.insert(key(f));
            for (const auto& f : after.fields)
                a.insert(key(f));
            REQUIRE(b == a);
            REQUIRE(kind_shallow(row_normalize(c1.row)).is_row());
        }

        TypeSubst subst;
        bool ok = row_unify(subst, c1.row, c2.row, gen);
        if (ok) {
            ++successes;
            TypePtr a1 = row_normalize(subst.apply(c1.row));
            TypePtr a2 = row_normalize(subst.apply(c2.row));
            REQUIRE(type_equal(a1, a2));
            // Kind preservation: every binding keeps its variable's kind.
            for (const auto& [v, t] : subst.entries()) {
                auto vars1 = type_vars(c1.row);
                auto vars2 = type_vars(c2.row);
                Kind expected = Kind::star();
                bool known = false;
                for (const auto& tv : vars1)
                    if (tv.id == v) {
                        expected = tv.kind;
                        known = true;
                    }
                for (const auto& tv : vars2)
                    if (tv.id == v) {
                        expected = tv.kind;
                        known = true;
                    }
                if (known)
                    REQUIRE(kind_shallow(t) == expected);
            }
        } else {
            ++failures;
        }

        // Permutation invariance: rotating r1's fields changes nothing
        // observable.
        TypeSubst subst2;
        bool ok2 = row_unify(subst2, RowGen::permuted(c1), c2.row, gen);
        REQUIRE(ok == ok2);
        if (ok && ok2) {
            TypePtr n1 = row_normalize(subst.apply(c1.row));
            TypePtr n2 = row_normalize(subst2.apply(c1.row));
            REQUIRE(type_variant(n1, n2));
        }
    }
    CHECK(successes > 100);
    CHECK(failures > 100);
}

TEST_CASE("row property suite: closed disjoint pairs always fail") {
    VarGen gen;
    RowGen rows(97, gen);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        RowCase c1 = rows.random_row(3, /*allow_open=*/false);
        RowCase c2 = rows.random_row(3, /*allow_open=*/false);
        bool disjoint = !c1.fields.empty() && !c2.fields.empty();
        for (const auto& [l1, t1] : c1.fields)
            for (const auto& [l2, t2] : c2.fields)
                if (l1 == l2)
                    disjoint = false;
        if (!disjoint)
            continue;
        ++checked;
        TypeSubst subst;
        CHECK_FALSE(row_unify(subst, c1.row, c2.row, gen));
    }
    CHECK(checked > 50);
}

TEST_CASE("row most generality vs ground enumeration on closed rows") {
    // Closed rows with <= 3 labels, fields Int/Bool/variables: every
    // ground unifier (variables ranging over {Int, Bool}) factors through
    // the computed unifier.
    VarGen gen;
    RowGen rows(4242, gen);
    std::vector<TypePtr> ground_types = {t_int(), t_bool()};

    int factoring_checks = 0;
    for (int i = 0; i < 1200; ++i) {
        RowCase c1 = rows.random_row(3, /*allow_open=*/false);
        RowCase c2 = rows.random_row(3, /*allow_open=*/false);

        TypeSubst subst;
        bool ok = row_unify(subst, c1.row, c2.row, gen);

        // Collect the variables of both rows.
        std::vector<VarId> vars;
        for (const auto& v : type_vars(c1.row))
            vars.push_back(v.id);
        for (const auto& v : type_vars(c2.row))
            if (std::find(vars.begin(), vars.end(), v.id) == vars.end())
                vars.push_back(v.id);

        TypeSubst theta;
        auto enumerate = [&](auto&& self, std::size_t k) -> void {
            if (k == vars.size()) {
                TypePtr g1 = row_normalize(theta.apply(c1.row));
                TypePtr g2 = row_normalize(theta.apply(c2.row));
                if (!type_equal(g1, g2))
                    return;
                ++factoring_checks;
                REQUIRE(ok);
                // theta factors through subst: some delta maps each
                // subst-image back to the ground instance, consistently.
                std::map<VarId, TypePtr> delta;
                for (VarId v : vars) {
                    TypePtr image = subst.apply(TypeExpr::tvar(v, Kind::star()));
                    TypePtr target = theta.apply(TypeExpr::tvar(v, Kind::star()));
                    if (image->is_tvar()) {
                        auto [it, fresh] = delta.emplace(image->as_tvar().id, target);
                        REQUIRE((fresh || type_equal(it->second, target)));
                    } else {
                        REQUIRE(type_equal(image, target));
                    }
                }
                return;
            }
            for (const auto& g : ground_types) {
                TypeSubst next = theta;
                next.bind(vars[k], g);
                std::swap(theta, next);
                self(self, k + 1);
                std::swap(theta, next);
            }
        };
        enumerate(enumerate, 0);
    }
    CHECK(factoring_checks > 30);
}
