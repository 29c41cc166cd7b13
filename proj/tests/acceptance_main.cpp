// Acceptance suite: end-to-end checks over the unifier, the resolution
// engine and the type checker, one pass/fail line per criterion. Exits
// nonzero if any fail.

#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "rowhorn/engine.hpp"
#include "rowhorn/infer.hpp"
#include "rowhorn/parser.hpp"
#include "rowhorn/unify.hpp"
#include "support/oracles.hpp"

using namespace rowhorn;
using namespace rowhorn::testing;

namespace {

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "    failed: " << what << "\n";
        }
    }
};

TypePtr t_int() { return TypeExpr::tcon("Int", Kind::star()); }
TypePtr t_string() { return TypeExpr::tcon("String", Kind::star()); }
TypePtr t_list() { return TypeExpr::tcon("List", Kind::arrow(Kind::star(), Kind::star())); }
TypePtr t_rec() { return TypeExpr::tcon("Rec", Kind::arrow(Kind::row(), Kind::star())); }

TypePtr row_of(std::vector<std::pair<Label, TypePtr>> fields, TypePtr tail = nullptr) {
    TypePtr out = tail ? std::move(tail) : TypeExpr::rempty();
    for (auto it = fields.rbegin(); it != fields.rend(); ++it)
        out = TypeExpr::rext(it->first, it->second, out);
    return out;
}

const char* kListNat =
    "nat(0). nat(s(X)) :- nat(X). list(nil). list(cons(X,Y)) :- nat(X), list(Y).";
const char* kGcEdges =
    "connected(X,X). connected(X,Y) :- edge(X,Z), connected(Z,Y). edge(a,b). edge(b,c).";

std::string binding_text(const Solution& sol, const std::vector<Atom>& goal) {
    std::string out;
    for (const auto& qv : goal_vars(goal)) {
        if (!sol.bindings.contains(qv->as_var().id))
            continue;
        if (!out.empty())
            out += ", ";
        out += qv->as_var().hint + " = " + print_term(qv, sol.bindings);
    }
    return out;
}

// 1. Row equivalence: unifying the two permutations succeeds with the
// empty substitution, in both argument orders.
void criterion_row_equivalence(Checker& c) {
    VarGen gen;
    TypePtr r1 = row_of({{"name", t_string()}, {"age", t_int()}});
    TypePtr r2 = row_of({{"age", t_int()}, {"name", t_string()}});
    TypeSubst s12, s21;
    c.expect(row_unify(s12, r1, r2, gen), "unify {name,age} with {age,name}");
    c.expect(s12.empty(), "substitution empty (order 1)");
    c.expect(row_unify(s21, r2, r1, gen), "unify {age,name} with {name,age}");
    c.expect(s21.empty(), "substitution empty (order 2)");
}

// 2. Row instantiation: the two instantiations of {name:String | p}.
void criterion_row_instantiation(Checker& c) {
    VarGen gen;
    VarId rho = gen.fresh();
    auto open = [&] {
        return row_of({{"name", t_string()}}, TypeExpr::tvar(rho, Kind::row()));
    };

    TypeSubst s1;
    c.expect(row_unify(s1, open(), row_of({{"name", t_string()}}), gen),
             "unify against {name:String}");
    c.expect(s1.contains(rho) && s1.lookup(rho)->is_rempty(), "rho binds to {}");

    TypeSubst s2;
    c.expect(row_unify(s2, open(), row_of({{"name", t_string()}, {"age", t_int()}}), gen),
             "unify against {name:String, age:Int}");
    c.expect(s2.contains(rho) && to_string(s2.lookup(rho)) == "{age : Int}",
             "rho binds to {age : Int}");
}

// 3. Kinding fixtures.
void criterion_kinding(Checker& c) {
    KindEnv env = KindEnv::builtins();
    c.expect(kind_of(env, TypeExpr::tapp(t_list(), t_int())).is_star(), "List Int : *");
    c.expect(kind_of(env, TypeExpr::tapp(t_rec(), row_of({{"name", t_string()},
                                                          {"age", t_int()}})))
                 .is_star(),
             "Rec {name:String, age:Int} : *");
    bool raised = false;
    try {
        kind_of(env, TypeExpr::tapp(t_list(), t_list()));
    } catch (const KindError& e) {
        raised = e.tag == KindError::Tag::Mismatch;
    }
    c.expect(raised, "List List raises KindMismatch");
}

// 4. Unifier property suite vs the brute-force oracle.
void criterion_unifier_properties(Checker& c) {
    VarGen gen;
    TermPtr x = Term::var(gen.fresh(), "X");
    TermPtr y = Term::var(gen.fresh(), "Y");
    std::vector<TermPtr> pool = enumerate_terms(2, {x, y});
    std::vector<TermPtr> ground = enumerate_ground(3);

    std::size_t pairs = 0, oracle_cases = 0, violations = 0;
    const std::size_t stride = 23;

    for (std::size_t i = 0; i < pool.size() && violations == 0; ++i) {
        for (std::size_t j = 0; j < pool.size() && violations == 0; ++j) {
            const TermPtr& t1 = pool[i];
            const TermPtr& t2 = pool[j];
            ++pairs;
            auto mgu = unify_finite(t1, t2);
            if (mgu) {
                if (!term_equal(mgu->apply(t1), mgu->apply(t2)))
                    ++violations;  // soundness
                if (!term_equal(mgu->apply(mgu->apply(t1)), mgu->apply(t1)))
                    ++violations;  // idempotence
            }
            if (pairs % stride != 0)
                continue;
            ++oracle_cases;
            std::vector<VarId> vars;
            for (VarId v : term_vars(t1))
                vars.push_back(v);
            for (VarId v : term_vars(t2))
                if (std::find(vars.begin(), vars.end(), v) == vars.end())
                    vars.push_back(v);
            std::map<VarId, TermPtr> theta;
            auto enumerate = [&](auto&& self, std::size_t k) -> void {
                if (k == vars.size()) {
                    TermPtr g1 = substitute_map(t1, theta);
                    TermPtr g2 = substitute_map(t2, theta);
                    if (!term_equal(g1, g2))
                        return;
                    if (!mgu) {
                        ++violations;  // oracle found a unifier, mgu absent
                        return;
                    }
                    std::map<VarId, TermPtr> matcher;
                    if (!match_ground(mgu->apply(t1), g1, matcher) ||
                        !match_ground(mgu->apply(t2), g2, matcher))
                        ++violations;  // theta does not factor through mgu
                    return;
                }
                for (const auto& g : ground) {
                    theta[vars[k]] = g;
                    self(self, k + 1);
                }
                theta.erase(vars[k]);
            };
            enumerate(enumerate, 0);
        }
    }
    c.expect(pairs >= 500, "at least 500 generated pairs, got " + std::to_string(pairs));
    c.expect(oracle_cases >= 500,
             "at least 500 oracle cases, got " + std::to_string(oracle_cases));
    c.expect(violations == 0, std::to_string(violations) + " property violations");
}

// 5. Row-unify property suite: 1000 random pairs.
void criterion_row_properties(Checker& c) {
    VarGen gen;
    RowGen rows(20240817, gen);
    int violations = 0, closed_disjoint = 0;
    for (int i = 0; i < 1000; ++i) {
        RowCase c1 = rows.random_row();
        RowCase c2 = rows.random_row();

        TypeSubst subst;
        bool ok = row_unify(subst, c1.row, c2.row, gen);
        if (ok) {
            TypePtr a1 = row_normalize(subst.apply(c1.row));
            TypePtr a2 = row_normalize(subst.apply(c2.row));
            if (!type_equal(a1, a2))
                ++violations;
        }

        TypeSubst subst2;
        bool ok2 = row_unify(subst2, RowGen::permuted(c1), c2.row, gen);
        if (ok != ok2)
            ++violations;
        if (ok && ok2 &&
            !type_variant(row_normalize(subst.apply(c1.row)),
                          row_normalize(subst2.apply(c1.row))))
            ++violations;

        bool disjoint = !c1.open && !c2.open && !c1.fields.empty() && !c2.fields.empty();
        for (const auto& [l1, t1] : c1.fields)
            for (const auto& [l2, t2] : c2.fields)
                if (l1 == l2)
                    disjoint = false;
        if (disjoint) {
            ++closed_disjoint;
            TypeSubst s;
            if (row_unify(s, c1.row, c2.row, gen))
                ++violations;
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " row property violations");
    c.expect(closed_disjoint > 20, "enough closed disjoint pairs, got " +
                                       std::to_string(closed_disjoint));
}

// 6. ListNat fixtures.
void criterion_listnat(Checker& c) {
    VarGen gen;
    Program program = parse_program(kListNat, gen);

    std::string t = "0";
    for (int k = 0; k <= 10; ++k) {
        auto goal = parse_goal("nat(" + t + ")", gen);
        auto sols = solve(program, goal, {}, gen).collect();
        c.expect(sols.size() == 1, "nat(s^" + std::to_string(k) + "(0)) succeeds once");
        t = "s(" + t + ")";
    }

    auto list_goal = parse_goal("list(cons(0, cons(s(0), nil)))", gen);
    c.expect(solve(program, list_goal, {}, gen).collect().size() == 1,
             "list(cons(0, cons(s(0), nil))) succeeds");

    EngineConfig config;
    config.max_solutions = 3;
    auto goal = parse_goal("nat(X)", gen);
    auto sols = solve(program, goal, config, gen).collect();
    c.expect(sols.size() == 3, "three enumerated answers");
    const char* expected[] = {"X = 0", "X = s(0)", "X = s(s(0))"};
    for (std::size_t i = 0; i < sols.size(); ++i)
        c.expect(binding_text(sols[i], goal) == expected[i],
                 std::string("answer ") + std::to_string(i) + " is " + expected[i]);
}

// 7. GC fixture.
void criterion_gc(Checker& c) {
    VarGen gen;
    Program program = parse_program(kGcEdges, gen);

    auto pos = parse_goal("connected(a,c)", gen);
    auto stream = solve(program, pos, {}, gen);
    auto sols = stream.collect();
    c.expect(sols.size() == 1, "connected(a,c) succeeds");
    c.expect(!sols.empty() && sols[0].bindings.empty(),
             "the existential variable does not leak into the answer");

    auto neg = parse_goal("connected(c,a)", gen);
    auto neg_stream = solve(program, neg, {}, gen);
    c.expect(neg_stream.collect().empty(), "connected(c,a) has no solutions");
    c.expect(!neg_stream.budget_exceeded(), "connected(c,a) fails finitely");
}

// 8. Coinductive fixtures.
void criterion_coinductive(Checker& c) {
    {
        VarGen gen;
        Program loop = parse_program("p :- p.", gen);
        auto goal = parse_goal("p", gen);
        EngineConfig ind;
        ind.depth_limit = 100;
        auto stream = solve(loop, goal, ind, gen);
        c.expect(stream.collect().empty(), "inductive p has no solutions");
        c.expect(stream.budget_exceeded(), "inductive p reports budget exceeded");

        EngineConfig coind;
        coind.mode = EngineConfig::Mode::Coinductive;
        coind.max_solutions = 1;
        auto sols = solve(loop, goal, coind, gen).collect();
        c.expect(sols.size() == 1 && sols[0].coinductive, "coinductive p succeeds");
    }
    {
        VarGen gen;
        Program zeros = parse_program("zeros(cons(z,X)) :- zeros(X).", gen);
        EngineConfig coind;
        coind.mode = EngineConfig::Mode::Coinductive;
        coind.max_solutions = 1;
        auto goal = parse_goal("zeros(S)", gen);
        auto sols = solve(zeros, goal, coind, gen).collect();
        c.expect(sols.size() == 1, "zeros(S) has a coinductive solution");
        if (!sols.empty()) {
            VarGen aux;
            TermPtr probe = Term::var(aux.fresh());
            for (int i = 0; i < 8; ++i)
                probe = Term::app(Symbol{"cons", 2}, {Term::constant("z"), probe});
            Substitution none;
            c.expect(equal_to_depth(goal_vars(goal)[0], sols[0].bindings, probe, none, 8),
                     "depth-8 unfolding is cons(z, cons(z, ...))");
        }
    }
    {
        VarGen gen;
        Program listnat = parse_program(kListNat, gen);
        EngineConfig coind;
        coind.mode = EngineConfig::Mode::Coinductive;
        coind.max_solutions = 4;
        auto goal = parse_goal("nat(X)", gen);
        auto sols = solve(listnat, goal, coind, gen).collect();
        VarGen aux;
        TermPtr probe = Term::var(aux.fresh());
        for (int i = 0; i < 8; ++i)
            probe = Term::app(Symbol{"s", 1}, {probe});
        Substitution none;
        bool found = false;
        for (const auto& sol : sols)
            if (sol.coinductive &&
                equal_to_depth(goal_vars(goal)[0], sol.bindings, probe, none, 8))
                found = true;
        c.expect(found, "coinductive nat(X) includes the rational answer x = s(x)");
    }
}

// 9. Occurs-check split.
void criterion_occurs_split(Checker& c) {
    VarGen gen;
    TermPtr x = Term::var(gen.fresh(), "X");
    TermPtr fx = Term::app(Symbol{"f", 1}, {x});
    c.expect(!unify_finite(x, fx), "unify_finite(x, f(x)) fails");

    auto subst = unify_rational(x, fx);
    c.expect(subst.has_value(), "unify_rational(x, f(x)) succeeds");
    if (subst) {
        VarGen aux;
        TermPtr probe = Term::var(aux.fresh());
        for (int i = 0; i < 5; ++i)
            probe = Term::app(Symbol{"f", 1}, {probe});
        Substitution none;
        c.expect(equal_to_depth(x, *subst, probe, none, 5),
                 "depth-5 unfolding matches f(f(f(f(f(.)))))");
    }
}

// 10. Inference fixtures, byte-exact.
void criterion_inference(Checker& c) {
    auto principal = [](const std::string& source) {
        KindEnv kinds = KindEnv::builtins();
        TypeEnv env;
        VarGen gen;
        auto [subst, type] = infer(kinds, env, parse_ml(source), gen);
        return print_scheme(generalize(env, type));
    };

    c.expect(principal("\\x. x") == "forall a. a -> a", "identity type");
    c.expect(principal("\\r. r.name") == "forall a. forall r:row. Rec {name : a | r} -> a",
             "selection type");
    c.expect(principal("let id = \\x. x in id id") == "forall a. a -> a",
             "let-polymorphic self application");
    c.expect(principal("{name = \"bob\", age = 3}") == "Rec {age : Int, name : String}",
             "record literal type");

    bool occurs = false;
    try {
        principal("\\f. f f");
    } catch (const InferError& e) {
        occurs = e.variant == InferError::Variant::OccursViolation;
    }
    c.expect(occurs, "\\f. f f fails with OccursViolation");

    bool missing = false;
    try {
        principal("(\\r. r.name) {age = 3}");
    } catch (const InferError& e) {
        missing = e.variant == InferError::Variant::MissingLabel;
    }
    c.expect(missing, "(\\r. r.name) {age = 3} fails with MissingLabel");
}

// 11. Inductive soundness/completeness against the bottom-up oracle.
void criterion_bottom_up(Checker& c) {
    {
        VarGen gen;
        Program program = parse_program(kListNat, gen);
        auto oracle = bottom_up_atoms(program, 4);
        auto universe = herbrand_universe(program, 4);
        for (const char* pred : {"nat", "list"}) {
            auto goal = parse_goal(std::string(pred) + "(X)", gen);
            EngineConfig config;
            config.depth_limit = 12;
            auto sols = solve(program, goal, config, gen).collect();
            std::set<std::string> engine_atoms;
            for (const auto& sol : sols) {
                auto inst = ground_instances(goal[0], sol.bindings, universe, 4);
                engine_atoms.insert(inst.begin(), inst.end());
            }
            std::set<std::string> oracle_atoms;
            for (const auto& a : oracle)
                if (a.rfind(std::string(pred) + "(", 0) == 0)
                    oracle_atoms.insert(a);
            c.expect(engine_atoms == oracle_atoms,
                     std::string("ListNat ") + pred + " answers match the oracle");
            c.expect(!oracle_atoms.empty(), std::string(pred) + " oracle set nonempty");
        }
    }
    {
        VarGen gen;
        Program program = parse_program(kGcEdges, gen);
        auto oracle = bottom_up_atoms(program, 4);
        auto universe = herbrand_universe(program, 4);
        for (const char* pred : {"connected", "edge"}) {
            auto goal = parse_goal(std::string(pred) + "(U,W)", gen);
            auto sols = solve(program, goal, {}, gen).collect();
            std::set<std::string> engine_atoms;
            for (const auto& sol : sols) {
                auto inst = ground_instances(goal[0], sol.bindings, universe, 4);
                engine_atoms.insert(inst.begin(), inst.end());
            }
            std::set<std::string> oracle_atoms;
            for (const auto& a : oracle)
                if (a.rfind(std::string(pred) + "(", 0) == 0)
                    oracle_atoms.insert(a);
            c.expect(engine_atoms == oracle_atoms,
                     std::string("GC ") + pred + " answers match the oracle");
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Checker&)> run;
    };
    std::vector<Criterion> criteria = {
        {"row equivalence fixture", criterion_row_equivalence},
        {"row instantiation fixtures", criterion_row_instantiation},
        {"kinding fixtures", criterion_kinding},
        {"unifier property suite vs brute-force oracle", criterion_unifier_properties},
        {"row-unify property suite (1000 random pairs)", criterion_row_properties},
        {"ListNat fixtures", criterion_listnat},
        {"GC fixture", criterion_gc},
        {"coinductive fixtures", criterion_coinductive},
        {"occurs-check split", criterion_occurs_split},
        {"inference fixtures (byte-exact)", criterion_inference},
        {"inductive soundness/completeness vs bottom-up oracle", criterion_bottom_up},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker checker;
        try {
            criteria[i].run(checker);
        } catch (const std::exception& e) {
            checker.ok = false;
            checker.detail << "    exception: " << e.what() << "\n";
        }
        std::cout << (checker.ok ? "[PASS] " : "[FAIL] ") << i + 1 << ". "
                  << criteria[i].name << "\n";
        if (!checker.ok) {
            ++failures;
            std::cerr << checker.detail.str();
        }
    }
    if (failures) {
        std::cout << failures << " of " << criteria.size() << " criteria failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed\n";
    return 0;
}
