#include "rowhorn/engine.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

#include "rowhorn/unify.hpp"

namespace rowhorn {

namespace {

struct AncestorNode {
    Atom atom;
    int depth;  // branch step at which this ancestor was resolved
    std::shared_ptr<const AncestorNode> parent;
};
using AncestorList = std::shared_ptr<const AncestorNode>;

struct GoalItem {
    Atom atom;
    AncestorList ancestors;
};

// Reverse-chronological log of the steps along one branch; shared between
// frames so backtracking is cheap.
struct StepNode {
    Atom goal;
    RuleRef rule;
    int n_children;
    std::shared_ptr<const StepNode> prev;
};
using StepLog = std::shared_ptr<const StepNode>;

struct Alt {
    enum class Kind { Loop, Cofact, Clause };
    Kind kind;
    int clause_index = -1;
    const AncestorNode* ancestor = nullptr;
};

struct Frame {
    std::vector<GoalItem> goals;
    Substitution subst;
    int steps = 0;
    bool coind = false;
    StepLog log;
    std::vector<Alt> alts;
    std::size_t next_alt = 0;
};

bool unify_atoms(Substitution& subst, const Atom& a, const Atom& b, bool rational) {
    if (a.pred != b.pred)
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        bool ok = rational ? unify_rational_into(subst, a.args[i], b.args[i])
                           : unify_finite_into(subst, a.args[i], b.args[i]);
        if (!ok)
            return false;
    }
    return true;
}

std::shared_ptr<const DerivationNode> build_derivation(
    std::vector<const StepNode*>::const_iterator& it,
    std::vector<const StepNode*>::const_iterator end) {
    assert(it != end);
    const StepNode* s = *it++;
    auto node = std::make_shared<DerivationNode>();
    node->goal = s->goal;
    node->rule = s->rule;
    node->children.reserve(s->n_children);
    for (int i = 0; i < s->n_children; ++i)
        node->children.push_back(build_derivation(it, end));
    return node;
}

}  // namespace

struct SolutionStream::Impl {
    const Program& program;
    EngineConfig config;
    VarGen& gen;
    TraceSink sink;

    std::vector<TermPtr> query_vars;
    std::vector<Frame> stack;
    bool budget_hit = false;
    std::uint64_t emitted = 0;
    bool done = false;

    // Stable display names for the trace: query variables keep their
    // hints, everything else is named _A, _B, ... at first appearance.
    std::map<VarId, std::string> trace_names;
    int trace_name_counter = 0;

    Impl(const Program& p, std::vector<Atom> goal, EngineConfig cfg, VarGen& g, TraceSink s)
        : program(p), config(cfg), gen(g), sink(std::move(s)) {
        if (config.depth_limit < 1)
            throw std::invalid_argument("depth_limit must be >= 1");
        query_vars = goal_vars(goal);
        for (const auto& v : query_vars)
            trace_names[v->as_var().id] = v->as_var().hint.empty()
                                              ? "_" + std::to_string(v->as_var().id)
                                              : v->as_var().hint;
        Frame root;
        root.goals.reserve(goal.size());
        for (auto& atom : goal)
            root.goals.push_back(GoalItem{std::move(atom), nullptr});
        fill_alts(root);
        stack.push_back(std::move(root));
    }

    bool coinductive() const { return config.mode == EngineConfig::Mode::Coinductive; }

    void fill_alts(Frame& f) {
        f.alts.clear();
        f.next_alt = 0;
        if (f.goals.empty())
            return;
        const GoalItem& g = f.goals.front();
        if (coinductive()) {
            for (const AncestorNode* a = g.ancestors.get(); a; a = a->parent.get())
                if (a->atom.pred == g.atom.pred)
                    f.alts.push_back(Alt{Alt::Kind::Loop, -1, a});
            for (int idx : program.clauses_for(g.atom.pred))
                if (program.clauses()[idx].is_cofact)
                    f.alts.push_back(Alt{Alt::Kind::Cofact, idx, nullptr});
        }
        for (int idx : program.clauses_for(g.atom.pred))
            if (!program.clauses()[idx].is_cofact)
                f.alts.push_back(Alt{Alt::Kind::Clause, idx, nullptr});
    }

    std::string trace_name(const Term::Var& v) {
        auto it = trace_names.find(v.id);
        if (it != trace_names.end())
            return it->second;
        int n = trace_name_counter++;
        std::string name = "_";
        name += static_cast<char>('A' + n % 26);
        if (n >= 26)
            name += std::to_string(n / 26);
        trace_names.emplace(v.id, name);
        return name;
    }

    void print_traced(const TermPtr& t, std::ostream& os) {
        if (t->is_var()) {
            os << trace_name(t->as_var());
            return;
        }
        const auto& app = t->as_app();
        os << app.sym.name;
        if (!app.args.empty()) {
            os << "(";
            for (std::size_t i = 0; i < app.args.size(); ++i) {
                if (i)
                    os << ",";
                print_traced(app.args[i], os);
            }
            os << ")";
        }
    }

    void emit_trace(int step, const Atom& goal, const Substitution& subst, const RuleRef& rule) {
        if (!sink)
            return;
        std::ostringstream os;
        os << step << "  " << goal.pred.name;
        if (!goal.args.empty()) {
            os << "(";
            for (std::size_t i = 0; i < goal.args.size(); ++i) {
                if (i)
                    os << ",";
                print_traced(subst.apply(goal.args[i]), os);
            }
            os << ")";
        }
        os << "  ⊢ ";
        if (const auto* c = std::get_if<ClauseRule>(&rule))
            os << "clause#" << c->index + 1;
        else if (const auto* l = std::get_if<LoopRule>(&rule))
            os << "loop@depth " << l->ancestor_depth;
        else
            os << "cofact#" << std::get<CofactRule>(rule).index + 1;
        sink(os.str());
    }

    // Answer substitution restricted to the query variables. Acyclic
    // bindings are fully expanded; cycle variables stay as explicit graph
    // nodes (with their own entries) and are re-rooted onto a bisimilar
    // query variable where possible. Residual free variables are shown as
    // the first query variable of their class, or renamed _A, _B, ...
    Substitution restrict_to_query(const Substitution& subst) {
        // Cycle variables reachable from the query.
        std::set<VarId> cycle_vars;
        {
            std::set<VarId> on_path;
            for (const auto& qv : query_vars)
                find_cycles(qv, subst, on_path, cycle_vars);
        }

        std::map<VarId, TermPtr> free_rep;  // unbound var -> representative
        std::map<VarId, std::string> free_names;
        int free_counter = 0;

        auto representative = [&](const Term::Var& v) -> TermPtr {
            auto it = free_rep.find(v.id);
            if (it != free_rep.end())
                return it->second;
            auto nm = free_names.find(v.id);
            if (nm == free_names.end()) {
                int n = free_counter++;
                std::string name = "_";
                name += static_cast<char>('A' + n % 26);
                if (n >= 26)
                    name += std::to_string(n / 26);
                nm = free_names.emplace(v.id, std::move(name)).first;
            }
            return Term::var(v.id, nm->second);
        };

        // Expand a binding, inlining acyclic bound variables and keeping
        // cycle variables as nodes. A bound variable bisimilar to a cycle
        // node is merged into it instead of unfolding the cycle once more.
        auto expand = [&](const TermPtr& root) {
            auto rec = [&](auto&& self, const TermPtr& t) -> TermPtr {
                if (t->is_app()) {
                    const auto& app = t->as_app();
                    std::vector<TermPtr> args;
                    args.reserve(app.args.size());
                    for (const auto& a : app.args)
                        args.push_back(self(self, a));
                    return Term::app(app.sym, std::move(args));
                }
                const auto& v = t->as_var();
                if (cycle_vars.count(v.id))
                    return t;
                TermPtr bound = subst.lookup(v.id);
                if (!bound)
                    return representative(v);
                for (VarId w : cycle_vars)
                    if (rational_equal(subst, t, Term::var(w)))
                        return Term::var(w);
                return self(self, bound);
            };
            return rec(rec, root);
        };

        // First query variable of each unbound class becomes its
        // representative, before expansion hands out _A-style names.
        for (const auto& qv : query_vars) {
            TermPtr walked = subst.walk(qv);
            if (walked->is_var() && !cycle_vars.count(walked->as_var().id))
                free_rep.emplace(walked->as_var().id, qv);
        }

        // Raw entries for bound query variables.
        std::vector<std::pair<TermPtr, TermPtr>> entries;  // (query var, value)
        for (const auto& qv : query_vars) {
            TermPtr walked = subst.walk(qv);
            if (walked->is_var() && !cycle_vars.count(walked->as_var().id)) {
                TermPtr rep = free_rep.at(walked->as_var().id);
                if (rep->as_var().id != qv->as_var().id)
                    entries.emplace_back(qv, rep);
                continue;
            }
            entries.emplace_back(qv, expand(walked));
        }

        // Re-root cycles onto bisimilar query variables.
        std::map<VarId, TermPtr> rewrites;
        std::set<VarId> still_needed = cycle_vars;
        for (auto& [qv, value] : entries) {
            for (VarId w : term_vars(value)) {
                if (!cycle_vars.count(w) || rewrites.count(w))
                    continue;
                if (rational_equal(subst, qv, Term::var(w))) {
                    rewrites.emplace(w, qv);
                    still_needed.erase(w);
                }
            }
        }
        auto rewrite = [&](const TermPtr& t) {
            auto rec = [&](auto&& self, const TermPtr& u) -> TermPtr {
                if (u->is_var()) {
                    auto it = rewrites.find(u->as_var().id);
                    return it == rewrites.end() ? u : it->second;
                }
                const auto& app = u->as_app();
                std::vector<TermPtr> args;
                args.reserve(app.args.size());
                for (const auto& a : app.args)
                    args.push_back(self(self, a));
                return Term::app(app.sym, std::move(args));
            };
            return rec(rec, t);
        };

        Substitution out;
        for (auto& [qv, value] : entries)
            out.bind_raw(qv->as_var().id, rewrite(value));
        for (VarId w : still_needed) {
            TermPtr bound = subst.lookup(w);
            if (bound)
                out.bind_raw(w, rewrite(expand(bound)));
        }
        return out;
    }

    static void find_cycles(const TermPtr& t, const Substitution& subst,
                            std::set<VarId>& on_path, std::set<VarId>& cycles) {
        if (t->is_app()) {
            for (const auto& a : t->as_app().args)
                find_cycles(a, subst, on_path, cycles);
            return;
        }
        VarId v = t->as_var().id;
        if (on_path.count(v)) {
            cycles.insert(v);
            return;
        }
        TermPtr bound = subst.lookup(v);
        if (!bound)
            return;
        on_path.insert(v);
        find_cycles(bound, subst, on_path, cycles);
        on_path.erase(v);
    }

    Solution make_solution(const Frame& f) {
        Solution sol;
        sol.bindings = restrict_to_query(f.subst);
        sol.coinductive = f.coind;
        sol.steps = f.steps;
        if (config.trace && f.log) {
            std::vector<const StepNode*> steps;
            for (const StepNode* s = f.log.get(); s; s = s->prev.get())
                steps.push_back(s);
            std::reverse(steps.begin(), steps.end());
            auto it = steps.cbegin();
            sol.derivation = build_derivation(it, steps.cend());
        }
        return sol;
    }

    std::optional<Solution> next() {
        if (done)
            return std::nullopt;
        if (config.max_solutions && emitted >= *config.max_solutions) {
            done = true;
            return std::nullopt;
        }
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.goals.empty()) {
                Solution sol = make_solution(f);
                stack.pop_back();
                ++emitted;
                if (config.max_solutions && emitted >= *config.max_solutions)
                    done = true;
                return sol;
            }
            if (f.steps >= config.depth_limit) {
                budget_hit = true;
                stack.pop_back();
                continue;
            }
            if (f.next_alt >= f.alts.size()) {
                stack.pop_back();
                continue;
            }
            Alt alt = f.alts[f.next_alt++];
            try_alt(f, alt);
        }
        done = true;
        return std::nullopt;
    }

    // Attempt one alternative for the selected goal of frame f; pushes the
    // successor frame on success. f must stay valid (remaining alts).
    void try_alt(Frame& f, const Alt& alt) {
        const GoalItem& selected = f.goals.front();
        int step = f.steps + 1;
        Substitution subst = f.subst;

        RuleRef rule;
        std::vector<GoalItem> new_goals;
        bool coind = f.coind;

        switch (alt.kind) {
        case Alt::Kind::Loop: {
            if (!unify_atoms(subst, selected.atom, alt.ancestor->atom, /*rational=*/true))
                return;
            rule = LoopRule{alt.ancestor->depth};
            coind = true;
            break;
        }
        case Alt::Kind::Cofact: {
            HornClause renamed = rename_apart(program.clauses()[alt.clause_index], gen);
            if (!unify_atoms(subst, selected.atom, renamed.head, /*rational=*/true))
                return;
            rule = CofactRule{alt.clause_index};
            coind = true;
            break;
        }
        case Alt::Kind::Clause: {
            HornClause renamed = rename_apart(program.clauses()[alt.clause_index], gen);
            if (!unify_atoms(subst, selected.atom, renamed.head, coinductive()))
                return;
            rule = ClauseRule{alt.clause_index};
            auto ancestors = std::make_shared<const AncestorNode>(
                AncestorNode{selected.atom, step, selected.ancestors});
            new_goals.reserve(renamed.body.size());
            for (auto& atom : renamed.body)
                new_goals.push_back(GoalItem{std::move(atom), ancestors});
            break;
        }
        }

        emit_trace(step, selected.atom, f.subst, rule);

        Frame next;
        next.goals.reserve(new_goals.size() + f.goals.size() - 1);
        for (auto& g : new_goals)
            next.goals.push_back(std::move(g));
        next.goals.insert(next.goals.end(), f.goals.begin() + 1, f.goals.end());
        next.subst = std::move(subst);
        next.steps = step;
        next.coind = coind;
        if (config.trace)
            next.log = std::make_shared<const StepNode>(
                StepNode{selected.atom, rule, static_cast<int>(new_goals.size()), f.log});
        fill_alts(next);
        stack.push_back(std::move(next));
    }
};

SolutionStream::SolutionStream(const Program& program, std::vector<Atom> goal,
                               EngineConfig config, VarGen& gen, TraceSink sink)
    : impl_(std::make_unique<Impl>(program, std::move(goal), config, gen, std::move(sink))) {}

SolutionStream::~SolutionStream() = default;
SolutionStream::SolutionStream(SolutionStream&&) noexcept = default;
SolutionStream& SolutionStream::operator=(SolutionStream&&) noexcept = default;

std::optional<Solution> SolutionStream::next() { return impl_->next(); }
bool SolutionStream::budget_exceeded() const { return impl_->budget_hit; }

std::vector<Solution> SolutionStream::collect() {
    std::vector<Solution> out;
    while (auto sol = next())
        out.push_back(std::move(*sol));
    return out;
}

SolutionStream solve(const Program& program, std::vector<Atom> goal,
                     const EngineConfig& config, VarGen& gen, TraceSink sink) {
    return SolutionStream(program, std::move(goal), config, gen, std::move(sink));
}

SolutionStream solve_coinductive(const Program& program, std::vector<Atom> goal,
                                 EngineConfig config, VarGen& gen, TraceSink sink) {
    config.mode = EngineConfig::Mode::Coinductive;
    return SolutionStream(program, std::move(goal), config, gen, std::move(sink));
}

std::vector<TermPtr> goal_vars(const std::vector<Atom>& goal) {
    std::vector<TermPtr> out;
    std::set<VarId> seen;
    auto visit = [&](auto&& self, const TermPtr& t) -> void {
        if (t->is_var()) {
            if (seen.insert(t->as_var().id).second)
                out.push_back(t);
            return;
        }
        for (const auto& a : t->as_app().args)
            self(self, a);
    };
    for (const auto& atom : goal)
        for (const auto& arg : atom.args)
            visit(visit, arg);
    return out;
}

}  // namespace rowhorn
