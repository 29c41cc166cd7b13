#include "rowhorn/term.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace rowhorn {

TermPtr Term::var(VarId id, std::string hint) {
    return TermPtr(new Term(Var{id, std::move(hint)}));
}

TermPtr Term::app(Symbol sym, std::vector<TermPtr> args) {
    if (static_cast<std::size_t>(sym.arity) != args.size())
        throw std::invalid_argument("arity mismatch constructing " + sym.name);
    return TermPtr(new Term(App{std::move(sym), std::move(args)}));
}

TermPtr Term::constant(std::string name) {
    return app(Symbol{std::move(name), 0}, {});
}

TermPtr Substitution::lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : it->second;
}

namespace {

// t with every occurrence of v replaced by r.
TermPtr replace_var(const TermPtr& t, VarId v, const TermPtr& r) {
    if (t->is_var())
        return t->as_var().id == v ? r : t;
    const auto& app = t->as_app();
    bool changed = false;
    std::vector<TermPtr> args;
    args.reserve(app.args.size());
    for (const auto& a : app.args) {
        TermPtr a2 = replace_var(a, v, r);
        changed = changed || a2 != a;
        args.push_back(std::move(a2));
    }
    return changed ? Term::app(app.sym, std::move(args)) : t;
}

bool occurs_in(VarId v, const TermPtr& t) {
    if (t->is_var())
        return t->as_var().id == v;
    for (const auto& a : t->as_app().args)
        if (occurs_in(v, a))
            return true;
    return false;
}

}  // namespace

void Substitution::bind_normalized(VarId v, TermPtr t) {
    assert(!occurs_in(v, t));
    for (auto& [w, s] : map_)
        s = replace_var(s, v, t);
    map_[v] = std::move(t);
}

void Substitution::bind_raw(VarId v, TermPtr t) {
    map_[v] = std::move(t);
}

TermPtr Substitution::walk(TermPtr t) const {
    while (t->is_var()) {
        TermPtr next = lookup(t->as_var().id);
        if (!next)
            return t;
        t = std::move(next);
    }
    return t;
}

TermPtr Substitution::apply(TermPtr t) const {
    std::set<VarId> expanding;
    return apply_rec(t, expanding);
}

TermPtr Substitution::apply_rec(const TermPtr& t, std::set<VarId>& expanding) const {
    if (t->is_var()) {
        VarId v = t->as_var().id;
        TermPtr bound = lookup(v);
        if (!bound || expanding.count(v))
            return t;
        expanding.insert(v);
        TermPtr result = apply_rec(bound, expanding);
        expanding.erase(v);
        return result;
    }
    const auto& app = t->as_app();
    bool changed = false;
    std::vector<TermPtr> args;
    args.reserve(app.args.size());
    for (const auto& a : app.args) {
        TermPtr a2 = apply_rec(a, expanding);
        changed = changed || a2 != a;
        args.push_back(std::move(a2));
    }
    return changed ? Term::app(app.sym, std::move(args)) : t;
}

namespace {

void collect_vars(const TermPtr& t, std::vector<VarId>& out, std::set<VarId>& seen) {
    if (t->is_var()) {
        if (seen.insert(t->as_var().id).second)
            out.push_back(t->as_var().id);
        return;
    }
    for (const auto& a : t->as_app().args)
        collect_vars(a, out, seen);
}

}  // namespace

std::vector<VarId> term_vars(const TermPtr& t) {
    std::vector<VarId> out;
    std::set<VarId> seen;
    collect_vars(t, out, seen);
    return out;
}

namespace {

void print_plain(const TermPtr& t, std::ostream& os) {
    if (t->is_var()) {
        const auto& v = t->as_var();
        if (v.hint.empty())
            os << "_" << v.id;
        else
            os << v.hint;
        return;
    }
    const auto& app = t->as_app();
    os << app.sym.name;
    if (!app.args.empty()) {
        os << "(";
        for (std::size_t i = 0; i < app.args.size(); ++i) {
            if (i)
                os << ",";
            print_plain(app.args[i], os);
        }
        os << ")";
    }
}

struct MuPrinter {
    const Substitution& subst;
    std::set<VarId> cycle_vars;
    std::map<VarId, std::string> active;  // mu name while in scope
    int next_name = 0;

    // Variables whose binding can reach themselves: these become mu nodes.
    void scan(const TermPtr& t, std::set<VarId>& on_path) {
        if (t->is_app()) {
            for (const auto& a : t->as_app().args)
                scan(a, on_path);
            return;
        }
        VarId v = t->as_var().id;
        if (on_path.count(v)) {
            cycle_vars.insert(v);
            return;
        }
        TermPtr bound = subst.lookup(v);
        if (!bound)
            return;
        on_path.insert(v);
        scan(bound, on_path);
        on_path.erase(v);
    }

    std::string fresh_name() {
        int n = next_name++;
        return n == 0 ? "V" : "V" + std::to_string(n);
    }

    void print(const TermPtr& t, std::ostream& os) {
        if (t->is_app()) {
            const auto& app = t->as_app();
            os << app.sym.name;
            if (!app.args.empty()) {
                os << "(";
                for (std::size_t i = 0; i < app.args.size(); ++i) {
                    if (i)
                        os << ",";
                    print(app.args[i], os);
                }
                os << ")";
            }
            return;
        }
        VarId v = t->as_var().id;
        if (auto it = active.find(v); it != active.end()) {
            os << it->second;
            return;
        }
        TermPtr bound = subst.lookup(v);
        if (!bound) {
            const auto& var = t->as_var();
            if (var.hint.empty())
                os << "_" << var.id;
            else
                os << var.hint;
            return;
        }
        if (cycle_vars.count(v)) {
            std::string name = fresh_name();
            active[v] = name;
            os << "mu " << name << ". ";
            print(bound, os);
            active.erase(v);
            return;
        }
        print(bound, os);
    }
};

}  // namespace

std::string to_string(const TermPtr& t) {
    std::ostringstream os;
    print_plain(t, os);
    return os.str();
}

std::string print_term(const TermPtr& t, const Substitution& subst) {
    MuPrinter p{subst, {}, {}, 0};
    std::set<VarId> on_path;
    p.scan(t, on_path);
    std::ostringstream os;
    p.print(t, os);
    return os.str();
}

}  // namespace rowhorn
