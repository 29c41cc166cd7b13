#include "rowhorn/clause.hpp"

#include <sstream>

namespace rowhorn {

Program::Program(std::vector<HornClause> clauses) : clauses_(std::move(clauses)) {
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i)
        index_[clauses_[i].head.pred].push_back(i);
}

std::span<const int> Program::clauses_for(const Symbol& pred) const {
    auto it = index_.find(pred);
    if (it == index_.end())
        return {};
    return it->second;
}

namespace {

TermPtr rename_term(const TermPtr& t, std::map<VarId, TermPtr>& renaming, VarGen& gen) {
    if (t->is_var()) {
        const auto& v = t->as_var();
        auto it = renaming.find(v.id);
        if (it == renaming.end())
            it = renaming.emplace(v.id, Term::var(gen.fresh(), v.hint)).first;
        return it->second;
    }
    const auto& app = t->as_app();
    std::vector<TermPtr> args;
    args.reserve(app.args.size());
    for (const auto& a : app.args)
        args.push_back(rename_term(a, renaming, gen));
    return Term::app(app.sym, std::move(args));
}

Atom rename_atom(const Atom& atom, std::map<VarId, TermPtr>& renaming, VarGen& gen) {
    Atom out{atom.pred, {}};
    out.args.reserve(atom.args.size());
    for (const auto& a : atom.args)
        out.args.push_back(rename_term(a, renaming, gen));
    return out;
}

}  // namespace

HornClause rename_apart(const HornClause& clause, VarGen& gen) {
    std::map<VarId, TermPtr> renaming;
    HornClause out;
    out.head = rename_atom(clause.head, renaming, gen);
    out.body.reserve(clause.body.size());
    for (const auto& atom : clause.body)
        out.body.push_back(rename_atom(atom, renaming, gen));
    out.is_cofact = clause.is_cofact;
    out.source = clause.source;
    return out;
}

std::string to_string(const Atom& atom) {
    std::ostringstream os;
    os << atom.pred.name;
    if (!atom.args.empty()) {
        os << "(";
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            if (i)
                os << ",";
            os << to_string(atom.args[i]);
        }
        os << ")";
    }
    return os.str();
}

std::string to_string(const HornClause& clause) {
    std::ostringstream os;
    if (clause.is_cofact)
        os << "co ";
    os << to_string(clause.head);
    if (!clause.body.empty()) {
        os << " :- ";
        for (std::size_t i = 0; i < clause.body.size(); ++i) {
            if (i)
                os << ", ";
            os << to_string(clause.body[i]);
        }
    }
    os << ".";
    return os.str();
}

std::string to_string(const Program& program) {
    std::ostringstream os;
    for (const auto& clause : program.clauses())
        os << to_string(clause) << "\n";
    return os.str();
}

}  // namespace rowhorn
