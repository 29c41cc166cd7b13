#pragma once

#include <span>
#include <string>
#include <vector>

#include "rowhorn/term.hpp"

namespace rowhorn {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

struct Atom {
    Symbol pred;
    std::vector<TermPtr> args;
};

// Head plus ordered body; a co-fact is a unit clause carrying the marker.
struct HornClause {
    Atom head;
    std::vector<Atom> body;
    bool is_cofact = false;
    SourceLoc source;
};

// Immutable, index-by-head-predicate clause collection. Clause order is
// source order and significant (it is the trial order).
class Program {
public:
    Program() = default;
    explicit Program(std::vector<HornClause> clauses);

    const std::vector<HornClause>& clauses() const { return clauses_; }
    // Positions of the clauses whose head has this predicate, source order.
    std::span<const int> clauses_for(const Symbol& pred) const;

private:
    std::vector<HornClause> clauses_;
    std::map<Symbol, std::vector<int>> index_;
};

// Variant of the clause with variables fresh w.r.t. the counter; sharing
// pattern and structure preserved, display hints kept for printing.
HornClause rename_apart(const HornClause& clause, VarGen& gen);

std::string to_string(const Atom& atom);
std::string to_string(const HornClause& clause);
std::string to_string(const Program& program);

}  // namespace rowhorn
