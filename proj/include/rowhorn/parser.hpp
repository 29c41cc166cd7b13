#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rowhorn/clause.hpp"

namespace rowhorn {

struct ParseError : std::runtime_error {
    ParseError(std::string message, int line, int col, std::string expected)
        : std::runtime_error(std::move(message)), line(line), col(col),
          expected(std::move(expected)) {}

    int line;
    int col;
    std::string expected;
};

// Clause language: identifiers starting lowercase are symbols, uppercase
// (or `_`) variables; `f(t1,...,tn)` application; clauses end with `.`;
// `:-` separates head and body; `co` marks a co-fact; `%` comments.
// Variable scope is one clause (or one goal).
Program parse_program(std::string_view text, VarGen& gen);

// Comma-separated atoms; variable names shared across the whole goal.
std::vector<Atom> parse_goal(std::string_view text, VarGen& gen);

// A single term, same syntax as clause arguments. Used by tests and tools.
TermPtr parse_term(std::string_view text, VarGen& gen);

}  // namespace rowhorn
