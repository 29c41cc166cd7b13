#include "rowhorn/parser.hpp"

#include <cctype>

namespace rowhorn {

namespace {

class ClauseParser {
public:
    ClauseParser(std::string_view text, VarGen& gen) : text_(text), gen_(gen) {}

    Program parse_program() {
        std::vector<HornClause> clauses;
        skip_ws();
        while (!at_end()) {
            clauses.push_back(parse_clause());
            skip_ws();
        }
        return Program(std::move(clauses));
    }

    std::vector<Atom> parse_goal() {
        skip_ws();
        if (at_end())
            fail("atom");
        std::vector<Atom> atoms;
        atoms.push_back(parse_atom());
        skip_ws();
        while (!at_end() && peek() == ',') {
            get();
            skip_ws();
            atoms.push_back(parse_atom());
            skip_ws();
        }
        if (!at_end())
            fail("end of goal");
        return atoms;
    }

    TermPtr parse_single_term() {
        skip_ws();
        TermPtr t = parse_term();
        skip_ws();
        if (!at_end())
            fail("end of input");
        return t;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char get() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!at_end()) {
            char c = peek();
            if (c == '%') {
                while (!at_end() && peek() != '\n')
                    get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& expected) {
        std::string found = at_end() ? "end of input" : std::string("'") + peek() + "'";
        throw ParseError("syntax error: expected " + expected + ", found " + found +
                             " at " + std::to_string(line_) + ":" + std::to_string(col_),
                         line_, col_, expected);
    }

    void expect(char c, const std::string& what) {
        if (at_end() || peek() != c)
            fail(what);
        get();
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string parse_ident() {
        if (at_end() || !ident_start(peek()))
            fail("identifier");
        std::string name;
        while (!at_end() && ident_char(peek()))
            name.push_back(get());
        return name;
    }

    static bool is_variable_name(const std::string& name) {
        return std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_';
    }

    TermPtr variable(const std::string& name) {
        auto it = clause_vars_.find(name);
        if (it == clause_vars_.end())
            it = clause_vars_.emplace(name, Term::var(gen_.fresh(), name)).first;
        return it->second;
    }

    TermPtr parse_term() {
        skip_ws();
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            // Numerals are constant symbols.
            std::string digits;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                digits.push_back(get());
            return Term::constant(std::move(digits));
        }
        std::string name = parse_ident();
        if (is_variable_name(name))
            return variable(name);
        std::vector<TermPtr> args = parse_args();
        int arity = static_cast<int>(args.size());
        return Term::app(Symbol{name, arity}, std::move(args));
    }

    std::vector<TermPtr> parse_args() {
        skip_ws();
        std::vector<TermPtr> args;
        if (at_end() || peek() != '(')
            return args;
        get();
        skip_ws();
        args.push_back(parse_term());
        skip_ws();
        while (!at_end() && peek() == ',') {
            get();
            args.push_back(parse_term());
            skip_ws();
        }
        expect(')', "')'");
        return args;
    }

    Atom parse_atom() {
        skip_ws();
        std::string name = parse_ident();
        if (is_variable_name(name))
            fail("predicate symbol");
        std::vector<TermPtr> args = parse_args();
        return Atom{Symbol{name, static_cast<int>(args.size())}, std::move(args)};
    }

    HornClause parse_clause() {
        clause_vars_.clear();
        skip_ws();
        SourceLoc loc{line_, col_};

        // `co` marks a co-fact unless it is itself the head predicate
        // (i.e. followed by `(`, `.` or `:-`). One token of lookahead.
        bool cofact = false;
        std::size_t save_pos = pos_;
        int save_line = line_, save_col = col_;
        if (ident_start(peek())) {
            std::string first = parse_ident();
            skip_ws();
            if (first == "co" && !at_end() && ident_start(peek())) {
                cofact = true;
            } else {
                pos_ = save_pos;
                line_ = save_line;
                col_ = save_col;
            }
        }

        HornClause clause;
        clause.is_cofact = cofact;
        clause.source = loc;
        clause.head = parse_atom();
        skip_ws();
        if (!at_end() && peek() == ':') {
            if (cofact)
                fail("'.' (a co-fact must be a unit clause)");
            get();
            expect('-', "':-'");
            clause.body.push_back(parse_atom());
            skip_ws();
            while (!at_end() && peek() == ',') {
                get();
                clause.body.push_back(parse_atom());
                skip_ws();
            }
        }
        expect('.', "'.'");
        return clause;
    }

    std::string_view text_;
    VarGen& gen_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::map<std::string, TermPtr> clause_vars_;
};

}  // namespace

Program parse_program(std::string_view text, VarGen& gen) {
    return ClauseParser(text, gen).parse_program();
}

std::vector<Atom> parse_goal(std::string_view text, VarGen& gen) {
    return ClauseParser(text, gen).parse_goal();
}

TermPtr parse_term(std::string_view text, VarGen& gen) {
    return ClauseParser(text, gen).parse_single_term();
}

}  // namespace rowhorn
