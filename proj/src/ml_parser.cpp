#include "rowhorn/ml_ast.hpp"

#include <cctype>
#include <set>

namespace rowhorn {

namespace {

bool is_keyword(const std::string& s) {
    return s == "let" || s == "letrec" || s == "in" || s == "with";
}

class MLParser {
public:
    explicit MLParser(std::string_view text) : text_(text) {}

    MLPtr parse() {
        skip_ws();
        MLPtr e = parse_expr();
        skip_ws();
        if (!at_end())
            fail("end of input");
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

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
            if (peek() == '-' && peek(1) == '-') {
                while (!at_end() && peek() != '\n')
                    get();
            } else if (std::isspace(static_cast<unsigned char>(peek()))) {
                get();
            } else {
                break;
            }
        }
    }

    SourceLoc here() const { return SourceLoc{line_, col_}; }

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
        skip_ws();
        if (at_end() || !ident_start(peek()))
            fail("identifier");
        std::string name;
        while (!at_end() && ident_char(peek()))
            name.push_back(get());
        return name;
    }

    // Next token is this identifier (not a prefix of a longer one).
    bool lookahead_word(const char* word) const {
        std::size_t n = std::string_view(word).size();
        if (text_.compare(pos_, n, word) != 0)
            return false;
        return pos_ + n >= text_.size() || !ident_char(text_[pos_ + n]);
    }

    MLPtr parse_expr() {
        skip_ws();
        SourceLoc loc = here();
        if (peek() == '\\') {
            get();
            std::string param = parse_ident();
            if (is_keyword(param))
                fail("parameter name");
            skip_ws();
            expect('.', "'.'");
            MLPtr body = parse_expr();
            return MLTerm::make(MLTerm::Lam{std::move(param), std::move(body)}, loc);
        }
        if (lookahead_word("let"))
            return parse_let(loc, /*rec=*/false);
        if (lookahead_word("letrec"))
            return parse_let(loc, /*rec=*/true);
        return parse_app();
    }

    MLPtr parse_let(SourceLoc loc, bool rec) {
        for (int i = 0; i < (rec ? 6 : 3); ++i)
            get();
        std::string name = parse_ident();
        if (is_keyword(name))
            fail("binding name");
        skip_ws();
        expect('=', "'='");
        MLPtr bound = parse_expr();
        skip_ws();
        if (!lookahead_word("in"))
            fail("'in'");
        get();
        get();
        MLPtr body = parse_expr();
        if (rec)
            return MLTerm::make(MLTerm::LetRec{std::move(name), std::move(bound), std::move(body)}, loc);
        return MLTerm::make(MLTerm::Let{std::move(name), std::move(bound), std::move(body)}, loc);
    }

    MLPtr parse_app() {
        skip_ws();
        MLPtr fn = parse_postfix();
        while (true) {
            skip_ws();
            if (at_end())
                break;
            char c = peek();
            bool starts_atom = ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
                               c == '(' || c == '{' || c == '"';
            if (!starts_atom)
                break;
            if (ident_start(c) && (lookahead_word("in") || lookahead_word("with")))
                break;
            MLPtr arg = parse_postfix();
            SourceLoc loc = fn->loc();
            fn = MLTerm::make(MLTerm::App{std::move(fn), std::move(arg)}, loc);
        }
        return fn;
    }

    MLPtr parse_postfix() {
        MLPtr e = parse_atom();
        while (true) {
            skip_ws();
            if (at_end() || peek() != '.')
                break;
            SourceLoc loc = here();
            get();
            std::string label = parse_ident();
            e = MLTerm::make(MLTerm::Select{std::move(e), std::move(label)}, loc);
        }
        return e;
    }

    MLPtr parse_atom() {
        skip_ws();
        SourceLoc loc = here();
        if (at_end())
            fail("expression");
        char c = peek();
        if (c == '(') {
            get();
            MLPtr e = parse_expr();
            skip_ws();
            expect(')', "')'");
            // The parenthesized expression reports from the '('.
            return MLTerm::make(e->node(), loc);
        }
        if (c == '{')
            return parse_record(loc);
        if (c == '"')
            return parse_string(loc);
        if (std::isdigit(static_cast<unsigned char>(c)))
            return parse_int(loc);
        if (ident_start(c)) {
            std::string name = parse_ident();
            if (is_keyword(name))
                fail("expression");
            return MLTerm::make(MLTerm::Var{std::move(name)}, loc);
        }
        fail("expression");
    }

    MLPtr parse_int(SourceLoc loc) {
        std::string digits;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            digits.push_back(get());
        try {
            return MLTerm::make(MLTerm::IntLit{std::stol(digits)}, loc);
        } catch (const std::out_of_range&) {
            throw ParseError("syntax error: integer literal out of range at " +
                                 std::to_string(loc.line) + ":" + std::to_string(loc.col),
                             loc.line, loc.col, "integer literal");
        }
    }

    MLPtr parse_string(SourceLoc loc) {
        get();  // opening quote
        std::string value;
        while (!at_end() && peek() != '"' && peek() != '\n')
            value.push_back(get());
        expect('"', "closing '\"'");
        return MLTerm::make(MLTerm::StrLit{std::move(value)}, loc);
    }

    // `{}`, `{l = e, ...}` (desugared via Extend over EmptyRec, leftmost
    // label innermost), or `{e with l = e}`.
    MLPtr parse_record(SourceLoc loc) {
        get();  // '{'
        skip_ws();
        if (peek() == '}') {
            get();
            return MLTerm::make(MLTerm::EmptyRec{}, loc);
        }

        // Literal iff an identifier is directly followed by '='.
        bool literal = false;
        if (ident_start(peek())) {
            std::size_t save = pos_;
            std::string first;
            while (save < text_.size() && ident_char(text_[save]))
                first.push_back(text_[save++]);
            while (save < text_.size() && std::isspace(static_cast<unsigned char>(text_[save])))
                ++save;
            literal = !is_keyword(first) && save < text_.size() && text_[save] == '=';
        }

        if (!literal) {
            MLPtr record = parse_expr();
            skip_ws();
            if (!lookahead_word("with"))
                fail("'with'");
            for (int i = 0; i < 4; ++i)
                get();
            SourceLoc eloc = here();
            std::string label = parse_ident();
            skip_ws();
            expect('=', "'='");
            MLPtr value = parse_expr();
            skip_ws();
            expect('}', "'}'");
            return MLTerm::make(
                MLTerm::Extend{std::move(record), std::move(label), std::move(value)}, eloc);
        }

        MLPtr acc = MLTerm::make(MLTerm::EmptyRec{}, loc);
        std::set<std::string> labels;
        while (true) {
            skip_ws();
            SourceLoc floc = here();
            std::string label = parse_ident();
            if (!labels.insert(label).second)
                throw ParseError("syntax error: duplicate label '" + label + "' at " +
                                     std::to_string(floc.line) + ":" + std::to_string(floc.col),
                                 floc.line, floc.col, "distinct label");
            skip_ws();
            expect('=', "'='");
            MLPtr value = parse_expr();
            acc = MLTerm::make(MLTerm::Extend{std::move(acc), std::move(label), std::move(value)},
                               floc);
            skip_ws();
            if (peek() == ',') {
                get();
                continue;
            }
            expect('}', "'}' or ','");
            return acc;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

MLPtr parse_ml(std::string_view text) {
    return MLParser(text).parse();
}

}  // namespace rowhorn
