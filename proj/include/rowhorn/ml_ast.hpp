#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rowhorn/clause.hpp"  // SourceLoc
#include "rowhorn/parser.hpp"  // ParseError

namespace rowhorn {

class MLTerm;
using MLPtr = std::shared_ptr<const MLTerm>;

// Mini-ML surface AST. Record literals are desugared by the parser into
// nested Extend over EmptyRec.
class MLTerm {
public:
    struct Var {
        std::string name;
    };
    struct Lam {
        std::string param;
        MLPtr body;
    };
    struct App {
        MLPtr fn, arg;
    };
    struct Let {
        std::string name;
        MLPtr bound, body;
    };
    struct LetRec {
        std::string name;
        MLPtr bound, body;
    };
    struct IntLit {
        long value;
    };
    struct StrLit {
        std::string value;
    };
    struct EmptyRec {};
    struct Extend {
        MLPtr record;
        std::string label;
        MLPtr value;
    };
    struct Select {
        MLPtr record;
        std::string label;
    };

    using Node = std::variant<Var, Lam, App, Let, LetRec, IntLit, StrLit,
                              EmptyRec, Extend, Select>;

    MLTerm(Node node, SourceLoc loc) : node_(std::move(node)), loc_(loc) {}

    const Node& node() const { return node_; }
    SourceLoc loc() const { return loc_; }

    template <typename T>
    const T* get_if() const {
        return std::get_if<T>(&node_);
    }

    static MLPtr make(Node node, SourceLoc loc) {
        return std::make_shared<const MLTerm>(std::move(node), loc);
    }

private:
    Node node_;
    SourceLoc loc_;
};

// Surface grammar: `\x. e`; juxtaposition application (left-assoc);
// `let x = e in e`; `letrec f = e in e`; integer and string literals;
// `{}`; `{ l = e, ... }`; `{ e with l = e }`; `e.l`; parentheses;
// `--` comments. Throws ParseError.
MLPtr parse_ml(std::string_view text);

}  // namespace rowhorn
