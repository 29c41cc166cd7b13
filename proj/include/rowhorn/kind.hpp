#pragma once

#include <memory>
#include <string>

namespace rowhorn {

// Kind of a type-level expression: row, * (term-classifying types), or a
// constructor kind k1 -> k2. Small immutable value type.
class Kind {
public:
    static Kind star();
    static Kind row();
    static Kind arrow(Kind from, Kind to);

    bool is_star() const;
    bool is_row() const;
    bool is_arrow() const;
    const Kind& from() const;  // arrow kinds only
    const Kind& to() const;

    // Number of arguments a constructor of this kind expects.
    int arity() const;

    friend bool operator==(const Kind& a, const Kind& b);
    friend bool operator!=(const Kind& a, const Kind& b) { return !(a == b); }

private:
    enum class Tag { Star, Row, Arrow };
    struct ArrowNode;

    explicit Kind(Tag t) : tag_(t) {}
    Kind(Kind from, Kind to);

    Tag tag_;
    std::shared_ptr<const ArrowNode> arrow_;
};

struct Kind::ArrowNode {
    Kind from, to;
};

// `*`, `row`, `k1 -> k2` (right-associative, arrow operands parenthesized
// when themselves arrows on the left).
std::string to_string(const Kind& k);

// Parse the kind grammar used by the CLI's --declare flag.
// Throws std::invalid_argument on malformed input.
Kind parse_kind(const std::string& text);

}  // namespace rowhorn
