#include "rowhorn/kind.hpp"

#include <cctype>
#include <stdexcept>

namespace rowhorn {

Kind Kind::star() { return Kind(Tag::Star); }
Kind Kind::row() { return Kind(Tag::Row); }

Kind::Kind(Kind from, Kind to) : tag_(Tag::Arrow) {
    arrow_ = std::make_shared<const ArrowNode>(ArrowNode{std::move(from), std::move(to)});
}

Kind Kind::arrow(Kind from, Kind to) { return Kind(std::move(from), std::move(to)); }

bool Kind::is_star() const { return tag_ == Tag::Star; }
bool Kind::is_row() const { return tag_ == Tag::Row; }
bool Kind::is_arrow() const { return tag_ == Tag::Arrow; }

const Kind& Kind::from() const { return arrow_->from; }
const Kind& Kind::to() const { return arrow_->to; }

int Kind::arity() const {
    int n = 0;
    const Kind* k = this;
    while (k->is_arrow()) {
        ++n;
        k = &k->to();
    }
    return n;
}

bool operator==(const Kind& a, const Kind& b) {
    if (a.tag_ != b.tag_)
        return false;
    if (a.tag_ != Kind::Tag::Arrow)
        return true;
    return a.from() == b.from() && a.to() == b.to();
}

std::string to_string(const Kind& k) {
    if (k.is_star())
        return "*";
    if (k.is_row())
        return "row";
    std::string lhs = to_string(k.from());
    if (k.from().is_arrow())
        lhs = "(" + lhs + ")";
    return lhs + " -> " + to_string(k.to());
}

namespace {

struct KindParser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    [[noreturn]] void fail() {
        throw std::invalid_argument("malformed kind: '" + text + "'");
    }

    Kind parse_atom() {
        skip_ws();
        if (pos >= text.size())
            fail();
        if (text[pos] == '*') {
            ++pos;
            return Kind::star();
        }
        if (text.compare(pos, 3, "row") == 0) {
            pos += 3;
            return Kind::row();
        }
        if (text[pos] == '(') {
            ++pos;
            Kind k = parse_kind();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')')
                fail();
            ++pos;
            return k;
        }
        fail();
    }

    Kind parse_kind() {
        Kind lhs = parse_atom();
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
            pos += 2;
            return Kind::arrow(std::move(lhs), parse_kind());
        }
        return lhs;
    }
};

}  // namespace

Kind parse_kind(const std::string& text) {
    KindParser p{text};
    Kind k = p.parse_kind();
    p.skip_ws();
    if (p.pos != text.size())
        p.fail();
    return k;
}

}  // namespace rowhorn
