#include "pullgraph/expression.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <variant>

namespace pullgraph {

namespace {

class Parser {
public:
    Parser(const AlgebraPtr& algebra, std::string_view text) : algebra_(algebra), text_(text) {}

    AlgebraElement parse() {
        auto value = sum();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return element(std::move(value));
    }

private:
    using Value = std::variant<Rational, AlgebraElement>;

    [[noreturn]] void fail(const std::string& why) const {
        throw ExpressionError("expression: " + why + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    AlgebraElement unit() const {
        AlgebraElement one(algebra_);
        for (std::size_t v = 0; v < algebra_->graph().vertex_count(); ++v) one += AlgebraElement::vertex(algebra_, v);
        return one;
    }

    AlgebraElement element(Value v) const {
        if (auto* e = std::get_if<AlgebraElement>(&v)) return std::move(*e);
        return unit() * std::get<Rational>(v);
    }

    Value add(Value a, Value b, bool subtract) const {
        if (subtract) b = negate(std::move(b));
        if (std::holds_alternative<Rational>(a) && std::holds_alternative<Rational>(b))
            return Rational(std::get<Rational>(a) + std::get<Rational>(b));
        return element(std::move(a)) + element(std::move(b));
    }

    static Value negate(Value v) {
        if (auto* r = std::get_if<Rational>(&v)) return Rational(-*r);
        return std::get<AlgebraElement>(v) * Rational(-1);
    }

    static Value times(Value a, Value b) {
        auto* ra = std::get_if<Rational>(&a);
        auto* rb = std::get_if<Rational>(&b);
        if (ra && rb) return Rational(*ra * *rb);
        if (ra) return std::get<AlgebraElement>(b) * *ra;
        if (rb) return std::get<AlgebraElement>(a) * *rb;
        return std::get<AlgebraElement>(a) * std::get<AlgebraElement>(b);
    }

    Value sum() {
        Value value = product();
        for (;;) {
            if (eat('+'))
                value = add(std::move(value), product(), false);
            else if (eat('-'))
                value = add(std::move(value), product(), true);
            else
                return value;
        }
    }

    bool starts_factor() {
        skip();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return c == '(' || c == 'P' || c == 'S' || std::isdigit(static_cast<unsigned char>(c));
    }

    Value product() {
        Value value = unary();
        for (;;) {
            if (eat('*'))
                value = times(std::move(value), unary());
            else if (starts_factor())
                value = times(std::move(value), unary());
            else
                return value;
        }
    }

    Value unary() {
        if (eat('-')) return negate(unary());
        if (eat('+')) return unary();
        return primary();
    }

    std::string argument() {
        if (!eat('(')) fail("expected '('");
        auto close = text_.find(')', pos_);
        if (close == std::string_view::npos) fail("missing ')'");
        std::string arg(text_.substr(pos_, close - pos_));
        pos_ = close + 1;
        while (!arg.empty() && std::isspace(static_cast<unsigned char>(arg.back()))) arg.pop_back();
        while (!arg.empty() && std::isspace(static_cast<unsigned char>(arg.front()))) arg.erase(arg.begin());
        if (arg.empty()) fail("empty argument");
        return arg;
    }

    Path path(const std::string& text) {
        try {
            return parse_path(algebra_->graph(), text);
        } catch (const GraphError& err) {
            fail(err.what());
        }
    }

    Value number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        if (pos_ < text_.size() && text_[pos_] == '/') {
            std::size_t den_start = ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == den_start) fail("missing denominator");
            std::string den(text_.substr(den_start, pos_ - den_start));
            if (mpz_class(den) == 0) fail("division by zero");
            Rational q{mpz_class(digits), mpz_class(den)};
            q.canonicalize();
            return q;
        }
        return Rational(mpz_class(digits));
    }

    Value primary() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (c == 'P') {
            ++pos_;
            auto id = argument();
            auto v = algebra_->graph().find_vertex(id);
            if (!v) fail("unknown vertex '" + id + "'");
            return AlgebraElement::vertex(algebra_, *v);
        }
        if (c == 'S') {
            ++pos_;
            bool starred = eat('*');
            auto p = path(argument());
            return starred ? AlgebraElement::edge_star(algebra_, p) : AlgebraElement::edge(algebra_, p);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    AlgebraPtr algebra_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

AlgebraElement parse_expression(const AlgebraPtr& algebra, std::string_view text) { return Parser(algebra, text).parse(); }

}  // namespace pullgraph
