#include "qspec/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace qspec {

struct Expression::Node {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
    Kind kind = Kind::Constant;
    Complex value{};
    std::string function;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr constant(Complex v) {
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
}

const std::vector<std::string_view>& known_functions() {
    static const std::vector<std::string_view> names = {
        "exp", "log", "sqrt", "sin", "cos", "tan", "sinh", "cosh", "tanh", "atan", "abs"};
    return names;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        NodePtr root = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::ConfigError, "expression '" + std::string(s_) + "' at offset " +
                                                std::to_string(pos_) + ": " + why);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Node::Kind::Add, lhs, term());
            else if (accept('-')) lhs = make(Node::Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Node::Kind::Mul, lhs, unary());
            else if (accept('/')) lhs = make(Node::Kind::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Node::Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) fail("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("bad number");
            pos_ += std::size_t(end - rest.c_str());
            return constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Node::Kind::Variable);
            if (name == "i") return constant({0.0, 1.0});
            if (name == "pi") return constant(std::numbers::pi);
            if (name == "e") return constant(std::numbers::e);
            for (std::string_view f : known_functions()) {
                if (f == name) {
                    if (!accept('(')) fail("expected '(' after " + std::string(name));
                    auto call = std::make_shared<Node>();
                    call->kind = Node::Kind::Call;
                    call->function = std::string(name);
                    call->lhs = expr();
                    if (!accept(')')) fail("missing ')'");
                    return call;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

Complex call(const std::string& f, Complex a) {
    if (f == "exp") return std::exp(a);
    if (f == "log") return std::log(a);
    if (f == "sqrt") return std::sqrt(a);
    if (f == "sin") return std::sin(a);
    if (f == "cos") return std::cos(a);
    if (f == "tan") return std::tan(a);
    if (f == "sinh") return std::sinh(a);
    if (f == "cosh") return std::cosh(a);
    if (f == "tanh") return std::tanh(a);
    if (f == "atan") return std::atan(a);
    return std::abs(a);  // abs
}

// Integer exponents use repeated multiplication so that real bases stay real.
Complex power_of(Complex base, Complex exponent) {
    if (exponent.imag() == 0.0 && exponent.real() == std::round(exponent.real()) &&
        std::abs(exponent.real()) <= 64.0) {
        const int k = int(exponent.real());
        Complex acc{1.0, 0.0};
        for (int n = 0; n < std::abs(k); ++n) acc *= base;
        return k >= 0 ? acc : Complex(1.0, 0.0) / acc;
    }
    if (base.imag() == 0.0 && base.real() >= 0.0 && exponent.imag() == 0.0) {
        return std::pow(base.real(), exponent.real());
    }
    return std::pow(base, exponent);
}

Complex evaluate(const Node& n, double x) {
    switch (n.kind) {
    case Node::Kind::Constant: return n.value;
    case Node::Kind::Variable: return x;
    case Node::Kind::Add: return evaluate(*n.lhs, x) + evaluate(*n.rhs, x);
    case Node::Kind::Sub: return evaluate(*n.lhs, x) - evaluate(*n.rhs, x);
    case Node::Kind::Mul: return evaluate(*n.lhs, x) * evaluate(*n.rhs, x);
    case Node::Kind::Div: return evaluate(*n.lhs, x) / evaluate(*n.rhs, x);
    case Node::Kind::Pow: return power_of(evaluate(*n.lhs, x), evaluate(*n.rhs, x));
    case Node::Kind::Neg: return -evaluate(*n.lhs, x);
    case Node::Kind::Call: return call(n.function, evaluate(*n.lhs, x));
    }
    return {};
}

} // namespace

Expression Expression::parse(std::string_view text) {
    return Expression(std::string(text), Parser(text).parse());
}

Complex Expression::operator()(double x) const { return evaluate(*root_, x); }

} // namespace qspec
