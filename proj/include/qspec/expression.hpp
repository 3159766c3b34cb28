#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "qspec/linalg.hpp"

namespace qspec {

/// Scalar function of one real variable x, parsed from text such as
/// "exp(2*0.5*x)" or "1/(1+x^2)". Arithmetic is complex; the constant `i`
/// is the imaginary unit. Functions: exp log sqrt sin cos tan sinh cosh tanh
/// atan abs.
class Expression {
public:
    static Expression parse(std::string_view text);

    Complex operator()(double x) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    Expression(std::string text, std::shared_ptr<const Node> root)
        : text_(std::move(text)), root_(std::move(root)) {}

    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace qspec
