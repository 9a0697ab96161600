#pragma once

// Small arithmetic expression language for scalar fields of the base point
// (x1, x2). Grammar (whitespace ignored):
//
//   expr    := term  (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := atom ['^' factor]                  (right associative)
//   atom    := number | 'x1' | 'x2' | 'pi' | 'e'
//            | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt | atan
//
// '^' binds tighter than unary minus: -x1^2 parses as -(x1^2). A '^' whose
// exponent is a constant integer works for any base; a non-integer exponent
// requires a positive base at evaluation time.

#include <memory>
#include <string>

#include "finsler/jet.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

enum class UnaryFn { Neg, Sin, Cos, Exp, Log, Sqrt, Atan };
enum class BinaryFn { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Number, Variable, Unary, Binary } kind;
    double number = 0.0;
    int variable = 0; // 0 -> x1, 1 -> x2
    UnaryFn ufn = UnaryFn::Neg;
    BinaryFn bfn = BinaryFn::Add;
    NodePtr lhs, rhs;
};

class Expression {
public:
    Expression() = default;

    // Throws SyntaxError / UnknownIdentifier.
    static Expression parse(const std::string& text);

    // programmatic constructors (used when expanding polynomial data into fields)
    static Expression number(double v);
    static Expression variable(int i);
    static Expression unary(UnaryFn f, Expression a);
    static Expression binary(BinaryFn f, Expression a, Expression b);

    bool empty() const { return root_ == nullptr; }

    // Jet evaluation at (x1, x2); x-variables are seeded active when the
    // space carries x-orders, y-variables never appear.
    Jet eval(const JetSpace& space, const Vec2& point) const;

    // plain scalar evaluation (same domain rules, no derivatives)
    double eval_value(const Vec2& point) const;

    std::string print() const;

    // structural equality (numbers compared exactly)
    friend bool operator==(const Expression& a, const Expression& b);

private:
    explicit Expression(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

// A named scalar field of the base point, evaluated through jets. The default
// constructed field is empty and must not be evaluated.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Expression e) : expr_(std::move(e)) {}
    explicit ScalarField(const std::string& text) : expr_(Expression::parse(text)) {}

    static ScalarField constant(double v) { return ScalarField(Expression::number(v)); }

    const Expression& expression() const { return expr_; }
    bool empty() const { return expr_.empty(); }

    Jet eval(const JetSpace& space, const Vec2& point) const { return expr_.eval(space, point); }
    double value(const Vec2& point) const { return expr_.eval_value(point); }

private:
    Expression expr_;
};

inline Jet eval_field(const ScalarField& f, const JetSpace& space, const Vec2& point) {
    return f.eval(space, point);
}

} // namespace finsler
