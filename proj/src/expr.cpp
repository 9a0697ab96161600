#include "finsler/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace finsler {

namespace {

NodePtr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_variable(int i) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Variable;
    n->variable = i;
    return n;
}

NodePtr make_unary(UnaryFn f, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Unary;
    n->ufn = f;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(BinaryFn f, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->bfn = f;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

struct Token {
    enum class Kind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    double number = 0.0;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        Token t;
        t.pos = i_;
        if (i_ >= s_.size()) {
            t.kind = Token::Kind::End;
            return t;
        }
        const char c = s_[i_];
        switch (c) {
        case '+': ++i_; t.kind = Token::Kind::Plus; return t;
        case '-': ++i_; t.kind = Token::Kind::Minus; return t;
        case '*': ++i_; t.kind = Token::Kind::Star; return t;
        case '/': ++i_; t.kind = Token::Kind::Slash; return t;
        case '^': ++i_; t.kind = Token::Kind::Caret; return t;
        case '(': ++i_; t.kind = Token::Kind::LParen; return t;
        case ')': ++i_; t.kind = Token::Kind::RParen; return t;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (i_ < s_.size() && s_[i_] == '.') {
                ++i_;
                if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
                    throw SyntaxError("digit expected after decimal point", i_);
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            }
            if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
                std::size_t mark = i_;
                ++i_;
                if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
                if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                } else {
                    i_ = mark; // 'e' belongs to the next token (the constant e)
                }
            }
            t.kind = Token::Kind::Number;
            t.text = s_.substr(start, i_ - start);
            t.number = std::strtod(t.text.c_str(), nullptr);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            t.kind = Token::Kind::Identifier;
            t.text = s_.substr(start, i_ - start);
            return t;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) { advance(); }

    NodePtr parse() {
        NodePtr e = expr();
        if (cur_.kind != Token::Kind::End)
            throw SyntaxError("unexpected trailing input", cur_.pos);
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    bool accept(Token::Kind k) {
        if (cur_.kind != k) return false;
        advance();
        return true;
    }

    NodePtr expr() {
        NodePtr e = term();
        while (true) {
            if (accept(Token::Kind::Plus)) e = make_binary(BinaryFn::Add, e, term());
            else if (accept(Token::Kind::Minus)) e = make_binary(BinaryFn::Sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        while (true) {
            if (accept(Token::Kind::Star)) e = make_binary(BinaryFn::Mul, e, factor());
            else if (accept(Token::Kind::Slash)) e = make_binary(BinaryFn::Div, e, factor());
            else return e;
        }
    }

    NodePtr factor() {
        if (accept(Token::Kind::Minus)) return make_unary(UnaryFn::Neg, factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept(Token::Kind::Caret)) return make_binary(BinaryFn::Pow, base, factor());
        return base;
    }

    NodePtr atom() {
        if (cur_.kind == Token::Kind::Number) {
            const double v = cur_.number;
            advance();
            return make_number(v);
        }
        if (accept(Token::Kind::LParen)) {
            NodePtr e = expr();
            if (!accept(Token::Kind::RParen)) throw SyntaxError("')' expected", cur_.pos);
            return e;
        }
        if (cur_.kind == Token::Kind::Identifier) {
            const std::string name = cur_.text;
            advance();
            if (cur_.kind == Token::Kind::LParen) {
                UnaryFn f;
                if (name == "sin") f = UnaryFn::Sin;
                else if (name == "cos") f = UnaryFn::Cos;
                else if (name == "exp") f = UnaryFn::Exp;
                else if (name == "log") f = UnaryFn::Log;
                else if (name == "sqrt") f = UnaryFn::Sqrt;
                else if (name == "atan") f = UnaryFn::Atan;
                else throw UnknownIdentifier(name);
                advance();
                NodePtr arg = expr();
                if (!accept(Token::Kind::RParen)) throw SyntaxError("')' expected", cur_.pos);
                return make_unary(f, arg);
            }
            if (name == "x1") return make_variable(0);
            if (name == "x2") return make_variable(1);
            if (name == "pi") return make_number(M_PI);
            if (name == "e") return make_number(M_E);
            throw UnknownIdentifier(name);
        }
        throw SyntaxError("number, variable, function or '(' expected", cur_.pos);
    }

    Lexer lex_;
    Token cur_;
};

std::string print_node(const ExprNode* n);

std::string print_binary(const ExprNode* n) {
    const char* op = "+";
    switch (n->bfn) {
    case BinaryFn::Add: op = "+"; break;
    case BinaryFn::Sub: op = "-"; break;
    case BinaryFn::Mul: op = "*"; break;
    case BinaryFn::Div: op = "/"; break;
    case BinaryFn::Pow: op = "^"; break;
    }
    return "(" + print_node(n->lhs.get()) + op + print_node(n->rhs.get()) + ")";
}

std::string print_node(const ExprNode* n) {
    switch (n->kind) {
    case ExprNode::Kind::Number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n->number);
        return buf;
    }
    case ExprNode::Kind::Variable:
        return n->variable == 0 ? "x1" : "x2";
    case ExprNode::Kind::Unary: {
        const char* f = "";
        switch (n->ufn) {
        case UnaryFn::Neg: return "(-" + print_node(n->lhs.get()) + ")";
        case UnaryFn::Sin: f = "sin"; break;
        case UnaryFn::Cos: f = "cos"; break;
        case UnaryFn::Exp: f = "exp"; break;
        case UnaryFn::Log: f = "log"; break;
        case UnaryFn::Sqrt: f = "sqrt"; break;
        case UnaryFn::Atan: f = "atan"; break;
        }
        return std::string(f) + "(" + print_node(n->lhs.get()) + ")";
    }
    case ExprNode::Kind::Binary:
        return print_binary(n);
    }
    return "";
}

bool node_equal(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (a == nullptr || b == nullptr || a->kind != b->kind) return false;
    switch (a->kind) {
    case ExprNode::Kind::Number: return a->number == b->number;
    case ExprNode::Kind::Variable: return a->variable == b->variable;
    case ExprNode::Kind::Unary:
        return a->ufn == b->ufn && node_equal(a->lhs.get(), b->lhs.get());
    case ExprNode::Kind::Binary:
        return a->bfn == b->bfn && node_equal(a->lhs.get(), b->lhs.get()) &&
               node_equal(a->rhs.get(), b->rhs.get());
    }
    return false;
}

bool is_constant_jet(const Jet& j) {
    auto c = j.coefficients();
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0.0) return false;
    return true;
}

Jet eval_node(const ExprNode* n, const JetSpace& space, const std::array<Jet, 4>& seeds) {
    switch (n->kind) {
    case ExprNode::Kind::Number:
        return Jet::constant(space, n->number);
    case ExprNode::Kind::Variable:
        return seeds[static_cast<std::size_t>(n->variable)];
    case ExprNode::Kind::Unary: {
        Jet a = eval_node(n->lhs.get(), space, seeds);
        try {
            switch (n->ufn) {
            case UnaryFn::Neg: return -a;
            case UnaryFn::Sin: return sin(a);
            case UnaryFn::Cos: return cos(a);
            case UnaryFn::Exp: return exp(a);
            case UnaryFn::Log: return log(a);
            case UnaryFn::Sqrt: return sqrt(a);
            case UnaryFn::Atan: return atan(a);
            }
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " in subexpression " + print_node(n));
        }
        return a;
    }
    case ExprNode::Kind::Binary: {
        Jet a = eval_node(n->lhs.get(), space, seeds);
        Jet b = eval_node(n->rhs.get(), space, seeds);
        try {
            switch (n->bfn) {
            case BinaryFn::Add: return a + b;
            case BinaryFn::Sub: return a - b;
            case BinaryFn::Mul: return a * b;
            case BinaryFn::Div: return a / b;
            case BinaryFn::Pow: {
                if (is_constant_jet(b)) {
                    const double p = b.value();
                    const double r = std::round(p);
                    if (std::abs(p - r) == 0.0 && std::abs(r) <= 64.0)
                        return powi(a, static_cast<int>(r));
                    return pow(a, p);
                }
                // variable exponent: a^b = exp(b log a)
                return exp(b * log(a));
            }
            }
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " in subexpression " + print_node(n));
        }
        return a;
    }
    }
    throw Error("corrupt expression node");
}

double eval_node_value(const ExprNode* n, const Vec2& p) {
    switch (n->kind) {
    case ExprNode::Kind::Number:
        return n->number;
    case ExprNode::Kind::Variable:
        return p[static_cast<std::size_t>(n->variable)];
    case ExprNode::Kind::Unary: {
        const double a = eval_node_value(n->lhs.get(), p);
        switch (n->ufn) {
        case UnaryFn::Neg: return -a;
        case UnaryFn::Sin: return std::sin(a);
        case UnaryFn::Cos: return std::cos(a);
        case UnaryFn::Exp: return std::exp(a);
        case UnaryFn::Log:
            if (a <= 0.0) throw DomainError("log of non-positive value in subexpression " + print_node(n));
            return std::log(a);
        case UnaryFn::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of negative value in subexpression " + print_node(n));
            return std::sqrt(a);
        case UnaryFn::Atan: return std::atan(a);
        }
        return a;
    }
    case ExprNode::Kind::Binary: {
        const double a = eval_node_value(n->lhs.get(), p);
        const double b = eval_node_value(n->rhs.get(), p);
        switch (n->bfn) {
        case BinaryFn::Add: return a + b;
        case BinaryFn::Sub: return a - b;
        case BinaryFn::Mul: return a * b;
        case BinaryFn::Div:
            if (b == 0.0) throw DomainError("division by zero in subexpression " + print_node(n));
            return a / b;
        case BinaryFn::Pow: {
            const double r = std::round(b);
            if (b == r && std::abs(r) <= 64.0) return std::pow(a, b);
            if (a <= 0.0)
                throw DomainError("non-integer power of non-positive base in subexpression " + print_node(n));
            return std::pow(a, b);
        }
        }
        return a;
    }
    }
    throw Error("corrupt expression node");
}

} // namespace

Expression Expression::parse(const std::string& text) {
    if (text.empty()) throw SyntaxError("empty expression", 0);
    Parser p(text);
    return Expression(p.parse());
}

Expression Expression::number(double v) { return Expression(make_number(v)); }
Expression Expression::variable(int i) { return Expression(make_variable(i)); }
Expression Expression::unary(UnaryFn f, Expression a) { return Expression(make_unary(f, a.root_)); }
Expression Expression::binary(BinaryFn f, Expression a, Expression b) {
    return Expression(make_binary(f, a.root_, b.root_));
}

Jet Expression::eval(const JetSpace& space, const Vec2& point) const {
    if (!root_) throw Error("evaluating empty expression");
    const bool x_active = space.x_order() > 0;
    const auto seeds = seed_point(space, {point[0], point[1], 0.0, 0.0}, {x_active, x_active, false, false});
    return eval_node(root_.get(), space, seeds);
}

double Expression::eval_value(const Vec2& point) const {
    if (!root_) throw Error("evaluating empty expression");
    return eval_node_value(root_.get(), point);
}

std::string Expression::print() const { return root_ ? print_node(root_.get()) : ""; }

bool operator==(const Expression& a, const Expression& b) {
    return node_equal(a.root_.get(), b.root_.get());
}

} // namespace finsler
