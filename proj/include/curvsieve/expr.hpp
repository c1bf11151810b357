// Small expression language for velocities and quantities:
//   literals (nonnegative integers), symbols l1 l2 H Q K B(k),
//   operators + - * / ^int, parentheses, unary minus.
// Precedence: ^  >  unary -  >  * /  >  + -.
#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ratfn2.hpp"
#include "upoly.hpp"

namespace curvsieve {

struct ParseError : Error {
    size_t position;
    ParseError(const std::string& what, size_t pos)
        : Error(what + " at position " + std::to_string(pos)), position(pos) {}
};

struct UnknownSymbol : ParseError {
    using ParseError::ParseError;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum Kind { Literal, Symbol, PowerSum, Unary, Binary } kind;
    Rat literal;        // Literal
    std::string name;   // Symbol: "l1" "l2" "H" "Q" "K"
    int power_sum = 0;  // PowerSum: B(k)
    char op = 0;        // Binary: + - * / ^ ; Unary: -
    ExprPtr lhs, rhs;   // Binary children / Unary child in lhs
    int exponent = 0;   // Binary '^'
};

using ExprAst = ExprPtr;

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    ExprPtr parse_sum() {
        ExprPtr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                char op = take();
                ExprPtr rhs = parse_term();
                lhs = binary(op, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (peek() == '*' || peek() == '/') {
                char op = take();
                ExprPtr rhs = parse_unary();
                lhs = binary(op, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_unary() {
        skip_ws();
        if (peek() == '-') {
            size_t at = pos_;
            take();
            ExprPtr child = parse_unary();
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Unary;
            n->op = '-';
            n->lhs = child;
            (void)at;
            return n;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        skip_ws();
        if (peek() == '^') {
            take();
            skip_ws();
            size_t at = pos_;
            long e = parse_integer("exponent");
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Binary;
            n->op = '^';
            n->lhs = base;
            n->exponent = static_cast<int>(e);
            (void)at;
            return n;
        }
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long v = parse_integer("number");
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Literal;
            n->literal = v;
            return n;
        }
        if (c == '(') {
            take();
            ExprPtr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t at = pos_;
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
                name += text_[pos_++];
            }
            if (name == "B") {
                expect('(');
                skip_ws();
                long k = parse_integer("power-sum order");
                if (k < 0) throw ParseError("B(k) needs k >= 0", at);
                expect(')');
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprNode::PowerSum;
                n->power_sum = static_cast<int>(k);
                return n;
            }
            if (name == "l1" || name == "l2" || name == "H" || name == "Q" || name == "K") {
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprNode::Symbol;
                n->name = name;
                return n;
            }
            throw UnknownSymbol("unknown symbol '" + name + "'", at);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    long parse_integer(const std::string& what) {
        skip_ws();
        size_t at = pos_;
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            take();
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw ParseError("expected " + what, at);
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_++] - '0');
            if (v > 1000000000L) throw ParseError(what + " out of range", at);
        }
        return neg ? -v : v;
    }

    static ExprPtr binary(char op, ExprPtr lhs, ExprPtr rhs) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Binary;
        n->op = op;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }
    void expect(char c) {
        skip_ws();
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        take();
    }

    std::string_view text_;
    size_t pos_ = 0;
};

}  // namespace detail

inline ExprAst parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

// Elaborate H, Q, K, B(k) to their (l1, l2) definitions and fold the AST
// into an exact rational function.
inline RatFn2 elaborate(const ExprAst& ast) {
    switch (ast->kind) {
        case ExprNode::Literal: return RatFn2(ast->literal);
        case ExprNode::Symbol:
            if (ast->name == "l1") return rf_l1();
            if (ast->name == "l2") return rf_l2();
            if (ast->name == "H") return rf_H();
            if (ast->name == "Q") return rf_Q();
            return rf_K();
        case ExprNode::PowerSum: return rf_B(static_cast<unsigned>(ast->power_sum));
        case ExprNode::Unary: return -elaborate(ast->lhs);
        default: break;
    }
    if (ast->op == '^') return elaborate(ast->lhs).pow(ast->exponent);
    RatFn2 a = elaborate(ast->lhs);
    RatFn2 b = elaborate(ast->rhs);
    switch (ast->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        default: return a / b;
    }
}

inline RatFn2 parse_ratfn(std::string_view text) { return elaborate(parse_expr(text)); }

inline Poly2 parse_poly(std::string_view text) {
    RatFn2 f = parse_ratfn(text);
    if (!f.den().is_constant()) throw Error("expected a polynomial, got a rational function");
    return (Rat(1) / f.den().leading_coefficient()) * f.num();
}

// Univariate polynomial text in the variable x, as emitted by UPoly::to_string.
inline UPoly parse_upoly(std::string_view text) {
    std::string rewritten;
    rewritten.reserve(text.size() + 8);
    for (char c : text) {
        if (c == 'x')
            rewritten += "l1";
        else
            rewritten += c;
    }
    Poly2 p = parse_poly(rewritten);
    std::vector<Rat> coeffs;
    for (const auto& [e, c] : p.terms()) {
        if (e.j != 0) throw Error("expected a univariate polynomial in x");
        if (static_cast<size_t>(e.i) >= coeffs.size()) coeffs.resize(e.i + 1);
        coeffs[e.i] = c;
    }
    return UPoly(std::move(coeffs));
}

}  // namespace curvsieve
