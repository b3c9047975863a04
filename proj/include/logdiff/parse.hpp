#pragma once

// Expression parser for the CLI input language.
//
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nat)*
//   atom   := rational | name | '(' expr ')'
//
// Operator expressions additionally admit d_<name> atoms; '*' is then
// noncommutative composition read left to right.  Implicit multiplication
// is rejected, which keeps the operator grammar unambiguous.

#include "logdiff/logder.hpp"
#include "logdiff/polynomial.hpp"
#include "logdiff/weyl.hpp"

#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace logdiff {

struct SyntaxError : std::runtime_error {
    SyntaxError(int line_, int col_, const std::string& what_)
        : std::runtime_error("syntax error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
    int line, col;
};

struct UnknownVariable : std::runtime_error {
    UnknownVariable(int line_, int col_, const std::string& name_)
        : std::runtime_error("unknown variable '" + name_ + "' at " + std::to_string(line_) +
                             ":" + std::to_string(col_)),
          line(line_), col(col_), name(name_) {}
    int line, col;
    std::string name;
};

namespace detail {

struct Token {
    enum class Kind { number, name, partial, plus, minus, star, caret, lparen, rparen, end };
    Kind kind;
    std::string text;  // name / partial target / number literal
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { next(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        next();
        return t;
    }

private:
    void next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': tok_.kind = Token::Kind::plus; advance(); return;
            case '-': tok_.kind = Token::Kind::minus; advance(); return;
            case '*': tok_.kind = Token::Kind::star; advance(); return;
            case '^': tok_.kind = Token::Kind::caret; advance(); return;
            case '(': tok_.kind = Token::Kind::lparen; advance(); return;
            case ')': tok_.kind = Token::Kind::rparen; advance(); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                num += src_[pos_];
                advance();
            }
            // fraction literal p/q
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                num += src_[pos_];
                advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    num += src_[pos_];
                    advance();
                }
            }
            tok_.kind = Token::Kind::number;
            tok_.text = std::move(num);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                name += src_[pos_];
                advance();
            }
            if (name.size() > 2 && name.rfind("d_", 0) == 0) {
                tok_.kind = Token::Kind::partial;
                tok_.text = name.substr(2);
            } else {
                tok_.kind = Token::Kind::name;
                tok_.text = std::move(name);
            }
            return;
        }
        throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_{};
};

// Shared parser skeleton; Algebra supplies the value type and atoms.
template <typename Algebra>
class Parser {
public:
    using Value = typename Algebra::Value;

    Parser(const std::string& src, Algebra alg) : lex_(src), alg_(std::move(alg)) {}

    Value parse() {
        Value v = expr();
        if (lex_.peek().kind != Token::Kind::end)
            throw SyntaxError(lex_.peek().line, lex_.peek().col, "trailing input");
        return v;
    }

private:
    Value expr() {
        bool negate = false;
        if (lex_.peek().kind == Token::Kind::minus) {
            lex_.take();
            negate = true;
        }
        Value acc = term();
        if (negate) acc = alg_.negate(acc);
        while (lex_.peek().kind == Token::Kind::plus || lex_.peek().kind == Token::Kind::minus) {
            bool minus = lex_.take().kind == Token::Kind::minus;
            Value rhs = term();
            acc = minus ? alg_.sub(acc, rhs) : alg_.add(acc, rhs);
        }
        return acc;
    }

    Value term() {
        Value acc = factor();
        while (lex_.peek().kind == Token::Kind::star) {
            lex_.take();
            acc = alg_.mul(acc, factor());
        }
        return acc;
    }

    Value factor() {
        Value base = atom();
        while (lex_.peek().kind == Token::Kind::caret) {
            Token caret = lex_.take();
            Token e = lex_.take();
            if (e.kind != Token::Kind::number || e.text.find('/') != std::string::npos)
                throw SyntaxError(caret.line, caret.col, "exponent must be a natural number");
            base = alg_.pow(base, std::stoi(e.text));
        }
        return base;
    }

    Value atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::number:
                return alg_.number(parse_rational(t.text));
            case Token::Kind::name:
                return alg_.variable(t);
            case Token::Kind::partial:
                return alg_.partial(t);
            case Token::Kind::lparen: {
                Value v = expr();
                Token close = lex_.take();
                if (close.kind != Token::Kind::rparen)
                    throw SyntaxError(close.line, close.col, "expected ')'");
                return v;
            }
            case Token::Kind::end:
                throw SyntaxError(t.line, t.col, "unexpected end of input");
            default:
                throw SyntaxError(t.line, t.col, "expected a value");
        }
    }

    Lexer lex_;
    Algebra alg_;
};

struct PolyAlgebra {
    using Value = Polynomial;
    VarTablePtr vars;

    Value number(Rational r) const { return Polynomial::constant(vars, std::move(r)); }
    Value variable(const Token& t) const {
        int idx = vars->find(t.text);
        if (idx < 0) throw UnknownVariable(t.line, t.col, t.text);
        return Polynomial::variable(vars, idx);
    }
    Value partial(const Token& t) const {
        throw SyntaxError(t.line, t.col, "d_" + t.text + " is not allowed in a polynomial");
    }
    Value negate(const Value& v) const { return -v; }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value pow(const Value& a, int k) const { return a.pow(k); }
};

struct OpAlgebra {
    using Value = DiffOp;
    VarTablePtr vars;

    Value number(Rational r) const { return DiffOp::constant(vars, std::move(r)); }
    Value variable(const Token& t) const {
        int idx = vars->find(t.text);
        if (idx < 0) throw UnknownVariable(t.line, t.col, t.text);
        if (vars->is_symbol_index(idx))
            throw SyntaxError(t.line, t.col,
                              "symbol variable '" + t.text + "' cannot appear in an operator");
        return DiffOp::function(Polynomial::variable(vars, idx));
    }
    Value partial(const Token& t) const {
        int idx = vars->find(t.text);
        if (idx < 0 || vars->is_symbol_index(idx)) throw UnknownVariable(t.line, t.col, t.text);
        return DiffOp::partial_op(vars, idx);
    }
    Value negate(const Value& v) const { return -v; }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return compose(a, b); }
    Value pow(const Value& a, int k) const { return compose_power(a, k); }
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& src, const VarTablePtr& vars) {
    return detail::Parser<detail::PolyAlgebra>(src, detail::PolyAlgebra{vars}).parse();
}

inline DiffOp parse_operator(const std::string& src, const VarTablePtr& vars) {
    return detail::Parser<detail::OpAlgebra>(src, detail::OpAlgebra{vars}).parse();
}

// A derivation written as an operator: order <= 1, no order-0 part.
inline Derivation parse_derivation(const std::string& src, const VarTablePtr& vars) {
    DiffOp op = parse_operator(src, vars);
    const int n = vars->dimension();
    std::vector<Polynomial> coeffs(n, Polynomial::zero(vars));
    for (const auto& [alpha, c] : op.terms()) {
        if (total_degree(alpha) != 1)
            throw std::invalid_argument("a derivation must be a pure first-order operator");
        for (int i = 0; i < n; ++i)
            if (alpha[i] == 1) coeffs[i] = c;
    }
    return Derivation(vars, std::move(coeffs));
}

}  // namespace logdiff
