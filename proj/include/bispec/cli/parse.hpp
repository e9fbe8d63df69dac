#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "bispec/diffop/diffop.hpp"
#include "bispec/errors.hpp"
#include "bispec/exactnum/logfunc.hpp"
#include "bispec/exactnum/scalar.hpp"

namespace bispec {

// One optional extension Q(a) per session; `generator` is the name the text
// layer uses for a.
struct Session {
    FieldHandle field;
    std::string generator = "a";

    Scalar gen() const { return Scalar::generator(field); }
};

namespace detail {

struct Token {
    enum Kind { Number, Ident, Sym, End } kind = End;
    std::string text;
    std::size_t pos = 0;
};

inline std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char ch = static_cast<unsigned char>(s[i]);
        if (std::isspace(ch)) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isdigit(ch)) {
            t.kind = Token::Number;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                t.text += s[i++];
        } else if (std::isalpha(ch) || ch == '_') {
            t.kind = Token::Ident;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                t.text += s[i++];
        } else if (std::string_view("+-*/^(),").find(s[i]) != std::string_view::npos) {
            t.kind = Token::Sym;
            t.text = s[i++];
        } else {
            fail(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, s[i]) + "' at position " + std::to_string(i));
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = s.size();
    out.push_back(end);
    return out;
}

// Recursive descent over
//   expr   := [+|-] term {(+|-) term}
//   term   := factor {(*|/) factor}
//   factor := atom [^ exponent],  exponent := [+|-] integer | ( exponent )
//   atom   := integer | x | d | D | <generator> | ( expr )
// evaluated in the Weyl algebra with rational coefficients. A / f needs f of
// order 0 and divides every coefficient of A by f.
class OperatorParser {
public:
    OperatorParser(std::string_view text, const Session &s, std::string var = "x")
        : toks_(tokenize(text)), s_(s), var_(std::move(var))
    {
    }

    RatOp parse()
    {
        RatOp r = expr();
        if (peek().kind != Token::End)
            error("unexpected '" + peek().text + "'");
        return r;
    }

    // kernel := [+|-] kterm {(+|-) kterm},  kterm := kfactor {* kfactor}
    //   kfactor := integer [/ integer] | x [^ exponent] | ln [^ integer] | <generator> | ( expr )
    LogFunction parse_kernel()
    {
        LogFunction f;
        bool neg = false;
        if (is_sym("+") || is_sym("-"))
            neg = next().text == "-";
        for (;;) {
            auto [c, g, j] = kterm();
            f += LogFunction::term(neg ? -c : c, g, j);
            if (is_sym("+") || is_sym("-"))
                neg = next().text == "-";
            else
                break;
        }
        if (peek().kind != Token::End)
            error("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token &peek() const { return toks_[i_]; }
    const Token &next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
    bool is_sym(const char *c) const { return peek().kind == Token::Sym && peek().text == c; }
    [[noreturn]] void error(const std::string &msg) const
    {
        fail(ErrorCode::SyntaxError, msg + " at position " + std::to_string(peek().pos));
    }
    void expect(const char *c)
    {
        if (!is_sym(c))
            error(std::string("expected '") + c + "'");
        next();
    }

    RatOp expr()
    {
        bool neg = false;
        if (is_sym("+") || is_sym("-"))
            neg = next().text == "-";
        RatOp r = term();
        if (neg)
            r = -r;
        while (is_sym("+") || is_sym("-")) {
            bool minus = next().text == "-";
            RatOp t = term();
            r = minus ? r - t : r + t;
        }
        return r;
    }

    RatOp term()
    {
        RatOp r = factor();
        while (is_sym("*") || is_sym("/")) {
            bool div = next().text == "/";
            std::size_t at = peek().pos;
            RatOp f = factor();
            r = div ? divide(r, f, at) : r * f;
        }
        return r;
    }

    static RatOp divide(const RatOp &a, const RatOp &f, std::size_t at)
    {
        if (f.is_zero())
            fail(ErrorCode::ZeroArgument, "division by zero at position " + std::to_string(at));
        if (f.order() != 0)
            fail(ErrorCode::SyntaxError, "divisor is not a function at position " + std::to_string(at));
        std::vector<RationalFunction> c = a.coeffs();
        for (auto &v : c)
            v = v / f.coeff(0);
        return RatOp(std::move(c));
    }

    int integer_exponent()
    {
        if (is_sym("(")) {
            next();
            int e = integer_exponent();
            expect(")");
            return e;
        }
        bool neg = false;
        if (is_sym("+") || is_sym("-"))
            neg = next().text == "-";
        if (peek().kind != Token::Number)
            error("expected an integer exponent");
        const std::string digits = next().text;
        if (digits.size() > 6)
            error("exponent too large");
        int e = std::stoi(digits);
        return neg ? -e : e;
    }

    RatOp factor()
    {
        RatOp a = atom();
        if (!is_sym("^"))
            return a;
        next();
        std::size_t at = peek().pos;
        int e = integer_exponent();
        if (e >= 0)
            return a.pow(e);
        if (a.order() != 0 || a.is_zero())
            fail(ErrorCode::SyntaxError, "negative power of an operator at position " + std::to_string(at));
        RationalFunction inv = RationalFunction(1) / a.coeff(0);
        RationalFunction r(1);
        for (int k = 0; k < -e; ++k)
            r = r * inv;
        return RatOp(r);
    }

    RatOp atom()
    {
        const Token t = peek();
        if (t.kind == Token::Number) {
            next();
            return RatOp(RationalFunction(Scalar(Rational(t.text))));
        }
        if (t.kind == Token::Ident) {
            next();
            if (t.text == var_)
                return RatOp(RationalFunction::x());
            if (t.text == "d" && var_ == "x")
                return RatOp::d(1);
            if (t.text == "D" && var_ == "x")
                return RatOp(RationalFunction::x()) * RatOp::d(1);
            if (s_.field && t.text == s_.generator)
                return RatOp(RationalFunction(s_.gen()));
            fail(ErrorCode::UnknownSymbol, "'" + t.text + "' at position " + std::to_string(t.pos));
        }
        if (is_sym("(")) {
            next();
            RatOp r = expr();
            expect(")");
            return r;
        }
        error(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }

    Scalar constant(const RatOp &r, std::size_t at) const
    {
        if (r.is_zero())
            return Scalar(0);
        if (r.order() != 0 || !r.coeff(0).is_constant())
            fail(ErrorCode::SyntaxError, "expected a constant at position " + std::to_string(at));
        return r.coeff(0).constant_value();
    }

    // exponent of x: signed integer, optionally over an integer, or a parenthesized constant
    Scalar kexponent()
    {
        std::size_t at = peek().pos;
        if (is_sym("(")) {
            next();
            RatOp r = expr();
            expect(")");
            return constant(r, at);
        }
        Scalar e(integer_exponent());
        if (is_sym("/")) {
            next();
            if (peek().kind != Token::Number)
                error("expected an integer denominator");
            e = e / Scalar(Rational(next().text));
        }
        return e;
    }

    std::tuple<Scalar, Scalar, int> kterm()
    {
        Scalar c(1), g(0);
        int j = 0;
        for (;;) {
            const Token t = peek();
            if (t.kind == Token::Number) {
                next();
                Scalar v(Rational(t.text));
                if (is_sym("/")) {
                    next();
                    if (peek().kind != Token::Number)
                        error("expected an integer denominator");
                    v = v / Scalar(Rational(next().text));
                }
                c = c * v;
            } else if (t.kind == Token::Ident && t.text == "x") {
                next();
                if (is_sym("^")) {
                    next();
                    g = g + kexponent();
                } else {
                    g = g + Scalar(1);
                }
            } else if (t.kind == Token::Ident && t.text == "ln") {
                next();
                int p = 1;
                if (is_sym("^")) {
                    next();
                    std::size_t at = peek().pos;
                    p = integer_exponent();
                    if (p < 0)
                        fail(ErrorCode::SyntaxError, "negative power of ln at position " + std::to_string(at));
                }
                j += p;
            } else if (t.kind == Token::Ident && s_.field && t.text == s_.generator) {
                next();
                c = c * s_.gen();
            } else if (t.kind == Token::Ident) {
                fail(ErrorCode::UnknownSymbol, "'" + t.text + "' at position " + std::to_string(t.pos));
            } else if (is_sym("(")) {
                std::size_t at = t.pos;
                next();
                RatOp r = expr();
                expect(")");
                c = c * constant(r, at);
            } else {
                error(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
            }
            if (!is_sym("*"))
                return {c, g, j};
            next();
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    const Session &s_;
    std::string var_;
};

} // namespace detail

inline RatOp parse_operator(std::string_view text, const Session &s = {})
{
    return detail::OperatorParser(text, s).parse();
}

inline std::string print_operator(const RatOp &L) { return L.str(); }

// A function of x (order 0).
inline RationalFunction parse_function(std::string_view text, const Session &s = {})
{
    RatOp r = parse_operator(text, s);
    if (r.is_zero())
        return RationalFunction();
    if (r.order() != 0)
        fail(ErrorCode::SyntaxError, "expected a function of x, got an operator of order " + std::to_string(r.order()));
    return r.coeff(0);
}

inline Scalar parse_scalar(std::string_view text, const Session &s = {})
{
    RationalFunction f = parse_function(text, s);
    if (!f.is_constant())
        fail(ErrorCode::SyntaxError, "expected a constant, got " + f.str());
    return f.constant_value();
}

// Polynomial in the generator name with rational coefficients, e.g. "a^2 - 2".
inline QPoly parse_minpoly(std::string_view text, const std::string &generator)
{
    RatOp r = detail::OperatorParser(text, Session{}, generator).parse();
    if (r.order() > 0 || r.is_zero() || !r.coeff(0).is_polynomial())
        fail(ErrorCode::SyntaxError, "minimal polynomial must be a nonzero polynomial in " + generator);
    SPoly p = r.coeff(0).num() * SPoly(Scalar(1) / r.coeff(0).den().lead());
    std::vector<Rational> c;
    for (int i = 0; i <= p.degree(); ++i)
        c.push_back(p[i].rational());
    return QPoly(std::move(c));
}

// c x^g ln^j sums.
inline LogFunction parse_kernel_function(std::string_view text, const Session &s = {})
{
    return detail::OperatorParser(text, s).parse_kernel();
}

} // namespace bispec
