#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bispec/errors.hpp"
#include "bispec/exactnum/logfunc.hpp"
#include "bispec/exactnum/ratfunc.hpp"
#include "bispec/exactnum/series.hpp"

namespace bispec {

namespace detail {
inline bool trim_zero(const RationalFunction &c) { return c.is_zero(); }
inline bool trim_zero(const Series &c) { return c.is_exact() && c.is_zero(); }
} // namespace detail

// sum_k V_k d^k with d = d/dx; products are normal ordered (d to the right).
// C is RationalFunction or Series.
template <typename C>
class DiffOp {
public:
    DiffOp() = default;
    DiffOp(C c)
    {
        v_.push_back(std::move(c));
        trim();
    }
    DiffOp(long c) : DiffOp(C(c)) {}
    explicit DiffOp(std::vector<C> coeffs) : v_(std::move(coeffs)) { trim(); }

    static DiffOp d(int k = 1)
    {
        std::vector<C> v(k + 1, C());
        v[k] = C(1);
        return DiffOp(std::move(v));
    }
    static DiffOp term(C c, int k)
    {
        std::vector<C> v(k + 1, C());
        v[k] = std::move(c);
        return DiffOp(std::move(v));
    }

    // -1 for the zero operator.
    int order() const { return static_cast<int>(v_.size()) - 1; }
    bool is_zero() const
    {
        return std::all_of(v_.begin(), v_.end(), [](const C &c) { return c.is_zero(); });
    }
    const std::vector<C> &coeffs() const { return v_; }
    C coeff(int k) const { return (k < 0 || k > order()) ? C() : v_[k]; }
    const C &lead() const
    {
        if (v_.empty())
            fail(ErrorCode::ZeroOperator, "leading coefficient of the zero operator");
        return v_.back();
    }
    bool is_monic() const { return !v_.empty() && v_.back() == C(1); }

    friend bool operator==(const DiffOp &a, const DiffOp &b) { return a.v_ == b.v_; }
    friend bool operator!=(const DiffOp &a, const DiffOp &b) { return !(a == b); }

    DiffOp operator-() const
    {
        DiffOp r(*this);
        for (auto &c : r.v_)
            c = -c;
        return r;
    }
    DiffOp &operator+=(const DiffOp &o)
    {
        if (o.v_.size() > v_.size())
            v_.resize(o.v_.size(), C());
        for (std::size_t i = 0; i < o.v_.size(); ++i)
            v_[i] = v_[i] + o.v_[i];
        trim();
        return *this;
    }
    DiffOp &operator-=(const DiffOp &o) { return *this += -o; }
    friend DiffOp operator+(DiffOp a, const DiffOp &b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp &b) { return a -= b; }

    // (a_i d^i)(b_j d^j) = sum_m C(i,m) a_i b_j^(m) d^(i+j-m)
    friend DiffOp operator*(const DiffOp &a, const DiffOp &b)
    {
        if (a.v_.empty() || b.v_.empty())
            return DiffOp();
        const int na = a.order(), nb = b.order();
        std::vector<C> out(na + nb + 1, C());
        for (int j = 0; j <= nb; ++j) {
            if (detail::trim_zero(b.v_[j]) )
                continue;
            C deriv = b.v_[j];
            for (int m = 0; m <= na; ++m) {
                if (m > 0)
                    deriv = deriv.derivative();
                if (detail::trim_zero(deriv))
                    break;
                for (int i = m; i <= na; ++i) {
                    if (detail::trim_zero(a.v_[i]))
                        continue;
                    C t = a.v_[i] * deriv;
                    if (m > 0 && i != m)
                        t = t * C(Scalar(Rational(binomial(i, m))));
                    out[i + j - m] = out[i + j - m] + t;
                }
            }
        }
        return DiffOp(std::move(out));
    }
    DiffOp &operator*=(const DiffOp &o) { return *this = *this * o; }

    DiffOp scaled(const C &c) const
    {
        DiffOp r(*this);
        for (auto &v : r.v_)
            v = c * v;
        r.trim();
        return r;
    }
    DiffOp pow(int n) const
    {
        DiffOp r(C(1));
        for (int i = 0; i < n; ++i)
            r *= *this;
        return r;
    }

    template <typename F>
    auto map(F &&f) const -> DiffOp<decltype(f(std::declval<C>()))>
    {
        std::vector<decltype(f(std::declval<C>()))> out;
        for (const auto &c : v_)
            out.push_back(f(c));
        return DiffOp<decltype(f(std::declval<C>()))>(std::move(out));
    }

    std::string str() const
    {
        if (v_.empty())
            return "0";
        std::string out;
        for (int k = order(); k >= 0; --k) {
            if (v_[k].is_zero())
                continue;
            std::string c = v_[k].str();
            std::string dk = k == 0 ? "" : (k == 1 ? "d" : "d^" + std::to_string(k));
            if (!out.empty())
                out += " + ";
            if (k == 0)
                out += "(" + c + ")";
            else if (c == "1")
                out += dk;
            else
                out += "(" + c + ")*" + dk;
        }
        return out.empty() ? "0" : out;
    }

private:
    void trim()
    {
        while (!v_.empty() && detail::trim_zero(v_.back()))
            v_.pop_back();
    }

    std::vector<C> v_;
};

using RatOp = DiffOp<RationalFunction>;
using SerOp = DiffOp<Series>;

template <typename C>
std::ostream &operator<<(std::ostream &os, const DiffOp<C> &op)
{
    return os << op.str();
}

template <typename C>
DiffOp<C> dop_mul(const DiffOp<C> &a, const DiffOp<C> &b)
{
    return a * b;
}

template <typename C>
DiffOp<C> commutator(const DiffOp<C> &a, const DiffOp<C> &b)
{
    return a * b - b * a;
}

// (ad L)^i X
template <typename C>
DiffOp<C> ad_power(const DiffOp<C> &L, DiffOp<C> X, int i)
{
    if (i < 0)
        fail(ErrorCode::InvalidArgument, "negative ad power");
    for (int k = 0; k < i && !X.is_zero(); ++k)
        X = commutator(L, X);
    return X;
}

// Q = Q1*L + q with order(q) < order(L).
template <typename C>
std::pair<DiffOp<C>, DiffOp<C>> right_divide(const DiffOp<C> &Q, const DiffOp<C> &L)
{
    if (L.order() < 1 || !L.is_monic())
        fail(ErrorCode::NonMonicDivisor, "divisor must be monic of order >= 1");
    const int n = L.order();
    DiffOp<C> q1, r = Q;
    while (r.order() >= n) {
        int k = r.order() - n;
        DiffOp<C> t = DiffOp<C>::term(r.lead(), k);
        q1 += t;
        DiffOp<C> next = r - t * L;
        if (next.order() >= r.order()) {
            // inexact top coefficient that did not cancel structurally
            std::vector<C> c = next.coeffs();
            c.pop_back();
            next = DiffOp<C>(std::move(c));
        }
        r = std::move(next);
    }
    return {q1, r};
}

// x as an operator of order 0.
inline RatOp op_x(int power = 1)
{
    return RatOp(RationalFunction(LaurentPoly::monomial(Scalar(1), power)));
}

inline RatOp laurent_op(const std::vector<LaurentPoly> &v)
{
    std::vector<RationalFunction> c;
    for (const auto &p : v)
        c.emplace_back(p);
    return RatOp(std::move(c));
}

// Expansion of every coefficient at infinity through x^floor.
inline SerOp to_series(const RatOp &L, int floor)
{
    return L.map([floor](const RationalFunction &c) { return c.expand(floor); });
}

// Exact Laurent coefficients of a series operator (all must be exact).
inline RatOp to_rational(const SerOp &L)
{
    return L.map([](const Series &s) {
        if (!s.is_exact())
            fail(ErrorCode::NotRational, "inexact series coefficient");
        return RationalFunction(s.to_laurent());
    });
}

// Lowest known exponent across coefficients; nullopt when all are exact.
inline std::optional<int> op_floor(const SerOp &L)
{
    std::optional<int> f;
    for (const auto &c : L.coeffs())
        if (c.floor())
            f = f ? std::max(*f, *c.floor()) : *c.floor();
    return f;
}

inline SerOp truncated(const SerOp &L, int floor)
{
    return L.map([floor](const Series &s) { return s.truncated(floor); });
}

// sum_k V_k f^(k) for Laurent coefficients V_k.
inline LogFunction apply(const RatOp &L, const LogFunction &f)
{
    LogFunction out, der = f;
    for (int k = 0; k <= L.order(); ++k) {
        if (k > 0)
            der = der.derivative();
        if (!L.coeff(k).is_zero())
            out += der.times(L.coeff(k).to_laurent());
    }
    return out;
}

inline Series apply(const SerOp &L, const Series &f)
{
    Series out, der = f;
    for (int k = 0; k <= L.order(); ++k) {
        if (k > 0)
            der = der.derivative();
        out += L.coeff(k) * der;
    }
    return out;
}

} // namespace bispec
