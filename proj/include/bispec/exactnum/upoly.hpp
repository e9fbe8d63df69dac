#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bispec/errors.hpp"
#include "bispec/exactnum/rational.hpp"

namespace bispec {

namespace detail {
template <typename K>
bool coeff_is_zero(const K &k)
{
    return is_zero(k);
}
template <typename K>
std::string coeff_to_string(const K &k)
{
    return to_string(k);
}
} // namespace detail

// Dense univariate polynomial over a field K, coefficients stored low to high
// with no trailing zeros. K needs field operations and an is_zero() overload.
template <typename K>
class UPoly {
public:
    UPoly() = default;
    UPoly(K constant)
    {
        if (!detail::coeff_is_zero(constant))
            c_.push_back(std::move(constant));
    }
    explicit UPoly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UPoly monomial(K coeff, int deg)
    {
        if (detail::coeff_is_zero(coeff))
            return {};
        std::vector<K> c(static_cast<std::size_t>(deg) + 1, K(0));
        c[static_cast<std::size_t>(deg)] = std::move(coeff);
        return UPoly(std::move(c));
    }
    static UPoly variable() { return monomial(K(1), 1); }
    // (x - root)
    static UPoly linear(const K &root) { return UPoly(std::vector<K>{-root, K(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }
    const std::vector<K> &coeffs() const { return c_; }

    const K &operator[](int i) const
    {
        static const K zero(0);
        if (i < 0 || i >= static_cast<int>(c_.size()))
            return zero;
        return c_[static_cast<std::size_t>(i)];
    }
    const K &lead() const { return (*this)[degree()]; }

    friend bool operator==(const UPoly &a, const UPoly &b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly &a, const UPoly &b) { return !(a == b); }

    UPoly operator-() const
    {
        UPoly r(*this);
        for (auto &x : r.c_)
            x = -x;
        return r;
    }
    UPoly &operator+=(const UPoly &o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UPoly &operator-=(const UPoly &o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend UPoly operator+(UPoly a, const UPoly &b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly &b) { return a -= b; }
    friend UPoly operator*(const UPoly &a, const UPoly &b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (bispec_is_zero(a.c_[i]))
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        }
        return UPoly(std::move(r));
    }
    UPoly &operator*=(const UPoly &o) { return *this = *this * o; }
    friend UPoly operator*(const K &s, const UPoly &p) { return p.scaled(s); }

    UPoly scaled(const K &s) const
    {
        if (bispec_is_zero(s))
            return {};
        UPoly r(*this);
        for (auto &x : r.c_)
            x *= s;
        r.trim();
        return r;
    }

    K eval(const K &x) const
    {
        K acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    UPoly derivative() const
    {
        if (c_.size() <= 1)
            return {};
        std::vector<K> r(c_.size() - 1, K(0));
        for (std::size_t i = 1; i < c_.size(); ++i)
            r[i - 1] = c_[i] * K(static_cast<long>(i));
        return UPoly(std::move(r));
    }

    // p(x + s) by Horner composition.
    UPoly shifted(const K &s) const
    {
        UPoly acc;
        const UPoly lin(std::vector<K>{s, K(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * lin + UPoly(*it);
        return acc;
    }

    UPoly monic() const
    {
        if (is_zero())
            return {};
        return scaled(K(1) / lead());
    }

    UPoly pow(int e) const
    {
        UPoly r(K(1)), b(*this);
        while (e > 0) {
            if (e & 1)
                r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // Polynomial long division; divisor must be nonzero.
    friend std::pair<UPoly, UPoly> divmod(const UPoly &a, const UPoly &b)
    {
        if (b.is_zero())
            fail(ErrorCode::ZeroArgument, "polynomial division by zero");
        if (a.degree() < b.degree())
            return {UPoly{}, a};
        std::vector<K> rem = a.c_;
        std::vector<K> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), K(0));
        const K inv = K(1) / b.lead();
        for (int i = a.degree(); i >= b.degree(); --i) {
            K coef = rem[static_cast<std::size_t>(i)] * inv;
            if (bispec_is_zero(coef))
                continue;
            const int shift = i - b.degree();
            q[static_cast<std::size_t>(shift)] = coef;
            for (int j = 0; j <= b.degree(); ++j)
                rem[static_cast<std::size_t>(shift + j)] -= coef * b.c_[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(b.degree()));
        return {UPoly(std::move(q)), UPoly(std::move(rem))};
    }
    friend UPoly operator/(const UPoly &a, const UPoly &b) { return divmod(a, b).first; }
    friend UPoly operator%(const UPoly &a, const UPoly &b) { return divmod(a, b).second; }

    std::string to_string(const std::string &var = "x") const
    {
        if (is_zero())
            return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const K &c = (*this)[i];
            if (bispec_is_zero(c))
                continue;
            std::string cs = coeff_string(c);
            bool neg = !cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos;
            if (neg)
                cs = cs.substr(1);
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            if (i == 0) {
                out += cs;
                continue;
            }
            if (cs != "1")
                out += cs + "*";
            out += var;
            if (i > 1)
                out += "^" + std::to_string(i);
        }
        return out;
    }

private:
    static bool bispec_is_zero(const K &k) { return detail::coeff_is_zero(k); }
    static std::string coeff_string(const K &k) { return detail::coeff_to_string(k); }
    void trim()
    {
        while (!c_.empty() && detail::coeff_is_zero(c_.back()))
            c_.pop_back();
    }

    std::vector<K> c_;
};

template <typename K>
UPoly<K> poly_gcd(UPoly<K> a, UPoly<K> b)
{
    if (a.is_zero())
        return b.is_zero() ? b : b.monic();
    if (b.degree() == 0 || a.degree() == 0)
        return UPoly<K>(K(1));
    b = b.monic();
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = r.is_zero() ? std::move(r) : r.monic();
    }
    return a.monic();
}

// Returns (g, s, t) with s*a + t*b = g = monic gcd(a, b).
template <typename K>
std::tuple<UPoly<K>, UPoly<K>, UPoly<K>> poly_exgcd(UPoly<K> a, UPoly<K> b)
{
    UPoly<K> s0(K(1)), s1, t0, t1(K(1));
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        a = std::move(b);
        b = std::move(r);
        auto s2 = s0 - q * s1;
        auto t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.is_zero())
        return {a, s0, t0};
    const K inv = K(1) / a.lead();
    return {a.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

template <typename K>
std::ostream &operator<<(std::ostream &os, const UPoly<K> &p)
{
    return os << p.to_string();
}

using QPoly = UPoly<Rational>;

} // namespace bispec
