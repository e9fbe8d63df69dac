#pragma once

#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "bispec/exactnum/laurent.hpp"

namespace bispec {

// Finite sum of c X^a Y^b with a, b in Z. Used for associated polynomials
// (X Laurent, Y = symbol of d) and for log-polynomials (Y = ln x).
class BiLaurent {
public:
    using Key = std::pair<int, int>;
    using Terms = std::map<Key, Scalar>;

    BiLaurent() = default;
    BiLaurent(Scalar c) { add(0, 0, std::move(c)); }
    BiLaurent(long c) : BiLaurent(Scalar(c)) {}
    static BiLaurent monomial(Scalar c, int a, int b)
    {
        BiLaurent r;
        r.add(a, b, std::move(c));
        return r;
    }
    static BiLaurent from_x(const LaurentPoly &p, int ypow = 0)
    {
        BiLaurent r;
        for (const auto &[e, c] : p.terms())
            r.add(e, ypow, c);
        return r;
    }

    const Terms &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Scalar coeff(int a, int b) const
    {
        auto it = t_.find({a, b});
        return it == t_.end() ? Scalar(0) : it->second;
    }
    void add(int a, int b, const Scalar &c)
    {
        if (c.is_zero())
            return;
        auto [it, inserted] = t_.emplace(Key{a, b}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                t_.erase(it);
        }
    }

    // Coefficient of Y^b as a Laurent polynomial in X.
    LaurentPoly y_coeff(int b) const
    {
        LaurentPoly p;
        for (const auto &[k, c] : t_)
            if (k.second == b)
                p.add(k.first, c);
        return p;
    }
    LaurentPoly at_y0() const { return y_coeff(0); }
    int y_degree() const
    {
        int d = -1;
        for (const auto &[k, c] : t_)
            d = std::max(d, k.second);
        return d;
    }

    friend bool operator==(const BiLaurent &a, const BiLaurent &b) { return a.t_ == b.t_; }
    friend bool operator!=(const BiLaurent &a, const BiLaurent &b) { return !(a == b); }
    BiLaurent operator-() const
    {
        BiLaurent r(*this);
        for (auto &[k, c] : r.t_)
            c = -c;
        return r;
    }
    BiLaurent &operator+=(const BiLaurent &o)
    {
        for (const auto &[k, c] : o.t_)
            add(k.first, k.second, c);
        return *this;
    }
    BiLaurent &operator-=(const BiLaurent &o)
    {
        for (const auto &[k, c] : o.t_)
            add(k.first, k.second, -c);
        return *this;
    }
    friend BiLaurent operator+(BiLaurent a, const BiLaurent &b) { return a += b; }
    friend BiLaurent operator-(BiLaurent a, const BiLaurent &b) { return a -= b; }
    friend BiLaurent operator*(const BiLaurent &a, const BiLaurent &b)
    {
        BiLaurent r;
        for (const auto &[ka, ca] : a.t_)
            for (const auto &[kb, cb] : b.t_)
                r.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    BiLaurent &operator*=(const BiLaurent &o) { return *this = *this * o; }
    BiLaurent scaled(const Scalar &s) const
    {
        BiLaurent r;
        for (const auto &[k, c] : t_)
            r.add(k.first, k.second, c * s);
        return r;
    }

    std::string str(const std::string &xv = "X", const std::string &yv = "Y") const
    {
        if (t_.empty())
            return "0";
        std::string out;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            auto [a, b] = it->first;
            std::string cs = it->second.str();
            bool neg = it->second.is_rational() && cs[0] == '-';
            if (neg)
                cs = cs.substr(1);
            out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            std::string mono;
            auto power = [&](const std::string &v, int e) {
                if (e == 0)
                    return;
                if (!mono.empty())
                    mono += "*";
                mono += v;
                if (e != 1)
                    mono += "^" + std::to_string(e);
            };
            power(yv, b);
            power(xv, a);
            if (mono.empty())
                out += cs;
            else
                out += (cs == "1" ? "" : cs + "*") + mono;
        }
        return out;
    }

private:
    Terms t_;
};

inline std::ostream &operator<<(std::ostream &os, const BiLaurent &p) { return os << p.str(); }

} // namespace bispec
