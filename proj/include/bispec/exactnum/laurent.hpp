#pragma once

#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "bispec/errors.hpp"
#include "bispec/exactnum/scalar.hpp"

namespace bispec {

// Finite sum of c_e x^e, e in Z. No stored zeros.
class LaurentPoly {
public:
    using Terms = std::map<int, Scalar>;

    LaurentPoly() = default;
    LaurentPoly(Scalar c) { add(0, std::move(c)); }
    LaurentPoly(long c) : LaurentPoly(Scalar(c)) {}
    explicit LaurentPoly(Terms t)
    {
        for (auto &[e, c] : t)
            add(e, std::move(c));
    }
    static LaurentPoly monomial(Scalar c, int e)
    {
        LaurentPoly p;
        p.add(e, std::move(c));
        return p;
    }
    static LaurentPoly from_poly(const SPoly &p, int shift = 0)
    {
        LaurentPoly r;
        for (int i = 0; i <= p.degree(); ++i)
            r.add(i + shift, p[i]);
        return r;
    }

    const Terms &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_monomial() const { return t_.size() == 1; }
    int degree() const
    {
        if (t_.empty())
            fail(ErrorCode::ZeroArgument, "degree of zero Laurent polynomial");
        return t_.rbegin()->first;
    }
    int low_degree() const
    {
        if (t_.empty())
            fail(ErrorCode::ZeroArgument, "low degree of zero Laurent polynomial");
        return t_.begin()->first;
    }
    const Scalar &lead() const { return t_.rbegin()->second; }
    Scalar coeff(int e) const
    {
        auto it = t_.find(e);
        return it == t_.end() ? Scalar(0) : it->second;
    }

    void add(int e, const Scalar &c)
    {
        if (c.is_zero())
            return;
        auto [it, inserted] = t_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                t_.erase(it);
        }
    }

    friend bool operator==(const LaurentPoly &a, const LaurentPoly &b) { return a.t_ == b.t_; }
    friend bool operator!=(const LaurentPoly &a, const LaurentPoly &b) { return !(a == b); }

    LaurentPoly operator-() const
    {
        LaurentPoly r(*this);
        for (auto &[e, c] : r.t_)
            c = -c;
        return r;
    }
    LaurentPoly &operator+=(const LaurentPoly &o)
    {
        for (const auto &[e, c] : o.t_)
            add(e, c);
        return *this;
    }
    LaurentPoly &operator-=(const LaurentPoly &o)
    {
        for (const auto &[e, c] : o.t_)
            add(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
    {
        LaurentPoly r;
        for (const auto &[ea, ca] : a.t_)
            for (const auto &[eb, cb] : b.t_)
                r.add(ea + eb, ca * cb);
        return r;
    }
    LaurentPoly &operator*=(const LaurentPoly &o) { return *this = *this * o; }
    LaurentPoly scaled(const Scalar &s) const
    {
        LaurentPoly r;
        for (const auto &[e, c] : t_)
            r.add(e, c * s);
        return r;
    }
    LaurentPoly shifted(int k) const
    {
        LaurentPoly r;
        for (const auto &[e, c] : t_)
            r.t_.emplace(e + k, c);
        return r;
    }
    LaurentPoly derivative() const
    {
        LaurentPoly r;
        for (const auto &[e, c] : t_)
            if (e != 0)
                r.add(e - 1, c * Scalar(e));
        return r;
    }
    LaurentPoly pow(int n) const
    {
        LaurentPoly r(Scalar(1));
        for (int i = 0; i < n; ++i)
            r *= *this;
        return r;
    }

    std::string str(const std::string &var = "x") const
    {
        if (t_.empty())
            return "0";
        std::string out;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            std::string cs = it->second.str();
            bool neg = it->second.is_rational() && cs[0] == '-';
            if (neg)
                cs = cs.substr(1);
            out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            if (it->first == 0) {
                out += cs;
                continue;
            }
            if (cs != "1")
                out += cs + "*";
            out += var;
            if (it->first != 1)
                out += "^" + std::to_string(it->first);
        }
        return out;
    }

private:
    Terms t_;
};

inline std::ostream &operator<<(std::ostream &os, const LaurentPoly &p) { return os << p.str(); }

} // namespace bispec
