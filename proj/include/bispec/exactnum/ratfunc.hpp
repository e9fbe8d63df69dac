#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "bispec/errors.hpp"
#include "bispec/exactnum/laurent.hpp"
#include "bispec/exactnum/series.hpp"

namespace bispec {

// num/den in lowest terms with den monic.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(SPoly(Scalar(1))) {}
    RationalFunction(const Scalar &c) : num_(SPoly(c)), den_(SPoly(Scalar(1))) {}
    RationalFunction(long c) : RationalFunction(Scalar(c)) {}
    RationalFunction(SPoly num) : num_(std::move(num)), den_(SPoly(Scalar(1))) {}
    RationalFunction(SPoly num, SPoly den) : num_(std::move(num)), den_(std::move(den))
    {
        if (den_.is_zero())
            fail(ErrorCode::ZeroArgument, "zero denominator");
        reduce();
    }
    RationalFunction(const LaurentPoly &p)
    {
        if (p.is_zero()) {
            den_ = SPoly(Scalar(1));
            return;
        }
        int low = p.low_degree();
        int shift = low < 0 ? -low : 0;
        std::vector<Scalar> c(p.degree() + shift + 1, Scalar(0));
        for (const auto &[e, v] : p.terms())
            c[e + shift] = v;
        num_ = SPoly(std::move(c));
        den_ = SPoly::monomial(Scalar(1), shift);
    }
    static RationalFunction x() { return RationalFunction(SPoly::variable()); }

    const SPoly &num() const { return num_; }
    const SPoly &den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }
    // den is a power of x
    bool is_laurent() const { return den_.degree() == 0 || (den_.lead() == Scalar(1) && den_ == SPoly::monomial(Scalar(1), den_.degree())); }
    Scalar constant_value() const
    {
        if (!is_constant())
            fail(ErrorCode::InvalidArgument, "not a constant: " + str());
        return num_[0];
    }

    LaurentPoly to_laurent() const
    {
        if (!is_laurent())
            fail(ErrorCode::NotRational, "not a Laurent polynomial: " + str());
        return LaurentPoly::from_poly(num_, -den_.degree());
    }

    int ord_at_infinity() const
    {
        if (is_zero())
            fail(ErrorCode::ZeroArgument, "order at infinity of zero");
        return num_.degree() - den_.degree();
    }

    // Expansion at infinity known through x^floor; exact when den is a monomial.
    Series expand(int floor) const
    {
        if (is_zero())
            return Series();
        if (is_laurent())
            return Series(to_laurent());
        Series n(LaurentPoly::from_poly(num_));
        Series d(LaurentPoly::from_poly(den_));
        return (n * d.inverse(floor - num_.degree())).truncated(floor);
    }

    friend bool operator==(const RationalFunction &a, const RationalFunction &b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction &a, const RationalFunction &b) { return !(a == b); }

    RationalFunction operator-() const
    {
        RationalFunction r(*this);
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        if (a.den_ == b.den_)
            return RationalFunction(a.num_ + b.num_, a.den_);
        SPoly g = poly_gcd(a.den_, b.den_);
        SPoly ad = a.den_ / g, bd = b.den_ / g;
        return RationalFunction(a.num_ * bd + b.num_ * ad, a.den_ * bd);
    }
    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b)
    {
        if (a.is_zero() || b.is_zero())
            return RationalFunction();
        if (a.is_polynomial() && b.is_polynomial())
            return RationalFunction(a.num_ * b.num_);
        SPoly g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
        RationalFunction r;
        r.num_ = (a.num_ / g1) * (b.num_ / g2);
        r.den_ = (a.den_ / g2) * (b.den_ / g1);
        r.fix_lead();
        return r;
    }
    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b)
    {
        if (b.is_zero())
            fail(ErrorCode::ZeroArgument, "division by zero rational function");
        return a * RationalFunction(b.den_, b.num_);
    }
    RationalFunction &operator+=(const RationalFunction &o) { return *this = *this + o; }
    RationalFunction &operator-=(const RationalFunction &o) { return *this = *this - o; }
    RationalFunction &operator*=(const RationalFunction &o) { return *this = *this * o; }

    RationalFunction derivative() const
    {
        if (is_polynomial())
            return RationalFunction(num_.derivative().scaled(den_[0].inverse()));
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }
    RationalFunction pow(int n) const
    {
        if (n < 0)
            return RationalFunction(1) / pow(-n);
        RationalFunction r(1);
        for (int i = 0; i < n; ++i)
            r *= *this;
        return r;
    }
    Scalar eval(const Scalar &x0) const
    {
        Scalar d = den_.eval(x0);
        if (d.is_zero())
            fail(ErrorCode::ZeroArgument, "pole at evaluation point");
        return num_.eval(x0) / d;
    }

    std::string str(const std::string &var = "x") const
    {
        if (is_laurent())
            return to_laurent().str(var);
        return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
    }

private:
    void reduce()
    {
        if (num_.is_zero()) {
            den_ = SPoly(Scalar(1));
            return;
        }
        if (den_.degree() > 0) {
            SPoly g = poly_gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
        }
        fix_lead();
    }
    void fix_lead()
    {
        Scalar l = den_.lead();
        if (l != Scalar(1)) {
            Scalar inv = l.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    SPoly num_;
    SPoly den_;
};

inline std::ostream &operator<<(std::ostream &os, const RationalFunction &r) { return os << r.str(); }

inline int ord_at_infinity(const RationalFunction &r) { return r.ord_at_infinity(); }
inline int ord_at_infinity(const Series &s)
{
    if (s.is_zero())
        fail(ErrorCode::ZeroArgument, "order at infinity of zero");
    return s.lead_exponent();
}

} // namespace bispec
