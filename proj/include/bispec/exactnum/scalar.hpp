#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bispec/errors.hpp"
#include "bispec/exactnum/factor.hpp"
#include "bispec/exactnum/rational.hpp"
#include "bispec/exactnum/upoly.hpp"

namespace bispec {

// Simple algebraic extension Q(a) = Q[t]/(m(t)) with m monic irreducible.
class NumberField {
public:
    NumberField(QPoly minpoly, std::string generator)
        : minpoly_(std::move(minpoly)), generator_(std::move(generator))
    {
    }

    int degree() const { return minpoly_.degree(); }
    const QPoly &minimal_polynomial() const { return minpoly_; }
    const std::string &generator() const { return generator_; }

    friend bool operator==(const NumberField &a, const NumberField &b) { return a.minpoly_ == b.minpoly_; }

private:
    QPoly minpoly_;
    std::string generator_;
};

using FieldHandle = std::shared_ptr<const NumberField>;

// Returns a handle for Q(a), or nullptr when the minimal polynomial is linear
// (the extension is Q itself).
inline FieldHandle field_extend(const QPoly &minpoly, std::string generator = "a")
{
    if (minpoly.degree() < 1 || minpoly.lead() != 1)
        fail(ErrorCode::InvalidArgument, "minimal polynomial must be monic of degree >= 1");
    if (minpoly.degree() == 1)
        return nullptr;
    if (!is_irreducible(minpoly))
        fail(ErrorCode::ReducibleMinimalPolynomial, minpoly.to_string("t") + " factors over Q");
    return std::make_shared<const NumberField>(minpoly, std::move(generator));
}

inline bool same_field(const FieldHandle &a, const FieldHandle &b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

// Element of Q or of one simple extension Q(a). Rational values never carry
// a field handle, so mixing a rational with an algebraic value is always
// allowed; mixing two different extensions throws UnsupportedFieldSplit.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : q_(v) {}
    Scalar(int v) : q_(v) {}
    Scalar(Rational q) : q_(std::move(q)) {}
    Scalar(long num, long den) : q_(make_rational(num, den)) {}

    // Element sum_i c[i] a^i of the given field (c.size() <= degree).
    static Scalar from_coeffs(const FieldHandle &field, const std::vector<Rational> &c)
    {
        Scalar s;
        if (!c.empty())
            s.q_ = c[0];
        if (field) {
            s.field_ = field;
            s.ext_.assign(static_cast<std::size_t>(field->degree() - 1), Rational(0));
            for (std::size_t i = 1; i < c.size(); ++i)
                s.ext_.at(i - 1) = c[i];
        }
        s.normalize();
        return s;
    }
    static Scalar generator(const FieldHandle &field)
    {
        if (!field)
            fail(ErrorCode::InvalidArgument, "Q has no generator");
        return from_coeffs(field, {Rational(0), Rational(1)});
    }

    bool is_rational() const { return !field_; }
    const Rational &rational() const
    {
        if (field_)
            fail(ErrorCode::NotRational, "scalar " + str() + " is not rational");
        return q_;
    }
    const FieldHandle &field() const { return field_; }
    // Coefficients in the power basis 1, a, a^2, ...
    std::vector<Rational> coeffs() const
    {
        std::vector<Rational> c{q_};
        c.insert(c.end(), ext_.begin(), ext_.end());
        return c;
    }

    bool is_zero() const { return !field_ && sgn(q_) == 0; }
    bool is_integer() const { return !field_ && q_.get_den() == 1; }

    friend bool operator==(const Scalar &a, const Scalar &b)
    {
        return a.q_ == b.q_ && a.ext_ == b.ext_ && same_field(a.field_, b.field_);
    }
    friend bool operator!=(const Scalar &a, const Scalar &b) { return !(a == b); }
    // Total order used only for deterministic tie-breaking (not the real order
    // on algebraic values).
    friend std::strong_ordering operator<=>(const Scalar &a, const Scalar &b)
    {
        auto ca = a.coeffs(), cb = b.coeffs();
        if (ca.size() != cb.size())
            return ca.size() <=> cb.size();
        for (std::size_t i = 0; i < ca.size(); ++i) {
            int s = cmp(ca[i], cb[i]);
            if (s != 0)
                return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }

    Scalar operator-() const
    {
        Scalar r(*this);
        r.q_ = -r.q_;
        for (auto &e : r.ext_)
            e = -e;
        return r;
    }
    Scalar &operator+=(const Scalar &o)
    {
        adopt(o);
        q_ += o.q_;
        for (std::size_t i = 0; i < o.ext_.size(); ++i)
            ext_[i] += o.ext_[i];
        normalize();
        return *this;
    }
    Scalar &operator-=(const Scalar &o) { return *this += -o; }
    Scalar &operator*=(const Scalar &o)
    {
        if (!field_ && !o.field_) {
            q_ *= o.q_;
            return *this;
        }
        if (!o.field_) {
            q_ *= o.q_;
            for (auto &e : ext_)
                e *= o.q_;
            normalize();
            return *this;
        }
        if (!field_) {
            Scalar r(o);
            for (auto &e : r.ext_)
                e *= q_;
            r.q_ *= q_;
            r.normalize();
            return *this = std::move(r);
        }
        check_field(o);
        QPoly prod = as_poly() * o.as_poly();
        return *this = from_poly(field_, prod % field_->minimal_polynomial());
    }
    Scalar &operator/=(const Scalar &o) { return *this *= o.inverse(); }

    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }

    Scalar inverse() const
    {
        if (is_zero())
            fail(ErrorCode::ZeroArgument, "inverse of zero scalar");
        if (!field_) {
            Scalar r;
            r.q_ = 1 / q_;
            return r;
        }
        auto [g, s, t] = poly_exgcd(as_poly(), field_->minimal_polynomial());
        return from_poly(field_, s);
    }

    Scalar pow(int e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        Scalar r(1), b(*this);
        while (e > 0) {
            if (e & 1)
                r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // "p/q" for rationals; "(c0 + c1*a)/q" for extension elements.
    std::string str() const
    {
        if (!field_)
            return q_.get_str();
        Integer den = q_.get_den();
        for (const auto &e : ext_)
            den = lcm(den, Integer(e.get_den()));
        std::vector<Integer> nums;
        nums.emplace_back(q_.get_num() * (den / q_.get_den()));
        for (const auto &e : ext_)
            nums.emplace_back(e.get_num() * (den / e.get_den()));
        std::string body;
        for (std::size_t i = 0; i < nums.size(); ++i) {
            if (nums[i] == 0)
                continue;
            Integer mag = abs(nums[i]);
            std::string term;
            if (i == 0)
                term = mag.get_str();
            else {
                term = (mag == 1 ? "" : mag.get_str() + "*") + field_->generator();
                if (i > 1)
                    term += "^" + std::to_string(i);
            }
            if (body.empty())
                body = (nums[i] < 0 ? "-" : "") + term;
            else
                body += (nums[i] < 0 ? " - " : " + ") + term;
        }
        std::string out = "(" + body + ")";
        if (den != 1)
            out += "/" + den.get_str();
        return out;
    }

private:
    void adopt(const Scalar &o)
    {
        if (!o.field_)
            return;
        if (!field_) {
            field_ = o.field_;
            ext_.assign(o.ext_.size(), Rational(0));
            return;
        }
        check_field(o);
    }
    void check_field(const Scalar &o) const
    {
        if (!same_field(field_, o.field_))
            fail(ErrorCode::UnsupportedFieldSplit, "scalars from two different extensions");
    }
    void normalize()
    {
        for (const auto &e : ext_)
            if (sgn(e) != 0)
                return;
        ext_.clear();
        field_.reset();
    }
    QPoly as_poly() const { return QPoly(coeffs()); }
    static Scalar from_poly(const FieldHandle &f, const QPoly &p)
    {
        return from_coeffs(f, p.coeffs());
    }

    Rational q_{0};
    FieldHandle field_;
    std::vector<Rational> ext_;
};

inline bool is_zero(const Scalar &s) { return s.is_zero(); }
inline std::string to_string(const Scalar &s) { return s.str(); }
inline std::ostream &operator<<(std::ostream &os, const Scalar &s) { return os << s.str(); }

using SPoly = UPoly<Scalar>;

inline SPoly to_spoly(const QPoly &p)
{
    std::vector<Scalar> c;
    for (const auto &x : p.coeffs())
        c.emplace_back(x);
    return SPoly(std::move(c));
}

// The common field of a list of scalars (nullptr when all rational).
template <typename Range>
FieldHandle common_field(const Range &values)
{
    FieldHandle f;
    for (const Scalar &s : values) {
        if (!s.field())
            continue;
        if (f && !same_field(f, s.field()))
            fail(ErrorCode::UnsupportedFieldSplit, "values from two different extensions");
        f = s.field();
    }
    return f;
}

} // namespace bispec
