#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bispec/errors.hpp"
#include "bispec/exactnum/laurent.hpp"

namespace bispec {

// Expansion sum_{e <= lead} c_e x^e at infinity.
//
// Either exact (finitely many terms, no error) or known for every exponent
// >= floor(); coefficients below the floor are unknown.
class Series {
public:
    Series() = default;
    Series(const Scalar &c) : Series(LaurentPoly(c)) {}
    Series(long c) : Series(Scalar(c)) {}
    Series(const LaurentPoly &p)
    {
        if (p.is_zero())
            return;
        lead_ = p.degree();
        c_.assign(lead_ - p.low_degree() + 1, Scalar(0));
        for (const auto &[e, c] : p.terms())
            c_[lead_ - e] = c;
    }
    static Series monomial(const Scalar &c, int e) { return Series(LaurentPoly::monomial(c, e)); }

    // Coefficients c_e for floor <= e <= top; all others above top are zero.
    static Series known(int top, std::vector<Scalar> coeffs_from_top, int floor)
    {
        Series s;
        s.floor_ = floor;
        s.lead_ = top;
        coeffs_from_top.resize(std::max(0, top - floor + 1), Scalar(0));
        s.c_ = std::move(coeffs_from_top);
        s.normalize();
        return s;
    }
    // Every coefficient with exponent >= floor is zero; the rest are unknown.
    static Series unknown_below(int floor)
    {
        Series s;
        s.floor_ = floor;
        s.lead_ = floor - 1;
        return s;
    }

    bool is_exact() const { return !floor_.has_value(); }
    // Lowest exponent with a known coefficient; nullopt when exact.
    std::optional<int> floor() const { return floor_; }
    // True if every known coefficient vanishes.
    bool is_zero() const { return c_.empty(); }
    int lead_exponent() const
    {
        if (c_.empty())
            fail(ErrorCode::ZeroArgument, "lead exponent of a series with no known nonzero term");
        return lead_;
    }
    const Scalar &lead() const
    {
        if (c_.empty())
            fail(ErrorCode::ZeroArgument, "lead coefficient of a series with no known nonzero term");
        return c_.front();
    }
    // Highest exponent that could carry a nonzero coefficient.
    int top() const { return c_.empty() ? (floor_ ? *floor_ - 1 : 0) : lead_; }
    // Lowest stored exponent.
    int bottom() const { return lead_ - static_cast<int>(c_.size()) + 1; }

    bool known_at(int e) const { return !floor_ || e >= *floor_; }
    Scalar coeff(int e) const
    {
        if (!known_at(e))
            fail(ErrorCode::PrecisionUnderflow, "coefficient of x^" + std::to_string(e) + " lies below the series floor");
        if (c_.empty() || e > lead_ || e < bottom())
            return Scalar(0);
        return c_[lead_ - e];
    }

    // gcd of exponent gaps over the retained support; 0 for monomials and zero.
    int step() const
    {
        int g = 0;
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (!c_[i].is_zero())
                g = std::gcd(g, static_cast<int>(i));
        return g;
    }
    // Number of retained coefficient slots.
    std::size_t size() const { return c_.size(); }

    LaurentPoly to_laurent() const
    {
        LaurentPoly p;
        for (std::size_t i = 0; i < c_.size(); ++i)
            p.add(lead_ - static_cast<int>(i), c_[i]);
        return p;
    }
    // Part with exponents >= e, as an exact Laurent polynomial.
    LaurentPoly part_above(int e) const
    {
        LaurentPoly p;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            int ex = lead_ - static_cast<int>(i);
            if (ex >= e)
                p.add(ex, c_[i]);
        }
        return p;
    }

    // Forget coefficients below f.
    Series truncated(int f) const
    {
        if (floor_ && *floor_ >= f)
            return *this;
        Series s(*this);
        s.floor_ = f;
        if (!s.c_.empty()) {
            int keep = std::max(0, s.lead_ - f + 1);
            if (static_cast<int>(s.c_.size()) > keep)
                s.c_.resize(keep);
        }
        s.normalize();
        return s;
    }

    friend bool operator==(const Series &a, const Series &b)
    {
        return a.floor_ == b.floor_ && a.c_ == b.c_ && (a.c_.empty() || a.lead_ == b.lead_);
    }

    // Agreement on every exponent both sides know.
    friend bool agree(const Series &a, const Series &b)
    {
        return (a - b).is_zero();
    }

    Series operator-() const
    {
        Series r(*this);
        for (auto &c : r.c_)
            c = -c;
        return r;
    }
    friend Series operator+(const Series &a, const Series &b) { return combine(a, b, false); }
    friend Series operator-(const Series &a, const Series &b) { return combine(a, b, true); }
    Series &operator+=(const Series &o) { return *this = *this + o; }
    Series &operator-=(const Series &o) { return *this = *this - o; }

    friend Series operator*(const Series &a, const Series &b)
    {
        if ((a.is_exact() && a.c_.empty()) || (b.is_exact() && b.c_.empty()))
            return Series();
        std::optional<int> f = product_floor(a, b);
        if (a.c_.empty() || b.c_.empty()) {
            if (!f)
                return Series();
            return unknown_below(*f);
        }
        int top = a.lead_ + b.lead_;
        int low = a.bottom() + b.bottom();
        if (f)
            low = std::max(low, *f);
        if (low > top)
            return unknown_below(*f);
        std::vector<Scalar> out(top - low + 1, Scalar(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                int k = static_cast<int>(i + j);
                if (k >= static_cast<int>(out.size()))
                    break;
                if (!b.c_[j].is_zero())
                    out[k] += a.c_[i] * b.c_[j];
            }
        }
        Series r;
        r.lead_ = top;
        r.c_ = std::move(out);
        r.floor_ = f;
        r.normalize();
        return r;
    }
    Series &operator*=(const Series &o) { return *this = *this * o; }

    Series scaled(const Scalar &s) const
    {
        if (s.is_zero())
            return floor_ ? unknown_below(*floor_) : Series();
        Series r(*this);
        for (auto &c : r.c_)
            c *= s;
        return r;
    }
    Series shifted(int k) const
    {
        Series r(*this);
        r.lead_ += k;
        if (r.floor_)
            *r.floor_ += k;
        return r;
    }
    Series derivative() const
    {
        Series r;
        if (floor_)
            r.floor_ = *floor_ - 1;
        if (!c_.empty()) {
            r.lead_ = lead_ - 1;
            r.c_.reserve(c_.size());
            for (std::size_t i = 0; i < c_.size(); ++i)
                r.c_.push_back(c_[i] * Scalar(lead_ - static_cast<int>(i)));
        }
        r.normalize();
        return r;
    }
    // Antiderivative with zero constant; x^-1 has none in this class.
    Series integral() const
    {
        Series r;
        if (floor_)
            r.floor_ = *floor_ + 1;
        if (!c_.empty()) {
            r.lead_ = lead_ + 1;
            for (std::size_t i = 0; i < c_.size(); ++i) {
                int e = lead_ - static_cast<int>(i);
                if (e == -1) {
                    if (!c_[i].is_zero())
                        fail(ErrorCode::IntegrationObstruction, "nonzero x^-1 coefficient " + c_[i].str());
                    r.c_.push_back(Scalar(0));
                } else {
                    r.c_.push_back(c_[i] / Scalar(e + 1));
                }
            }
        }
        r.normalize();
        return r;
    }

    // 1/s. For an exact non-monomial input the expansion is infinite and is
    // cut at `floor`.
    Series inverse(std::optional<int> floor = std::nullopt) const
    {
        if (c_.empty())
            fail(ErrorCode::ZeroArgument, "inverse of a series with no known nonzero term");
        int e = lead_;
        if (!floor_ && c_.size() == 1)
            return monomial(c_[0].inverse(), -e);
        // result index k covers exponent -e-k; input relative index i covers e-i
        int kmax;
        if (floor_) {
            kmax = e - *floor_;
            if (floor)
                kmax = std::min(kmax, -e - *floor);
        } else {
            if (!floor)
                fail(ErrorCode::InvalidArgument, "inverse of a non-monomial exact series needs a floor");
            kmax = -e - *floor;
        }
        if (kmax < 0)
            return unknown_below(-e - kmax);
        Scalar inv = c_[0].inverse();
        std::vector<Scalar> r(kmax + 1, Scalar(0));
        r[0] = inv;
        for (int k = 1; k <= kmax; ++k) {
            Scalar acc(0);
            int lim = std::min<int>(k, static_cast<int>(c_.size()) - 1);
            for (int i = 1; i <= lim; ++i)
                if (!c_[i].is_zero() && !r[k - i].is_zero())
                    acc += c_[i] * r[k - i];
            r[k] = -acc * inv;
        }
        return known(-e, std::move(r), -e - kmax);
    }

    Series pow(int n) const
    {
        Series r(1);
        for (int i = 0; i < n; ++i)
            r *= *this;
        return r;
    }

    std::string str(const std::string &var = "x") const
    {
        std::string s = to_laurent().str(var);
        if (floor_)
            s += " + O(" + var + "^" + std::to_string(*floor_ - 1) + ")";
        return s;
    }

private:
    static std::optional<int> product_floor(const Series &a, const Series &b)
    {
        std::optional<int> f;
        auto upd = [&](int v) { f = f ? std::max(*f, v) : v; };
        if (a.floor_)
            upd(*a.floor_ + b.top());
        if (b.floor_)
            upd(*b.floor_ + a.top());
        return f;
    }

    static Series combine(const Series &a, const Series &b, bool negate)
    {
        std::optional<int> f;
        if (a.floor_ || b.floor_)
            f = std::max(a.floor_.value_or(INT_MIN_GUARD), b.floor_.value_or(INT_MIN_GUARD));
        int top = std::max(a.c_.empty() ? INT_MIN_GUARD : a.lead_, b.c_.empty() ? INT_MIN_GUARD : b.lead_);
        if (top == INT_MIN_GUARD)
            return f ? unknown_below(*f) : Series();
        int low = std::min(a.c_.empty() ? top : a.bottom(), b.c_.empty() ? top : b.bottom());
        if (f)
            low = std::max(low, *f);
        if (low > top)
            return unknown_below(*f);
        std::vector<Scalar> out(top - low + 1, Scalar(0));
        auto add = [&](const Series &s, bool neg) {
            for (std::size_t i = 0; i < s.c_.size(); ++i) {
                int e = s.lead_ - static_cast<int>(i);
                if (e < low)
                    break;
                if (neg)
                    out[top - e] -= s.c_[i];
                else
                    out[top - e] += s.c_[i];
            }
        };
        add(a, false);
        add(b, negate);
        Series r;
        r.lead_ = top;
        r.c_ = std::move(out);
        r.floor_ = f;
        r.normalize();
        return r;
    }

    void normalize()
    {
        std::size_t z = 0;
        while (z < c_.size() && c_[z].is_zero())
            ++z;
        if (z == c_.size()) {
            c_.clear();
            lead_ = floor_ ? *floor_ - 1 : 0;
            return;
        }
        if (z) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(z));
            lead_ -= static_cast<int>(z);
        }
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    static constexpr int INT_MIN_GUARD = -(1 << 29);

    int lead_ = 0;
    std::vector<Scalar> c_;
    std::optional<int> floor_;
};

inline std::ostream &operator<<(std::ostream &os, const Series &s) { return os << s.str(); }

} // namespace bispec
