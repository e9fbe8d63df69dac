#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bispec/diffop/diffop.hpp"
#include "bispec/errors.hpp"
#include "bispec/exactnum/series.hpp"

namespace bispec {

// sum_j a_j d^j over j <= top. Either exact (finitely many terms) or known
// for every power >= low(); powers below are unknown.
class PsdOp {
public:
    PsdOp() = default;
    PsdOp(const Series &c)
    {
        if (!(c.is_exact() && c.is_zero()))
            c_.emplace(0, c);
    }
    PsdOp(long c) : PsdOp(Series(c)) {}
    PsdOp(const SerOp &L)
    {
        for (int k = 0; k <= L.order(); ++k)
            set(k, L.coeff(k));
    }
    PsdOp(const RatOp &L, int floor) : PsdOp(to_series(L, floor)) {}

    static PsdOp d(int k)
    {
        PsdOp p;
        p.set(k, Series(1));
        return p;
    }
    static PsdOp term(const Series &c, int k)
    {
        PsdOp p;
        p.set(k, c);
        return p;
    }

    const std::map<int, Series> &terms() const { return c_; }
    bool is_exact() const { return !low_.has_value(); }
    std::optional<int> low() const { return low_; }
    bool known_at(int j) const { return !low_ || j >= *low_; }
    // Highest power carrying a term; for the empty operator the power just
    // above the known region (or 0).
    int top() const
    {
        if (!c_.empty())
            return c_.rbegin()->first;
        return low_ ? *low_ - 1 : 0;
    }
    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [](const auto &kv) { return kv.second.is_zero(); });
    }
    Series coeff(int j) const
    {
        if (!known_at(j))
            fail(ErrorCode::DepthExhausted, "coefficient of d^" + std::to_string(j) + " lies below the known depth");
        auto it = c_.find(j);
        return it == c_.end() ? Series() : it->second;
    }
    void set(int j, const Series &c)
    {
        if (c.is_exact() && c.is_zero())
            c_.erase(j);
        else
            c_[j] = c;
    }

    // Forget powers below l.
    PsdOp truncated(int l) const
    {
        PsdOp r(*this);
        if (r.low_ && *r.low_ >= l)
            return r;
        r.low_ = l;
        r.c_.erase(r.c_.begin(), r.c_.lower_bound(l));
        return r;
    }
    // Coefficient floors forgotten below f.
    PsdOp coeff_truncated(int f) const
    {
        PsdOp r(*this);
        for (auto &[j, c] : r.c_)
            c = c.truncated(f);
        return r;
    }

    friend bool operator==(const PsdOp &a, const PsdOp &b) { return a.low_ == b.low_ && a.c_ == b.c_; }
    friend bool operator!=(const PsdOp &a, const PsdOp &b) { return !(a == b); }

    PsdOp operator-() const
    {
        PsdOp r(*this);
        for (auto &[j, c] : r.c_)
            c = -c;
        return r;
    }
    friend PsdOp operator+(const PsdOp &a, const PsdOp &b)
    {
        PsdOp r;
        if (a.low_ || b.low_)
            r.low_ = std::max(a.low_.value_or(INT_MIN_GUARD), b.low_.value_or(INT_MIN_GUARD));
        for (const auto *s : {&a, &b})
            for (const auto &[j, c] : s->c_)
                if (r.known_at(j))
                    r.set(j, r.coeff_or_zero(j) + c);
        return r;
    }
    friend PsdOp operator-(const PsdOp &a, const PsdOp &b) { return a + (-b); }
    PsdOp &operator+=(const PsdOp &o) { return *this = *this + o; }
    PsdOp &operator-=(const PsdOp &o) { return *this = *this - o; }

    // Product with the generalized Leibniz rule
    //   (a d^i)(b d^j) = sum_m C(i,m) a b^(m) d^(i+j-m).
    // `cap` bounds the lowest computed power; it is required when both factors
    // are exact and the expansion does not terminate.
    static PsdOp mul(const PsdOp &a, const PsdOp &b, std::optional<int> cap = std::nullopt)
    {
        PsdOp r;
        if (a.c_.empty() && a.is_exact())
            return r;
        if (b.c_.empty() && b.is_exact())
            return r;
        std::optional<int> low;
        auto upd = [&](int v) { low = low ? std::max(*low, v) : v; };
        if (a.low_)
            upd(*a.low_ + b.top());
        if (b.low_)
            upd(*b.low_ + a.top());
        if (cap)
            upd(*cap);
        r.low_ = low;
        for (const auto &[i, ai] : a.c_) {
            if (ai.is_exact() && ai.is_zero())
                continue;
            for (const auto &[j, bj] : b.c_) {
                if (!low && i < 0 && !(bj.is_exact() && (bj.is_zero() || bj.bottom() >= 0)))
                    fail(ErrorCode::DepthExhausted, "non-terminating product needs a depth cap");
                Series der = bj;
                for (int m = 0;; ++m) {
                    if (i >= 0 && m > i)
                        break;
                    int p = i + j - m;
                    if (low && p < *low)
                        break;
                    if (m > 0)
                        der = der.derivative();
                    if (der.is_exact() && der.is_zero())
                        break;
                    Series t = ai * der;
                    if (m > 0 && !(i >= 0 && (m == 0 || m == i)))
                        t = t.scaled(Scalar(Rational(binomial(i, m))));
                    r.set(p, r.coeff_or_zero(p) + t);
                }
            }
        }
        return r;
    }
    friend PsdOp operator*(const PsdOp &a, const PsdOp &b) { return mul(a, b); }

    // Inverse to `depth` powers below the leading one (default: the known
    // depth of this operator). Series inverses of exact non-monomial leading
    // coefficients are cut at `floor`.
    PsdOp inverse(std::optional<int> depth = std::nullopt, std::optional<int> floor = std::nullopt) const
    {
        if (c_.empty())
            fail(ErrorCode::NonUnitLeadingCoefficient, "inverse of the zero operator");
        const int t = top();
        const Series &lead = c_.rbegin()->second;
        if (lead.is_zero())
            fail(ErrorCode::NonUnitLeadingCoefficient, "leading coefficient vanishes to precision");
        int D;
        if (low_) {
            D = t - *low_;
            if (depth)
                D = std::min(D, *depth);
        } else {
            if (!depth) {
                if (c_.size() == 1 && lead.is_exact() && lead.size() == 1)
                    return term(lead.inverse(), -t);
                fail(ErrorCode::DepthExhausted, "inverse of an exact operator needs a depth");
            }
            D = *depth;
        }
        std::optional<int> ff = floor;
        if (!ff)
            for (const auto &[j, c] : c_)
                if (c.floor())
                    ff = ff ? std::max(*ff, *c.floor()) : *c.floor();
        Series inv_lead = lead.inverse(ff ? ff : std::optional<int>(-64));
        PsdOp b = term(inv_lead, -t);
        b.low_ = -t - D;
        // residual R = 1 - a*b, tracked down to power -D
        PsdOp R = PsdOp(1) - mul(*this, b, -D);
        for (int k = 1; k <= D; ++k) {
            Series rk = R.coeff_or_zero(-k);
            if (rk.is_exact() && rk.is_zero())
                continue;
            Series bk = inv_lead * rk;
            PsdOp step = term(bk, -t - k);
            step.low_ = -t - D;
            b.set(-t - k, bk);
            R = R - mul(*this, step, -D);
        }
        return b;
    }

    // Drop negative powers.
    SerOp diff_part() const
    {
        if (low_ && *low_ > 0)
            fail(ErrorCode::DepthExhausted, "differential part not known");
        std::vector<Series> v;
        for (const auto &[j, c] : c_)
            if (j >= 0) {
                if (static_cast<int>(v.size()) <= j)
                    v.resize(j + 1);
                v[j] = c;
            }
        return SerOp(std::move(v));
    }
    // Negative powers only (keeps the low bound).
    PsdOp negative_part() const
    {
        PsdOp r;
        r.low_ = low_;
        for (const auto &[j, c] : c_)
            if (j < 0)
                r.set(j, c);
        return r;
    }

    std::string str() const
    {
        std::string out;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (it->second.is_zero())
                continue;
            if (!out.empty())
                out += " + ";
            out += "(" + it->second.to_laurent().str() + ")";
            if (it->first != 0)
                out += "*d^" + std::to_string(it->first);
        }
        if (out.empty())
            out = "0";
        if (low_)
            out += " + O(d^" + std::to_string(*low_ - 1) + ")";
        return out;
    }

private:
    Series coeff_or_zero(int j) const
    {
        auto it = c_.find(j);
        return it == c_.end() ? Series() : it->second;
    }

    static constexpr int INT_MIN_GUARD = -(1 << 29);

    std::map<int, Series> c_;
    std::optional<int> low_;
};

inline std::ostream &operator<<(std::ostream &os, const PsdOp &p) { return os << p.str(); }

inline PsdOp psdo_mul(const PsdOp &a, const PsdOp &b, std::optional<int> cap = std::nullopt)
{
    return PsdOp::mul(a, b, cap);
}
inline PsdOp psdo_invert(const PsdOp &a, std::optional<int> depth = std::nullopt) { return a.inverse(depth); }
inline SerOp diff_part(const PsdOp &p) { return p.diff_part(); }

// True if every known coefficient vanishes.
inline bool vanishes(const PsdOp &p) { return p.is_zero(); }

} // namespace bispec
