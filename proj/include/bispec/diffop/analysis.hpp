#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bispec/diffop/diffop.hpp"
#include "bispec/errors.hpp"
#include "bispec/exactnum/algfactor.hpp"
#include "bispec/exactnum/bipoly.hpp"

namespace bispec {

// D(D-1)...(D-k+1)
inline SPoly falling_factorial(int k)
{
    SPoly r(Scalar(1));
    for (int i = 0; i < k; ++i)
        r = r * SPoly::linear(Scalar(i));
    return r;
}

// L = sum_w x^w p_w(D) with D = x d. Parts are known for w >= floor.
struct DForm {
    std::map<int, SPoly> parts;
    std::optional<int> floor;

    bool is_zero() const { return parts.empty(); }
    int weight() const
    {
        if (parts.empty())
            fail(ErrorCode::ZeroOperator, "weight of the zero operator");
        return parts.rbegin()->first;
    }
    const SPoly &top() const
    {
        if (parts.empty())
            fail(ErrorCode::ZeroOperator, "indicial polynomial of the zero operator");
        return parts.rbegin()->second;
    }
    SPoly part(int w) const
    {
        if (floor && w < *floor)
            fail(ErrorCode::PrecisionUnderflow, "D-form weight below floor");
        auto it = parts.find(w);
        return it == parts.end() ? SPoly() : it->second;
    }
    void add(int w, const SPoly &p)
    {
        if (p.is_zero())
            return;
        SPoly &slot = parts[w];
        slot = slot + p;
        if (slot.is_zero())
            parts.erase(w);
    }
};

inline DForm dform(const SerOp &L)
{
    DForm out;
    for (int k = 0; k <= L.order(); ++k) {
        const Series &c = L.coeff(k);
        if (c.floor()) {
            int f = *c.floor() - k;
            out.floor = out.floor ? std::max(*out.floor, f) : f;
        }
    }
    for (int k = 0; k <= L.order(); ++k) {
        const Series &c = L.coeff(k);
        if (c.is_zero())
            continue;
        SPoly ff = falling_factorial(k);
        const LaurentPoly lp = c.to_laurent();
        for (const auto &[e, v] : lp.terms()) {
            if (out.floor && e - k < *out.floor)
                continue;
            out.add(e - k, ff.scaled(v));
        }
    }
    return out;
}

inline bool has_laurent_coeffs(const RatOp &L)
{
    return std::all_of(L.coeffs().begin(), L.coeffs().end(), [](const RationalFunction &c) { return c.is_laurent(); });
}

// Exact for Laurent coefficients; otherwise coefficients are expanded
// through x^floor.
inline DForm dform(const RatOp &L, std::optional<int> floor = std::nullopt)
{
    if (has_laurent_coeffs(L))
        return dform(to_series(L, 0));
    if (!floor)
        fail(ErrorCode::NotRational, "D-form of non-Laurent coefficients needs a floor");
    return dform(to_series(L, *floor));
}

// Inverse of dform via D^j = sum_k S(j,k) x^k d^k.
inline RatOp from_dform(const DForm &f)
{
    if (f.floor)
        fail(ErrorCode::NotRational, "D-form is truncated");
    int n = 0;
    for (const auto &[w, p] : f.parts)
        n = std::max(n, p.degree());
    // stirling[j][k]
    std::vector<std::vector<Rational>> S(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    S[0][0] = 1;
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= j; ++k)
            S[j][k] = S[j - 1][k - 1] + Rational(k) * S[j - 1][k];
    std::vector<LaurentPoly> c(n + 1);
    for (const auto &[w, p] : f.parts)
        for (int j = 0; j <= p.degree(); ++j)
            for (int k = 0; k <= j; ++k)
                if (sgn(S[j][k]) != 0)
                    c[k].add(w + k, p[j] * Scalar(S[j][k]));
    return laurent_op(c);
}

// x^a f(D) * x^b g(D) = x^(a+b) f(D+b) g(D)
inline DForm dform_mul(const DForm &A, const DForm &B)
{
    if (A.floor || B.floor)
        fail(ErrorCode::InvalidArgument, "dform_mul expects exact D-forms");
    DForm out;
    for (const auto &[a, f] : A.parts)
        for (const auto &[b, g] : B.parts)
            out.add(a + b, f.shifted(Scalar(b)) * g);
    return out;
}

// Roots {alpha + k : factor(alpha) = 0, k in offsets}, min offset 0.
struct RootClass {
    SPoly factor;
    std::map<int, int> offsets; // offset -> multiplicity

    int span() const { return offsets.rbegin()->first - offsets.begin()->first; }
    int min_offset() const { return offsets.begin()->first; }
    int multiplicity_at_min() const { return offsets.begin()->second; }
    int size() const
    {
        int s = 0;
        for (const auto &[k, m] : offsets)
            s += m * factor.degree();
        return s;
    }
    // The member polynomial with roots alpha + k.
    SPoly member(int k) const { return factor.shifted(Scalar(-k)); }
    // Product over all members with multiplicity.
    SPoly product() const
    {
        SPoly r(Scalar(1));
        for (const auto &[k, m] : offsets)
            r = r * member(k).pow(m);
        return r;
    }
    bool is_linear() const { return factor.degree() == 1; }
    // Root at offset k when the factor is linear.
    Scalar root(int k = 0) const { return -factor[0] + Scalar(k); }
};

inline bool class_less(const RootClass &a, const RootClass &b)
{
    if (a.factor.degree() != b.factor.degree())
        return a.factor.degree() < b.factor.degree();
    for (int i = a.factor.degree(); i >= 0; --i)
        if (a.factor[i] != b.factor[i])
            return a.factor[i] < b.factor[i];
    return a.min_offset() < b.min_offset();
}

struct IndicialData {
    int weight = 0;
    SPoly indicial_poly;
    std::vector<RootClass> classes;

    int max_span() const
    {
        int s = 0;
        for (const auto &c : classes)
            s = std::max(s, c.span());
        return s;
    }
};

namespace detail {

// Integer k with u(D) = v(D - k), if any.
inline std::optional<int> integer_shift(const SPoly &u, const SPoly &v)
{
    int d = u.degree();
    if (d != v.degree() || d < 1)
        return std::nullopt;
    Scalar k = (v[d - 1] - u[d - 1]) / Scalar(d);
    if (!k.is_integer() || abs(k.rational().get_num()) > 1000000)
        return std::nullopt;
    int ki = static_cast<int>(k.rational().get_num().get_si());
    if (v.shifted(Scalar(-ki)) != u)
        return std::nullopt;
    return ki;
}

} // namespace detail

inline std::vector<RootClass> root_classes(const SPoly &p, const FieldHandle &field = nullptr)
{
    std::vector<RootClass> classes;
    for (const auto &f : factor_over_field(p, field)) {
        bool placed = false;
        for (auto &c : classes) {
            if (auto k = detail::integer_shift(f.factor, c.factor)) {
                c.offsets[*k] += f.multiplicity;
                placed = true;
                break;
            }
        }
        if (!placed) {
            RootClass c;
            c.factor = f.factor;
            c.offsets[0] = f.multiplicity;
            classes.push_back(std::move(c));
        }
    }
    for (auto &c : classes) {
        int m = c.min_offset();
        if (m != 0) {
            c.factor = c.member(m);
            std::map<int, int> o;
            for (const auto &[k, mult] : c.offsets)
                o[k - m] = mult;
            c.offsets = std::move(o);
        }
    }
    std::sort(classes.begin(), classes.end(), class_less);
    return classes;
}

inline FieldHandle op_field(const RatOp &L)
{
    FieldHandle f;
    for (const auto &c : L.coeffs())
        for (const auto *poly : {&c.num(), &c.den()})
            for (const auto &s : poly->coeffs())
                if (!s.is_rational())
                    f = s.field();
    return f;
}

inline FieldHandle op_field(const SerOp &L)
{
    FieldHandle f;
    for (const auto &c : L.coeffs()) {
        const LaurentPoly lp = c.to_laurent();
        for (const auto &[e, s] : lp.terms())
            if (!s.is_rational())
                f = s.field();
    }
    return f;
}

// Weight wt(L) = max_k (ord V_k - k) and the polynomial in D at that weight.
inline IndicialData indicial_data(const RatOp &L)
{
    if (L.is_zero())
        fail(ErrorCode::ZeroOperator, "indicial data of the zero operator");
    IndicialData out;
    bool first = true;
    for (int k = 0; k <= L.order(); ++k)
        if (!L.coeff(k).is_zero()) {
            int w = L.coeff(k).ord_at_infinity() - k;
            out.weight = first ? w : std::max(out.weight, w);
            first = false;
        }
    for (int k = 0; k <= L.order(); ++k) {
        const RationalFunction &c = L.coeff(k);
        if (!c.is_zero() && c.ord_at_infinity() - k == out.weight)
            out.indicial_poly = out.indicial_poly + falling_factorial(k).scaled(c.num().lead());
    }
    out.classes = root_classes(out.indicial_poly, op_field(L));
    return out;
}

inline IndicialData indicial_data(const SerOp &L)
{
    DForm f = dform(L);
    IndicialData out;
    out.weight = f.weight();
    out.indicial_poly = f.top();
    out.classes = root_classes(out.indicial_poly, op_field(L));
    return out;
}

struct GradedProfile {
    int rho = 0;
    int sigma = 0;
    int order_v = 0;
    BiLaurent assoc_poly;
};

// v = max_k (rho * ord V_k + sigma * k); assoc_poly collects lc(V_k) X^ord Y^k
// over the maximal terms.
inline GradedProfile graded_profile(const RatOp &L, int rho, int sigma)
{
    if (rho + sigma <= 0)
        fail(ErrorCode::InvalidArgument, "rho + sigma must be positive");
    if (rho < 0)
        fail(ErrorCode::InvalidArgument, "rho must be non-negative");
    if (L.is_zero())
        fail(ErrorCode::ZeroOperator, "graded profile of the zero operator");
    GradedProfile g{rho, sigma, 0, {}};
    bool first = true;
    for (int k = 0; k <= L.order(); ++k) {
        const auto &c = L.coeff(k);
        if (c.is_zero())
            continue;
        if (c.ord_at_infinity() > 0)
            fail(ErrorCode::UnsupportedCoefficient, "coefficient grows at infinity: " + c.str());
        int v = rho * c.ord_at_infinity() + sigma * k;
        g.order_v = first ? v : std::max(g.order_v, v);
        first = false;
    }
    for (int k = 0; k <= L.order(); ++k) {
        const auto &c = L.coeff(k);
        if (!c.is_zero() && rho * c.ord_at_infinity() + sigma * k == g.order_v)
            g.assoc_poly.add(c.ord_at_infinity(), k, c.num().lead());
    }
    return g;
}

struct PrincipalLevel {
    Rational r;
    bool fuchsian_at_infinity = false;
    int rho = 0;
    int sigma = 0; // meaningful when r > 1
};

inline void require_normalized(const RatOp &L)
{
    if (L.order() < 1 || !L.is_monic())
        fail(ErrorCode::NotNormalized, "operator must be monic of order >= 1");
    if (L.order() >= 2 && !L.coeff(L.order() - 1).is_zero())
        fail(ErrorCode::NotNormalized, "coefficient of d^(N-1) must vanish");
}

inline PrincipalLevel principal_level(const RatOp &L)
{
    require_normalized(L);
    const int N = L.order();
    PrincipalLevel out;
    out.r = 1;
    for (int k = 1; k <= N; ++k) {
        const auto &c = L.coeff(N - k);
        if (c.is_zero())
            continue;
        if (c.ord_at_infinity() >= 0)
            fail(ErrorCode::CoefficientNotVanishing, "coefficient of d^" + std::to_string(N - k) + " does not vanish at infinity");
        Rational v = Rational(2) + Rational(c.ord_at_infinity(), k);
        v.canonicalize();
        if (v > out.r)
            out.r = v;
    }
    out.fuchsian_at_infinity = out.r == 1;
    if (!out.fuchsian_at_infinity) {
        long r1 = out.r.get_num().get_si(), r2 = out.r.get_den().get_si();
        out.rho = static_cast<int>(r2);
        out.sigma = static_cast<int>(r1 - 2 * r2);
    }
    return out;
}

struct SingularPoint {
    SPoly factor; // monic irreducible; its roots are the points
    int worst_excess = 0; // max_k (pole order of V_{N-k}/V_N) - k
    bool regular = true;
};

struct FuchsianReport {
    std::vector<SingularPoint> finite;
    bool infinity_regular = true;
    bool fuchsian = true;
};

inline FuchsianReport fuchsian_everywhere(const RatOp &L)
{
    if (L.order() < 1)
        fail(ErrorCode::InvalidArgument, "order must be >= 1");
    const int N = L.order();
    std::vector<RationalFunction> w(N + 1);
    for (int k = 0; k <= N; ++k)
        w[k] = L.coeff(k) / L.lead();
    FuchsianReport rep;
    std::vector<SPoly> factors;
    for (int k = 0; k < N; ++k) {
        if (w[k].is_zero() || w[k].den().degree() == 0)
            continue;
        for (const auto &f : factor_over_field(w[k].den(), op_field(L)))
            if (std::find(factors.begin(), factors.end(), f.factor) == factors.end())
                factors.push_back(f.factor);
    }
    std::sort(factors.begin(), factors.end(), [](const SPoly &a, const SPoly &b) {
        RootClass ca{a, {{0, 1}}}, cb{b, {{0, 1}}};
        return class_less(ca, cb);
    });
    for (const auto &q : factors) {
        SingularPoint sp{q, -1000000, true};
        for (int k = 1; k <= N; ++k) {
            if (w[N - k].is_zero())
                continue;
            SPoly den = w[N - k].den();
            int mult = detail::multiplicity_in(den, q);
            sp.worst_excess = std::max(sp.worst_excess, mult - k);
        }
        sp.regular = sp.worst_excess <= 0;
        rep.fuchsian = rep.fuchsian && sp.regular;
        rep.finite.push_back(std::move(sp));
    }
    for (int k = 1; k <= N; ++k)
        if (!w[N - k].is_zero() && w[N - k].ord_at_infinity() > -k)
            rep.infinity_regular = false;
    rep.fuchsian = rep.fuchsian && rep.infinity_regular;
    return rep;
}

// Every D-form weight = -N mod r (the coefficient of d^(N-i) supported on
// exponents = -i mod r). Only known terms are inspected.
inline bool zr_invariant(const DForm &f, int r)
{
    int N = 0;
    for (const auto &[w, p] : f.parts)
        N = std::max(N, p.degree());
    for (const auto &[w, p] : f.parts)
        if ((((w + N) % r) + r) % r != 0)
            return false;
    return true;
}

inline bool zr_invariant(const SerOp &L, int r) { return zr_invariant(dform(L), r); }

// Exact: L(zeta x) = zeta^-N L(x) for zeta^r = 1, i.e. the coefficient of d^k
// is supported on exponents k - N mod r. Read off the supports of the reduced
// numerator and monic denominator.
inline bool zr_invariant(const RatOp &L, int r)
{
    auto ok = [r](const SPoly &p, int residue) {
        for (int i = 0; i <= p.degree(); ++i)
            if (!p[i].is_zero() && (((i - residue) % r) + r) % r != 0)
                return false;
        return true;
    };
    for (int k = 0; k <= L.order(); ++k) {
        const auto &c = L.coeff(k);
        if (c.is_zero())
            continue;
        int dd = c.den().degree();
        if (!ok(c.den(), dd) || !ok(c.num(), dd + k - L.order()))
            return false;
    }
    return true;
}

// Largest r <= order with L Z_r-invariant.
inline int zr_invariance(const RatOp &L)
{
    for (int r = std::max(1, L.order()); r > 1; --r)
        if (zr_invariant(L, r))
            return r;
    return 1;
}

// gcd of all D-form weights (0 for a single weight 0 part).
inline int weight_gcd(const DForm &f)
{
    int g = 0;
    for (const auto &[w, p] : f.parts)
        g = std::gcd(g, w);
    return g;
}

} // namespace bispec
