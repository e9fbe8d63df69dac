#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bispec/darboux/darboux.hpp"

namespace bispec {

// (ad L)^k A
inline RatOp ad_apply(const RatOp &L, RatOp A, int k)
{
    for (int i = 0; i < k; ++i)
        A = commutator(L, A);
    return A;
}

namespace detail {

// Rows "coefficient of x^e d^k in sum_i t_i A_i = 0" over a common denominator.
inline void append_operator_equations(const std::vector<RatOp> &A, Matrix &rows)
{
    int n = -1;
    for (const auto &a : A)
        n = std::max(n, a.order());
    for (int k = 0; k <= n; ++k) {
        SPoly den(Scalar(1));
        for (const auto &a : A)
            if (!a.coeff(k).is_zero())
                den = den * (a.coeff(k).den() / poly_gcd(den, a.coeff(k).den()));
        std::vector<SPoly> nums;
        int deg = -1;
        for (const auto &a : A) {
            RationalFunction v = a.coeff(k) * RationalFunction(den);
            nums.push_back(v.num());
            deg = std::max(deg, v.num().degree());
        }
        for (int e = 0; e <= deg; ++e) {
            Vector row(A.size(), Scalar(0));
            bool any = false;
            for (std::size_t i = 0; i < A.size(); ++i) {
                row[i] = nums[i][e];
                any = any || !row[i].is_zero();
            }
            if (any)
                rows.push_back(std::move(row));
        }
    }
}

} // namespace detail

struct ThetaResult {
    LaurentPoly theta;
    int m = 0;
    int max_deg = 0, max_m = 0;
};

// Smallest (m, deg) with a nonconstant polynomial theta, deg theta <= max_deg,
// and (ad L)^(m+1) theta = 0. Constants are dropped (they always commute), so
// the solution at the minimal degree is unique up to scale.
inline ThetaResult find_theta(const RatOp &L, int max_deg, int max_m)
{
    std::vector<std::vector<RatOp>> ad(static_cast<std::size_t>(max_deg) + 1); // ad[i][k] = (ad L)^k x^i
    for (int i = 1; i <= max_deg; ++i)
        ad[static_cast<std::size_t>(i)].push_back(op_x(i));
    for (int m = 0; m <= max_m; ++m) {
        for (int i = 1; i <= max_deg; ++i) {
            auto &v = ad[static_cast<std::size_t>(i)];
            while (static_cast<int>(v.size()) <= m + 1)
                v.push_back(commutator(L, v.back()));
        }
        for (int deg = 1; deg <= max_deg; ++deg) {
            std::vector<RatOp> A;
            for (int i = 1; i <= deg; ++i)
                A.push_back(ad[static_cast<std::size_t>(i)][static_cast<std::size_t>(m + 1)]);
            Matrix rows;
            detail::append_operator_equations(A, rows);
            for (const auto &v : nullspace(rows, A.size())) {
                if (v.back().is_zero())
                    continue;
                ThetaResult out;
                for (int i = 1; i <= deg; ++i)
                    out.theta.add(i, v[static_cast<std::size_t>(i - 1)] / v.back());
                out.m = m;
                out.max_deg = max_deg;
                out.max_m = max_m;
                return out;
            }
        }
    }
    fail(ErrorCode::NotFound, "no theta with deg <= " + std::to_string(max_deg) + " and m <= " + std::to_string(max_m));
}

// Lambda = b(K^-1 theta K) as sum_i Lambda_i(z) d_z^i. Coefficients are
// series in z (the variable is printed as x by the generic printers).
inline SerOp build_lambda(const WaveOperator &w, const LaurentPoly &theta, int depth)
{
    if (theta.is_zero())
        return SerOp();
    if (theta.low_degree() < 0)
        fail(ErrorCode::InvalidArgument, "theta must be a polynomial");
    const int m = theta.degree();
    PsdOp Theta = conjugate_by_wave(w, PsdOp(Series(theta)), depth);
    PsdOp B = bispectral_b(Theta);
    if (B.low() && *B.low() > 0)
        fail(ErrorCode::DepthExhausted, "d_z powers below " + std::to_string(*B.low()) + " are not known");
    std::vector<Series> coeffs(static_cast<std::size_t>(m) + 1);
    for (const auto &[a, c] : B.terms()) {
        if (c.is_zero())
            continue;
        if (a < 0 || a > m)
            fail(ErrorCode::TailNotVanishing, "term " + c.str("z") + " d_z^" + std::to_string(a) + " outside orders 0.." + std::to_string(m));
        coeffs[static_cast<std::size_t>(a)] = c;
    }
    SerOp Lambda(std::move(coeffs));
    // leading coefficients agree with those of theta
    for (int i : {m, m - 1}) {
        if (i < 0)
            continue;
        Series want(theta.coeff(i));
        if (!(Lambda.coeff(i) - want).is_zero())
            fail(ErrorCode::InvariantViolated, "Lambda_" + std::to_string(i) + " differs from theta_" + std::to_string(i));
    }
    return Lambda;
}

inline SerOp build_lambda(const RatOp &L, const LaurentPoly &theta, int prec, int depth)
{
    return build_lambda(solve_wave_operator(L, prec, depth), theta, depth);
}

// Bivariate symbol sum_j c_j(x) z^j, known for z powers >= zlow.
struct BiSymbol {
    std::map<int, Series> c;
    std::optional<int> zlow;

    int ztop() const { return c.empty() ? (zlow ? *zlow - 1 : 0) : c.rbegin()->first; }
    bool known(int j) const { return !zlow || j >= *zlow; }
    void add(int j, const Series &s)
    {
        if (!known(j))
            return;
        auto it = c.find(j);
        Series v = it == c.end() ? s : it->second + s;
        if (v.is_exact() && v.is_zero())
            c.erase(j);
        else
            c[j] = v;
    }
    void restrict_low(std::optional<int> l)
    {
        if (!l)
            return;
        zlow = zlow ? std::max(*zlow, *l) : *l;
        c.erase(c.begin(), c.lower_bound(*zlow));
    }
    friend BiSymbol operator+(const BiSymbol &a, const BiSymbol &b)
    {
        BiSymbol r;
        if (a.zlow || b.zlow)
            r.zlow = std::max(a.zlow.value_or(-(1 << 29)), b.zlow.value_or(-(1 << 29)));
        for (const auto *s : {&a, &b})
            for (const auto &[j, v] : s->c)
                r.add(j, v);
        return r;
    }
    BiSymbol operator-() const
    {
        BiSymbol r(*this);
        for (auto &[j, v] : r.c)
            v = -v;
        return r;
    }
    friend BiSymbol operator-(const BiSymbol &a, const BiSymbol &b) { return a + (-b); }

    BiSymbol times_x(const Series &s) const
    {
        BiSymbol r;
        r.zlow = zlow;
        for (const auto &[j, v] : c)
            r.add(j, v * s);
        return r;
    }
    // multiplication by a series in z
    BiSymbol times_z(const Series &s) const
    {
        BiSymbol r;
        if (s.is_zero() && s.is_exact())
            return r;
        std::optional<int> low;
        auto upd = [&](int v) { low = low ? std::max(*low, v) : v; };
        if (zlow)
            upd(*zlow + s.top());
        if (s.floor())
            upd(*s.floor() + ztop());
        r.zlow = low;
        const LaurentPoly sp = s.to_laurent();
        for (const auto &[j, v] : c)
            for (const auto &[e, a] : sp.terms())
                r.add(j + e, v.scaled(a));
        return r;
    }
    BiSymbol dx() const
    {
        BiSymbol r;
        r.zlow = zlow;
        for (const auto &[j, v] : c)
            r.add(j, v.derivative());
        return r;
    }
    BiSymbol dz() const
    {
        BiSymbol r;
        if (zlow)
            r.zlow = *zlow - 1;
        for (const auto &[j, v] : c)
            if (j != 0)
                r.add(j - 1, v.scaled(Scalar(j)));
        return r;
    }
    // first known nonzero entry (z power, x exponent)
    std::optional<std::pair<int, int>> first_nonzero() const
    {
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            if (!it->second.is_zero())
                return std::pair{it->first, it->second.lead_exponent()};
        return std::nullopt;
    }
};

inline BiSymbol wave_symbol(const WaveOperator &w)
{
    BiSymbol s;
    for (std::size_t j = 0; j < w.alpha.size(); ++j)
        s.add(-static_cast<int>(j), w.alpha[j]);
    if (!w.exact)
        s.zlow = -w.depth;
    return s;
}

// e^-xz L (w e^xz) = sum_k V_k (d_x + z)^k w
inline BiSymbol apply_x_side(const SerOp &L, const BiSymbol &w)
{
    BiSymbol out, cur = w;
    for (int k = 0; k <= L.order(); ++k) {
        if (k > 0)
            cur = cur.dx() + cur.times_z(Series::monomial(Scalar(1), 1));
        const Series &V = L.coeff(k);
        if (!(V.is_exact() && V.is_zero()))
            out = out + cur.times_x(V);
    }
    return out;
}

// e^-xz Lambda (w e^xz) = sum_i Lambda_i(z) sum_k C(i,k) x^(i-k) d_z^k w
inline BiSymbol apply_z_side(const SerOp &Lambda, const BiSymbol &w)
{
    BiSymbol out;
    std::vector<BiSymbol> dzk{w};
    for (int i = 0; i <= Lambda.order(); ++i) {
        const Series &Li = Lambda.coeff(i);
        if (Li.is_exact() && Li.is_zero())
            continue;
        while (static_cast<int>(dzk.size()) <= i)
            dzk.push_back(dzk.back().dz());
        BiSymbol inner;
        for (int k = 0; k <= i; ++k)
            inner = inner + dzk[static_cast<std::size_t>(k)].times_x(
                                Series::monomial(Scalar(Rational(binomial(i, k))), i - k));
        out = out + inner.times_z(Li);
    }
    return out;
}

struct BispectralCertificate {
    RatOp L;
    SerOp Lambda; // in z
    LaurentPoly f, theta;
    int m = 0;
    int prec = 0, depth = 0;
    bool wave_exact = false;
    std::optional<int> zlow_x, zlow_z; // z powers covered by each residual
    std::optional<std::pair<int, int>> residual_x, residual_z; // first offending (z power, x exponent)
    bool verified = false;
};

inline BispectralCertificate check_bispectral(const RatOp &L, const SerOp &Lambda, const LaurentPoly &f,
                                              const LaurentPoly &theta, int prec, int depth)
{
    BispectralCertificate cert;
    cert.L = L;
    cert.Lambda = Lambda;
    cert.f = f;
    cert.theta = theta;
    cert.m = Lambda.order();
    cert.prec = prec;
    cert.depth = depth;
    WaveOperator w = solve_wave_operator(L, prec, depth);
    cert.wave_exact = w.exact;
    BiSymbol psi = wave_symbol(w);
    BiSymbol rx = apply_x_side(to_series(L, -prec), psi) - psi.times_z(Series(f));
    BiSymbol rz = apply_z_side(Lambda, psi) - psi.times_x(Series(theta));
    cert.zlow_x = rx.zlow;
    cert.zlow_z = rz.zlow;
    cert.residual_x = rx.first_nonzero();
    cert.residual_z = rz.first_nonzero();
    cert.verified = !cert.residual_x && !cert.residual_z;
    return cert;
}

inline BispectralCertificate verify_bispectral(const RatOp &L, const SerOp &Lambda, const LaurentPoly &f,
                                               const LaurentPoly &theta, int prec, int depth)
{
    BispectralCertificate c = check_bispectral(L, Lambda, f, theta, prec, depth);
    auto bad = c.residual_x ? c.residual_x : c.residual_z;
    if (bad)
        fail(ErrorCode::ResidualNonzero, std::string(c.residual_x ? "L psi - f psi" : "Lambda psi - theta psi") +
                                              " has a nonzero term at z^" + std::to_string(bad->first) + " x^" +
                                              std::to_string(bad->second));
    return c;
}

struct StringPair {
    RatOp L;
    std::optional<RatOp> Q; // rational form, when it could be reconstructed
    SerOp Qs;               // Q to the working precision
    int n = 0;
    bool exact = false; // [L, Q] = N L^(n+1) checked in exact arithmetic
};

// Default search bound: ceil(max class span / N).
inline int string_bound(const RatOp &L)
{
    const int N = L.order();
    const int s = indicial_data(L).max_span();
    return std::max(0, (s + N - 1) / N);
}

inline StringPair string_pair(const RatOp &L, const WaveOperator &w, int n_max, int depth, int prec)
{
    const int N = L.order();
    for (int n = 0; n <= n_max; ++n) {
        const int p = n * N + 1;
        PsdOp X = PsdOp::term(Series::monomial(Scalar(1), 1), p);
        PsdOp S;
        try {
            if (w.exact && w.K.terms().size() == 1) {
                S = X;
            } else {
                PsdOp Kinv = w.K.inverse(p + depth);
                S = PsdOp::mul(PsdOp::mul(w.K, X, -depth), Kinv, -depth);
            }
        } catch (const Error &e) {
            if (e.code() == ErrorCode::DepthExhausted)
                continue;
            throw;
        }
        if (!S.negative_part().is_zero())
            continue;
        StringPair sp;
        sp.L = L;
        sp.n = n;
        sp.Qs = S.diff_part();
        try {
            sp.Q = reconstruct_operator(sp.Qs, depth / 2);
        } catch (const Error &) {
            sp.Q.reset();
        }
        if (sp.Q) {
            if (commutator(L, *sp.Q) != L.pow(n + 1).scaled(RationalFunction(N)))
                fail(ErrorCode::IdentityFailed, "[L, Q] != N L^" + std::to_string(n + 1));
            sp.exact = true;
        } else {
            SerOp Ls = to_series(L, -prec);
            SerOp lhs = commutator(Ls, sp.Qs), rhs = Ls.pow(n + 1).scaled(Series(N));
            if (!(lhs - rhs).is_zero())
                fail(ErrorCode::IdentityFailed, "[L, Q] != N L^" + std::to_string(n + 1) + " to precision");
        }
        return sp;
    }
    fail(ErrorCode::NoStringNumber, "no string number n <= " + std::to_string(n_max));
}

inline StringPair string_pair(const RatOp &L, int prec = 48, int depth = 24)
{
    WaveOperator w = solve_wave_operator(L, prec, depth);
    return string_pair(L, w, string_bound(L), depth, prec);
}

// (ad L)^i (Q^i) = i! N^i L^(i(n+1)) for i = 1..i_max; returns the first failing i.
inline std::optional<int> check_string_identities(const RatOp &L, const RatOp &Q, int n, int i_max)
{
    const int N = L.order();
    Rational fact = 1;
    for (int i = 1; i <= i_max; ++i) {
        fact *= i;
        Rational c = fact;
        for (int k = 0; k < i; ++k)
            c *= N;
        RatOp lhs = ad_apply(L, Q.pow(i), i);
        if (lhs != L.pow(i * (n + 1)).scaled(RationalFunction(Scalar(c))))
            return i;
    }
    return std::nullopt;
}

inline void verify_string_identities(const RatOp &L, const RatOp &Q, int n, int i_max)
{
    if (auto i = check_string_identities(L, Q, n, i_max))
        fail(ErrorCode::IdentityFailed, "string identity fails at i = " + std::to_string(*i));
}

// Q~ for L~ = P Q_lambda given [L, Q] = N L^(n+1) and L = Q_lambda P:
// [L~, P Q Q_lambda] = P [L, Q] Q_lambda = N L~^(n+2).
inline RatOp transformed_string_operator(const RatOp &P, const RatOp &Qlambda, const RatOp &Q, int n)
{
    RatOp Lt = P * Qlambda;
    return P * Q * Qlambda - Lt.pow(n + 1);
}

// All r in 1..N with L Z_r-invariant.
inline std::vector<int> zr_lattice(const RatOp &L)
{
    std::vector<int> out;
    for (int r = 1; r <= L.order(); ++r)
        if (zr_invariant(L, r))
            out.push_back(r);
    return out;
}

// Q = q_0 L^n + q_1 L^(n-1) + ... + q_n with ord q_i <= N - 1.
inline std::vector<RatOp> power_expand(const RatOp &Q, const RatOp &L)
{
    const int N = L.order();
    if (N < 1 || !L.is_monic())
        fail(ErrorCode::NonMonicDivisor, "power_expand needs a monic operator of order >= 1");
    const int n = std::max(0, Q.order()) / N;
    std::vector<RatOp> q;
    RatOp R = Q;
    for (int k = n; k >= 1; --k) {
        auto [a, rem] = right_divide(R, L.pow(k));
        q.push_back(a);
        R = rem;
    }
    q.push_back(R);
    return q;
}

// Top weight at infinity: max over k of ord(c_k) - k.
inline int top_weight(const RatOp &A)
{
    int w = -(1 << 29);
    for (int k = 0; k <= A.order(); ++k)
        if (!A.coeff(k).is_zero())
            w = std::max(w, ord_at_infinity(A.coeff(k)) - k);
    return w;
}

// Expansion of a string operator: q_0 = x d, q_n != 0 and every nonzero q_i
// has top weight <= -iN (the image of a weight -iN element under y_j -> alpha_j).
inline bool string_expansion_ok(const std::vector<RatOp> &q, int N)
{
    if (q.empty() || q[0] != op_x(1) * RatOp::d(1) || q.back().is_zero())
        return false;
    for (std::size_t i = 1; i < q.size(); ++i)
        if (!q[i].is_zero() && top_weight(q[i]) > -static_cast<int>(i) * N)
            return false;
    return true;
}

struct ProbeWitness {
    RatOp M;
    LaurentPoly f; // b1(M), a polynomial in z
};

struct ProbeResult {
    std::vector<ProbeWitness> witnesses;
    int rank = 0; // gcd of witness orders
    int order_bound = 0;
    bool supported_on_rank = true; // every f lies in C[z^rank]
};

// Commuting differential operators M of order 1..order_bound in D-form
// sum_w x^w h_w(D), weights -o - window .. -o.
inline std::vector<RatOp> commutant_search(const RatOp &L, int order, int window)
{
    if (!has_laurent_coeffs(L))
        fail(ErrorCode::UnsupportedCoefficient, "commutant search needs Laurent coefficients");
    const DForm Lf = dform(L);
    struct Unknown {
        int w, j;
    };
    std::vector<Unknown> unk;
    for (int w = -order - window; w <= -order; ++w)
        for (int j = 0; j <= order; ++j)
            unk.push_back({w, j});
    // column images of [x^w D^j, L]
    std::map<std::pair<int, int>, std::map<std::size_t, Scalar>> eq; // (weight, D power) -> column -> value
    for (std::size_t col = 0; col < unk.size(); ++col) {
        DForm m;
        m.add(unk[col].w, SPoly::monomial(Scalar(1), unk[col].j));
        DForm a = dform_mul(m, Lf), b = dform_mul(Lf, m);
        for (const auto &[w, p] : a.parts)
            for (int k = 0; k <= p.degree(); ++k)
                if (!p[k].is_zero())
                    eq[{w, k}][col] += p[k];
        for (const auto &[w, p] : b.parts)
            for (int k = 0; k <= p.degree(); ++k)
                if (!p[k].is_zero())
                    eq[{w, k}][col] -= p[k];
    }
    Matrix rows;
    for (const auto &[key, cols] : eq) {
        Vector row(unk.size(), Scalar(0));
        for (const auto &[c, v] : cols)
            row[c] = v;
        rows.push_back(std::move(row));
    }
    std::vector<RatOp> out;
    for (const auto &v : nullspace(rows, unk.size())) {
        DForm m;
        for (std::size_t c = 0; c < unk.size(); ++c)
            if (!v[c].is_zero())
                m.add(unk[c].w, SPoly::monomial(v[c], unk[c].j));
        out.push_back(from_dform(m));
    }
    return out;
}

inline ProbeResult spectral_probe(const RatOp &L, const WaveOperator &w, int order_bound, int window = -1)
{
    ProbeResult out;
    out.order_bound = order_bound;
    const int N = L.order();
    int g = 0;
    for (int o = 1; o <= order_bound; ++o) {
        auto sols = commutant_search(L, o, window < 0 ? o + N : window);
        const RatOp *pick = nullptr;
        for (const auto &M : sols)
            if (M.order() == o) {
                pick = &M;
                break;
            }
        if (!pick)
            continue;
        RatOp M = *pick;
        M = M.scaled(RationalFunction(M.lead()).pow(-1));
        const int depth = o + 4;
        PsdOp F = bispectral_b1(w, PsdOp(M, -4 * depth), depth);
        ProbeWitness wit{M, {}};
        for (const auto &[a, c] : F.terms()) {
            if (c.is_zero())
                continue;
            if (a != 0)
                fail(ErrorCode::InvariantViolated, "b1 image of a commuting operator is not a function of z");
            LaurentPoly cp = c.to_laurent();
            for (const auto &[e, v] : cp.terms()) {
                if (e < 0)
                    fail(ErrorCode::InvariantViolated, "b1 image of a commuting operator is not a polynomial");
                wit.f.add(e, v);
            }
        }
        out.witnesses.push_back(std::move(wit));
        g = std::gcd(g, o);
    }
    out.rank = g == 0 ? N : std::gcd(g, N);
    for (const auto &wit : out.witnesses)
        for (const auto &[e, v] : wit.f.terms())
            if (e % out.rank != 0)
                out.supported_on_rank = false;
    return out;
}

} // namespace bispec
