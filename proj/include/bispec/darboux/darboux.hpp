#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bispec/bessel/bessel.hpp"
#include "bispec/exactnum/linalg.hpp"

namespace bispec {

struct KernelSpec {
    BesselParams base;
    int power = 1;
    std::vector<LogFunction> basis;
};

namespace detail {

using LogKey = std::tuple<Scalar, int, int>;

inline LogFunction from_coordinates(const std::vector<LogKey> &keys, const Vector &row)
{
    LogFunction f;
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (!row[i].is_zero()) {
            const auto &[g, j, e] = keys[i];
            f += LogFunction::term(row[i], g + Scalar(e), j);
        }
    return f;
}

inline std::vector<LogKey> collect_keys(const std::vector<LogFunction> &fs)
{
    std::map<LogKey, bool> seen;
    for (const auto &f : fs)
        for (const auto &[k, v] : f.coordinates())
            seen[k] = true;
    std::vector<LogKey> keys;
    for (const auto &[k, v] : seen)
        keys.push_back(k);
    return keys;
}

inline Matrix coordinate_matrix(const std::vector<LogFunction> &fs, const std::vector<LogKey> &keys)
{
    Matrix m;
    for (const auto &f : fs) {
        Vector row(keys.size(), Scalar(0));
        auto co = f.coordinates();
        for (std::size_t i = 0; i < keys.size(); ++i) {
            auto it = co.find(keys[i]);
            if (it != co.end())
                row[i] = it->second;
        }
        m.push_back(std::move(row));
    }
    return m;
}

inline std::size_t span_rank(const std::vector<LogFunction> &fs)
{
    auto keys = collect_keys(fs);
    return matrix_rank(coordinate_matrix(fs, keys), keys.size());
}

inline bool in_span(const std::vector<LogFunction> &basis, const LogFunction &f)
{
    std::vector<LogFunction> ext = basis;
    ext.push_back(f);
    return span_rank(ext) == span_rank(basis);
}

// Reduced echelon basis of the span. Keys are ordered by exponent class
// first, so a span that splits over classes gives single-class rows.
inline std::vector<LogFunction> row_reduce(const std::vector<LogFunction> &fs)
{
    auto keys = collect_keys(fs);
    Matrix m = coordinate_matrix(fs, keys);
    auto pivots = rref(m, keys.size());
    std::vector<LogFunction> out;
    for (std::size_t i = 0; i < pivots.size(); ++i)
        out.push_back(from_coordinates(keys, m[i]));
    return out;
}

inline LaurentPoly eval_y(const BiLaurent &F, const Scalar &y)
{
    LaurentPoly r;
    for (int b = F.y_degree(); b >= 0; --b)
        r = r.scaled(y) + F.y_coeff(b);
    return r;
}

} // namespace detail

// Checks kernel membership and closure under both parts of the formal
// monodromy: splitting into exponent classes mod Z and ln x -> ln x + 1.
// Returns a row-reduced basis of single-class functions.
inline std::vector<LogFunction> kernel_validate(const KernelSpec &spec)
{
    if (spec.power < 1)
        fail(ErrorCode::InvalidArgument, "kernel power must be positive");
    if (spec.basis.empty())
        fail(ErrorCode::InvalidArgument, "empty kernel basis");
    std::vector<LogFunction> parts;
    for (const auto &f : spec.basis) {
        for (const auto &g : f.groups()) {
            LogFunction part = LogFunction::from_group(g.gamma, g.p);
            if (!detail::in_span(spec.basis, part))
                fail(ErrorCode::MonodromyNotClosed, "component " + part.str() + " of " + f.str() + " lies outside the span");
            parts.push_back(part);
        }
        LogFunction s = f.log_shift();
        if (!detail::in_span(spec.basis, s))
            fail(ErrorCode::MonodromyNotClosed, "ln x -> ln x + 1 maps " + f.str() + " outside the span");
    }
    const RatOp L = bessel_operator(spec.base);
    for (const auto &f : spec.basis) {
        LogFunction g = f;
        for (int i = 0; i < spec.power && !g.is_zero(); ++i)
            g = apply(L, g);
        if (!g.is_zero())
            fail(ErrorCode::NotInKernel, f.str() + " is not annihilated by L^" + std::to_string(spec.power));
    }
    return detail::row_reduce(parts);
}

// Monic P with P f_i = 0. Each f_i = x^g_i H_i(x, ln x); all Wronskian
// minors share the factor x^(sum g_i), so the coefficients are ratios of
// determinants of bivariate Laurent polynomials in X = x, Y = ln x.
inline RatOp wronskian_operator(const std::vector<LogFunction> &basis)
{
    const std::size_t n = basis.size();
    if (n == 0)
        fail(ErrorCode::InvalidArgument, "empty basis");
    std::vector<std::vector<BiLaurent>> H(n + 1, std::vector<BiLaurent>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (basis[i].groups().size() != 1)
            fail(ErrorCode::InvalidArgument, "basis functions must each lie in one exponent class: " + basis[i].str());
        LogFunction f = basis[i];
        const Scalar gamma = f.groups()[0].gamma;
        for (std::size_t k = 0; k <= n; ++k) {
            if (!f.is_zero()) {
                if (f.groups().size() != 1 || f.groups()[0].gamma != gamma)
                    fail(ErrorCode::InvalidArgument, "derivative left its exponent class");
                H[k][i] = f.groups()[0].as_bivariate();
            }
            f = f.derivative();
        }
    }
    std::vector<BiLaurent> F(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<std::vector<BiLaurent>> minor;
        for (std::size_t r = 0; r <= n; ++r)
            if (r != k)
                minor.push_back(H[r]);
        F[k] = determinant(minor);
    }
    if (F[n].is_zero())
        fail(ErrorCode::ZeroWronskian, "basis functions are linearly dependent");
    // ratios F_k / F_n must not depend on Y
    std::optional<Scalar> y0;
    for (int y = 0; y <= F[n].y_degree() + 1 && !y0; ++y)
        if (!detail::eval_y(F[n], Scalar(y)).is_zero())
            y0 = Scalar(y);
    const LaurentPoly Fn0 = detail::eval_y(F[n], *y0);
    std::vector<RationalFunction> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const LaurentPoly Fk0 = detail::eval_y(F[k], *y0);
        if (F[k] * BiLaurent::from_x(Fn0) != BiLaurent::from_x(Fk0) * F[n])
            fail(ErrorCode::LogResidue, "coefficient of d^" + std::to_string(k) + " depends on ln x");
        RationalFunction q = RationalFunction(Fk0) / RationalFunction(Fn0);
        c[k] = ((n + k) % 2 == 0) ? q : -q;
    }
    return RatOp(std::move(c));
}

// Q with Q P = L_beta^d.
inline RatOp cofactor(const BesselParams &base, int d, const RatOp &P)
{
    const RatOp Ld = bessel_operator(base).pow(d);
    auto [Q, rem] = right_divide(Ld, P);
    if (!rem.is_zero())
        fail(ErrorCode::NotARightFactor, "remainder " + rem.str());
    if (Q * P != Ld)
        fail(ErrorCode::NotARightFactor, "re-multiplication does not reproduce L^d");
    return Q;
}

// Padé-style recovery of N/D with deg D <= deg_bound from a series at
// infinity, checked against every known coefficient.
inline RationalFunction rational_reconstruct(const Series &c, int deg_bound)
{
    if (c.is_exact())
        return RationalFunction(c.to_laurent());
    const int floor = *c.floor();
    if (c.is_zero())
        return RationalFunction();
    const int top = c.lead_exponent();
    for (int m = 0; m <= deg_bound; ++m) {
        // D = x^m + d_(m-1) x^(m-1) + ... + d_0; coefficients of x^e in D c
        // vanish for floor + m <= e <= -1.
        const int lo = floor + m;
        if (lo > -1 - m)
            break; // too few equations left to pin D down with a margin
        Matrix A;
        Vector rhs;
        for (int e = lo; e <= -1; ++e) {
            Vector row(static_cast<std::size_t>(m), Scalar(0));
            for (int i = 0; i < m; ++i)
                row[static_cast<std::size_t>(i)] = c.coeff(e - i);
            A.push_back(std::move(row));
            rhs.push_back(-c.coeff(e - m));
        }
        std::optional<Vector> sol = m == 0 ? std::optional<Vector>(Vector{}) : solve_linear(A, rhs, static_cast<std::size_t>(m));
        if (m == 0) {
            bool ok = true;
            for (int e = lo; e <= -1 && ok; ++e)
                ok = c.coeff(e).is_zero();
            if (!ok)
                continue;
        }
        if (!sol)
            continue;
        std::vector<Scalar> dc(*sol);
        dc.push_back(Scalar(1));
        SPoly D(dc);
        std::vector<Scalar> nc(static_cast<std::size_t>(std::max(0, top + m + 1)), Scalar(0));
        for (int e = 0; e <= top + m; ++e) {
            Scalar acc;
            for (int i = 0; i <= m; ++i)
                if (c.known_at(e - i))
                    acc += D[i] * c.coeff(e - i);
            nc[static_cast<std::size_t>(e)] = acc;
        }
        RationalFunction r(SPoly(nc), D);
        Series back = r.expand(floor);
        if ((back - c).is_zero())
            return r;
    }
    fail(ErrorCode::ReconstructionFailed, "no rational function with denominator degree <= " + std::to_string(deg_bound));
}

inline RationalFunction reconstruct_coefficient(const Series &c, int deg_bound)
{
    return rational_reconstruct(c, deg_bound);
}

inline RatOp reconstruct_operator(const SerOp &L, int deg_bound)
{
    std::vector<RationalFunction> c;
    for (const auto &s : L.coeffs())
        c.push_back(rational_reconstruct(s, deg_bound));
    return RatOp(std::move(c));
}

// L with L^d' = P Q.
inline RatOp transformed_operator(const RatOp &P, const RatOp &Q, int d_prime, int prec = 24)
{
    if (d_prime < 1)
        fail(ErrorCode::InvalidArgument, "power must be positive");
    const RatOp M = P * Q;
    if (d_prime == 1)
        return M;
    const int n = M.order();
    if (n % d_prime != 0)
        fail(ErrorCode::NotAPerfectPower, "order " + std::to_string(n) + " is not divisible by " + std::to_string(d_prime));
    const int k = n / d_prime;
    // the denominators are not known in advance: retry at up to 8x precision
    std::string last;
    for (int p = prec; p <= 8 * prec; p *= 2) {
        RatOp L;
        try {
            PsdOp root = nth_root(to_series(M, -p), k + 1);
            SerOp Ls = psdo_pow(root, k, 0).diff_part();
            L = reconstruct_operator(Ls, p / 4);
        } catch (const Error &e) {
            last = e.what();
            continue;
        }
        if (L.pow(d_prime) == M)
            return L;
        last = "candidate root does not reproduce P Q";
    }
    fail(ErrorCode::NotAPerfectPower, "root extraction failed: " + last);
}

// phi = x^lambda sum_k c_k x^(-k r)
struct KernelSolution {
    Scalar lambda;
    int r = 1;
    std::vector<Scalar> c;
    bool exact = false; // c_k = 0 beyond the stored ones

    Series body() const
    {
        const int K = static_cast<int>(c.size()) - 1;
        LaurentPoly p;
        for (int k = 0; k <= K; ++k)
            p.add(-k * r, c[static_cast<std::size_t>(k)]);
        Series s(p);
        return exact ? s : s.truncated(-(K + 1) * r + 1);
    }
    LogFunction as_function() const
    {
        if (!exact)
            fail(ErrorCode::DepthExhausted, "kernel solution is an infinite series");
        LogFunction f;
        for (std::size_t k = 0; k < c.size(); ++k)
            if (!c[k].is_zero())
                f += LogFunction::term(c[k], lambda - Scalar(static_cast<long>(k) * r));
        return f;
    }
};

namespace detail {

// Root of the class's minimal member, extending Q when the factor is an
// irreducible quadratic (or higher) over Q.
inline Scalar class_root(const RootClass &cls, const FieldHandle &field)
{
    if (cls.is_linear())
        return cls.root(0);
    if (field)
        fail(ErrorCode::UnsupportedFieldSplit, "root of " + cls.factor.to_string("D") + " needs a second extension");
    std::vector<Rational> q;
    for (const auto &s : cls.factor.monic().coeffs())
        q.push_back(s.rational());
    FieldHandle f = field_extend(QPoly(q), "l");
    return Scalar::generator(f);
}

} // namespace detail

inline KernelSolution minimal_kernel_solution(const SerOp &L, const RootClass &cls, int r, int prec)
{
    if (r < 1)
        fail(ErrorCode::InvalidArgument, "step must be positive");
    DForm f = dform(L);
    if (!zr_invariant(f, r))
        fail(ErrorCode::InvalidArgument, "operator is not Z_" + std::to_string(r) + " invariant");
    const int W = f.weight();
    KernelSolution sol;
    sol.r = r;
    sol.lambda = detail::class_root(cls, op_field(L));
    if (!f.top().eval(sol.lambda).is_zero())
        fail(ErrorCode::InvalidArgument, "class root is not an indicial root");
    int M = 0; // deepest weight gap (in steps of r) carried by the operator
    for (const auto &[w, p] : f.parts)
        M = std::max(M, (W - w) / r);
    sol.c.push_back(Scalar(1));
    if (M == 0) {
        // single weight: x^lambda itself is annihilated
        sol.exact = true;
        return sol;
    }
    int zero_run = 0;
    for (int j = 1; j <= prec; ++j) {
        if (f.floor && W - j * r < *f.floor)
            break;
        Scalar rhs;
        for (int m = 1; m <= std::min(j, M); ++m) {
            auto it = f.parts.find(W - m * r);
            if (it == f.parts.end())
                continue;
            const Scalar &ck = sol.c[static_cast<std::size_t>(j - m)];
            if (!ck.is_zero())
                rhs -= ck * it->second.eval(sol.lambda - Scalar(static_cast<long>((j - m) * r)));
        }
        Scalar den = f.top().eval(sol.lambda - Scalar(static_cast<long>(j * r)));
        if (den.is_zero())
            fail(ErrorCode::ResonanceBelowMinimal,
                 "indicial polynomial vanishes at lambda - " + std::to_string(j * r) + "; lambda is not minimal in its class");
        sol.c.push_back(rhs / den);
        zero_run = sol.c.back().is_zero() ? zero_run + 1 : 0;
        if (!f.floor && zero_run >= M) {
            sol.c.resize(sol.c.size() - static_cast<std::size_t>(zero_run));
            sol.exact = true;
            break;
        }
    }
    return sol;
}

inline KernelSolution minimal_kernel_solution(const RatOp &L, const RootClass &cls, int r, int prec)
{
    if (has_laurent_coeffs(L))
        return minimal_kernel_solution(to_series(L, 0), cls, r, prec);
    return minimal_kernel_solution(to_series(L, -(prec + 2) * r - L.order() - 2), cls, r, prec);
}

struct DarbouxStepRecord {
    RootClass chosen;
    Scalar lambda;
    int r = 1;
    KernelSolution phi;
    SerOp P, Q;          // L = Q P, L~ = P Q
    SPoly indicial_before, predicted, indicial_after;
    std::vector<RootClass> classes_after;
};

struct DarbouxResult {
    SerOp L;
    WaveOperator K;
    DarbouxStepRecord record;
};

// Root update under one step: lambda -> lambda + N - 1, all others -1.
inline SPoly predicted_indicial(const SPoly &p, const Scalar &lambda, int N)
{
    auto [q, rem] = divmod(p, SPoly::linear(lambda));
    if (!rem.is_zero())
        fail(ErrorCode::InvalidArgument, "lambda is not an indicial root");
    return SPoly::linear(lambda + Scalar(N - 1)) * q.shifted(Scalar(1));
}

// a = phi'/phi = lambda/x + s'/s for phi = x^lambda s
inline Series log_derivative(const KernelSolution &phi, int floor)
{
    Series s = phi.body();
    Series a = Series::monomial(phi.lambda, -1);
    if (s.is_exact() && s.to_laurent().terms().size() == 1)
        return a;
    return a + s.derivative() * s.inverse(floor);
}

inline DarbouxResult darboux_step(const SerOp &L, const WaveOperator &K, const RootClass &cls, int r, int prec)
{
    const int N = L.order();
    if (N < 1 || !L.is_monic() || (N >= 2 && !L.coeff(N - 1).is_zero()))
        fail(ErrorCode::NotNormalized, "Darboux step needs a normalized operator");
    DarbouxResult out;
    DarbouxStepRecord &rec = out.record;
    rec.chosen = cls;
    rec.r = r;
    rec.phi = minimal_kernel_solution(L, cls, r, prec);
    rec.lambda = rec.phi.lambda;
    const auto before = indicial_data(L);
    rec.indicial_before = before.indicial_poly;

    const int floor = -prec * r - 1;
    Series a = log_derivative(rec.phi, floor);
    rec.P = SerOp(std::vector<Series>{-a, Series(1)});
    auto [Q, rem] = right_divide(L, rec.P);
    if (!rem.is_zero())
        fail(ErrorCode::NonzeroRemainder, "L is not divisible by d - phi'/phi: remainder " + rem.str());
    rec.Q = Q;
    out.L = rec.P * Q;
    if (!zr_invariant(out.L, r))
        fail(ErrorCode::InvarianceLost, "transformed operator lost Z_" + std::to_string(r) + " invariance");

    rec.predicted = predicted_indicial(rec.indicial_before, rec.lambda, N);
    const auto after = indicial_data(out.L);
    rec.indicial_after = after.indicial_poly;
    rec.classes_after = after.classes;

    // K~ = P K d^-1
    PsdOp Kt = PsdOp::mul(PsdOp::mul(PsdOp(rec.P), K.K), PsdOp::d(-1));
    out.K.K = Kt;
    out.K.depth = Kt.low() ? -*Kt.low() : K.depth;
    out.K.exact = Kt.is_exact();
    for (int j = 0; j <= out.K.depth; ++j)
        out.K.alpha.push_back(Kt.known_at(-j) ? Kt.coeff(-j) : Series::unknown_below(0));
    return out;
}

// Diagnostic: P = x^-n sum_k p_k(x^N) D^k with rational p_k.
inline bool dt_shape(const RatOp &P, int N)
{
    const int n = P.order();
    // d^k = x^-k D(D-1)...(D-k+1)
    std::vector<RationalFunction> dcoef(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        SPoly ff = falling_factorial(k);
        RationalFunction ck = P.coeff(k) * RationalFunction(LaurentPoly::monomial(Scalar(1), -k));
        for (int j = 0; j <= ff.degree(); ++j)
            dcoef[static_cast<std::size_t>(j)] = dcoef[static_cast<std::size_t>(j)] + ck * RationalFunction(ff[j]);
    }
    for (const auto &c : dcoef) {
        if (c.is_zero())
            continue;
        RationalFunction f = c * RationalFunction(LaurentPoly::monomial(Scalar(1), n));
        for (const auto *poly : {&f.num(), &f.den()})
            for (int i = 0; i <= poly->degree(); ++i)
                if (!(*poly)[i].is_zero() && i % N != 0)
                    return false;
    }
    return true;
}

} // namespace bispec
