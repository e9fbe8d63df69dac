#pragma once

#include <optional>
#include <vector>

#include "bispec/diffop/analysis.hpp"
#include "bispec/psdo/psdo.hpp"

namespace bispec {

// K = 1 + sum_j alpha_j d^-j with L K = K d^N.
struct WaveOperator {
    PsdOp K;
    std::vector<Series> alpha; // alpha[0] = 1
    int depth = 0;
    bool exact = false; // the recursion provably terminates: K is a finite sum
};

// Integration constants are fixed to zero, which is the unique gauge with
// ord(alpha_j) <= -1. The recursion
//   N alpha_j' = - sum C(k,m) V_k alpha_i^(m),  k - i - m = N - 1 - j, i < j
// involves only alpha_{j-N+1..j-1}, so N-1 consecutive exact zeros end it.
inline WaveOperator solve_wave_operator(const SerOp &L, int depth)
{
    const int N = L.order();
    if (N < 1 || !L.is_monic())
        fail(ErrorCode::NotNormalized, "wave operator needs a monic operator of order >= 1");
    if (N >= 2 && !L.coeff(N - 1).is_zero())
        fail(ErrorCode::NotNormalized, "coefficient of d^(N-1) must vanish");
    for (int k = 0; k < N; ++k)
        if (!L.coeff(k).is_zero() && L.coeff(k).lead_exponent() >= 0)
            fail(ErrorCode::CoefficientNotVanishing, "coefficient of d^" + std::to_string(k) + " does not vanish at infinity");

    WaveOperator w;
    w.alpha.push_back(Series(1));
    int zero_run = 0;
    for (int j = 1; j <= depth; ++j) {
        const int p = N - 1 - j;
        Series R;
        for (int k = 0; k <= N; ++k) {
            const Series Vk = k == N ? Series(1) : L.coeff(k);
            if (Vk.is_exact() && Vk.is_zero())
                continue;
            for (int i = std::max(0, j + 1 - N); i < j; ++i) {
                int m = k - i - p;
                if (m < 0 || m > k)
                    continue;
                Series der = w.alpha[i];
                for (int s = 0; s < m; ++s)
                    der = der.derivative();
                if (der.is_exact() && der.is_zero())
                    continue;
                R += (Vk * der).scaled(Scalar(Rational(binomial(k, m))));
            }
        }
        Series a;
        try {
            a = R.integral().scaled(Scalar(-1, N));
        } catch (const Error &e) {
            fail(ErrorCode::IntegrationObstruction, "wave coefficient alpha_" + std::to_string(j) + ": " + e.what());
        }
        if (!a.is_zero() && a.lead_exponent() > -1)
            fail(ErrorCode::InvariantViolated, "wave coefficient with ord > -1");
        w.alpha.push_back(a);
        zero_run = (a.is_exact() && a.is_zero()) ? zero_run + 1 : 0;
        if (N == 1 || zero_run >= N - 1) {
            w.exact = true;
            break;
        }
    }
    w.depth = static_cast<int>(w.alpha.size()) - 1;
    for (int j = 0; j <= w.depth; ++j)
        w.K.set(-j, w.alpha[j]);
    if (!w.exact)
        w.K = w.K.truncated(-w.depth);
    return w;
}

inline WaveOperator solve_wave_operator(const RatOp &L, int prec, int depth)
{
    return solve_wave_operator(to_series(L, -prec), depth);
}

// K^-1 P K
inline PsdOp conjugate_by_wave(const WaveOperator &w, const PsdOp &P, int depth)
{
    if (w.exact && w.K.terms().size() == 1)
        return P;
    PsdOp Kinv = w.K.inverse(depth);
    int cap = P.top() - depth;
    return PsdOp::mul(PsdOp::mul(Kinv, P, cap), w.K, cap);
}

// Transposition x^a d_x^b -> z^b d_z^a. The result's coefficients are
// series in z; the x-side depth becomes the z-side floor.
inline PsdOp bispectral_b(const PsdOp &P)
{
    std::map<int, LaurentPoly> out; // d_z power a -> polynomial in z
    std::optional<int> zlow;        // d_z powers below are unknown
    for (const auto &[b, c] : P.terms()) {
        if (c.floor())
            zlow = zlow ? std::max(*zlow, *c.floor()) : *c.floor();
        const LaurentPoly lp = c.to_laurent();
        for (const auto &[a, v] : lp.terms())
            out[a].add(b, v);
    }
    PsdOp r;
    for (const auto &[a, p] : out) {
        if (zlow && a < *zlow)
            continue;
        Series s(p);
        if (P.low())
            s = s.truncated(*P.low());
        r.set(a, s);
    }
    if (zlow)
        r = r.truncated(*zlow);
    else if (P.low()) {
        // every d_z power is still known, only their z-tails are cut
    }
    return r;
}

inline PsdOp bispectral_b1(const WaveOperator &w, const PsdOp &P, int depth)
{
    return bispectral_b(conjugate_by_wave(w, P, depth));
}

// P = d + p_1 d^-1 + ... with P^N = L, to `depth` powers below d.
inline PsdOp nth_root(const SerOp &L, int depth)
{
    const int N = L.order();
    if (N < 1 || !L.is_monic() || (N >= 2 && !L.coeff(N - 1).is_zero()))
        fail(ErrorCode::NotNormalized, "nth_root needs a monic operator with vanishing d^(N-1) term");
    PsdOp P = PsdOp::d(1);
    const int low = 1 - depth;
    P = P.truncated(low);
    PsdOp Lp(L);
    for (int j = 1; j < depth; ++j) {
        // coefficient of d^(N-1-j) in P^N equals N p_j + (terms in p_1..p_{j-1})
        const int target = N - 1 - j;
        PsdOp Pn = PsdOp(1);
        PsdOp Pcur = P;
        Pcur.set(-j, Series());
        // each of the N-1-i remaining factors has top power 1
        for (int i = 0; i < N; ++i)
            Pn = PsdOp::mul(Pn, Pcur, target - (N - 1 - i));
        Series want = target >= 0 ? L.coeff(target) : Series();
        Series pj = (want - Pn.coeff(target)).scaled(Scalar(1, N));
        P.set(-j, pj);
    }
    return P;
}

inline PsdOp psdo_pow(const PsdOp &P, int n, std::optional<int> cap = std::nullopt)
{
    PsdOp r(1);
    for (int i = 0; i < n; ++i)
        r = PsdOp::mul(r, P, cap ? std::optional<int>(*cap - (n - 1 - i) * P.top()) : std::nullopt);
    return r;
}

} // namespace bispec
