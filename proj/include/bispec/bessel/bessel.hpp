#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bispec/diffop/analysis.hpp"
#include "bispec/exactnum/linalg.hpp"
#include "bispec/psdo/wave.hpp"

namespace bispec {

struct BesselParams {
    std::vector<Scalar> beta;

    int order() const { return static_cast<int>(beta.size()); }
    Scalar sum() const
    {
        Scalar s;
        for (const auto &b : beta)
            s += b;
        return s;
    }
    bool is_normalized() const
    {
        const int N = order();
        return sum() == Scalar(Rational(N) * Rational(N - 1) / 2);
    }
    // (D - b_1)...(D - b_N)
    SPoly indicial() const
    {
        SPoly p(Scalar(1));
        for (const auto &b : beta)
            p = p * SPoly::linear(b);
        return p;
    }
    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < beta.size(); ++i)
            s += (i ? ", " : "") + beta[i].str();
        return s + ")";
    }
    friend bool operator==(const BesselParams &, const BesselParams &) = default;
};

inline BesselParams bessel_params(std::vector<Scalar> beta)
{
    if (beta.empty())
        fail(ErrorCode::InvalidArgument, "Bessel parameters need at least one exponent");
    return BesselParams{std::move(beta)};
}

inline DForm bessel_dform(const BesselParams &b)
{
    DForm f;
    f.add(-b.order(), b.indicial());
    return f;
}

// x^-N (D - b_1)...(D - b_N) in d-form
inline RatOp bessel_operator(const BesselParams &b)
{
    if (b.beta.empty())
        fail(ErrorCode::InvalidArgument, "Bessel parameters need at least one exponent");
    return from_dform(bessel_dform(b));
}

struct NormalizedBeta {
    BesselParams beta;
    Scalar shift;
};

// Common shift c with sum(b_i + c) = N(N-1)/2.
inline NormalizedBeta normalize_beta(const BesselParams &b)
{
    const int N = b.order();
    if (N == 0)
        fail(ErrorCode::InvalidArgument, "Bessel parameters need at least one exponent");
    Scalar c = (Scalar(Rational(N) * Rational(N - 1) / 2) - b.sum()) / Scalar(N);
    NormalizedBeta out{b, c};
    for (auto &x : out.beta.beta)
        x += c;
    return out;
}

struct RankWitness {
    int rank = 0;
    std::vector<std::pair<int, SPoly>> witnesses; // x^-s h(D)
    int order_bound = 0;
    bool upper_bound = true; // only homogeneous witnesses up to the bound were tried
};

// Solutions h of p(D - s) h(D) = h(D - N) p(D) with deg h = s (a commuting
// operator x^-s h(D) of a monic operator has constant leading coefficient).
inline std::vector<SPoly> bessel_commutant(const BesselParams &b, int s)
{
    const int N = b.order();
    const SPoly p = b.indicial();
    const SPoly ps = p.shifted(Scalar(-s));
    const std::size_t nunk = static_cast<std::size_t>(s) + 1;
    Matrix A(static_cast<std::size_t>(N + s) + 1, Vector(nunk, Scalar(0)));
    const SPoly D = SPoly::variable();
    for (std::size_t j = 0; j < nunk; ++j) {
        SPoly mono = D.pow(static_cast<int>(j));
        SPoly eq = ps * mono - mono.shifted(Scalar(-N)) * p;
        for (int k = 0; k <= eq.degree(); ++k)
            A[static_cast<std::size_t>(k)][j] = eq[k];
    }
    std::vector<SPoly> out;
    for (const auto &v : nullspace(A, nunk)) {
        SPoly h(v);
        if (h.degree() == s)
            out.push_back(h.monic());
    }
    return out;
}

inline RankWitness bessel_rank(const BesselParams &b, int order_bound)
{
    const int N = b.order();
    if (order_bound < N)
        fail(ErrorCode::InvalidArgument, "rank search needs order_bound >= N");
    RankWitness w;
    w.order_bound = order_bound;
    int g = N;
    for (int s = 1; s <= order_bound; ++s) {
        auto sols = bessel_commutant(b, s);
        if (sols.empty())
            continue;
        w.witnesses.emplace_back(s, sols.front());
        g = std::gcd(g, s);
    }
    w.rank = g;
    return w;
}

inline RatOp commutant_operator(int s, const SPoly &h)
{
    DForm f;
    f.add(-s, h);
    return from_dform(f);
}

struct BesselWave {
    std::vector<Scalar> c; // c[0] = 1; psi = e^(xz) sum c_k (xz)^-k
    bool exact = false;    // c_k = 0 for all k beyond the stored ones
};

// With t = xz, L psi = z^N psi becomes p(E) f = t^N f for E = t d/dt + t.
// The t^(N-k) coefficient gives a_(k-1) c_(k-1) = -sum_(i<k-1) c_i [p(E) t^-i]_(N-k)
// with a_j = N(N-1)/2 - sum(beta) - N j.
inline BesselWave bessel_wave_coeffs(const BesselParams &b, int prec)
{
    if (!b.is_normalized())
        fail(ErrorCode::NotNormalized, "Bessel wave function needs sum(beta) = N(N-1)/2");
    const int N = b.order();
    auto apply_pE = [&](int i) {
        LaurentPoly f = LaurentPoly::monomial(Scalar(1), -i);
        for (auto it = b.beta.rbegin(); it != b.beta.rend(); ++it) {
            LaurentPoly g;
            for (const auto &[e, v] : f.terms()) {
                g.add(e, v * (Scalar(e) - *it));
                g.add(e + 1, v);
            }
            f = g;
        }
        return f;
    };
    std::vector<LaurentPoly> images;
    BesselWave w;
    w.c.push_back(Scalar(1));
    images.push_back(apply_pE(0));
    int zero_run = 0;
    for (int j = 1; j <= prec; ++j) {
        images.push_back(apply_pE(j));
        // equation at t^(N-1-j)
        Scalar rhs;
        for (int i = std::max(0, j + 1 - N); i < j; ++i)
            rhs -= w.c[i] * images[i].coeff(N - 1 - j);
        const Scalar a = images[j].coeff(N - 1 - j);
        if (a.is_zero()) {
            if (!rhs.is_zero())
                fail(ErrorCode::ResonantBeta, "wave recursion denominator vanishes at k = " + std::to_string(j));
            fail(ErrorCode::ResonantBeta, "wave recursion leaves c_" + std::to_string(j) + " undetermined");
        }
        w.c.push_back(rhs / a);
        zero_run = w.c.back().is_zero() ? zero_run + 1 : 0;
        if (zero_run >= std::max(1, N - 1)) {
            w.exact = true;
            w.c.resize(w.c.size() - static_cast<std::size_t>(zero_run));
            break;
        }
    }
    return w;
}

// alpha_j = c_j x^-j
inline WaveOperator bessel_wave_operator(const BesselParams &b, int depth)
{
    BesselWave bw = bessel_wave_coeffs(b, depth);
    WaveOperator w;
    w.exact = bw.exact;
    for (std::size_t j = 0; j < bw.c.size(); ++j) {
        Series a = Series(LaurentPoly::monomial(bw.c[j], -static_cast<int>(j)));
        w.alpha.push_back(a);
        w.K.set(-static_cast<int>(j), a);
    }
    w.depth = static_cast<int>(w.alpha.size()) - 1;
    if (!w.exact)
        w.K = w.K.truncated(-w.depth);
    return w;
}

} // namespace bispec
