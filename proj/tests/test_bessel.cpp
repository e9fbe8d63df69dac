#include <gtest/gtest.h>

#include "bispec/bessel/bessel.hpp"
#include "gen.hpp"

using namespace bispec;

namespace {

RationalFunction xp(long c, int e) { return RationalFunction(LaurentPoly::monomial(Scalar(c), e)); }
RatOp d(int k = 1) { return RatOp::d(k); }
RatOp c(long v, int e) { return RatOp(xp(v, e)); }

BesselParams beta(std::initializer_list<Scalar> b) { return bessel_params(std::vector<Scalar>(b)); }

BesselParams random_normalized(testgen::Gen &g, int N)
{
    std::vector<Scalar> b;
    for (int i = 0; i < N; ++i)
        b.push_back(Scalar(g.rational(6)));
    return normalize_beta(bessel_params(b)).beta;
}

template <typename F>
ErrorCode code_of(F &&f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(BesselOperator, Examples)
{
    EXPECT_EQ(bessel_operator(beta({0, 1})), d(2));
    EXPECT_EQ(bessel_operator(beta({-1, 2})), d(2) - c(2, -2));
    EXPECT_EQ(bessel_operator(beta({0, 1, 2})), d(3));
}

TEST(BesselOperator, ActionOnPowers)
{
    // L_beta x^t = p(t) x^(t-N), computed here by applying the d-form operator
    testgen::Gen g(101);
    for (int i = 0; i < 20; ++i) {
        int N = g.uniform(1, 4);
        std::vector<Scalar> b;
        for (int k = 0; k < N; ++k)
            b.push_back(Scalar(g.rational(5)));
        BesselParams bp = bessel_params(b);
        RatOp L = bessel_operator(bp);
        EXPECT_EQ(L.order(), N);
        EXPECT_TRUE(L.is_monic());
        for (int t = -3; t <= 5; ++t) {
            Scalar pt(1);
            for (const auto &x : b)
                pt *= Scalar(t) - x;
            LogFunction want = LogFunction::term(pt, Scalar(t - N));
            if (pt.is_zero())
                want = LogFunction();
            EXPECT_EQ(apply(L, LogFunction::term(Scalar(1), Scalar(t))), want);
        }
    }
}

TEST(BesselOperator, IndicialRootsAreBeta)
{
    testgen::Gen g(102);
    for (int i = 0; i < 20; ++i) {
        BesselParams b = random_normalized(g, g.uniform(2, 4));
        auto id = indicial_data(bessel_operator(b));
        EXPECT_EQ(id.weight, -b.order());
        EXPECT_EQ(id.indicial_poly, b.indicial());
    }
}

TEST(BesselOperator, QuadraticFieldExponents)
{
    auto f = field_extend(QPoly(std::vector<Rational>{Rational(-2), Rational(0), Rational(1)}));
    Scalar a = Scalar::generator(f);
    BesselParams b = beta({a, Scalar(1) - a});
    RatOp L = bessel_operator(b);
    // x^-2 (D - a)(D - 1 + a) = d^2 + (a - a^2) x^-2 = d^2 + (a - 2) x^-2
    EXPECT_EQ(L, d(2) + RatOp(RationalFunction(LaurentPoly::monomial(a - Scalar(2), -2))));
    auto id = indicial_data(L);
    EXPECT_EQ(id.classes.size(), 2u);
}

TEST(NormalizeBeta, Examples)
{
    auto n = normalize_beta(beta({0, 0}));
    EXPECT_EQ(n.beta, beta({Scalar(1, 2), Scalar(1, 2)}));
    EXPECT_EQ(n.shift, Scalar(1, 2));
    n = normalize_beta(beta({0, 1}));
    EXPECT_EQ(n.beta, beta({0, 1}));
    EXPECT_EQ(n.shift, Scalar(0));
    n = normalize_beta(beta({1, 2, 3}));
    EXPECT_EQ(n.beta, beta({0, 1, 2}));
    EXPECT_EQ(n.shift, Scalar(-1));
}

TEST(NormalizeBeta, GivesNormalizedOperator)
{
    testgen::Gen g(103);
    for (int i = 0; i < 30; ++i) {
        int N = g.uniform(2, 4);
        BesselParams b = random_normalized(g, N);
        EXPECT_TRUE(b.is_normalized());
        RatOp L = bessel_operator(b);
        EXPECT_TRUE(L.coeff(N - 1).is_zero());
        EXPECT_NO_THROW(require_normalized(L));
    }
}

TEST(NormalizeBeta, ShiftIsConjugationByPower)
{
    // x^c L_beta x^-c = L_(beta + c)
    testgen::Gen g(104);
    for (int i = 0; i < 10; ++i) {
        std::vector<Scalar> b;
        int N = g.uniform(1, 3);
        for (int k = 0; k < N; ++k)
            b.push_back(Scalar(g.uniform(-3, 3)));
        auto n = normalize_beta(bessel_params(b));
        if (!n.shift.is_integer())
            continue;
        int s = static_cast<int>(n.shift.rational().get_num().get_si());
        EXPECT_EQ(op_x(-s) * bessel_operator(n.beta) * op_x(s), bessel_operator(bessel_params(b)));
    }
}

TEST(BesselStringLaw, CommutatorWithEulerOperator)
{
    testgen::Gen g(105);
    RatOp E = op_x(1) * d();
    for (int i = 0; i < 20; ++i) {
        int N = g.uniform(1, 4);
        RatOp L = bessel_operator(random_normalized(g, N));
        EXPECT_EQ(commutator(L, E), L.scaled(RationalFunction(N)));
    }
}

TEST(BesselRank, Examples)
{
    auto r = bessel_rank(beta({-1, 2}), 6);
    EXPECT_EQ(r.rank, 1);
    bool has3 = false;
    for (const auto &[s, h] : r.witnesses)
        has3 = has3 || s == 3;
    EXPECT_TRUE(has3);

    r = bessel_rank(beta({Scalar(1, 4), Scalar(3, 4)}), 8);
    EXPECT_EQ(r.rank, 2);
    for (const auto &[s, h] : r.witnesses)
        EXPECT_EQ(s % 2, 0);

    r = bessel_rank(beta({0, 1}), 3);
    EXPECT_EQ(r.rank, 1);
    ASSERT_FALSE(r.witnesses.empty());
    EXPECT_EQ(r.witnesses[0].first, 1);
    EXPECT_EQ(r.witnesses[0].second, SPoly::variable());
    EXPECT_TRUE(r.upper_bound);
}

TEST(BesselRank, WitnessesCommute)
{
    testgen::Gen g(106);
    std::vector<BesselParams> cases = {beta({-1, 2}), beta({Scalar(1, 4), Scalar(3, 4)}), beta({0, 1, 2}),
                                       beta({-1, 1, 3})};
    for (int i = 0; i < 4; ++i)
        cases.push_back(random_normalized(g, g.uniform(2, 3)));
    for (const auto &b : cases) {
        RatOp L = bessel_operator(b);
        auto r = bessel_rank(b, 6);
        EXPECT_EQ(b.order() % r.rank, 0);
        bool hasN = false;
        for (const auto &[s, h] : r.witnesses) {
            RatOp M = commutant_operator(s, h);
            EXPECT_EQ(M.order(), s);
            EXPECT_TRUE(commutator(L, M).is_zero()) << b.str() << " s=" << s;
            hasN = hasN || s == b.order();
        }
        EXPECT_TRUE(hasN);
    }
}

TEST(BesselRank, RejectsSmallBound)
{
    EXPECT_EQ(code_of([] { bessel_rank(beta({0, 1, 2}), 2); }), ErrorCode::InvalidArgument);
}

TEST(BesselWave, Examples)
{
    auto w = bessel_wave_coeffs(beta({0, 1}), 10);
    EXPECT_TRUE(w.exact);
    EXPECT_EQ(w.c, std::vector<Scalar>{Scalar(1)});

    w = bessel_wave_coeffs(beta({-1, 2}), 10);
    EXPECT_TRUE(w.exact);
    EXPECT_EQ(w.c, (std::vector<Scalar>{Scalar(1), Scalar(-1)}));

    w = bessel_wave_coeffs(beta({Scalar(1, 4), Scalar(3, 4)}), 8);
    EXPECT_FALSE(w.exact);
    ASSERT_EQ(w.c.size(), 9u);
    for (const auto &x : w.c)
        EXPECT_FALSE(x.is_zero());
}

TEST(BesselWave, MatchesWaveOperatorRecursion)
{
    testgen::Gen g(107);
    std::vector<BesselParams> cases = {beta({Scalar(1, 4), Scalar(3, 4)}), beta({-1, 2}), beta({-2, 1, 4})};
    for (int i = 0; i < 6; ++i)
        cases.push_back(random_normalized(g, g.uniform(2, 3)));
    const int depth = 6;
    for (const auto &b : cases) {
        auto bw = bessel_wave_coeffs(b, depth);
        auto w = solve_wave_operator(bessel_operator(b), 4 * depth, depth);
        for (int j = 1; j <= depth; ++j) {
            Scalar cj = j < static_cast<int>(bw.c.size()) ? bw.c[j] : Scalar(0);
            Series want = Series::monomial(cj, -j);
            Series got = j < static_cast<int>(w.alpha.size()) ? w.alpha[j] : Series();
            EXPECT_TRUE((got - want).is_zero()) << b.str() << " j=" << j << " got " << got << " want " << want;
        }
    }
}

TEST(BesselWave, ResidualVanishes)
{
    // L K - K d^N = 0 wherever known
    for (const auto &b : {beta({Scalar(1, 4), Scalar(3, 4)}), beta({-1, 1, 3}), beta({Scalar(1, 3), 1, Scalar(5, 3)})}) {
        const int depth = 8;
        WaveOperator w = bessel_wave_operator(b, depth);
        const int N = b.order();
        PsdOp L(bessel_operator(b), -depth - N - 2);
        PsdOp res = PsdOp::mul(L, w.K, N - depth) - PsdOp::mul(w.K, PsdOp::d(N), N - depth);
        EXPECT_TRUE(res.is_zero()) << res;
    }
}

TEST(BesselWave, RequiresNormalized)
{
    EXPECT_EQ(code_of([] { bessel_wave_coeffs(beta({0, 0}), 4); }), ErrorCode::NotNormalized);
}
