#include <gtest/gtest.h>

#include "bispec/classify/classify.hpp"
#include "dtgen.hpp"

using namespace bispec;

namespace {

RationalFunction xp(long c, int e) { return RationalFunction(LaurentPoly::monomial(Scalar(c), e)); }
RatOp d(int k = 1) { return RatOp::d(k); }
RatOp c(long v, int e) { return RatOp(xp(v, e)); }

BesselParams beta(std::initializer_list<Scalar> b) { return bessel_params(std::vector<Scalar>(b)); }

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

RatOp d3_by_x()
{
    RatOp P = d() - c(1, -1);
    return transformed_operator(P, cofactor(beta({0, 1, 2}), 1, P), 1);
}

} // namespace

TEST(Admissible, Examples)
{
    auto a = admissible(d(2) - c(2, -2));
    EXPECT_TRUE(a.admissible);
    ASSERT_TRUE(a.fuchsian);
    EXPECT_TRUE(a.fuchsian->fuchsian);
    ASSERT_TRUE(a.level);
    EXPECT_EQ(a.level->r, Rational(1));

    a = admissible(d(2) + c(1, 1));
    EXPECT_FALSE(a.admissible);
    EXPECT_FALSE(a.vanishing);
    EXPECT_FALSE(a.level);

    a = admissible(d(2) + c(1, -1));
    EXPECT_FALSE(a.admissible);
    EXPECT_TRUE(a.vanishing);
    EXPECT_FALSE(a.decay);
    ASSERT_TRUE(a.level);
    EXPECT_EQ(a.level->r, Rational(3, 2));
    EXPECT_EQ(a.level->rho, 2);
    EXPECT_EQ(a.level->sigma, -1);

    EXPECT_FALSE(admissible(d(2) + d()).admissible);
    EXPECT_FALSE(admissible(d(2).scaled(xp(2, 0))).admissible);
    EXPECT_TRUE(admissible(d(4)).admissible);
}

TEST(Admissible, IrregularFinitePointIsReported)
{
    auto a = admissible(d(2) + c(1, -3));
    EXPECT_TRUE(a.admissible);
    ASSERT_TRUE(a.fuchsian);
    EXPECT_FALSE(a.fuchsian->fuchsian);
    EXPECT_TRUE(a.fuchsian->infinity_regular);
}

TEST(ReduceToBessel, BesselMinusOneTwo)
{
    RatOp L = d(2) - c(2, -2);
    auto cert = reduce_to_bessel(L);
    EXPECT_EQ(cert.m, 1);
    ASSERT_TRUE(cert.beta);
    EXPECT_EQ(*cert.beta, beta({0, 1}));
    EXPECT_EQ(cert.A, d() - c(1, -1));
    EXPECT_EQ(cert.B, d() + c(1, -1));
    // independent products
    EXPECT_EQ((d() - c(1, -1)) * (d() + c(1, -1)), L);
    EXPECT_EQ((d() + c(1, -1)) * (d() - c(1, -1)), d(2));
    EXPECT_TRUE(cert.verified());
    EXPECT_TRUE(cert.beta_sum_ok);
}

TEST(ReduceToBessel, SmallSpanBesselTakesNoSteps)
{
    for (const auto &b : {beta({0, 1}), beta({Scalar(1, 4), Scalar(3, 4)}), beta({0, 1, 2}), beta({Scalar(1, 2), Scalar(1, 2)})}) {
        auto cert = reduce_to_bessel(bessel_operator(b));
        EXPECT_EQ(cert.m, 0);
        EXPECT_EQ(*cert.beta, b);
        EXPECT_EQ(cert.A, RatOp(RationalFunction(1)));
        EXPECT_EQ(cert.B, RatOp(RationalFunction(1)));
        EXPECT_TRUE(cert.verified());
    }
}

TEST(ReduceToBessel, OrderThreeTransform)
{
    RatOp L = d3_by_x();
    auto cert = reduce_to_bessel(L);
    EXPECT_GE(cert.m, 1);
    EXPECT_EQ(*cert.beta, beta({0, 1, 2}));
    EXPECT_EQ(cert.A * cert.B, L.pow(cert.m));
    EXPECT_EQ(cert.B * cert.A, d(3).pow(cert.m));
    EXPECT_TRUE(cert.verified());
}

TEST(ReduceToBessel, ProgressMeasureDecreases)
{
    testgen::Gen g(401);
    for (int t = 0; t < 6; ++t) {
        auto gen = testgen::generate_mixed(g, 2);
        auto cert = reduce_to_bessel(gen.L);
        for (std::size_t i = 0; i < cert.steps.size(); ++i) {
            const auto &s = cert.steps[i];
            EXPECT_GE(s.measure_span, 2);
            EXPECT_EQ(s.Q * s.P, i == 0 ? gen.L : cert.steps[i - 1].L_after);
            EXPECT_EQ(s.record.indicial_after, s.record.predicted);
        }
        EXPECT_LT(indicial_data(cert.final_op).max_span(), 2);
    }
}

TEST(ReduceToBessel, GeneratedMixedKernels)
{
    // non-homogeneous transforms of Bessel operators come back to a Bessel operator
    testgen::Gen g(402);
    int order3 = 0;
    for (int t = 0; t < 8; ++t) {
        auto gen = testgen::generate_mixed(g, t < 6 ? 2 : 3);
        auto cert = reduce_to_bessel(gen.L);
        ASSERT_TRUE(cert.verified()) << gen.L;
        EXPECT_TRUE(cert.beta_sum_ok);
        EXPECT_EQ(bessel_operator(*cert.beta), cert.final_op);
        // every class of the final operator is short
        EXPECT_LT(indicial_data(cert.final_op).max_span(), gen.L.order());
        order3 += gen.L.order() == 3;
    }
    EXPECT_EQ(order3, 2);
}

TEST(ReduceToBessel, GeneratedMonomialKernels)
{
    testgen::Gen g(403);
    for (int t = 0; t < 10; ++t) {
        auto gen = testgen::generate(g);
        auto cert = reduce_to_bessel(gen.L);
        EXPECT_TRUE(cert.verified()) << gen.L;
        // the exponents move by integers only
        auto id0 = indicial_data(gen.L), id1 = indicial_data(cert.final_op);
        EXPECT_EQ(id0.classes.size(), id1.classes.size());
    }
}

TEST(ReduceToBessel, Failures)
{
    EXPECT_EQ(code_of([] { reduce_to_bessel(d(2) + c(1, 1)); }), ErrorCode::NotNormalized);
    EXPECT_EQ(code_of([] { reduce_to_bessel(d(2) + c(1, -3)); }), ErrorCode::NonzeroStringNumberAtTermination);
    try {
        reduce_to_bessel(d(2) + c(1, -3));
    } catch (const ReductionError &e) {
        EXPECT_EQ(e.partial().m, 0);
        EXPECT_EQ(e.partial().final_op, d(2) + c(1, -3));
        EXPECT_FALSE(e.partial().diagnostic.empty());
    }
    ReductionConfig cfg;
    cfg.max_steps = 1;
    EXPECT_EQ(code_of([&] { reduce_to_bessel(d(2) - c(6, -2), cfg); }), ErrorCode::StepLimitExceeded);
}

TEST(ReduceToBessel, RankIsPreserved)
{
    struct Case {
        RatOp L;
        int probe_bound;
    };
    RatOp quarter = bessel_operator(beta({Scalar(1, 4), Scalar(3, 4)}));
    std::vector<Case> cases = {{d(2) - c(2, -2), 3}, {d(2) - c(6, -2), 5}, {quarter, 6}, {d3_by_x(), 5}};
    for (const auto &cs : cases) {
        auto cert = reduce_to_bessel(cs.L);
        auto w = solve_wave_operator(cs.L, 32, 12);
        auto pr = spectral_probe(cs.L, w, cs.probe_bound);
        EXPECT_EQ(pr.rank, cert.rank) << cs.L;
        EXPECT_EQ(pr.rank, bessel_rank(*cert.beta, cs.probe_bound).rank);
    }
}

TEST(CharacterizationReport, Examples)
{
    auto rep = characterization_report(d(2) - c(2, -2));
    EXPECT_EQ(rep.bispectral, Verdict::Yes);
    EXPECT_EQ(rep.fuchsian, Verdict::Yes);
    EXPECT_EQ(rep.bessel_dt, Verdict::Yes);
    EXPECT_TRUE(rep.consistent());

    rep = characterization_report(d(2) + c(1, -3));
    EXPECT_EQ(rep.fuchsian, Verdict::No);
    EXPECT_EQ(rep.bispectral, Verdict::Unknown);
    EXPECT_EQ(rep.bessel_dt, Verdict::No);
    EXPECT_TRUE(rep.consistent());

    for (int N = 2; N <= 4; ++N) {
        rep = characterization_report(d(N));
        EXPECT_EQ(rep.bispectral, Verdict::Yes);
        EXPECT_EQ(rep.fuchsian, Verdict::Yes);
        EXPECT_EQ(rep.bessel_dt, Verdict::Yes);
    }

    rep = characterization_report(d(2) + c(1, 1));
    EXPECT_EQ(rep.bispectral, Verdict::No);
    EXPECT_EQ(rep.fuchsian, Verdict::No);
    EXPECT_EQ(rep.bessel_dt, Verdict::No);
}

TEST(CharacterizationReport, AgreesOnGeneratedTransforms)
{
    testgen::Gen g(404);
    for (int t = 0; t < 3; ++t) {
        auto gen = testgen::generate_mixed(g, 2);
        auto rep = characterization_report(gen.L);
        EXPECT_EQ(rep.fuchsian, Verdict::Yes) << gen.L;
        EXPECT_EQ(rep.bessel_dt, Verdict::Yes) << gen.L;
        EXPECT_NE(rep.bispectral, Verdict::No) << gen.L;
        EXPECT_TRUE(rep.consistent());
    }
}
