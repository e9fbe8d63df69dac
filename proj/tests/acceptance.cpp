// Acceptance run: one PASS/FAIL line per criterion. Every check is an exact
// identity over Q or Q(a); there is no numeric tolerance anywhere.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bispec/classify/classify.hpp"
#include "gen.hpp"
#include "dtgen.hpp"

using namespace bispec;

namespace {

// Pinned bounds.
constexpr int kCertPrec = 16, kCertDepth = 16;      // criterion 4
constexpr int kThetaDeg = 8, kThetaM = 6;           // criterion 5
constexpr int kLawPairs = 100;                      // criterion 6
constexpr int kRootShiftOps = 20;                   // criterion 7
constexpr int kIdentityMax = 3;                     // criterion 9
constexpr int kRankBound = 8;                       // criterion 10
constexpr int kProbeBound = 6;                      // criterion 10
constexpr const char *kTolerance = "exact (zero residual in exact arithmetic)";

RationalFunction xp(const Scalar &c, int e) { return RationalFunction(LaurentPoly::monomial(c, e)); }
RatOp d(int k = 1) { return RatOp::d(k); }
RatOp c(long v, int e) { return RatOp(xp(Scalar(v), e)); }
LaurentPoly mono(long v, int e) { return LaurentPoly::monomial(Scalar(v), e); }
BesselParams beta(std::initializer_list<Scalar> b) { return bessel_params(std::vector<Scalar>(b)); }
Scalar q(long n, long m) { return Scalar(n, m); }

struct Check {
    bool ok = true;
    std::ostringstream note;

    void expect(bool cond, const std::string &what)
    {
        if (!cond && ok)
            note << "first failure: " << what;
        ok = ok && cond;
    }
};

std::vector<BesselParams> string_law_betas()
{
    return {
        beta({-1, 2}), beta({q(1, 4), q(3, 4)}), beta({0, 1}), beta({-2, 3}), beta({q(1, 2), q(1, 2)}),
        beta({-1, 1, 3}), beta({0, 1, 2}), beta({q(-1, 3), 1, q(7, 3)}), beta({q(1, 2), q(1, 2), 2}),
        beta({0, 1, 2, 3}), beta({-1, 1, 2, 4}), beta({q(1, 2), q(1, 2), q(5, 2), q(5, 2)}),
    };
}

RatOp euler() { return RatOp(RationalFunction::x()) * d(); }

RatOp order3_instance()
{
    KernelSpec spec{beta({0, 1, 2}), 1, {LogFunction::term(Scalar(1), Scalar(1))}};
    RatOp P = wronskian_operator(kernel_validate(spec));
    return transformed_operator(P, cofactor(spec.base, 1, P), 1);
}

void c1(Check &ch)
{
    int n = 0;
    for (const auto &b : string_law_betas()) {
        ch.expect(b.is_normalized(), "beta " + b.str() + " normalized");
        RatOp L = bessel_operator(b);
        ch.expect(commutator(L, euler()) == L.scaled(RationalFunction(b.order())), "[L, x d] = N L for " + b.str());
        ++n;
    }
    ch.note << n << " operators, N in {2,3,4}";
}

void c2(Check &ch)
{
    KernelSpec spec{beta({0, 1}), 1, {LogFunction::term(Scalar(1), Scalar(1))}};
    RatOp P = wronskian_operator(kernel_validate(spec));
    RatOp Q = cofactor(spec.base, 1, P);
    ch.expect(P == d() - c(1, -1), "P = d - x^-1");
    ch.expect(Q == d() + c(1, -1), "Q = d + x^-1");
    ch.expect(Q * P == d(2), "Q P = d^2");
    ch.expect(P * Q == d(2) - c(2, -2), "P Q = d^2 - 2x^-2");
    ch.note << "P = " << P << ", Q = " << Q;
}

void c3(Check &ch)
{
    RatOp L = d(2) - c(2, -2);
    const PsdOp expect = PsdOp(1) - PsdOp::term(Series(mono(1, -1)), -1);
    for (int depth = 3; depth <= 8; ++depth) {
        WaveOperator w = solve_wave_operator(L, 16, depth);
        ch.expect(w.K == expect, "K = 1 - x^-1 d^-1 at depth " + std::to_string(depth));
        ch.expect(PsdOp(L, -16) * w.K == w.K * PsdOp::d(2), "L K = K d^2");
        for (std::size_t j = 1; j < w.alpha.size(); ++j)
            ch.expect(w.alpha[j].is_zero() || w.alpha[j].lead_exponent() <= -static_cast<int>(j), "ord alpha_j <= -j");
    }
    // decay on a non-terminating wave operator as well
    WaveOperator w = solve_wave_operator(bessel_operator(beta({q(1, 4), q(3, 4)})), 30, 10);
    for (std::size_t j = 1; j < w.alpha.size(); ++j)
        ch.expect(w.alpha[j].is_zero() || w.alpha[j].lead_exponent() <= -static_cast<int>(j), "ord alpha_j <= -j, beta = (1/4, 3/4)");
    ch.note << "depths 3..8";
}

void c4(Check &ch)
{
    RatOp L = d(2) - c(2, -2);
    auto cert = check_bispectral(L, to_series(L, -kCertPrec), mono(1, 2), mono(1, 2), kCertPrec, kCertDepth);
    ch.expect(cert.verified && !cert.residual_x && !cert.residual_z, "zero residuals for (d^2 - 2x^-2, z^2, x^2)");
    std::vector<BesselParams> sym = {beta({-1, 2}), beta({q(1, 4), q(3, 4)}), beta({-2, 3}),
                                     beta({-1, 1, 3}), beta({q(-1, 3), 1, q(7, 3)}), beta({-1, 1, 2, 4})};
    for (const auto &b : sym) {
        RatOp Lb = bessel_operator(b);
        const int N = b.order();
        auto cb = check_bispectral(Lb, to_series(Lb, -kCertPrec), mono(1, N), mono(1, N), kCertPrec, kCertDepth);
        ch.expect(cb.verified, "Bessel symmetry for " + b.str());
    }
    ch.note << "T = " << kCertPrec << ", depth = " << kCertDepth << ", " << sym.size() << " symmetry cases";
}

void c5(Check &ch)
{
    auto a = find_theta(d(2), kThetaDeg, kThetaM);
    ch.expect(a.theta == mono(1, 1) && a.m == 1, "(x, 1) for d^2");
    auto b = find_theta(d(2) - c(2, -2), kThetaDeg, kThetaM);
    ch.expect(b.theta == mono(1, 2) && b.m == 2, "(x^2, 2) for d^2 - 2x^-2");
    bool notfound = false;
    try {
        find_theta(d(2) + c(1, -1), kThetaDeg, kThetaM);
    } catch (const Error &e) {
        notfound = e.code() == ErrorCode::NotFound;
    }
    ch.expect(notfound, "NotFound for d^2 + x^-1");
    ch.note << "deg <= " << kThetaDeg << ", m <= " << kThetaM;
}

RatOp random_laurent_op(testgen::Gen &g, int max_order, int lo, int hi)
{
    std::vector<LaurentPoly> v;
    int n = g.uniform(0, max_order);
    for (int k = 0; k <= n; ++k)
        v.push_back(g.coin(30) ? LaurentPoly() : g.laurent(lo, hi, 2, 4));
    if (v.back().is_zero())
        v.back() = LaurentPoly(Scalar(g.nonzero_rational(4)));
    return laurent_op(v);
}

void c6(Check &ch)
{
    testgen::Gen g(6001);
    for (int i = 0; i < kLawPairs; ++i) {
        int rho = g.uniform(0, 3);
        int sigma = g.uniform(-rho + 1, 3);
        RatOp A = random_laurent_op(g, 3, -4, 0), B = random_laurent_op(g, 3, -4, 0);
        auto pa = graded_profile(A, rho, sigma), pb = graded_profile(B, rho, sigma), pab = graded_profile(A * B, rho, sigma);
        ch.expect(pab.order_v == pa.order_v + pb.order_v && pab.assoc_poly == pa.assoc_poly * pb.assoc_poly,
                  "associated polynomial of a product, pair " + std::to_string(i));
    }
    for (int i = 0; i < kLawPairs; ++i) {
        RatOp A = random_laurent_op(g, 3, -3, 3), B = random_laurent_op(g, 3, -3, 3);
        auto a = indicial_data(A), b = indicial_data(B), ab = indicial_data(A * B);
        ch.expect(ab.weight == a.weight + b.weight && ab.indicial_poly == a.indicial_poly.shifted(Scalar(b.weight)) * b.indicial_poly,
                  "f1(D + wt L2) f2(D), pair " + std::to_string(i));
    }
    ch.note << kLawPairs << " pairs per law";
}

void c7(Check &ch)
{
    testgen::Gen g(7001);
    int ops = 0, steps = 0, order3 = 0;
    while (ops < kRootShiftOps) {
        testgen::Generated gen = testgen::generate(g);
        const RatOp &L = gen.L;
        const int N = L.order();
        auto w = solve_wave_operator(L, 24, 4);
        auto id = indicial_data(L);
        for (const auto &cls : id.classes) {
            auto res = darboux_step(to_series(L, -24), w, cls, zr_invariance(L), 10);
            const Scalar lam = res.record.lambda;
            // independent recomputation on the transformed operator
            SPoly after = indicial_data(res.L).indicial_poly;
            ch.expect(after == predicted_indicial(id.indicial_poly, lam, N), "indicial update for " + L.str());
            ch.expect(after.eval(lam + Scalar(N - 1)).is_zero(), "chosen root moves by N - 1");
            ++steps;
        }
        order3 += N == 3;
        ++ops;
    }
    ch.expect(order3 > 0 && order3 < ops, "both orders 2 and 3 generated");
    ch.note << ops << " operators (" << order3 << " of order 3), " << steps << " steps";
}

void c8(Check &ch)
{
    RatOp L = d(2) - c(2, -2);
    auto cert = reduce_to_bessel(L);
    ch.expect(cert.m == 1 && cert.steps.size() == 1, "one step");
    ch.expect(cert.beta && *cert.beta == beta({0, 1}), "beta' = (0, 1)");
    ch.expect(cert.A == d() - c(1, -1) && cert.B == d() + c(1, -1), "A = d - x^-1, B = d + x^-1");
    ch.expect(cert.A * cert.B == L && cert.B * cert.A == d(2), "A B = L, B A = d^2");

    RatOp L3 = order3_instance();
    auto c3 = reduce_to_bessel(L3);
    ch.expect(c3.beta.has_value(), "order-3 reduction terminates at a Bessel operator");
    if (c3.beta) {
        RatOp Lb = bessel_operator(*c3.beta);
        ch.expect(c3.A * c3.B == L3.pow(c3.m) && c3.B * c3.A == Lb.pow(c3.m), "A B = L^m, B A = L_beta'^m (order 3)");
        ch.note << "order 3: m = " << c3.m << ", beta' = " << c3.beta->str();
    }
}

void c9(Check &ch)
{
    int pairs = 0;
    for (const auto &b : string_law_betas()) {
        ch.expect(!check_string_identities(bessel_operator(b), euler(), 0, kIdentityMax), "Bessel pair " + b.str());
        ++pairs;
    }
    std::vector<RatOp> ops = {d(2) - c(2, -2), d(2), order3_instance()};
    for (const RatOp &L : ops) {
        StringPair sp = string_pair(L);
        ch.expect(sp.Q.has_value() && sp.exact, "string pair of " + L.str());
        if (sp.Q)
            ch.expect(!check_string_identities(L, *sp.Q, sp.n, kIdentityMax), "identities for " + L.str());
        ++pairs;
    }
    ch.note << pairs << " pairs, i <= " << kIdentityMax;
}

void c10(Check &ch)
{
    ch.expect(bessel_rank(beta({-1, 2}), kRankBound).rank == 1, "rank 1 for (-1, 2)");
    ch.expect(bessel_rank(beta({q(1, 4), q(3, 4)}), kRankBound).rank == 2, "rank 2 for (1/4, 3/4)");
    for (const auto &b : string_law_betas())
        ch.expect(zr_invariance(bessel_operator(b)) == b.order(), "zr_invariance = N for " + b.str());
    int witnesses = 0;
    for (const auto &b : {beta({-1, 2}), beta({q(1, 4), q(3, 4)}), beta({-1, 1, 3})}) {
        RatOp L = bessel_operator(b);
        auto pr = spectral_probe(L, solve_wave_operator(L, 32, 12), kProbeBound);
        for (const auto &w : pr.witnesses) {
            for (const auto &[e, v] : w.f.terms())
                ch.expect(e % pr.rank == 0, "b1 image supported on multiples of r for " + b.str());
            ++witnesses;
        }
    }
    ch.note << "rank bound " << kRankBound << ", probe bound " << kProbeBound << ", " << witnesses << " witnesses";
}

void c11(Check &ch)
{
    ch.expect(!admissible(d(2) + c(1, 1)).admissible, "Airy rejected");
    auto f = fuchsian_everywhere(d(2) + c(1, -3));
    bool zero_irregular = false;
    for (const auto &sp : f.finite)
        zero_irregular = zero_irregular || (sp.factor == SPoly::variable() && !sp.regular);
    ch.expect(!f.fuchsian && zero_irregular, "d^2 + x^-3 irregular at 0");
    RatOp L = d(2) + c(1, -1);
    auto pl = principal_level(L);
    ch.expect(pl.r == Rational(3, 2) && pl.rho == 2 && pl.sigma == -1, "level 3/2 with (rho, sigma) = (2, -1)");
    auto gp = graded_profile(L, pl.rho, pl.sigma);
    ch.expect(gp.assoc_poly == BiLaurent::monomial(Scalar(1), 0, 2) + BiLaurent::monomial(Scalar(1), -1, 0), "Y^2 + X^-1");
    ch.note << "Airy, d^2 + x^-3, d^2 + x^-1 at level " << pl.r.get_str();
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char *name;
        std::function<void(Check &)> run;
    };
    const std::vector<Criterion> all = {
        {1, "Bessel string law", c1},       {2, "Darboux roundtrip", c2},      {3, "wave operator", c3},
        {4, "bispectral certificate", c4},  {5, "theta search", c5},           {6, "grading laws", c6},
        {7, "root-shift law", c7},          {8, "end-to-end classification", c8}, {9, "string identities", c9},
        {10, "rank and invariance", c10},   {11, "negative gates", c11},
    };
    std::cout << "tolerance: " << kTolerance << "\n";
    int failed = 0;
    for (const auto &cr : all) {
        Check ch;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(ch);
        } catch (const std::exception &e) {
            ch.ok = false;
            ch.note << " exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (ch.ok ? "PASS" : "FAIL") << "  " << cr.id << ". " << cr.name << " [" << ch.note.str() << "] ("
                  << std::fixed << std::setprecision(2) << secs << " s)\n";
        failed += !ch.ok;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " of 11" : std::string("all 11 criteria pass")) << "\n";
    return failed ? 1 : 0;
}
