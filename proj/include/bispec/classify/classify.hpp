#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bispec/bispectral/bispectral.hpp"

namespace bispec {

struct AdmissibilityReport {
    bool monic = false;
    bool normalized = false; // V_(N-1) = 0
    bool vanishing = false;  // every lower coefficient vanishes at infinity
    bool decay = false;      // ... at least as x^-2
    bool admissible = false;
    std::optional<PrincipalLevel> level;
    std::optional<FuchsianReport> fuchsian;
    std::string reason;
};

inline AdmissibilityReport admissible(const RatOp &L)
{
    AdmissibilityReport rep;
    const int N = L.order();
    rep.monic = N >= 1 && L.is_monic();
    rep.normalized = rep.monic && (N < 2 || L.coeff(N - 1).is_zero());
    rep.vanishing = rep.decay = true;
    for (int k = 0; k < N; ++k) {
        const auto &c = L.coeff(k);
        if (c.is_zero())
            continue;
        const int o = c.ord_at_infinity();
        if (o >= 0 && rep.vanishing) {
            rep.vanishing = false;
            rep.reason = "coefficient of d^" + std::to_string(k) + " does not vanish at infinity";
        }
        if (o > -2 && rep.decay) {
            rep.decay = false;
            if (rep.reason.empty())
                rep.reason = "coefficient of d^" + std::to_string(k) + " decays slower than x^-2";
        }
    }
    if (!rep.monic)
        rep.reason = "operator is not monic";
    else if (!rep.normalized)
        rep.reason = "coefficient of d^(N-1) is not zero";
    if (rep.normalized && rep.vanishing)
        rep.level = principal_level(L);
    if (N >= 1)
        rep.fuchsian = fuchsian_everywhere(L);
    rep.admissible = rep.monic && rep.normalized && rep.vanishing && rep.decay;
    return rep;
}

struct ReductionConfig {
    int prec = 24;
    int depth = 24;
    std::optional<int> max_steps; // default N (max span + N)
};

struct ReductionStep {
    DarbouxStepRecord record;
    RatOp P, Q;    // rational forms, L_(i-1) = Q P
    RatOp L_after; // P Q
    int measure_span = 0, measure_mult = 0; // chosen class before the step
};

struct ReductionCertificate {
    RatOp L;
    int r = 1; // Z_r invariance used for the kernel solutions
    std::vector<ReductionStep> steps;
    RatOp final_op;
    std::optional<BesselParams> beta;
    int m = 0;
    RatOp A, B;
    bool ab_verified = false; // A B = L^m
    bool ba_verified = false; // B A = L_beta'^m
    bool beta_sum_ok = false; // sum beta' = N(N-1)/2
    int rank = 0;             // bessel_rank of the final operator
    ReductionConfig bounds;
    int max_steps = 0;
    std::string diagnostic;
    bool verified() const { return beta && ab_verified && ba_verified; }
};

// Carries the partial chain of a failed reduction.
class ReductionError : public Error {
public:
    ReductionError(ErrorCode code, const std::string &what, ReductionCertificate partial)
        : Error(code, what), partial_(std::move(partial))
    {
    }
    const ReductionCertificate &partial() const { return partial_; }

private:
    ReductionCertificate partial_;
};

namespace detail {

// All roots of p, extending Q once when p has an irreducible factor.
inline std::vector<Scalar> split_roots(const SPoly &p, FieldHandle field)
{
    auto fs = factor_over_field(p, field);
    for (const auto &f : fs) {
        if (f.factor.degree() == 1)
            continue;
        if (field)
            fail(ErrorCode::UnsupportedFieldSplit, "indicial polynomial does not split over the coefficient field");
        std::vector<Rational> q;
        for (const auto &c : f.factor.coeffs())
            q.push_back(c.rational());
        return split_roots(p, field_extend(QPoly(q)));
    }
    std::vector<Scalar> out;
    for (const auto &f : fs)
        for (int i = 0; i < f.multiplicity; ++i)
            out.push_back(-f.factor[0]);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_bessel_shape(const RatOp &L)
{
    if (!has_laurent_coeffs(L))
        return false;
    DForm f = dform(L);
    return f.parts.size() == 1 && f.parts.begin()->first == -L.order();
}

// Class of classes_after holding the root mu, measured as (span, multiplicity at min).
inline std::optional<std::pair<int, int>> class_measure(const std::vector<RootClass> &classes, const Scalar &mu)
{
    for (const auto &c : classes)
        for (const auto &[k, m] : c.offsets)
            if (c.member(k).eval(mu).is_zero())
                return std::pair{c.span(), c.multiplicity_at_min()};
    return std::nullopt;
}

// phi'/phi for phi = x^lambda s: exact when s is a finite sum, otherwise
// reconstructed from the series coefficient of P = d - a.
inline RationalFunction rational_log_derivative(const KernelSolution &phi, const SerOp &P, int prec)
{
    RationalFunction a(LaurentPoly::monomial(phi.lambda, -1));
    if (phi.exact) {
        RationalFunction s(phi.body().to_laurent());
        return a + s.derivative() / s;
    }
    return reconstruct_coefficient(-P.coeff(0), prec / 2);
}

inline RatOp product(const std::vector<RatOp> &ops)
{
    RatOp out(RationalFunction(1));
    for (const auto &o : ops)
        out = out * o;
    return out;
}

} // namespace detail

inline ReductionCertificate reduce_to_bessel(const RatOp &L, const ReductionConfig &cfg = {})
{
    require_normalized(L);
    auto adm = admissible(L);
    if (!adm.admissible)
        fail(ErrorCode::NotNormalized, "operator is not admissible: " + adm.reason);
    const int N = L.order();
    ReductionCertificate cert;
    cert.L = L;
    cert.bounds = cfg;
    cert.r = zr_invariance(L);
    cert.max_steps = cfg.max_steps.value_or(N * (indicial_data(L).max_span() + N));
    const int prec = cfg.prec, r = cert.r;

    RatOp cur = L;
    while (true) {
        auto id = indicial_data(cur);
        const RootClass *cls = nullptr;
        for (const auto &c : id.classes)
            if (c.span() >= N) {
                cls = &c;
                break;
            }
        if (!cls)
            break;
        if (static_cast<int>(cert.steps.size()) >= cert.max_steps) {
            cert.final_op = cur;
            throw ReductionError(ErrorCode::StepLimitExceeded,
                                 "no Bessel operator after " + std::to_string(cert.max_steps) + " steps", cert);
        }
        ReductionStep st;
        st.measure_span = cls->span();
        st.measure_mult = cls->multiplicity_at_min();
        // P = d - phi'/phi exactly; the series step only supplies phi and its checks
        std::string why;
        for (int p = prec; p <= 4 * prec && st.P.is_zero(); p *= 2) {
            try {
                WaveOperator w = solve_wave_operator(cur, p, cfg.depth);
                DarbouxResult res = darboux_step(to_series(cur, -(2 * p * r + N + 4)), w, *cls, r, p);
                RationalFunction a = detail::rational_log_derivative(res.record.phi, res.record.P, p);
                st.record = res.record;
                st.P = RatOp(std::vector<RationalFunction>{-a, RationalFunction(1)});
            } catch (const Error &e) {
                why = e.what();
            }
        }
        if (st.P.is_zero()) {
            cert.final_op = cur;
            throw ReductionError(ErrorCode::ReconstructionFailed,
                                 "step " + std::to_string(cert.steps.size() + 1) + ": " + why, cert);
        }
        auto [Qx, rem] = right_divide(cur, st.P);
        if (!rem.is_zero()) {
            cert.final_op = cur;
            throw ReductionError(ErrorCode::NonzeroRemainder,
                                 "step " + std::to_string(cert.steps.size() + 1) + ": exact division leaves " + rem.str(), cert);
        }
        st.Q = Qx;
        st.L_after = st.P * st.Q;
        auto after = detail::class_measure(indicial_data(st.L_after).classes, st.record.lambda + Scalar(N - 1));
        if (!after || *after >= std::pair{st.measure_span, st.measure_mult})
            fail(ErrorCode::InvariantViolated, "Darboux step did not shrink the chosen class");
        cur = st.L_after;
        cert.steps.push_back(std::move(st));
    }
    cert.final_op = cur;
    cert.m = static_cast<int>(cert.steps.size());

    if (!detail::is_bessel_shape(cur)) {
        cert.diagnostic = "final operator " + cur.str() + " is not homogeneous";
        try {
            WaveOperator w = solve_wave_operator(cur, prec, cfg.depth);
            auto sp = string_pair(cur, w, string_bound(cur) + 1, cfg.depth, prec);
            cert.diagnostic += "; string number " + std::to_string(sp.n);
            if (sp.Q)
                cert.diagnostic += " with Q = " + sp.Q->str();
        } catch (const Error &e) {
            cert.diagnostic += "; " + std::string(e.what());
        }
        throw ReductionError(ErrorCode::NonzeroStringNumberAtTermination, cert.diagnostic, cert);
    }
    // n = 0 with Q = x d, which holds exactly for the homogeneous final operator
    if (commutator(cur, op_x(1) * RatOp::d(1)) != cur.scaled(RationalFunction(N))) {
        cert.diagnostic = "[L_m, x d] != N L_m";
        throw ReductionError(ErrorCode::NonzeroStringNumberAtTermination, cert.diagnostic, cert);
    }
    BesselParams beta = bessel_params(detail::split_roots(indicial_data(cur).indicial_poly, op_field(cur)));
    if (bessel_operator(beta) != cur)
        fail(ErrorCode::InvariantViolated, "final operator is not L_beta for its indicial roots");
    cert.beta = beta;
    cert.beta_sum_ok = beta.is_normalized();

    std::vector<RatOp> Qs, Ps;
    for (const auto &s : cert.steps)
        Qs.push_back(s.Q);
    for (auto it = cert.steps.rbegin(); it != cert.steps.rend(); ++it)
        Ps.push_back(it->P);
    cert.A = detail::product(Qs);
    cert.B = detail::product(Ps);
    cert.ab_verified = cert.A * cert.B == L.pow(cert.m);
    cert.ba_verified = cert.B * cert.A == cur.pow(cert.m);
    if (!cert.ab_verified || !cert.ba_verified)
        throw ReductionError(ErrorCode::IdentityFailed, "A B = L^m or B A = L_beta^m fails", cert);
    cert.rank = bessel_rank(beta, 2 * N).rank;
    return cert;
}

enum class Verdict { Yes, No, Unknown };

inline std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

struct CharacterizationBounds {
    int theta_deg = 6, theta_m = 6;
    int prec = 24, depth = 16;
    std::optional<int> max_steps;
};

struct CharacterizationReport {
    AdmissibilityReport gate;
    Verdict bispectral = Verdict::Unknown; // condition 1
    Verdict fuchsian = Verdict::Unknown;   // condition 2
    Verdict bessel_dt = Verdict::Unknown;  // condition 3
    std::string detail_bispectral, detail_fuchsian, detail_bessel_dt;
    std::optional<ThetaResult> theta;
    std::optional<ReductionCertificate> reduction;
    CharacterizationBounds bounds;
    // no condition says yes while another says no
    bool consistent() const
    {
        bool y = false, n = false;
        for (Verdict v : {bispectral, fuchsian, bessel_dt}) {
            y = y || v == Verdict::Yes;
            n = n || v == Verdict::No;
        }
        return !(y && n);
    }
};

inline CharacterizationReport characterization_report(const RatOp &L, const CharacterizationBounds &b = {})
{
    CharacterizationReport rep;
    rep.bounds = b;
    rep.gate = admissible(L);

    if (!rep.gate.admissible) {
        rep.bispectral = Verdict::No;
        rep.detail_bispectral = "not admissible: " + rep.gate.reason;
    } else {
        try {
            rep.theta = find_theta(L, b.theta_deg, b.theta_m);
            WaveOperator w = solve_wave_operator(L, b.prec, b.depth);
            SerOp lam = build_lambda(w, rep.theta->theta, b.depth);
            LaurentPoly f = LaurentPoly::monomial(Scalar(1), L.order());
            verify_bispectral(L, lam, f, rep.theta->theta, b.prec, b.depth);
            rep.bispectral = Verdict::Yes;
            rep.detail_bispectral = "theta = " + rep.theta->theta.str() + ", m = " + std::to_string(rep.theta->m);
        } catch (const Error &e) {
            rep.bispectral = Verdict::Unknown;
            rep.detail_bispectral = std::string("no witness within bounds: ") + e.what();
        }
    }

    if (rep.gate.fuchsian) {
        rep.fuchsian = rep.gate.fuchsian->fuchsian ? Verdict::Yes : Verdict::No;
        if (!rep.gate.fuchsian->infinity_regular)
            rep.detail_fuchsian = "irregular at infinity";
        for (const auto &sp : rep.gate.fuchsian->finite)
            if (!sp.regular)
                rep.detail_fuchsian += (rep.detail_fuchsian.empty() ? "" : "; ") + std::string("irregular at roots of ") +
                                       sp.factor.to_string("x");
    }

    if (!rep.gate.admissible) {
        rep.bessel_dt = Verdict::No;
        rep.detail_bessel_dt = "not admissible: " + rep.gate.reason;
    } else {
        try {
            rep.reduction = reduce_to_bessel(L, {b.prec, b.prec, b.max_steps});
            rep.bessel_dt = Verdict::Yes;
            rep.detail_bessel_dt = "beta' = " + rep.reduction->beta->str() + " after " + std::to_string(rep.reduction->m) + " steps";
        } catch (const ReductionError &e) {
            rep.reduction = e.partial();
            rep.bessel_dt = e.code() == ErrorCode::NonzeroStringNumberAtTermination ? Verdict::No : Verdict::Unknown;
            rep.detail_bessel_dt = e.what();
        } catch (const Error &e) {
            rep.bessel_dt = Verdict::Unknown;
            rep.detail_bessel_dt = e.what();
        }
    }
    return rep;
}

} // namespace bispec
