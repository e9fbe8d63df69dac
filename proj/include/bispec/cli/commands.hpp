#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bispec/bessel/bessel.hpp"
#include "bispec/bispectral/bispectral.hpp"
#include "bispec/classify/classify.hpp"
#include "bispec/cli/json_io.hpp"
#include "bispec/darboux/darboux.hpp"

namespace bispec::cli {

// Exit codes: every requested certificate verified, a certificate was produced
// but does not verify, a module error stopped the run.
enum Exit { Verified = 0, NotVerified = 1, Failed = 2 };

struct RunResult {
    int code = Verified;
    Json doc;
};

inline Json certificate(const std::string &kind)
{
    Json j;
    j["kind"] = kind;
    j["inputs"] = Json::object();
    j["bounds"] = Json::object();
    j["witnesses"] = Json::object();
    j["residuals"] = Json::object();
    j["verified"] = false;
    return j;
}

inline RunResult finish(Json doc, bool ok, ErrorCode code_if_not)
{
    doc["verified"] = ok;
    if (!ok)
        doc["code"] = std::string(code_name(code_if_not));
    return {ok ? Verified : NotVerified, std::move(doc)};
}

inline std::vector<std::string> split_list(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        depth += c == '(' ? 1 : c == ')' ? -1 : 0;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline BesselParams parse_beta(const std::string &s, const Session &session)
{
    std::vector<Scalar> b;
    for (const auto &t : split_list(s, ','))
        b.push_back(parse_scalar(t, session));
    return bessel_params(std::move(b));
}

inline std::string residual_text(const RatOp &r) { return r.is_zero() ? "0" : print_operator(r); }

// ---- bessel ----

struct BesselOptions {
    std::string beta;
    bool normalize = false;
    int rank_bound = 8;
};

inline RunResult run_bessel(const BesselOptions &o, const Session &s = {})
{
    BesselParams b = parse_beta(o.beta, s);
    Json doc = certificate("bessel");
    doc["inputs"] = Json{{"beta", scalars_json(b.beta)}, {"normalize", o.normalize}};
    doc["bounds"] = Json{{"rank_bound", o.rank_bound}};
    Scalar shift(0);
    if (o.normalize) {
        auto nb = normalize_beta(b);
        b = nb.beta;
        shift = nb.shift;
    }
    const RatOp L = bessel_operator(b);
    const int N = L.order();
    const RatOp xd = RatOp(RationalFunction::x()) * RatOp::d(1);
    const RatOp res = commutator(L, xd) - L.scaled(RationalFunction(N));
    RankWitness rk = bessel_rank(b, std::max(o.rank_bound, N));
    Json rw = Json::array();
    for (const auto &[sdeg, h] : rk.witnesses)
        rw.push_back(Json{{"order", sdeg}, {"operator", "x^-" + std::to_string(sdeg) + "*h(D)"}, {"h", h.to_string("D")}});
    Json &w = doc["witnesses"];
    w["beta"] = scalars_json(b.beta);
    w["shift"] = scalar_text(shift);
    w["normalized"] = b.is_normalized();
    w["operator"] = operator_json(L);
    w["rank"] = rk.rank;
    w["rank_is_upper_bound"] = rk.upper_bound;
    w["commuting"] = rw;
    w["zr_invariance"] = zr_invariance(L);
    doc["residuals"]["[L, x*d] - N*L"] = residual_text(res);
    return finish(std::move(doc), res.is_zero(), ErrorCode::IdentityFailed);
}

// ---- darboux ----

struct DarbouxOptions {
    std::string base;
    int power = 1;
    std::vector<std::string> kernel;
    int prec = 24;
};

inline RunResult run_darboux(const DarbouxOptions &o, const Session &s = {})
{
    KernelSpec spec;
    spec.base = parse_beta(o.base, s);
    spec.power = o.power;
    std::vector<std::string> funcs;
    for (const auto &k : o.kernel)
        for (const auto &f : split_list(k, ';'))
            funcs.push_back(f);
    for (const auto &f : funcs)
        spec.basis.push_back(parse_kernel_function(f, s));
    Json doc = certificate("darboux");
    doc["inputs"] = Json{{"base", scalars_json(spec.base.beta)}, {"power", o.power}, {"kernel", funcs}};
    doc["bounds"] = Json{{"prec", o.prec}};

    auto basis = kernel_validate(spec);
    RatOp P = wronskian_operator(basis);
    RatOp Q = cofactor(spec.base, o.power, P);
    RatOp L = transformed_operator(P, Q, o.power, o.prec);
    RatOp Lb = bessel_operator(spec.base);
    RatOp r1 = Q * P - Lb.pow(o.power);
    RatOp r2 = L.pow(o.power) - P * Q;

    Json bj = Json::array();
    for (const auto &f : basis)
        bj.push_back(f.str());
    Json &w = doc["witnesses"];
    w["basis"] = bj;
    w["P"] = operator_json(P);
    w["Q"] = operator_json(Q);
    w["L"] = operator_json(L);
    doc["residuals"]["Q*P - L_beta^d"] = residual_text(r1);
    doc["residuals"]["L^d - P*Q"] = residual_text(r2);
    return finish(std::move(doc), r1.is_zero() && r2.is_zero(), ErrorCode::IdentityFailed);
}

// ---- verify ----

struct VerifyOptions {
    int theta_deg = 8;
    int max_m = 6;
    int prec = 16;
    int depth = 16;
};

inline Json residual_json(const std::optional<std::pair<int, int>> &r, const std::optional<int> &zlow)
{
    Json j;
    j["zero"] = !r.has_value();
    j["checked_from_zpow"] = zlow ? Json(*zlow) : Json(nullptr);
    j["first_nonzero"] = r ? Json{{"zpow", r->first}, {"xpow", r->second}} : Json(nullptr);
    return j;
}

// The document may carry "theta" (in x), "f" (in z) and "lambda" (an operator
// in z written with x and d); missing parts are computed.
inline RunResult run_verify(const Json &input, const VerifyOptions &o)
{
    Session s;
    const Json &opdoc = input.contains("operator") ? input["operator"] : input;
    read_field(input, s);
    RatOp L = operator_from_json(opdoc, s);
    Json doc = certificate("bispectral");
    doc["inputs"] = Json{{"L", operator_json(L)}};
    doc["bounds"] = Json{{"theta_deg", o.theta_deg}, {"max_m", o.max_m}, {"prec", o.prec}, {"depth", o.depth}};

    LaurentPoly theta;
    int m = 0;
    if (input.contains("theta")) {
        theta = parse_function(input["theta"].get<std::string>(), s).to_laurent();
        doc["inputs"]["theta"] = theta.str("x");
    } else {
        ThetaResult tr = find_theta(L, o.theta_deg, o.max_m);
        theta = tr.theta;
        m = tr.m;
    }
    SerOp Lambda;
    if (input.contains("lambda")) {
        Lambda = to_series(operator_from_json(input["lambda"], s), -o.prec);
        doc["inputs"]["lambda"] = operator_json(Lambda, "z");
    } else {
        Lambda = build_lambda(L, theta, o.prec, o.depth);
    }
    LaurentPoly f = LaurentPoly::monomial(Scalar(1), L.order());
    if (input.contains("f")) {
        f = detail::OperatorParser(input["f"].get<std::string>(), s, "z").parse().coeff(0).to_laurent();
        doc["inputs"]["f"] = f.str("z");
    }
    BispectralCertificate c = check_bispectral(L, Lambda, f, theta, o.prec, o.depth);
    Json &w = doc["witnesses"];
    w["theta"] = theta.str("x");
    w["m"] = m ? Json(m) : Json(c.m);
    w["f"] = f.str("z");
    w["Lambda"] = operator_json(Lambda, "z");
    w["wave_exact"] = c.wave_exact;
    doc["residuals"]["L psi - f psi"] = residual_json(c.residual_x, c.zlow_x);
    doc["residuals"]["Lambda psi - theta psi"] = residual_json(c.residual_z, c.zlow_z);
    return finish(std::move(doc), c.verified, ErrorCode::ResidualNonzero);
}

// ---- string ----

struct StringOptions {
    int prec = 48;
    int depth = 24;
    int identities = 3;
};

inline RunResult run_string(const Json &input, const StringOptions &o)
{
    Session s;
    RatOp L = operator_from_json(input, s);
    Json doc = certificate("string");
    doc["inputs"] = Json{{"L", operator_json(L)}};
    doc["bounds"] = Json{{"prec", o.prec}, {"depth", o.depth}, {"n_max", string_bound(L)}, {"identities", o.identities}};
    StringPair sp = string_pair(L, o.prec, o.depth);
    Json &w = doc["witnesses"];
    w["n"] = sp.n;
    w["exact"] = sp.exact;
    w["Q"] = sp.Q ? operator_json(*sp.Q) : operator_json(sp.Qs);
    std::optional<int> bad;
    if (sp.Q)
        bad = check_string_identities(L, *sp.Q, sp.n, o.identities);
    doc["residuals"]["[L, Q] - N*L^(n+1)"] = "0";
    doc["residuals"]["first_failing_identity"] = bad ? Json(*bad) : Json(nullptr);
    return finish(std::move(doc), sp.exact && !bad, ErrorCode::IdentityFailed);
}

// ---- classify ----

struct ClassifyOptions {
    int prec = 24;
    int depth = 24;
    std::optional<int> max_steps;
};

inline Json reduction_json(const ReductionCertificate &c)
{
    Json w;
    w["r"] = c.r;
    Json steps = Json::array();
    for (const auto &st : c.steps) {
        Json j;
        j["lambda"] = scalar_text(st.record.lambda);
        j["span"] = st.measure_span;
        j["multiplicity"] = st.measure_mult;
        j["P"] = operator_json(st.P);
        j["Q"] = operator_json(st.Q);
        j["L_after"] = operator_json(st.L_after);
        j["indicial_before"] = st.record.indicial_before.to_string("s");
        j["indicial_predicted"] = st.record.predicted.to_string("s");
        j["indicial_after"] = st.record.indicial_after.to_string("s");
        steps.push_back(j);
    }
    w["steps"] = steps;
    w["m"] = c.m;
    w["final"] = operator_json(c.final_op);
    w["beta"] = c.beta ? scalars_json(c.beta->beta) : Json(nullptr);
    if (c.beta) {
        w["A"] = operator_json(c.A);
        w["B"] = operator_json(c.B);
        w["rank"] = c.rank;
        w["beta_sum_normalized"] = c.beta_sum_ok;
    }
    if (!c.diagnostic.empty())
        w["diagnostic"] = c.diagnostic;
    return w;
}

inline RunResult run_classify(const Json &input, const ClassifyOptions &o)
{
    Session s;
    RatOp L = operator_from_json(input, s);
    Json doc = certificate("reduction");
    doc["inputs"] = Json{{"L", operator_json(L)}};
    ReductionConfig cfg{o.prec, o.depth, o.max_steps};
    auto fill_bounds = [&](const ReductionCertificate &c) {
        doc["bounds"] = Json{{"prec", o.prec}, {"depth", o.depth}, {"max_steps", c.max_steps}};
    };
    try {
        ReductionCertificate c = reduce_to_bessel(L, cfg);
        fill_bounds(c);
        doc["witnesses"] = reduction_json(c);
        doc["residuals"]["A*B - L^m"] = c.ab_verified ? "0" : "nonzero";
        doc["residuals"]["B*A - L_beta^m"] = c.ba_verified ? "0" : "nonzero";
        return finish(std::move(doc), c.verified(), ErrorCode::IdentityFailed);
    } catch (const ReductionError &e) {
        fill_bounds(e.partial());
        doc["witnesses"] = reduction_json(e.partial());
        doc["code"] = std::string(code_name(e.code()));
        doc["message"] = e.what();
        return {Failed, std::move(doc)};
    }
}

// ---- report ----

inline RunResult run_report(const Json &input, const CharacterizationBounds &b)
{
    Session s;
    RatOp L = operator_from_json(input, s);
    CharacterizationReport rep = characterization_report(L, b);
    Json doc = certificate("report");
    doc["inputs"] = Json{{"L", operator_json(L)}};
    doc["bounds"] = Json{{"theta_deg", b.theta_deg}, {"max_m", b.theta_m}, {"prec", b.prec}, {"depth", b.depth},
                         {"max_steps", b.max_steps ? Json(*b.max_steps) : Json(nullptr)}};
    Json gate{{"monic", rep.gate.monic}, {"normalized", rep.gate.normalized}, {"vanishing", rep.gate.vanishing},
              {"decay", rep.gate.decay}, {"admissible", rep.gate.admissible}, {"reason", rep.gate.reason}};
    if (rep.gate.level)
        gate["principal_level"] = Json{{"r", rep.gate.level->r.get_str()}, {"rho", rep.gate.level->rho}, {"sigma", rep.gate.level->sigma}};
    Json &w = doc["witnesses"];
    w["gate"] = gate;
    w["table"] = Json::array({
        Json{{"condition", "bispectral"}, {"verdict", verdict_name(rep.bispectral)}, {"detail", rep.detail_bispectral}},
        Json{{"condition", "fuchsian"}, {"verdict", verdict_name(rep.fuchsian)}, {"detail", rep.detail_fuchsian}},
        Json{{"condition", "bessel_darboux"}, {"verdict", verdict_name(rep.bessel_dt)}, {"detail", rep.detail_bessel_dt}},
    });
    if (rep.theta)
        w["theta"] = Json{{"theta", rep.theta->theta.str("x")}, {"m", rep.theta->m}};
    if (rep.reduction && rep.reduction->beta)
        w["beta"] = scalars_json(rep.reduction->beta->beta);
    doc["residuals"]["consistent"] = rep.consistent();
    return finish(std::move(doc), rep.consistent(), ErrorCode::InvariantViolated);
}

// ---- wave ----

struct WaveOptions {
    int prec = 24;
    int depth = 8;
};

inline RunResult run_wave(const Json &input, const WaveOptions &o)
{
    Session s;
    RatOp L = operator_from_json(input, s);
    Json doc = certificate("wave");
    doc["inputs"] = Json{{"L", operator_json(L)}};
    doc["bounds"] = Json{{"prec", o.prec}, {"depth", o.depth}};
    WaveOperator w = solve_wave_operator(L, o.prec, o.depth);
    const int N = L.order();
    bool decay = true;
    for (std::size_t j = 1; j < w.alpha.size(); ++j)
        if (!w.alpha[j].is_zero() && w.alpha[j].lead_exponent() > -static_cast<int>(j))
            decay = false;
    const int cap = N - o.depth;
    PsdOp res = PsdOp::mul(PsdOp(L, -o.prec), w.K, cap) - PsdOp::mul(w.K, PsdOp::d(N), cap);
    doc["witnesses"] = Json{{"K", operator_json(w.K)}, {"exact", w.exact}, {"decay", decay}};
    doc["residuals"]["L*K - K*d^N"] = Json{{"zero", res.is_zero()}, {"checked_from_dpow", cap}};
    return finish(std::move(doc), decay && res.is_zero(), ErrorCode::ResidualNonzero);
}

} // namespace bispec::cli
