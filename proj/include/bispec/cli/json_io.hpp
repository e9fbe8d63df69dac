#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bispec/cli/parse.hpp"
#include "bispec/psdo/psdo.hpp"

namespace bispec {

using Json = nlohmann::ordered_json;

inline std::string scalar_text(const Scalar &s) { return s.str(); }

inline Json field_json(const FieldHandle &f)
{
    if (!f)
        return nullptr;
    return Json{{"generator", f->generator()}, {"minpoly", f->minimal_polynomial().to_string(f->generator())}};
}

// The field of the first non-rational coefficient, if any.
inline FieldHandle operator_field(const RatOp &L)
{
    for (const auto &c : L.coeffs())
        for (const auto *p : {&c.num(), &c.den()})
            for (int i = 0; i <= p->degree(); ++i)
                if (!(*p)[i].is_rational())
                    return (*p)[i].field();
    return nullptr;
}

// {order, [field], terms: [{dpow, num, den}]}; num and den are polynomials in x.
inline Json operator_json(const RatOp &L)
{
    Json j;
    j["order"] = L.is_zero() ? 0 : L.order();
    if (FieldHandle f = operator_field(L))
        j["field"] = field_json(f);
    Json terms = Json::array();
    for (int k = L.order(); k >= 0; --k) {
        const RationalFunction &c = L.coeff(k);
        if (c.is_zero())
            continue;
        terms.push_back(Json{{"dpow", k}, {"num", c.num().to_string("x")}, {"den", c.den().to_string("x")}});
    }
    j["terms"] = terms;
    j["text"] = print_operator(L);
    return j;
}

inline Json series_term(int dpow, const Series &s, const std::string &var)
{
    Json t{{"dpow", dpow}, {"num", s.to_laurent().str(var)}, {"den", "1"}};
    if (s.floor())
        t["floor"] = *s.floor();
    return t;
}

// Known terms of a truncated operator; `floor` marks the lowest known exponent.
inline Json operator_json(const SerOp &L, const std::string &var = "x")
{
    Json j;
    j["order"] = L.is_zero() ? 0 : L.order();
    Json terms = Json::array();
    for (int k = L.order(); k >= 0; --k)
        if (!(L.coeff(k).is_exact() && L.coeff(k).is_zero()))
            terms.push_back(series_term(k, L.coeff(k), var));
    j["terms"] = terms;
    return j;
}

inline Json operator_json(const PsdOp &P, const std::string &var = "x")
{
    Json j;
    j["order"] = P.top();
    Json terms = Json::array();
    for (auto it = P.terms().rbegin(); it != P.terms().rend(); ++it)
        terms.push_back(series_term(it->first, it->second, var));
    j["terms"] = terms;
    if (P.low())
        j["known_from_dpow"] = *P.low();
    return j;
}

// Installs the document's field declaration into the session. A second,
// different extension is rejected.
inline void read_field(const Json &doc, Session &s)
{
    if (!doc.contains("field") || doc["field"].is_null())
        return;
    const Json &f = doc["field"];
    std::string gen = f.value("generator", std::string("a"));
    FieldHandle h = field_extend(parse_minpoly(f.at("minpoly").get<std::string>(), gen), gen);
    if (s.field && !same_field(s.field, h))
        fail(ErrorCode::UnsupportedFieldSplit, "a session holds one extension");
    if (h) {
        s.field = h;
        s.generator = gen;
    }
}

inline RatOp operator_from_json(const Json &doc, Session &s)
{
    read_field(doc, s);
    if (doc.is_string())
        return parse_operator(doc.get<std::string>(), s);
    if (!doc.contains("terms")) {
        if (doc.contains("text"))
            return parse_operator(doc["text"].get<std::string>(), s);
        fail(ErrorCode::InvalidArgument, "operator document needs \"terms\" or \"text\"");
    }
    RatOp L;
    for (const auto &t : doc["terms"]) {
        int k = t.at("dpow").get<int>();
        if (k < 0)
            fail(ErrorCode::InvalidArgument, "negative dpow in a differential operator");
        RationalFunction num = parse_function(t.at("num").get<std::string>(), s);
        RationalFunction den = parse_function(t.value("den", std::string("1")), s);
        L = L + RatOp(num / den) * RatOp::d(k);
    }
    if (doc.contains("order") && !L.is_zero() && doc["order"].get<int>() != L.order())
        fail(ErrorCode::InvalidArgument, "declared order " + std::to_string(doc["order"].get<int>()) + " differs from " +
                                             std::to_string(L.order()));
    return L;
}

inline Json scalars_json(const std::vector<Scalar> &v)
{
    Json a = Json::array();
    for (const auto &s : v)
        a.push_back(scalar_text(s));
    return a;
}

inline Json error_json(const Error &e)
{
    return Json{{"kind", "error"}, {"code", std::string(code_name(e.code()))}, {"message", e.what()}};
}

} // namespace bispec
