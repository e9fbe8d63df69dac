#pragma once

#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "bispec/errors.hpp"
#include "bispec/exactnum/bipoly.hpp"
#include "bispec/exactnum/laurent.hpp"

namespace bispec {

// x^gamma * sum_j p[j](x) (ln x)^j
struct LogGroup {
    Scalar gamma;
    std::vector<LaurentPoly> p;

    int log_degree() const { return static_cast<int>(p.size()) - 1; }
    BiLaurent as_bivariate() const
    {
        BiLaurent r;
        for (std::size_t j = 0; j < p.size(); ++j)
            r += BiLaurent::from_x(p[j], static_cast<int>(j));
        return r;
    }
    friend bool operator==(const LogGroup &, const LogGroup &) = default;
};

// Exponents are reduced so that groups are pairwise incongruent mod Z; the
// stored gamma has rational part in [0, 1).
class LogFunction {
public:
    LogFunction() = default;
    LogFunction(const LaurentPoly &p) { add_group(Scalar(0), {p}); }

    // c * x^g * (ln x)^j
    static LogFunction term(const Scalar &c, const Scalar &g, int j = 0)
    {
        LogFunction f;
        std::vector<LaurentPoly> p(j + 1);
        p[j] = LaurentPoly(c);
        f.add_group(g, std::move(p));
        return f;
    }
    static LogFunction from_group(const Scalar &gamma, std::vector<LaurentPoly> p)
    {
        LogFunction f;
        f.add_group(gamma, std::move(p));
        return f;
    }
    static LogFunction from_bivariate(const Scalar &gamma, const BiLaurent &F)
    {
        std::vector<LaurentPoly> p(std::max(0, F.y_degree() + 1));
        for (std::size_t j = 0; j < p.size(); ++j)
            p[j] = F.y_coeff(static_cast<int>(j));
        return from_group(gamma, std::move(p));
    }

    const std::vector<LogGroup> &groups() const { return g_; }
    bool is_zero() const { return g_.empty(); }
    int log_degree() const
    {
        int d = -1;
        for (const auto &g : g_)
            d = std::max(d, g.log_degree());
        return d;
    }

    friend bool operator==(const LogFunction &a, const LogFunction &b) { return a.g_ == b.g_; }
    friend bool operator!=(const LogFunction &a, const LogFunction &b) { return !(a == b); }

    LogFunction operator-() const { return scaled(Scalar(-1)); }
    LogFunction &operator+=(const LogFunction &o)
    {
        for (const auto &g : o.g_)
            add_group(g.gamma, g.p);
        return *this;
    }
    LogFunction &operator-=(const LogFunction &o) { return *this += -o; }
    friend LogFunction operator+(LogFunction a, const LogFunction &b) { return a += b; }
    friend LogFunction operator-(LogFunction a, const LogFunction &b) { return a -= b; }
    friend LogFunction operator*(const LogFunction &a, const LogFunction &b)
    {
        LogFunction r;
        for (const auto &ga : a.g_)
            for (const auto &gb : b.g_) {
                std::vector<LaurentPoly> p(ga.p.size() + gb.p.size() - 1);
                for (std::size_t i = 0; i < ga.p.size(); ++i)
                    for (std::size_t j = 0; j < gb.p.size(); ++j)
                        p[i + j] += ga.p[i] * gb.p[j];
                r.add_group(ga.gamma + gb.gamma, std::move(p));
            }
        return r;
    }
    LogFunction scaled(const Scalar &s) const
    {
        LogFunction r;
        for (const auto &g : g_) {
            std::vector<LaurentPoly> p;
            for (const auto &q : g.p)
                p.push_back(q.scaled(s));
            r.add_group(g.gamma, std::move(p));
        }
        return r;
    }
    LogFunction times(const LaurentPoly &c) const
    {
        LogFunction r;
        for (const auto &g : g_) {
            std::vector<LaurentPoly> p;
            for (const auto &q : g.p)
                p.push_back(q * c);
            r.add_group(g.gamma, std::move(p));
        }
        return r;
    }

    // d/dx with d(ln x)/dx = 1/x.
    LogFunction derivative() const
    {
        LogFunction r;
        const LaurentPoly inv_x = LaurentPoly::monomial(Scalar(1), -1);
        for (const auto &g : g_) {
            std::vector<LaurentPoly> p(g.p.size());
            for (std::size_t j = 0; j < g.p.size(); ++j) {
                p[j] += g.p[j].derivative() + (g.p[j] * inv_x).scaled(g.gamma);
                if (j > 0)
                    p[j - 1] += (g.p[j] * inv_x).scaled(Scalar(static_cast<long>(j)));
            }
            r.add_group(g.gamma, std::move(p));
        }
        return r;
    }
    // Formal derivative in Y = ln x.
    LogFunction log_partial() const
    {
        LogFunction r;
        for (const auto &g : g_) {
            if (g.p.size() < 2)
                continue;
            std::vector<LaurentPoly> p(g.p.size() - 1);
            for (std::size_t j = 1; j < g.p.size(); ++j)
                p[j - 1] = g.p[j].scaled(Scalar(static_cast<long>(j)));
            r.add_group(g.gamma, std::move(p));
        }
        return r;
    }
    // ln x -> ln x + 1
    LogFunction log_shift() const
    {
        LogFunction r;
        for (const auto &g : g_) {
            std::vector<LaurentPoly> p(g.p.size());
            for (std::size_t j = 0; j < g.p.size(); ++j) {
                Integer binom = 1;
                for (std::size_t i = 0; i <= j; ++i) {
                    // (Y+1)^j = sum_i C(j,i) Y^i
                    p[i] += g.p[j].scaled(Scalar(Rational(binom)));
                    binom = binom * static_cast<long>(j - i) / static_cast<long>(i + 1);
                }
            }
            r.add_group(g.gamma, std::move(p));
        }
        return r;
    }
    // Component in the class gamma mod Z.
    LogFunction project(const Scalar &gamma) const
    {
        Scalar c = canonical(gamma).first;
        LogFunction r;
        for (const auto &g : g_)
            if (g.gamma == c)
                r.g_.push_back(g);
        return r;
    }

    // Coordinates (gamma, log power, exponent) -> coefficient, for linear algebra.
    std::map<std::tuple<Scalar, int, int>, Scalar> coordinates() const
    {
        std::map<std::tuple<Scalar, int, int>, Scalar> out;
        for (const auto &g : g_)
            for (std::size_t j = 0; j < g.p.size(); ++j)
                for (const auto &[e, c] : g.p[j].terms())
                    out.emplace(std::tuple{g.gamma, static_cast<int>(j), e}, c);
        return out;
    }

    std::string str() const
    {
        if (g_.empty())
            return "0";
        std::string out;
        for (const auto &g : g_)
            for (std::size_t j = 0; j < g.p.size(); ++j)
                for (auto it = g.p[j].terms().rbegin(); it != g.p[j].terms().rend(); ++it) {
                    if (!out.empty())
                        out += " + ";
                    Scalar ex = g.gamma + Scalar(it->first);
                    out += "(" + it->second.str() + ")";
                    if (!ex.is_zero())
                        out += "*x^(" + ex.str() + ")";
                    if (j > 0)
                        out += "*ln(x)" + (j > 1 ? "^" + std::to_string(j) : std::string());
                }
        return out;
    }

    // (canonical representative, integer shift k) with gamma = rep + k.
    static std::pair<Scalar, int> canonical(const Scalar &gamma)
    {
        Rational q = gamma.coeffs().front();
        long k = floor_long(q);
        return {gamma - Scalar(k), static_cast<int>(k)};
    }

private:
    void add_group(const Scalar &gamma, std::vector<LaurentPoly> p)
    {
        auto [rep, k] = canonical(gamma);
        if (k != 0)
            for (auto &q : p)
                q = q.shifted(k);
        auto it = g_.begin();
        while (it != g_.end() && it->gamma < rep)
            ++it;
        if (it == g_.end() || it->gamma != rep)
            it = g_.insert(it, LogGroup{rep, {}});
        if (it->p.size() < p.size())
            it->p.resize(p.size());
        for (std::size_t j = 0; j < p.size(); ++j)
            it->p[j] += p[j];
        while (!it->p.empty() && it->p.back().is_zero())
            it->p.pop_back();
        if (it->p.empty())
            g_.erase(it);
    }

    std::vector<LogGroup> g_;
};

inline LogFunction log_derive(const LogFunction &f) { return f.derivative(); }

inline std::ostream &operator<<(std::ostream &os, const LogFunction &f) { return os << f.str(); }

} // namespace bispec
