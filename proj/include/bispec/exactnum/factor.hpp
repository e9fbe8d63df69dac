#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bispec/exactnum/rational.hpp"
#include "bispec/exactnum/upoly.hpp"

namespace bispec {

struct QFactor {
    QPoly factor; // monic, irreducible over Q
    int multiplicity = 1;
};

namespace detail {

using ZPoly = std::vector<Integer>;

inline ZPoly primitive_integer(const QPoly &p)
{
    Integer l = 1;
    for (const auto &c : p.coeffs())
        l = lcm(l, Integer(c.get_den()));
    ZPoly z;
    Integer g = 0;
    for (const auto &c : p.coeffs()) {
        Integer v = c.get_num() * (l / c.get_den());
        g = gcd(g, v);
        z.push_back(v);
    }
    if (g != 0)
        for (auto &v : z)
            v /= g;
    if (!z.empty() && z.back() < 0)
        for (auto &v : z)
            v = -v;
    return z;
}

inline QPoly to_qpoly(const ZPoly &z)
{
    std::vector<Rational> c;
    for (const auto &v : z)
        c.emplace_back(v);
    return QPoly(std::move(c));
}

// Positive divisors of |n| by trial division; n != 0.
inline std::vector<Integer> divisors(Integer n)
{
    if (n < 0)
        n = -n;
    std::vector<std::pair<Integer, int>> primes;
    Integer m = n;
    for (Integer p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e)
            primes.emplace_back(p, e);
    }
    if (m > 1)
        primes.emplace_back(m, 1);
    std::vector<Integer> out{1};
    for (const auto &[p, e] : primes) {
        const std::size_t base = out.size();
        Integer pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Monic linear factors of a squarefree polynomial, dividing them out of p.
inline std::vector<QPoly> extract_rational_roots(QPoly &p)
{
    std::vector<QPoly> found;
    if (p.degree() < 1)
        return found;
    while (p.degree() >= 1 && is_zero(p[0])) {
        found.push_back(QPoly::linear(Rational(0)));
        p = p / QPoly::variable();
    }
    if (p.degree() < 1)
        return found;
    ZPoly z = primitive_integer(p);
    auto num = divisors(z.front());
    auto den = divisors(z.back());
    std::vector<Rational> cands;
    for (const auto &a : num)
        for (const auto &b : den) {
            Rational q(a, b);
            q.canonicalize();
            cands.push_back(q);
            cands.push_back(-q);
        }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const auto &r : cands) {
        if (p.degree() < 1)
            break;
        if (is_zero(p.eval(r))) {
            found.push_back(QPoly::linear(r));
            p = p / QPoly::linear(r);
        }
    }
    return found;
}

// Lagrange interpolation through (xs[i], ys[i]).
inline QPoly interpolate(const std::vector<Rational> &xs, const std::vector<Rational> &ys)
{
    QPoly out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        QPoly basis(Rational(1));
        Rational denom = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j)
                continue;
            basis *= QPoly::linear(xs[j]);
            denom *= xs[i] - xs[j];
        }
        out += basis.scaled(ys[i] / denom);
    }
    return out;
}

// Kronecker's method: a factor of degree d, or the zero polynomial if none.
inline QPoly kronecker_factor(const QPoly &p, int d)
{
    const ZPoly z = primitive_integer(p);
    const QPoly zp = to_qpoly(z);
    struct Point {
        Rational x;
        std::vector<Integer> divs;
        Integer value;
    };
    std::vector<Point> pts;
    for (long k = 0; pts.size() < static_cast<std::size_t>(3 * (d + 1)) && k < 64; ++k) {
        for (long s : {k, -k}) {
            if (k == 0 && s != 0)
                continue;
            Rational x(s);
            Rational v = zp.eval(x);
            if (is_zero(v))
                continue;
            pts.push_back({x, divisors(v.get_num()), v.get_num()});
            if (k == 0)
                break;
        }
    }
    std::sort(pts.begin(), pts.end(),
              [](const Point &a, const Point &b) { return a.divs.size() < b.divs.size(); });
    pts.resize(static_cast<std::size_t>(d + 1));

    std::vector<std::size_t> idx(pts.size(), 0);
    std::vector<int> sign(pts.size(), 1);
    std::vector<Rational> xs, ys(pts.size());
    for (const auto &pt : pts)
        xs.push_back(pt.x);
    const Integer lead = z.back();
    // Odometer over divisor choices and signs; the first sign is fixed to +.
    while (true) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            ys[i] = Rational(pts[i].divs[idx[i]] * sign[i]);
        QPoly g = interpolate(xs, ys);
        if (g.degree() == d) {
            bool integral = true;
            for (const auto &c : g.coeffs())
                integral = integral && is_integer(c);
            if (integral && lead % Integer(g.lead().get_num()) == 0 && (zp % g).is_zero())
                return g.monic();
        }
        std::size_t i = 0;
        for (; i < pts.size(); ++i) {
            if (i > 0 && sign[i] == 1) {
                sign[i] = -1;
                break;
            }
            sign[i] = 1;
            if (++idx[i] < pts[i].divs.size())
                break;
            idx[i] = 0;
        }
        if (i == pts.size())
            break;
    }
    return {};
}

inline void factor_squarefree(QPoly p, std::vector<QPoly> &out)
{
    p = p.monic();
    if (p.degree() < 1)
        return;
    for (auto &f : extract_rational_roots(p))
        out.push_back(std::move(f));
    if (p.degree() < 1)
        return;
    for (int d = 2; 2 * d <= p.degree(); ++d) {
        QPoly g = kronecker_factor(p, d);
        if (!g.is_zero()) {
            factor_squarefree(g, out);
            factor_squarefree(p / g, out);
            return;
        }
    }
    out.push_back(p.monic());
}

inline bool poly_less(const QPoly &a, const QPoly &b)
{
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i)
        if (a[i] != b[i])
            return a[i] < b[i];
    return false;
}

} // namespace detail

// Squarefree decomposition (Yun); returns (part, multiplicity) with monic parts.
inline std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly &p)
{
    std::vector<std::pair<QPoly, int>> out;
    if (p.degree() < 1)
        return out;
    QPoly f = p.monic();
    QPoly fp = f.derivative();
    QPoly a = poly_gcd(f, fp);
    QPoly b = f / a;
    QPoly c = fp / a;
    QPoly d = c - b.derivative();
    int i = 1;
    while (b.degree() >= 1) {
        QPoly g = poly_gcd(b, d);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
        if (g.degree() >= 1)
            out.emplace_back(g, i);
        ++i;
    }
    return out;
}

// Complete factorization over Q into monic irreducibles, in a deterministic
// order (degree, then coefficients from the top).
inline std::vector<QFactor> factor_rational(const QPoly &p)
{
    std::vector<QFactor> out;
    for (const auto &[part, mult] : squarefree_decomposition(p)) {
        std::vector<QPoly> fs;
        detail::factor_squarefree(part, fs);
        for (auto &f : fs)
            out.push_back({std::move(f), mult});
    }
    std::sort(out.begin(), out.end(),
              [](const QFactor &a, const QFactor &b) { return detail::poly_less(a.factor, b.factor); });
    return out;
}

inline bool is_irreducible(const QPoly &p)
{
    if (p.degree() < 1)
        return false;
    auto fs = factor_rational(p);
    return fs.size() == 1 && fs.front().multiplicity == 1;
}

} // namespace bispec
