#pragma once

#include <vector>

#include "bispec/errors.hpp"
#include "bispec/exactnum/factor.hpp"
#include "bispec/exactnum/scalar.hpp"

namespace bispec {

struct SFactor {
    SPoly factor; // monic, irreducible over the coefficient field
    int multiplicity;
};

namespace detail {

inline bool rational_coeffs(const SPoly &p)
{
    for (const auto &c : p.coeffs())
        if (!c.is_rational())
            return false;
    return true;
}

inline QPoly to_qpoly(const SPoly &p)
{
    std::vector<Rational> c;
    for (const auto &x : p.coeffs())
        c.push_back(x.rational());
    return QPoly(std::move(c));
}

inline bool is_rational_square(const Rational &q, Rational &root)
{
    if (sgn(q) < 0)
        return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return false;
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    root = Rational(n, d);
    root.canonicalize();
    return true;
}

// Galois conjugate in a quadratic field t^2 + p1 t + p0: a -> -p1 - a.
inline Scalar quadratic_conjugate(const Scalar &s)
{
    if (s.is_rational())
        return s;
    const QPoly &m = s.field()->minimal_polynomial();
    auto c = s.coeffs();
    Scalar a = Scalar::generator(s.field());
    return Scalar(c[0]) + Scalar(c[1]) * (Scalar(-m[1]) - a);
}

inline int multiplicity_in(SPoly &p, const SPoly &u)
{
    int m = 0;
    while (p.degree() >= u.degree()) {
        auto [q, r] = divmod(p, u);
        if (!r.is_zero())
            break;
        p = q;
        ++m;
    }
    return m;
}

} // namespace detail

// Factorization of p into monic irreducibles over its coefficient field.
// Supported: rational coefficients (over Q, possibly splitting further in
// an active quadratic field) and coefficients in a quadratic field.
inline std::vector<SFactor> factor_over_field(const SPoly &p, const FieldHandle &field = nullptr)
{
    std::vector<SFactor> out;
    if (p.degree() < 1)
        return out;
    FieldHandle f = field;
    if (!f)
        for (const auto &c : p.coeffs())
            if (!c.is_rational())
                f = c.field();

    if (!f) {
        for (const auto &q : factor_rational(detail::to_qpoly(p)))
            out.push_back({to_spoly(q.factor), q.multiplicity});
        return out;
    }
    if (f->degree() != 2) {
        if (detail::rational_coeffs(p)) {
            for (const auto &q : factor_rational(detail::to_qpoly(p))) {
                if (q.factor.degree() > 1)
                    fail(ErrorCode::UnsupportedFieldSplit, "factor " + q.factor.to_string("D") + " over a field of degree > 2");
                out.push_back({to_spoly(q.factor), q.multiplicity});
            }
            return out;
        }
        fail(ErrorCode::UnsupportedFieldSplit, "factorization over a field of degree > 2");
    }

    SPoly conj;
    {
        std::vector<Scalar> c;
        for (const auto &x : p.coeffs())
            c.push_back(detail::quadratic_conjugate(x));
        conj = SPoly(std::move(c));
    }
    SPoly norm = detail::rational_coeffs(p) ? p : p * conj;
    const QPoly &m = f->minimal_polynomial();
    Rational disc_f = m[1] * m[1] - 4 * m[0];
    Scalar sqrt_f = Scalar(2) * Scalar::generator(f) + Scalar(m[1]); // squares to disc_f

    SPoly rest = p.monic();
    for (const auto &h : factor_rational(detail::to_qpoly(norm))) {
        std::vector<SPoly> cands;
        const QPoly &hq = h.factor;
        Rational s;
        if (hq.degree() == 2 && detail::is_rational_square((hq[1] * hq[1] - 4 * hq[0]) / disc_f, s)) {
            Scalar r = Scalar(s) * sqrt_f;
            Scalar b(hq[1]);
            cands.push_back(SPoly::linear((-b + r) / Scalar(2)));
            cands.push_back(SPoly::linear((-b - r) / Scalar(2)));
        } else {
            cands.push_back(to_spoly(hq));
        }
        for (const auto &u : cands) {
            int mult = detail::multiplicity_in(rest, u);
            if (mult > 0)
                out.push_back({u, mult});
        }
    }
    if (rest.degree() != 0)
        fail(ErrorCode::UnsupportedFieldSplit, "could not split " + p.to_string("D") + " over the active field");
    return out;
}

} // namespace bispec
