#pragma once

// Monomial Darboux transforms of random Bessel operators.

#include <algorithm>

#include "bispec/darboux/darboux.hpp"
#include "gen.hpp"

namespace testgen {

inline LogFunction xpow_of(const Scalar &e) { return LogFunction::term(Scalar(1), e); }

// Monomial Darboux transform of L_beta by {x^b_i} or of L_beta^2 by {x^b_i, x^(b_i + N)}.
struct Generated {
    BesselParams base;
    int power = 1;
    RatOp P, Q, L;
};

inline Generated generate(Gen &g)
{
    int N = g.uniform(2, 3);
    std::vector<Scalar> b;
    for (int i = 0; i < N; ++i)
        b.push_back(Scalar(make_rational(g.uniform(-6, 6), g.uniform(1, 3))));
    BesselParams base = normalize_beta(bessel_params(b)).beta;
    int i = g.uniform(0, N - 1), k = g.uniform(0, 1);
    KernelSpec spec{base, 1, {xpow_of(base.beta[i])}};
    if (k == 1) {
        // L_beta-invariant span, so that P Q is a square
        spec.power = 2;
        spec.basis.push_back(xpow_of(base.beta[i] + Scalar(N)));
    }
    auto basis = kernel_validate(spec);
    Generated out{base, spec.power, wronskian_operator(basis), {}, {}};
    out.Q = cofactor(base, spec.power, out.P);
    out.L = transformed_operator(out.P, out.Q, spec.power);
    return out;
}

// Kernel {x^b_i, x^b_j + c x^(b_i + N)} of L_beta^2 with b_j - b_i an integer.
// The span is L_beta-invariant and the transform is not homogeneous.
inline Generated generate_mixed(Gen &g, int N = 0)
{
    if (N == 0)
        N = g.uniform(2, 3);
    std::vector<Scalar> b;
    while (static_cast<int>(b.size()) < N) {
        Scalar v(g.uniform(-3, 4));
        if (std::find(b.begin(), b.end(), v) == b.end())
            b.push_back(v);
    }
    BesselParams base = normalize_beta(bessel_params(b)).beta;
    int i = g.uniform(0, N - 1), j = (i + g.uniform(1, N - 1)) % N;
    Scalar c(g.nonzero_rational(3));
    KernelSpec spec{base, 2, {xpow_of(base.beta[i]), xpow_of(base.beta[j]) + xpow_of(base.beta[i] + Scalar(N)).scaled(c)}};
    auto basis = kernel_validate(spec);
    Generated out{base, 2, wronskian_operator(basis), {}, {}};
    out.Q = cofactor(base, 2, out.P);
    out.L = transformed_operator(out.P, out.Q, 2);
    return out;
}

} // namespace testgen
