#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "bispec/exactnum/scalar.hpp"

namespace bispec {

using Vector = std::vector<Scalar>;
using Matrix = std::vector<Vector>;

namespace detail {

// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix &a, std::size_t ncols)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
        std::size_t p = row;
        while (p < a.size() && a[p][col].is_zero())
            ++p;
        if (p == a.size())
            continue;
        std::swap(a[p], a[row]);
        Scalar inv = a[row][col].inverse();
        for (std::size_t j = col; j < ncols; ++j)
            if (!a[row][j].is_zero())
                a[row][j] *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][col].is_zero())
                continue;
            Scalar f = a[i][col];
            for (std::size_t j = col; j < ncols; ++j)
                if (!a[row][j].is_zero())
                    a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

// Basis of {v : A v = 0}; each vector has a 1 in its free column.
inline std::vector<Vector> nullspace(Matrix a, std::size_t ncols)
{
    for (auto &r : a)
        r.resize(ncols, Scalar(0));
    auto pivots = detail::rref(a, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f])
            continue;
        Vector v(ncols, Scalar(0));
        v[f] = Scalar(1);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -a[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t matrix_rank(Matrix a, std::size_t ncols)
{
    for (auto &r : a)
        r.resize(ncols, Scalar(0));
    return detail::rref(a, ncols).size();
}

// Some solution of A v = b, or nullopt.
inline std::optional<Vector> solve_linear(Matrix a, const Vector &b, std::size_t ncols)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i].resize(ncols, Scalar(0));
        a[i].push_back(b[i]);
    }
    auto pivots = detail::rref(a, ncols + 1);
    if (!pivots.empty() && pivots.back() == ncols)
        return std::nullopt;
    Vector v(ncols, Scalar(0));
    for (std::size_t i = 0; i < pivots.size(); ++i)
        v[pivots[i]] = a[i][ncols];
    return v;
}

// Determinant over a commutative ring by Laplace expansion along rows,
// memoized on the set of remaining columns. Fine for n <= ~12.
template <typename R>
R determinant(const std::vector<std::vector<R>> &m)
{
    const std::size_t n = m.size();
    if (n == 0)
        return R(1);
    std::map<unsigned long, R> memo;
    auto rec = [&](auto &self, std::size_t row, unsigned long cols) -> R {
        if (row == n)
            return R(1);
        auto it = memo.find(cols);
        if (it != memo.end())
            return it->second;
        R acc(0);
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(cols & (1UL << c)))
                continue;
            if (!m[row][c].is_zero()) {
                R minor = self(self, row + 1, cols & ~(1UL << c));
                R term = m[row][c] * minor;
                if (sign > 0)
                    acc += term;
                else
                    acc -= term;
            }
            sign = -sign;
        }
        memo.emplace(cols, acc);
        return acc;
    };
    return rec(rec, 0, (n >= 64 ? ~0UL : ((1UL << n) - 1)));
}

} // namespace bispec
