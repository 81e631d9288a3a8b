#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "otcert/interval.hpp"
#include "otcert/polynomial.hpp"

namespace otcert {

namespace detail {

/// Bernstein coefficients of u -> p(base + width*u) on u in [0,1]:
/// b_j = sum_{i<=j} [C(j,i)/C(n,i)] a_i over the rebased power coefficients.
inline std::vector<double> bernstein_from_affine(const Polynomial& p, double base, double width) {
    std::vector<double> a =
        p.compose(Polynomial(std::vector<double>{base, width})).coefficients();
    std::size_t n = a.size() - 1;
    std::vector<double> b(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        double ratio = 1.0;  // C(j,i)/C(n,i), updated incrementally over i
        double acc = a[0];
        for (std::size_t i = 1; i <= j; ++i) {
            ratio *= static_cast<double>(j - i + 1) / static_cast<double>(n - i + 1);
            acc += ratio * a[i];
        }
        b[j] = acc;
    }
    return b;
}

}  // namespace detail

/// Bernstein coefficients of p over iv (parameter runs lo -> hi). The
/// polynomial equals sum_j b_j B_{j,n}(u) with u = (x-lo)/(hi-lo).
inline std::vector<double> bernstein_coefficients(const Polynomial& p, const Interval& iv) {
    return detail::bernstein_from_affine(p, iv.lo, iv.hi - iv.lo);
}

/// Bernstein coefficients for the reversed parameterization (hi -> lo).
/// Mathematically the reverse of bernstein_coefficients, but the affine
/// rebase cancels exactly at the opposite endpoint, which matters when p has
/// a root of even multiplicity there.
inline std::vector<double> bernstein_coefficients_reversed(const Polynomial& p,
                                                           const Interval& iv) {
    return detail::bernstein_from_affine(p, iv.hi, iv.lo - iv.hi);
}

/// de Casteljau subdivision at the midpoint: Bernstein coefficients of the
/// two halves of the curve, each valid on the corresponding half interval.
inline std::pair<std::vector<double>, std::vector<double>> decasteljau_split(
    std::vector<double> b) {
    std::size_t n = b.size() - 1;
    std::vector<double> left(n + 1), right(n + 1);
    left[0] = b[0];
    right[n] = b[n];
    for (std::size_t r = 1; r <= n; ++r) {
        for (std::size_t i = 0; i + r <= n; ++i) b[i] = 0.5 * (b[i] + b[i + 1]);
        left[r] = b[0];
        right[n - r] = b[n - r];
    }
    return {std::move(left), std::move(right)};
}

/// Abscissa of the j-th Bernstein control point of degree n over iv.
inline double bernstein_abscissa(const Interval& iv, std::size_t j, std::size_t n) {
    if (n == 0) return iv.midpoint();
    return iv.lo + (iv.hi - iv.lo) * (static_cast<double>(j) / static_cast<double>(n));
}

}  // namespace otcert
