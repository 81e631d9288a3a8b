#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "otcert/interval.hpp"

namespace otcert {

/// Dense univariate polynomial, coefficients in ascending degree order.
/// Trailing zero coefficients are trimmed on construction; the zero
/// polynomial is stored as the single coefficient {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}

    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
        for (double c : coeffs_) {
            if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient not finite");
        }
        trim();
    }

    static Polynomial constant(double c) { return Polynomial(std::vector<double>{c}); }

    const std::vector<double>& coefficients() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    /// Horner evaluation.
    double operator()(double x) const {
        double acc = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() == 1) return Polynomial::constant(0.0);
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(double s, const Polynomial& p) {
        std::vector<double> c = p.coeffs_;
        for (double& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    /// Symbolic composition p(q(x)) via Horner on polynomials.
    Polynomial compose(const Polynomial& q) const {
        Polynomial acc = Polynomial::constant(coeffs_.back());
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
            acc = acc * q + Polynomial::constant(coeffs_[i]);
        }
        return acc;
    }

private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

namespace detail {

inline double max_abs_coeff(const std::vector<double>& c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

/// Remainder of a/b in place; coefficients ascending. Returns the remainder.
/// Coefficients below drop_tol (relative to the operands) are treated as zero.
inline std::vector<double> poly_remainder(std::vector<double> a, const std::vector<double>& b,
                                          double drop_tol) {
    if (b.size() == 1) return {0.0};  // division by a nonzero constant is exact
    while (a.size() >= b.size()) {
        double lead = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= lead * b[i];
        a.pop_back();
        while (a.size() > 1 && std::abs(a.back()) <= drop_tol) a.pop_back();
        if (a.size() == 1 && std::abs(a[0]) <= drop_tol) a[0] = 0.0;
        if (a.size() < b.size()) break;
    }
    return a;
}

/// Scale coefficients so the largest magnitude is 1 (sign pattern preserved).
inline void normalize_scale(std::vector<double>& c) {
    double m = max_abs_coeff(c);
    if (m > 0.0) {
        for (double& v : c) v /= m;
    }
}

}  // namespace detail

/// Square-free part p / gcd(p, p'), computed with a numerically tolerant
/// Euclid loop. Multiple roots collapse to simple ones so that Sturm
/// sequences see sign changes at every distinct real root.
inline Polynomial square_free_part(const Polynomial& p) {
    if (p.degree() <= 1) return p;
    std::vector<double> a = p.coefficients();
    std::vector<double> b = p.derivative().coefficients();
    detail::normalize_scale(a);
    detail::normalize_scale(b);
    const double tol = 1e-10;
    while (!(b.size() == 1 && b[0] == 0.0)) {
        std::vector<double> r = detail::poly_remainder(a, b, tol * detail::max_abs_coeff(b));
        detail::normalize_scale(r);
        a = std::move(b);
        b = std::move(r);
    }
    // a now holds (a scaled) gcd(p, p'); divide it out.
    if (a.size() == 1) return p;  // gcd constant: p already square-free
    std::vector<double> num = p.coefficients();
    std::vector<double> quot(num.size() - a.size() + 1, 0.0);
    for (std::size_t i = quot.size(); i-- > 0;) {
        double lead = num[i + a.size() - 1] / a.back();
        quot[i] = lead;
        for (std::size_t j = 0; j < a.size(); ++j) num[i + j] -= lead * a[j];
    }
    Polynomial q{std::move(quot)};
    return q.is_zero() ? p : q;
}

namespace detail {

/// Sturm chain of a square-free polynomial, each entry scale-normalized.
inline std::vector<std::vector<double>> sturm_chain(const Polynomial& p) {
    std::vector<std::vector<double>> chain;
    chain.push_back(p.coefficients());
    chain.push_back(p.derivative().coefficients());
    normalize_scale(chain[0]);
    normalize_scale(chain[1]);
    const double tol = 1e-12;
    while (!(chain.back().size() == 1 && chain.back()[0] == 0.0)) {
        const auto& b = chain.back();
        const auto& a = chain[chain.size() - 2];
        std::vector<double> r = poly_remainder(a, b, tol * max_abs_coeff(b));
        for (double& v : r) v = -v;
        normalize_scale(r);
        chain.push_back(std::move(r));
    }
    chain.pop_back();  // drop the zero tail
    return chain;
}

inline double eval_coeffs(const std::vector<double>& c, double x) {
    double acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
    return acc;
}

/// Number of sign changes of the chain at x (zeros skipped).
inline int sign_changes(const std::vector<std::vector<double>>& chain, double x) {
    int changes = 0;
    int prev = 0;
    for (const auto& c : chain) {
        double v = eval_coeffs(c, x);
        int s = (v > 0.0) - (v < 0.0);
        if (s != 0) {
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
    }
    return changes;
}

/// Bisection for the single root of p in (lo, hi) where signs differ.
inline double bisect_root(const Polynomial& p, double lo, double hi) {
    double flo = p(lo);
    if (flo == 0.0) return lo;
    double fhi = p(hi);
    if (fhi == 0.0) return hi;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Distinct real roots of p inside the closed interval iv, ascending.
/// Sturm isolation on the square-free part, then sign-change bisection to
/// relative tolerance 1e-12. Degree-1 polynomials solve directly. The zero
/// polynomial and root-free constants return an empty vector.
inline std::vector<double> real_roots(const Polynomial& p, const Interval& iv) {
    if (!is_valid_interval(iv)) throw std::invalid_argument("real_roots: malformed interval");
    if (p.is_zero() || p.degree() == 0) return {};
    if (p.degree() == 1) {
        double root = -p.coefficients()[0] / p.coefficients()[1];
        if (iv.contains(root)) return {root};
        return {};
    }
    Polynomial sf = square_free_part(p);
    if (sf.degree() == 0) return {};
    if (sf.degree() == 1) {
        double root = -sf.coefficients()[0] / sf.coefficients()[1];
        if (iv.contains(root)) return {root};
        return {};
    }
    auto chain = detail::sturm_chain(sf);

    std::vector<double> roots;
    if (sf(iv.lo) == 0.0) roots.push_back(iv.lo);

    // Count roots in (a, b] as V(a) - V(b); recursively split until isolated.
    struct Segment {
        double lo, hi;
        int vlo, vhi;
    };
    std::vector<Segment> stack;
    int vlo = detail::sign_changes(chain, iv.lo);
    int vhi = detail::sign_changes(chain, iv.hi);
    if (vlo - vhi > 0) stack.push_back({iv.lo, iv.hi, vlo, vhi});

    while (!stack.empty()) {
        Segment seg = stack.back();
        stack.pop_back();
        int count = seg.vlo - seg.vhi;
        if (count <= 0) continue;
        double width = seg.hi - seg.lo;
        double scale = std::max({1.0, std::abs(seg.lo), std::abs(seg.hi)});
        if (count == 1 || width <= 1e-13 * scale) {
            if (sf(seg.hi) == 0.0) {
                roots.push_back(seg.hi);
            } else if (sf(seg.lo) == 0.0 && width > 1e-13 * scale) {
                // The left endpoint sits exactly on the neighboring segment's
                // root (a subdivision point can land on one); the isolated
                // root lies strictly inside, so split again until bisection
                // can start from sign-definite endpoints.
                double mid = 0.5 * (seg.lo + seg.hi);
                int vmid = detail::sign_changes(chain, mid);
                stack.push_back({seg.lo, mid, seg.vlo, vmid});
                stack.push_back({mid, seg.hi, vmid, seg.vhi});
            } else {
                roots.push_back(detail::bisect_root(sf, seg.lo, seg.hi));
            }
            continue;
        }
        double mid = 0.5 * (seg.lo + seg.hi);
        int vmid = detail::sign_changes(chain, mid);
        stack.push_back({seg.lo, mid, seg.vlo, vmid});
        stack.push_back({mid, seg.hi, vmid, seg.vhi});
    }

    std::sort(roots.begin(), roots.end());
    // Collapse near-duplicates from boundary handling.
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() ||
            r - out.back() > 1e-12 * std::max({1.0, std::abs(r), std::abs(out.back())})) {
            out.push_back(r);
        }
    }
    return out;
}

/// Exact range of p over iv together with points attaining the extrema.
struct RangeWitness {
    Interval range;
    double argmin = 0.0;
    double argmax = 0.0;
};

/// Candidates are the interval endpoints plus the real critical points of p
/// inside iv; for polynomials this enumerates the extrema exactly.
inline RangeWitness polynomial_range_witness(const Polynomial& p, const Interval& iv) {
    if (!is_valid_interval(iv)) throw std::invalid_argument("polynomial_range: malformed interval");
    std::vector<double> candidates{iv.lo, iv.hi};
    if (p.degree() >= 2) {
        for (double r : real_roots(p.derivative(), iv)) candidates.push_back(r);
    }
    RangeWitness w;
    w.range = {p(candidates[0]), p(candidates[0])};
    w.argmin = w.argmax = candidates[0];
    for (double x : candidates) {
        double v = p(x);
        if (v < w.range.lo) {
            w.range.lo = v;
            w.argmin = x;
        }
        if (v > w.range.hi) {
            w.range.hi = v;
            w.argmax = x;
        }
    }
    return w;
}

inline Interval polynomial_range(const Polynomial& p, const Interval& iv) {
    return polynomial_range_witness(p, iv).range;
}

}  // namespace otcert
