#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "otcert/interval.hpp"
#include "otcert/polynomial.hpp"
#include "otcert/system.hpp"

namespace otcert {

/// Piecewise-polynomial barrier over consecutive breakpoint intervals.
/// Ownership convention: piece i owns [b_i, b_{i+1}); the last piece also
/// owns its right endpoint.
struct PiecewiseBarrier {
    std::vector<double> breakpoints;
    std::vector<Polynomial> pieces;

    double span_lo() const { return breakpoints.front(); }
    double span_hi() const { return breakpoints.back(); }

    std::size_t piece_index(double x) const {
        if (x < span_lo() || x > span_hi()) {
            throw std::domain_error("barrier evaluation outside breakpoint span");
        }
        if (x >= breakpoints[breakpoints.size() - 2]) return pieces.size() - 1;
        std::size_t lo = 0, hi = breakpoints.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (breakpoints[mid] <= x)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }
};

inline PiecewiseBarrier make_piecewise_barrier(std::vector<double> breakpoints,
                                               std::vector<Polynomial> pieces) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("certificate.breakpoints: need at least two");
    }
    for (double b : breakpoints) {
        if (!std::isfinite(b)) throw std::invalid_argument("certificate.breakpoints: not finite");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i - 1] < breakpoints[i])) {
            throw std::invalid_argument("certificate.breakpoints: must be strictly increasing");
        }
    }
    if (pieces.size() + 1 != breakpoints.size()) {
        throw std::invalid_argument("certificate.pieces: expected " +
                                    std::to_string(breakpoints.size() - 1) + " pieces, got " +
                                    std::to_string(pieces.size()));
    }
    return PiecewiseBarrier{std::move(breakpoints), std::move(pieces)};
}

inline double barrier_eval(const PiecewiseBarrier& v, double x) {
    return v.pieces[v.piece_index(x)](x);
}

enum class BarrierKind { dissipative, attractive, weighted_attractive };

inline const char* to_string(BarrierKind kind) {
    switch (kind) {
        case BarrierKind::dissipative: return "dissipative";
        case BarrierKind::attractive: return "attractive";
        case BarrierKind::weighted_attractive: return "weighted_attractive";
    }
    return "?";
}

/// Barrier plus drift constants. Kind fixes the admissible (alpha, beta)
/// region and which probability bound the certificate supports.
struct BarrierCertificate {
    PiecewiseBarrier barrier;
    BarrierKind kind = BarrierKind::dissipative;
    double alpha = 0.0;
    double beta = 0.0;
};

inline BarrierCertificate make_barrier_certificate(PiecewiseBarrier barrier, BarrierKind kind,
                                                   double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::invalid_argument("certificate.alpha/beta: must be finite");
    }
    switch (kind) {
        case BarrierKind::dissipative:
            if (!(alpha > 0.0 && alpha < 1.0))
                throw std::invalid_argument("certificate.alpha: dissipative kind needs 0 < alpha < 1");
            if (!(beta >= 0.0))
                throw std::invalid_argument("certificate.beta: dissipative kind needs beta >= 0");
            break;
        case BarrierKind::attractive:
            if (!(alpha > 1.0))
                throw std::invalid_argument("certificate.alpha: attractive kind needs alpha > 1");
            if (!(beta <= 0.0))
                throw std::invalid_argument("certificate.beta: attractive kind needs beta <= 0");
            break;
        case BarrierKind::weighted_attractive:
            if (!(alpha > 1.0))
                throw std::invalid_argument(
                    "certificate.alpha: weighted_attractive kind needs alpha > 1");
            if (!(beta >= 0.0))
                throw std::invalid_argument(
                    "certificate.beta: weighted_attractive kind needs beta >= 0");
            break;
    }
    return BarrierCertificate{std::move(barrier), kind, alpha, beta};
}

inline void require_barrier_covers(const PiecewiseBarrier& barrier, const IntervalSet& domain) {
    if (domain.empty()) return;
    if (barrier.span_lo() > domain.min() || barrier.span_hi() < domain.max()) {
        throw std::invalid_argument(
            "certificate.breakpoints: do not cover the augmented domain [" +
            std::to_string(domain.min()) + ", " + std::to_string(domain.max()) + "]");
    }
}

namespace detail {

/// Applies fn(piece, clipped interval) for every piece overlapping domain.
/// A clip that degenerates to a single boundary point is forwarded only to
/// the piece that actually owns the point, so discontinuous barriers are
/// never evaluated on the wrong side of a breakpoint.
template <typename Fn>
void for_each_piece_over(const PiecewiseBarrier& v, const IntervalSet& domain, Fn&& fn) {
    for (const Interval& iv : domain.intervals()) {
        for (std::size_t i = 0; i < v.pieces.size(); ++i) {
            double lo = std::max(iv.lo, v.breakpoints[i]);
            double hi = std::min(iv.hi, v.breakpoints[i + 1]);
            if (lo > hi) continue;
            if (lo == hi && v.piece_index(lo) != i) continue;
            fn(v.pieces[i], Interval{lo, hi});
        }
    }
}

}  // namespace detail

/// Exact sup of |v| over the domain via per-piece range enumeration.
inline double barrier_sup_abs(const PiecewiseBarrier& v, const IntervalSet& domain) {
    double sup = 0.0;
    detail::for_each_piece_over(v, domain, [&](const Polynomial& piece, const Interval& clip) {
        Interval r = polynomial_range(piece, clip);
        sup = std::max({sup, std::abs(r.lo), std::abs(r.hi)});
    });
    return sup;
}

struct SideConditionViolation {
    std::string condition;
    double x = 0.0;
    double value = 0.0;
    double bound = 0.0;
};

struct SideConditionReport {
    bool passed = true;
    std::vector<SideConditionViolation> violations;
    std::vector<std::string> notes;
};

/// Boundary side conditions per certificate kind, checked with zero slack
/// via exact per-piece ranges:
///   dissipative          v >= 0 on the augmented domain, v >= 1 on target
///   attractive/weighted  v <= 1 on target, v <= -beta/(alpha-1) on the sink
///                        set (vacuous when the sink set is empty)
inline SideConditionReport check_side_conditions(const BarrierCertificate& cert,
                                                 const SystemSpec& spec) {
    SideConditionReport report;
    auto check_min = [&](const IntervalSet& domain, double bound, const char* name) {
        detail::for_each_piece_over(cert.barrier, domain,
                                    [&](const Polynomial& piece, const Interval& clip) {
                                        RangeWitness w = polynomial_range_witness(piece, clip);
                                        if (w.range.lo < bound) {
                                            report.violations.push_back(
                                                {name, w.argmin, w.range.lo, bound});
                                        }
                                    });
    };
    auto check_max = [&](const IntervalSet& domain, double bound, const char* name) {
        detail::for_each_piece_over(cert.barrier, domain,
                                    [&](const Polynomial& piece, const Interval& clip) {
                                        RangeWitness w = polynomial_range_witness(piece, clip);
                                        if (w.range.hi > bound) {
                                            report.violations.push_back(
                                                {name, w.argmax, w.range.hi, bound});
                                        }
                                    });
    };

    if (cert.kind == BarrierKind::dissipative) {
        check_min(spec.augmented, 0.0, "nonnegative_on_domain");
        check_min(spec.target, 1.0, "at_least_one_on_target");
    } else {
        check_max(spec.target, 1.0, "at_most_one_on_target");
        IntervalSet sink = interval_set_difference(spec.augmented, spec.safe);
        if (sink.empty() || sink.measure() == 0.0) {
            report.notes.push_back("sink set empty: sink condition vacuously true");
        } else {
            check_max(sink, -cert.beta / (cert.alpha - 1.0), "sink_bound");
        }
    }
    report.passed = report.violations.empty();
    return report;
}

}  // namespace otcert
