#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "otcert/barrier.hpp"
#include "otcert/bernstein.hpp"
#include "otcert/interval.hpp"
#include "otcert/polynomial.hpp"
#include "otcert/system.hpp"

namespace otcert {

/// Partition cell: an interval of the safe set on whose interior every mode
/// has a constant answer to "does the successor land in the target?" and
/// "which barrier piece owns the successor?".
struct CellModeInfo {
    bool in_target = false;
    std::size_t piece_index = 0;
};

struct Cell {
    Interval interval;
    std::vector<CellModeInfo> modes;
};

enum class CertStatus { certified, refuted, inconclusive };

inline const char* to_string(CertStatus s) {
    switch (s) {
        case CertStatus::certified: return "Certified";
        case CertStatus::refuted: return "Refuted";
        case CertStatus::inconclusive: return "Inconclusive";
    }
    return "?";
}

struct CertWitness {
    double x = 0.0;
    double residual = 0.0;
};

struct CertVerdict {
    CertStatus status = CertStatus::inconclusive;
    std::optional<CertWitness> witness;          // set when status == refuted
    std::vector<Interval> inconclusive_regions;  // undecided subintervals
    std::vector<Cell> inconclusive_cells;        // partition cells left undecided
    int max_depth_used = 0;
    double slack = 0.0;
    std::vector<std::string> notes;
};

namespace detail {

inline void add_breakpoint(std::vector<double>& out, const IntervalSet& safe, double x) {
    if (safe.contains(x)) out.push_back(x);
}

inline bool points_close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<double> dedup_sorted(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || !points_close(x, out.back())) out.push_back(x);
    }
    return out;
}

/// Inserts x into the sorted vector unless it duplicates a neighbor within
/// tolerance; existing (canonical) entries win over the newcomer, so exact
/// breakpoints are not displaced by one-ulp root-isolation results.
inline void merge_point(std::vector<double>& sorted, double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    if (it != sorted.end() && points_close(*it, x)) return;
    if (it != sorted.begin() && points_close(*(it - 1), x)) return;
    sorted.insert(it, x);
}

}  // namespace detail

/// Splits the safe set into cells bounded by: the safe interval endpoints,
/// the barrier breakpoints inside the safe set, and the mode pre-images of
/// every target endpoint and barrier breakpoint. On each cell interior the
/// per-mode target-hit indicator and the successor's owning barrier piece
/// are constant, which makes the drift inequality a single polynomial
/// nonnegativity question per cell.
inline std::vector<Cell> build_partition(const SystemSpec& spec, const BarrierCertificate& cert) {
    std::vector<double> levels;  // constants whose mode pre-images split cells
    for (const Interval& t : spec.target.intervals()) {
        levels.push_back(t.lo);
        levels.push_back(t.hi);
    }
    for (double b : cert.barrier.breakpoints) levels.push_back(b);
    levels = detail::dedup_sorted(std::move(levels));

    std::vector<double> points;
    for (const Interval& s : spec.safe.intervals()) {
        points.push_back(s.lo);
        points.push_back(s.hi);
    }
    for (double b : cert.barrier.breakpoints) detail::add_breakpoint(points, spec.safe, b);
    points = detail::dedup_sorted(std::move(points));
    for (std::size_t j = 0; j < spec.modes.size(); ++j) {
        const Polynomial& f = spec.modes[j].dynamics;
        for (double c : levels) {
            for (const Interval& s : spec.safe.intervals()) {
                try {
                    for (double r : real_roots(f - Polynomial::constant(c), s)) {
                        detail::merge_point(points, r);
                    }
                } catch (const std::exception& e) {
                    throw std::runtime_error("build_partition: root isolation failed for mode " +
                                             std::to_string(j) + " at level " + std::to_string(c) +
                                             ": " + e.what());
                }
            }
        }
    }

    std::vector<Cell> cells;
    for (const Interval& s : spec.safe.intervals()) {
        std::vector<double> local;
        for (double p : points) {
            if (s.contains(p)) local.push_back(p);
        }
        for (std::size_t i = 0; i + 1 < local.size(); ++i) {
            Cell cell;
            cell.interval = {local[i], local[i + 1]};
            double mid = cell.interval.midpoint();
            for (std::size_t j = 0; j < spec.modes.size(); ++j) {
                double y = mode_successor(spec, mid, j);
                CellModeInfo info;
                info.in_target = spec.target.contains(y);
                info.piece_index = cert.barrier.piece_index(y);
                cell.modes.push_back(info);
            }
            cells.push_back(cell);
        }
        if (local.size() == 1 && s.width() == 0.0) {
            // Degenerate safe component: keep it as a point cell.
            Cell cell;
            cell.interval = {local[0], local[0]};
            for (std::size_t j = 0; j < spec.modes.size(); ++j) {
                double y = mode_successor(spec, local[0], j);
                cell.modes.push_back({spec.target.contains(y), cert.barrier.piece_index(y)});
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

/// Sorted breakpoints of a partition (cell interval endpoints, deduplicated).
inline std::vector<double> partition_breakpoints(const std::vector<Cell>& cells) {
    std::vector<double> points;
    for (const Cell& c : cells) {
        points.push_back(c.interval.lo);
        points.push_back(c.interval.hi);
    }
    return detail::dedup_sorted(std::move(points));
}

/// Polynomial whose nonnegativity on the cell is equivalent to the drift
/// inequality of the certificate kind there. Successor barrier values are
/// composed symbolically through the cell's constant piece assignment, with
/// per-mode weights from the cell's constant target flags:
///   dissipative         r = alpha*v + beta - sum_j p_j w_j (v o f_j),
///                       w_j = 1 if the mode hits the target else alpha
///   attractive          r = sum_j p_j w_j (v o f_j) - alpha*v - beta,
///                       w_j = alpha if in target else 1
///   weighted_attractive same with w_j = alpha^2 if in target else 1
inline Polynomial drift_residual(const SystemSpec& spec, const BarrierCertificate& cert,
                                 const Cell& cell) {
    const PiecewiseBarrier& v = cert.barrier;
    const Polynomial& own = v.pieces[v.piece_index(cell.interval.midpoint())];
    Polynomial successors;  // sum_j p_j w_j v(f_j(x))
    for (std::size_t j = 0; j < spec.modes.size(); ++j) {
        const CellModeInfo& info = cell.modes[j];
        double w = 1.0;
        if (cert.kind == BarrierKind::dissipative) {
            w = info.in_target ? 1.0 : cert.alpha;
        } else if (cert.kind == BarrierKind::attractive) {
            w = info.in_target ? cert.alpha : 1.0;
        } else {
            w = info.in_target ? cert.alpha * cert.alpha : 1.0;
        }
        Polynomial composed = v.pieces[info.piece_index].compose(spec.modes[j].dynamics);
        successors = successors + (spec.modes[j].probability * w) * composed;
    }
    if (cert.kind == BarrierKind::dissipative) {
        return cert.alpha * own + Polynomial::constant(cert.beta) - successors;
    }
    return successors - cert.alpha * own - Polynomial::constant(cert.beta);
}

/// Pointwise drift residual straight from the theorem inequality: true
/// closed-set indicators and barrier_eval ownership, no composed polynomial.
/// Used to confirm refutation witnesses and in soundness tests.
inline double pointwise_drift_residual(const SystemSpec& spec, const BarrierCertificate& cert,
                                       double x) {
    double vx = barrier_eval(cert.barrier, x);
    double successors = 0.0;
    for (std::size_t j = 0; j < spec.modes.size(); ++j) {
        double y = mode_successor(spec, x, j);
        bool in_target = spec.target.contains(y);
        double w = 1.0;
        if (cert.kind == BarrierKind::dissipative) {
            w = in_target ? 1.0 : cert.alpha;
        } else if (cert.kind == BarrierKind::attractive) {
            w = in_target ? cert.alpha : 1.0;
        } else {
            w = in_target ? cert.alpha * cert.alpha : 1.0;
        }
        successors += spec.modes[j].probability * w * barrier_eval(cert.barrier, y);
    }
    if (cert.kind == BarrierKind::dissipative) {
        return cert.alpha * vx + cert.beta - successors;
    }
    return successors - cert.alpha * vx - cert.beta;
}

namespace detail {

inline bool all_at_least(const std::vector<double>& coeffs, double floor_value) {
    for (double c : coeffs) {
        if (c < floor_value) return false;
    }
    return true;
}

}  // namespace detail

/// Bernstein-form nonnegativity certification with midpoint subdivision.
/// Per subinterval:
///   all Bernstein coefficients >= -slack (in either parameterization
///   direction; the reversed one cancels exactly at endpoint double roots)
///     -> subinterval certified
///   a sampled interior point (midpoint, control abscissae, near-endpoint
///   probes) evaluates < -slack -> Refuted with that witness
///   depth exhausted with mixed signs -> Inconclusive, subinterval reported
/// Witnesses are sampled strictly inside the interval: over a partition
/// cell the residual polynomial is exact only on the open cell, so an
/// endpoint sample could indict a point that actually belongs to the
/// neighboring cell's regime. A negative endpoint value of a continuous
/// residual forces negative interior values anyway, which subdivision
/// drives the probes toward.
inline CertVerdict certify_nonneg_bernstein(const Polynomial& r, const Interval& iv,
                                            int max_depth, double slack) {
    if (max_depth < 0) throw std::invalid_argument("certify_nonneg_bernstein: max_depth < 0");
    if (slack < 0.0) throw std::invalid_argument("certify_nonneg_bernstein: slack < 0");
    CertVerdict verdict;
    verdict.slack = slack;
    verdict.status = CertStatus::certified;

    struct Item {
        Interval iv;
        int depth;
    };
    std::vector<Item> stack{{iv, 0}};
    while (!stack.empty()) {
        Item item = stack.back();
        stack.pop_back();
        verdict.max_depth_used = std::max(verdict.max_depth_used, item.depth);

        std::vector<double> coeffs = bernstein_coefficients(r, item.iv);
        if (detail::all_at_least(coeffs, -slack) ||
            detail::all_at_least(bernstein_coefficients_reversed(r, item.iv), -slack)) {
            continue;
        }

        std::size_t n = coeffs.size() - 1;
        double width = item.iv.width();
        std::vector<double> samples{item.iv.midpoint()};
        for (std::size_t j = 1; j < n; ++j) samples.push_back(bernstein_abscissa(item.iv, j, n));
        for (double probe : {item.iv.lo + width * 0x1.0p-20, item.iv.hi - width * 0x1.0p-20}) {
            if (probe > item.iv.lo && probe < item.iv.hi) samples.push_back(probe);
        }
        for (double x : samples) {
            double value = r(x);
            if (value < -slack) {
                verdict.status = CertStatus::refuted;
                verdict.witness = CertWitness{x, value};
                verdict.inconclusive_regions.clear();
                return verdict;
            }
        }

        if (item.depth >= max_depth) {
            verdict.status = CertStatus::inconclusive;
            verdict.inconclusive_regions.push_back(item.iv);
            continue;
        }
        double mid = item.iv.midpoint();
        stack.push_back({{mid, item.iv.hi}, item.depth + 1});
        stack.push_back({{item.iv.lo, mid}, item.depth + 1});
    }
    return verdict;
}

/// Full certificate check: side conditions, then the drift inequality on
/// every partition cell. Aggregation is deterministic in cell order: first
/// confirmed refutation wins; otherwise any undecided cell makes the verdict
/// Inconclusive; otherwise Certified. Refutation witnesses are confirmed
/// against the pointwise theorem inequality before being reported; a witness
/// that fails confirmation (possible only at piece-ownership boundaries)
/// downgrades its cell to Inconclusive.
inline CertVerdict check_certificate(const SystemSpec& spec, const BarrierCertificate& cert,
                                     int max_depth = 40, double slack = 0.0) {
    require_barrier_covers(cert.barrier, spec.augmented);
    CertVerdict verdict;
    verdict.slack = slack;

    SideConditionReport side = check_side_conditions(cert, spec);
    for (const std::string& note : side.notes) verdict.notes.push_back(note);
    if (!side.passed) {
        const SideConditionViolation& v = side.violations.front();
        verdict.status = CertStatus::refuted;
        bool lower_bound_kind = v.condition == "nonnegative_on_domain" ||
                                v.condition == "at_least_one_on_target";
        double margin = lower_bound_kind ? v.value - v.bound : v.bound - v.value;
        verdict.witness = CertWitness{v.x, margin};
        verdict.notes.push_back("side condition violated: " + v.condition + " at x=" +
                                std::to_string(v.x));
        return verdict;
    }

    std::vector<Cell> cells = build_partition(spec, cert);
    verdict.status = CertStatus::certified;
    for (const Cell& cell : cells) {
        Polynomial r = drift_residual(spec, cert, cell);
        CertVerdict cv = certify_nonneg_bernstein(r, cell.interval, max_depth, slack);
        verdict.max_depth_used = std::max(verdict.max_depth_used, cv.max_depth_used);
        if (cv.status == CertStatus::refuted) {
            double confirmed = pointwise_drift_residual(spec, cert, cv.witness->x);
            if (confirmed < -slack) {
                verdict.status = CertStatus::refuted;
                verdict.witness = CertWitness{cv.witness->x, confirmed};
                verdict.inconclusive_regions.clear();
                verdict.inconclusive_cells.clear();
                return verdict;
            }
            verdict.notes.push_back(
                "unconfirmed refutation witness at x=" + std::to_string(cv.witness->x) +
                " treated as inconclusive (piece-ownership boundary)");
            verdict.status = CertStatus::inconclusive;
            verdict.inconclusive_regions.push_back(cell.interval);
            verdict.inconclusive_cells.push_back(cell);
            continue;
        }
        if (cv.status == CertStatus::inconclusive) {
            verdict.status = CertStatus::inconclusive;
            for (const Interval& region : cv.inconclusive_regions) {
                verdict.inconclusive_regions.push_back(region);
            }
            verdict.inconclusive_cells.push_back(cell);
        }
    }
    return verdict;
}

}  // namespace otcert
