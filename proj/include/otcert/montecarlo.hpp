#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "otcert/barrier.hpp"
#include "otcert/bounds.hpp"
#include "otcert/switched.hpp"

namespace otcert {

namespace detail {

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer: bijective 64-bit mix with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Top 53 bits -> [0, 1).
inline double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Counter-based uniform stream addressed by (seed, trajectory, step).
/// Draws depend only on the address, never on evaluation order, so results
/// are reproducible regardless of trajectory scheduling, and nested horizons
/// share their common prefix of draws.
class TrajectoryRng {
public:
    TrajectoryRng(std::uint64_t seed, std::uint64_t trajectory)
        : key_(detail::mix64(seed ^ detail::mix64(trajectory ^ detail::golden_gamma))) {}

    double uniform(std::uint64_t step) const {
        return detail::to_unit(detail::mix64(key_ + (step + 1) * detail::golden_gamma));
    }

private:
    std::uint64_t key_;
};

/// Cumulative mode probabilities, in mode order.
inline std::vector<double> cumulative_probabilities(const SystemSpec& spec) {
    std::vector<double> cumulative;
    cumulative.reserve(spec.modes.size());
    double acc = 0.0;
    for (const auto& mode : spec.modes) {
        acc += mode.probability;
        cumulative.push_back(acc);
    }
    return cumulative;
}

/// Maps a uniform draw to a mode index via the cumulative distribution.
inline std::size_t draw_mode(const std::vector<double>& cumulative, double u) {
    for (std::size_t j = 0; j + 1 < cumulative.size(); ++j) {
        if (u < cumulative[j]) return j;
    }
    return cumulative.size() - 1;
}

/// Fills `out` with `horizon` i.i.d. mode draws for one trajectory.
inline void sample_modes(const std::vector<double>& cumulative, const TrajectoryRng& rng,
                         long horizon, ModeSequence& out) {
    out.clear();
    out.reserve(static_cast<std::size_t>(horizon));
    for (long t = 0; t < horizon; ++t) {
        out.push_back(draw_mode(cumulative, rng.uniform(static_cast<std::uint64_t>(t))));
    }
}

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Exact (Clopper-Pearson) binomial confidence interval. Boundary counts use
/// the one-sided construction, so 0 or n successes never collapse to a point
/// claim of probability exactly 0 or 1.
inline ConfidenceInterval clopper_pearson(long long successes, long long samples,
                                          double confidence = 0.99) {
    if (samples < 1 || successes < 0 || successes > samples) {
        throw std::invalid_argument("clopper_pearson: require 0 <= successes <= samples, samples >= 1");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("clopper_pearson: confidence must lie in (0,1)");
    }
    double a = 1.0 - confidence;
    double n = static_cast<double>(samples);
    if (successes == 0) return {0.0, 1.0 - std::pow(a, 1.0 / n)};
    if (successes == samples) return {std::pow(a, 1.0 / n), 1.0};
    double s = static_cast<double>(successes);
    return {boost::math::ibeta_inv(s, n - s + 1.0, a / 2.0),
            boost::math::ibeta_inv(s + 1.0, n - s, 1.0 - a / 2.0)};
}

struct EmpiricalEstimate {
    long horizon = 0;
    long visits = 0;  // k
    long long successes = 0;
    long long samples = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

/// Estimates P(occupation count >= k) for each k in `ks` over one pass of
/// `samples` switched trajectories of length `horizon`. Deterministic for a
/// fixed (seed, samples).
inline std::vector<EmpiricalEstimate> estimate_occupation_probability(
    const SystemSpec& spec, long horizon, const std::vector<long>& ks, long long samples,
    std::uint64_t seed, double confidence = 0.99) {
    if (samples < 1) throw std::invalid_argument("estimate: samples must be >= 1");
    if (horizon < 0) throw std::invalid_argument("estimate: horizon must be >= 0");
    for (long k : ks) {
        if (k < 1 || k > horizon + 1) {
            throw std::invalid_argument("estimate: each k must lie in 1..N+1");
        }
    }
    std::vector<double> cumulative = cumulative_probabilities(spec);
    std::vector<long long> successes(ks.size(), 0);
    ModeSequence modes;
    for (long long i = 0; i < samples; ++i) {
        TrajectoryRng rng(seed, static_cast<std::uint64_t>(i));
        sample_modes(cumulative, rng, horizon, modes);
        std::size_t count = occupation_count(spec, spec.x0, modes).count;
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            if (count >= static_cast<std::size_t>(ks[ki])) ++successes[ki];
        }
    }
    std::vector<EmpiricalEstimate> out;
    out.reserve(ks.size());
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        ConfidenceInterval ci = clopper_pearson(successes[ki], samples, confidence);
        out.push_back(EmpiricalEstimate{horizon, ks[ki], successes[ki], samples,
                                        static_cast<double>(successes[ki]) /
                                            static_cast<double>(samples),
                                        ci.lo, ci.hi});
    }
    return out;
}

/// A bound result tagged with the grid point it was computed for, so that
/// validation can detect misaligned pairings.
struct TaggedBound {
    long horizon = 0;
    long visits = 0;
    BoundResult result;
};

struct BoundCheckRow {
    long horizon = 0;
    long visits = 0;
    BoundSide side = BoundSide::upper;
    double bound = 0.0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    double margin = 0.0;  // >= 0 means no statistical contradiction
    bool pass = false;
};

struct ValidationReport {
    std::vector<BoundCheckRow> rows;
    bool all_pass = true;
};

/// Checks each certified bound against the matching empirical estimate:
/// a lower bound passes iff it does not exceed ci_hi, an upper bound passes
/// iff it is not below ci_lo. Sequences must be aligned on (N, k).
inline ValidationReport validate_bounds(const std::vector<EmpiricalEstimate>& estimates,
                                        const std::vector<TaggedBound>& bounds) {
    if (estimates.size() != bounds.size()) {
        throw std::invalid_argument("validate_bounds: estimate and bound sequences differ in length");
    }
    ValidationReport report;
    report.rows.reserve(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const EmpiricalEstimate& est = estimates[i];
        const TaggedBound& tb = bounds[i];
        if (est.horizon != tb.horizon || est.visits != tb.visits) {
            throw std::invalid_argument("validate_bounds: misaligned (N, k) pair at index " +
                                        std::to_string(i));
        }
        if (!tb.result.valid || !tb.result.value) {
            throw std::invalid_argument("validate_bounds: bound at index " + std::to_string(i) +
                                        " is invalid; filter before validating");
        }
        BoundCheckRow row;
        row.horizon = est.horizon;
        row.visits = est.visits;
        row.side = tb.result.side;
        row.bound = *tb.result.value;
        row.p_hat = est.p_hat;
        row.ci_lo = est.ci_lo;
        row.ci_hi = est.ci_hi;
        row.margin = row.side == BoundSide::lower ? est.ci_hi - row.bound : row.bound - est.ci_lo;
        row.pass = row.margin >= 0.0;
        if (!row.pass) report.all_pass = false;
        report.rows.push_back(row);
    }
    return report;
}

enum class DriftDirection { supermartingale, submartingale };

inline const char* to_string(DriftDirection d) {
    return d == DriftDirection::supermartingale ? "supermartingale" : "submartingale";
}

/// Per-step empirical drift of the scaled process Z_t, with normal-
/// approximation CI half-widths. entry t compares Z_{t+1} against Z_t plus
/// the certified drift allowance.
struct DriftDiagnostic {
    std::vector<long> times;
    std::vector<double> empirical_drift;
    std::vector<double> ci_halfwidth;
    DriftDirection direction = DriftDirection::supermartingale;
};

/// Two-sided 0.99 normal quantile used for the drift CIs.
inline constexpr double z_confidence_99 = 2.5758293035489004;

/// Simulates `samples` switched trajectories and measures the mean drift of
/// the kind-specific scaled process:
///   dissipative          Z_t = alpha^{-n(t)} v(X_t),      allowance (beta/alpha) alpha^{-n(t)}
///   attractive           Z_t = alpha^{-(t-n(t))} v(X_t),  allowance beta
///   weighted_attractive  Z_t = alpha^{-(t-2n(t))} v(X_t), allowance beta
/// where n(t) counts target visits through time t. A dissipative certificate
/// makes Z_t a supermartingale (mean drift <= 0); the attractive kinds make
/// it a submartingale (mean drift >= 0).
inline DriftDiagnostic martingale_diagnostic(const SystemSpec& spec,
                                             const BarrierCertificate& cert, double x0,
                                             long t_max, long long samples,
                                             std::uint64_t seed) {
    if (t_max < 1) throw std::invalid_argument("martingale_diagnostic: t_max must be >= 1");
    if (samples < 2) throw std::invalid_argument("martingale_diagnostic: samples must be >= 2");
    if (!spec.safe.contains(x0)) {
        throw std::invalid_argument("martingale_diagnostic: x0 not in safe set");
    }
    require_barrier_covers(cert.barrier, spec.augmented);

    bool dissipative = cert.kind == BarrierKind::dissipative;
    std::vector<double> cumulative = cumulative_probabilities(spec);
    std::vector<double> sum(static_cast<std::size_t>(t_max), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(t_max), 0.0);

    auto scaled = [&](double x, long t, long visits) {
        double expo;
        switch (cert.kind) {
            case BarrierKind::dissipative: expo = -static_cast<double>(visits); break;
            case BarrierKind::attractive: expo = -static_cast<double>(t - visits); break;
            default: expo = -static_cast<double>(t - 2 * visits); break;
        }
        return std::pow(cert.alpha, expo) * barrier_eval(cert.barrier, x);
    };

    for (long long i = 0; i < samples; ++i) {
        TrajectoryRng rng(seed, static_cast<std::uint64_t>(i));
        double x = x0;
        long visits = spec.target.contains(x0) ? 1 : 0;
        double z = scaled(x, 0, visits);
        for (long t = 0; t < t_max; ++t) {
            double allowance = dissipative
                                   ? (cert.beta / cert.alpha) *
                                         std::pow(cert.alpha, -static_cast<double>(visits))
                                   : cert.beta;
            std::size_t j = draw_mode(cumulative, rng.uniform(static_cast<std::uint64_t>(t)));
            double x_next = switched_successor(spec, x, j);
            long visits_next = visits + (spec.target.contains(x_next) ? 1 : 0);
            double z_next = scaled(x_next, t + 1, visits_next);
            double d = z_next - z - allowance;
            sum[static_cast<std::size_t>(t)] += d;
            sumsq[static_cast<std::size_t>(t)] += d * d;
            x = x_next;
            visits = visits_next;
            z = z_next;
        }
    }

    DriftDiagnostic diag;
    diag.direction = dissipative ? DriftDirection::supermartingale : DriftDirection::submartingale;
    double n = static_cast<double>(samples);
    for (long t = 0; t < t_max; ++t) {
        double mean = sum[static_cast<std::size_t>(t)] / n;
        double var = (sumsq[static_cast<std::size_t>(t)] - n * mean * mean) / (n - 1.0);
        if (var < 0.0) var = 0.0;  // rounding guard for constant samples
        diag.times.push_back(t);
        diag.empirical_drift.push_back(mean);
        diag.ci_halfwidth.push_back(z_confidence_99 * std::sqrt(var / n));
    }
    return diag;
}

/// Number of time steps whose drift CI lies strictly on the wrong side of
/// the certified direction.
inline long drift_violation_count(const DriftDiagnostic& diag) {
    long violations = 0;
    for (std::size_t t = 0; t < diag.times.size(); ++t) {
        bool bad = diag.direction == DriftDirection::supermartingale
                       ? diag.empirical_drift[t] > diag.ci_halfwidth[t]
                       : diag.empirical_drift[t] < -diag.ci_halfwidth[t];
        if (bad) ++violations;
    }
    return violations;
}

}  // namespace otcert
