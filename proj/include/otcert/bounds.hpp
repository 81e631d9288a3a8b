#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "otcert/barrier.hpp"
#include "otcert/system.hpp"

namespace otcert {

/// Time horizon: a finite step count N or infinity.
struct Horizon {
    bool infinite = false;
    long steps = 0;

    static Horizon finite(long n) { return Horizon{false, n}; }
    static Horizon inf() { return Horizon{true, 0}; }

    friend bool operator==(const Horizon& a, const Horizon& b) {
        return a.infinite == b.infinite && (a.infinite || a.steps == b.steps);
    }
};

/// Inputs of one certified-bound evaluation. v0 and sup_abs come from the
/// barrier (v(x0) and sup |v| over the augmented domain); alpha, beta, kind
/// from the certificate.
struct BoundQuery {
    Horizon horizon;
    long visits = 1;  // k
    bool x0_in_target = false;
    double v0 = 0.0;
    double sup_abs = 0.0;  // M
    double alpha = 0.0;
    double beta = 0.0;
    BarrierKind kind = BarrierKind::dissipative;
};

enum class BoundSide { upper, lower };

inline const char* to_string(BoundSide s) {
    return s == BoundSide::upper ? "upper" : "lower";
}

/// One certified bound. When valid, value is raw_value clamped to [0,1];
/// when invalid, value is absent and invalid_reason explains the failed
/// precondition. drift_term (the beta sum or Lambda) and rho are reported
/// for audit because the theorem variants define them differently.
struct BoundResult {
    BoundSide side = BoundSide::upper;
    std::optional<double> value;
    double raw_value = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
    std::string invalid_reason;
    double drift_term = 0.0;
    double rho = 1.0;
};

namespace detail {

inline BoundResult invalid_bound(BoundSide side, double rho, std::string reason) {
    BoundResult r;
    r.side = side;
    r.valid = false;
    r.invalid_reason = std::move(reason);
    r.rho = rho;
    return r;
}

inline BoundResult finish_bound(BoundSide side, double raw, double drift, double rho) {
    BoundResult r;
    r.side = side;
    r.raw_value = raw;
    r.value = std::min(1.0, std::max(0.0, raw));
    r.valid = true;
    r.drift_term = drift;
    r.rho = rho;
    return r;
}

/// Shared k / k' range validation. Returns an unset optional when fine.
inline std::optional<std::string> visits_range_error(const BoundQuery& q, bool lower_side) {
    if (q.visits < 1) return "visits k must be >= 1";
    if (!q.horizon.infinite) {
        if (q.visits > q.horizon.steps + 1) return "visits k exceeds N + 1";
        if (lower_side) {
            long k_eff = q.visits - (q.x0_in_target ? 1 : 0);
            if (k_eff > q.horizon.steps) return "effective visits k - 1_T(x0) exceed N";
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Upper bound on P(occupation count >= k) from a dissipative certificate:
///   finite N    (v0 rho + (beta/alpha) sum_{t=1..N} alpha^{-t}) alpha^k
///   infinite N  v0 rho alpha^k, requires beta = 0 (the sum diverges)
/// with rho = 1/alpha when x0 is inside the target, else 1.
inline BoundResult upper_bound(const BoundQuery& q) {
    if (q.kind != BarrierKind::dissipative) {
        throw std::invalid_argument("upper_bound: query kind must be dissipative");
    }
    double rho = q.x0_in_target ? 1.0 / q.alpha : 1.0;
    if (!(q.alpha > 0.0 && q.alpha < 1.0)) {
        return detail::invalid_bound(BoundSide::upper, rho,
                                     "alpha outside (0,1) for dissipative bounds");
    }
    if (q.beta < 0.0) {
        return detail::invalid_bound(BoundSide::upper, rho, "beta < 0 for dissipative bounds");
    }
    if (auto err = detail::visits_range_error(q, false)) {
        return detail::invalid_bound(BoundSide::upper, rho, *err);
    }
    double drift = 0.0;
    if (q.horizon.infinite) {
        if (q.beta > 0.0) {
            return detail::invalid_bound(BoundSide::upper, rho,
                                         "bound diverges as N -> infinity for beta > 0");
        }
    } else if (q.beta != 0.0) {
        double r = 1.0 / q.alpha;  // geometric sum of alpha^{-t}, closed form
        double sum = r * (std::pow(r, static_cast<double>(q.horizon.steps)) - 1.0) / (r - 1.0);
        drift = (q.beta / q.alpha) * sum;
    }
    double raw = (q.v0 * rho + drift) * std::pow(q.alpha, static_cast<double>(q.visits));
    return detail::finish_bound(BoundSide::upper, raw, drift, rho);
}

/// Lower bound from an attractive certificate:
///   finite N    (v0 rho + beta N - M alpha^{-(N-k+1)}) / (rho - M alpha^{-(N-k+1)})
///   infinite N  v0, requires beta = 0 (the penalty beta N diverges)
/// with rho = alpha when x0 is inside the target, else 1. Requires the
/// denominator to be positive.
inline BoundResult lower_bound_attractive(const BoundQuery& q) {
    if (q.kind != BarrierKind::attractive) {
        throw std::invalid_argument("lower_bound_attractive: query kind must be attractive");
    }
    double rho = q.x0_in_target ? q.alpha : 1.0;
    if (!(q.alpha > 1.0)) {
        return detail::invalid_bound(BoundSide::lower, rho,
                                     "alpha must exceed 1 for attractive bounds");
    }
    if (q.beta > 0.0) {
        return detail::invalid_bound(BoundSide::lower, rho, "beta > 0 for attractive bounds");
    }
    if (auto err = detail::visits_range_error(q, true)) {
        return detail::invalid_bound(BoundSide::lower, rho, *err);
    }
    if (q.horizon.infinite) {
        if (q.beta < 0.0) {
            return detail::invalid_bound(BoundSide::lower, rho,
                                         "penalty beta*N diverges as N -> infinity");
        }
        return detail::finish_bound(BoundSide::lower, q.v0, 0.0, rho);
    }
    double tail = q.sup_abs * std::pow(q.alpha, -static_cast<double>(q.horizon.steps - q.visits + 1));
    double denom = rho - tail;
    if (!(denom > 0.0)) {
        return detail::invalid_bound(BoundSide::lower, rho,
                                     "precondition rho(X0) > M alpha^{-(N-k+1)} fails");
    }
    double drift = q.beta * static_cast<double>(q.horizon.steps);
    double raw = (q.v0 * rho + drift - tail) / denom;
    return detail::finish_bound(BoundSide::lower, raw, drift, rho);
}

/// Lower bound from a weighted attractive certificate:
///   finite N    (v0 rho + Lambda - M alpha^{-(N-2k+2)})
///                 / (alpha^{k+1_T(x0)} - M alpha^{-(N-2k+2)})
///   infinite N  (v0 rho + Lambda) / alpha^{k+1_T(x0)}
/// with rho = alpha^2 when x0 is inside the target, else 1, and
/// Lambda = beta/(alpha-1) (1 - alpha^{-k'}), k' = k - 1_T(x0). Requires a
/// positive denominator.
inline BoundResult lower_bound_weighted(const BoundQuery& q) {
    if (q.kind != BarrierKind::weighted_attractive) {
        throw std::invalid_argument(
            "lower_bound_weighted: query kind must be weighted_attractive");
    }
    int ind = q.x0_in_target ? 1 : 0;
    double rho = q.x0_in_target ? q.alpha * q.alpha : 1.0;
    if (!(q.alpha > 1.0)) {
        return detail::invalid_bound(BoundSide::lower, rho,
                                     "alpha must exceed 1 for weighted attractive bounds");
    }
    if (q.beta < 0.0) {
        return detail::invalid_bound(BoundSide::lower, rho,
                                     "beta < 0 for weighted attractive bounds");
    }
    if (auto err = detail::visits_range_error(q, true)) {
        return detail::invalid_bound(BoundSide::lower, rho, *err);
    }
    long k_eff = q.visits - ind;
    double lambda = 0.0;
    if (q.beta != 0.0) {
        lambda = q.beta / (q.alpha - 1.0) * (1.0 - std::pow(q.alpha, -static_cast<double>(k_eff)));
    }
    double scale = std::pow(q.alpha, static_cast<double>(q.visits + ind));
    if (q.horizon.infinite) {
        double raw = (q.v0 * rho + lambda) / scale;
        return detail::finish_bound(BoundSide::lower, raw, lambda, rho);
    }
    double tail = q.sup_abs *
                  std::pow(q.alpha, -static_cast<double>(q.horizon.steps - 2 * q.visits + 2));
    double denom = scale - tail;
    if (!(denom > 0.0)) {
        return detail::invalid_bound(
            BoundSide::lower, rho,
            "denominator alpha^{k+1_T(x0)} - M alpha^{-(N-2k+2)} is nonpositive");
    }
    double raw = (q.v0 * rho + lambda - tail) / denom;
    return detail::finish_bound(BoundSide::lower, raw, lambda, rho);
}

/// Dispatch by certificate kind.
inline BoundResult certified_bound(const BoundQuery& q) {
    switch (q.kind) {
        case BarrierKind::dissipative: return upper_bound(q);
        case BarrierKind::attractive: return lower_bound_attractive(q);
        case BarrierKind::weighted_attractive: return lower_bound_weighted(q);
    }
    throw std::logic_error("certified_bound: unknown kind");
}

/// Builds the query for (spec, cert) at one grid point: v0 = v(x0),
/// sup_abs = sup |v| over the augmented domain, target flag from closed
/// membership.
inline BoundQuery make_bound_query(const SystemSpec& spec, const BarrierCertificate& cert,
                                   Horizon horizon, long visits) {
    BoundQuery q;
    q.horizon = horizon;
    q.visits = visits;
    q.x0_in_target = spec.target.contains(spec.x0);
    q.v0 = barrier_eval(cert.barrier, spec.x0);
    q.sup_abs = barrier_sup_abs(cert.barrier, spec.augmented);
    q.alpha = cert.alpha;
    q.beta = cert.beta;
    q.kind = cert.kind;
    return q;
}

}  // namespace otcert
