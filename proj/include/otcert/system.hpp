#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otcert/interval.hpp"
#include "otcert/polynomial.hpp"

namespace otcert {

/// One disturbance value: the polynomial map x -> f(x, d_j) and its
/// probability mass.
struct DisturbanceMode {
    Polynomial dynamics;
    double probability = 0.0;
};

/// Scalar stochastic system with a finite disturbance set.
///   safe      the set inside which dynamics stay active
///   target    the set whose visits are counted (closed membership)
///   augmented the evaluation domain; must contain safe and every one-step
///             successor of safe
struct SystemSpec {
    std::vector<DisturbanceMode> modes;
    IntervalSet safe;
    IntervalSet target;
    IntervalSet augmented;
    double x0 = 0.0;
};

inline double mode_successor(const SystemSpec& spec, double x, std::size_t j) {
    if (j >= spec.modes.size()) throw std::out_of_range("mode index out of range");
    return spec.modes[j].dynamics(x);
}

namespace detail {

inline IntervalSet reachable_union(const std::vector<DisturbanceMode>& modes,
                                   const IntervalSet& safe) {
    std::vector<Interval> parts = safe.intervals();
    for (const DisturbanceMode& mode : modes) {
        for (const Interval& iv : safe.intervals()) {
            parts.push_back(polynomial_range(mode.dynamics, iv));
        }
    }
    return IntervalSet(std::move(parts));
}

}  // namespace detail

/// Union of the safe set with the exact image of every mode over every safe
/// interval. Equals the one-step reachable superset used as the default
/// augmented domain.
inline IntervalSet one_step_reachable(const SystemSpec& spec) {
    return detail::reachable_union(spec.modes, spec.safe);
}

/// Validating constructor for SystemSpec. Pass an empty augmented set to
/// default it to one_step_reachable. Throws std::invalid_argument with the
/// offending field named.
inline SystemSpec make_system_spec(std::vector<DisturbanceMode> modes, IntervalSet safe,
                                   IntervalSet target, IntervalSet augmented, double x0) {
    if (modes.empty()) throw std::invalid_argument("system.modes: need at least one mode");
    double prob_sum = 0.0;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        double p = modes[j].probability;
        if (!(p > 0.0 && p <= 1.0)) {
            throw std::invalid_argument("system.modes[" + std::to_string(j) +
                                        "].probability: must lie in (0, 1], got " +
                                        std::to_string(p));
        }
        prob_sum += p;
    }
    if (std::abs(prob_sum - 1.0) > 1e-12) {
        throw std::invalid_argument("system.modes: probabilities sum to " +
                                    std::to_string(prob_sum) + ", expected 1 within 1e-12");
    }
    if (safe.empty()) throw std::invalid_argument("system.safe: must be nonempty");
    if (!safe.contains(target)) {
        throw std::invalid_argument("system.target: target not contained in safe set");
    }
    IntervalSet reachable = detail::reachable_union(modes, safe);
    if (augmented.empty()) {
        augmented = reachable;
    } else {
        if (!augmented.contains(safe)) {
            throw std::invalid_argument("system.augmented: does not contain the safe set");
        }
        if (!augmented.contains(reachable)) {
            throw std::invalid_argument(
                "system.augmented: does not contain the one-step reachable set");
        }
    }
    if (!safe.contains(x0)) {
        throw std::invalid_argument("system.x0: initial state " + std::to_string(x0) +
                                    " not in safe set");
    }
    return SystemSpec{std::move(modes), std::move(safe), std::move(target), std::move(augmented),
                      x0};
}

}  // namespace otcert
