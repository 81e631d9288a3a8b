#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "otcert/system.hpp"

namespace otcert {

/// One disturbance realization: mode index per time step.
using ModeSequence = std::vector<std::size_t>;

/// Trajectory record over t = 0..N inclusive.
///   states      X_0 .. X_N
///   visit_flags flags the target visits that count toward `count`
///   exit_time   first t with states[t] outside the safe set; nullopt if none
struct OccupationTrace {
    std::vector<double> states;
    std::vector<bool> visit_flags;
    std::optional<std::size_t> exit_time;
    std::size_t count = 0;
};

/// Successor under the switched semantics: active dynamics inside the safe
/// set, frozen state outside it. The state must stay within the augmented
/// domain (guaranteed when it entered via a safe-set successor).
inline double switched_successor(const SystemSpec& spec, double x, std::size_t j) {
    if (!spec.augmented.contains(x)) {
        throw std::domain_error("switched_successor: state outside augmented domain");
    }
    if (!spec.safe.contains(x)) return x;
    return mode_successor(spec, x, j);
}

namespace detail {

inline void record_exit(OccupationTrace& trace, const SystemSpec& spec, std::size_t t, double x) {
    if (!trace.exit_time && !spec.safe.contains(x)) trace.exit_time = t;
}

}  // namespace detail

/// Occupation count of the switched trajectory: every target visit counts,
/// because the frozen state can never re-enter the target after an exit.
inline OccupationTrace occupation_count(const SystemSpec& spec, double x0,
                                        const ModeSequence& modes) {
    if (!spec.safe.contains(x0)) {
        throw std::invalid_argument("occupation_count: x0 not in safe set");
    }
    OccupationTrace trace;
    trace.states.reserve(modes.size() + 1);
    trace.visit_flags.reserve(modes.size() + 1);
    double x = x0;
    for (std::size_t t = 0;; ++t) {
        trace.states.push_back(x);
        detail::record_exit(trace, spec, t, x);
        bool visited = spec.target.contains(x);
        trace.visit_flags.push_back(visited);
        if (visited) ++trace.count;
        if (t == modes.size()) break;
        x = switched_successor(spec, x, modes[t]);
    }
    return trace;
}

/// Occupation count of the original (unfrozen) trajectory, counting only
/// visits strictly before the safety exit time.
inline OccupationTrace constrained_occupation_count(const SystemSpec& spec, double x0,
                                                    const ModeSequence& modes) {
    if (!spec.safe.contains(x0)) {
        throw std::invalid_argument("constrained_occupation_count: x0 not in safe set");
    }
    OccupationTrace trace;
    trace.states.reserve(modes.size() + 1);
    trace.visit_flags.reserve(modes.size() + 1);
    double x = x0;
    for (std::size_t t = 0;; ++t) {
        trace.states.push_back(x);
        detail::record_exit(trace, spec, t, x);
        bool before_exit = !trace.exit_time || t < *trace.exit_time;
        bool visited = spec.target.contains(x) && before_exit;
        trace.visit_flags.push_back(visited);
        if (visited) ++trace.count;
        if (t == modes.size()) break;
        x = mode_successor(spec, x, modes[t]);
    }
    return trace;
}

}  // namespace otcert
