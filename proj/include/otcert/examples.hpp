#pragma once

#include "otcert/barrier.hpp"
#include "otcert/system.hpp"

// Bundled demo systems and certificates used by the reproduce command, the
// bundled configs, and the test suite.

namespace otcert {

namespace detail {

inline std::vector<DisturbanceMode> contraction_modes(double step) {
    // x -> 0.5 x + d with d = +step or -step, each with probability 1/2
    return {DisturbanceMode{Polynomial({step, 0.5}), 0.5},
            DisturbanceMode{Polynomial({-step, 0.5}), 0.5}};
}

}  // namespace detail

/// Demo 1: contractive system with a remote target.
///   X_{t+1} = 0.5 X_t +- 0.1,  safe [-4,4], target [2,3], x0 = 0
inline SystemSpec example1_system() {
    return make_system_spec(detail::contraction_modes(0.1), IntervalSet({{-4.0, 4.0}}),
                            IntervalSet({{2.0, 3.0}}), IntervalSet(), 0.0);
}

/// Demo 1 barrier 1: v(x) = (x/2)^4, entered as symmetric pieces split at 0,
/// dissipative with alpha = 0.9, beta = 0.0002.
inline BarrierCertificate example1_barrier1() {
    Polynomial quartic({0.0, 0.0, 0.0, 0.0, 1.0 / 16.0});
    return make_barrier_certificate(make_piecewise_barrier({-4.0, 0.0, 4.0}, {quartic, quartic}),
                                    BarrierKind::dissipative, 0.9, 0.0002);
}

/// Demo 1 barrier 2: dead-zone barrier v(x) = 0.33 max(0, |x| - 0.25)^2,
/// dissipative with alpha = 0.3, beta = 0.
inline BarrierCertificate example1_barrier2() {
    Polynomial left({0.020625, 0.165, 0.33});    // 0.33 (x + 0.25)^2
    Polynomial right({0.020625, -0.165, 0.33});  // 0.33 (x - 0.25)^2
    return make_barrier_certificate(
        make_piecewise_barrier({-4.0, -0.25, 0.25, 4.0}, {left, Polynomial({0.0}), right}),
        BarrierKind::dissipative, 0.3, 0.0);
}

/// Demo 2: the same contractive dynamics with a central target.
///   X_{t+1} = 0.5 X_t +- 0.1,  safe [-1,1], target [-0.2,0.2], x0 = 0.5
inline SystemSpec example2_system() {
    return make_system_spec(detail::contraction_modes(0.1), IntervalSet({{-1.0, 1.0}}),
                            IntervalSet({{-0.2, 0.2}}), IntervalSet(), 0.5);
}

/// Demo 2 plateau barrier: 1 on the target, 0.99 on the surrounding band
/// (|x| up to 0.6), 0 outside.
inline PiecewiseBarrier example2_barrier() {
    return make_piecewise_barrier({-1.0, -0.6, -0.2, 0.2, 0.6, 1.0},
                                  {Polynomial({0.0}), Polynomial({0.99}), Polynomial({1.0}),
                                   Polynomial({0.99}), Polynomial({0.0})});
}

/// Demo 2 attractive certificate (beta = 0). The default alpha = 1.009
/// certifies; alpha = 1.02 is a known refutation case.
inline BarrierCertificate example2_certificate(double alpha = 1.009) {
    return make_barrier_certificate(example2_barrier(), BarrierKind::attractive, alpha, 0.0);
}

/// Demo 2 weighted attractive certificate: same barrier, in-target weight
/// alpha^2, alpha = 1.009, beta = 0.
inline BarrierCertificate example2_weighted_certificate() {
    return make_barrier_certificate(example2_barrier(), BarrierKind::weighted_attractive, 1.009,
                                    0.0);
}

/// Partition demo: X_{t+1} = 0.5 X_t +- 1, safe [-4,4], target [-0.5,0.5].
/// Its five certification cells are bounded by {-4,-3,-1,1,3,4}.
inline SystemSpec partition_demo_system() {
    return make_system_spec(detail::contraction_modes(1.0), IntervalSet({{-4.0, 4.0}}),
                            IntervalSet({{-0.5, 0.5}}), IntervalSet(), 0.0);
}

/// Constant barrier v = 1 for the partition demo (attractive, beta = 0).
inline BarrierCertificate partition_demo_certificate() {
    return make_barrier_certificate(make_piecewise_barrier({-4.0, 4.0}, {Polynomial({1.0})}),
                                    BarrierKind::attractive, 1.009, 0.0);
}

}  // namespace otcert
