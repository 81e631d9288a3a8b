#include <catch2/catch_amalgamated.hpp>

#include "otcert/barrier.hpp"
#include "otcert/examples.hpp"

using namespace otcert;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("piece ownership is half-open with a closed last piece") {
    PiecewiseBarrier v = example1_barrier2().barrier;  // breakpoints -4, -0.25, 0.25, 4
    REQUIRE(v.piece_index(-4.0) == 0);
    REQUIRE(v.piece_index(-0.26) == 0);
    REQUIRE(v.piece_index(-0.25) == 1);  // breakpoint belongs to the right piece
    REQUIRE(v.piece_index(0.0) == 1);
    REQUIRE(v.piece_index(0.25) == 2);
    REQUIRE(v.piece_index(4.0) == 2);  // last piece also owns its right endpoint
    REQUIRE_THROWS_AS(v.piece_index(4.1), std::domain_error);
    REQUIRE_THROWS_AS(v.piece_index(-4.1), std::domain_error);
}

TEST_CASE("barrier evaluation on the bundled certificates") {
    PiecewiseBarrier dead_zone = example1_barrier2().barrier;
    REQUIRE(barrier_eval(dead_zone, 0.0) == 0.0);
    REQUIRE(barrier_eval(dead_zone, 0.25) == 0.0);
    REQUIRE_THAT(barrier_eval(dead_zone, 1.0), WithinAbs(0.33 * 0.75 * 0.75, 1e-15));
    REQUIRE_THAT(barrier_eval(dead_zone, -1.0), WithinAbs(0.33 * 0.75 * 0.75, 1e-15));

    PiecewiseBarrier quartic = example1_barrier1().barrier;
    REQUIRE(barrier_eval(quartic, 0.0) == 0.0);
    REQUIRE(barrier_eval(quartic, 2.0) == 1.0);
    REQUIRE(barrier_eval(quartic, -4.0) == 16.0);

    PiecewiseBarrier plateau = example2_barrier();
    REQUIRE(barrier_eval(plateau, 0.0) == 1.0);
    REQUIRE(barrier_eval(plateau, 0.5) == 0.99);
    REQUIRE(barrier_eval(plateau, -1.0) == 0.0);
    // Discontinuities follow the ownership convention.
    REQUIRE(barrier_eval(plateau, -0.6) == 0.99);
    REQUIRE(barrier_eval(plateau, 0.6) == 0.0);
}

TEST_CASE("piecewise barrier construction validates its inputs") {
    REQUIRE_THROWS_WITH(make_piecewise_barrier({0.0}, {}),
                        ContainsSubstring("need at least two"));
    REQUIRE_THROWS_WITH(make_piecewise_barrier({0.0, 0.0}, {Polynomial({1.0})}),
                        ContainsSubstring("strictly increasing"));
    REQUIRE_THROWS_WITH(
        make_piecewise_barrier({0.0, 1.0, 2.0, 3.0}, {Polynomial({1.0}), Polynomial({1.0})}),
        ContainsSubstring("expected 3 pieces, got 2"));
    REQUIRE_THROWS_WITH(
        make_piecewise_barrier({0.0, std::numeric_limits<double>::infinity()}, {Polynomial({1.0})}),
        ContainsSubstring("not finite"));
}

TEST_CASE("certificate construction enforces the kind's parameter region") {
    PiecewiseBarrier v = make_piecewise_barrier({-1.0, 1.0}, {Polynomial({1.0})});
    REQUIRE_THROWS_WITH(make_barrier_certificate(v, BarrierKind::dissipative, 1.0, 0.0),
                        ContainsSubstring("0 < alpha < 1"));
    REQUIRE_THROWS_WITH(make_barrier_certificate(v, BarrierKind::dissipative, 0.5, -0.1),
                        ContainsSubstring("beta >= 0"));
    REQUIRE_THROWS_WITH(make_barrier_certificate(v, BarrierKind::attractive, 0.9, 0.0),
                        ContainsSubstring("alpha > 1"));
    REQUIRE_THROWS_WITH(make_barrier_certificate(v, BarrierKind::attractive, 1.1, 0.1),
                        ContainsSubstring("beta <= 0"));
    REQUIRE_THROWS_WITH(make_barrier_certificate(v, BarrierKind::weighted_attractive, 1.0, 0.0),
                        ContainsSubstring("alpha > 1"));
    REQUIRE_THROWS_WITH(make_barrier_certificate(v, BarrierKind::weighted_attractive, 1.1, -0.1),
                        ContainsSubstring("beta >= 0"));
    REQUIRE_NOTHROW(make_barrier_certificate(v, BarrierKind::attractive, 1.1, 0.0));
}

TEST_CASE("sup of |v| over a domain is exact") {
    REQUIRE(barrier_sup_abs(example1_barrier1().barrier, IntervalSet({{-4.0, 4.0}})) == 16.0);
    REQUIRE(barrier_sup_abs(example1_barrier1().barrier, IntervalSet({{-1.0, 1.0}})) == 0.0625);
    REQUIRE(barrier_sup_abs(example1_barrier2().barrier, IntervalSet({{-4.0, 4.0}})) == 4.640625);
    REQUIRE(barrier_sup_abs(example2_barrier(), IntervalSet({{-1.0, 1.0}})) == 1.0);

    // Negative values count through the absolute value.
    PiecewiseBarrier line = make_piecewise_barrier({-1.0, 1.0}, {Polynomial({0.0, 1.0})});
    REQUIRE(barrier_sup_abs(line, IntervalSet({{-1.0, 0.5}})) == 1.0);
}

TEST_CASE("barrier must cover the augmented domain") {
    PiecewiseBarrier narrow = make_piecewise_barrier({-1.0, 1.0}, {Polynomial({1.0})});
    REQUIRE_THROWS_WITH(require_barrier_covers(narrow, IntervalSet({{-4.0, 4.0}})),
                        ContainsSubstring("do not cover"));
    REQUIRE_NOTHROW(require_barrier_covers(narrow, IntervalSet({{-1.0, 1.0}})));
    REQUIRE_NOTHROW(require_barrier_covers(narrow, IntervalSet()));
}

TEST_CASE("dissipative side conditions") {
    SideConditionReport ok = check_side_conditions(example1_barrier1(), example1_system());
    REQUIRE(ok.passed);
    REQUIRE(ok.violations.empty());
    REQUIRE(ok.notes.empty());

    // Same barrier against a target where it dips below 1.
    SystemSpec low_target = make_system_spec({DisturbanceMode{Polynomial({0.0, 0.5}), 1.0}},
                                             IntervalSet({{-4.0, 4.0}}), IntervalSet({{0.5, 1.0}}),
                                             IntervalSet(), 0.0);
    SideConditionReport bad = check_side_conditions(example1_barrier1(), low_target);
    REQUIRE_FALSE(bad.passed);
    REQUIRE(bad.violations.size() == 1);
    REQUIRE(bad.violations[0].condition == "at_least_one_on_target");
    REQUIRE(bad.violations[0].x == 0.5);
    REQUIRE_THAT(bad.violations[0].value, WithinAbs(0.00390625, 1e-15));
    REQUIRE(bad.violations[0].bound == 1.0);
}

TEST_CASE("attractive side conditions report a vacuous sink set") {
    SideConditionReport report = check_side_conditions(example2_certificate(), example2_system());
    REQUIRE(report.passed);
    REQUIRE(report.notes.size() == 1);
    REQUIRE_THAT(report.notes[0], ContainsSubstring("sink set empty"));
}

TEST_CASE("attractive sink condition fires on a real sink set") {
    // One mode escapes upward, so augmented \ safe = [1, 1.5] is a real sink.
    SystemSpec spec = make_system_spec({DisturbanceMode{Polynomial({0.5, 1.0}), 1.0}},
                                       IntervalSet({{0.0, 1.0}}), IntervalSet({{0.9, 1.0}}),
                                       IntervalSet(), 0.0);
    BarrierCertificate cert = make_barrier_certificate(
        make_piecewise_barrier({0.0, 1.5}, {Polynomial({1.0})}), BarrierKind::attractive, 1.1,
        0.0);
    SideConditionReport report = check_side_conditions(cert, spec);
    REQUIRE_FALSE(report.passed);
    REQUIRE(report.violations.size() == 1);
    REQUIRE(report.violations[0].condition == "sink_bound");
    REQUIRE(report.violations[0].value == 1.0);
    REQUIRE(report.violations[0].bound == 0.0);

    // A barrier that vanishes on the sink passes.
    BarrierCertificate zero_tail = make_barrier_certificate(
        make_piecewise_barrier({0.0, 1.0, 1.5}, {Polynomial({1.0}), Polynomial({0.0})}),
        BarrierKind::attractive, 1.1, 0.0);
    REQUIRE(check_side_conditions(zero_tail, spec).passed);
}

TEST_CASE("weighted attractive barrier above one on target is rejected") {
    BarrierCertificate cert = make_barrier_certificate(
        make_piecewise_barrier({-1.0, 1.0}, {Polynomial({1.5})}),
        BarrierKind::weighted_attractive, 1.1, 0.0);
    SideConditionReport report = check_side_conditions(cert, example2_system());
    REQUIRE_FALSE(report.passed);
    REQUIRE(report.violations[0].condition == "at_most_one_on_target");
    REQUIRE(report.violations[0].value == 1.5);
}
