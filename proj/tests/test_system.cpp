#include <catch2/catch_amalgamated.hpp>

#include "otcert/examples.hpp"
#include "otcert/system.hpp"

using namespace otcert;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<DisturbanceMode> half_modes(double p0 = 0.5) {
    return {DisturbanceMode{Polynomial({0.1, 0.5}), p0},
            DisturbanceMode{Polynomial({-0.1, 0.5}), 1.0 - p0}};
}

}  // namespace

TEST_CASE("mode successor evaluates the chosen dynamics") {
    SystemSpec spec = example2_system();
    REQUIRE(spec.modes.size() == 2);
    REQUIRE(mode_successor(spec, 0.5, 0) == 0.35);
    REQUIRE(mode_successor(spec, 0.5, 1) == 0.15);
    REQUIRE_THROWS_AS(mode_successor(spec, 0.5, 2), std::out_of_range);
}

TEST_CASE("system validation names the offending field") {
    IntervalSet safe({{-1.0, 1.0}});
    IntervalSet target({{-0.2, 0.2}});

    REQUIRE_THROWS_WITH(make_system_spec({}, safe, target, IntervalSet(), 0.0),
                        ContainsSubstring("need at least one mode"));

    auto bad_sum = half_modes();
    bad_sum[0].probability = 0.45;
    bad_sum[1].probability = 0.45;
    REQUIRE_THROWS_WITH(make_system_spec(bad_sum, safe, target, IntervalSet(), 0.0),
                        ContainsSubstring("probabilities sum to 0.9"));

    auto bad_prob = half_modes();
    bad_prob[1].probability = 0.0;
    REQUIRE_THROWS_WITH(make_system_spec(bad_prob, safe, target, IntervalSet(), 0.0),
                        ContainsSubstring("system.modes[1].probability"));

    REQUIRE_THROWS_WITH(
        make_system_spec(half_modes(), IntervalSet(), target, IntervalSet(), 0.0),
        ContainsSubstring("system.safe"));

    REQUIRE_THROWS_WITH(
        make_system_spec(half_modes(), safe, IntervalSet({{0.9, 1.2}}), IntervalSet(), 0.0),
        ContainsSubstring("target not contained in safe set"));

    REQUIRE_THROWS_WITH(make_system_spec(half_modes(), safe, target, IntervalSet(), 5.0),
                        ContainsSubstring("not in safe set"));

    REQUIRE_THROWS_WITH(
        make_system_spec(half_modes(), safe, target, IntervalSet({{0.0, 2.0}}), 0.5),
        ContainsSubstring("does not contain the safe set"));

    std::vector<DisturbanceMode> shift{{Polynomial({0.5, 1.0}), 1.0}};
    REQUIRE_THROWS_WITH(
        make_system_spec(shift, IntervalSet({{0.0, 1.0}}), IntervalSet({{0.0, 0.5}}),
                         IntervalSet({{0.0, 1.0}}), 0.0),
        ContainsSubstring("one-step reachable"));
}

TEST_CASE("default augmented domain is the one-step reachable union") {
    SystemSpec two = example2_system();
    REQUIRE(two.augmented.size() == 1);
    REQUIRE(two.augmented.intervals()[0].lo == -1.0);
    REQUIRE(two.augmented.intervals()[0].hi == 1.0);

    SystemSpec one = example1_system();
    REQUIRE(one.augmented.intervals()[0].lo == -4.0);
    REQUIRE(one.augmented.intervals()[0].hi == 4.0);

    // Dynamics that escape the safe set enlarge the default domain.
    std::vector<DisturbanceMode> shift{{Polynomial({0.5, 1.0}), 1.0}};
    SystemSpec esc = make_system_spec(shift, IntervalSet({{0.0, 1.0}}),
                                      IntervalSet({{0.0, 0.5}}), IntervalSet(), 0.0);
    REQUIRE(esc.augmented.intervals()[0].lo == 0.0);
    REQUIRE(esc.augmented.intervals()[0].hi == 1.5);
    REQUIRE(one_step_reachable(esc).intervals()[0].hi == 1.5);
}

TEST_CASE("bundled demo systems have the advertised shape") {
    SystemSpec one = example1_system();
    REQUIRE(one.safe.intervals()[0].lo == -4.0);
    REQUIRE(one.target.intervals()[0].lo == 2.0);
    REQUIRE(one.target.intervals()[0].hi == 3.0);
    REQUIRE(one.x0 == 0.0);

    SystemSpec two = example2_system();
    REQUIRE(two.safe.intervals()[0].hi == 1.0);
    REQUIRE(two.target.intervals()[0].hi == 0.2);
    REQUIRE(two.x0 == 0.5);

    SystemSpec part = partition_demo_system();
    REQUIRE(part.target.intervals()[0].lo == -0.5);
    REQUIRE(part.augmented.intervals()[0].lo == -4.0);
    REQUIRE(part.augmented.intervals()[0].hi == 4.0);
}
