#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "otcert/bounds.hpp"
#include "otcert/examples.hpp"

using namespace otcert;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BoundQuery upper_query(long n, long k) {
    return make_bound_query(example1_system(), example1_barrier1(), Horizon::finite(n), k);
}

BoundQuery attractive_query(Horizon h, long k) {
    return make_bound_query(example2_system(), example2_certificate(), h, k);
}

BoundQuery weighted_query(Horizon h, long k) {
    return make_bound_query(example2_system(), example2_weighted_certificate(), h, k);
}

}  // namespace

TEST_CASE("bound query assembly reads the barrier and system") {
    BoundQuery q = upper_query(10, 1);
    REQUIRE(q.v0 == 0.0);
    REQUIRE(q.sup_abs == 16.0);
    REQUIRE_FALSE(q.x0_in_target);
    REQUIRE(q.alpha == 0.9);
    REQUIRE(q.beta == 0.0002);
    REQUIRE(q.kind == BarrierKind::dissipative);

    BoundQuery a = attractive_query(Horizon::finite(20), 5);
    REQUIRE(a.v0 == 0.99);
    REQUIRE(a.sup_abs == 1.0);
    REQUIRE(a.kind == BarrierKind::attractive);
}

TEST_CASE("upper bounds over the demo grid match frozen references") {
    const long horizons[] = {10, 20, 30};
    const long ks[] = {1, 3, 5, 7};
    const double expected[3][4] = {
        {0.0037359439815848835, 0.0030261146250837559, 0.0024511528463178425,
         0.0019854338055174526},
        {0.014450526679939927, 0.011704926610751341, 0.0094809905547085863,
         0.007679602349313956},
        {0.045179649751851507, 0.036595516298999722, 0.029642368202189774,
         0.024010318243773719}};
    for (int ni = 0; ni < 3; ++ni) {
        for (int ki = 0; ki < 4; ++ki) {
            BoundResult r = certified_bound(upper_query(horizons[ni], ks[ki]));
            REQUIRE(r.valid);
            REQUIRE(r.side == BoundSide::upper);
            REQUIRE_THAT(*r.value, WithinRel(expected[ni][ki], 1e-12));
            REQUIRE(*r.value == r.raw_value);  // no clamping needed here
        }
    }
}

TEST_CASE("drift term closed form equals the iterative sum") {
    for (long n : {10L, 100L, 1000L}) {
        BoundResult r = upper_bound(upper_query(n, 1));
        double iterative = 0.0;
        for (long t = 1; t <= n; ++t) {
            iterative += (0.0002 / 0.9) * std::pow(0.9, -static_cast<double>(t));
        }
        REQUIRE_THAT(r.drift_term, WithinRel(iterative, 1e-12));
    }
}

TEST_CASE("upper bound edge cases") {
    // k at the top of the admissible range, then just past it.
    REQUIRE(upper_bound(upper_query(10, 11)).valid);
    BoundResult past = upper_bound(upper_query(10, 12));
    REQUIRE_FALSE(past.valid);
    REQUIRE_FALSE(past.value.has_value());
    REQUIRE_THAT(past.invalid_reason, ContainsSubstring("visits k exceeds N + 1"));
    REQUIRE(std::isnan(past.raw_value));

    REQUIRE_THAT(upper_bound(upper_query(10, 0)).invalid_reason,
                 ContainsSubstring("visits k must be >= 1"));

    // Infinite horizon diverges for beta > 0 ...
    BoundResult inf_div = upper_bound(make_bound_query(example1_system(), example1_barrier1(),
                                                       Horizon::inf(), 1));
    REQUIRE_FALSE(inf_div.valid);
    REQUIRE_THAT(inf_div.invalid_reason,
                 ContainsSubstring("bound diverges as N -> infinity for beta > 0"));

    // ... and collapses to v0 * rho * alpha^k for beta = 0.
    BoundResult inf_ok = upper_bound(make_bound_query(example1_system(), example1_barrier2(),
                                                      Horizon::inf(), 3));
    REQUIRE(inf_ok.valid);
    REQUIRE(inf_ok.raw_value == 0.0);  // v(0) = 0 for the dead-zone barrier
    REQUIRE(*inf_ok.value == 0.0);

    // Wrong kind throws rather than returning a wrong-side bound.
    REQUIRE_THROWS_AS(upper_bound(attractive_query(Horizon::finite(10), 1)),
                      std::invalid_argument);
}

TEST_CASE("upper bound handles an initial state inside the target") {
    BoundQuery q;
    q.kind = BarrierKind::dissipative;
    q.horizon = Horizon::finite(10);
    q.visits = 3;
    q.alpha = 0.5;
    q.beta = 0.0;
    q.v0 = 0.8;
    q.x0_in_target = true;
    BoundResult r = upper_bound(q);
    REQUIRE(r.valid);
    REQUIRE(r.rho == 2.0);  // 1/alpha
    REQUIRE_THAT(r.raw_value, WithinRel(0.8 * 2.0 * 0.125, 1e-15));

    // Values above one clamp while raw_value stays reported.
    q.v0 = 5.0;
    q.visits = 1;
    q.x0_in_target = false;
    BoundResult clamped = upper_bound(q);
    REQUIRE(*clamped.value == 1.0);
    REQUIRE_THAT(clamped.raw_value, WithinRel(2.5, 1e-15));
}

TEST_CASE("handcrafted parameter guards return invalid bounds") {
    BoundQuery q;
    q.horizon = Horizon::finite(10);
    q.visits = 1;
    q.v0 = 0.5;
    q.sup_abs = 1.0;

    q.kind = BarrierKind::dissipative;
    q.alpha = 1.5;
    REQUIRE_THAT(upper_bound(q).invalid_reason, ContainsSubstring("alpha outside (0,1)"));
    q.alpha = 0.9;
    q.beta = -0.1;
    REQUIRE_THAT(upper_bound(q).invalid_reason, ContainsSubstring("beta < 0"));

    q.kind = BarrierKind::attractive;
    q.alpha = 0.9;
    q.beta = 0.0;
    REQUIRE_THAT(lower_bound_attractive(q).invalid_reason,
                 ContainsSubstring("alpha must exceed 1"));
    q.alpha = 1.1;
    q.beta = 0.1;
    REQUIRE_THAT(lower_bound_attractive(q).invalid_reason, ContainsSubstring("beta > 0"));

    q.kind = BarrierKind::weighted_attractive;
    q.alpha = 1.0;
    q.beta = 0.0;
    REQUIRE_THAT(lower_bound_weighted(q).invalid_reason,
                 ContainsSubstring("alpha must exceed 1"));
    q.alpha = 1.1;
    q.beta = -0.2;
    REQUIRE_THAT(lower_bound_weighted(q).invalid_reason, ContainsSubstring("beta < 0"));
}

TEST_CASE("attractive lower bounds match frozen references") {
    const long horizons[] = {20, 50, 100, 200, 500};
    const long ks[] = {5, 10, 15};
    const double expected[5][3] = {
        {0.9251240998877799, 0.8934539146334196, 0.8089379293391149},
        {0.9703943889819436, 0.9674725216869833, 0.9637287936697327},
        {0.9826658264755704, 0.9820630884988976, 0.9813862013658473},
        {0.9879122593292204, 0.9877955177344381, 0.9876709904528062},
        {0.9898811185608556, 0.9898756039751848, 0.9898698302922212}};
    for (int ni = 0; ni < 5; ++ni) {
        for (int ki = 0; ki < 3; ++ki) {
            BoundResult r = certified_bound(attractive_query(Horizon::finite(horizons[ni]), ks[ki]));
            REQUIRE(r.valid);
            REQUIRE(r.side == BoundSide::lower);
            REQUIRE_THAT(*r.value, WithinRel(expected[ni][ki], 1e-12));
        }
    }
    for (long k : ks) {
        BoundResult r = certified_bound(attractive_query(Horizon::inf(), k));
        REQUIRE(r.valid);
        REQUIRE(r.raw_value == 0.99);  // exactly v0 in the infinite-horizon limit
    }
}

TEST_CASE("weighted lower bounds match frozen references") {
    const long horizons[] = {50, 100, 200, 500};
    const long ks[] = {5, 10, 15};
    const double expected[4][3] = {
        {0.8447047940162398, 0.6975739609886997, 0.5233267927510188},
        {0.9080854083513987, 0.8310754240126675, 0.7515556062342532},
        {0.9356052722024484, 0.8844752174777504, 0.8345201364886455},
        {0.9459992701805198, 0.9039870378116082, 0.8637663047265487}};
    for (int ni = 0; ni < 4; ++ni) {
        for (int ki = 0; ki < 3; ++ki) {
            BoundResult r = certified_bound(weighted_query(Horizon::finite(horizons[ni]), ks[ki]));
            REQUIRE(r.valid);
            REQUIRE_THAT(*r.value, WithinRel(expected[ni][ki], 1e-12));
        }
    }

    REQUIRE_THAT(*certified_bound(weighted_query(Horizon::finite(20), 5)).value,
                 WithinRel(0.62223305679318464, 1e-12));

    // Deep negative raw value clamps to zero but stays reported.
    BoundResult clamped = certified_bound(weighted_query(Horizon::finite(20), 15));
    REQUIRE(clamped.valid);
    REQUIRE(*clamped.value == 0.0);
    REQUIRE_THAT(clamped.raw_value, WithinRel(-1.2124457373555009, 1e-12));

    const double expected_inf[3] = {0.9466280375704731, 0.9051562035500251,
                                    0.8655012531932323};
    for (int ki = 0; ki < 3; ++ki) {
        BoundResult r = certified_bound(weighted_query(Horizon::inf(), ks[ki]));
        REQUIRE(r.valid);
        REQUIRE_THAT(*r.value, WithinRel(expected_inf[ki], 1e-12));
    }
}

TEST_CASE("lower bound preconditions") {
    // Large sup |v| makes the attractive denominator nonpositive.
    BoundQuery q;
    q.kind = BarrierKind::attractive;
    q.horizon = Horizon::finite(20);
    q.visits = 20;
    q.alpha = 1.009;
    q.beta = 0.0;
    q.v0 = 0.5;
    q.sup_abs = 2.0;
    BoundResult r = lower_bound_attractive(q);
    REQUIRE_FALSE(r.valid);
    REQUIRE_THAT(r.invalid_reason,
                 ContainsSubstring("precondition rho(X0) > M alpha^{-(N-k+1)} fails"));

    q.kind = BarrierKind::weighted_attractive;
    BoundResult w = lower_bound_weighted(q);
    REQUIRE_FALSE(w.valid);
    REQUIRE_THAT(w.invalid_reason, ContainsSubstring("is nonpositive"));

    // Effective visit count must fit in the horizon on the lower side.
    BoundResult too_many = lower_bound_attractive(attractive_query(Horizon::finite(20), 21));
    REQUIRE_FALSE(too_many.valid);
    REQUIRE_THAT(too_many.invalid_reason,
                 ContainsSubstring("effective visits k - 1_T(x0) exceed N"));

    // An initial state inside the target relaxes the range by one.
    BoundQuery in_target = q;
    in_target.kind = BarrierKind::attractive;
    in_target.x0_in_target = true;
    in_target.visits = 21;
    in_target.sup_abs = 1.0;
    in_target.v0 = 1.0;
    BoundResult relaxed = lower_bound_attractive(in_target);
    REQUIRE(relaxed.valid);
    REQUIRE(relaxed.rho == 1.009);

    // Negative beta diverges at the infinite horizon.
    BoundQuery diverge;
    diverge.kind = BarrierKind::attractive;
    diverge.horizon = Horizon::inf();
    diverge.visits = 1;
    diverge.alpha = 1.1;
    diverge.beta = -0.001;
    diverge.v0 = 0.9;
    diverge.sup_abs = 1.0;
    REQUIRE_THAT(lower_bound_attractive(diverge).invalid_reason,
                 ContainsSubstring("penalty beta*N diverges"));

    REQUIRE_THROWS_AS(lower_bound_attractive(upper_query(10, 1)), std::invalid_argument);
    REQUIRE_THROWS_AS(lower_bound_weighted(attractive_query(Horizon::finite(10), 1)),
                      std::invalid_argument);
}

TEST_CASE("bounds are monotone across the grid") {
    // Upper bounds grow with N (more drift accumulates) and shrink with k.
    for (long n : {10L, 20L, 30L}) {
        for (long k : {1L, 3L, 5L}) {
            double here = *upper_bound(upper_query(n, k)).value;
            REQUIRE(*upper_bound(upper_query(n, k + 2)).value <= here + 1e-15);
            REQUIRE(*upper_bound(upper_query(n + 10, k)).value >= here - 1e-15);
        }
    }
    // Lower bounds grow with N (tail vanishes) and shrink with k.
    for (long n : {20L, 50L, 100L, 200L}) {
        for (long k : {5L, 10L}) {
            double attr = *lower_bound_attractive(attractive_query(Horizon::finite(n), k)).value;
            REQUIRE(*lower_bound_attractive(attractive_query(Horizon::finite(n), k + 5)).value <=
                    attr + 1e-15);
            REQUIRE(*lower_bound_attractive(attractive_query(Horizon::finite(n + 100), k)).value >=
                    attr - 1e-15);
        }
    }
}

TEST_CASE("finite-horizon bounds converge to the infinite-horizon forms") {
    for (long k : {5L, 10L, 15L}) {
        double finite = *lower_bound_attractive(attractive_query(Horizon::finite(10000), k)).value;
        double infinite = *lower_bound_attractive(attractive_query(Horizon::inf(), k)).value;
        REQUIRE_THAT(finite, WithinAbs(infinite, 1e-6));

        double wf = *lower_bound_weighted(weighted_query(Horizon::finite(10000), k)).value;
        double wi = *lower_bound_weighted(weighted_query(Horizon::inf(), k)).value;
        REQUIRE_THAT(wf, WithinAbs(wi, 1e-6));
    }

    // With beta = 0 the dissipative bound is horizon-free.
    BoundQuery q;
    q.kind = BarrierKind::dissipative;
    q.alpha = 0.3;
    q.beta = 0.0;
    q.v0 = 0.3;
    q.visits = 2;
    q.horizon = Horizon::finite(10000);
    double finite = upper_bound(q).raw_value;
    q.horizon = Horizon::inf();
    REQUIRE(upper_bound(q).raw_value == finite);
}
