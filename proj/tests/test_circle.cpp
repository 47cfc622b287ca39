#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proxlab/circle_maps.hpp"

using namespace proxlab;

namespace {
std::mt19937_64 rng(77001);
double urand() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
constexpr double kGolden = 0.6180339887498949;
}  // namespace

TEST_CASE("lift_orbit") {
    const LiftTrace rot = lift_orbit(System::rotation(0.3), 0.0, 4);
    REQUIRE(rot.values.size() == 5);
    const double expected[] = {0.0, 0.3, 0.6, 0.9, 1.2};
    for (int k = 0; k <= 4; ++k)
        CHECK(rot.values[static_cast<std::size_t>(k)] ==
              doctest::Approx(expected[k]).epsilon(1e-12));

    const LiftTrace sc = lift_orbit(System::sqrt_circle(), 0.25, 1);
    CHECK(sc.values[0] == doctest::Approx(0.25));
    CHECK(sc.values[1] == doctest::Approx(0.5));

    const LiftTrace ident = lift_orbit(System::rotation(0.0), 0.37, 5);
    for (double v : ident.values) CHECK(v == doctest::Approx(0.37));

    CHECK_THROWS_AS(lift_orbit(System::sqrt_interval(), 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(lift_orbit(System::rotation(0.3), 0.0, 0), std::invalid_argument);
}

TEST_CASE("lift projects back to the circle orbit") {
    const std::vector<System> systems = {System::rotation(kGolden), System::sqrt_circle(),
                                         System::sine_circle(0.1),
                                         System::denjoy({kGolden, 8, 0.5}),
                                         System::conjugate(System::rotation(kGolden), 0.1)};
    for (const auto& sys : systems) {
        const double t0 = 0.173;
        const LiftTrace trace = lift_orbit(sys, t0, 60);
        Point cur = Point::circle(t0);
        for (std::size_t k = 0; k < trace.values.size(); ++k) {
            CHECK(circle_dist(wrap_unit(trace.values[k]), cur.as_circle().t) <= 1e-9);
            if (k + 1 < trace.values.size()) {
                // branch continuity: consecutive lifted steps stay within one turn
                CHECK(std::fabs(trace.values[k + 1] - trace.values[k]) < 1.0);
                cur = sys.apply(cur, 1);
            }
        }
    }
}

TEST_CASE("rotation_number") {
    SUBCASE("rigid rotation") {
        const auto est = rotation_number(System::rotation(kGolden), 0.0, 100000);
        CHECK(std::fabs(est.rho - kGolden) <= 2e-5);
        CHECK(est.error_bound == doctest::Approx(2e-5));
        double lo = 1.0, hi = 0.0;
        for (int i = 0; i < 10; ++i) {
            const auto e = rotation_number(System::rotation(kGolden), urand(), 100000);
            lo = std::min(lo, e.rho);
            hi = std::max(hi, e.rho);
        }
        CHECK(hi - lo <= 4e-5);
    }
    SUBCASE("exact rational rotations") {
        const auto est = rotation_number(System::rotation(Rational(1, 3)), 0.9, 1000);
        REQUIRE(est.exact.has_value());
        CHECK(*est.exact == Rational(1, 3));
        CHECK(est.error_bound == 0.0);
    }
    SUBCASE("sqrt circle has rotation number zero") {
        const auto est = rotation_number(System::sqrt_circle(), 0.3, 10000);
        CHECK(std::min(est.rho, 1.0 - est.rho) <= 2e-4);
    }
    SUBCASE("invariant under conjugation") {
        const auto base = rotation_number(System::rotation(kGolden), 0.0, 100000);
        const auto conj =
            rotation_number(System::conjugate(System::rotation(kGolden), 0.1), 0.0, 100000);
        CHECK(std::fabs(base.rho - conj.rho) <= base.error_bound + conj.error_bound);
    }
    SUBCASE("requires a long enough orbit") {
        CHECK_THROWS_AS(rotation_number(System::rotation(0.3), 0.0, 99), std::invalid_argument);
    }
}

TEST_CASE("rational_approx") {
    const auto half = rational_approx(0.5, 10, 1e-9);
    REQUIRE(half.has_value());
    CHECK(*half == Rational(1, 2));

    const auto third = rational_approx(0.333334, 10, 1e-3);
    REQUIRE(third.has_value());
    CHECK(*third == Rational(1, 3));

    CHECK_FALSE(rational_approx(kGolden, 50, 1e-9).has_value());
    CHECK_THROWS_AS(rational_approx(0.5, 0, 1e-9), std::invalid_argument);
}

TEST_CASE("periodic_points") {
    const auto grid = Grid::build(Space::circle(), 1.0 / 64.0);
    SUBCASE("half rotation squared is the identity") {
        const auto res = periodic_points(System::rotation(Rational(1, 2)), 2, grid);
        CHECK(res.mask.count() == grid->size());
        REQUIRE(!res.brackets.empty());
        CHECK(res.brackets.front().flat);
    }
    SUBCASE("irrational rotations have no periodic points") {
        for (int p = 1; p <= 5; ++p) {
            const auto res = periodic_points(System::rotation(kGolden), p, grid);
            CHECK(res.mask.count() == 0);
            CHECK(res.brackets.empty());
        }
    }
    SUBCASE("sine perturbation has fixed points at 0 and 1/2") {
        const auto res = periodic_points(System::sine_circle(0.1), 1, grid);
        REQUIRE(!res.brackets.empty());
        bool near_zero = false, near_half = false;
        for (const auto& b : res.brackets) {
            CHECK(b.hi - b.lo <= 1e-9);  // refined bracket width (1e-10 plus slack)
            const double mid = 0.5 * (b.lo + b.hi);
            if (circle_dist(wrap_unit(mid), 0.0) <= 1e-9) near_zero = true;
            if (circle_dist(wrap_unit(mid), 0.5) <= 1e-9) near_half = true;
        }
        CHECK(near_zero);
        CHECK(near_half);
    }
    SUBCASE("fixed sets of powers are nested") {
        const System sine = System::sine_circle(0.1);
        const auto p1 = periodic_points(sine, 1, grid);
        for (int k : {2, 3}) {
            const auto pk = periodic_points(sine, k, grid);
            CHECK(p1.mask.is_subset_of(pk.mask));
        }
    }
    CHECK_THROWS_AS(periodic_points(System::rotation(0.5), 0, grid), std::invalid_argument);
}

TEST_CASE("wandering_arc_probe") {
    SUBCASE("identity never wanders") {
        CHECK_FALSE(
            wandering_arc_probe(System::rotation(0.0), {{0.1, 0.2}}, 10).has_value());
    }
    SUBCASE("irrational rotations bring arcs back onto themselves") {
        std::vector<Arc> arcs;
        for (int j = 0; j < 8; ++j)
            arcs.push_back({static_cast<double>(j) / 8.0, static_cast<double>(j) / 8.0 + 1.0 / 16.0});
        CHECK_FALSE(wandering_arc_probe(System::rotation(kGolden), arcs, 500).has_value());
        // oracle: some iterate within 500 moves the arc by less than its length
        double best = 1.0;
        for (int k = 1; k <= 500; ++k) best = std::min(best, circle_dist(wrap_unit(k * kGolden), 0.0));
        CHECK(best < 1.0 / 16.0);
    }
    SUBCASE("the blown-up interval of a truncated Denjoy map wanders") {
        const System den = System::denjoy({kGolden, 20, 0.5});
        const auto arc = den.denjoy_wandering_arc();
        REQUIRE(arc.has_value());
        const auto witness = wandering_arc_probe(den, {{arc->first, arc->second}}, 50);
        CHECK(witness.has_value());
    }
    CHECK_THROWS_AS(wandering_arc_probe(System::rotation(0.3), {{0.1, 0.1}}, 5),
                    std::invalid_argument);
}

TEST_CASE("classify_circle") {
    ClassifyParams params;
    SUBCASE("irrational rotation") {
        const auto res = classify_circle(System::rotation(kGolden), params);
        CHECK(res.cls == CircleClass::conjugate_rotation_distal);
        CHECK_FALSE(res.rational.has_value());
    }
    SUBCASE("rational rotation") {
        const auto res = classify_circle(System::rotation(Rational(1, 3)), params);
        CHECK(res.cls == CircleClass::rational_with_periodic_set);
        REQUIRE(res.rational.has_value());
        CHECK(*res.rational == Rational(1, 3));
        REQUIRE(res.periodic.has_value());
        CHECK(res.periodic->mask.count() == res.periodic->mask.size());  // whole circle
    }
    SUBCASE("truncated Denjoy map") {
        const auto res = classify_circle(System::denjoy({kGolden, 20, 0.5}), params);
        CHECK(res.cls == CircleClass::denjoy_like);
        CHECK_FALSE(res.rational.has_value());
        REQUIRE(res.wandering_witness.has_value());
        CHECK(res.witness_disjoint_iterates == 50);
    }
}

TEST_CASE("nonwandering_points") {
    SUBCASE("minimal rotation: everything is non-wandering") {
        const auto grid = Grid::build(Space::circle(), 0.01);
        const auto mask = nonwandering_points(System::rotation(kGolden), grid, 0.02, 60);
        CHECK(mask.count() == grid->size());
    }
    SUBCASE("sqrt interval: only the fixed endpoints remain") {
        const auto grid = Grid::build(Space::interval(), 0.01);
        const auto mask = nonwandering_points(System::sqrt_interval(), grid, 0.02, 60);
        CHECK(mask.test(0));
        CHECK(mask.test(grid->size() - 1));
        // outer approximation at scale r: neighborhoods of the fixed points
        // whose width scales like the square root of r
        for (std::size_t i : mask.indices()) {
            const double x = grid->point(i).as_interval().x;
            CHECK((x <= 0.06 || x >= 0.9));
        }
    }
    SUBCASE("involution: everything returns after two steps") {
        const auto grid = Grid::build(Space::interval(), 0.05);
        const auto mask = nonwandering_points(System::north_south(), grid, 0.05, 2);
        CHECK(mask.count() == grid->size());
    }
    SUBCASE("contains every refined periodic point") {
        const auto grid = Grid::build(Space::circle(), 0.01);
        const System sine = System::sine_circle(0.1);
        const auto mask = nonwandering_points(sine, grid, 0.02, 30);
        for (const auto& b : periodic_points(sine, 1, grid).brackets) {
            const double root = wrap_unit(0.5 * (b.lo + b.hi));
            bool covered = false;
            for (std::size_t i : mask.indices())
                if (circle_dist(grid->point(i).as_circle().t, root) <= 0.02) covered = true;
            CHECK(covered);
        }
    }
}
