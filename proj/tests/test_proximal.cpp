#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proxlab/detail/sweep.hpp"
#include "proxlab/proximal.hpp"

using namespace proxlab;

namespace {
std::mt19937_64 rng(6171);
double urand() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
constexpr double kGolden = 0.6180339887498949;

double sqrt_orbit_oracle(double x, long long n) {
    return std::pow(x, std::exp2(static_cast<double>(-n)));
}

System example_product() {
    return System::product(System::sqrt_interval(), System::rotation(kGolden));
}

std::vector<Point> fiber_samples(double lo, double hi, double step, double circle_t) {
    std::vector<Point> pts;
    for (double t = lo; t <= hi + 1e-12; t += step)
        pts.push_back(Point::product(Point::interval(std::min(t, hi)), Point::circle(circle_t)));
    return pts;
}
}  // namespace

TEST_CASE("prox_gap") {
    SUBCASE("isometries never get closer") {
        const System rot = System::rotation(kGolden);
        for (int i = 0; i < 20; ++i) {
            const Point x = Point::circle(urand()), y = Point::circle(urand());
            const double d = dist(rot.space(), x, y);
            for (int N : {0, 3, 17}) CHECK(prox_gap(rot, x, y, N) == doctest::Approx(d));
        }
    }
    SUBCASE("sqrt interval two-sided minimum") {
        // oracle by closed-form iteration of both endpoints
        const System sq = System::sqrt_interval();
        double oracle = 1.0;
        for (int n = -4; n <= 4; ++n)
            oracle = std::min(oracle, std::fabs(sqrt_orbit_oracle(0.25, n) -
                                                sqrt_orbit_oracle(0.75, n)));
        CHECK(oracle == doctest::Approx(0.0100226).epsilon(1e-4));  // attained at n = -4
        CHECK(prox_gap(sq, Point::interval(0.25), Point::interval(0.75), 4) ==
              doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("shift pair with a single difference") {
        const Point zeros{SeqPoint::periodic("0")};
        const Point one{SeqPoint("0", "1", "0", 0)};
        CHECK(prox_gap(System::shift_map(), zeros, one, 3) == 0.125);
    }
    SUBCASE("nonincreasing in N, symmetric, anchored at the plain distance") {
        const System sq = System::sqrt_interval();
        const Point x = Point::interval(0.31), y = Point::interval(0.62);
        CHECK(prox_gap(sq, x, y, 0) == dist(sq.space(), x, y));
        double prev = prox_gap(sq, x, y, 0);
        for (int N = 1; N <= 20; ++N) {
            const double cur = prox_gap(sq, x, y, N);
            CHECK(cur <= prev + 1e-15);
            CHECK(cur == prox_gap(sq, y, x, N));
            prev = cur;
        }
    }
}

TEST_CASE("proximal_cell") {
    SUBCASE("isometries: cells are exactly metric balls") {
        const System rot = System::rotation(kGolden);
        const auto grid = Grid::build(Space::circle(), 0.01);
        const Point x = grid->point(30);
        for (double eps : {0.004, 0.05}) {
            const SubsetMask cell = proximal_cell(rot, x, *grid, 25, eps);
            for (std::size_t i = 0; i < grid->size(); ++i)
                CHECK(cell.test(i) == (dist(rot.space(), x, grid->point(i)) <= eps));
        }
        const System ns = System::north_south();
        const auto igrid = Grid::build(Space::interval(), 0.01);
        const SubsetMask cell = proximal_cell(ns, Point::interval(0.3), *igrid, 25, 1e-3);
        CHECK(cell.indices() == std::vector<std::size_t>{30});
    }
    SUBCASE("sqrt interval: the whole open interval is proximal to the center") {
        const System sq = System::sqrt_interval();
        const auto grid = Grid::build(Space::interval(), 0.01);
        const SubsetMask cell = proximal_cell(sq, Point::interval(0.5), *grid, 40, 0.01);
        for (std::size_t i = 1; i + 1 < grid->size(); ++i) CHECK(cell.test(i));
    }
    SUBCASE("nested in N and eps") {
        const System sq = System::sqrt_interval();
        const auto grid = Grid::build(Space::interval(), 0.02);
        const Point x = Point::interval(0.42);
        SubsetMask prev = proximal_cell(sq, x, *grid, 2, 1e-3);
        for (int N : {5, 12, 30}) {
            const SubsetMask cur = proximal_cell(sq, x, *grid, N, 1e-3);
            CHECK(prev.is_subset_of(cur));
            prev = cur;
        }
        SubsetMask wide = proximal_cell(sq, x, *grid, 12, 0.05);
        SubsetMask mid = proximal_cell(sq, x, *grid, 12, 0.01);
        SubsetMask tight = proximal_cell(sq, x, *grid, 12, 1e-3);
        CHECK(tight.is_subset_of(mid));
        CHECK(mid.is_subset_of(wide));
    }
    SUBCASE("product cells live inside the product of factor cells") {
        const System prod = System::product(System::sqrt_circle(), System::rotation(kGolden));
        const auto grid = Grid::build(prod.space(), 1.0 / 20.0);
        const auto grid_l = grid->left_grid();
        const auto grid_r = grid->right_grid();
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t c = rng() % grid->size();
            const Point& x = grid->point(c);
            const SubsetMask cell = proximal_cell(prod, x, *grid, 20, 1e-3);
            const SubsetMask cl =
                proximal_cell(prod.factor_left(), x.left(), *grid_l, 20, 1e-3);
            const SubsetMask cr =
                proximal_cell(prod.factor_right(), x.right(), *grid_r, 20, 1e-3);
            for (std::size_t i : cell.indices()) {
                CHECK(cl.test(i / grid_r->size()));
                CHECK(cr.test(i % grid_r->size()));
            }
        }
    }
}

TEST_CASE("power cells embed in longer-horizon cells") {
    const System prod = example_product();
    const auto grid = Grid::build(prod.space(), 1.0 / 25.0);
    for (int k : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t c = rng() % grid->size();
            const SubsetMask power =
                proximal_cell_strided(prod, grid->point(c), *grid, 10, 1e-3, k);
            const SubsetMask base = proximal_cell(prod, grid->point(c), *grid, k * 10, 1e-3);
            CHECK(power.is_subset_of(base));
        }
    }
}

TEST_CASE("dynamic_ball") {
    SUBCASE("isometries: dynamic balls are metric balls") {
        // exact rational rotation so orbit distances are exactly constant
        const System rot = System::rotation(Rational(8, 13));
        const auto grid = Grid::build(Space::circle(), 0.01);
        const Point x = grid->point(12);
        const SubsetMask ball = dynamic_ball(rot, x, *grid, 0.1, 30, BallSide::two_sided);
        for (std::size_t i = 0; i < grid->size(); ++i)
            CHECK(ball.test(i) == (dist(rot.space(), x, grid->point(i)) <= 0.1));
    }
    SUBCASE("identity times cat: balls confined to the identity ball") {
        const System prod = System::product(System::rotation(Rational(0, 1)), System::cat_map());
        const auto grid = Grid::build(prod.space(), 0.1);
        const Point x = grid->point(grid->size() / 2);
        const SubsetMask ball = dynamic_ball(prod, x, *grid, 0.05, 10, BallSide::two_sided);
        for (std::size_t i : ball.indices())
            CHECK(dist(Space::circle(), grid->point(i).left(), x.left()) <= 0.05);
    }
    SUBCASE("sqrt forward ball against the closed-form oracle") {
        const System sq = System::sqrt_interval();
        const auto grid = Grid::build(Space::interval(), 0.01);
        const Point x = Point::interval(0.9);
        const SubsetMask ball = dynamic_ball(sq, x, *grid, 0.2, 40, BallSide::forward);
        CHECK(ball.count() > 20);  // every forward orbit converges to 1
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double y = grid->point(i).as_interval().x;
            double worst = 0.0;
            for (int n = 0; n <= 40; ++n)
                worst = std::max(worst,
                                 std::fabs(sqrt_orbit_oracle(0.9, n) - sqrt_orbit_oracle(y, n)));
            if (std::fabs(worst - 0.2) <= 1e-9) continue;  // knife-edge, rounding decides
            CHECK(ball.test(i) == (worst <= 0.2));
        }
    }
    SUBCASE("forward balls embed in proximal cells") {
        const System sq = System::sqrt_interval();
        const auto grid = Grid::build(Space::interval(), 0.01);
        for (const double c : {0.1, 0.52, 0.97}) {
            const Point x = Point::interval(c);
            const SubsetMask ball = dynamic_ball(sq, x, *grid, 0.05, 20, BallSide::forward);
            const SubsetMask cell = proximal_cell(sq, x, *grid, 40, 0.05);
            CHECK(ball.is_subset_of(cell));
        }
    }
}

TEST_CASE("diam_decay") {
    SUBCASE("isometries keep diameters") {
        // exact rotation and exact points make the trace exactly constant
        const System rot = System::rotation(Rational(8, 13));
        std::vector<Point> arc;
        for (std::int64_t k = 10; k <= 30; k += 2) arc.push_back(Point::circle(Rational(k, 100)));
        const DecayReport rep = diam_decay(rot, arc, 15);
        for (const auto& [n, d] : rep.trace) CHECK(d == rep.trace.front().second);
        CHECK(rep.argmin == 0);  // ties resolve to the smallest |n|
    }
    SUBCASE("sqrt interval collapses the backward images") {
        const System sq = System::sqrt_interval();
        std::vector<Point> seg;
        for (double t = 0.2; t <= 0.8 + 1e-12; t += 0.005)
            seg.push_back(Point::interval(std::min(t, 0.8)));
        const DecayReport rep = diam_decay(sq, seg, 6);
        const double oracle = sqrt_orbit_oracle(0.8, -6) - sqrt_orbit_oracle(0.2, -6);
        CHECK(oracle == doctest::Approx(6.277e-7).epsilon(1e-3));
        CHECK(rep.min_diam == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(rep.argmin == -6);
        CHECK(rep.trace.size() == 13);
    }
    SUBCASE("the product fiber collapses at the same rate") {
        const DecayReport rep = diam_decay(example_product(), fiber_samples(0.2, 0.8, 0.005, 0.3), 6);
        const double oracle = sqrt_orbit_oracle(0.8, -6) - sqrt_orbit_oracle(0.2, -6);
        CHECK(rep.min_diam == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(rep.argmin == -6);
    }
    SUBCASE("exact ties resolve to the smallest |n|") {
        const System ns = System::north_south();  // involution: exact period-2 trace
        std::vector<Point> seg = {Point::interval(Rational(1, 10)),
                                  Point::interval(Rational(2, 10))};
        const DecayReport rep = diam_decay(ns, seg, 3);
        CHECK(rep.argmin == 0);
    }
    SUBCASE("the reported minimum is the minimum of the trace") {
        const DecayReport rep =
            diam_decay(System::sqrt_interval(),
                       std::vector<Point>{Point::interval(0.3), Point::interval(0.6)}, 8);
        double lo = rep.trace.front().second;
        bool found = false;
        for (const auto& [n, d] : rep.trace) {
            lo = std::min(lo, d);
            if (n == rep.argmin) {
                CHECK(d == rep.min_diam);
                found = true;
            }
        }
        CHECK(found);
        CHECK(lo == rep.min_diam);
    }
    CHECK_THROWS_AS(diam_decay(System::north_south(), std::span<const Point>{}, 3),
                    std::invalid_argument);
}

TEST_CASE("inner_distal_certificate") {
    SUBCASE("the interval-times-rotation product is consistent") {
        const System prod = example_product();
        const auto grid = Grid::build(prod.space(), 1.0 / 40.0);
        const CertificateReport rep = inner_distal_certificate(prod, grid, {40, 1e-3, 0.0, 0.0});
        CHECK(rep.verdict == CertificateVerdict::consistent_with_inner_distal);
        CHECK(rep.routes_agree);
        for (const auto& c : rep.per_center) CHECK(c.interior_count == 0);
    }
    SUBCASE("the sqrt interval map is refuted, by both routes") {
        const System sq = System::sqrt_interval();
        const auto grid = Grid::build(Space::interval(), 1.0 / 100.0);
        const CertificateReport rep = inner_distal_certificate(sq, grid, {60, 1e-3, 0.0, 0.0});
        CHECK(rep.verdict == CertificateVerdict::refuted);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.routes_agree);
        CHECK(rep.ball_route.refuting_balls > 0);
        // verdict is REFUTED exactly when some center has interior points
        bool any_interior = false;
        for (const auto& c : rep.per_center) any_interior = any_interior || c.interior_count > 0;
        CHECK(any_interior);
    }
    SUBCASE("minimal rotations are consistent") {
        const System rot = System::rotation(kGolden);
        const auto grid = Grid::build(Space::circle(), 1.0 / 50.0);
        const CertificateReport rep = inner_distal_certificate(rot, grid, {40, 1e-3, 0.0, 0.0});
        CHECK(rep.verdict == CertificateVerdict::consistent_with_inner_distal);
        CHECK(rep.routes_agree);
    }
    SUBCASE("sweep masks match the public per-center operations") {
        const System prod = example_product();
        const auto grid = Grid::build(prod.space(), 1.0 / 15.0);
        detail::SweepEngine engine(prod, grid, -12, 12, 1e-3);
        CHECK(engine.split());
        for (int trial = 0; trial < 8; ++trial) {
            const std::size_t c = rng() % grid->size();
            const SubsetMask via_engine = engine.to_subset(engine.cell(c));
            const SubsetMask direct = proximal_cell(prod, grid->point(c), *grid, 12, 1e-3);
            CHECK(via_engine == direct);
            const SubsetMask interior_engine = engine.to_subset(engine.interior(engine.cell(c), 3.0 * grid->h()));
            const SubsetMask interior_direct = interior_points(direct, 3.0 * grid->h());
            CHECK(interior_engine == interior_direct);
        }
        // dense path: same cross-check on a one-factor system
        const System sq = System::sqrt_interval();
        const auto igrid = Grid::build(sq.space(), 1.0 / 60.0);
        detail::SweepEngine dense(sq, igrid, -20, 20, 1e-3);
        CHECK_FALSE(dense.split());
        for (int trial = 0; trial < 8; ++trial) {
            const std::size_t c = rng() % igrid->size();
            CHECK(dense.to_subset(dense.cell(c)) ==
                  proximal_cell(sq, igrid->point(c), *igrid, 20, 1e-3));
            CHECK(dense.to_subset(dense.ball(c)) ==
                  dynamic_ball(sq, igrid->point(c), *igrid, 1e-3, 20, BallSide::two_sided));
        }
    }
}

TEST_CASE("cw_distal_probe") {
    SUBCASE("isometry arcs keep their diameter") {
        const System rot = System::rotation(kGolden);
        std::vector<std::vector<Point>> continua;
        for (double lo : {0.0, 0.4}) {
            std::vector<Point> arc;
            for (double t = lo; t <= lo + 0.1; t += 0.01) arc.push_back(Point::circle(t));
            continua.push_back(arc);
        }
        const CwDistalReport rep = cw_distal_probe(rot, continua, 30, 0.05);
        CHECK(rep.pass);
    }
    SUBCASE("the product fiber fails") {
        const CwDistalReport rep =
            cw_distal_probe(example_product(), {fiber_samples(0.2, 0.8, 0.01, 0.0)}, 10, 1e-3);
        CHECK_FALSE(rep.pass);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.entries[0].min_diam <=
              1.1 * (sqrt_orbit_oracle(0.8, -6) - sqrt_orbit_oracle(0.2, -6)));
    }
    SUBCASE("north-south segments pass") {
        std::vector<Point> seg;
        for (double t = 0.3; t <= 0.45; t += 0.01) seg.push_back(Point::interval(t));
        CHECK(cw_distal_probe(System::north_south(), {seg}, 20, 0.05).pass);
    }
    SUBCASE("degenerate continua are rejected") {
        CHECK_THROWS_AS(
            cw_distal_probe(System::north_south(), {{Point::interval(0.5)}}, 5, 0.01),
            std::invalid_argument);
    }
}

TEST_CASE("stable_class") {
    SUBCASE("isometries contract nothing") {
        const System rot = System::rotation(kGolden);
        const auto grid = Grid::build(Space::circle(), 0.01);
        const Point x = grid->point(40);
        const SubsetMask mask = stable_class(rot, x, *grid, 40, 0.005);
        for (std::size_t i : mask.indices())
            CHECK(dist(rot.space(), x, grid->point(i)) <= 0.005);
    }
    SUBCASE("sqrt interval: everything except 0 converges together") {
        const System sq = System::sqrt_interval();
        const auto grid = Grid::build(Space::interval(), 0.01);
        const SubsetMask mask = stable_class(sq, Point::interval(0.5), *grid, 40, 0.01);
        CHECK_FALSE(mask.test(0));
        for (std::size_t i = 1; i < grid->size(); ++i) CHECK(mask.test(i));
    }
    SUBCASE("torus example: stable classes are rotation fibers") {
        const System prod = System::product(System::sqrt_circle(), System::rotation(kGolden));
        const auto grid = Grid::build(prod.space(), 1.0 / 25.0);
        // fiber coordinate chosen off the grid so no point sits exactly at
        // distance eps, where rounding would decide membership
        const Point x = Point::product(Point::circle(0.37), Point::circle(0.305));
        const SubsetMask mask = stable_class(prod, x, *grid, 60, 0.1);
        std::size_t fiber = 0, hits = 0, off_hits = 0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const bool in_fiber =
                circle_dist(grid->point(i).right().as_circle().t, 0.305) <= 0.1;
            if (in_fiber) {
                ++fiber;
                if (mask.test(i)) ++hits;
            } else if (mask.test(i)) {
                ++off_hits;
            }
        }
        CHECK(hits == fiber);
        CHECK(off_hits == 0);
    }
}

TEST_CASE("return_times") {
    SUBCASE("fixed point of the involution") {
        const ReturnTimes rt = return_times(System::north_south(), Point::interval(0.5), 0.01, 20);
        CHECK(rt.times.size() == 41);
        CHECK(rt.max_gap == 1);
        CHECK(rt.syndetic_at_horizon);
    }
    SUBCASE("golden rotation returns with bounded gaps") {
        const ReturnTimes rt = return_times(System::rotation(kGolden), Point::circle(0.2), 0.1, 1000);
        CHECK(rt.max_gap <= 13);
        CHECK(rt.syndetic_at_horizon);
        // independent enumeration over the same window
        std::vector<long long> oracle;
        for (long long n = -1000; n <= 1000; ++n)
            if (circle_dist(wrap_unit(static_cast<double>(n) * kGolden), 0.0) < 0.1)
                oracle.push_back(n);
        CHECK(rt.times == oracle);
    }
    SUBCASE("moving sqrt coordinate kills returns") {
        const System prod = System::product(System::sqrt_circle(), System::rotation(kGolden));
        const Point x = Point::product(Point::circle(0.5), Point::circle(0.3));
        const ReturnTimes rt = return_times(prod, x, 0.1, 200);
        CHECK(rt.times == std::vector<long long>{0});
        CHECK_FALSE(rt.syndetic_at_horizon);
    }
}

TEST_CASE("check_homomorphism") {
    const System g = example_product();
    const System f = System::rotation(kGolden);
    const auto grid = Grid::build(g.space(), 1.0 / 10.0);

    const FactorMap pi = FactorMap::project_right(g.space());
    CHECK(check_homomorphism(g, f, pi, grid->points(), 0.0).pass);
    CHECK(check_homomorphism(g, g, FactorMap::identity(g.space()), grid->points(), 0.0).pass);

    // wrong rotation angle: the defect is reported, not hidden
    const auto wrong = check_homomorphism(g, System::rotation(0.25), pi, grid->points(), 1e-9);
    CHECK_FALSE(wrong.pass);
    CHECK(wrong.defect > 0.1);

    // incompatible spaces are rejected outright
    CHECK_THROWS_AS(
        check_homomorphism(g, f, FactorMap::project_left(g.space()), grid->points(), 1e-9),
        std::invalid_argument);
}

TEST_CASE("inner_light_probe") {
    const System g = example_product();
    const double h = 1.0 / 25.0;
    const auto grid_src = Grid::build(g.space(), h);
    const auto grid_circle = Grid::build(Space::circle(), h);
    const FactorMap pi = FactorMap::project_right(g.space());

    std::vector<Point> rect;
    for (double a = 0.3; a <= 0.5 + 1e-12; a += h)
        for (double b = 0.1; b <= 0.3 + 1e-12; b += h)
            rect.push_back(Point::product(Point::interval(std::min(a, 0.5)),
                                          Point::circle(std::min(b, 0.3))));

    SUBCASE("fiber: image singleton, preimage empty interior, no violation") {
        const auto rep = inner_light_probe(pi, {fiber_samples(0.2, 0.8, h, 0.25)}, *grid_circle,
                                           *grid_src, 3.0 * h);
        CHECK_FALSE(rep.violation_found);
        CHECK(rep.entries[0].image_interior_empty);
        CHECK(rep.entries[0].preimage_interior_empty);
    }
    SUBCASE("rectangle: image has interior, vacuously fine") {
        const auto rep = inner_light_probe(pi, {rect}, *grid_circle, *grid_src, 3.0 * h);
        CHECK_FALSE(rep.violation_found);
        CHECK_FALSE(rep.entries[0].image_interior_empty);
        CHECK_FALSE(rep.entries[0].preimage_interior_empty);
    }
    SUBCASE("collapsing the rotation coordinate violates inner-lightness") {
        const FactorMap collapse = FactorMap::collapse_right(g.space(), Point::circle(0.25));
        const auto rep = inner_light_probe(collapse, {rect}, *grid_src, *grid_src, 3.0 * h);
        CHECK(rep.violation_found);
        REQUIRE(rep.witness.has_value());
        CHECK(*rep.witness == 0);
    }
}
