#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proxlab/circle_maps.hpp"
#include "proxlab/system.hpp"

using namespace proxlab;

namespace {
std::mt19937_64 rng(95014);
double urand() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
constexpr double kGolden = 0.6180339887498949;

/// Closed form for the sqrt map iterates, used only as an oracle.
double sqrt_orbit_oracle(double x, long long n) {
    return std::pow(x, std::exp2(static_cast<double>(-n)));
}
}  // namespace

TEST_CASE("apply examples") {
    CHECK(System::north_south().apply(Point::interval(0.3)).as_interval().x ==
          doctest::Approx(0.7));

    const System sq = System::sqrt_interval();
    CHECK(sq.apply(Point::interval(0.25), 1).as_interval().x == doctest::Approx(0.5));
    CHECK(sq.apply(Point::interval(0.25), -1).as_interval().x == doctest::Approx(0.0625));

    const System shift = System::shift_map();
    const Point one{SeqPoint("0", "1", "0", 0)};
    const Point shifted = shift.apply(one, 2);
    CHECK(shifted.as_seq().at(-2) == 1);
    CHECK(dist(Space::binary_seq(), shifted, Point(SeqPoint::periodic("0"))) == 0.25);

    const System cat = System::cat_map();
    const Point half = Point::torus(Rational(1, 2), Rational(1, 2));
    const Point image = cat.apply(half, 1);
    CHECK(image.as_torus().a == Rational(1, 2));
    CHECK(image.as_torus().b == Rational(0, 1));
}

TEST_CASE("apply rejects foreign points") {
    CHECK_THROWS_AS(System::sqrt_interval().apply(Point::circle(0.3)), std::invalid_argument);
}

TEST_CASE("orbit_segment") {
    const System rot = System::rotation(0.25);
    const auto seg = orbit_segment(rot, Point::circle(0.0), 0, 3);
    REQUIRE(seg.size() == 4);
    CHECK(seg[0].as_circle().t == doctest::Approx(0.0));
    CHECK(seg[1].as_circle().t == doctest::Approx(0.25));
    CHECK(seg[2].as_circle().t == doctest::Approx(0.5));
    CHECK(seg[3].as_circle().t == doctest::Approx(0.75));

    const auto ident = orbit_segment(System::identity_interval(), Point::interval(0.42), -3, 3);
    for (const auto& p : ident) CHECK(p.as_interval().x == 0.42);

    const auto sq = orbit_segment(System::sqrt_interval(), Point::interval(0.5), 0, 2);
    CHECK(sq[0].as_interval().x == doctest::Approx(0.5));
    CHECK(sq[1].as_interval().x == doctest::Approx(sqrt_orbit_oracle(0.5, 1)));
    CHECK(sq[2].as_interval().x == doctest::Approx(sqrt_orbit_oracle(0.5, 2)));

    CHECK_THROWS_AS(orbit_segment(rot, Point::circle(0.0), 2, 1), std::invalid_argument);
}

TEST_CASE("orbit_segment agrees with apply on two-sided windows") {
    const System sq = System::sqrt_interval();
    const Point x = Point::interval(0.73);
    const auto seg = orbit_segment(sq, x, -40, 40);
    for (long long n = -40; n <= 40; ++n) {
        const Point direct = sq.apply(x, n);
        CHECK(dist(sq.space(), seg[static_cast<std::size_t>(n + 40)], direct) == 0.0);
    }
    // backward iterates stay sound: they match the closed form, instead of
    // being dragged through the forward orbit of an underflowed value
    CHECK(seg[0].as_interval().x == doctest::Approx(sqrt_orbit_oracle(0.73, -40)).epsilon(1e-6));
}

TEST_CASE("north-south involution and isometry") {
    const System ns = System::north_south();
    // exact on exact interval representations (grids produce these)
    for (int i = 0; i < 100; ++i) {
        const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 997);
        const Point x = Point::interval(Rational(static_cast<std::int64_t>(rng() % (den + 1)), den));
        const Point y = Point::interval(Rational(static_cast<std::int64_t>(rng() % (den + 1)), den));
        CHECK(dist(ns.space(), ns.apply(x), ns.apply(y)) == dist(ns.space(), x, y));
        CHECK(ns.apply(x, 2) == x);
    }
    // plain doubles round-trip to within an ulp
    for (int i = 0; i < 100; ++i) {
        const Point x = Point::interval(urand()), y = Point::interval(urand());
        CHECK(dist(ns.space(), ns.apply(x), ns.apply(y)) ==
              doctest::Approx(dist(ns.space(), x, y)).epsilon(1e-14));
        CHECK(std::fabs(ns.apply(x, 2).as_interval().x - x.as_interval().x) <= 1e-15);
    }
}

TEST_CASE("rotation is an isometry for all iterates") {
    const System rot = System::rotation(kGolden);
    for (int i = 0; i < 50; ++i) {
        const Point x = Point::circle(urand()), y = Point::circle(urand());
        const double d0 = dist(rot.space(), x, y);
        for (long long n : {-17, -3, 1, 5, 29})
            CHECK(dist(rot.space(), rot.apply(x, n), rot.apply(y, n)) ==
                  doctest::Approx(d0).epsilon(1e-12));
    }
}

TEST_CASE("sqrt interval fixes the endpoints and funnels the interior") {
    const System sq = System::sqrt_interval();
    CHECK(sq.apply(Point::interval(0.0)).as_interval().x == 0.0);
    CHECK(sq.apply(Point::interval(1.0)).as_interval().x == 1.0);
    for (double x : {0.05, 0.3, 0.62, 0.97}) {
        CHECK(std::fabs(sq.apply(Point::interval(x), 40).as_interval().x - 1.0) <= 1e-6);
        CHECK(std::fabs(sq.apply(Point::interval(x), -40).as_interval().x - 0.0) <= 1e-6);
        double prev = x;
        for (int n = 1; n <= 40; ++n) {  // forward orbit is monotone increasing
            const double cur = sq.apply(Point::interval(x), n).as_interval().x;
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("products act componentwise") {
    const System prod = System::product(System::sqrt_interval(), System::rotation(kGolden));
    for (int i = 0; i < 20; ++i) {
        const Point x = Point::product(Point::interval(urand()), Point::circle(urand()));
        for (long long n : {-7, -1, 0, 3, 11}) {
            const Point y = prod.apply(x, n);
            CHECK(y.left() == prod.factor_left().apply(x.left(), n));
            CHECK(y.right() == prod.factor_right().apply(x.right(), n));
        }
    }
}

TEST_CASE("shift scales the metric by at most two each way") {
    const System shift = System::shift_map();
    for (int i = 0; i < 200; ++i) {
        const auto word = [&](bool allow_empty) {
            const std::size_t len = (allow_empty ? 0 : 1) + rng() % 4;
            std::string w;
            for (std::size_t k = 0; k < len; ++k) w.push_back(rng() % 2 ? '1' : '0');
            return w;
        };
        const Point x{SeqPoint(word(false), word(true), word(false),
                               static_cast<long long>(rng() % 7) - 3)};
        const Point y{SeqPoint(word(false), word(true), word(false),
                               static_cast<long long>(rng() % 7) - 3)};
        const double d = dist(shift.space(), x, y);
        const double ds = dist(shift.space(), shift.apply(x), shift.apply(y));
        if (d == 0.0) {
            CHECK(ds == 0.0);
        } else {
            CHECK(ds <= 2.0 * d);
            CHECK(ds >= 0.5 * d);
            CHECK((ds == 2.0 * d || ds == 0.5 * d || ds == d));
        }
    }
}

TEST_CASE("check_homeo") {
    const System shift = System::shift_map();
    std::vector<Point> seq_samples;
    for (int i = 0; i < 20; ++i)
        seq_samples.push_back(Point(SeqPoint("01", i % 2 ? "1" : "", "10", i % 5 - 2)));
    CHECK(check_homeo(shift, seq_samples, 0.0).pass);

    const System cat = System::cat_map();
    std::vector<Point> torus_samples;
    for (int i = 0; i < 50; ++i)
        torus_samples.push_back(Point::torus(Rational(static_cast<std::int64_t>(rng() % 97), 97),
                                             Rational(static_cast<std::int64_t>(rng() % 89), 89)));
    CHECK(check_homeo(cat, torus_samples, 0.0).pass);

    const System sq = System::sqrt_interval();
    std::vector<Point> interval_samples;
    for (int i = 0; i < 100; ++i) interval_samples.push_back(Point::interval(urand()));
    CHECK(check_homeo(sq, interval_samples, 1e-12).pass);

    // rational rotations round-trip exactly on exact circle points
    const System rot = System::rotation(Rational(1, 3));
    CHECK(rot.exact());
    std::vector<Point> exact_samples;
    for (std::int64_t k = 0; k < 20; ++k) exact_samples.push_back(Point::circle(Rational(k, 20)));
    CHECK(check_homeo(rot, exact_samples, 0.0).pass);

    const System sine = System::sine_circle(0.1);
    std::vector<Point> circ_samples;
    for (int i = 0; i < 100; ++i) circ_samples.push_back(Point::circle(urand()));
    CHECK(check_homeo(sine, circ_samples, 1e-9).pass);
}

TEST_CASE("exact systems round-trip exactly") {
    const System prod = System::product(System::rotation(Rational(2, 5)), System::cat_map());
    CHECK(prod.exact());
    for (int i = 0; i < 30; ++i) {
        const Point x = Point::product(
            Point::circle(Rational(static_cast<std::int64_t>(rng() % 40), 40)),
            Point::torus(Rational(static_cast<std::int64_t>(rng() % 50), 50),
                         Rational(static_cast<std::int64_t>(rng() % 50), 50)));
        const long long n = static_cast<long long>(rng() % 30) + 1;
        CHECK(prod.apply(prod.apply(x, n), -n) == x);
    }
    CHECK_FALSE(System::sqrt_interval().exact());
    CHECK_FALSE(System::rotation(kGolden).exact());
}

TEST_CASE("denjoy construction") {
    DenjoyParams params{kGolden, 20, 0.5};
    CHECK(params.truncation_error() == doctest::Approx(0.5 * std::ldexp(1.0, -19) / 3.0));
    CHECK_THROWS_AS((DenjoyParams{kGolden, 0, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((DenjoyParams{kGolden, 5, 1.5}).validate(), std::invalid_argument);

    const System den = System::denjoy(params);
    const auto arc = den.denjoy_wandering_arc();
    REQUIRE(arc.has_value());
    const double lo = arc->first, hi = arc->second;
    CHECK(hi > lo);

    SUBCASE("blown intervals map affinely") {
        const double mid = 0.5 * (lo + hi);
        const double f_lo = den.apply(Point::circle(lo)).as_circle().t;
        const double f_hi = den.apply(Point::circle(hi)).as_circle().t;
        const double f_mid = den.apply(Point::circle(mid)).as_circle().t;
        CHECK(f_mid == doctest::Approx(0.5 * (f_lo + f_hi)).epsilon(1e-12));
        CHECK(denjoy_eval(params, lo) == f_lo);
    }

    SUBCASE("homeomorphism round trip") {
        std::vector<Point> samples;
        for (int i = 0; i < 200; ++i) samples.push_back(Point::circle(urand()));
        CHECK(check_homeo(den, samples, 1e-9).pass);
    }

    SUBCASE("monotone degree one") {
        double prev = den.apply(Point::circle(0.0)).as_circle().t;
        double lift = prev;
        for (int k = 1; k < 2000; ++k) {
            const double t = static_cast<double>(k) / 2000.0;
            double v = den.apply(Point::circle(t)).as_circle().t;
            while (v < prev - 0.5) v += 1.0;  // unwrap
            CHECK(v >= prev - 1e-12);
            lift = v;
            prev = v;
        }
        CHECK(lift - den.apply(Point::circle(0.0)).as_circle().t < 1.0 + 1e-9);
    }

    SUBCASE("rotation number stays near alpha") {
        const auto est = rotation_number(den, 0.123, 100000);
        CHECK(std::fabs(est.rho - kGolden) <= 10.0 / 100000.0 + params.truncation_error());
    }

    SUBCASE("the blown interval wanders for 50 iterates") {
        const auto witness = wandering_arc_probe(den, {{lo, hi}}, 50);
        REQUIRE(witness.has_value());
        CHECK(witness->lo == lo);
    }
}

TEST_CASE("conjugated rotations stay circle homeomorphisms") {
    const System conj = System::conjugate(System::rotation(kGolden), 0.1);
    std::vector<Point> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(Point::circle(urand()));
    CHECK(check_homeo(conj, samples, 1e-9).pass);
    CHECK_THROWS_AS(System::conjugate(System::rotation(0.3), 0.2), std::invalid_argument);
    CHECK_THROWS_AS(System::sine_circle(0.5), std::invalid_argument);
}
