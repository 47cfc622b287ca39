#include "proxlab/system.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "proxlab/detail/denjoy_tables.hpp"

namespace proxlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sine_warp(double t, double a) { return wrap_unit(t + a * std::sin(kTwoPi * t)); }

/// Inverse of t -> t + a*sin(2*pi*t) on the circle; the solution lies in
/// [t - |a|, t + |a|] on the lift and bisection keeps it deterministic.
double sine_warp_inverse(double t, double a) {
    double lo = t - std::fabs(a);
    double hi = t + std::fabs(a);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid + a * std::sin(kTwoPi * mid) < t)
            lo = mid;
        else
            hi = mid;
    }
    return wrap_unit(0.5 * (lo + hi));
}

std::string trim_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

double DenjoyParams::truncation_error() const {
    return c * std::ldexp(1.0, 1 - K) / 3.0;
}

void DenjoyParams::validate() const {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("denjoy: c must be in (0,1)");
    if (K < 1) throw std::invalid_argument("denjoy: K must be >= 1");
}

System System::rotation(double alpha) {
    return System(Space::circle(), RotationK{wrap_unit(alpha), std::nullopt}, false,
                  "rotation(" + trim_double(wrap_unit(alpha)) + ")");
}

System System::rotation(const Rational& alpha) {
    const Rational a = alpha.mod1();
    return System(Space::circle(), RotationK{a.to_double(), a}, true, "rotation(" + a.str() + ")");
}

System System::identity_interval() {
    return System(Space::interval(), IdentityIntervalK{}, true, "identity_interval");
}

System System::north_south() {
    return System(Space::interval(), NorthSouthK{}, true, "north_south");
}

System System::sqrt_interval() {
    return System(Space::interval(), SqrtIntervalK{}, false, "sqrt_interval");
}

System System::sqrt_circle() {
    return System(Space::circle(), SqrtCircleK{}, false, "sqrt_circle");
}

System System::cat_map() {
    return System(Space::torus(), CatMapK{}, true, "cat_map");
}

System System::shift_map() {
    return System(Space::binary_seq(), ShiftK{}, true, "shift");
}

System System::denjoy(const DenjoyParams& params) {
    params.validate();
    auto tables = std::make_shared<const detail::DenjoyTables>(params);
    std::ostringstream id;
    id << "denjoy(alpha=" << trim_double(params.alpha) << ",K=" << params.K << ",c="
       << trim_double(params.c) << ")";
    return System(Space::circle(), DenjoyK{params, std::move(tables)}, false, id.str());
}

System System::sine_circle(double a) {
    if (std::fabs(a) * kTwoPi >= 1.0)
        throw std::invalid_argument("sine_circle: |a| must be below 1/(2*pi)");
    return System(Space::circle(), SineCircleK{a}, false, "sine_circle(" + trim_double(a) + ")");
}

System System::product(System f, System g) {
    Space s = Space::product(f.space(), g.space());
    const bool exact = f.exact() && g.exact();
    std::string id = "product(" + f.id() + "," + g.id() + ")";
    ProductK kind{std::make_shared<const System>(std::move(f)),
                  std::make_shared<const System>(std::move(g))};
    return System(std::move(s), std::move(kind), exact, std::move(id));
}

System System::conjugate(System base, double warp_a) {
    if (base.space().kind() != Space::Kind::circle)
        throw std::invalid_argument("conjugate: base must be a circle system");
    if (std::fabs(warp_a) * kTwoPi >= 1.0)
        throw std::invalid_argument("conjugate: |a| must be below 1/(2*pi)");
    std::string id = "conjugate(" + base.id() + ",a=" + trim_double(warp_a) + ")";
    ConjugateK kind{std::make_shared<const System>(std::move(base)), warp_a};
    return System(Space::circle(), std::move(kind), false, std::move(id));
}

bool System::is_product() const { return std::holds_alternative<ProductK>(kind_); }

const System& System::factor_left() const {
    if (auto* p = std::get_if<ProductK>(&kind_)) return *p->f;
    throw std::logic_error("factor_left on non-product system");
}

const System& System::factor_right() const {
    if (auto* p = std::get_if<ProductK>(&kind_)) return *p->g;
    throw std::logic_error("factor_right on non-product system");
}

std::optional<Rational> System::rotation_angle_exact() const {
    if (auto* p = std::get_if<RotationK>(&kind_)) return p->exact;
    return std::nullopt;
}

std::optional<std::pair<double, double>> System::denjoy_wandering_arc() const {
    if (auto* p = std::get_if<DenjoyK>(&kind_))
        return std::make_pair(p->tables->wandering_lo, p->tables->wandering_hi);
    return std::nullopt;
}

const DenjoyParams* System::denjoy_params() const {
    if (auto* p = std::get_if<DenjoyK>(&kind_)) return &p->params;
    return nullptr;
}

Point System::step(const Point& x, bool forward) const {
    if (!space_.contains(x)) throw std::invalid_argument("point does not belong to system space");
    return std::visit(
        [&](const auto& k) -> Point {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, RotationK>) {
                const auto& c = x.as_circle();
                if (k.exact && c.exact) {
                    const Rational next = forward ? (*c.exact + *k.exact).mod1()
                                                  : (*c.exact - *k.exact).mod1();
                    return Point::circle(next);
                }
                return Point::circle(wrap_unit(forward ? c.t + k.alpha : c.t - k.alpha));
            } else if constexpr (std::is_same_v<K, IdentityIntervalK>) {
                return x;
            } else if constexpr (std::is_same_v<K, NorthSouthK>) {
                const auto& ip = x.as_interval();
                if (ip.exact) return Point::interval(Rational(1, 1) - *ip.exact);
                return Point::interval(1.0 - ip.x);
            } else if constexpr (std::is_same_v<K, SqrtIntervalK>) {
                const double v = x.as_interval().x;
                return Point::interval(forward ? std::sqrt(v) : v * v);
            } else if constexpr (std::is_same_v<K, SqrtCircleK>) {
                const double v = x.as_circle().t;
                return Point::circle(forward ? std::sqrt(v) : v * v);
            } else if constexpr (std::is_same_v<K, CatMapK>) {
                const auto& tp = x.as_torus();
                if (forward) return Point::torus(tp.a * 2 + tp.b, tp.a + tp.b);
                return Point::torus(tp.a - tp.b, tp.b * 2 - tp.a);
            } else if constexpr (std::is_same_v<K, ShiftK>) {
                return Point(x.as_seq().shifted(forward ? 1 : -1));
            } else if constexpr (std::is_same_v<K, DenjoyK>) {
                const double v = x.as_circle().t;
                return Point::circle(forward ? k.tables->forward.eval(v)
                                             : k.tables->backward.eval(v));
            } else if constexpr (std::is_same_v<K, SineCircleK>) {
                const double v = x.as_circle().t;
                return Point::circle(forward ? sine_warp(v, k.a) : sine_warp_inverse(v, k.a));
            } else if constexpr (std::is_same_v<K, ProductK>) {
                return Point::product(k.f->step(x.left(), forward), k.g->step(x.right(), forward));
            } else {
                static_assert(std::is_same_v<K, ConjugateK>);
                const double v = x.as_circle().t;
                const double pre = sine_warp_inverse(v, k.a);
                const Point mid = k.base->step(Point::circle(pre), forward);
                return Point::circle(sine_warp(mid.as_circle().t, k.a));
            }
        },
        kind_);
}

Point System::apply(const Point& x, long long n) const {
    Point cur = x;
    const bool forward = n >= 0;
    for (long long i = 0; i < std::llabs(n); ++i) cur = step(cur, forward);
    return cur;
}

double System::circle_forward(double t) const {
    if (space_.kind() != Space::Kind::circle)
        throw std::invalid_argument("circle_forward on non-circle system");
    return apply(Point::circle(t), 1).as_circle().t;
}

std::vector<Point> orbit_segment(const System& system, const Point& x, long long nmin,
                                 long long nmax) {
    if (nmin > nmax) throw std::invalid_argument("orbit_segment: nmin > nmax");
    // One application per step, walking away from x in each direction so
    // backward iterates of contracting maps are not routed through underflow.
    std::vector<Point> out(static_cast<std::size_t>(nmax - nmin + 1), x);
    if (nmax >= 0) {
        Point cur = x;
        for (long long n = 1; n <= nmax; ++n) {
            cur = system.apply(cur, 1);
            if (n >= nmin) out[static_cast<std::size_t>(n - nmin)] = cur;
        }
    }
    if (nmin < 0) {
        Point cur = x;
        for (long long n = -1; n >= nmin; --n) {
            cur = system.apply(cur, -1);
            if (n <= nmax) out[static_cast<std::size_t>(n - nmin)] = cur;
        }
    }
    return out;
}

HomeoDefect check_homeo(const System& system, std::span<const Point> samples, double tol) {
    HomeoDefect d;
    for (const auto& x : samples) {
        const Point fb = system.apply(system.apply(x, -1), 1);
        const Point bf = system.apply(system.apply(x, 1), -1);
        d.forward_after_backward = std::max(d.forward_after_backward, dist(system.space(), fb, x));
        d.backward_after_forward = std::max(d.backward_after_forward, dist(system.space(), bf, x));
    }
    d.pass = d.max() <= tol;
    return d;
}

double denjoy_eval(const DenjoyParams& params, double t) {
    const detail::DenjoyTables tables(params);
    return tables.forward.eval(wrap_unit(t));
}

}  // namespace proxlab
