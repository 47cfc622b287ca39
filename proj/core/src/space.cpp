#include "proxlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace proxlab {

double wrap_unit(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r -= 1.0;  // t slightly below an integer can round up
    if (r < 0.0) r = 0.0;
    return r;
}

double circle_dist(double s, double t) {
    const double d = std::fabs(s - t);
    return std::min(d, 1.0 - d);
}

CirclePt::CirclePt(double v) : t(wrap_unit(v)) {}

IntervalPt::IntervalPt(double v) : x(v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("interval coordinate outside [0,1]");
}

IntervalPt::IntervalPt(const Rational& r) : x(r.to_double()), exact(r) {
    if (r.num < 0 || r.den < r.num)
        throw std::invalid_argument("interval coordinate outside [0,1]");
}

Space Space::product(Space left, Space right) {
    Space s(Kind::product);
    s.children_ = std::make_shared<const std::pair<Space, Space>>(std::move(left), std::move(right));
    return s;
}

const Space& Space::left() const {
    if (kind_ != Kind::product) throw std::logic_error("left() on non-product space");
    return children_->first;
}

const Space& Space::right() const {
    if (kind_ != Kind::product) throw std::logic_error("right() on non-product space");
    return children_->second;
}

bool Space::operator==(const Space& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ != Kind::product) return true;
    return left() == o.left() && right() == o.right();
}

std::string Space::str() const {
    switch (kind_) {
        case Kind::circle: return "circle";
        case Kind::interval: return "interval";
        case Kind::torus: return "torus";
        case Kind::binary_seq: return "binary_seq";
        case Kind::product: return "(" + left().str() + " x " + right().str() + ")";
    }
    return "?";
}

bool Space::contains(const Point& p) const {
    if (p.kind() != kind_) return false;
    if (kind_ != Kind::product) return true;
    return left().contains(p.left()) && right().contains(p.right());
}

Point Point::product(Point left, Point right) {
    ProductPt pp{std::make_shared<const Point>(std::move(left)),
                 std::make_shared<const Point>(std::move(right))};
    return Point(Rep(std::move(pp)));
}

Space::Kind Point::kind() const {
    switch (rep_.index()) {
        case 0: return Space::Kind::circle;
        case 1: return Space::Kind::interval;
        case 2: return Space::Kind::torus;
        case 3: return Space::Kind::binary_seq;
        default: return Space::Kind::product;
    }
}

const CirclePt& Point::as_circle() const {
    if (auto* p = std::get_if<CirclePt>(&rep_)) return *p;
    throw std::invalid_argument("point is not a circle point");
}

const IntervalPt& Point::as_interval() const {
    if (auto* p = std::get_if<IntervalPt>(&rep_)) return *p;
    throw std::invalid_argument("point is not an interval point");
}

const TorusPt& Point::as_torus() const {
    if (auto* p = std::get_if<TorusPt>(&rep_)) return *p;
    throw std::invalid_argument("point is not a torus point");
}

const SeqPoint& Point::as_seq() const {
    if (auto* p = std::get_if<SeqPoint>(&rep_)) return *p;
    throw std::invalid_argument("point is not a binary sequence point");
}

const Point& Point::left() const {
    if (auto* p = std::get_if<ProductPt>(&rep_)) return *p->left;
    throw std::invalid_argument("point is not a product point");
}

const Point& Point::right() const {
    if (auto* p = std::get_if<ProductPt>(&rep_)) return *p->right;
    throw std::invalid_argument("point is not a product point");
}

bool Point::operator==(const Point& o) const {
    if (rep_.index() != o.rep_.index()) return false;
    switch (rep_.index()) {
        case 0: return as_circle().t == o.as_circle().t;
        case 1: return as_interval().x == o.as_interval().x;
        case 2: {
            const auto& a = as_torus();
            const auto& b = o.as_torus();
            return a.a == b.a && a.b == b.b;
        }
        case 3: return as_seq() == o.as_seq();
        default: return left() == o.left() && right() == o.right();
    }
}

bool Point::operator<(const Point& o) const {
    if (rep_.index() != o.rep_.index()) return rep_.index() < o.rep_.index();
    switch (rep_.index()) {
        case 0: return as_circle().t < o.as_circle().t;
        case 1: return as_interval().x < o.as_interval().x;
        case 2: {
            const auto& a = as_torus();
            const auto& b = o.as_torus();
            if (a.a != b.a) return a.a < b.a;
            return a.b < b.b;
        }
        case 3: return as_seq() < o.as_seq();
        default:
            if (left() != o.left()) return left() < o.left();
            return right() < o.right();
    }
}

std::string Point::str() const {
    switch (rep_.index()) {
        case 0: return std::to_string(as_circle().t);
        case 1: return std::to_string(as_interval().x);
        case 2: return "(" + as_torus().a.str() + "," + as_torus().b.str() + ")";
        case 3: {
            const auto& s = as_seq();
            return s.left_period() + "|" + s.core() + "|" + s.right_period() + "@" +
                   std::to_string(s.origin());
        }
        default: return "(" + left().str() + "," + right().str() + ")";
    }
}

double dist(const Space& space, const Point& x, const Point& y) {
    if (!space.contains(x) || !space.contains(y))
        throw std::invalid_argument("point does not belong to the space");
    switch (space.kind()) {
        case Space::Kind::circle: {
            const auto& a = x.as_circle();
            const auto& b = y.as_circle();
            if (a.exact && b.exact) return circle_dist_rational(*a.exact, *b.exact).to_double();
            return circle_dist(a.t, b.t);
        }
        case Space::Kind::interval: {
            const auto& a = x.as_interval();
            const auto& b = y.as_interval();
            if (a.exact && b.exact) return (*a.exact - *b.exact).abs().to_double();
            return std::fabs(a.x - b.x);
        }
        case Space::Kind::torus: {
            const auto& a = x.as_torus();
            const auto& b = y.as_torus();
            return std::max(circle_dist_rational(a.a, b.a).to_double(),
                            circle_dist_rational(a.b, b.b).to_double());
        }
        case Space::Kind::binary_seq: return SeqPoint::dist(x.as_seq(), y.as_seq());
        case Space::Kind::product:
            return std::max(dist(space.left(), x.left(), y.left()),
                            dist(space.right(), x.right(), y.right()));
    }
    return 0.0;
}

std::optional<Rational> dist_exact(const Space& space, const Point& x, const Point& y) {
    switch (space.kind()) {
        case Space::Kind::torus: {
            const auto& a = x.as_torus();
            const auto& b = y.as_torus();
            return max(circle_dist_rational(a.a, b.a), circle_dist_rational(a.b, b.b));
        }
        case Space::Kind::circle: {
            const auto& a = x.as_circle();
            const auto& b = y.as_circle();
            if (a.exact && b.exact) return circle_dist_rational(*a.exact, *b.exact);
            return std::nullopt;
        }
        case Space::Kind::interval: {
            const auto& a = x.as_interval();
            const auto& b = y.as_interval();
            if (a.exact && b.exact) return (*a.exact - *b.exact).abs();
            return std::nullopt;
        }
        case Space::Kind::product: {
            const auto l = dist_exact(space.left(), x.left(), y.left());
            if (!l) return std::nullopt;
            const auto r = dist_exact(space.right(), x.right(), y.right());
            if (!r) return std::nullopt;
            return max(*l, *r);
        }
        default: return std::nullopt;
    }
}

double diam(const Space& space, std::span<const Point> pts) {
    if (pts.empty()) throw std::invalid_argument("diam of empty point set");
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, dist(space, pts[i], pts[j]));
    return best;
}

std::size_t axis_count(const Space& space) {
    switch (space.kind()) {
        case Space::Kind::circle:
        case Space::Kind::interval: return 1;
        case Space::Kind::torus: return 2;
        case Space::Kind::product: return axis_count(space.left()) + axis_count(space.right());
        default: throw std::invalid_argument("binary sequence space has no coordinate axes");
    }
}

std::vector<std::uint8_t> metric_axes(const Space& space) {
    std::vector<std::uint8_t> axes;
    const auto walk = [&](const auto& self, const Space& s) -> void {
        switch (s.kind()) {
            case Space::Kind::circle: axes.push_back(1); return;
            case Space::Kind::interval: axes.push_back(0); return;
            case Space::Kind::torus:
                axes.push_back(1);
                axes.push_back(1);
                return;
            case Space::Kind::product:
                self(self, s.left());
                self(self, s.right());
                return;
            default: throw std::invalid_argument("binary sequence space has no coordinate axes");
        }
    };
    walk(walk, space);
    return axes;
}

void flatten_coords(const Space& space, const Point& p, double* out) {
    switch (space.kind()) {
        case Space::Kind::circle: out[0] = p.as_circle().t; return;
        case Space::Kind::interval: out[0] = p.as_interval().x; return;
        case Space::Kind::torus:
            out[0] = p.as_torus().a.to_double();
            out[1] = p.as_torus().b.to_double();
            return;
        case Space::Kind::product:
            flatten_coords(space.left(), p.left(), out);
            flatten_coords(space.right(), p.right(), out + axis_count(space.left()));
            return;
        default: throw std::invalid_argument("binary sequence points cannot be flattened");
    }
}

double hausdorff(const Space& space, std::span<const Point> a, std::span<const Point> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff of empty point set");
    double h = 0.0;
    const auto directed = [&](std::span<const Point> from, std::span<const Point> to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& q : to) nearest = std::min(nearest, dist(space, p, q));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    h = std::max(directed(a, b), directed(b, a));
    return h;
}

}  // namespace proxlab
