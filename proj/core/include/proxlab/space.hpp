#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "proxlab/rational.hpp"
#include "proxlab/seqpoint.hpp"

namespace proxlab {

class Point;

/// One of the compact metric spaces in the catalogue. Products nest, so e.g.
/// the three-torus of the identity-times-Anosov example is
/// product(circle, torus). Product spaces carry the max metric.
class Space {
  public:
    enum class Kind { circle, interval, torus, binary_seq, product };

    static Space circle() { return Space(Kind::circle); }
    static Space interval() { return Space(Kind::interval); }
    static Space torus() { return Space(Kind::torus); }
    static Space binary_seq() { return Space(Kind::binary_seq); }
    static Space product(Space left, Space right);

    Kind kind() const { return kind_; }
    const Space& left() const;
    const Space& right() const;

    bool operator==(const Space& o) const;
    bool operator!=(const Space& o) const { return !(*this == o); }

    std::string str() const;

    /// Checks that a point's variant tree matches this space's kind tree.
    bool contains(const Point& p) const;

  private:
    explicit Space(Kind k) : kind_(k) {}
    Kind kind_;
    std::shared_ptr<const std::pair<Space, Space>> children_;
};

/// Circle coordinate in [0,1). Points produced by exact rational arithmetic
/// (rational rotations, grids) carry their rational value so orbits of such
/// points can stay drift-free; the double is always the rounded canonical
/// value and is what equality and ordering use.
struct CirclePt {
    double t = 0.0;
    std::optional<Rational> exact;

    CirclePt() = default;
    explicit CirclePt(double v);
    explicit CirclePt(const Rational& r) : t(r.mod1().to_double()), exact(r.mod1()) {}
};

struct IntervalPt {
    double x = 0.0;
    std::optional<Rational> exact;

    IntervalPt() = default;
    explicit IntervalPt(double v);
    explicit IntervalPt(const Rational& r);
};

struct TorusPt {
    Rational a, b;  // both reduced, in [0,1)
    TorusPt() = default;
    TorusPt(Rational p, Rational q) : a(p.mod1()), b(q.mod1()) {}
};

/// A point of one of the catalogue spaces; a tagged value tree mirroring the
/// space tree.
class Point {
  public:
    Point(CirclePt p) : rep_(p) {}
    Point(IntervalPt p) : rep_(p) {}
    Point(TorusPt p) : rep_(p) {}
    Point(SeqPoint p) : rep_(std::move(p)) {}

    static Point circle(double t) { return Point(CirclePt(t)); }
    static Point circle(const Rational& r) { return Point(CirclePt(r)); }
    static Point interval(double x) { return Point(IntervalPt(x)); }
    static Point interval(const Rational& r) { return Point(IntervalPt(r)); }
    static Point torus(const Rational& a, const Rational& b) { return Point(TorusPt(a, b)); }
    static Point product(Point left, Point right);

    Space::Kind kind() const;
    const CirclePt& as_circle() const;
    const IntervalPt& as_interval() const;
    const TorusPt& as_torus() const;
    const SeqPoint& as_seq() const;
    const Point& left() const;
    const Point& right() const;

    bool operator==(const Point& o) const;
    bool operator!=(const Point& o) const { return !(*this == o); }
    bool operator<(const Point& o) const;  // canonical order for sorting/dedup

    std::string str() const;

  private:
    struct ProductPt {
        std::shared_ptr<const Point> left, right;
    };
    using Rep = std::variant<CirclePt, IntervalPt, TorusPt, SeqPoint, ProductPt>;
    explicit Point(Rep r) : rep_(std::move(r)) {}
    Rep rep_;
};

/// Metric of the given space. Circle: arc distance on [0,1) coordinates.
/// Interval: |x-y|. Torus and products: max of component distances.
/// Binary sequences: 2^-m with m the first disagreement index.
/// Throws std::invalid_argument if a point does not belong to the space.
double dist(const Space& space, const Point& x, const Point& y);

/// Exact rational distance where the representation allows it (torus points,
/// and products whose factors all support it). nullopt otherwise.
std::optional<Rational> dist_exact(const Space& space, const Point& x, const Point& y);

/// Maximum pairwise distance of a nonempty sample.
double diam(const Space& space, std::span<const Point> pts);

/// Hausdorff distance between two nonempty finite point sets.
double hausdorff(const Space& space, std::span<const Point> a, std::span<const Point> b);

double circle_dist(double s, double t);
double wrap_unit(double t);  // reduce to [0,1)

/// Number of scalar axes of a flattenable space (everything but binary_seq).
std::size_t axis_count(const Space& space);

/// Per-axis wrap flags, 1 for circular axes. Throws for binary sequences.
std::vector<std::uint8_t> metric_axes(const Space& space);

/// Writes the point's coordinates into out[0..axis_count). Torus coordinates
/// are rounded to double here; orbits should be iterated on the exact
/// representations and flattened per step.
void flatten_coords(const Space& space, const Point& p, double* out);

}  // namespace proxlab
