#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "proxlab/space.hpp"

namespace proxlab {

/// Parameters of the truncated Denjoy-style circle homeomorphism: the orbit
/// {n*alpha mod 1 : |n| <= K} of the rotation is blown up into intervals of
/// length c * 2^-|n| / 3 (normalized). The map carries each blown interval
/// affinely onto the next one; the last interval lands on a short arc centered
/// at the image point the untruncated construction would blow up, so the map
/// stays a genuine piecewise affine homeomorphism. The deviation from the
/// untruncated construction is bounded by truncation_error().
struct DenjoyParams {
    double alpha = 0.0;
    int K = 1;
    double c = 0.5;

    double truncation_error() const;
    void validate() const;
};

namespace detail {
struct DenjoyTables;
}

/// An invertible map of one of the catalogue spaces, evaluable forward and
/// backward for any integer power. `exact()` promises drift-free round trips
/// on exact point representations (sequence points, rational torus points,
/// rational circle points under rational rotations).
class System {
  public:
    static System rotation(double alpha);
    static System rotation(const Rational& alpha);
    static System identity_interval();
    static System north_south();
    static System sqrt_interval();
    static System sqrt_circle();
    static System cat_map();
    static System shift_map();
    static System denjoy(const DenjoyParams& params);
    static System sine_circle(double a);  // lift t + a*sin(2*pi*t), needs |a| < 1/(2*pi)
    static System product(System f, System g);
    static System conjugate(System base, double warp_a);  // warp t + a*sin(2*pi*t)

    const Space& space() const { return space_; }
    bool exact() const { return exact_; }
    const std::string& id() const { return id_; }

    /// f^n(x); n may be negative. Computed by |n| single map applications.
    Point apply(const Point& x, long long n = 1) const;

    bool is_product() const;
    const System& factor_left() const;
    const System& factor_right() const;

    /// Rational rotation angle when this is a rotation given as p/q.
    std::optional<Rational> rotation_angle_exact() const;

    /// Wandering interval [lo, hi] of a Denjoy system (the blown-up orbit
    /// point of index 0).
    std::optional<std::pair<double, double>> denjoy_wandering_arc() const;
    const DenjoyParams* denjoy_params() const;

    /// Lift displacement F(t) - t for circle systems, reduced to a consistent
    /// branch window (see lift_orbit).
    double circle_forward(double t) const;

  private:
    struct RotationK { double alpha; std::optional<Rational> exact; };
    struct IdentityIntervalK {};
    struct NorthSouthK {};
    struct SqrtIntervalK {};
    struct SqrtCircleK {};
    struct CatMapK {};
    struct ShiftK {};
    struct DenjoyK {
        DenjoyParams params;
        std::shared_ptr<const detail::DenjoyTables> tables;
    };
    struct SineCircleK { double a; };
    struct ProductK { std::shared_ptr<const System> f, g; };
    struct ConjugateK { std::shared_ptr<const System> base; double a; };
    using Kind = std::variant<RotationK, IdentityIntervalK, NorthSouthK, SqrtIntervalK,
                              SqrtCircleK, CatMapK, ShiftK, DenjoyK, SineCircleK, ProductK,
                              ConjugateK>;

    System(Space s, Kind k, bool exact, std::string id)
        : space_(std::move(s)), kind_(std::move(k)), exact_(exact), id_(std::move(id)) {}

    Point step(const Point& x, bool forward) const;

    Space space_;
    Kind kind_;
    bool exact_;
    std::string id_;
};

/// [f^n(x)] for n = nmin..nmax, one map application per step.
std::vector<Point> orbit_segment(const System& system, const Point& x, long long nmin,
                                 long long nmax);

/// Max round-trip defects d(f(f^-1(x)), x) and d(f^-1(f(x)), x) over samples.
struct HomeoDefect {
    double forward_after_backward = 0.0;
    double backward_after_forward = 0.0;
    bool pass = false;
    double max() const { return std::max(forward_after_backward, backward_after_forward); }
};
HomeoDefect check_homeo(const System& system, std::span<const Point> samples, double tol);

/// Truncated Denjoy homeomorphism value at a circle coordinate (mod 1).
double denjoy_eval(const DenjoyParams& params, double t);

}  // namespace proxlab
