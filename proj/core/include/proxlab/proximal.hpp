#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxlab/grid.hpp"
#include "proxlab/system.hpp"

namespace proxlab {

/// Finite-horizon discretization parameters: the infimum over all iterates is
/// replaced by a window |n| <= N, set interiors by interior-at-scale r, and
/// connectivity by chain connectivity at `step`.
struct HorizonParams {
    int N = 60;
    double eps = 1e-3;
    double r = 0.0;     // 0 means 3 * grid.h
    double step = 0.0;  // 0 means grid.h

    double interior_scale(double grid_h) const { return r > 0.0 ? r : 3.0 * grid_h; }
    double chain_step(double grid_h) const { return step > 0.0 ? step : grid_h; }
};

/// min over |n| <= N of d(f^n(x), f^n(y)). Nonincreasing in N, symmetric.
double prox_gap(const System& system, const Point& x, const Point& y, int N);

/// Same with the iterate index restricted to multiples of `stride` (the gap of
/// x, y under f^stride at horizon N).
double prox_gap_strided(const System& system, const Point& x, const Point& y, int N, int stride);

/// Inner approximation of the eps-relaxed proximal cell of x: grid points y
/// with prox_gap(x, y, N) <= eps. Grows with N, shrinks with eps.
SubsetMask proximal_cell(const System& system, const Point& x, const Grid& grid, int N,
                         double eps);
SubsetMask proximal_cell_strided(const System& system, const Point& x, const Grid& grid, int N,
                                 double eps, int stride);

enum class BallSide { two_sided, forward };

/// Outer approximation of the dynamic ball of radius delta at x: grid points
/// whose orbit stays delta-close to x's orbit over the window (|n| <= N, or
/// 0 <= n <= N for the forward variant). Shrinks as N grows.
SubsetMask dynamic_ball(const System& system, const Point& x, const Grid& grid, double delta,
                        int N, BallSide side);

/// Diameter trace of the iterated sample set f^n(C), n in [-N, N]. Sampled
/// diameters are lower bounds on true set diameters. Ties in the argmin go to
/// the smallest |n|, negative first.
struct DecayReport {
    std::vector<std::pair<int, double>> trace;  // (n, diam), n ascending
    double min_diam = 0.0;
    int argmin = 0;
};
DecayReport diam_decay(const System& system, std::span<const Point> c, int N);

enum class CertificateVerdict { consistent_with_inner_distal, refuted };

struct CertificateCenter {
    std::size_t center = 0;
    std::size_t cell_size = 0;
    std::size_t interior_count = 0;
    std::optional<std::size_t> witness;  // an interior point of the cell estimate
};

/// Independent refutation route: iterated diameters of every grid r-ball.
struct BallRouteSummary {
    std::size_t refuting_balls = 0;
    std::optional<std::size_t> first_witness_center;
    double min_ball_diam = 0.0;
    int argmin_n = 0;
};

struct CertificateReport {
    std::string system_id;
    HorizonParams params;
    double grid_h = 0.0;
    std::vector<CertificateCenter> per_center;
    CertificateVerdict verdict = CertificateVerdict::consistent_with_inner_distal;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // (center, interior point)
    BallRouteSummary ball_route;
    bool routes_agree = false;
    long long elapsed_ms = 0;  // runtime metadata, not serialized into reports
};

/// Sweeps every grid center: the proximal-cell estimate and its interior at
/// scale r decide the verdict (any interior point refutes); the diameter-decay
/// route over grid r-balls is run alongside as an independent check. A refuted
/// verdict is sound evidence, a consistent verdict is resolution-limited.
CertificateReport inner_distal_certificate(const System& system, GridPtr grid,
                                           const HorizonParams& params);

struct CwDistalEntry {
    std::size_t continuum = 0;
    double min_diam = 0.0;
    int argmin = 0;
    double initial_diam = 0.0;
};
struct CwDistalReport {
    bool pass = false;  // all continua keep min diameter >= gamma
    std::vector<CwDistalEntry> entries;
    std::optional<std::size_t> witness;  // continuum whose diameter collapses
};
/// Diameter collapse probe over nondegenerate continua (cw-distality check).
CwDistalReport cw_distal_probe(const System& system,
                               const std::vector<std::vector<Point>>& continua, int N,
                               double gamma);

/// Outer approximation of the stable class of x using a two-checkpoint decay
/// heuristic: y qualifies when d(f^n x, f^n y) <= eps on n in [ceil(N/2), N]
/// and the distance at N does not exceed the one at ceil(N/2). The limit
/// itself is not observable at a finite horizon.
SubsetMask stable_class(const System& system, const Point& x, const Grid& grid, int N, double eps);

/// Return times into the eps-ball of x within |n| <= N. Gaps are measured
/// between consecutive returns and to the window edges; the verdict uses the
/// reported bound max(2, N/4). (Bounded gaps stand in for syndetic here: sets
/// F with Z = A + F are taken to be finite, not merely closed.)
struct ReturnTimes {
    std::vector<long long> times;
    long long max_gap = 0;
    long long bound = 0;
    bool syndetic_at_horizon = false;
};
ReturnTimes return_times(const System& system, const Point& x, double eps, int N);

/// Equivariant map descriptor between catalogue spaces: identity, a factor
/// projection of a product, or a collapse of the right factor to a fixed
/// value (a deliberately non-inner-light test map).
class FactorMap {
  public:
    static FactorMap identity(Space space);
    static FactorMap project_left(Space product_space);
    static FactorMap project_right(Space product_space);
    static FactorMap collapse_right(Space product_space, Point right_value);

    const Space& source() const { return source_; }
    const Space& target() const { return target_; }
    Point apply(const Point& y) const;
    std::string describe() const;

  private:
    enum class Kind { identity, project_left, project_right, collapse_right };
    FactorMap(Kind k, Space src, Space dst) : kind_(k), source_(std::move(src)), target_(std::move(dst)) {}
    Kind kind_;
    Space source_;
    Space target_;
    std::optional<Point> fixed_;
};

/// max over samples of d(f(pi(y)), pi(g(y))); zero iff pi intertwines g and f
/// on the samples.
struct HomomorphismDefect {
    double defect = 0.0;
    bool pass = false;
};
HomomorphismDefect check_homomorphism(const System& g, const System& f, const FactorMap& pi,
                                      std::span<const Point> samples, double tol);

/// Inner-lightness probe: for sampled continua C in the source space, compare
/// interior-at-scale verdicts of pi(C) (target grid) and C (source grid). A
/// violation is a continuum whose image has empty r-interior while C itself
/// has nonempty r-interior.
struct InnerLightEntry {
    std::size_t continuum = 0;
    bool image_interior_empty = false;
    bool preimage_interior_empty = false;
    bool violation = false;
};
struct InnerLightReport {
    bool violation_found = false;
    std::optional<std::size_t> witness;
    std::vector<InnerLightEntry> entries;
};
InnerLightReport inner_light_probe(const FactorMap& pi,
                                   const std::vector<std::vector<Point>>& continua,
                                   const Grid& grid_target, const Grid& grid_source, double r);

}  // namespace proxlab
