#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "proxlab/grid.hpp"
#include "proxlab/proximal.hpp"
#include "proxlab/system.hpp"

namespace proxlab {

/// A Borel probability measure as a finite weighted point cloud. Weights are
/// positive and sum to one (normalized at construction); atoms at identical
/// locations are merged.
class AtomicMeasure {
  public:
    static AtomicMeasure make(Space space, std::vector<Point> points, std::vector<double> weights);
    static AtomicMeasure dirac(Space space, Point at);
    static AtomicMeasure lebesgue_grid(const GridPtr& grid);
    /// t*a + (1-t)*b.
    static AtomicMeasure mix(const AtomicMeasure& a, const AtomicMeasure& b, double t);

    const Space& space() const { return space_; }
    const std::vector<std::pair<Point, double>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total_weight() const;

    const std::string& label() const { return label_; }
    AtomicMeasure& set_label(std::string l) { label_ = std::move(l); return *this; }

  private:
    AtomicMeasure(Space space, std::vector<std::pair<Point, double>> atoms)
        : space_(std::move(space)), atoms_(std::move(atoms)) {}
    Space space_;
    std::vector<std::pair<Point, double>> atoms_;  // sorted by point order
    std::string label_;
};

/// Atoms moved by f^k, weights unchanged.
AtomicMeasure pushforward(const AtomicMeasure& mu, const System& system, long long k);

/// (1/n) * sum of the first n pushforwards, with atoms closer than bin_h
/// coalesced. Cluster representatives are weight averages for circle and
/// interval coordinates (around the cluster anchor, so wrap-around clusters
/// average correctly) and the heaviest member for exact representations
/// (torus rationals, binary sequences).
AtomicMeasure cesaro(const AtomicMeasure& mu, const System& system, int n, double bin_h);

/// Exact Wasserstein-1 distance between atom clouds. Interval and circle
/// measures go through the closed-form CDF formulas; everything else solves
/// the transport problem by successive shortest paths. Arguments are ordered
/// canonically first, so the result is exactly symmetric.
double w1(const Space& space, const AtomicMeasure& mu, const AtomicMeasure& nu);

/// The network-simplex transport route regardless of space kind; the 1-D fast
/// paths are validated against it.
double w1_transport_route(const Space& space, const AtomicMeasure& mu, const AtomicMeasure& nu);

/// w1(mu, f_* mu): zero iff mu is invariant on its support (up to transport
/// degeneracy).
double invariance_defect(const AtomicMeasure& mu, const System& system);

/// Atom locations with weight above tol.
std::vector<Point> support(const AtomicMeasure& mu, double tol);

struct MeasureTestReport {
    std::string system_id;
    std::string measure_label;
    int N = 0;
    double threshold = 0.0;  // eps for proximal cells, delta for dynamic balls
    double r = 0.0;
    double tol = 0.0;
    std::vector<double> per_center_mass;
    double max_mass = 0.0;
    std::size_t argmax_center = 0;
    bool pass = false;
};

/// For every grid center: the mass mu places within grid.h/2 of the interior
/// (at scale r) of the proximal-cell estimate. Passes when the largest such
/// mass stays below tol.
MeasureTestReport inner_distal_measure_test(const AtomicMeasure& mu, const System& system,
                                            GridPtr grid, const HorizonParams& params, double tol);

/// Same sweep with the dynamic ball of radius delta in place of the proximal
/// cell (meagre-expansivity test); side selects two-sided or forward windows.
MeasureTestReport meagre_expansive_measure_test(const AtomicMeasure& mu, const System& system,
                                                GridPtr grid, double delta, int N, double r,
                                                double tol, BallSide side);

}  // namespace proxlab
