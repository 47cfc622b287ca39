#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxlab/grid.hpp"
#include "proxlab/system.hpp"

namespace proxlab {

/// Continuous-branch lift values F^k(t0), k = 0..n, of a circle system.
/// The branch is chosen by wrapping raw displacements into a window that
/// avoids the map's sampled displacement range (the range of a degree-one
/// homeomorphism's displacement is always narrower than 1, so such a window
/// exists; it is located once from a sampled displacement profile).
struct LiftTrace {
    double t0 = 0.0;
    std::vector<double> values;
};
LiftTrace lift_orbit(const System& homeo, double t0, long long n);

/// (F^n(t0) - t0)/n mod 1 with the standard 2/n displacement-average bound.
/// Rational rotations are answered by exact lift arithmetic (error bound 0).
struct RotationNumberEstimate {
    double rho = 0.0;
    double error_bound = 0.0;
    std::optional<Rational> exact;
};
RotationNumberEstimate rotation_number(const System& homeo, double t0, long long n);

/// Continued-fraction convergent p/q with q <= qmax and |rho - p/q| <= tol.
std::optional<Rational> rational_approx(double rho, long long qmax, double tol);

/// Root bracket of F^p(t) - t - k; flat stretches of periodic points are
/// reported as whole cells.
struct RootBracket {
    double lo = 0.0, hi = 0.0;
    long long k = 0;
    bool flat = false;
};
struct PeriodicPointsResult {
    SubsetMask mask;
    std::vector<RootBracket> brackets;
};
/// Grid cells where the lifted displacement of f^p crosses an integer, each
/// refined by bisection to width <= 1e-10.
PeriodicPointsResult periodic_points(const System& homeo, int p, GridPtr grid);

struct Arc {
    double lo = 0.0, hi = 0.0;  // counterclockwise from lo to hi
    double length() const;
};
/// First arc whose images f^n(J), 0 <= n <= N, are pairwise disjoint
/// (endpoint iteration; orientation preserving maps only).
std::optional<Arc> wandering_arc_probe(const System& homeo, const std::vector<Arc>& arcs, int N);

enum class CircleClass {
    conjugate_rotation_distal,
    rational_with_periodic_set,
    denjoy_like,
};

struct ClassifyParams {
    double t0 = 0.0;
    long long rho_iterations = 100000;
    long long qmax = 50;
    double rational_tol = 1e-6;
    double grid_h = 1.0 / 256.0;
    int probe_arcs = 32;
    int probe_N = 50;
};

/// Rotation-number-driven trichotomy for circle homeomorphisms. Rational
/// evidence (a close convergent with small denominator) routes to the
/// periodic-point locator; irrational evidence routes to the wandering-arc
/// probe. These are evidence rules, not proofs: a floating rho can never
/// certify irrationality, and the reports carry the decision rule used.
struct ClassificationResult {
    RotationNumberEstimate rho;
    std::optional<Rational> rational;
    CircleClass cls = CircleClass::conjugate_rotation_distal;
    std::optional<PeriodicPointsResult> periodic;
    std::optional<Arc> wandering_witness;
    int witness_disjoint_iterates = 0;
    std::string decision_rule;
};
ClassificationResult classify_circle(const System& homeo, const ClassifyParams& params);

/// Outer approximation of the non-wandering set at scale r: grid points x
/// such that some grid point of B(x, r) returns into B(x, r) within N forward
/// iterates.
SubsetMask nonwandering_points(const System& system, GridPtr grid, double r, int N);

}  // namespace proxlab
