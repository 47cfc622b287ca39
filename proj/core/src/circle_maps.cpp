#include "proxlab/circle_maps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxlab {

namespace {

void require_circle(const System& homeo, const char* what) {
    if (homeo.space().kind() != Space::Kind::circle)
        throw std::invalid_argument(std::string(what) + ": system must act on the circle");
}

/// Branch cut for lift displacements: sample the displacement profile and put
/// the cut in the middle of the widest empty arc of its values.
double displacement_cut(const System& homeo) {
    constexpr int kSamples = 4096;
    std::vector<double> vals;
    vals.reserve(kSamples);
    for (int j = 0; j < kSamples; ++j) {
        const double t = static_cast<double>(j) / kSamples;
        vals.push_back(wrap_unit(homeo.circle_forward(t) - t));
    }
    std::sort(vals.begin(), vals.end());
    double best_gap = 1.0 - vals.back() + vals.front();
    double cut = wrap_unit(vals.back() + 0.5 * best_gap);
    for (std::size_t i = 1; i < vals.size(); ++i) {
        const double gap = vals[i] - vals[i - 1];
        if (gap > best_gap) {
            best_gap = gap;
            cut = vals[i - 1] + 0.5 * gap;
        }
    }
    return cut;
}

/// Raw displacement wrapped into [cut - 1, cut).
double branch(double raw, double cut) {
    return cut - 1.0 + wrap_unit(raw - cut);
}

}  // namespace

double Arc::length() const { return wrap_unit(hi - lo); }

LiftTrace lift_orbit(const System& homeo, double t0, long long n) {
    require_circle(homeo, "lift_orbit");
    if (n < 1) throw std::invalid_argument("lift_orbit: n must be >= 1");
    const double cut = displacement_cut(homeo);
    LiftTrace trace;
    trace.t0 = t0;
    trace.values.reserve(static_cast<std::size_t>(n) + 1);
    trace.values.push_back(t0);
    double x = wrap_unit(t0);
    double lifted = t0;
    for (long long k = 0; k < n; ++k) {
        const double fx = homeo.circle_forward(x);
        lifted += branch(wrap_unit(fx - x), cut);
        trace.values.push_back(lifted);
        x = fx;
    }
    return trace;
}

RotationNumberEstimate rotation_number(const System& homeo, double t0, long long n) {
    require_circle(homeo, "rotation_number");
    if (n < 100) throw std::invalid_argument("rotation_number: n must be >= 100");
    RotationNumberEstimate est;
    if (const auto alpha = homeo.rotation_angle_exact()) {
        est.rho = alpha->to_double();
        est.error_bound = 0.0;
        est.exact = *alpha;
        return est;
    }
    const LiftTrace trace = lift_orbit(homeo, t0, n);
    est.rho = wrap_unit((trace.values.back() - t0) / static_cast<double>(n));
    est.error_bound = 2.0 / static_cast<double>(n);
    return est;
}

std::optional<Rational> rational_approx(double rho, long long qmax, double tol) {
    if (qmax < 1 || tol <= 0.0) throw std::invalid_argument("rational_approx: bad parameters");
    // Continued-fraction convergents of rho.
    double x = rho;
    long long p_prev = 1, q_prev = 0;  // h_{-1}/k_{-1}
    long long p = 0, q = 1;            // starts at a0 = floor(rho)
    long long a = static_cast<long long>(std::floor(x));
    p = a;
    std::optional<Rational> best;
    for (int it = 0; it < 64; ++it) {
        if (q <= qmax) {
            if (std::fabs(rho - static_cast<double>(p) / static_cast<double>(q)) <= tol)
                best = Rational(p, q);
        } else {
            break;
        }
        const double frac = x - std::floor(x);
        if (frac < 1e-15) break;
        x = 1.0 / frac;
        a = static_cast<long long>(std::floor(x));
        const long long p_next = a * p + p_prev;
        const long long q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return best;
}

namespace {

/// Lifted p-step displacement F^p(t) - t using a fixed branch cut.
double lifted_displacement(const System& homeo, double t, int p, double cut) {
    double x = wrap_unit(t);
    double total = 0.0;
    for (int k = 0; k < p; ++k) {
        const double fx = homeo.circle_forward(x);
        total += branch(wrap_unit(fx - x), cut);
        x = fx;
    }
    return total;
}

}  // namespace

PeriodicPointsResult periodic_points(const System& homeo, int p, GridPtr grid) {
    require_circle(homeo, "periodic_points");
    if (p < 1) throw std::invalid_argument("periodic_points: period must be >= 1");
    if (grid->space().kind() != Space::Kind::circle)
        throw std::invalid_argument("periodic_points: grid must live on the circle");

    PeriodicPointsResult res{SubsetMask(grid), {}};
    constexpr double kZeroTol = 1e-9;
    constexpr double kWidth = 1e-10;

    // Exact rational rotations: f^p is either the identity on the circle
    // (whole circle periodic) or fixed-point free.
    if (const auto alpha = homeo.rotation_angle_exact()) {
        const Rational total = *alpha * p;
        if (total.mod1() == Rational(0, 1)) {
            res.mask = SubsetMask::full(grid);
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double lo = grid->point(i).as_circle().t;
                res.brackets.push_back({lo, lo + grid->axes()[0].step, total.num, true});
            }
        }
        return res;
    }

    const double cut = displacement_cut(homeo);
    const std::size_t n = grid->size();
    std::vector<double> disp(n);
    for (std::size_t i = 0; i < n; ++i)
        disp[i] = lifted_displacement(homeo, grid->point(i).as_circle().t, p, cut);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double t_lo = grid->point(i).as_circle().t;
        const double t_hi = i + 1 == n ? 1.0 : grid->point(j).as_circle().t;
        const double h_lo = disp[i];
        const double h_hi = disp[j];  // displacement is 1-periodic in t
        const long long k_min = static_cast<long long>(std::ceil(std::min(h_lo, h_hi) - kZeroTol));
        const long long k_max = static_cast<long long>(std::floor(std::max(h_lo, h_hi) + kZeroTol));
        for (long long k = k_min; k <= k_max; ++k) {
            const double g_lo = h_lo - static_cast<double>(k);
            const double g_hi = h_hi - static_cast<double>(k);
            if (std::fabs(g_lo) <= kZeroTol && std::fabs(g_hi) <= kZeroTol) {
                res.mask.set(i);
                res.mask.set(j);
                res.brackets.push_back({t_lo, t_hi, k, true});
            } else if ((g_lo <= kZeroTol && g_hi >= -kZeroTol) ||
                       (g_lo >= -kZeroTol && g_hi <= kZeroTol)) {
                double lo = t_lo, hi = t_hi;
                double v_lo = g_lo;
                while (hi - lo > kWidth) {
                    const double mid = 0.5 * (lo + hi);
                    const double v_mid =
                        lifted_displacement(homeo, mid, p, cut) - static_cast<double>(k);
                    if ((v_lo <= 0.0) == (v_mid <= 0.0)) {
                        lo = mid;
                        v_lo = v_mid;
                    } else {
                        hi = mid;
                    }
                }
                res.mask.set(i);
                res.mask.set(j);
                res.brackets.push_back({lo, hi, k, false});
            }
        }
    }
    return res;
}

namespace {

bool arcs_overlap(const Arc& a, const Arc& b) {
    // Cyclic arcs [lo, hi); overlap iff one contains the other's start.
    const auto contains = [](const Arc& arc, double t) {
        return wrap_unit(t - arc.lo) < arc.length();
    };
    return contains(a, b.lo) || contains(b, a.lo);
}

}  // namespace

std::optional<Arc> wandering_arc_probe(const System& homeo, const std::vector<Arc>& arcs, int N) {
    require_circle(homeo, "wandering_arc_probe");
    for (const auto& j : arcs) {
        if (!(j.length() > 0.0))
            throw std::invalid_argument("wandering_arc_probe: arcs must be nondegenerate");
        std::vector<Arc> images;
        images.reserve(static_cast<std::size_t>(N) + 1);
        double lo = wrap_unit(j.lo), hi = wrap_unit(j.hi);
        images.push_back({lo, hi});
        bool disjoint = true;
        for (int n = 1; n <= N && disjoint; ++n) {
            lo = homeo.circle_forward(lo);
            hi = homeo.circle_forward(hi);
            const Arc img{lo, hi};
            for (const auto& prev : images)
                if (arcs_overlap(prev, img)) { disjoint = false; break; }
            images.push_back(img);
        }
        if (disjoint) return j;
    }
    return std::nullopt;
}

ClassificationResult classify_circle(const System& homeo, const ClassifyParams& params) {
    require_circle(homeo, "classify_circle");
    ClassificationResult res;
    res.rho = rotation_number(homeo, params.t0, params.rho_iterations);
    if (res.rho.exact && res.rho.exact->den <= params.qmax) {
        res.rational = res.rho.exact;
        res.decision_rule = "exact rational rotation angle";
    } else {
        res.rational = rational_approx(res.rho.rho, params.qmax, params.rational_tol);
        res.decision_rule = "convergent with q <= " + std::to_string(params.qmax) +
                            " within " + std::to_string(params.rational_tol);
    }

    if (res.rational) {
        res.cls = CircleClass::rational_with_periodic_set;
        const auto grid = Grid::build(Space::circle(), params.grid_h);
        res.periodic = periodic_points(homeo, static_cast<int>(res.rational->den), grid);
        return res;
    }

    std::vector<Arc> arcs;
    if (const auto wa = homeo.denjoy_wandering_arc()) arcs.push_back({wa->first, wa->second});
    for (int j = 0; j < params.probe_arcs; ++j) {
        const double lo = static_cast<double>(j) / params.probe_arcs;
        arcs.push_back({lo, lo + 0.5 / params.probe_arcs});
    }
    res.wandering_witness = wandering_arc_probe(homeo, arcs, params.probe_N);
    if (res.wandering_witness) {
        res.cls = CircleClass::denjoy_like;
        res.witness_disjoint_iterates = params.probe_N;
    } else {
        res.cls = CircleClass::conjugate_rotation_distal;
    }
    return res;
}

SubsetMask nonwandering_points(const System& system, GridPtr grid, double r, int N) {
    if (N < 1) throw std::invalid_argument("nonwandering_points: N must be >= 1");
    const Space& space = system.space();
    SubsetMask out(grid);
    std::vector<std::size_t> ball;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        ball.clear();
        grid->neighbors_within(i, r, ball);
        const Point& x = grid->point(i);
        bool returns = false;
        for (std::size_t cand : ball) {
            Point cur = grid->point(cand);
            for (int n = 1; n <= N; ++n) {
                cur = system.apply(cur, 1);
                if (dist(space, cur, x) <= r) { returns = true; break; }
            }
            if (returns) break;
        }
        if (returns) out.set(i);
    }
    return out;
}

}  // namespace proxlab
