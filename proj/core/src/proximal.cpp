#include "proxlab/proximal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "proxlab/detail/sweep.hpp"

namespace proxlab {

namespace {

/// Scan order 0, -1, +1, -2, +2, ... used for argmin tie-breaking.
template <typename F>
void scan_window(int N, F&& visit) {
    visit(0);
    for (int k = 1; k <= N; ++k) {
        visit(-k);
        visit(k);
    }
}

}  // namespace

double prox_gap(const System& system, const Point& x, const Point& y, int N) {
    return prox_gap_strided(system, x, y, N, 1);
}

double prox_gap_strided(const System& system, const Point& x, const Point& y, int N, int stride) {
    if (N < 0) throw std::invalid_argument("prox_gap: N must be nonnegative");
    if (stride < 1) throw std::invalid_argument("prox_gap: stride must be positive");
    const Space& space = system.space();
    double best = dist(space, x, y);
    Point fx = x, fy = y, bx = x, by = y;
    for (int n = 1; n <= N; ++n) {
        fx = system.apply(fx, stride);
        fy = system.apply(fy, stride);
        best = std::min(best, dist(space, fx, fy));
        bx = system.apply(bx, -stride);
        by = system.apply(by, -stride);
        best = std::min(best, dist(space, bx, by));
    }
    return best;
}

namespace {

/// Orbit of x over [n_lo, n_hi] (in units of `stride` applications), walked
/// away from x in each direction. Starting at the most negative iterate and
/// stepping forward would route backward iterates of contracting maps through
/// underflow and destroy the rest of the orbit.
std::vector<Point> strided_orbit(const System& system, const Point& x, int n_lo, int n_hi,
                                 int stride) {
    std::vector<Point> orbit(static_cast<std::size_t>(n_hi - n_lo + 1), x);
    if (n_hi >= 0) {
        Point cur = x;
        for (int n = 1; n <= n_hi; ++n) {
            cur = system.apply(cur, stride);
            if (n >= n_lo) orbit[static_cast<std::size_t>(n - n_lo)] = cur;
        }
    }
    if (n_lo < 0) {
        Point cur = x;
        for (int n = -1; n >= n_lo; --n) {
            cur = system.apply(cur, -stride);
            if (n <= n_hi) orbit[static_cast<std::size_t>(n - n_lo)] = cur;
        }
    }
    return orbit;
}

/// Membership loop with early exit; `exists` decides cell (some n close)
/// versus ball (every n close). y's orbit is walked from y outward like the
/// center orbit.
bool orbit_close(const System& system, std::span<const Point> x_orbit, const Point& y, int n_lo,
                 int n_hi, int stride, double threshold, bool exists) {
    const Space& space = system.space();
    const auto check = [&](int n, const Point& p) {
        return dist(space, x_orbit[static_cast<std::size_t>(n - n_lo)], p) <= threshold;
    };
    if (n_lo <= 0 && 0 <= n_hi) {
        const bool close = check(0, y);
        if (exists && close) return true;
        if (!exists && !close) return false;
    }
    if (n_hi >= 0) {
        Point cur = y;
        for (int n = 1; n <= n_hi; ++n) {
            cur = system.apply(cur, stride);
            if (n < n_lo) continue;
            const bool close = check(n, cur);
            if (exists && close) return true;
            if (!exists && !close) return false;
        }
    }
    if (n_lo < 0) {
        Point cur = y;
        for (int n = -1; n >= n_lo; --n) {
            cur = system.apply(cur, -stride);
            if (n > n_hi) continue;
            const bool close = check(n, cur);
            if (exists && close) return true;
            if (!exists && !close) return false;
        }
    }
    return !exists;
}

}  // namespace

SubsetMask proximal_cell(const System& system, const Point& x, const Grid& grid, int N,
                         double eps) {
    return proximal_cell_strided(system, x, grid, N, eps, 1);
}

SubsetMask proximal_cell_strided(const System& system, const Point& x, const Grid& grid, int N,
                                 double eps, int stride) {
    if (N < 0 || eps <= 0.0) throw std::invalid_argument("proximal_cell: need N >= 0, eps > 0");
    const auto orbit = strided_orbit(system, x, -N, N, stride);
    SubsetMask out(grid_ptr_of(grid));
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (orbit_close(system, orbit, grid.point(i), -N, N, stride, eps, true)) out.set(i);
    return out;
}

SubsetMask dynamic_ball(const System& system, const Point& x, const Grid& grid, double delta,
                        int N, BallSide side) {
    if (delta <= 0.0) throw std::invalid_argument("dynamic_ball: delta must be positive");
    const int n_lo = side == BallSide::two_sided ? -N : 0;
    const auto orbit = strided_orbit(system, x, n_lo, N, 1);
    SubsetMask out(grid_ptr_of(grid));
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (orbit_close(system, orbit, grid.point(i), n_lo, N, 1, delta, false)) out.set(i);
    return out;
}

DecayReport diam_decay(const System& system, std::span<const Point> c, int N) {
    if (c.empty()) throw std::invalid_argument("diam_decay: empty sample set");
    const Space& space = system.space();
    std::vector<double> by_n(static_cast<std::size_t>(2 * N + 1), 0.0);
    std::vector<Point> cur(c.begin(), c.end());
    by_n[static_cast<std::size_t>(N)] = diam(space, cur);
    std::vector<Point> fwd = cur;
    for (int n = 1; n <= N; ++n) {
        for (auto& p : fwd) p = system.apply(p, 1);
        by_n[static_cast<std::size_t>(N + n)] = diam(space, fwd);
    }
    std::vector<Point> bwd = cur;
    for (int n = 1; n <= N; ++n) {
        for (auto& p : bwd) p = system.apply(p, -1);
        by_n[static_cast<std::size_t>(N - n)] = diam(space, bwd);
    }
    DecayReport rep;
    rep.trace.reserve(by_n.size());
    for (int n = -N; n <= N; ++n)
        rep.trace.emplace_back(n, by_n[static_cast<std::size_t>(n + N)]);
    rep.min_diam = by_n[static_cast<std::size_t>(N)];
    rep.argmin = 0;
    scan_window(N, [&](int n) {
        const double v = by_n[static_cast<std::size_t>(n + N)];
        if (v < rep.min_diam) {
            rep.min_diam = v;
            rep.argmin = n;
        }
    });
    return rep;
}

namespace {

struct BallTrace {
    std::vector<double> diam_by_k;  // window offsets n_lo..n_hi
};

/// Diameter traces of the r-balls around every factor-grid center.
std::vector<BallTrace> factor_ball_traces(const System& factor, const Grid& grid, int N,
                                          double r) {
    const auto orbits = detail::compute_orbits(factor, grid.points(), -N, N);
    const std::size_t span = orbits.span();
    std::vector<BallTrace> out(grid.size());
    std::vector<std::size_t> ball;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        ball.clear();
        grid.neighbors_within(c, r, ball);
        auto& tr = out[c].diam_by_k;
        tr.assign(span, 0.0);
        for (std::size_t a = 0; a < ball.size(); ++a)
            for (std::size_t b = a + 1; b < ball.size(); ++b) {
                const double* oa = orbits.at(ball[a], -N);
                const double* ob = orbits.at(ball[b], -N);
                for (std::size_t k = 0; k < span; ++k) {
                    const double d = detail::flat_dist(oa + k * orbits.dim, ob + k * orbits.dim,
                                                       orbits.circular);
                    if (d > tr[k]) tr[k] = d;
                }
            }
    }
    return out;
}

BallRouteSummary run_ball_route(const System& system, const Grid& grid, int N, double eps,
                                double r) {
    BallRouteSummary summary;
    summary.min_ball_diam = std::numeric_limits<double>::infinity();
    const std::size_t span = static_cast<std::size_t>(2 * N + 1);

    const auto consider = [&](std::size_t center, const std::vector<double>& trace) {
        double best = trace[static_cast<std::size_t>(N)];
        int arg = 0;
        scan_window(N, [&](int n) {
            const double v = trace[static_cast<std::size_t>(n + N)];
            if (v < best) {
                best = v;
                arg = n;
            }
        });
        if (best < summary.min_ball_diam) {
            summary.min_ball_diam = best;
            summary.argmin_n = arg;
        }
        if (best <= eps) {
            ++summary.refuting_balls;
            if (!summary.first_witness_center) summary.first_witness_center = center;
        }
    };

    const bool split = system.is_product() && grid.left_grid() && grid.right_grid() &&
                       system.factor_left().space() == grid.left_grid()->space() &&
                       system.factor_right().space() == grid.right_grid()->space();
    if (split) {
        const auto left = factor_ball_traces(system.factor_left(), *grid.left_grid(), N, r);
        const auto right = factor_ball_traces(system.factor_right(), *grid.right_grid(), N, r);
        const std::size_t gr = grid.right_grid()->size();
        std::vector<double> combined(span);
        for (std::size_t c = 0; c < grid.size(); ++c) {
            const auto& tl = left[c / gr].diam_by_k;
            const auto& tr = right[c % gr].diam_by_k;
            for (std::size_t k = 0; k < span; ++k) combined[k] = std::max(tl[k], tr[k]);
            consider(c, combined);
        }
        return summary;
    }

    const auto orbits = detail::compute_orbits(system, grid.points(), -N, N);
    std::vector<std::size_t> ball;
    std::vector<double> trace(span);
    for (std::size_t c = 0; c < grid.size(); ++c) {
        ball.clear();
        grid.neighbors_within(c, r, ball);
        std::fill(trace.begin(), trace.end(), 0.0);
        for (std::size_t a = 0; a < ball.size(); ++a)
            for (std::size_t b = a + 1; b < ball.size(); ++b) {
                const double* oa = orbits.at(ball[a], -N);
                const double* ob = orbits.at(ball[b], -N);
                for (std::size_t k = 0; k < span; ++k) {
                    const double d = detail::flat_dist(oa + k * orbits.dim, ob + k * orbits.dim,
                                                       orbits.circular);
                    if (d > trace[k]) trace[k] = d;
                }
            }
        consider(c, trace);
    }
    return summary;
}

}  // namespace

CertificateReport inner_distal_certificate(const System& system, GridPtr grid,
                                           const HorizonParams& params) {
    const auto start = std::chrono::steady_clock::now();
    if (params.N < 1 || params.eps <= 0.0)
        throw std::invalid_argument("certificate: need N >= 1 and eps > 0");
    const double r = params.interior_scale(grid->h());

    CertificateReport rep;
    rep.system_id = system.id();
    rep.params = params;
    rep.grid_h = grid->h();

    detail::SweepEngine engine(system, grid, -params.N, params.N, params.eps);
    rep.per_center.reserve(grid->size());
    for (std::size_t c = 0; c < grid->size(); ++c) {
        const auto cell = engine.cell(c);
        const auto inner = engine.interior(cell, r);
        CertificateCenter entry;
        entry.center = c;
        entry.cell_size = cell.count();
        entry.interior_count = inner.count();
        entry.witness = inner.first();
        if (entry.interior_count > 0 && !rep.witness) rep.witness = {c, *entry.witness};
        rep.per_center.push_back(entry);
    }
    rep.verdict = rep.witness ? CertificateVerdict::refuted
                              : CertificateVerdict::consistent_with_inner_distal;
    rep.ball_route = run_ball_route(system, *grid, params.N, params.eps, r);
    rep.routes_agree =
        (rep.verdict == CertificateVerdict::refuted) == (rep.ball_route.refuting_balls > 0);
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return rep;
}

CwDistalReport cw_distal_probe(const System& system,
                               const std::vector<std::vector<Point>>& continua, int N,
                               double gamma) {
    CwDistalReport rep;
    rep.pass = true;
    for (std::size_t i = 0; i < continua.size(); ++i) {
        const auto& c = continua[i];
        const double d0 = diam(system.space(), c);
        if (!(d0 > 0.0))
            throw std::invalid_argument("cw_distal_probe: continua must be nondegenerate");
        const DecayReport decay = diam_decay(system, c, N);
        rep.entries.push_back({i, decay.min_diam, decay.argmin, d0});
        if (decay.min_diam < gamma && rep.pass) {
            rep.pass = false;
            rep.witness = i;
        }
    }
    return rep;
}

SubsetMask stable_class(const System& system, const Point& x, const Grid& grid, int N,
                        double eps) {
    if (N < 2) throw std::invalid_argument("stable_class: N must be at least 2");
    const int n_half = (N + 1) / 2;
    const Space& space = system.space();
    const auto orbit = strided_orbit(system, x, 0, N, 1);
    SubsetMask out(grid_ptr_of(grid));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Point cur = system.apply(grid.point(i), n_half);
        double d_half = dist(space, orbit[static_cast<std::size_t>(n_half)], cur);
        bool ok = d_half <= eps;
        double d_last = d_half;
        for (int n = n_half + 1; n <= N && ok; ++n) {
            cur = system.apply(cur, 1);
            d_last = dist(space, orbit[static_cast<std::size_t>(n)], cur);
            ok = d_last <= eps;
        }
        if (ok && d_last <= d_half) out.set(i);
    }
    return out;
}

ReturnTimes return_times(const System& system, const Point& x, double eps, int N) {
    if (eps <= 0.0) throw std::invalid_argument("return_times: eps must be positive");
    const Space& space = system.space();
    ReturnTimes rt;
    Point fwd = x, bwd = x;
    std::vector<long long> neg;
    rt.times.push_back(0);  // d(x, x) = 0 < eps
    for (int n = 1; n <= N; ++n) {
        fwd = system.apply(fwd, 1);
        if (dist(space, fwd, x) < eps) rt.times.push_back(n);
        bwd = system.apply(bwd, -1);
        if (dist(space, bwd, x) < eps) neg.push_back(-n);
    }
    rt.times.insert(rt.times.begin(), neg.rbegin(), neg.rend());
    rt.bound = std::max<long long>(2, N / 4);
    rt.max_gap = 0;
    rt.max_gap = std::max(rt.max_gap, rt.times.front() - (-static_cast<long long>(N)));
    rt.max_gap = std::max(rt.max_gap, static_cast<long long>(N) - rt.times.back());
    for (std::size_t i = 1; i < rt.times.size(); ++i)
        rt.max_gap = std::max(rt.max_gap, rt.times[i] - rt.times[i - 1]);
    rt.syndetic_at_horizon = rt.max_gap <= rt.bound;
    return rt;
}

FactorMap FactorMap::identity(Space space) {
    return FactorMap(Kind::identity, space, space);
}

FactorMap FactorMap::project_left(Space product_space) {
    if (product_space.kind() != Space::Kind::product)
        throw std::invalid_argument("project_left needs a product space");
    Space target = product_space.left();
    return FactorMap(Kind::project_left, std::move(product_space), std::move(target));
}

FactorMap FactorMap::project_right(Space product_space) {
    if (product_space.kind() != Space::Kind::product)
        throw std::invalid_argument("project_right needs a product space");
    Space target = product_space.right();
    return FactorMap(Kind::project_right, std::move(product_space), std::move(target));
}

FactorMap FactorMap::collapse_right(Space product_space, Point right_value) {
    if (product_space.kind() != Space::Kind::product)
        throw std::invalid_argument("collapse_right needs a product space");
    if (!product_space.right().contains(right_value))
        throw std::invalid_argument("collapse value must lie in the right factor");
    FactorMap m(Kind::collapse_right, product_space, product_space);
    m.fixed_ = std::move(right_value);
    return m;
}

Point FactorMap::apply(const Point& y) const {
    if (!source_.contains(y)) throw std::invalid_argument("factor map applied outside its source");
    switch (kind_) {
        case Kind::identity: return y;
        case Kind::project_left: return y.left();
        case Kind::project_right: return y.right();
        case Kind::collapse_right: return Point::product(y.left(), *fixed_);
    }
    return y;
}

std::string FactorMap::describe() const {
    switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::project_left: return "project_left";
        case Kind::project_right: return "project_right";
        case Kind::collapse_right: return "collapse_right(" + fixed_->str() + ")";
    }
    return "?";
}

HomomorphismDefect check_homomorphism(const System& g, const System& f, const FactorMap& pi,
                                      std::span<const Point> samples, double tol) {
    if (pi.source() != g.space() || pi.target() != f.space())
        throw std::invalid_argument("check_homomorphism: map does not connect the two systems");
    HomomorphismDefect out;
    for (const auto& y : samples) {
        const Point lhs = f.apply(pi.apply(y), 1);
        const Point rhs = pi.apply(g.apply(y, 1));
        out.defect = std::max(out.defect, dist(f.space(), lhs, rhs));
    }
    out.pass = out.defect <= tol;
    return out;
}

namespace {

SubsetMask sample_mask(const Grid& grid, std::span<const Point> samples, double tol) {
    SubsetMask mask(grid_ptr_of(grid));
    for (const auto& p : samples)
        for (std::size_t i : grid.near_indices(p, tol)) mask.set(i);
    return mask;
}

}  // namespace

InnerLightReport inner_light_probe(const FactorMap& pi,
                                   const std::vector<std::vector<Point>>& continua,
                                   const Grid& grid_target, const Grid& grid_source, double r) {
    InnerLightReport rep;
    for (std::size_t i = 0; i < continua.size(); ++i) {
        const auto& c = continua[i];
        if (c.empty()) throw std::invalid_argument("inner_light_probe: empty continuum sample");
        std::vector<Point> image;
        image.reserve(c.size());
        for (const auto& p : c) image.push_back(pi.apply(p));

        const SubsetMask src = sample_mask(grid_source, c, grid_source.h());
        const SubsetMask img = sample_mask(grid_target, image, grid_target.h());
        const bool img_empty = !interior_points(img, r).any();
        const bool src_empty = !interior_points(src, r).any();
        const bool violation = img_empty && !src_empty;
        rep.entries.push_back({i, img_empty, src_empty, violation});
        if (violation && !rep.violation_found) {
            rep.violation_found = true;
            rep.witness = i;
        }
    }
    return rep;
}

}  // namespace proxlab
