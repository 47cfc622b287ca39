#include "proxlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "proxlab/detail/sweep.hpp"

namespace proxlab {

namespace {

std::vector<std::pair<Point, double>> merge_equal(std::vector<std::pair<Point, double>> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Point, double>> out;
    for (auto& a : atoms) {
        if (!out.empty() && out.back().first == a.first)
            out.back().second += a.second;
        else
            out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

AtomicMeasure AtomicMeasure::make(Space space, std::vector<Point> points,
                                  std::vector<double> weights) {
    if (points.empty()) throw std::invalid_argument("measure needs at least one atom");
    if (points.size() != weights.size())
        throw std::invalid_argument("measure: points/weights length mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("measure: weights must be positive");
        total += w;
    }
    std::vector<std::pair<Point, double>> atoms;
    atoms.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!space.contains(points[i]))
            throw std::invalid_argument("measure: atom outside the space");
        atoms.emplace_back(std::move(points[i]), weights[i] / total);
    }
    return AtomicMeasure(std::move(space), merge_equal(std::move(atoms)));
}

AtomicMeasure AtomicMeasure::dirac(Space space, Point at) {
    return make(std::move(space), {std::move(at)}, {1.0});
}

AtomicMeasure AtomicMeasure::lebesgue_grid(const GridPtr& grid) {
    std::vector<Point> pts = grid->points();
    std::vector<double> w(pts.size(), 1.0);
    AtomicMeasure m = make(grid->space(), std::move(pts), std::move(w));
    m.set_label("lebesgue_grid(h=" + std::to_string(grid->h()) + ")");
    return m;
}

AtomicMeasure AtomicMeasure::mix(const AtomicMeasure& a, const AtomicMeasure& b, double t) {
    if (a.space() != b.space()) throw std::invalid_argument("mix: measures on different spaces");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mix: t must be in [0,1]");
    std::vector<Point> pts;
    std::vector<double> w;
    for (const auto& [p, wt] : a.atoms()) {
        if (t * wt > 0.0) { pts.push_back(p); w.push_back(t * wt); }
    }
    for (const auto& [p, wt] : b.atoms()) {
        if ((1.0 - t) * wt > 0.0) { pts.push_back(p); w.push_back((1.0 - t) * wt); }
    }
    return make(a.space(), std::move(pts), std::move(w));
}

double AtomicMeasure::total_weight() const {
    double s = 0.0;
    for (const auto& [p, w] : atoms_) s += w;
    return s;
}

AtomicMeasure pushforward(const AtomicMeasure& mu, const System& system, long long k) {
    if (mu.space() != system.space())
        throw std::invalid_argument("pushforward: measure and system spaces differ");
    std::vector<Point> pts;
    std::vector<double> w;
    pts.reserve(mu.size());
    w.reserve(mu.size());
    for (const auto& [p, wt] : mu.atoms()) {
        pts.push_back(system.apply(p, k));
        w.push_back(wt);
    }
    AtomicMeasure out = AtomicMeasure::make(mu.space(), std::move(pts), std::move(w));
    out.set_label(mu.label().empty() ? "" : mu.label() + " pushed " + std::to_string(k));
    return out;
}

namespace {

/// Representative of a coalescing cluster: weighted average for circle and
/// interval coordinates (computed as offsets from the anchor so wrap-around
/// clusters behave), heaviest member for exact representations.
Point cluster_representative(const Space& space,
                             const std::vector<std::pair<Point, double>>& members) {
    switch (space.kind()) {
        case Space::Kind::interval: {
            double s = 0.0, w = 0.0;
            for (const auto& [p, wt] : members) {
                s += wt * p.as_interval().x;
                w += wt;
            }
            return Point::interval(std::clamp(s / w, 0.0, 1.0));
        }
        case Space::Kind::circle: {
            const double anchor = members.front().first.as_circle().t;
            double s = 0.0, w = 0.0;
            for (const auto& [p, wt] : members) {
                double off = wrap_unit(p.as_circle().t - anchor);
                if (off > 0.5) off -= 1.0;
                s += wt * off;
                w += wt;
            }
            return Point::circle(wrap_unit(anchor + s / w));
        }
        case Space::Kind::product: {
            std::vector<std::pair<Point, double>> lefts, rights;
            lefts.reserve(members.size());
            rights.reserve(members.size());
            for (const auto& [p, wt] : members) {
                lefts.emplace_back(p.left(), wt);
                rights.emplace_back(p.right(), wt);
            }
            return Point::product(cluster_representative(space.left(), lefts),
                                  cluster_representative(space.right(), rights));
        }
        default: {
            // Exact representations keep the heaviest member's location.
            std::size_t best = 0;
            for (std::size_t i = 1; i < members.size(); ++i)
                if (members[i].second > members[best].second) best = i;
            return members[best].first;
        }
    }
}

AtomicMeasure coalesce(const Space& space, std::vector<std::pair<Point, double>> atoms,
                       double bin_h) {
    atoms = merge_equal(std::move(atoms));
    if (bin_h > 0.0) {
        std::vector<std::vector<std::pair<Point, double>>> clusters;
        for (auto& a : atoms) {
            bool placed = false;
            for (auto& cl : clusters)
                if (dist(space, cl.front().first, a.first) <= bin_h) {
                    cl.push_back(std::move(a));
                    placed = true;
                    break;
                }
            if (!placed) clusters.push_back({std::move(a)});
        }
        atoms.clear();
        for (const auto& cl : clusters) {
            double w = 0.0;
            for (const auto& [p, wt] : cl) w += wt;
            atoms.emplace_back(cluster_representative(space, cl), w);
        }
    }
    std::vector<Point> pts;
    std::vector<double> w;
    for (auto& [p, wt] : atoms) {
        pts.push_back(std::move(p));
        w.push_back(wt);
    }
    return AtomicMeasure::make(space, std::move(pts), std::move(w));
}

}  // namespace

AtomicMeasure cesaro(const AtomicMeasure& mu, const System& system, int n, double bin_h) {
    if (mu.space() != system.space())
        throw std::invalid_argument("cesaro: measure and system spaces differ");
    if (n < 1) throw std::invalid_argument("cesaro: n must be >= 1");
    if (bin_h < 0.0) throw std::invalid_argument("cesaro: bin_h must be nonnegative");
    std::vector<std::pair<Point, double>> acc;
    acc.reserve(mu.size() * static_cast<std::size_t>(n));
    std::vector<Point> cur;
    cur.reserve(mu.size());
    for (const auto& [p, wt] : mu.atoms()) cur.push_back(p);
    const double scale = 1.0 / static_cast<double>(n);
    for (int k = 0; k < n; ++k) {
        if (k > 0)
            for (auto& p : cur) p = system.apply(p, 1);
        for (std::size_t i = 0; i < cur.size(); ++i)
            acc.emplace_back(cur[i], mu.atoms()[i].second * scale);
    }
    AtomicMeasure out = coalesce(mu.space(), std::move(acc), bin_h);
    out.set_label("cesaro(" + (mu.label().empty() ? "measure" : mu.label()) + ", n=" +
                  std::to_string(n) + ")");
    return out;
}

namespace {

/// Integral of |F_mu - F_nu| over [0,1] for interval measures.
double w1_interval(const AtomicMeasure& mu, const AtomicMeasure& nu) {
    struct Event {
        double x;
        double dmu, dnu;
    };
    std::vector<Event> ev;
    ev.reserve(mu.size() + nu.size());
    for (const auto& [p, w] : mu.atoms()) ev.push_back({p.as_interval().x, w, 0.0});
    for (const auto& [p, w] : nu.atoms()) ev.push_back({p.as_interval().x, 0.0, w});
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
    double total = 0.0, fmu = 0.0, fnu = 0.0, prev = 0.0;
    for (const auto& e : ev) {
        total += std::fabs(fmu - fnu) * (e.x - prev);
        fmu += e.dmu;
        fnu += e.dnu;
        prev = e.x;
    }
    total += std::fabs(fmu - fnu) * (1.0 - prev);
    return total;
}

/// Circle transport: min over the free constant of the CDF-difference
/// integral; the optimum is the length-weighted median of the difference.
double w1_circle(const AtomicMeasure& mu, const AtomicMeasure& nu) {
    struct Event {
        double x;
        double dmu, dnu;
    };
    std::vector<Event> ev;
    ev.reserve(mu.size() + nu.size());
    for (const auto& [p, w] : mu.atoms()) ev.push_back({p.as_circle().t, w, 0.0});
    for (const auto& [p, w] : nu.atoms()) ev.push_back({p.as_circle().t, 0.0, w});
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });

    std::vector<std::pair<double, double>> segs;  // (value, length)
    double fdiff = 0.0, prev = 0.0;
    for (const auto& e : ev) {
        if (e.x > prev) segs.emplace_back(fdiff, e.x - prev);
        fdiff += e.dmu - e.dnu;
        prev = e.x;
    }
    if (1.0 > prev) segs.emplace_back(fdiff, 1.0 - prev);
    if (segs.empty()) return 0.0;
    std::sort(segs.begin(), segs.end());
    double half = 0.0;
    for (const auto& [v, len] : segs) half += len;
    half *= 0.5;
    double accum = 0.0, median = segs.back().first;
    for (const auto& [v, len] : segs) {
        accum += len;
        if (accum >= half) { median = v; break; }
    }
    double total = 0.0;
    for (const auto& [v, len] : segs) total += std::fabs(v - median) * len;
    return total;
}

/// Transportation network simplex with Bland's pivoting rule. Exact optimum
/// for the dense transport problem; finite by Bland's anti-cycling argument.
double w1_transport(const Space& space, const AtomicMeasure& mu, const AtomicMeasure& nu) {
    const int n = static_cast<int>(mu.size());
    const int m = static_cast<int>(nu.size());
    if (n + m > 5000)
        throw std::invalid_argument(
            "w1: combined support above 5000 atoms; coalesce with a bin first");
    std::vector<double> a(n), b(m);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = mu.atoms()[static_cast<std::size_t>(i)].second;
    for (int j = 0; j < m; ++j) b[static_cast<std::size_t>(j)] = nu.atoms()[static_cast<std::size_t>(j)].second;
    {  // balance totals exactly (both are 1 up to rounding)
        double sa = 0.0, sb = 0.0;
        for (double v : a) sa += v;
        for (double v : b) sb += v;
        b[static_cast<std::size_t>(m - 1)] += sa - sb;
    }
    std::vector<double> cost(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            cost[static_cast<std::size_t>(i * m + j)] =
                dist(space, mu.atoms()[static_cast<std::size_t>(i)].first,
                     nu.atoms()[static_cast<std::size_t>(j)].first);

    struct Cell {
        int i, j;
        double x;
    };
    std::vector<Cell> basis;
    basis.reserve(static_cast<std::size_t>(n + m - 1));
    {  // north-west corner start: a spanning-tree basis with n+m-1 cells
        std::vector<double> ra = a, rb = b;
        int i = 0, j = 0;
        while (true) {
            const double t = std::min(ra[static_cast<std::size_t>(i)], rb[static_cast<std::size_t>(j)]);
            basis.push_back({i, j, t});
            ra[static_cast<std::size_t>(i)] -= t;
            rb[static_cast<std::size_t>(j)] -= t;
            if (i == n - 1 && j == m - 1) break;
            if (ra[static_cast<std::size_t>(i)] == 0.0 && i < n - 1)
                ++i;
            else
                ++j;
        }
    }

    const int nodes = n + m;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));  // basis cell indices
    const auto rebuild_adj = [&]() {
        for (auto& v : adj) v.clear();
        for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
            adj[static_cast<std::size_t>(basis[static_cast<std::size_t>(k)].i)].push_back(k);
            adj[static_cast<std::size_t>(n + basis[static_cast<std::size_t>(k)].j)].push_back(k);
        }
    };

    std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(m));
    std::vector<int> parent_cell(static_cast<std::size_t>(nodes));
    std::vector<int> parent_node(static_cast<std::size_t>(nodes));
    std::vector<char> seen(static_cast<std::size_t>(nodes));
    std::vector<int> queue;

    constexpr double kTol = 1e-12;
    const int max_pivots = 200000;
    for (int pivot = 0;; ++pivot) {
        if (pivot > max_pivots) throw std::runtime_error("w1: transport solver exceeded pivot budget");
        rebuild_adj();
        // Duals from the basis tree: u_i + v_j = c_ij on basic cells.
        std::fill(seen.begin(), seen.end(), 0);
        u[0] = 0.0;
        seen[0] = 1;
        queue.assign(1, 0);
        while (!queue.empty()) {
            const int node = queue.back();
            queue.pop_back();
            for (int k : adj[static_cast<std::size_t>(node)]) {
                const Cell& c = basis[static_cast<std::size_t>(k)];
                const int other = node < n ? n + c.j : c.i;
                if (seen[static_cast<std::size_t>(other)]) continue;
                seen[static_cast<std::size_t>(other)] = 1;
                if (other < n)
                    u[static_cast<std::size_t>(other)] =
                        cost[static_cast<std::size_t>(c.i * m + c.j)] - v[static_cast<std::size_t>(c.j)];
                else
                    v[static_cast<std::size_t>(other - n)] =
                        cost[static_cast<std::size_t>(c.i * m + c.j)] - u[static_cast<std::size_t>(c.i)];
                queue.push_back(other);
            }
        }

        // Entering cell: first (row-major) non-basic cell with negative
        // reduced cost (Bland's rule).
        int ei = -1, ej = -1;
        std::vector<char> is_basic(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0);
        for (const auto& c : basis) is_basic[static_cast<std::size_t>(c.i * m + c.j)] = 1;
        for (int i = 0; i < n && ei < 0; ++i)
            for (int j = 0; j < m; ++j) {
                if (is_basic[static_cast<std::size_t>(i * m + j)]) continue;
                if (cost[static_cast<std::size_t>(i * m + j)] - u[static_cast<std::size_t>(i)] -
                        v[static_cast<std::size_t>(j)] <
                    -kTol) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        if (ei < 0) break;  // optimal

        // Unique tree path from source ei to sink ej.
        std::fill(seen.begin(), seen.end(), 0);
        std::fill(parent_cell.begin(), parent_cell.end(), -1);
        seen[static_cast<std::size_t>(ei)] = 1;
        queue.assign(1, ei);
        while (!queue.empty()) {
            const int node = queue.back();
            queue.pop_back();
            for (int k : adj[static_cast<std::size_t>(node)]) {
                const Cell& c = basis[static_cast<std::size_t>(k)];
                const int other = node < n ? n + c.j : c.i;
                if (seen[static_cast<std::size_t>(other)]) continue;
                seen[static_cast<std::size_t>(other)] = 1;
                parent_cell[static_cast<std::size_t>(other)] = k;
                parent_node[static_cast<std::size_t>(other)] = node;
                queue.push_back(other);
            }
        }
        // Collect path cells from ej's node back to ei; signs alternate with
        // the cell adjacent to ei getting the first minus.
        std::vector<int> path;
        for (int node = n + ej; node != ei; node = parent_node[static_cast<std::size_t>(node)])
            path.push_back(parent_cell[static_cast<std::size_t>(node)]);
        // path is ordered from the ej end; reverse so it starts at ei.
        std::reverse(path.begin(), path.end());

        double theta = std::numeric_limits<double>::infinity();
        int leave_pos = -1;
        for (std::size_t p = 0; p < path.size(); p += 2) {  // minus cells
            const Cell& c = basis[static_cast<std::size_t>(path[p])];
            if (c.x < theta - 1e-18 ||
                (c.x <= theta + 1e-18 &&
                 (leave_pos < 0 ||
                  c.i * m + c.j < basis[static_cast<std::size_t>(path[static_cast<std::size_t>(leave_pos)])].i * m +
                                      basis[static_cast<std::size_t>(path[static_cast<std::size_t>(leave_pos)])].j))) {
                theta = std::min(theta, c.x);
                leave_pos = static_cast<int>(p);
            }
        }
        for (std::size_t p = 0; p < path.size(); p += 2)
            basis[static_cast<std::size_t>(path[p])].x -= theta;
        for (std::size_t p = 1; p < path.size(); p += 2)
            basis[static_cast<std::size_t>(path[p])].x += theta;
        basis[static_cast<std::size_t>(path[static_cast<std::size_t>(leave_pos)])] = {ei, ej, theta};
    }

    double total = 0.0;
    for (const auto& c : basis) total += c.x * cost[static_cast<std::size_t>(c.i * m + c.j)];
    return total;
}

}  // namespace

namespace {

/// Canonical argument order keeps w1 exactly symmetric.
std::pair<const AtomicMeasure*, const AtomicMeasure*> ordered(const AtomicMeasure& mu,
                                                              const AtomicMeasure& nu) {
    const auto less = [](const AtomicMeasure& a, const AtomicMeasure& b) {
        const auto& xa = a.atoms();
        const auto& xb = b.atoms();
        for (std::size_t i = 0; i < std::min(xa.size(), xb.size()); ++i) {
            if (xa[i].first != xb[i].first) return xa[i].first < xb[i].first;
            if (xa[i].second != xb[i].second) return xa[i].second < xb[i].second;
        }
        return xa.size() < xb.size();
    };
    if (less(nu, mu)) return {&nu, &mu};
    return {&mu, &nu};
}

}  // namespace

double w1(const Space& space, const AtomicMeasure& mu, const AtomicMeasure& nu) {
    if (mu.space() != space || nu.space() != space)
        throw std::invalid_argument("w1: measures not on the given space");
    const auto [a, b] = ordered(mu, nu);
    switch (space.kind()) {
        case Space::Kind::interval: return w1_interval(*a, *b);
        case Space::Kind::circle: return w1_circle(*a, *b);
        default: return w1_transport(space, *a, *b);
    }
}

double w1_transport_route(const Space& space, const AtomicMeasure& mu, const AtomicMeasure& nu) {
    if (mu.space() != space || nu.space() != space)
        throw std::invalid_argument("w1: measures not on the given space");
    const auto [a, b] = ordered(mu, nu);
    return w1_transport(space, *a, *b);
}

double invariance_defect(const AtomicMeasure& mu, const System& system) {
    return w1(mu.space(), mu, pushforward(mu, system, 1));
}

std::vector<Point> support(const AtomicMeasure& mu, double tol) {
    if (tol < 0.0) throw std::invalid_argument("support: tol must be nonnegative");
    std::vector<Point> out;
    for (const auto& [p, w] : mu.atoms())
        if (w > tol) out.push_back(p);
    return out;
}

namespace {

MeasureTestReport mask_mass_sweep(const AtomicMeasure& mu, const System& system, GridPtr grid,
                                  int n_lo, int n_hi, double threshold, double r, double tol,
                                  bool cell_mode) {
    if (mu.space() != system.space() || !(grid->space() == system.space()))
        throw std::invalid_argument("measure test: space mismatch");
    MeasureTestReport rep;
    rep.system_id = system.id();
    rep.measure_label = mu.label().empty() ? "measure" : mu.label();
    rep.N = n_hi;
    rep.threshold = threshold;
    rep.r = r;
    rep.tol = tol;

    detail::SweepEngine engine(system, grid, n_lo, n_hi, threshold);
    // An atom counts toward a mask when it lies within grid.h/2 of a mask
    // point; this is the one place measure and grid resolutions interact.
    std::vector<std::vector<std::size_t>> atom_hits(mu.size());
    for (std::size_t a = 0; a < mu.size(); ++a)
        atom_hits[a] = grid->near_indices(mu.atoms()[a].first, grid->h() / 2.0);

    rep.per_center_mass.assign(grid->size(), 0.0);
    for (std::size_t c = 0; c < grid->size(); ++c) {
        const auto mask = cell_mode ? engine.cell(c) : engine.ball(c);
        const auto inner = engine.interior(mask, r);
        if (inner.count() == 0) continue;
        double mass = 0.0;
        for (std::size_t a = 0; a < mu.size(); ++a) {
            for (std::size_t idx : atom_hits[a])
                if (inner.test(idx)) {
                    mass += mu.atoms()[a].second;
                    break;
                }
        }
        rep.per_center_mass[c] = mass;
        if (mass > rep.max_mass) {
            rep.max_mass = mass;
            rep.argmax_center = c;
        }
    }
    rep.pass = rep.max_mass <= tol;
    return rep;
}

}  // namespace

MeasureTestReport inner_distal_measure_test(const AtomicMeasure& mu, const System& system,
                                            GridPtr grid, const HorizonParams& params,
                                            double tol) {
    return mask_mass_sweep(mu, system, grid, -params.N, params.N, params.eps,
                           params.interior_scale(grid->h()), tol, true);
}

MeasureTestReport meagre_expansive_measure_test(const AtomicMeasure& mu, const System& system,
                                                GridPtr grid, double delta, int N, double r,
                                                double tol, BallSide side) {
    if (delta <= 0.0) throw std::invalid_argument("meagre test: delta must be positive");
    return mask_mass_sweep(mu, system, grid, side == BallSide::two_sided ? -N : 0, N, delta,
                           r > 0.0 ? r : 3.0 * grid->h(), tol, false);
}

}  // namespace proxlab
