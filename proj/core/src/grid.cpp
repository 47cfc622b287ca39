#include "proxlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace proxlab {

const std::vector<std::size_t> Grid::empty_bucket_;

namespace {

int offsets_per_axis(double r, double step) {
    if (r <= 0.0) return 0;
    return static_cast<int>(std::floor(r / step + 1e-9));
}

void enumerate_seq_grid(int level, std::vector<Point>& out) {
    // All canonical points with periods of length <= L and a core window
    // inside [-L, L). Dedup through canonical ordering.
    const int L = level;
    std::vector<std::string> words_upto;  // nonempty words, length <= L
    words_upto.push_back("0");
    words_upto.push_back("1");
    for (int len = 2; len <= L; ++len) {
        std::vector<std::string> next;
        for (const auto& w : words_upto)
            if (static_cast<int>(w.size()) == len - 1) {
                next.push_back(w + "0");
                next.push_back(w + "1");
            }
        words_upto.insert(words_upto.end(), next.begin(), next.end());
    }
    std::vector<std::string> cores{""};
    cores.insert(cores.end(), words_upto.begin(), words_upto.end());

    std::set<SeqPoint> seen;
    for (const auto& lp : words_upto)
        for (const auto& core : cores)
            for (const auto& rp : words_upto) {
                const long long clen = static_cast<long long>(core.size());
                for (long long o = -L; o + clen <= L; ++o)
                    seen.insert(SeqPoint(lp, core, rp, o));
            }
    out.reserve(seen.size());
    for (const auto& p : seen) out.push_back(Point(p));
}

}  // namespace

GridPtr Grid::build(const Space& space, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid resolution h must be positive");
    auto grid = std::shared_ptr<Grid>(new Grid(space, h));

    switch (space.kind()) {
        case Space::Kind::circle: {
            const std::size_t n = static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9));
            const std::size_t count = std::max<std::size_t>(n, 1);
            grid->axes_.push_back({true, count, 1.0 / static_cast<double>(count)});
            break;
        }
        case Space::Kind::interval: {
            const std::size_t cells =
                std::max<std::size_t>(static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9)), 1);
            grid->axes_.push_back({false, cells + 1, 1.0 / static_cast<double>(cells)});
            break;
        }
        case Space::Kind::torus: {
            const std::size_t n = std::max<std::size_t>(
                static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9)), 1);
            const double step = 1.0 / static_cast<double>(n);
            grid->axes_.push_back({true, n, step});
            grid->axes_.push_back({true, n, step});
            break;
        }
        case Space::Kind::product: {
            grid->left_grid_ = build(space.left(), h);
            grid->right_grid_ = build(space.right(), h);
            if (!grid->left_grid_->is_lattice() || !grid->right_grid_->is_lattice())
                throw std::invalid_argument("product grids require lattice factors");
            grid->axes_ = grid->left_grid_->axes_;
            grid->axes_.insert(grid->axes_.end(), grid->right_grid_->axes_.begin(),
                               grid->right_grid_->axes_.end());
            break;
        }
        case Space::Kind::binary_seq: {
            const int L =
                std::max(1, static_cast<int>(std::ceil(-std::log2(h) - 1e-9)));
            if (L > 4)
                throw std::invalid_argument(
                    "binary sequence grids support h >= 1/16 (enumeration grows "
                    "exponentially below that)");
            grid->seq_level_ = L;
            enumerate_seq_grid(L, grid->points_);
            return grid;
        }
    }
    grid->build_lattice_points();
    return grid;
}

namespace {

Point lattice_point(const Space& space, const std::vector<GridAxis>& axes, std::size_t axis_at,
                    const std::vector<std::size_t>& idx) {
    switch (space.kind()) {
        case Space::Kind::circle:
            return Point::circle(Rational(static_cast<std::int64_t>(idx[axis_at]),
                                          static_cast<std::int64_t>(axes[axis_at].count)));
        case Space::Kind::interval:
            return Point::interval(Rational(static_cast<std::int64_t>(idx[axis_at]),
                                            static_cast<std::int64_t>(axes[axis_at].count - 1)));
        case Space::Kind::torus:
            return Point::torus(Rational(static_cast<std::int64_t>(idx[axis_at]),
                                         static_cast<std::int64_t>(axes[axis_at].count)),
                                Rational(static_cast<std::int64_t>(idx[axis_at + 1]),
                                         static_cast<std::int64_t>(axes[axis_at + 1].count)));
        default:
            throw std::logic_error("lattice_point on non-lattice space");
    }
}

std::size_t space_axis_count(const Space& s) {
    switch (s.kind()) {
        case Space::Kind::circle:
        case Space::Kind::interval: return 1;
        case Space::Kind::torus: return 2;
        case Space::Kind::product: return space_axis_count(s.left()) + space_axis_count(s.right());
        default: throw std::logic_error("no axes for binary sequence space");
    }
}

Point compose_point(const Space& space, const std::vector<GridAxis>& axes,
                    const std::vector<std::size_t>& idx, std::size_t axis_at) {
    if (space.kind() != Space::Kind::product) return lattice_point(space, axes, axis_at, idx);
    const std::size_t left_axes = space_axis_count(space.left());
    return Point::product(compose_point(space.left(), axes, idx, axis_at),
                          compose_point(space.right(), axes, idx, axis_at + left_axes));
}

}  // namespace

void Grid::build_lattice_points() {
    dim_ = axes_.size();
    std::size_t total = 1;
    for (const auto& a : axes_) total *= a.count;
    points_.reserve(total);
    flat_.reserve(total * dim_);

    std::vector<std::size_t> idx(dim_, 0);
    for (std::size_t i = 0; i < total; ++i) {
        points_.push_back(compose_point(space_, axes_, idx, 0));
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto& a = axes_[k];
            const double denom =
                a.circular ? static_cast<double>(a.count) : static_cast<double>(a.count - 1);
            flat_.push_back(static_cast<double>(idx[k]) / denom);
        }
        for (std::size_t k = dim_; k-- > 0;) {
            if (++idx[k] < axes_[k].count) break;
            idx[k] = 0;
        }
    }
}

std::string Grid::seq_key(const SeqPoint& p, int level) const {
    if (level <= 0) return "";
    return p.window(-(level - 1), level - 1);
}

const std::vector<std::size_t>& Grid::seq_bucket(int level, const std::string& key) const {
    std::lock_guard<std::mutex> lock(seq_mutex_);
    auto& by_key = seq_buckets_[level];
    if (by_key.empty()) {
        for (std::size_t i = 0; i < points_.size(); ++i)
            by_key[seq_key(points_[i].as_seq(), level)].push_back(i);
    }
    auto it = by_key.find(key);
    return it == by_key.end() ? empty_bucket_ : it->second;
}

void Grid::neighbors_within(std::size_t i, double r, std::vector<std::size_t>& out) const {
    if (r < 0.0) throw std::invalid_argument("neighbor radius must be nonnegative");
    if (seq_level_) {
        const int level = r >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log2(r) - 1e-9));
        if (level <= 0) {
            for (std::size_t j = 0; j < size(); ++j) out.push_back(j);
            return;
        }
        const auto& self = points_[i].as_seq();
        // Window buckets answer radii down to one level past the enumeration
        // scale; below that fall back to exact pairwise distances.
        if (level <= *seq_level_ + 2) {
            const auto& bucket = seq_bucket(level, seq_key(self, level));
            out.insert(out.end(), bucket.begin(), bucket.end());
            return;
        }
        for (std::size_t j = 0; j < size(); ++j)
            if (SeqPoint::dist(self, points_[j].as_seq()) <= r) out.push_back(j);
        return;
    }

    // Lattice: per-axis offset ranges; the max metric makes them independent.
    std::vector<std::size_t> strides(dim_, 1);
    for (std::size_t k = dim_ - 1; k-- > 0;) strides[k] = strides[k + 1] * axes_[k + 1].count;
    std::vector<std::vector<std::size_t>> cand(dim_);
    std::size_t rest = i;
    for (std::size_t k = 0; k < dim_; ++k) {
        const std::size_t ik = rest / strides[k];
        rest %= strides[k];
        const auto& a = axes_[k];
        const int m = offsets_per_axis(r, a.step);
        if (a.circular && 2 * m + 1 >= static_cast<int>(a.count)) {
            for (std::size_t v = 0; v < a.count; ++v) cand[k].push_back(v);
        } else {
            for (int d = -m; d <= m; ++d) {
                const long long v = static_cast<long long>(ik) + d;
                if (a.circular) {
                    const long long c = static_cast<long long>(a.count);
                    cand[k].push_back(static_cast<std::size_t>(((v % c) + c) % c));
                } else if (v >= 0 && v < static_cast<long long>(a.count)) {
                    cand[k].push_back(static_cast<std::size_t>(v));
                }
            }
        }
    }
    std::vector<std::size_t> pos(dim_, 0);
    while (true) {
        std::size_t j = 0;
        for (std::size_t k = 0; k < dim_; ++k) j += cand[k][pos[k]] * strides[k];
        out.push_back(j);
        std::size_t k = dim_;
        while (k-- > 0) {
            if (++pos[k] < cand[k].size()) break;
            pos[k] = 0;
            if (k == 0) return;
        }
    }
}

std::vector<std::size_t> Grid::near_indices(const Point& p, double tol) const {
    std::vector<std::size_t> out;
    if (seq_level_) {
        const auto& sp = p.as_seq();
        for (std::size_t j = 0; j < size(); ++j)
            if (SeqPoint::dist(sp, points_[j].as_seq()) <= tol) out.push_back(j);
        return out;
    }
    // Locate the nearest lattice cell per axis, then widen by the tolerance.
    std::vector<std::size_t> strides(dim_, 1);
    for (std::size_t k = dim_ - 1; k-- > 0;) strides[k] = strides[k + 1] * axes_[k + 1].count;

    // Flatten the point's coordinates in axis order.
    std::vector<double> coords;
    coords.reserve(dim_);
    const auto flatten = [&](const auto& self, const Space& s, const Point& q) -> void {
        switch (s.kind()) {
            case Space::Kind::circle: coords.push_back(q.as_circle().t); return;
            case Space::Kind::interval: coords.push_back(q.as_interval().x); return;
            case Space::Kind::torus:
                coords.push_back(q.as_torus().a.to_double());
                coords.push_back(q.as_torus().b.to_double());
                return;
            case Space::Kind::product:
                self(self, s.left(), q.left());
                self(self, s.right(), q.right());
                return;
            default: throw std::logic_error("flatten on sequence space");
        }
    };
    flatten(flatten, space_, p);

    std::vector<std::vector<std::size_t>> cand(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        const auto& a = axes_[k];
        const long long base = static_cast<long long>(std::floor(coords[k] / a.step));
        const int spread = 1 + offsets_per_axis(tol, a.step);
        for (long long v = base - spread; v <= base + spread; ++v) {
            long long idx = v;
            double axis_dist;
            if (a.circular) {
                const long long c = static_cast<long long>(a.count);
                idx = ((v % c) + c) % c;
                axis_dist = circle_dist(coords[k], static_cast<double>(v) * a.step);
            } else {
                if (v < 0 || v >= static_cast<long long>(a.count)) continue;
                axis_dist = std::fabs(coords[k] - static_cast<double>(v) * a.step);
            }
            if (axis_dist <= tol + 1e-15 &&
                std::find(cand[k].begin(), cand[k].end(), static_cast<std::size_t>(idx)) ==
                    cand[k].end())
                cand[k].push_back(static_cast<std::size_t>(idx));
        }
        if (cand[k].empty()) return {};
    }
    std::vector<std::size_t> pos(dim_, 0);
    while (true) {
        std::size_t j = 0;
        for (std::size_t k = 0; k < dim_; ++k) j += cand[k][pos[k]] * strides[k];
        if (dist(space_, p, points_[j]) <= tol + 1e-15) out.push_back(j);
        std::size_t k = dim_;
        while (k-- > 0) {
            if (++pos[k] < cand[k].size()) break;
            pos[k] = 0;
            if (k == 0) {
                std::sort(out.begin(), out.end());
                return out;
            }
        }
    }
}

SubsetMask SubsetMask::full(GridPtr grid) {
    SubsetMask m(std::move(grid));
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i);
    return m;
}

std::size_t SubsetMask::count() const {
    std::size_t c = 0;
    for (char b : bits_) c += b != 0;
    return c;
}

std::vector<std::size_t> SubsetMask::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

bool SubsetMask::any() const {
    for (char b : bits_)
        if (b) return true;
    return false;
}

bool SubsetMask::is_subset_of(const SubsetMask& o) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !o.bits_[i]) return false;
    return true;
}

SubsetMask interior_points(const SubsetMask& mask, double r) {
    if (r < 0.0) throw std::invalid_argument("interior scale must be nonnegative");
    const auto& grid = *mask.grid();
    SubsetMask out(mask.grid());
    std::vector<std::size_t> nbrs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!mask.test(i)) continue;
        nbrs.clear();
        grid.neighbors_within(i, r, nbrs);
        bool inside = true;
        for (std::size_t j : nbrs)
            if (!mask.test(j)) { inside = false; break; }
        if (inside) out.set(i);
    }
    return out;
}

std::vector<SubsetMask> chain_components(const SubsetMask& mask, double step) {
    const auto& grid = *mask.grid();
    std::vector<int> comp(grid.size(), -1);
    std::vector<SubsetMask> out;
    std::vector<std::size_t> stack, nbrs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!mask.test(i) || comp[i] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back(mask.grid());
        comp[i] = id;
        stack.assign(1, i);
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            out[static_cast<std::size_t>(id)].set(v);
            nbrs.clear();
            grid.neighbors_within(v, step, nbrs);
            for (std::size_t w : nbrs)
                if (mask.test(w) && comp[w] < 0) {
                    comp[w] = id;
                    stack.push_back(w);
                }
        }
    }
    return out;
}

}  // namespace proxlab
