#include "proxlab/detail/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxlab::detail {

FlatOrbits compute_orbits(const System& system, std::span<const Point> pts, int n_lo, int n_hi) {
    if (n_lo > n_hi) throw std::invalid_argument("orbit window reversed");
    FlatOrbits o;
    o.n_lo = n_lo;
    o.n_hi = n_hi;
    o.dim = axis_count(system.space());
    o.count = pts.size();
    o.circular = metric_axes(system.space());
    o.data.resize(o.count * o.span() * o.dim);
    const Space& space = system.space();
    // Orbits are walked away from the base point in each direction; starting
    // at f^(n_lo)(x) and stepping forward would route backward iterates of
    // contracting maps through underflow and destroy the rest of the orbit.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto fill = [&](int n, const Point& p) {
            flatten_coords(space, p,
                           o.data.data() + (i * o.span() + static_cast<std::size_t>(n - n_lo)) * o.dim);
        };
        if (n_hi >= 0) {
            Point cur = pts[i];
            if (0 >= n_lo) fill(0, cur);
            for (int n = 1; n <= n_hi; ++n) {
                cur = system.apply(cur, 1);
                if (n >= n_lo) fill(n, cur);
            }
        }
        if (n_lo < 0) {
            Point cur = pts[i];
            for (int n = -1; n >= n_lo; --n) {
                cur = system.apply(cur, -1);
                if (n <= n_hi) fill(n, cur);
            }
        }
    }
    return o;
}

double flat_dist(const double* a, const double* b, std::span<const std::uint8_t> circular) {
    double best = 0.0;
    for (std::size_t k = 0; k < circular.size(); ++k) {
        const double diff = std::fabs(a[k] - b[k]);
        const double d = circular[k] ? std::min(diff, 1.0 - diff) : diff;
        if (d > best) best = d;
    }
    return best;
}

WindowTable::WindowTable(const System& system, const Grid& grid, int n_lo, int n_hi,
                         double threshold)
    : n_lo_(n_lo), n_hi_(n_hi), count_(grid.size()) {
    const std::size_t span = static_cast<std::size_t>(n_hi - n_lo + 1);
    words_ = (span + 63) / 64;
    if (words_ > 4)
        throw std::invalid_argument("window tables support horizons up to 127 iterates");
    const double approx_bytes =
        static_cast<double>(count_) * static_cast<double>(count_) * static_cast<double>(words_) * 8.0;
    if (approx_bytes > 600.0 * 1024 * 1024)
        throw std::invalid_argument("window table would exceed the memory budget; coarsen the grid");
    full_.assign(words_, 0);
    for (std::size_t k = 0; k < span; ++k) full_[k / 64] |= std::uint64_t(1) << (k % 64);

    const FlatOrbits orbits = compute_orbits(system, grid.points(), n_lo, n_hi);
    bits_.assign(count_ * count_ * words_, 0);
    const std::size_t dim = orbits.dim;
    std::vector<std::uint64_t> acc(words_);
    for (std::size_t i = 0; i < count_; ++i) {
        for (std::size_t j = i; j < count_; ++j) {
            std::fill(acc.begin(), acc.end(), 0);
            const double* oi = orbits.at(i, n_lo);
            const double* oj = orbits.at(j, n_lo);
            for (std::size_t k = 0; k < span; ++k) {
                const double d = flat_dist(oi + k * dim, oj + k * dim, orbits.circular);
                if (d <= threshold) acc[k / 64] |= std::uint64_t(1) << (k % 64);
            }
            std::copy(acc.begin(), acc.end(), bits_.begin() + (i * count_ + j) * words_);
            std::copy(acc.begin(), acc.end(), bits_.begin() + (j * count_ + i) * words_);
        }
    }
}

std::size_t SweepMask::count() const {
    if (!rect) {
        std::size_t c = 0;
        for (char b : flat) c += b != 0;
        return c;
    }
    std::size_t l = 0, r = 0;
    for (char b : left) l += b != 0;
    for (char b : right) r += b != 0;
    return l * r;
}

std::optional<std::size_t> SweepMask::first() const {
    if (!rect) {
        for (std::size_t i = 0; i < flat.size(); ++i)
            if (flat[i]) return i;
        return std::nullopt;
    }
    for (std::size_t l = 0; l < left.size(); ++l) {
        if (!left[l]) continue;
        for (std::size_t r = 0; r < right.size(); ++r)
            if (right[r]) return l * right_count + r;
        return std::nullopt;
    }
    return std::nullopt;
}

SweepEngine::SweepEngine(const System& system, GridPtr grid, int n_lo, int n_hi, double threshold)
    : grid_(std::move(grid)) {
    const bool product_pair = system.is_product() && grid_->left_grid() && grid_->right_grid() &&
                              system.factor_left().space() == grid_->left_grid()->space() &&
                              system.factor_right().space() == grid_->right_grid()->space();
    if (product_pair) {
        split_ = true;
        left_.emplace(system.factor_left(), *grid_->left_grid(), n_lo, n_hi, threshold);
        right_.emplace(system.factor_right(), *grid_->right_grid(), n_lo, n_hi, threshold);
    } else {
        dense_.emplace(system, *grid_, n_lo, n_hi, threshold);
    }
}

SweepMask SweepEngine::dense_cell(std::size_t center) const {
    SweepMask m;
    m.flat.assign(grid_->size(), 0);
    for (std::size_t y = 0; y < grid_->size(); ++y)
        if (dense_->any(center, y)) m.flat[y] = 1;
    return m;
}

SweepMask SweepEngine::cell(std::size_t center) const {
    if (!split_) return dense_cell(center);
    const std::size_t gr = grid_->right_grid()->size();
    const std::size_t gl = grid_->left_grid()->size();
    const std::size_t cl = center / gr;
    const std::size_t cr = center % gr;

    // If one factor's row takes a single nonzero bit pattern, the cell is the
    // rectangle of the matching rows on the other side.
    const auto single_value = [&](const WindowTable& t, std::size_t c) -> const std::uint64_t* {
        const std::uint64_t* value = nullptr;
        for (std::size_t y = 0; y < t.count(); ++y) {
            const std::uint64_t* r = t.row(c, y);
            if (t.is_zero(r)) continue;
            if (!value)
                value = r;
            else if (!t.equal(value, r))
                return nullptr;
        }
        return value;
    };

    SweepMask m;
    m.rect = true;
    m.right_count = gr;
    if (const std::uint64_t* v = single_value(*left_, cl)) {
        m.left.assign(gl, 0);
        m.right.assign(gr, 0);
        for (std::size_t y = 0; y < gl; ++y)
            if (!left_->is_zero(left_->row(cl, y))) m.left[y] = 1;
        for (std::size_t y = 0; y < gr; ++y)
            if (right_->intersects(right_->row(cr, y), v)) m.right[y] = 1;
        return m;
    }
    if (const std::uint64_t* v = single_value(*right_, cr)) {
        m.left.assign(gl, 0);
        m.right.assign(gr, 0);
        for (std::size_t y = 0; y < gl; ++y)
            if (left_->intersects(left_->row(cl, y), v)) m.left[y] = 1;
        for (std::size_t y = 0; y < gr; ++y)
            if (!right_->is_zero(right_->row(cr, y))) m.right[y] = 1;
        return m;
    }
    m.rect = false;
    m.flat.assign(grid_->size(), 0);
    for (std::size_t yl = 0; yl < gl; ++yl) {
        const std::uint64_t* a = left_->row(cl, yl);
        if (left_->is_zero(a)) continue;
        for (std::size_t yr = 0; yr < gr; ++yr)
            if (left_->intersects(a, right_->row(cr, yr))) m.flat[yl * gr + yr] = 1;
    }
    return m;
}

SweepMask SweepEngine::ball(std::size_t center) const {
    SweepMask m;
    if (!split_) {
        m.flat.assign(grid_->size(), 0);
        for (std::size_t y = 0; y < grid_->size(); ++y)
            if (dense_->full(center, y)) m.flat[y] = 1;
        return m;
    }
    const std::size_t gr = grid_->right_grid()->size();
    const std::size_t gl = grid_->left_grid()->size();
    m.rect = true;
    m.right_count = gr;
    m.left.assign(gl, 0);
    m.right.assign(gr, 0);
    for (std::size_t y = 0; y < gl; ++y)
        if (left_->full(center / gr, y)) m.left[y] = 1;
    for (std::size_t y = 0; y < gr; ++y)
        if (right_->full(center % gr, y)) m.right[y] = 1;
    return m;
}

SubsetMask SweepEngine::to_subset(const SweepMask& m) const {
    SubsetMask out(grid_);
    for (std::size_t i = 0; i < grid_->size(); ++i)
        if (m.test(i)) out.set(i);
    return out;
}

std::vector<char> erode(const Grid& grid, const std::vector<char>& mask, double r) {
    std::vector<char> out(mask.size(), 0);
    std::vector<std::size_t> nbrs;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        nbrs.clear();
        grid.neighbors_within(i, r, nbrs);
        bool inside = true;
        for (std::size_t j : nbrs)
            if (!mask[j]) { inside = false; break; }
        if (inside) out[i] = 1;
    }
    return out;
}

SweepMask SweepEngine::interior(const SweepMask& m, double r) const {
    SweepMask out;
    if (m.rect) {
        out.rect = true;
        out.right_count = m.right_count;
        out.left = erode(*grid_->left_grid(), m.left, r);
        out.right = erode(*grid_->right_grid(), m.right, r);
        return out;
    }
    out.flat = erode(*grid_, m.flat, r);
    return out;
}

}  // namespace proxlab::detail
