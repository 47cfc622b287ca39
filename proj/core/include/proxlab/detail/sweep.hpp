#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "proxlab/grid.hpp"
#include "proxlab/system.hpp"

namespace proxlab::detail {

/// Flattened orbits of a set of points: data[(pt * span + k) * dim + axis]
/// holds coordinate `axis` of f^(n_lo + k)(pt). Exact representations are
/// iterated exactly and rounded per step.
struct FlatOrbits {
    int n_lo = 0, n_hi = 0;
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<double> data;
    std::vector<std::uint8_t> circular;

    std::size_t span() const { return static_cast<std::size_t>(n_hi - n_lo + 1); }
    const double* at(std::size_t pt, int n) const {
        return data.data() + (pt * span() + static_cast<std::size_t>(n - n_lo)) * dim;
    }
};

FlatOrbits compute_orbits(const System& system, std::span<const Point> pts, int n_lo, int n_hi);

double flat_dist(const double* a, const double* b, std::span<const std::uint8_t> circular);

/// For every ordered pair (center, target) the set of window offsets n with
/// d(f^n(center), f^n(target)) <= threshold, packed as bits (bit k is
/// n = n_lo + k).
class WindowTable {
  public:
    WindowTable(const System& system, const Grid& grid, int n_lo, int n_hi, double threshold);

    int n_lo() const { return n_lo_; }
    int n_hi() const { return n_hi_; }
    std::size_t words() const { return words_; }
    std::size_t count() const { return count_; }

    const std::uint64_t* row(std::size_t c, std::size_t y) const {
        return bits_.data() + (c * count_ + y) * words_;
    }
    bool any(std::size_t c, std::size_t y) const {
        const std::uint64_t* r = row(c, y);
        for (std::size_t w = 0; w < words_; ++w)
            if (r[w]) return true;
        return false;
    }
    bool full(std::size_t c, std::size_t y) const {
        const std::uint64_t* r = row(c, y);
        for (std::size_t w = 0; w < words_; ++w)
            if (r[w] != full_[w]) return false;
        return true;
    }
    bool intersects(const std::uint64_t* a, const std::uint64_t* b) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (a[w] & b[w]) return true;
        return false;
    }
    bool is_zero(const std::uint64_t* a) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (a[w]) return false;
        return true;
    }
    bool equal(const std::uint64_t* a, const std::uint64_t* b) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (a[w] != b[w]) return false;
        return true;
    }

  private:
    int n_lo_, n_hi_;
    std::size_t words_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> full_;
};

/// A grid subset that is either explicit or a rectangle (product of factor
/// subsets of a product grid, global index = left * right_count + right).
struct SweepMask {
    bool rect = false;
    std::vector<char> flat;          // explicit membership, size = grid size
    std::vector<char> left, right;   // rectangle factors
    std::size_t right_count = 0;

    std::size_t count() const;
    bool test(std::size_t i) const {
        if (!rect) return flat[i] != 0;
        return left[i / right_count] != 0 && right[i % right_count] != 0;
    }
    std::optional<std::size_t> first() const;
};

/// Proximal-cell / dynamic-ball sweeps over all grid centers. Product systems
/// on product grids factor through per-component window tables; everything
/// else uses a dense table over the whole grid.
class SweepEngine {
  public:
    SweepEngine(const System& system, GridPtr grid, int n_lo, int n_hi, double threshold);

    const GridPtr& grid() const { return grid_; }
    bool split() const { return split_; }

    /// {y : some n in window has d(f^n c, f^n y) <= threshold}
    SweepMask cell(std::size_t center) const;
    /// {y : every n in window has d(f^n c, f^n y) <= threshold}
    SweepMask ball(std::size_t center) const;

    SubsetMask to_subset(const SweepMask& m) const;
    SweepMask interior(const SweepMask& m, double r) const;

  private:
    SweepMask dense_cell(std::size_t center) const;
    GridPtr grid_;
    bool split_ = false;
    std::optional<WindowTable> dense_;
    std::optional<WindowTable> left_, right_;
};

/// Erosion of an explicit factor mask at scale r inside its own grid.
std::vector<char> erode(const Grid& grid, const std::vector<char>& mask, double r);

}  // namespace proxlab::detail
