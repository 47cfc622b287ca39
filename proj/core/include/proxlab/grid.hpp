#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "proxlab/space.hpp"

namespace proxlab {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// One coordinate axis of a lattice grid. Circle axes wrap; interval axes
/// clamp at the endpoints (relative topology: boundary points only have
/// one-sided neighbors, which is exactly what relative balls require).
struct GridAxis {
    bool circular = false;
    std::size_t count = 0;
    double step = 0.0;
};

/// A finite eps-net of a space. Circle/interval/torus and their products are
/// uniform lattices whose neighbor structure is index arithmetic; binary
/// sequence grids enumerate all eventually periodic points with description
/// length bounded by the scale, and answer neighbor queries through window
/// buckets (two sequences are 2^-m close iff they agree on |n| < m).
class Grid : public std::enable_shared_from_this<Grid> {
  public:
    static GridPtr build(const Space& space, double h);

    const Space& space() const { return space_; }
    double h() const { return h_; }
    std::size_t size() const { return points_.size(); }
    const Point& point(std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }

    bool is_lattice() const { return !axes_.empty(); }
    const std::vector<GridAxis>& axes() const { return axes_; }
    std::size_t dim() const { return axes_.size(); }
    std::span<const double> coords(std::size_t i) const {
        return {flat_.data() + i * dim_, dim_};
    }

    /// Component grids of a product-space grid (same h).
    const GridPtr& left_grid() const { return left_grid_; }
    const GridPtr& right_grid() const { return right_grid_; }

    /// Appends the indices of every grid point within distance r of point i
    /// (point i itself included).
    void neighbors_within(std::size_t i, double r, std::vector<std::size_t>& out) const;

    /// Indices of grid points within distance tol of an arbitrary point of the
    /// space. Used to attach measure atoms to masks.
    std::vector<std::size_t> near_indices(const Point& p, double tol) const;

    /// Word-enumeration scale of a binary sequence grid.
    std::optional<int> seq_scale() const {
        return seq_level_ ? std::optional<int>(*seq_level_) : std::nullopt;
    }

  private:
    Grid(Space space, double h) : space_(std::move(space)), h_(h) {}

    void build_lattice_points();
    const std::vector<std::size_t>& seq_bucket(int level, const std::string& key) const;
    std::string seq_key(const SeqPoint& p, int level) const;

    Space space_;
    double h_;
    std::vector<Point> points_;
    std::vector<GridAxis> axes_;
    std::size_t dim_ = 0;
    std::vector<double> flat_;
    GridPtr left_grid_, right_grid_;

    std::optional<int> seq_level_;
    mutable std::mutex seq_mutex_;
    mutable std::unordered_map<int, std::unordered_map<std::string, std::vector<std::size_t>>>
        seq_buckets_;
    static const std::vector<std::size_t> empty_bucket_;
};

inline GridPtr grid_ptr_of(const Grid& g) { return g.shared_from_this(); }

/// Subset of a grid as an inclusion flag per grid point.
class SubsetMask {
  public:
    explicit SubsetMask(GridPtr grid) : grid_(std::move(grid)), bits_(grid_->size(), 0) {}
    static SubsetMask full(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return bits_.size(); }
    bool test(std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v = true) { bits_[i] = v ? 1 : 0; }
    std::size_t count() const;
    std::vector<std::size_t> indices() const;
    bool any() const;

    bool operator==(const SubsetMask& o) const { return bits_ == o.bits_; }
    bool is_subset_of(const SubsetMask& o) const;

  private:
    GridPtr grid_;
    std::vector<char> bits_;
};

/// Points of the mask whose whole r-ball of grid points stays inside the mask.
/// r = 0 returns the mask unchanged.
SubsetMask interior_points(const SubsetMask& mask, double r);

/// Connected components of the graph joining mask points at distance <= step,
/// ordered by smallest contained index.
std::vector<SubsetMask> chain_components(const SubsetMask& mask, double step);

}  // namespace proxlab
