#pragma once

#include <vector>

#include "proxlab/system.hpp"

namespace proxlab::detail {

/// A strictly increasing degree-one circle map given by affine pieces whose
/// domains tile [0,1). Image intervals may wrap.
struct PiecewiseCircleMap {
    struct Piece {
        double dom_start, dom_len, img_start, img_len;
    };
    std::vector<Piece> pieces;  // sorted by dom_start

    double eval(double t) const;
    PiecewiseCircleMap inverse() const;
};

struct DenjoyTables {
    explicit DenjoyTables(const DenjoyParams& params);

    PiecewiseCircleMap forward;
    PiecewiseCircleMap backward;
    double wandering_lo = 0.0;
    double wandering_hi = 0.0;
};

}  // namespace proxlab::detail
