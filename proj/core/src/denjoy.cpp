#include "proxlab/detail/denjoy_tables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxlab::detail {

namespace {

double cyc_len(double from, double to) {
    double d = to - from;
    d -= std::floor(d);
    return d;
}

}  // namespace

double PiecewiseCircleMap::eval(double t) const {
    t = wrap_unit(t);
    // Pieces are sorted by dom_start in [0,1); find the piece containing t.
    auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                               [](double v, const Piece& p) { return v < p.dom_start; });
    const Piece& p = it == pieces.begin() ? pieces.back() : *(it - 1);
    double u = t - p.dom_start;
    if (u < 0.0) u += 1.0;
    if (u > p.dom_len) u = p.dom_len;  // guard against rounding at the seam
    const double image = p.dom_len > 0.0 ? p.img_start + u * (p.img_len / p.dom_len) : p.img_start;
    return wrap_unit(image);
}

PiecewiseCircleMap PiecewiseCircleMap::inverse() const {
    PiecewiseCircleMap inv;
    inv.pieces.reserve(pieces.size());
    for (const auto& p : pieces) {
        // Degenerate image pieces cannot be inverted; the construction below
        // never produces them (every gap and flesh arc has positive length).
        inv.pieces.push_back({wrap_unit(p.img_start), p.img_len, p.dom_start, p.dom_len});
    }
    std::sort(inv.pieces.begin(), inv.pieces.end(),
              [](const Piece& a, const Piece& b) { return a.dom_start < b.dom_start; });
    return inv;
}

DenjoyTables::DenjoyTables(const DenjoyParams& params) {
    params.validate();
    const int K = params.K;
    const double c = params.c;

    struct Gap {
        double base;    // orbit point n*alpha mod 1
        int n;          // orbit index
        double len;     // inserted length before normalization
        double a = 0.0; // left endpoint after insertion
        double lam = 0.0;
    };
    std::vector<Gap> gaps;
    gaps.reserve(2 * static_cast<std::size_t>(K) + 1);
    double total = 0.0;
    for (int n = -K; n <= K; ++n) {
        const double len = c * std::ldexp(1.0, -std::abs(n)) / 3.0;
        gaps.push_back({wrap_unit(static_cast<double>(n) * params.alpha), n, len});
        total += len;
    }
    std::sort(gaps.begin(), gaps.end(), [](const Gap& x, const Gap& y) { return x.base < y.base; });

    const double scale = 1.0 + total;
    double acc = 0.0;
    for (auto& g : gaps) {
        g.a = (g.base + acc) / scale;
        g.lam = g.len / scale;
        acc += g.len;
    }
    const auto psi = [&](double t) {
        t = wrap_unit(t);
        double inserted = 0.0;
        for (const auto& g : gaps)
            if (g.base < t) inserted += g.len;
        return (t + inserted) / scale;
    };

    std::vector<double> img_start(gaps.size()), img_len(gaps.size());
    const double succ_base = wrap_unit(static_cast<double>(K + 1) * params.alpha);
    double succ_lam = c * std::ldexp(1.0, -(K + 1)) / 3.0 / scale;
    const double succ_center = psi(succ_base);
    // Keep the successor arc clear of the neighboring gaps.
    double clearance = 1.0;
    for (const auto& g : gaps) {
        clearance = std::min(clearance, cyc_len(g.a + g.lam, succ_center));
        clearance = std::min(clearance, cyc_len(succ_center, g.a));
    }
    succ_lam = std::min(succ_lam, 0.5 * clearance);

    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i].n < K) {
            const auto next =
                std::find_if(gaps.begin(), gaps.end(),
                             [&](const Gap& g) { return g.n == gaps[i].n + 1; });
            img_start[i] = next->a;
            img_len[i] = next->lam;
        } else {
            img_start[i] = wrap_unit(succ_center - 0.5 * succ_lam);
            img_len[i] = succ_lam;
        }
    }

    // Gap pieces and the flesh arcs between consecutive gaps, cyclically.
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        forward.pieces.push_back({gaps[i].a, gaps[i].lam, img_start[i], img_len[i]});
        const std::size_t j = (i + 1) % gaps.size();
        const double dom_from = gaps[i].a + gaps[i].lam;
        const double dom_len = cyc_len(dom_from, gaps[j].a);
        const double img_from = wrap_unit(img_start[i] + img_len[i]);
        const double flesh_img_len = cyc_len(img_from, img_start[j]);
        forward.pieces.push_back({wrap_unit(dom_from), dom_len, img_from, flesh_img_len});
    }
    std::sort(forward.pieces.begin(), forward.pieces.end(),
              [](const PiecewiseCircleMap::Piece& x, const PiecewiseCircleMap::Piece& y) {
                  return x.dom_start < y.dom_start;
              });
    backward = forward.inverse();

    const auto zero =
        std::find_if(gaps.begin(), gaps.end(), [](const Gap& g) { return g.n == 0; });
    wandering_lo = zero->a;
    wandering_hi = zero->a + zero->lam;
}

}  // namespace proxlab::detail
