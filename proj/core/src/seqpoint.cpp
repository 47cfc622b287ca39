#include "proxlab/seqpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace proxlab {

namespace {

void validate_word(const std::string& w, bool allow_empty, const char* what) {
    if (w.empty() && !allow_empty)
        throw std::invalid_argument(std::string(what) + " word must be nonempty");
    for (char c : w)
        if (c != '0' && c != '1')
            throw std::invalid_argument(std::string(what) + " word must be binary");
}

/// Smallest cyclic period of w, as a prefix.
std::string primitive_word(const std::string& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
        if (ok) return w.substr(0, d);
    }
    return w;
}

std::string rotate_left(std::string w) {
    std::rotate(w.begin(), w.begin() + 1, w.end());
    return w;
}

std::string rotate_right(std::string w) {
    std::rotate(w.begin(), w.end() - 1, w.end());
    return w;
}

long long pos_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

SeqPoint::SeqPoint(std::string left, std::string core, std::string right, long long origin)
    : left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), origin_(origin) {
    validate_word(left_, false, "left period");
    validate_word(core_, true, "core");
    validate_word(right_, false, "right period");
    canonicalize();
}

SeqPoint SeqPoint::periodic(const std::string& word, long long phase) {
    return SeqPoint(word, "", word, phase);
}

SeqPoint SeqPoint::one_at_origin_with_ring(long long ring) {
    if (ring <= 0) return SeqPoint("0", "1", "0", 0);
    // zeros on (-ring, 0) and (0, ring), ones elsewhere
    std::string core(2 * static_cast<std::size_t>(ring) - 1, '0');
    core[static_cast<std::size_t>(ring) - 1] = '1';
    return SeqPoint("1", core, "1", -(ring - 1));
}

int SeqPoint::at(long long n) const {
    const long long core_end = origin_ + static_cast<long long>(core_.size());
    if (n >= core_end)
        return right_[static_cast<std::size_t>(pos_mod(n - core_end, static_cast<long long>(right_.size())))] - '0';
    if (n >= origin_) return core_[static_cast<std::size_t>(n - origin_)] - '0';
    return left_[static_cast<std::size_t>(pos_mod(n - origin_, static_cast<long long>(left_.size())))] - '0';
}

void SeqPoint::canonicalize() {
    left_ = primitive_word(left_);
    right_ = primitive_word(right_);

    // Shrink the core: absorb characters already predicted by a period.
    bool changed = true;
    while (changed && !core_.empty()) {
        changed = false;
        if (!core_.empty() && core_.back() == right_.back()) {
            core_.pop_back();
            right_ = rotate_right(right_);
            changed = true;
        }
        if (!core_.empty() && core_.front() == left_.front()) {
            core_.erase(core_.begin());
            left_ = rotate_left(left_);
            ++origin_;
            changed = true;
        }
    }
    if (!core_.empty()) return;

    // Empty core: either the sequence is fully periodic, or the boundary can
    // be slid left only finitely often; slide to the leftmost position.
    const long long lcm = std::lcm(static_cast<long long>(left_.size()),
                                   static_cast<long long>(right_.size()));
    bool fully_periodic = true;
    for (long long j = 1; j <= lcm; ++j) {
        const int left_val =
            left_[static_cast<std::size_t>(pos_mod(-j, static_cast<long long>(left_.size())))] - '0';
        const int right_val =
            right_[static_cast<std::size_t>(pos_mod(-j, static_cast<long long>(right_.size())))] - '0';
        if (left_val != right_val) { fully_periodic = false; break; }
    }
    if (fully_periodic) {
        std::string w(right_.size(), '0');
        for (std::size_t j = 0; j < right_.size(); ++j)
            w[j] = static_cast<char>('0' + at(static_cast<long long>(j)));
        left_ = right_ = primitive_word(w);
        origin_ = 0;
        return;
    }
    long long guard = lcm + 1;
    while (guard-- > 0 && left_.back() == right_.back()) {
        left_ = rotate_right(left_);
        right_ = rotate_right(right_);
        --origin_;
    }
}

SeqPoint SeqPoint::shifted(long long k) const {
    return SeqPoint(left_, core_, right_, origin_ - k);
}

bool SeqPoint::operator<(const SeqPoint& o) const {
    return std::tie(left_, core_, right_, origin_) < std::tie(o.left_, o.core_, o.right_, o.origin_);
}

bool SeqPoint::is_periodic_sequence() const { return core_.empty() && left_ == right_ && origin_ == 0; }

std::string SeqPoint::window(long long lo, long long hi) const {
    std::string out;
    out.reserve(static_cast<std::size_t>(std::max<long long>(0, hi - lo + 1)));
    for (long long n = lo; n <= hi; ++n) out.push_back(static_cast<char>('0' + at(n)));
    return out;
}

std::optional<long long> SeqPoint::first_difference(const SeqPoint& x, const SeqPoint& y) {
    if (x == y) return std::nullopt;
    const long long right_anchor =
        std::max(x.origin_ + static_cast<long long>(x.core_.size()),
                 y.origin_ + static_cast<long long>(y.core_.size()));
    const long long left_anchor = std::min(x.origin_, y.origin_);
    const long long lcm_r = std::lcm(static_cast<long long>(x.right_.size()),
                                     static_cast<long long>(y.right_.size()));
    const long long lcm_l = std::lcm(static_cast<long long>(x.left_.size()),
                                     static_cast<long long>(y.left_.size()));
    const long long bound = std::max(std::llabs(right_anchor) + lcm_r, std::llabs(left_anchor) + lcm_l) + 1;
    for (long long m = 0; m <= bound; ++m) {
        if (x.at(m) != y.at(m)) return m;
        if (m > 0 && x.at(-m) != y.at(-m)) return m;
    }
    // Distinct canonical forms always differ within the scanned window.
    throw std::logic_error("seq points with equal windows but distinct canonical forms");
}

double SeqPoint::dist(const SeqPoint& x, const SeqPoint& y) {
    const auto m = first_difference(x, y);
    if (!m) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(std::min<long long>(*m, 1075)));
}

}  // namespace proxlab
