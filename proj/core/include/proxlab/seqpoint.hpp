#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace proxlab {

/// An eventually periodic bi-infinite binary sequence ...PPP.core.RRR...
/// The core occupies indices [origin, origin + |core|); the left period tiles
/// indices below the core (its last character sits at origin - 1) and the
/// right period tiles indices at and above origin + |core|.
///
/// Construction canonicalizes: periods are reduced to their primitive words,
/// the core is shrunk by absorbing characters the periods already predict, and
/// an empty-core boundary is slid to the leftmost position compatible with the
/// right tail. Two representations of the same sequence therefore compare
/// equal field by field.
class SeqPoint {
  public:
    SeqPoint(std::string left, std::string core, std::string right, long long origin);

    /// The fully periodic sequence n -> word[(n - phase) mod |word|].
    static SeqPoint periodic(const std::string& word, long long phase = 0);

    /// All zeros except for ones on {0} and {|n| >= ring}; ring <= 0 means a
    /// single one at the origin.
    static SeqPoint one_at_origin_with_ring(long long ring);

    int at(long long n) const;
    SeqPoint shifted(long long k) const;  // y_n = x_{n+k}

    const std::string& left_period() const { return left_; }
    const std::string& core() const { return core_; }
    const std::string& right_period() const { return right_; }
    long long origin() const { return origin_; }

    bool operator==(const SeqPoint& o) const {
        return left_ == o.left_ && core_ == o.core_ && right_ == o.right_ && origin_ == o.origin_;
    }
    bool operator!=(const SeqPoint& o) const { return !(*this == o); }
    bool operator<(const SeqPoint& o) const;

    /// True iff the sequence is shift-periodic (empty core, equal periods).
    bool is_periodic_sequence() const;

    /// Index window as a bit string, inclusive bounds.
    std::string window(long long lo, long long hi) const;

    /// Smallest |n| with x_n != y_n, or nullopt when the sequences are equal.
    static std::optional<long long> first_difference(const SeqPoint& x, const SeqPoint& y);

    /// 2^-m with m the first difference index, 0 for equal sequences. Exact.
    static double dist(const SeqPoint& x, const SeqPoint& y);

  private:
    SeqPoint() = default;
    void canonicalize();

    std::string left_;
    std::string core_;
    std::string right_;
    long long origin_ = 0;
};

}  // namespace proxlab
