#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace otcert {

/// Closed interval [lo, hi] on the real line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

inline bool is_valid_interval(const Interval& iv) {
    return std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi;
}

/// Finite union of closed intervals, kept sorted and disjoint (strict gaps:
/// touching intervals are fused during normalization).
class IntervalSet {
public:
    IntervalSet() = default;

    /// Normalizing constructor: sorts, merges overlapping/touching intervals.
    /// Throws std::invalid_argument on malformed input (lo > hi or non-finite).
    explicit IntervalSet(std::vector<Interval> raw) {
        for (const Interval& iv : raw) {
            if (!is_valid_interval(iv)) {
                throw std::invalid_argument(
                    "malformed interval [" + std::to_string(iv.lo) + ", " +
                    std::to_string(iv.hi) + "]: require finite lo <= hi");
            }
        }
        std::sort(raw.begin(), raw.end(),
                  [](const Interval& a, const Interval& b) {
                      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
                  });
        for (const Interval& iv : raw) {
            if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
                intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
            } else {
                intervals_.push_back(iv);
            }
        }
    }

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    std::size_t size() const { return intervals_.size(); }

    bool contains(double x) const {
        for (const Interval& iv : intervals_) {
            if (x < iv.lo) return false;
            if (x <= iv.hi) return true;
        }
        return false;
    }

    /// Subset test: every interval of other lies inside one interval of this
    /// (sufficient because normalized components are connected and gapped).
    bool contains(const IntervalSet& other) const {
        for (const Interval& o : other.intervals_) {
            bool covered = false;
            for (const Interval& iv : intervals_) {
                if (iv.lo <= o.lo && o.hi <= iv.hi) {
                    covered = true;
                    break;
                }
            }
            if (!covered) return false;
        }
        return true;
    }

    double min() const {
        require_nonempty();
        return intervals_.front().lo;
    }
    double max() const {
        require_nonempty();
        return intervals_.back().hi;
    }

    /// Total length of all components.
    double measure() const {
        double m = 0.0;
        for (const Interval& iv : intervals_) m += iv.width();
        return m;
    }

private:
    void require_nonempty() const {
        if (intervals_.empty())
            throw std::logic_error("empty interval set has no extrema");
    }

    std::vector<Interval> intervals_;
};

inline IntervalSet normalize_interval_set(std::vector<Interval> raw) {
    return IntervalSet(std::move(raw));
}

/// Union of two normalized sets.
inline IntervalSet interval_set_union(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all = a.intervals();
    all.insert(all.end(), b.intervals().begin(), b.intervals().end());
    return IntervalSet(std::move(all));
}

/// Closure of the set difference a \ b. The result is a union of closed
/// intervals whose interior agrees with a \ b; shared endpoints (measure
/// zero) stay in the result so downstream range checks see closed pieces.
inline IntervalSet interval_set_difference(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    for (const Interval& ia : a.intervals()) {
        double cursor = ia.lo;
        bool touched = false;
        for (const Interval& ib : b.intervals()) {
            if (ib.hi < ia.lo || ib.lo > ia.hi) continue;
            touched = true;
            if (ib.lo > cursor) out.push_back({cursor, ib.lo});
            cursor = std::max(cursor, ib.hi);
            if (cursor >= ia.hi) break;
        }
        if (cursor < ia.hi || (!touched && cursor == ia.hi)) {
            out.push_back({cursor, ia.hi});
        }
    }
    return IntervalSet(std::move(out));
}

}  // namespace otcert
