#ifndef SENSORNET_INTERVAL_HPP
#define SENSORNET_INTERVAL_HPP

#include "sensornet/error.hpp"

namespace sensornet {

/// Closed real interval [lo, hi]. A degenerate point interval lo == hi
/// is legal. Both endpoints are inclusive everywhere in the library, so
/// two intervals that merely touch at an endpoint still overlap.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;

    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) {
            throw Error(ErrorCode::InvalidInterval, "interval requires lo <= hi");
        }
    }

    double width() const { return hi - lo; }
    double midpoint() const { return (lo + hi) / 2.0; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Per-reading measurement tolerance. The left and right margins may
/// differ; both must be non-negative.
struct Tolerance {
    double left = 0.0;
    double right = 0.0;

    Tolerance() = default;

    Tolerance(double left_, double right_) : left(left_), right(right_) {
        if (!(left >= 0.0) || !(right >= 0.0)) {
            throw Error(ErrorCode::InvalidTolerance, "tolerance margins must be >= 0");
        }
    }
};

/// Widens a crisp value into the interval [value - tol.left, value + tol.right].
inline Interval to_interval(double value, const Tolerance& tol) {
    return Interval(value - tol.left, value + tol.right);
}

/// Collapses an interval to its midpoint.
inline double to_crisp(const Interval& iv) {
    return iv.midpoint();
}

}  // namespace sensornet

#endif
