#include "sensornet/fusion.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>

namespace sensornet {

namespace {

void check_fault_bound(std::size_t n, int fault_bound) {
    if (fault_bound < 0 || static_cast<std::size_t>(fault_bound) >= n) {
        throw Error(ErrorCode::InvalidFaultBound,
                    "fault bound must satisfy 0 <= f < n (n=" + std::to_string(n) +
                        ", f=" + std::to_string(fault_bound) + ")");
    }
}

// Median of three values, counting each element comparison.
double median_of_three(double a, double b, double c, OpCounters& counters) {
    ++counters.comparisons;
    if (a > b) std::swap(a, b);
    ++counters.comparisons;
    if (b > c) {
        std::swap(b, c);
        ++counters.comparisons;
        if (a > b) std::swap(a, b);
    }
    return b;
}

// Quickselect with a three-way partition. Returns the k-th smallest
// (0-indexed) element; expected O(n) with the median-of-three pivot.
double select_kth(std::vector<double>& v, std::size_t k, OpCounters& counters) {
    std::size_t lo = 0;
    std::size_t hi = v.size();
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const double pivot = median_of_three(v[lo], v[mid], v[hi - 1], counters);
        std::size_t lt = lo;
        std::size_t i = lo;
        std::size_t gt = hi;
        while (i < gt) {
            ++counters.comparisons;
            if (v[i] < pivot) {
                std::swap(v[lt], v[i]);
                ++lt;
                ++i;
            } else {
                ++counters.comparisons;
                if (v[i] > pivot) {
                    --gt;
                    std::swap(v[i], v[gt]);
                } else {
                    ++i;
                }
            }
        }
        // [lo, lt) < pivot, [lt, gt) == pivot, [gt, hi) > pivot
        if (k < lt) {
            hi = lt;
        } else if (k >= gt) {
            lo = gt;
        } else {
            return pivot;
        }
    }
    return v[lo];
}

double crisp_min(std::span<const double> values, OpCounters& counters) {
    double best = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        ++counters.comparisons;
        if (values[i] < best) best = values[i];
    }
    return best;
}

double crisp_max(std::span<const double> values, OpCounters& counters) {
    double best = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        ++counters.comparisons;
        if (values[i] > best) best = values[i];
    }
    return best;
}

double crisp_mean(std::span<const double> values, OpCounters& counters) {
    double sum = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        sum += values[i];
        ++counters.additions;
    }
    ++counters.divisions;
    return sum / static_cast<double>(values.size());
}

double crisp_median(std::span<const double> values, OpCounters& counters, MedianRule rule) {
    const std::size_t n = values.size();
    std::vector<double> scratch(values.begin(), values.end());
    // 1-indexed rank n/2 for even n, (n+1)/2 for odd n; both are (n-1)/2
    // as a 0-indexed position.
    const std::size_t k = (n - 1) / 2;
    const double lower = select_kth(scratch, k, counters);
    if (rule == MedianRule::LowerOfMiddles || n % 2 == 1) {
        return lower;
    }
    const double upper = select_kth(scratch, k + 1, counters);
    ++counters.additions;
    ++counters.divisions;
    return (lower + upper) / 2.0;
}

double crisp_mode(std::span<const double> values, OpCounters& counters) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), [&counters](double a, double b) {
        ++counters.comparisons;
        return a < b;
    });
    double best = sorted[0];
    std::size_t best_run = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        ++counters.comparisons;
        run = (sorted[i] == sorted[i - 1]) ? run + 1 : 1;
        if (run > best_run) {
            best_run = run;
            best = sorted[i];
        }
    }
    return best;
}

}  // namespace

double fuse_crisp(std::span<const double> values, CrispKind kind, OpCounters& counters,
                  MedianRule median_rule) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyInput, "cannot fuse an empty set of readings");
    }
    switch (kind) {
        case CrispKind::Min: return crisp_min(values, counters);
        case CrispKind::Max: return crisp_max(values, counters);
        case CrispKind::Mean: return crisp_mean(values, counters);
        case CrispKind::Median: return crisp_median(values, counters, median_rule);
        case CrispKind::Mode: return crisp_mode(values, counters);
    }
    throw Error(ErrorCode::TypeMismatch, "unknown crisp fusion kind");
}

double fuse_crisp(std::span<const double> values, CrispKind kind, MedianRule median_rule) {
    OpCounters scratch;
    return fuse_crisp(values, kind, scratch, median_rule);
}

Interval marzullo(std::span<const Interval> intervals, int fault_bound, OpCounters& counters) {
    const std::size_t n = intervals.size();
    check_fault_bound(n, fault_bound);

    struct Event {
        double value;
        bool is_end;
    };
    std::vector<Event> events;
    events.reserve(2 * n);
    for (const Interval& iv : intervals) {
        events.push_back({iv.lo, false});
        events.push_back({iv.hi, true});
    }
    // Starts sort before ends at equal coordinates so that a shared
    // endpoint counts as overlap (closed-interval semantics).
    std::sort(events.begin(), events.end(), [&counters](const Event& a, const Event& b) {
        ++counters.comparisons;
        if (a.value != b.value) return a.value < b.value;
        return a.is_end < b.is_end;
    });

    const int threshold = static_cast<int>(n) - fault_bound;
    int active = 0;
    bool found = false;
    double left = 0.0;
    double right = 0.0;
    std::size_t i = 0;
    while (i < events.size()) {
        const double value = events[i].value;
        while (i < events.size() && events[i].value == value && !events[i].is_end) {
            ++active;
            ++i;
        }
        // `active` is now the coverage exactly at this endpoint.
        ++counters.comparisons;
        if (active >= threshold) {
            if (!found) {
                left = value;
                found = true;
            }
            right = value;
        }
        while (i < events.size() && events[i].value == value && events[i].is_end) {
            --active;
            ++i;
        }
    }
    if (!found) {
        throw Error(ErrorCode::NoIntersection,
                    "no point is covered by at least " + std::to_string(threshold) + " intervals");
    }
    return Interval(left, right);
}

Interval marzullo(std::span<const Interval> intervals, int fault_bound) {
    OpCounters scratch;
    return marzullo(intervals, fault_bound, scratch);
}

Interval schmid_schossmaier(std::span<const Interval> intervals, int fault_bound) {
    const std::size_t n = intervals.size();
    check_fault_bound(n, fault_bound);

    std::vector<double> lows;
    std::vector<double> highs;
    lows.reserve(n);
    highs.reserve(n);
    for (const Interval& iv : intervals) {
        lows.push_back(iv.lo);
        highs.push_back(iv.hi);
    }
    const auto f = static_cast<std::ptrdiff_t>(fault_bound);
    std::nth_element(lows.begin(), lows.begin() + f, lows.end(), std::greater<>());
    std::nth_element(highs.begin(), highs.begin() + f, highs.end());
    const double x = lows[fault_bound];
    const double y = highs[fault_bound];
    if (x > y) {
        throw Error(ErrorCode::EmptyEstimate,
                    "inputs are inconsistent with fault bound f=" + std::to_string(fault_bound));
    }
    return Interval(x, y);
}

int OverlapProfile::count_at(double x) const {
    if (breakpoints.empty()) return 0;
    const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
    if (it == breakpoints.end()) return 0;
    const auto j = static_cast<std::size_t>(it - breakpoints.begin());
    if (*it == x) return counts[2 * j];
    if (j == 0) return 0;
    return counts[2 * j - 1];
}

int OverlapProfile::max_count() const {
    int best = 0;
    for (int c : counts) best = std::max(best, c);
    return best;
}

OverlapProfile overlap_profile(std::span<const Interval> intervals) {
    if (intervals.empty()) {
        throw Error(ErrorCode::EmptyInput, "overlap profile needs at least one interval");
    }
    std::vector<double> starts;
    std::vector<double> ends;
    starts.reserve(intervals.size());
    ends.reserve(intervals.size());
    OverlapProfile profile;
    profile.breakpoints.reserve(2 * intervals.size());
    for (const Interval& iv : intervals) {
        starts.push_back(iv.lo);
        ends.push_back(iv.hi);
        profile.breakpoints.push_back(iv.lo);
        profile.breakpoints.push_back(iv.hi);
    }
    std::sort(starts.begin(), starts.end());
    std::sort(ends.begin(), ends.end());
    std::sort(profile.breakpoints.begin(), profile.breakpoints.end());
    profile.breakpoints.erase(std::unique(profile.breakpoints.begin(), profile.breakpoints.end()),
                              profile.breakpoints.end());

    const std::size_t k = profile.breakpoints.size();
    profile.counts.assign(2 * k - 1, 0);
    std::size_t si = 0;  // starts consumed: #{lo <= b}
    std::size_t ei = 0;  // ends consumed: #{hi < b} before the point, #{hi <= b} after
    for (std::size_t j = 0; j < k; ++j) {
        const double b = profile.breakpoints[j];
        while (si < starts.size() && starts[si] <= b) ++si;
        profile.counts[2 * j] = static_cast<int>(si - ei);
        while (ei < ends.size() && ends[ei] <= b) ++ei;
        if (j + 1 < k) {
            profile.counts[2 * j + 1] = static_cast<int>(si - ei);
        }
    }
    return profile;
}

namespace {

// Closed bounds of region r of a profile: even regions are single
// breakpoints, odd regions the open segment between two of them.
std::pair<double, double> region_bounds(const OverlapProfile& profile, std::size_t r) {
    if (r % 2 == 0) {
        const double b = profile.breakpoints[r / 2];
        return {b, b};
    }
    return {profile.breakpoints[r / 2], profile.breakpoints[r / 2 + 1]};
}

}  // namespace

Interval omega_fuse(std::span<const Interval> intervals) {
    const OverlapProfile profile = overlap_profile(intervals);
    const int peak = profile.max_count();
    const std::size_t regions = profile.counts.size();
    bool found = false;
    double best_lo = 0.0;
    double best_hi = 0.0;
    double best_width = -1.0;
    std::size_t i = 0;
    while (i < regions) {
        if (profile.counts[i] != peak) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < regions && profile.counts[j + 1] == peak) ++j;
        const double lo = region_bounds(profile, i).first;
        const double hi = region_bounds(profile, j).second;
        if (hi - lo > best_width) {
            best_width = hi - lo;
            best_lo = lo;
            best_hi = hi;
            found = true;
        }
        i = j + 1;
    }
    // A non-empty input always has a peak region.
    if (!found) {
        throw Error(ErrorCode::EmptyInput, "overlap profile has no regions");
    }
    return Interval(best_lo, best_hi);
}

Interval n_function(std::span<const Interval> intervals, int fault_bound) {
    const std::size_t n = intervals.size();
    check_fault_bound(n, fault_bound);
    const OverlapProfile profile = overlap_profile(intervals);
    const int threshold = static_cast<int>(n) - fault_bound;
    bool found = false;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t r = 0; r < profile.counts.size(); ++r) {
        if (profile.counts[r] < threshold) continue;
        const auto [rlo, rhi] = region_bounds(profile, r);
        if (!found) {
            lo = rlo;
            found = true;
        }
        hi = rhi;
    }
    if (!found) {
        throw Error(ErrorCode::NoIntersection,
                    "no point has overlap count in [" + std::to_string(threshold) + ", " +
                        std::to_string(n) + "]");
    }
    return Interval(lo, hi);
}

BooleanRule BooleanRule::by_count(std::vector<int> table) {
    BooleanRule rule;
    rule.kind = Kind::CountTable;
    rule.count_table = std::move(table);
    return rule;
}

BooleanRule BooleanRule::by_pattern(std::map<std::vector<int>, int> table) {
    BooleanRule rule;
    rule.kind = Kind::PatternTable;
    rule.pattern_table = std::move(table);
    return rule;
}

int boolean_fuse(std::span<const int> bits, const BooleanRule& rule) {
    if (bits.empty()) {
        throw Error(ErrorCode::EmptyInput, "cannot fuse an empty set of bits");
    }
    const std::size_t n = bits.size();
    std::size_t ones = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw Error(ErrorCode::TypeMismatch, "binary readings must be 0 or 1");
        }
        ones += static_cast<std::size_t>(b);
    }
    switch (rule.kind) {
        case BooleanRule::Kind::Majority:
            // An exact tie resolves to 1.
            return 2 * ones >= n ? 1 : 0;
        case BooleanRule::Kind::Conjunction:
            return ones == n ? 1 : 0;
        case BooleanRule::Kind::Disjunction:
            return ones > 0 ? 1 : 0;
        case BooleanRule::Kind::CountTable: {
            if (rule.count_table.size() < n + 1) {
                throw Error(ErrorCode::IncompleteRule,
                            "count table must cover 0.." + std::to_string(n) + " ones");
            }
            return rule.count_table[ones] != 0 ? 1 : 0;
        }
        case BooleanRule::Kind::PatternTable: {
            const std::vector<int> key(bits.begin(), bits.end());
            const auto it = rule.pattern_table.find(key);
            if (it == rule.pattern_table.end()) {
                throw Error(ErrorCode::IncompleteRule,
                            "pattern table has no entry for the input bit vector");
            }
            return it->second != 0 ? 1 : 0;
        }
    }
    throw Error(ErrorCode::IncompleteRule, "unknown boolean rule");
}

double trimmed_midpoint_fuse(std::span<const double> values, int fault_bound) {
    const std::size_t n = values.size();
    check_fault_bound(n, fault_bound);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t keep = n - static_cast<std::size_t>(fault_bound);
    double sum_low = 0.0;
    double sum_high = 0.0;
    for (std::size_t i = 0; i < keep; ++i) sum_low += sorted[i];
    for (std::size_t i = n - keep; i < n; ++i) sum_high += sorted[i];
    const double q = sum_low / static_cast<double>(keep);
    const double p = sum_high / static_cast<double>(keep);
    return (p + q) / 2.0;
}

}  // namespace sensornet
