#ifndef SENSORNET_FUSION_HPP
#define SENSORNET_FUSION_HPP

/**
 * \file fusion.hpp
 *
 * Fusion functions over crisp, interval, and binary sensor readings.
 *
 * Crisp statistics (mean, median, min, max, mode) and the fault-tolerant
 * interval combiners all assume that at most `f` of the `n` inputs are
 * arbitrarily wrong. Every function here is a pure function of its
 * inputs; the only mutation is the caller-owned operation counters.
 */

#include <map>
#include <span>
#include <vector>

#include "sensornet/counters.hpp"
#include "sensornet/error.hpp"
#include "sensornet/interval.hpp"

namespace sensornet {

enum class CrispKind { Mean, Median, Min, Max, Mode };

/// Rank convention for the median of an even-length input. The default
/// takes the lower of the two middle values (1-indexed rank n/2);
/// MeanOfMiddles averages them instead.
enum class MedianRule { LowerOfMiddles, MeanOfMiddles };

/// Fuses crisp values into the named statistic.
///
/// The counters record the work actually done: min and max perform
/// exactly n-1 comparisons, mean performs exactly n-1 additions and one
/// division, median runs an expected-linear selection, and mode sorts
/// with an instrumented comparator. Ties for the mode resolve to the
/// smallest of the most frequent values.
double fuse_crisp(std::span<const double> values, CrispKind kind, OpCounters& counters,
                  MedianRule median_rule = MedianRule::LowerOfMiddles);
double fuse_crisp(std::span<const double> values, CrispKind kind,
                  MedianRule median_rule = MedianRule::LowerOfMiddles);

/// Marzullo's interval intersection (the M-function).
///
/// Returns the smallest interval [L, H] containing every point that lies
/// in at least n-f of the inputs. Endpoints are sorted once (O(n log n))
/// and a single sweep visits each endpoint.
///
/// Throws NoIntersection when no point reaches the n-f coverage level and
/// InvalidFaultBound unless 0 <= f < n.
Interval marzullo(std::span<const Interval> intervals, int fault_bound, OpCounters& counters);
Interval marzullo(std::span<const Interval> intervals, int fault_bound);

/// Schmid-Schossmaier interval estimate (the S-function).
///
/// X is the (f+1)-th largest left edge and Y the (f+1)-th smallest right
/// edge; the result is [X, Y]. Both outputs are order statistics, which
/// makes the estimate 1-Lipschitz in every input endpoint. Throws
/// EmptyEstimate when X > Y, meaning the inputs are inconsistent with the
/// assumed fault bound.
Interval schmid_schossmaier(std::span<const Interval> intervals, int fault_bound);

/// Piecewise-constant coverage count over the real line.
///
/// Regions alternate between breakpoints and the open segments separating
/// them: counts[2i] is the coverage exactly at breakpoints[i] and
/// counts[2i+1] the coverage on (breakpoints[i], breakpoints[i+1]).
/// Coverage is 0 outside [breakpoints.front(), breakpoints.back()].
struct OverlapProfile {
    std::vector<double> breakpoints;  // ascending, distinct input endpoints
    std::vector<int> counts;          // 2k-1 entries for k breakpoints

    /// Number of input intervals containing x (closed endpoints).
    int count_at(double x) const;
    int max_count() const;
};

OverlapProfile overlap_profile(std::span<const Interval> intervals);

/// Peak selection over the overlap profile (the Omega-function): among
/// the maximal regions where the coverage count peaks, returns the widest
/// one as a closed interval. Equal widths resolve to the leftmost region.
Interval omega_fuse(std::span<const Interval> intervals);

/// Hull of the points whose coverage count lies in [n-f, n] (the
/// N-function). Computed from the overlap profile, independently of
/// marzullo(), and agrees with it on every input where both succeed.
Interval n_function(std::span<const Interval> intervals, int fault_bound);

/// How to combine binary readings.
struct BooleanRule {
    enum class Kind { Majority, Conjunction, Disjunction, CountTable, PatternTable };

    Kind kind = Kind::Majority;
    std::vector<int> count_table;                   // CountTable: output per number of ones
    std::map<std::vector<int>, int> pattern_table;  // PatternTable: output per exact bit vector

    static BooleanRule majority() { return {}; }
    static BooleanRule conjunction() { return {Kind::Conjunction, {}, {}}; }
    static BooleanRule disjunction() { return {Kind::Disjunction, {}, {}}; }
    static BooleanRule by_count(std::vector<int> table);
    static BooleanRule by_pattern(std::map<std::vector<int>, int> table);
};

/// Fuses bits under the given rule. Majority returns 1 iff the ones
/// reach at least half the inputs; an exact tie resolves to 1 (alarm
/// semantics). Custom tables must cover the input arity, otherwise
/// IncompleteRule is thrown.
int boolean_fuse(std::span<const int> bits, const BooleanRule& rule);

/// Fault-trimmed midpoint of crisp readings: sort ascending, average the
/// first n-f values (q) and the last n-f values (p), return (p+q)/2.
/// With f = 0 this is the plain mean; with f = n-1 it is the midrange.
double trimmed_midpoint_fuse(std::span<const double> values, int fault_bound);

}  // namespace sensornet

#endif
