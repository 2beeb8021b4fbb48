#ifndef SENSORNET_COUNTERS_HPP
#define SENSORNET_COUNTERS_HPP

#include <cstdint>

namespace sensornet {

/// Tally of the arithmetic work a fusion call actually performed.
/// Only operations on reading values are counted; loop and index
/// bookkeeping is free. Counts never decrease during a run.
struct OpCounters {
    std::uint64_t comparisons = 0;
    std::uint64_t additions = 0;
    std::uint64_t divisions = 0;

    OpCounters& operator+=(const OpCounters& other) {
        comparisons += other.comparisons;
        additions += other.additions;
        divisions += other.divisions;
        return *this;
    }

    friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace sensornet

#endif
