#ifndef SENSORNET_SIMULATOR_HPP
#define SENSORNET_SIMULATOR_HPP

/**
 * \file simulator.hpp
 *
 * Deterministic in-network aggregation. Readings travel from sensors
 * through cluster heads to the base station in synchronous ticks, one
 * hop per tick; every node waits for all of its children before
 * emitting. Decomposable functions fuse incrementally along the way,
 * everything else ships raw readings to the base station.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sensornet/counters.hpp"
#include "sensornet/fusion.hpp"
#include "sensornet/reading.hpp"
#include "sensornet/topology.hpp"

namespace sensornet {

enum class FusionFunction {
    Mean,
    Median,
    Min,
    Max,
    Mode,
    Marzullo,
    SchmidSchossmaier,
    Omega,
    NFunction,
    Majority,
    TrimmedMidpoint,
};

/// Which fusion to run and its parameters. The fault bound must be
/// present exactly for the functions that take one (marzullo,
/// schmid_schossmaier, n_function, trimmed_midpoint). A tolerance is
/// only legal for interval functions and pre-converts crisp readings.
/// A boolean rule is only legal for Majority and replaces the default
/// majority vote.
struct FusionSpec {
    FusionFunction function = FusionFunction::Mean;
    std::optional<int> fault_bound;
    std::optional<Tolerance> tolerance;
    std::optional<BooleanRule> boolean_rule;
};

enum class PlanMode { Hierarchical, Centralized };
enum class NodeAction { ForwardRaw, CombinePartial, Finalize };

/// Per-node execution plan. The base station finalizes; other nodes
/// either combine partial aggregates (hierarchical) or forward raw
/// readings (centralized).
struct AggregationPlan {
    PlanMode mode = PlanMode::Centralized;
    std::map<int, NodeAction> actions;
};

/// Chooses hierarchical execution for the decomposable functions (min,
/// max, mean as a sum+count pair, plain majority as an ones+total pair)
/// and centralized execution for everything else.
AggregationPlan plan_aggregation(const Topology& topo, const FusionSpec& spec);

struct SimOptions {
    /// When set, every non-root node senses and must supply a reading.
    /// When cleared, only leaf nodes sense.
    bool internal_nodes_sense = true;
    /// Forces the execution mode instead of letting plan_aggregation
    /// choose. Forcing Hierarchical for a non-decomposable function is
    /// rejected.
    std::optional<PlanMode> mode_override;
};

/// Outcome of one aggregation run.
struct SimReport {
    Payload fused;
    double total_delay = 0.0;
    OpCounters counters;
    AggregationPlan plan;
    int hops_on_critical_path = 0;
};

/// Runs one synchronous aggregation from the sensing nodes to the base
/// station. Readings are keyed by sensor id and must cover exactly the
/// sensing set. The fused result equals the direct fusion-module call on
/// the same multiset of readings; total_delay is the hop count of the
/// critical path times the link delay.
SimReport simulate(const Topology& topo, const std::map<int, Reading>& readings,
                   const FusionSpec& spec, const DelayModel& model,
                   const SimOptions& options = {});

/// Keys readings by sensor id. Duplicate ids throw IncompleteReadings.
std::map<int, Reading> readings_by_id(std::span<const Reading> readings);

/// Seeded test-instance generator: n - fault_count intervals that all
/// contain a hidden true value, plus fault_count intervals that exclude
/// it. The same seed always reproduces the same instance.
struct RandomInstance {
    std::vector<Interval> intervals;
    double true_value = 0.0;
    int fault_count = 0;
};

RandomInstance random_instance(std::uint64_t seed, int n, int fault_count, double spread);

}  // namespace sensornet

#endif
