#include "sensornet/simulator.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

namespace sensornet {

namespace {

bool requires_fault_bound(FusionFunction fn) {
    switch (fn) {
        case FusionFunction::Marzullo:
        case FusionFunction::SchmidSchossmaier:
        case FusionFunction::NFunction:
        case FusionFunction::TrimmedMidpoint:
            return true;
        default:
            return false;
    }
}

bool interval_function(FusionFunction fn) {
    switch (fn) {
        case FusionFunction::Marzullo:
        case FusionFunction::SchmidSchossmaier:
        case FusionFunction::Omega:
        case FusionFunction::NFunction:
            return true;
        default:
            return false;
    }
}

bool decomposable(const FusionSpec& spec) {
    switch (spec.function) {
        case FusionFunction::Min:
        case FusionFunction::Max:
        case FusionFunction::Mean:
            return true;
        case FusionFunction::Majority:
            return !spec.boolean_rule ||
                   spec.boolean_rule->kind == BooleanRule::Kind::Majority;
        default:
            return false;
    }
}

void validate_spec(const FusionSpec& spec) {
    if (requires_fault_bound(spec.function) != spec.fault_bound.has_value()) {
        throw Error(ErrorCode::InvalidFaultBound,
                    spec.fault_bound ? "this fusion function takes no fault bound"
                                     : "this fusion function requires a fault bound");
    }
    if (spec.tolerance && !interval_function(spec.function)) {
        throw Error(ErrorCode::TypeMismatch,
                    "a tolerance only applies to interval fusion functions");
    }
    if (spec.boolean_rule && spec.function != FusionFunction::Majority) {
        throw Error(ErrorCode::TypeMismatch, "a boolean rule only applies to binary fusion");
    }
}

// Base-station-rooted orientation of the topology.
struct Orientation {
    int root = 0;
    std::map<int, int> parent;                 // absent for the root
    std::map<int, std::vector<int>> children;  // sorted ascending
    std::map<int, int> depth;
};

Orientation orient(const Topology& topo) {
    Orientation o;
    o.root = topo.base_station();
    o.depth = hop_counts(topo, o.root);
    if (o.depth.size() != topo.node_count()) {
        throw Error(ErrorCode::InvalidTopology, "graph is not connected");
    }
    const auto adj = adjacency(topo);
    for (const NodeRecord& node : topo.nodes) o.children[node.id];
    for (const auto& [id, neighbors] : adj) {
        if (id == o.root) continue;
        // Parent: the smallest neighbor one hop closer to the base station.
        for (int next : neighbors) {
            if (o.depth.at(next) == o.depth.at(id) - 1) {
                o.parent[id] = next;
                o.children[next].push_back(id);
                break;
            }
        }
    }
    return o;
}

enum class Family { Crisp, IntervalValued, Binary };

Family family_of(FusionFunction fn) {
    if (interval_function(fn)) return Family::IntervalValued;
    if (fn == FusionFunction::Majority) return Family::Binary;
    return Family::Crisp;
}

// Normalized per-sensor value in the family the fusion function expects.
struct SensorValue {
    double crisp = 0.0;
    Interval interval;
    int bit = 0;
};

SensorValue normalize(const Reading& reading, Family family, const FusionSpec& spec) {
    SensorValue value;
    switch (family) {
        case Family::Crisp:
            if (!reading.is_crisp()) {
                throw Error(ErrorCode::TypeMismatch,
                            "sensor " + std::to_string(reading.sensor_id) +
                                ": crisp fusion needs crisp readings");
            }
            value.crisp = reading.crisp_value();
            return value;
        case Family::IntervalValued:
            if (reading.is_interval()) {
                value.interval = reading.interval_value();
                return value;
            }
            if (reading.is_crisp() && spec.tolerance) {
                value.interval = to_interval(reading.crisp_value(), *spec.tolerance);
                return value;
            }
            throw Error(ErrorCode::TypeMismatch,
                        "sensor " + std::to_string(reading.sensor_id) +
                            ": interval fusion needs interval readings (or crisp readings "
                            "with a tolerance)");
        case Family::Binary:
            if (!reading.is_bit()) {
                throw Error(ErrorCode::TypeMismatch,
                            "sensor " + std::to_string(reading.sensor_id) +
                                ": binary fusion needs bit readings");
            }
            value.bit = reading.bit_value();
            return value;
    }
    throw Error(ErrorCode::TypeMismatch, "unknown fusion family");
}

// Hierarchical partial aggregates.
struct MinMaxPartial {
    double value = 0.0;
};
struct MeanPartial {
    double sum = 0.0;
    std::uint64_t count = 0;
};
struct OnesPartial {
    std::uint64_t ones = 0;
    std::uint64_t total = 0;
};
using Partial = std::variant<MinMaxPartial, MeanPartial, OnesPartial>;

Partial seed_partial(FusionFunction fn, const SensorValue& value) {
    switch (fn) {
        case FusionFunction::Min:
        case FusionFunction::Max:
            return MinMaxPartial{value.crisp};
        case FusionFunction::Mean:
            return MeanPartial{value.crisp, 1};
        case FusionFunction::Majority:
            return OnesPartial{static_cast<std::uint64_t>(value.bit), 1};
        default:
            throw std::logic_error("seed_partial: function is not decomposable");
    }
}

void merge_partial(FusionFunction fn, Partial& into, const Partial& from, OpCounters& counters) {
    switch (fn) {
        case FusionFunction::Min: {
            auto& a = std::get<MinMaxPartial>(into);
            const auto& b = std::get<MinMaxPartial>(from);
            ++counters.comparisons;
            if (b.value < a.value) a.value = b.value;
            return;
        }
        case FusionFunction::Max: {
            auto& a = std::get<MinMaxPartial>(into);
            const auto& b = std::get<MinMaxPartial>(from);
            ++counters.comparisons;
            if (b.value > a.value) a.value = b.value;
            return;
        }
        case FusionFunction::Mean: {
            auto& a = std::get<MeanPartial>(into);
            const auto& b = std::get<MeanPartial>(from);
            a.sum += b.sum;
            ++counters.additions;
            a.count += b.count;
            return;
        }
        case FusionFunction::Majority: {
            auto& a = std::get<OnesPartial>(into);
            const auto& b = std::get<OnesPartial>(from);
            a.ones += b.ones;
            ++counters.additions;
            a.total += b.total;
            return;
        }
        default:
            throw std::logic_error("merge_partial: function is not decomposable");
    }
}

Payload finalize_partial(FusionFunction fn, const Partial& partial, OpCounters& counters) {
    switch (fn) {
        case FusionFunction::Min:
        case FusionFunction::Max:
            return std::get<MinMaxPartial>(partial).value;
        case FusionFunction::Mean: {
            const auto& p = std::get<MeanPartial>(partial);
            ++counters.divisions;
            return p.sum / static_cast<double>(p.count);
        }
        case FusionFunction::Majority: {
            const auto& p = std::get<OnesPartial>(partial);
            ++counters.comparisons;
            return Bit(2 * p.ones >= p.total ? 1 : 0);
        }
        default:
            throw std::logic_error("finalize_partial: function is not decomposable");
    }
}

// Whole-multiset fusion at the base station (centralized finalize).
Payload fuse_at_base(const FusionSpec& spec, const std::vector<std::pair<int, SensorValue>>& raw,
                     OpCounters& counters) {
    switch (family_of(spec.function)) {
        case Family::Crisp: {
            std::vector<double> values;
            values.reserve(raw.size());
            for (const auto& [id, v] : raw) values.push_back(v.crisp);
            switch (spec.function) {
                case FusionFunction::Mean:
                    return fuse_crisp(values, CrispKind::Mean, counters);
                case FusionFunction::Median:
                    return fuse_crisp(values, CrispKind::Median, counters);
                case FusionFunction::Min:
                    return fuse_crisp(values, CrispKind::Min, counters);
                case FusionFunction::Max:
                    return fuse_crisp(values, CrispKind::Max, counters);
                case FusionFunction::Mode:
                    return fuse_crisp(values, CrispKind::Mode, counters);
                case FusionFunction::TrimmedMidpoint:
                    return trimmed_midpoint_fuse(values, *spec.fault_bound);
                default:
                    break;
            }
            break;
        }
        case Family::IntervalValued: {
            std::vector<Interval> intervals;
            intervals.reserve(raw.size());
            for (const auto& [id, v] : raw) intervals.push_back(v.interval);
            switch (spec.function) {
                case FusionFunction::Marzullo:
                    return marzullo(intervals, *spec.fault_bound, counters);
                case FusionFunction::SchmidSchossmaier:
                    return schmid_schossmaier(intervals, *spec.fault_bound);
                case FusionFunction::Omega:
                    return omega_fuse(intervals);
                case FusionFunction::NFunction:
                    return n_function(intervals, *spec.fault_bound);
                default:
                    break;
            }
            break;
        }
        case Family::Binary: {
            std::vector<int> bits;
            bits.reserve(raw.size());
            for (const auto& [id, v] : raw) bits.push_back(v.bit);
            const BooleanRule rule = spec.boolean_rule.value_or(BooleanRule::majority());
            return Bit(boolean_fuse(bits, rule));
        }
    }
    throw std::logic_error("fuse_at_base: unhandled fusion function");
}

}  // namespace

AggregationPlan plan_aggregation(const Topology& topo, const FusionSpec& spec) {
    validate_spec(spec);
    const Orientation o = orient(topo);
    AggregationPlan plan;
    plan.mode = decomposable(spec) ? PlanMode::Hierarchical : PlanMode::Centralized;
    for (const NodeRecord& node : topo.nodes) {
        if (node.id == o.root) {
            plan.actions[node.id] = NodeAction::Finalize;
        } else if (o.children.at(node.id).empty() || plan.mode == PlanMode::Centralized) {
            plan.actions[node.id] = NodeAction::ForwardRaw;
        } else {
            plan.actions[node.id] = NodeAction::CombinePartial;
        }
    }
    return plan;
}

std::map<int, Reading> readings_by_id(std::span<const Reading> readings) {
    std::map<int, Reading> by_id;
    for (const Reading& r : readings) {
        if (!by_id.emplace(r.sensor_id, r).second) {
            throw Error(ErrorCode::IncompleteReadings,
                        "duplicate reading for sensor " + std::to_string(r.sensor_id));
        }
    }
    return by_id;
}

SimReport simulate(const Topology& topo, const std::map<int, Reading>& readings,
                   const FusionSpec& spec, const DelayModel& model, const SimOptions& options) {
    validate_topology(topo);
    if (!(model.link_delay_d > 0.0)) {
        throw Error(ErrorCode::InvalidDelay, "link delay must be positive");
    }
    validate_spec(spec);

    AggregationPlan plan = plan_aggregation(topo, spec);
    if (options.mode_override) {
        if (*options.mode_override == PlanMode::Hierarchical && !decomposable(spec)) {
            throw Error(ErrorCode::TypeMismatch,
                        "this fusion function cannot run hierarchically");
        }
        if (*options.mode_override != plan.mode) {
            plan.mode = *options.mode_override;
            for (auto& [id, action] : plan.actions) {
                if (action == NodeAction::Finalize) continue;
                const bool internal = action == NodeAction::CombinePartial ||
                                      plan.mode == PlanMode::Hierarchical;
                action = NodeAction::ForwardRaw;
                if (plan.mode == PlanMode::Hierarchical && internal) {
                    action = NodeAction::CombinePartial;
                }
            }
        }
    }

    const Orientation o = orient(topo);
    const Family family = family_of(spec.function);

    // Sensing set: every non-root node, or only the leaves of the
    // base-station-rooted tree.
    std::map<int, SensorValue> values;
    for (const NodeRecord& node : topo.nodes) {
        if (node.id == o.root) continue;
        const bool senses = options.internal_nodes_sense || o.children.at(node.id).empty();
        if (!senses) continue;
        const auto it = readings.find(node.id);
        if (it == readings.end()) {
            throw Error(ErrorCode::IncompleteReadings,
                        "no reading for sensing node " + std::to_string(node.id));
        }
        if (it->second.sensor_id != node.id) {
            throw Error(ErrorCode::IncompleteReadings,
                        "reading keyed by " + std::to_string(node.id) + " carries sensor id " +
                            std::to_string(it->second.sensor_id));
        }
        values.emplace(node.id, normalize(it->second, family, spec));
    }
    for (const auto& [id, reading] : readings) {
        if (!values.count(id)) {
            throw Error(ErrorCode::IncompleteReadings,
                        "reading for node " + std::to_string(id) +
                            " which is not a sensing node");
        }
    }

    const std::size_t n_readings = values.size();
    const bool hierarchical = plan.mode == PlanMode::Hierarchical;

    // Synchronous store-and-forward: a node emits in the tick after all
    // of its children's messages have arrived; each message crosses one
    // edge per tick. Processing takes no time.
    struct NodeState {
        std::size_t expected = 0;
        std::map<int, Partial> partial_inbox;
        std::map<int, std::vector<std::pair<int, SensorValue>>> raw_inbox;
    };
    std::map<int, NodeState> state;
    for (const NodeRecord& node : topo.nodes) {
        state[node.id].expected = o.children.at(node.id).size();
    }

    OpCounters counters;

    // Outgoing message of a completed node: fold the node's own value
    // (if it senses) with its children's messages in ascending child id.
    const auto emit_partial = [&](int id) -> Partial {
        NodeState& ns = state.at(id);
        bool seeded = false;
        Partial out;
        const auto own = values.find(id);
        if (own != values.end()) {
            out = seed_partial(spec.function, own->second);
            seeded = true;
        }
        for (int child : o.children.at(id)) {
            const Partial& incoming = ns.partial_inbox.at(child);
            if (!seeded) {
                out = incoming;
                seeded = true;
            } else {
                merge_partial(spec.function, out, incoming, counters);
            }
        }
        return out;
    };
    const auto emit_raw = [&](int id) {
        NodeState& ns = state.at(id);
        std::vector<std::pair<int, SensorValue>> out;
        const auto own = values.find(id);
        if (own != values.end()) out.emplace_back(id, own->second);
        for (int child : o.children.at(id)) {
            auto& batch = ns.raw_inbox.at(child);
            out.insert(out.end(), batch.begin(), batch.end());
        }
        return out;
    };

    std::vector<int> emitting;
    for (const NodeRecord& node : topo.nodes) {
        if (node.id != o.root && state.at(node.id).expected == 0) {
            emitting.push_back(node.id);
        }
    }
    std::sort(emitting.begin(), emitting.end());

    int tick = 0;
    int completion_tick = 0;
    while (!emitting.empty()) {
        ++tick;
        std::vector<int> next;
        for (int id : emitting) {
            const int parent = o.parent.at(id);
            NodeState& ps = state.at(parent);
            if (hierarchical) {
                ps.partial_inbox.emplace(id, emit_partial(id));
            } else {
                ps.raw_inbox.emplace(id, emit_raw(id));
            }
            const std::size_t arrived =
                hierarchical ? ps.partial_inbox.size() : ps.raw_inbox.size();
            if (arrived == ps.expected) {
                if (parent == o.root) {
                    completion_tick = tick;
                } else {
                    next.push_back(parent);
                }
            }
        }
        std::sort(next.begin(), next.end());
        emitting = std::move(next);
    }

    SimReport report;
    if (hierarchical) {
        bool seeded = false;
        Partial combined;
        for (int child : o.children.at(o.root)) {
            const Partial& incoming = state.at(o.root).partial_inbox.at(child);
            if (!seeded) {
                combined = incoming;
                seeded = true;
            } else {
                merge_partial(spec.function, combined, incoming, counters);
            }
        }
        if (!seeded) {
            throw Error(ErrorCode::EmptyInput, "no readings reached the base station");
        }
        report.fused = finalize_partial(spec.function, combined, counters);
    } else {
        std::vector<std::pair<int, SensorValue>> raw;
        for (int child : o.children.at(o.root)) {
            auto& batch = state.at(o.root).raw_inbox.at(child);
            raw.insert(raw.end(), batch.begin(), batch.end());
        }
        if (raw.empty()) {
            throw Error(ErrorCode::EmptyInput, "no readings reached the base station");
        }
        std::sort(raw.begin(), raw.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        report.fused = fuse_at_base(spec, raw, counters);
    }

    // Lower-bound sanity: min/max cannot finish under n-1 comparisons,
    // mean cannot finish under n-1 additions.
    if ((spec.function == FusionFunction::Min || spec.function == FusionFunction::Max) &&
        counters.comparisons + 1 < n_readings) {
        throw std::logic_error("comparison counter fell below the n-1 lower bound");
    }
    if (spec.function == FusionFunction::Mean && counters.additions + 1 < n_readings) {
        throw std::logic_error("addition counter fell below the n-1 lower bound");
    }

    report.total_delay = completion_tick * model.link_delay_d;
    report.counters = counters;
    report.plan = std::move(plan);
    report.hops_on_critical_path = completion_tick;
    return report;
}

RandomInstance random_instance(std::uint64_t seed, int n, int fault_count, double spread) {
    if (n < 1 || fault_count < 0 || fault_count >= n) {
        throw Error(ErrorCode::InvalidFaultBound,
                    "instance requires 0 <= fault_count < n");
    }
    if (!(spread > 0.0)) {
        throw std::invalid_argument("spread must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RandomInstance instance;
    instance.fault_count = fault_count;
    instance.true_value = (unit(rng) * 20.0 - 10.0) * spread;
    const double v = instance.true_value;

    instance.intervals.reserve(n);
    for (int i = 0; i < n - fault_count; ++i) {
        const double left = (0.05 + 0.95 * unit(rng)) * spread;
        const double right = (0.05 + 0.95 * unit(rng)) * spread;
        instance.intervals.emplace_back(v - left, v + right);
    }
    for (int i = 0; i < fault_count; ++i) {
        // Offset beyond the half-width keeps the true value outside.
        const double offset = (1.0 + 2.0 * unit(rng)) * spread;
        const double half_width = (0.01 + 0.49 * unit(rng)) * spread;
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        const double center = v + sign * offset;
        instance.intervals.emplace_back(center - half_width, center + half_width);
    }
    std::shuffle(instance.intervals.begin(), instance.intervals.end(), rng);
    return instance;
}

}  // namespace sensornet
