#include "sensornet/cli.hpp"

#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sensornet/error.hpp"
#include "sensornet/fusion.hpp"
#include "sensornet/io.hpp"
#include "sensornet/simulator.hpp"
#include "sensornet/topology.hpp"

namespace sensornet::cli {

namespace {

using nlohmann::json;

const std::map<std::string, FusionFunction>& function_table() {
    static const std::map<std::string, FusionFunction> table = {
        {"mean", FusionFunction::Mean},
        {"median", FusionFunction::Median},
        {"min", FusionFunction::Min},
        {"max", FusionFunction::Max},
        {"mode", FusionFunction::Mode},
        {"marzullo", FusionFunction::Marzullo},
        {"schmid_schossmaier", FusionFunction::SchmidSchossmaier},
        {"omega", FusionFunction::Omega},
        {"n_function", FusionFunction::NFunction},
        {"majority", FusionFunction::Majority},
        {"trimmed_midpoint", FusionFunction::TrimmedMidpoint},
    };
    return table;
}

std::vector<std::string> function_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : function_table()) names.push_back(name);
    return names;
}

TopologyKind kind_from(const std::string& name) {
    if (name == "hub_spoke") return TopologyKind::HubSpoke;
    if (name == "line") return TopologyKind::Line;
    if (name == "ring") return TopologyKind::Ring;
    if (name == "clique") return TopologyKind::Clique;
    return TopologyKind::QaryTree;
}

std::vector<double> crisp_values(const std::vector<Reading>& readings) {
    std::vector<double> values;
    values.reserve(readings.size());
    for (const Reading& r : readings) {
        if (!r.is_crisp()) {
            throw Error(ErrorCode::TypeMismatch,
                        "sensor " + std::to_string(r.sensor_id) + ": expected a crisp value");
        }
        values.push_back(r.crisp_value());
    }
    return values;
}

std::vector<Interval> interval_values(const std::vector<Reading>& readings,
                                      const std::optional<Tolerance>& tol) {
    std::vector<Interval> intervals;
    intervals.reserve(readings.size());
    for (const Reading& r : readings) {
        if (r.is_interval()) {
            intervals.push_back(r.interval_value());
        } else if (r.is_crisp() && tol) {
            intervals.push_back(to_interval(r.crisp_value(), *tol));
        } else {
            throw Error(ErrorCode::TypeMismatch,
                        "sensor " + std::to_string(r.sensor_id) +
                            ": expected an interval (crisp values need --tol-left/--tol-right)");
        }
    }
    return intervals;
}

std::vector<int> bit_values(const std::vector<Reading>& readings) {
    std::vector<int> bits;
    bits.reserve(readings.size());
    for (const Reading& r : readings) {
        if (!r.is_bit()) {
            throw Error(ErrorCode::TypeMismatch,
                        "sensor " + std::to_string(r.sensor_id) + ": expected a bit");
        }
        bits.push_back(r.bit_value());
    }
    return bits;
}

int require_f(const std::optional<int>& f, const std::string& fn) {
    if (!f) throw Error(ErrorCode::InvalidFaultBound, fn + " requires --f");
    return *f;
}

void reject_f(const std::optional<int>& f, const std::string& fn) {
    if (f) throw Error(ErrorCode::InvalidFaultBound, fn + " does not take --f");
}

void reject_tolerance(const std::optional<Tolerance>& tol, const std::string& fn) {
    if (tol) {
        throw Error(ErrorCode::TypeMismatch, fn + " does not take a tolerance");
    }
}

std::string fixed4(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << x;
    return os.str();
}

json payload_json(const Payload& p) {
    json j;
    if (const double* v = std::get_if<double>(&p)) {
        j["type"] = "value";
        j["value"] = *v;
    } else if (const Interval* iv = std::get_if<Interval>(&p)) {
        j["type"] = "interval";
        j["lo"] = iv->lo;
        j["hi"] = iv->hi;
    } else {
        j["type"] = "bit";
        j["bit"] = std::get<Bit>(p).value;
    }
    return j;
}

std::string payload_table(const Payload& p) {
    std::ostringstream os;
    if (const double* v = std::get_if<double>(&p)) {
        os << *v;
    } else if (const Interval* iv = std::get_if<Interval>(&p)) {
        os << "[" << iv->lo << ", " << iv->hi << "]";
    } else {
        os << std::get<Bit>(p).value;
    }
    return os.str();
}

json counters_json(const OpCounters& c) {
    json j;
    j["comparisons"] = c.comparisons;
    j["additions"] = c.additions;
    j["divisions"] = c.divisions;
    return j;
}

void counters_table(std::ostream& out, const OpCounters& c) {
    out << "comparisons: " << c.comparisons << "\n"
        << "additions: " << c.additions << "\n"
        << "divisions: " << c.divisions << "\n";
}

const char* action_name(NodeAction action) {
    switch (action) {
        case NodeAction::ForwardRaw: return "forward_raw";
        case NodeAction::CombinePartial: return "combine_partial";
        case NodeAction::Finalize: return "finalize";
    }
    return "unknown";
}

// Closed-form hop count to the base station for the stock shapes; the
// qary case reuses the tree-depth formula checked against the builder.
double predicted_hops(TopologyKind kind, int n, const std::optional<int>& q) {
    switch (kind) {
        case TopologyKind::HubSpoke:
        case TopologyKind::Clique:
            return 1.0;
        case TopologyKind::Line:
            return static_cast<double>(n - 1);
        case TopologyKind::Ring:
            return static_cast<double>(n / 2);
        case TopologyKind::QaryTree:
            return predicted_tree_delay(n, q.value());
        case TopologyKind::Custom:
            break;
    }
    throw Error(ErrorCode::InvalidTopology, "no closed-form delay for this kind");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fault-tolerant sensor fusion and network topology analyzer", "sensornet"};
    app.require_subcommand(1);

    std::string format = "table";
    const auto add_format = [&format](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"table", "structured"}))
            ->capture_default_str();
    };

    std::optional<int> fault_bound;
    std::optional<double> tol_left;
    std::optional<double> tol_right;
    double link_delay = 1.0;

    CLI::App* fuse_cmd = app.add_subcommand("fuse", "Fuse a readings file with one function");
    std::string fn_name;
    std::string fuse_readings_path;
    fuse_cmd->add_option("--fn", fn_name, "Fusion function")
        ->required()
        ->check(CLI::IsMember(function_names()));
    fuse_cmd->add_option("--f", fault_bound, "Fault bound (max faulty sensors tolerated)");
    CLI::Option* tl = fuse_cmd->add_option("--tol-left", tol_left,
                                           "Left tolerance for crisp-to-interval conversion");
    CLI::Option* tr = fuse_cmd->add_option("--tol-right", tol_right,
                                           "Right tolerance for crisp-to-interval conversion");
    tl->needs(tr);
    tr->needs(tl);
    fuse_cmd->add_option("readings", fuse_readings_path, "Readings file")->required();
    add_format(fuse_cmd);

    CLI::App* topo_cmd = app.add_subcommand("topo", "Build a stock topology and report delays");
    std::string kind_name;
    int topo_n = 0;
    std::optional<int> topo_q;
    topo_cmd->add_option("--kind", kind_name, "Topology shape")
        ->required()
        ->check(CLI::IsMember({"hub_spoke", "line", "ring", "clique", "qary_tree"}));
    topo_cmd->add_option("--n", topo_n,
                         "Node count (qary_tree: nodes below the base station)")
        ->required();
    topo_cmd->add_option("--q", topo_q, "Branching factor (qary_tree only)");
    topo_cmd->add_option("--link-delay", link_delay, "Per-hop link delay d")
        ->capture_default_str();
    add_format(topo_cmd);

    CLI::App* entropy_cmd =
        app.add_subcommand("entropy", "Degree pmf and graph entropy of a topology file");
    std::string entropy_path;
    entropy_cmd->add_option("topology", entropy_path, "Topology file")->required();
    add_format(entropy_cmd);

    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "Run in-network aggregation over a topology");
    std::string spec_name;
    bool leaf_only = false;
    std::string sim_topo_path;
    std::string sim_readings_path;
    sim_cmd->add_option("--spec", spec_name, "Fusion function")
        ->required()
        ->check(CLI::IsMember(function_names()));
    sim_cmd->add_option("--f", fault_bound, "Fault bound (max faulty sensors tolerated)");
    sim_cmd->add_option("--link-delay", link_delay, "Per-hop link delay d")
        ->capture_default_str();
    CLI::Option* stl = sim_cmd->add_option("--tol-left", tol_left,
                                           "Left tolerance for crisp-to-interval conversion");
    CLI::Option* str = sim_cmd->add_option("--tol-right", tol_right,
                                           "Right tolerance for crisp-to-interval conversion");
    stl->needs(str);
    str->needs(stl);
    sim_cmd->add_flag("--leaf-only", leaf_only, "Only leaf nodes sense");
    sim_cmd->add_option("topology", sim_topo_path, "Topology file")->required();
    sim_cmd->add_option("readings", sim_readings_path, "Readings file")->required();
    add_format(sim_cmd);

    CLI::App* extremal_cmd =
        app.add_subcommand("extremal", "Rank labeled-tree degree shapes by entropy");
    int extremal_n = 0;
    extremal_cmd->add_option("--n", extremal_n, "Vertex count (2..9)")->required();
    add_format(extremal_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const bool structured = format == "structured";
    const auto make_tolerance = [&]() -> std::optional<Tolerance> {
        if (tol_left && tol_right) return Tolerance(*tol_left, *tol_right);
        return std::nullopt;
    };

    try {
        if (fuse_cmd->parsed()) {
            const std::vector<Reading> readings = load_readings(fuse_readings_path);
            if (readings.empty()) {
                throw Error(ErrorCode::EmptyInput, "no readings in " + fuse_readings_path);
            }
            const std::optional<Tolerance> tol = make_tolerance();
            const FusionFunction fn = function_table().at(fn_name);
            OpCounters counters;
            Payload fused;
            switch (fn) {
                case FusionFunction::Mean:
                case FusionFunction::Median:
                case FusionFunction::Min:
                case FusionFunction::Max:
                case FusionFunction::Mode: {
                    reject_f(fault_bound, fn_name);
                    reject_tolerance(tol, fn_name);
                    static const std::map<FusionFunction, CrispKind> kinds = {
                        {FusionFunction::Mean, CrispKind::Mean},
                        {FusionFunction::Median, CrispKind::Median},
                        {FusionFunction::Min, CrispKind::Min},
                        {FusionFunction::Max, CrispKind::Max},
                        {FusionFunction::Mode, CrispKind::Mode},
                    };
                    fused = fuse_crisp(crisp_values(readings), kinds.at(fn), counters);
                    break;
                }
                case FusionFunction::Marzullo:
                    fused = marzullo(interval_values(readings, tol),
                                     require_f(fault_bound, fn_name), counters);
                    break;
                case FusionFunction::SchmidSchossmaier:
                    fused = schmid_schossmaier(interval_values(readings, tol),
                                               require_f(fault_bound, fn_name));
                    break;
                case FusionFunction::Omega:
                    reject_f(fault_bound, fn_name);
                    fused = omega_fuse(interval_values(readings, tol));
                    break;
                case FusionFunction::NFunction:
                    fused = n_function(interval_values(readings, tol),
                                       require_f(fault_bound, fn_name));
                    break;
                case FusionFunction::Majority:
                    reject_f(fault_bound, fn_name);
                    reject_tolerance(tol, fn_name);
                    fused = Bit(boolean_fuse(bit_values(readings), BooleanRule::majority()));
                    break;
                case FusionFunction::TrimmedMidpoint:
                    reject_tolerance(tol, fn_name);
                    fused = trimmed_midpoint_fuse(crisp_values(readings),
                                                  require_f(fault_bound, fn_name));
                    break;
            }
            if (structured) {
                json doc;
                doc["function"] = fn_name;
                doc["inputs"] = readings.size();
                doc["fused"] = payload_json(fused);
                doc["counters"] = counters_json(counters);
                out << doc.dump(2) << "\n";
            } else {
                out << "function: " << fn_name << "\n"
                    << "inputs: " << readings.size() << "\n"
                    << "fused: " << payload_table(fused) << "\n";
                counters_table(out, counters);
            }
        } else if (topo_cmd->parsed()) {
            const TopologyKind kind = kind_from(kind_name);
            const Topology topo = build_topology(kind, topo_n, topo_q);
            const DelayModel model{link_delay};
            const double measured = measured_delay(topo, model);
            const double predicted = predicted_hops(kind, topo_n, topo_q) * link_delay;
            if (structured) {
                json doc;
                doc["kind"] = kind_name;
                doc["nodes"] = topo.node_count();
                doc["edges"] = topo.edge_count();
                doc["link_delay"] = link_delay;
                doc["measured_delay"] = measured;
                doc["predicted_delay"] = predicted;
                out << doc.dump(2) << "\n";
            } else {
                out << "kind: " << kind_name << "\n"
                    << "nodes: " << topo.node_count() << "\n"
                    << "edges: " << topo.edge_count() << "\n"
                    << "link_delay: " << link_delay << "\n"
                    << "measured_delay: " << measured << "\n"
                    << "predicted_delay: " << predicted << "\n";
            }
        } else if (entropy_cmd->parsed()) {
            const Topology topo = load_topology(entropy_path);
            const DegreePmf pmf = degree_pmf(topo);
            const double entropy = graph_entropy(topo);
            const auto adj = adjacency(topo);
            if (structured) {
                json doc;
                doc["nodes"] = topo.node_count();
                doc["edges"] = topo.edge_count();
                json rows = json::array();
                for (const auto& [id, p] : pmf.probs) {
                    json row;
                    row["node"] = id;
                    row["degree"] = adj.at(id).size();
                    row["p"] = p;
                    rows.push_back(row);
                }
                doc["pmf"] = rows;
                doc["entropy_bits"] = entropy;
                out << doc.dump(2) << "\n";
            } else {
                out << "nodes: " << topo.node_count() << "\n"
                    << "edges: " << topo.edge_count() << "\n"
                    << "pmf:\n";
                for (const auto& [id, p] : pmf.probs) {
                    out << "  node " << id << ": degree " << adj.at(id).size() << ", p = "
                        << fixed4(p) << "\n";
                }
                out << "entropy_bits: " << fixed4(entropy) << "\n";
            }
        } else if (sim_cmd->parsed()) {
            const Topology topo = load_topology(sim_topo_path);
            const std::vector<Reading> readings = load_readings(sim_readings_path);
            FusionSpec spec;
            spec.function = function_table().at(spec_name);
            spec.fault_bound = fault_bound;
            spec.tolerance = make_tolerance();
            SimOptions options;
            options.internal_nodes_sense = !leaf_only;
            const SimReport report =
                simulate(topo, readings_by_id(readings), spec, DelayModel{link_delay}, options);
            const char* mode =
                report.plan.mode == PlanMode::Hierarchical ? "hierarchical" : "centralized";
            if (structured) {
                json doc;
                doc["function"] = spec_name;
                doc["mode"] = mode;
                doc["fused"] = payload_json(report.fused);
                doc["total_delay"] = report.total_delay;
                doc["hops_on_critical_path"] = report.hops_on_critical_path;
                doc["counters"] = counters_json(report.counters);
                json actions;
                for (const auto& [id, action] : report.plan.actions) {
                    actions[std::to_string(id)] = action_name(action);
                }
                doc["actions"] = actions;
                out << doc.dump(2) << "\n";
            } else {
                out << "function: " << spec_name << "\n"
                    << "mode: " << mode << "\n"
                    << "fused: " << payload_table(report.fused) << "\n"
                    << "total_delay: " << report.total_delay << "\n"
                    << "hops_on_critical_path: " << report.hops_on_critical_path << "\n";
                counters_table(out, report.counters);
            }
        } else if (extremal_cmd->parsed()) {
            const ExtremalTreeReport report = extremal_tree_check(extremal_n);
            std::uint64_t total = 0;
            for (const TreeShapeStat& stat : report.ranking) total += stat.labeled_trees;
            if (structured) {
                json doc;
                doc["n"] = report.n;
                doc["total_labeled_trees"] = total;
                json rows = json::array();
                for (const TreeShapeStat& stat : report.ranking) {
                    json row;
                    row["degrees"] = stat.degrees;
                    row["entropy_bits"] = stat.entropy_bits;
                    row["labeled_trees"] = stat.labeled_trees;
                    rows.push_back(row);
                }
                doc["ranking"] = rows;
                doc["path_attains_max"] = report.path_attains_max;
                doc["star_attains_min"] = report.star_attains_min;
                out << doc.dump(2) << "\n";
            } else {
                out << "n: " << report.n << "\n"
                    << "total_labeled_trees: " << total << "\n"
                    << "shapes (entropy descending):\n";
                for (const TreeShapeStat& stat : report.ranking) {
                    out << "  degrees [";
                    for (std::size_t i = 0; i < stat.degrees.size(); ++i) {
                        out << (i ? " " : "") << stat.degrees[i];
                    }
                    out << "]  entropy " << fixed4(stat.entropy_bits) << "  trees "
                        << stat.labeled_trees << "\n";
                }
                out << std::boolalpha
                    << "path_attains_max: " << report.path_attains_max << "\n"
                    << "star_attains_min: " << report.star_attains_min << "\n";
            }
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sensornet::cli
