#include "sensornet/io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "sensornet/error.hpp"

namespace sensornet {

namespace {

using nlohmann::json;

int require_int(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number_integer()) {
        throw Error(ErrorCode::ParseError,
                    std::string("missing or non-integer field \"") + field + "\"");
    }
    return j[field].get<int>();
}

double require_number(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number()) {
        throw Error(ErrorCode::ParseError,
                    std::string("missing or non-numeric field \"") + field + "\"");
    }
    return j[field].get<double>();
}

TopologyKind parse_kind(const std::string& name) {
    if (name == "hub_spoke") return TopologyKind::HubSpoke;
    if (name == "line") return TopologyKind::Line;
    if (name == "ring") return TopologyKind::Ring;
    if (name == "clique") return TopologyKind::Clique;
    if (name == "qary_tree") return TopologyKind::QaryTree;
    if (name == "custom") return TopologyKind::Custom;
    throw Error(ErrorCode::ParseError, "unknown topology kind \"" + name + "\"");
}

NodeRole parse_role(const std::string& name) {
    if (name == "base_station") return NodeRole::BaseStation;
    if (name == "cluster_head") return NodeRole::ClusterHead;
    if (name == "sensor") return NodeRole::Sensor;
    throw Error(ErrorCode::ParseError, "unknown node role \"" + name + "\"");
}

Topology parse_custom(const json& doc) {
    Topology topo;
    topo.kind = TopologyKind::Custom;
    if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty()) {
        throw Error(ErrorCode::ParseError, "custom topology needs a non-empty \"nodes\" array");
    }
    for (const json& entry : doc["nodes"]) {
        NodeRecord node;
        if (entry.is_number_integer()) {
            node.id = entry.get<int>();
            node.role = NodeRole::Sensor;
        } else if (entry.is_object()) {
            node.id = require_int(entry, "id");
            node.role = entry.contains("role") ? parse_role(entry["role"].get<std::string>())
                                               : NodeRole::Sensor;
        } else {
            throw Error(ErrorCode::ParseError,
                        "node entries must be ids or {\"id\": ..., \"role\": ...} objects");
        }
        topo.nodes.push_back(node);
    }
    if (!doc.contains("edges") || !doc["edges"].is_array()) {
        throw Error(ErrorCode::ParseError, "custom topology needs an \"edges\" array");
    }
    for (const json& entry : doc["edges"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
            !entry[1].is_number_integer()) {
            throw Error(ErrorCode::ParseError, "edges must be [a, b] integer pairs");
        }
        topo.edges.emplace_back(entry[0].get<int>(), entry[1].get<int>());
    }
    if (doc.contains("base_station")) {
        const int bs = require_int(doc, "base_station");
        bool found = false;
        for (NodeRecord& node : topo.nodes) {
            if (node.id == bs) {
                node.role = NodeRole::BaseStation;
                found = true;
            } else if (node.role == NodeRole::BaseStation) {
                node.role = NodeRole::ClusterHead;
            }
        }
        if (!found) {
            throw Error(ErrorCode::ParseError,
                        "base_station " + std::to_string(bs) + " is not in the node list");
        }
    }
    validate_topology(topo);
    return topo;
}

}  // namespace

Topology parse_topology(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
        throw Error(ErrorCode::ParseError, "topology document needs a \"kind\" string");
    }
    const TopologyKind kind = parse_kind(doc["kind"].get<std::string>());
    if (kind == TopologyKind::Custom) return parse_custom(doc);

    const int n = require_int(doc, "n");
    std::optional<int> q;
    if (kind == TopologyKind::QaryTree) q = require_int(doc, "q");
    return build_topology(kind, n, q);
}

Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open topology file " + path);
    }
    return parse_topology(in);
}

std::vector<Reading> parse_readings(std::istream& in) {
    std::vector<Reading> readings;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            if (!record.is_object()) {
                throw Error(ErrorCode::ParseError, "record is not an object");
            }
            const int id = require_int(record, "sensor");
            const bool has_value = record.contains("value");
            const bool has_span = record.contains("lo") || record.contains("hi");
            const bool has_bit = record.contains("bit");
            if (has_value + has_span + has_bit != 1) {
                throw Error(ErrorCode::ParseError,
                            "record needs exactly one of \"value\", \"lo\"/\"hi\", \"bit\"");
            }
            if (has_value) {
                readings.push_back(Reading::crisp(id, require_number(record, "value")));
            } else if (has_span) {
                const double lo = require_number(record, "lo");
                const double hi = require_number(record, "hi");
                readings.push_back(Reading::interval(id, Interval(lo, hi)));
            } else {
                const int bit = require_int(record, "bit");
                if (bit != 0 && bit != 1) {
                    throw Error(ErrorCode::ParseError, "\"bit\" must be 0 or 1");
                }
                readings.push_back(Reading::bit(id, bit));
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ParseError) {
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": " + e.message());
            }
            throw;
        }
    }
    return readings;
}

std::vector<Reading> load_readings(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open readings file " + path);
    }
    return parse_readings(in);
}

}  // namespace sensornet
