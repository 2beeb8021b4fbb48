#ifndef SENSORNET_IO_HPP
#define SENSORNET_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sensornet/reading.hpp"
#include "sensornet/topology.hpp"

namespace sensornet {

/// Parses a topology document. Stock kinds give {"kind": ..., "n": ...}
/// with an additional "q" for qary_tree; custom graphs give
/// {"kind": "custom", "nodes": [...], "edges": [[a,b], ...],
/// "base_station": id}. Node entries are either bare ids or
/// {"id": ..., "role": ...} objects.
Topology parse_topology(std::istream& in);
Topology load_topology(const std::string& path);

/// Parses readings, one JSON record per line:
///   {"sensor": id, "value": x}
///   {"sensor": id, "lo": a, "hi": b}
///   {"sensor": id, "bit": 0|1}
/// Blank lines are skipped. Malformed lines throw ParseError with the
/// line number.
std::vector<Reading> parse_readings(std::istream& in);
std::vector<Reading> load_readings(const std::string& path);

}  // namespace sensornet

#endif
