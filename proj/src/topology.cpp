#include "sensornet/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <set>
#include <string>
#include <unordered_map>

namespace sensornet {

namespace {

// Depth d with q + q^2 + ... + q^d == n, or -1 if n is not a perfect count.
int perfect_tree_depth(int n, int q) {
    long long total = 0;
    long long level = 1;
    int depth = 0;
    while (total < n) {
        level *= q;
        total += level;
        ++depth;
    }
    return total == n ? depth : -1;
}

Topology build_qary_tree(int n, std::optional<int> q_opt) {
    if (!q_opt || *q_opt < 2) {
        throw Error(ErrorCode::InvalidTreeSize, "qary_tree requires a branching factor q >= 2");
    }
    const int q = *q_opt;
    if (n < 1) {
        throw Error(ErrorCode::InvalidTreeSize, "qary_tree requires n >= 1");
    }
    const int depth = perfect_tree_depth(n, q);
    if (depth < 0) {
        throw Error(ErrorCode::InvalidTreeSize,
                    "n=" + std::to_string(n) + " does not fill a perfect " + std::to_string(q) +
                        "-ary tree");
    }
    Topology topo;
    topo.kind = TopologyKind::QaryTree;
    const int total = n + 1;  // root plus the n nodes below it
    long long leaves = 1;
    for (int i = 0; i < depth; ++i) leaves *= q;
    const long long first_leaf = total - leaves;
    topo.nodes.reserve(total);
    topo.nodes.push_back({0, NodeRole::BaseStation});
    for (int id = 1; id < total; ++id) {
        const NodeRole role = id >= first_leaf ? NodeRole::Sensor : NodeRole::ClusterHead;
        topo.nodes.push_back({id, role});
        // In breadth-first numbering the parent of node id is (id-1)/q.
        topo.edges.push_back({(id - 1) / q, id});
    }
    return topo;
}

}  // namespace

int Topology::base_station() const {
    int found = -1;
    for (const NodeRecord& node : nodes) {
        if (node.role == NodeRole::BaseStation) {
            if (found >= 0) {
                throw Error(ErrorCode::InvalidTopology, "more than one base station");
            }
            found = node.id;
        }
    }
    if (found < 0) {
        throw Error(ErrorCode::InvalidTopology, "no base station node");
    }
    return found;
}

Topology build_topology(TopologyKind kind, int n, std::optional<int> q) {
    switch (kind) {
        case TopologyKind::HubSpoke: {
            if (n < 2) throw Error(ErrorCode::InvalidSize, "hub_spoke requires n >= 2");
            Topology topo;
            topo.kind = kind;
            topo.nodes.push_back({0, NodeRole::BaseStation});
            for (int id = 1; id < n; ++id) {
                topo.nodes.push_back({id, NodeRole::Sensor});
                topo.edges.push_back({0, id});
            }
            return topo;
        }
        case TopologyKind::Line: {
            if (n < 2) throw Error(ErrorCode::InvalidSize, "line requires n >= 2");
            Topology topo;
            topo.kind = kind;
            topo.nodes.push_back({0, NodeRole::BaseStation});
            for (int id = 1; id < n; ++id) {
                const NodeRole role = id == n - 1 ? NodeRole::Sensor : NodeRole::ClusterHead;
                topo.nodes.push_back({id, role});
                topo.edges.push_back({id - 1, id});
            }
            return topo;
        }
        case TopologyKind::Ring: {
            if (n < 3) throw Error(ErrorCode::InvalidSize, "ring requires n >= 3");
            Topology topo;
            topo.kind = kind;
            topo.nodes.push_back({0, NodeRole::BaseStation});
            for (int id = 1; id < n; ++id) {
                topo.nodes.push_back({id, NodeRole::Sensor});
                topo.edges.push_back({id - 1, id});
            }
            topo.edges.push_back({0, n - 1});
            return topo;
        }
        case TopologyKind::Clique: {
            if (n < 2) throw Error(ErrorCode::InvalidSize, "clique requires n >= 2");
            Topology topo;
            topo.kind = kind;
            topo.nodes.push_back({0, NodeRole::BaseStation});
            for (int id = 1; id < n; ++id) topo.nodes.push_back({id, NodeRole::Sensor});
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) topo.edges.push_back({a, b});
            }
            return topo;
        }
        case TopologyKind::QaryTree:
            return build_qary_tree(n, q);
        case TopologyKind::Custom:
            throw Error(ErrorCode::InvalidTopology,
                        "custom topologies need an explicit node and edge list");
    }
    throw Error(ErrorCode::InvalidTopology, "unknown topology kind");
}

void validate_topology(const Topology& topo) {
    if (topo.nodes.empty()) {
        throw Error(ErrorCode::InvalidTopology, "topology has no nodes");
    }
    std::set<int> ids;
    for (const NodeRecord& node : topo.nodes) {
        if (!ids.insert(node.id).second) {
            throw Error(ErrorCode::InvalidTopology,
                        "duplicate node id " + std::to_string(node.id));
        }
    }
    topo.base_station();  // exactly one
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : topo.edges) {
        if (a == b) {
            throw Error(ErrorCode::InvalidTopology, "self-loop at node " + std::to_string(a));
        }
        if (!ids.count(a) || !ids.count(b)) {
            throw Error(ErrorCode::InvalidTopology,
                        "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") references an unknown node");
        }
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
            throw Error(ErrorCode::InvalidTopology,
                        "duplicate edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    }
    if (hop_counts(topo, topo.base_station()).size() != topo.node_count()) {
        throw Error(ErrorCode::InvalidTopology, "graph is not connected");
    }
}

std::map<int, std::vector<int>> adjacency(const Topology& topo) {
    std::map<int, std::vector<int>> adj;
    for (const NodeRecord& node : topo.nodes) adj[node.id];
    for (const auto& [a, b] : topo.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& [id, neighbors] : adj) std::sort(neighbors.begin(), neighbors.end());
    return adj;
}

std::map<int, int> hop_counts(const Topology& topo, int root) {
    const auto adj = adjacency(topo);
    std::map<int, int> depth;
    if (!adj.count(root)) return depth;
    std::deque<int> queue{root};
    depth[root] = 0;
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        for (int next : adj.at(node)) {
            if (!depth.count(next)) {
                depth[next] = depth[node] + 1;
                queue.push_back(next);
            }
        }
    }
    return depth;
}

double measured_delay(const Topology& topo, const DelayModel& model) {
    if (!(model.link_delay_d > 0.0)) {
        throw Error(ErrorCode::InvalidDelay, "link delay must be positive");
    }
    const auto depths = hop_counts(topo, topo.base_station());
    if (depths.size() != topo.node_count()) {
        throw Error(ErrorCode::InvalidTopology, "graph is not connected");
    }
    int eccentricity = 0;
    for (const auto& [id, d] : depths) eccentricity = std::max(eccentricity, d);
    return eccentricity * model.link_delay_d;
}

double predicted_tree_delay(int n, int q) {
    if (q < 2) {
        throw Error(ErrorCode::InvalidTreeSize, "branching factor must be >= 2");
    }
    if (n < 1) {
        throw Error(ErrorCode::InvalidTreeSize, "tree must hold at least one node");
    }
    const double value =
        std::log(static_cast<double>(q) * (n + 1.0) - n) / std::log(static_cast<double>(q)) - 1.0;
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9 || perfect_tree_depth(n, q) != static_cast<int>(rounded)) {
        throw Error(ErrorCode::InvalidTreeSize,
                    "n=" + std::to_string(n) + " does not fill a perfect " + std::to_string(q) +
                        "-ary tree");
    }
    return rounded;
}

DegreePmf degree_pmf(const Topology& topo) {
    if (topo.edges.empty()) {
        throw Error(ErrorCode::NoEdges, "degree pmf needs at least one edge");
    }
    std::map<int, int> degree;
    for (const NodeRecord& node : topo.nodes) degree[node.id] = 0;
    for (const auto& [a, b] : topo.edges) {
        ++degree.at(a);
        ++degree.at(b);
    }
    const double total = 2.0 * static_cast<double>(topo.edge_count());
    DegreePmf pmf;
    pmf.probs.reserve(topo.node_count());
    for (const NodeRecord& node : topo.nodes) {
        pmf.probs.emplace_back(node.id, degree.at(node.id) / total);
    }
    return pmf;
}

double graph_entropy(const Topology& topo) {
    const DegreePmf pmf = degree_pmf(topo);
    double entropy = 0.0;
    for (const auto& [id, p] : pmf.probs) {
        if (p > 0.0) entropy -= p * std::log2(p);
    }
    return entropy;
}

double balanced_btree_entropy(int depth, BtreeFormula formula) {
    if (depth < 1) {
        throw Error(ErrorCode::InvalidDepth, "tree depth must be >= 1");
    }
    const double leaves = std::pow(2.0, depth);
    const double intermediates =
        formula == BtreeFormula::Paper ? std::pow(2.0, depth - 1) - 1.0 : leaves - 2.0;
    const double total_degree = 2.0 + 3.0 * intermediates + leaves;
    const auto term = [total_degree](double count, double degree) {
        if (count <= 0.0) return 0.0;
        const double p = degree / total_degree;
        return count * p * std::log2(p);
    };
    return -(term(1.0, 2.0) + term(intermediates, 3.0) + term(leaves, 1.0));
}

std::vector<std::pair<int, int>> prufer_decode(std::span<const int> sequence, int n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidSize, "a labeled tree needs at least 2 vertices");
    }
    if (sequence.size() != static_cast<std::size_t>(n - 2)) {
        throw Error(ErrorCode::InvalidSize, "sequence length must be n-2");
    }
    std::vector<int> degree(n, 1);
    for (int s : sequence) {
        if (s < 0 || s >= n) {
            throw Error(ErrorCode::InvalidSize, "sequence labels must lie in [0, n)");
        }
        ++degree[s];
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    int ptr = 0;
    while (degree[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int s : sequence) {
        edges.push_back({leaf, s});
        if (--degree[s] == 1 && s < ptr) {
            leaf = s;
        } else {
            ++ptr;
            while (degree[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.push_back({leaf, n - 1});
    return edges;
}

ExtremalTreeReport extremal_tree_check(int n) {
    if (n < 2 || n > 9) {
        throw Error(ErrorCode::TooLarge,
                    "exhaustive enumeration is limited to 2 <= n <= 9 vertices");
    }
    const int len = n - 2;
    const double total_degree = 2.0 * (n - 1);
    std::array<double, 10> contribution{};
    for (int d = 1; d < n; ++d) {
        const double p = d / total_degree;
        contribution[d] = -p * std::log2(p);
    }

    struct ShapeAccum {
        double entropy = 0.0;
        std::uint64_t count = 0;
        std::vector<int> degrees;
    };
    std::unordered_map<std::uint64_t, ShapeAccum> shapes;

    std::vector<int> sequence(len, 0);
    std::vector<int> degree(n, 1);
    degree[0] += len;
    while (true) {
        // Canonical shape key: degrees sorted descending, 4 bits apiece.
        std::array<int, 9> sorted{};
        std::copy(degree.begin(), degree.end(), sorted.begin());
        std::sort(sorted.begin(), sorted.begin() + n, std::greater<>());
        std::uint64_t key = 0;
        for (int i = 0; i < n; ++i) key = key << 4 | static_cast<std::uint64_t>(sorted[i]);

        auto [it, inserted] = shapes.try_emplace(key);
        ShapeAccum& accum = it->second;
        if (inserted) {
            double entropy = 0.0;
            for (int i = 0; i < n; ++i) entropy += contribution[degree[i]];
            accum.entropy = entropy;
            accum.degrees.assign(sorted.begin(), sorted.begin() + n);
        }
        ++accum.count;

        int pos = len - 1;
        while (pos >= 0 && sequence[pos] == n - 1) {
            --degree[n - 1];
            ++degree[0];
            sequence[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        --degree[sequence[pos]];
        ++sequence[pos];
        ++degree[sequence[pos]];
    }

    ExtremalTreeReport report;
    report.n = n;
    report.ranking.reserve(shapes.size());
    for (auto& [key, accum] : shapes) {
        report.ranking.push_back({std::move(accum.degrees), accum.entropy, accum.count});
    }
    std::sort(report.ranking.begin(), report.ranking.end(),
              [](const TreeShapeStat& a, const TreeShapeStat& b) {
                  if (a.entropy_bits != b.entropy_bits) return a.entropy_bits > b.entropy_bits;
                  return a.degrees < b.degrees;
              });

    std::vector<int> path_degrees(n, 2);
    path_degrees[0] = 2;
    path_degrees[n - 1] = 1;
    path_degrees[n - 2] = 1;
    std::sort(path_degrees.begin(), path_degrees.end(), std::greater<>());
    std::vector<int> star_degrees(n, 1);
    star_degrees[0] = n - 1;

    double path_entropy = 0.0;
    double star_entropy = 0.0;
    for (const TreeShapeStat& shape : report.ranking) {
        if (shape.degrees == path_degrees) path_entropy = shape.entropy_bits;
        if (shape.degrees == star_degrees) star_entropy = shape.entropy_bits;
    }
    report.path_attains_max = true;
    report.star_attains_min = true;
    for (const TreeShapeStat& shape : report.ranking) {
        if (shape.entropy_bits > path_entropy + 1e-12) report.path_attains_max = false;
        if (shape.entropy_bits < star_entropy - 1e-12) report.star_attains_min = false;
    }
    return report;
}

}  // namespace sensornet
