#ifndef SENSORNET_TOPOLOGY_HPP
#define SENSORNET_TOPOLOGY_HPP

/**
 * \file topology.hpp
 *
 * Candidate network architectures, their delay under a uniform per-link
 * delay model, and degree-based graph entropy.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sensornet/error.hpp"

namespace sensornet {

enum class NodeRole { BaseStation, ClusterHead, Sensor };

struct NodeRecord {
    int id = 0;
    NodeRole role = NodeRole::Sensor;
};

enum class TopologyKind { HubSpoke, Line, Ring, Clique, QaryTree, Custom };

/// Connected graph of sensors, cluster heads, and exactly one base
/// station. Edges are unordered id pairs with no self-loops and no
/// duplicates.
struct Topology {
    TopologyKind kind = TopologyKind::Custom;
    std::vector<NodeRecord> nodes;
    std::vector<std::pair<int, int>> edges;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }

    /// Id of the unique base station node.
    int base_station() const;
};

/// Builds one of the stock architectures.
///
/// For hub_spoke, line, ring, and clique, n counts all nodes including
/// the base station. For qary_tree, n counts the nodes below the root,
/// which must exactly fill levels 1..d of a perfect q-ary tree
/// (n = q + q^2 + ... + q^d); the base station root is added on top.
Topology build_topology(TopologyKind kind, int n, std::optional<int> q = std::nullopt);

/// Checks connectivity, edge sanity, and the single-base-station rule.
/// Throws InvalidTopology with a reason on the first violation.
void validate_topology(const Topology& topo);

/// Neighbor lists keyed by node id, each sorted ascending.
std::map<int, std::vector<int>> adjacency(const Topology& topo);

/// Breadth-first hop distance from root to every reachable node.
std::map<int, int> hop_counts(const Topology& topo, int root);

/// Uniform per-link delay, the same on every edge.
struct DelayModel {
    double link_delay_d = 1.0;
};

/// Worst-case time for any node's data to reach the base station:
/// the base station's graph eccentricity in hops times the link delay.
double measured_delay(const Topology& topo, const DelayModel& model);

/// Closed-form depth of the perfect q-ary tree holding n non-root nodes:
/// log_q(q(n+1) - n) - 1. The value is an exact integer for every valid
/// n; anything else throws InvalidTreeSize.
double predicted_tree_delay(int n, int q);

/// Probability mass function over nodes, p_i = degree(i) / total degree.
struct DegreePmf {
    std::vector<std::pair<int, double>> probs;  // (node id, probability)
};

DegreePmf degree_pmf(const Topology& topo);

/// Shannon entropy of the degree pmf, in bits. Terms with p = 0
/// contribute nothing. Throws NoEdges on an edgeless graph.
double graph_entropy(const Topology& topo);

/// Which closed form to evaluate for the balanced-binary-tree entropy.
/// Paper uses an intermediate-node count of 2^(d-1) - 1, which for d >= 2
/// is inconsistent with a perfect binary tree (the resulting total degree
/// is odd). Corrected uses the actual count 2^d - 2, so its value matches
/// the degree-sequence entropy of the built tree.
enum class BtreeFormula { Paper, Corrected };

double balanced_btree_entropy(int depth, BtreeFormula formula);

/// Decodes a Pruefer sequence over labels {0..n-1} into the edge list of
/// the corresponding labeled tree. The sequence length must be n-2.
std::vector<std::pair<int, int>> prufer_decode(std::span<const int> sequence, int n);

/// One tree shape (degree multiset) seen during exhaustive enumeration.
struct TreeShapeStat {
    std::vector<int> degrees;  // sorted descending
    double entropy_bits = 0.0;
    std::uint64_t labeled_trees = 0;
};

struct ExtremalTreeReport {
    int n = 0;
    std::vector<TreeShapeStat> ranking;  // entropy descending
    bool path_attains_max = false;
    bool star_attains_min = false;

    const TreeShapeStat& max_shape() const { return ranking.front(); }
    const TreeShapeStat& min_shape() const { return ranking.back(); }
};

/// Enumerates every labeled tree on n vertices (2 <= n <= 9) through its
/// Pruefer sequence, ranks the distinct degree multisets by entropy, and
/// reports whether the path attains the maximum and the star the minimum.
ExtremalTreeReport extremal_tree_check(int n);

}  // namespace sensornet

#endif
