#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "botdet/graph.hpp"

namespace botdet {

// Network measures over the directed simple graph (multiplicities ignored).
// Eigenvector centrality and the clustering coefficient act on the
// undirected projection; PageRank and HITS act on the directed graph.
// Per-source computations run in parallel; every function returns results
// that are bitwise independent of the thread count.

struct DegreeCentrality {
  std::vector<int64_t> in, out, total;
};

DegreeCentrality degree_centrality(const InteractionGraph& graph);

// Brandes exact betweenness on the directed unweighted graph, endpoints
// excluded, unnormalized.
std::vector<double> betweenness(const InteractionGraph& graph);

// Harmonic closeness: sum of inverse out-distances to reachable nodes,
// normalized by (n - 1). Nodes that reach nothing score 0.
std::vector<double> closeness(const InteractionGraph& graph);

// Max finite out-distance per node; 0 when nothing is reachable.
std::vector<int64_t> eccentricity(const InteractionGraph& graph);

struct PowerIterationResult {
  std::vector<double> values;
  bool converged = false;
  int iterations = 0;
};

// Dominant eigenvector of the undirected projection's adjacency, non-negative
// and unit L2 norm. Power iteration on A + I (same eigenvectors; the shift
// keeps bipartite graphs from oscillating). Requires at least one edge.
PowerIterationResult eigenvector_centrality(const InteractionGraph& graph, double tol = 1e-9,
                                            int max_iterations = 1000);

struct HitsResult {
  std::vector<double> authority;
  std::vector<double> hub;
  bool converged = false;
  int iterations = 0;
};

// Mutual-reinforcement iteration, each vector normalized to unit L2 norm.
HitsResult hits(const InteractionGraph& graph, double tol = 1e-9, int max_iterations = 1000);

// Dangling mass is redistributed uniformly; the result sums to 1 within 1e-9.
std::vector<double> pagerank(const InteractionGraph& graph, double damping = 0.85,
                             double tol = 1e-9, int max_iterations = 10000);

struct ClusteringResult {
  std::vector<double> local;
  double average = 0.0;  // mean over all nodes, degree < 2 contributing 0
};

// Watts-Strogatz local coefficient on the undirected projection.
ClusteringResult clustering_coefficient(const InteractionGraph& graph);

struct GraphStats {
  size_t nodes = 0;
  size_t edges = 0;  // distinct directed pairs
  double avg_degree = 0.0;  // edges / nodes, exactly
  int64_t diameter = 0;            // max finite directed distance
  double avg_clustering = 0.0;
  double avg_path_length = 0.0;    // mean over finite directed distances, self-pairs excluded
};

GraphStats graph_stats(const InteractionGraph& graph);

// All nine measures for every node.
struct NodeMetricsTable {
  std::vector<std::string> node_ids;
  DegreeCentrality degree;
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<double> eigenvector;
  std::vector<int64_t> eccentricity;
  std::vector<double> authority;
  std::vector<double> hub;
  std::vector<double> pagerank;
  std::vector<double> clustering;
  bool eigenvector_converged = true;
  bool hits_converged = true;
};

NodeMetricsTable compute_node_metrics(const InteractionGraph& graph);

// CSV in Table-style column order: node, in/out/total degree, betweenness,
// closeness, eigenvector, eccentricity, authority, hub, pagerank, clustering.
void write_node_metrics_csv(const NodeMetricsTable& table, const std::string& path);

}  // namespace botdet
