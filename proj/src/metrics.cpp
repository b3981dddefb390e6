#include "botdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace botdet {

namespace {

// Flat adjacency for BFS-heavy kernels.
struct Csr {
  std::vector<uint32_t> offsets;
  std::vector<uint32_t> targets;

  explicit Csr(const InteractionGraph& g, bool outgoing = true) {
    const size_t n = g.node_count();
    offsets.assign(n + 1, 0);
    size_t total = 0;
    for (uint32_t v = 0; v < n; ++v) {
      total += (outgoing ? g.out_neighbors(v) : g.in_neighbors(v)).size();
    }
    targets.reserve(total);
    for (uint32_t v = 0; v < n; ++v) {
      const auto& nbrs = outgoing ? g.out_neighbors(v) : g.in_neighbors(v);
      targets.insert(targets.end(), nbrs.begin(), nbrs.end());
      offsets[v + 1] = static_cast<uint32_t>(targets.size());
    }
  }

  size_t size() const { return offsets.size() - 1; }
};

constexpr int64_t kUnreached = -1;

// Distances from source into dist (preallocated, reused across calls).
void bfs(const Csr& adj, uint32_t source, std::vector<int64_t>& dist,
         std::vector<uint32_t>& queue) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (size_t head = 0; head < queue.size(); ++head) {
    uint32_t v = queue[head];
    for (uint32_t i = adj.offsets[v]; i < adj.offsets[v + 1]; ++i) {
      uint32_t w = adj.targets[i];
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
}

}  // namespace

DegreeCentrality degree_centrality(const InteractionGraph& graph) {
  const size_t n = graph.node_count();
  DegreeCentrality d;
  d.in.resize(n);
  d.out.resize(n);
  d.total.resize(n);
  for (uint32_t v = 0; v < n; ++v) {
    d.in[v] = static_cast<int64_t>(graph.in_neighbors(v).size());
    d.out[v] = static_cast<int64_t>(graph.out_neighbors(v).size());
    d.total[v] = d.in[v] + d.out[v];
  }
  return d;
}

std::vector<double> betweenness(const InteractionGraph& graph) {
  const size_t n = graph.node_count();
  std::vector<double> centrality(n, 0.0);
  if (n == 0) return centrality;
  Csr adj(graph);

  // Sources are processed in fixed blocks; each block accumulates its own
  // partial which is folded into the total in block order, so the floating
  // point summation order does not depend on the thread count.
  constexpr size_t kBlock = 64;
  const size_t n_blocks = (n + kBlock - 1) / kBlock;

#pragma omp parallel for ordered schedule(dynamic, 1)
  for (size_t block = 0; block < n_blocks; ++block) {
    std::vector<double> partial(n, 0.0);
    std::vector<uint32_t> order;
    order.reserve(n);
    std::vector<int64_t> dist(n);
    std::vector<int64_t> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::vector<uint32_t>> preds(n);

    const size_t begin = block * kBlock;
    const size_t end = std::min(n, begin + kBlock);
    for (size_t s = begin; s < end; ++s) {
      // Brandes forward sweep.
      std::fill(dist.begin(), dist.end(), kUnreached);
      std::fill(sigma.begin(), sigma.end(), 0);
      for (auto& p : preds) p.clear();
      order.clear();

      dist[s] = 0;
      sigma[s] = 1;
      order.push_back(static_cast<uint32_t>(s));
      for (size_t head = 0; head < order.size(); ++head) {
        uint32_t v = order[head];
        for (uint32_t i = adj.offsets[v]; i < adj.offsets[v + 1]; ++i) {
          uint32_t w = adj.targets[i];
          if (dist[w] == kUnreached) {
            dist[w] = dist[v] + 1;
            order.push_back(w);
          }
          if (dist[w] == dist[v] + 1) {
            sigma[w] += sigma[v];
            preds[w].push_back(v);
          }
        }
      }
      // Dependency accumulation in reverse BFS order.
      std::fill(delta.begin(), delta.end(), 0.0);
      for (size_t i = order.size(); i-- > 1;) {
        uint32_t w = order[i];
        for (uint32_t v : preds[w]) {
          delta[v] += static_cast<double>(sigma[v]) / static_cast<double>(sigma[w]) *
                      (1.0 + delta[w]);
        }
        partial[w] += delta[w];
      }
    }

#pragma omp ordered
    {
      for (size_t v = 0; v < n; ++v) centrality[v] += partial[v];
    }
  }
  return centrality;
}

std::vector<double> closeness(const InteractionGraph& graph) {
  const size_t n = graph.node_count();
  std::vector<double> result(n, 0.0);
  if (n <= 1) return result;
  Csr adj(graph);

#pragma omp parallel
  {
    std::vector<int64_t> dist(n);
    std::vector<uint32_t> queue;
#pragma omp for schedule(dynamic, 16)
    for (size_t s = 0; s < n; ++s) {
      bfs(adj, static_cast<uint32_t>(s), dist, queue);
      double sum = 0.0;
      for (size_t v = 0; v < n; ++v) {
        if (v != s && dist[v] > 0) sum += 1.0 / static_cast<double>(dist[v]);
      }
      result[s] = sum / static_cast<double>(n - 1);
    }
  }
  return result;
}

std::vector<int64_t> eccentricity(const InteractionGraph& graph) {
  const size_t n = graph.node_count();
  std::vector<int64_t> result(n, 0);
  Csr adj(graph);

#pragma omp parallel
  {
    std::vector<int64_t> dist(n);
    std::vector<uint32_t> queue;
#pragma omp for schedule(dynamic, 16)
    for (size_t s = 0; s < n; ++s) {
      bfs(adj, static_cast<uint32_t>(s), dist, queue);
      int64_t ecc = 0;
      for (size_t v = 0; v < n; ++v) ecc = std::max(ecc, dist[v]);
      result[s] = ecc;
    }
  }
  return result;
}

PowerIterationResult eigenvector_centrality(const InteractionGraph& graph, double tol,
                                            int max_iterations) {
  const size_t n = graph.node_count();
  if (graph.edge_count() == 0) throw std::runtime_error("eigenvector_centrality: graph has no edges");

  PowerIterationResult res;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  for (int iter = 1; iter <= max_iterations; ++iter) {
#pragma omp parallel for schedule(static)
    for (size_t v = 0; v < n; ++v) {
      double acc = x[v];  // the +I shift
      for (uint32_t u : graph.neighbors(static_cast<uint32_t>(v))) acc += x[u];
      y[v] = acc;
    }
    double norm = 0.0;
    for (size_t v = 0; v < n; ++v) norm += y[v] * y[v];
    norm = std::sqrt(norm);
    double diff = 0.0;
    for (size_t v = 0; v < n; ++v) {
      y[v] /= norm;
      diff = std::max(diff, std::fabs(y[v] - x[v]));
    }
    x.swap(y);
    res.iterations = iter;
    if (diff < tol) {
      res.converged = true;
      break;
    }
  }
  res.values = std::move(x);
  return res;
}

HitsResult hits(const InteractionGraph& graph, double tol, int max_iterations) {
  const size_t n = graph.node_count();
  if (graph.edge_count() == 0) throw std::runtime_error("hits: graph has no edges");

  HitsResult res;
  res.authority.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  res.hub.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> new_auth(n), new_hub(n);

  auto normalize = [](std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
  };

  for (int iter = 1; iter <= max_iterations; ++iter) {
#pragma omp parallel for schedule(static)
    for (size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (uint32_t u : graph.in_neighbors(static_cast<uint32_t>(v))) acc += res.hub[u];
      new_auth[v] = acc;
    }
    normalize(new_auth);
#pragma omp parallel for schedule(static)
    for (size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (uint32_t u : graph.out_neighbors(static_cast<uint32_t>(v))) acc += new_auth[u];
      new_hub[v] = acc;
    }
    normalize(new_hub);

    double diff = 0.0;
    for (size_t v = 0; v < n; ++v) {
      diff = std::max(diff, std::fabs(new_auth[v] - res.authority[v]));
      diff = std::max(diff, std::fabs(new_hub[v] - res.hub[v]));
    }
    res.authority.swap(new_auth);
    res.hub.swap(new_hub);
    res.iterations = iter;
    if (diff < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::vector<double> pagerank(const InteractionGraph& graph, double damping, double tol,
                             int max_iterations) {
  const size_t n = graph.node_count();
  if (n == 0) return {};
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  std::vector<double> out_deg(n);
  for (size_t v = 0; v < n; ++v)
    out_deg[v] = static_cast<double>(graph.out_neighbors(static_cast<uint32_t>(v)).size());

  for (int iter = 0; iter < max_iterations; ++iter) {
    double dangling = 0.0;
    for (size_t v = 0; v < n; ++v) {
      if (out_deg[v] == 0.0) dangling += x[v];
    }
    const double base = (1.0 - damping) / static_cast<double>(n) +
                        damping * dangling / static_cast<double>(n);
#pragma omp parallel for schedule(static)
    for (size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (uint32_t u : graph.in_neighbors(static_cast<uint32_t>(v))) acc += x[u] / out_deg[u];
      y[v] = base + damping * acc;
    }
    double diff = 0.0;
    for (size_t v = 0; v < n; ++v) diff += std::fabs(y[v] - x[v]);
    x.swap(y);
    if (diff < tol) break;
  }
  // Remove residual floating point drift so the sum is 1 to within ulps.
  double sum = 0.0;
  for (double v : x) sum += v;
  for (double& v : x) v /= sum;
  return x;
}

namespace {

int64_t common_neighbor_count(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  // Iterate the shorter list, binary search the longer.
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  int64_t count = 0;
  for (uint32_t v : small) {
    if (std::binary_search(large.begin(), large.end(), v)) ++count;
  }
  return count;
}

}  // namespace

ClusteringResult clustering_coefficient(const InteractionGraph& graph) {
  const size_t n = graph.node_count();
  ClusteringResult res;
  res.local.assign(n, 0.0);

#pragma omp parallel for schedule(dynamic, 16)
  for (size_t v = 0; v < n; ++v) {
    const auto& nbrs = graph.neighbors(static_cast<uint32_t>(v));
    const size_t k = nbrs.size();
    if (k < 2) continue;
    int64_t links = 0;  // twice the triangle count through v
    for (uint32_t u : nbrs) links += common_neighbor_count(nbrs, graph.neighbors(u));
    res.local[v] =
        static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  double sum = 0.0;
  for (double c : res.local) sum += c;
  res.average = n == 0 ? 0.0 : sum / static_cast<double>(n);
  return res;
}

GraphStats graph_stats(const InteractionGraph& graph) {
  GraphStats stats;
  stats.nodes = graph.node_count();
  stats.edges = graph.edge_count();
  if (stats.nodes == 0) return stats;
  stats.avg_degree = static_cast<double>(stats.edges) / static_cast<double>(stats.nodes);
  stats.avg_clustering = clustering_coefficient(graph).average;

  Csr adj(graph);
  const size_t n = stats.nodes;
  int64_t diameter = 0;
  int64_t dist_sum = 0;
  int64_t pair_count = 0;

#pragma omp parallel
  {
    std::vector<int64_t> dist(n);
    std::vector<uint32_t> queue;
#pragma omp for schedule(dynamic, 16) reduction(max : diameter) reduction(+ : dist_sum, pair_count)
    for (size_t s = 0; s < n; ++s) {
      bfs(adj, static_cast<uint32_t>(s), dist, queue);
      for (size_t v = 0; v < n; ++v) {
        if (v == s || dist[v] <= 0) continue;
        diameter = std::max(diameter, dist[v]);
        dist_sum += dist[v];
        ++pair_count;
      }
    }
  }
  stats.diameter = diameter;
  stats.avg_path_length =
      pair_count == 0 ? 0.0 : static_cast<double>(dist_sum) / static_cast<double>(pair_count);
  return stats;
}

NodeMetricsTable compute_node_metrics(const InteractionGraph& graph) {
  NodeMetricsTable t;
  t.node_ids = graph.node_ids();
  t.degree = degree_centrality(graph);
  t.betweenness = betweenness(graph);
  t.closeness = closeness(graph);
  t.eccentricity = eccentricity(graph);
  const size_t n = graph.node_count();
  if (graph.edge_count() > 0) {
    auto eig = eigenvector_centrality(graph);
    t.eigenvector = std::move(eig.values);
    t.eigenvector_converged = eig.converged;
    auto h = hits(graph);
    t.authority = std::move(h.authority);
    t.hub = std::move(h.hub);
    t.hits_converged = h.converged;
  } else {
    t.eigenvector.assign(n, 0.0);
    t.authority.assign(n, 0.0);
    t.hub.assign(n, 0.0);
  }
  t.pagerank = pagerank(graph);
  t.clustering = clustering_coefficient(graph).local;
  return t;
}

void write_node_metrics_csv(const NodeMetricsTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "node,in_degree,out_degree,degree,betweenness,closeness,eigenvector,eccentricity,"
         "authority,hub,pagerank,clustering\n";
  out.precision(17);
  for (size_t v = 0; v < table.node_ids.size(); ++v) {
    out << table.node_ids[v] << ',' << table.degree.in[v] << ',' << table.degree.out[v] << ','
        << table.degree.total[v] << ',' << table.betweenness[v] << ',' << table.closeness[v] << ','
        << table.eigenvector[v] << ',' << table.eccentricity[v] << ',' << table.authority[v] << ','
        << table.hub[v] << ',' << table.pagerank[v] << ',' << table.clustering[v] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace botdet
