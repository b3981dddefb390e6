#include "botdet/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace botdet {

namespace {

// Union node universe, sorted by identifier; returns per-graph node -> index.
std::vector<std::string> union_universe(const InteractionGraph& a, const InteractionGraph& b) {
  std::vector<std::string> ids = a.node_ids();
  ids.insert(ids.end(), b.node_ids().begin(), b.node_ids().end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::set<std::pair<uint32_t, uint32_t>> edge_pairs(const InteractionGraph& g,
                                                   const std::vector<std::string>& universe) {
  std::vector<uint32_t> remap(g.node_count());
  for (uint32_t v = 0; v < g.node_count(); ++v) {
    auto it = std::lower_bound(universe.begin(), universe.end(), g.node_id(v));
    remap[v] = static_cast<uint32_t>(it - universe.begin());
  }
  std::set<std::pair<uint32_t, uint32_t>> pairs;
  for (const auto& e : g.edges()) pairs.emplace(remap[e.src], remap[e.dst]);
  return pairs;
}

size_t shared_nodes(const InteractionGraph& a, const InteractionGraph& b) {
  const auto& x = a.node_ids();
  const auto& y = b.node_ids();
  std::vector<std::string> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  return common.size();
}

}  // namespace

OverlapReport link_overlap(const InteractionGraph& a, const InteractionGraph& b) {
  OverlapReport report;
  report.kind_a = a.kind();
  report.kind_b = b.kind();
  report.shared_node_count = shared_nodes(a, b);

  auto universe = union_universe(a, b);
  auto ea = edge_pairs(a, universe);
  auto eb = edge_pairs(b, universe);

  size_t intersection = 0;
  for (const auto& e : ea) intersection += eb.count(e);
  size_t unified = ea.size() + eb.size() - intersection;
  if (unified == 0) {
    report.jaccard = 0.0;
    report.jaccard_defined = false;
  } else {
    report.jaccard = static_cast<double>(intersection) / static_cast<double>(unified);
  }
  return report;
}

OverlapReport degree_overlap(const InteractionGraph& a, const InteractionGraph& b) {
  OverlapReport report;
  report.kind_a = a.kind();
  report.kind_b = b.kind();
  report.shared_node_count = shared_nodes(a, b);

  auto universe = union_universe(a, b);
  const size_t n = universe.size();
  if (n < 2) {
    report.pearson_defined = false;
    return report;
  }
  std::vector<double> da(n, 0.0), db(n, 0.0);
  auto fill = [&](const InteractionGraph& g, std::vector<double>& d) {
    for (uint32_t v = 0; v < g.node_count(); ++v) {
      auto it = std::lower_bound(universe.begin(), universe.end(), g.node_id(v));
      d[static_cast<size_t>(it - universe.begin())] =
          static_cast<double>(g.in_neighbors(v).size() + g.out_neighbors(v).size());
    }
  };
  fill(a, da);
  fill(b, db);

  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_a += da[i];
    mean_b += db[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double xa = da[i] - mean_a;
    double xb = db[i] - mean_b;
    cov += xa * xb;
    var_a += xa * xa;
    var_b += xb * xb;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    report.pearson_defined = false;
    return report;
  }
  report.pearson = cov / std::sqrt(var_a * var_b);
  report.pearson = std::clamp(report.pearson, -1.0, 1.0);
  return report;
}

OverlapReport network_overlap(const InteractionGraph& a, const InteractionGraph& b) {
  OverlapReport report = link_overlap(a, b);
  OverlapReport degrees = degree_overlap(a, b);
  report.pearson = degrees.pearson;
  report.pearson_defined = degrees.pearson_defined;
  return report;
}

}  // namespace botdet
