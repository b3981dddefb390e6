#include "botdet/motifs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <omp.h>

#include "botdet/metrics.hpp"
#include "botdet/rng.hpp"

namespace botdet {

namespace {

// Bit layout over (u, v, w): bit0 u->v, bit1 v->u, bit2 u->w, bit3 w->u,
// bit4 v->w, bit5 w->v.
unsigned code_from_arcs(const bool arcs[3][3]) {
  unsigned code = 0;
  if (arcs[0][1]) code |= 1u;
  if (arcs[1][0]) code |= 2u;
  if (arcs[0][2]) code |= 4u;
  if (arcs[2][0]) code |= 8u;
  if (arcs[1][2]) code |= 16u;
  if (arcs[2][1]) code |= 32u;
  return code;
}

void arcs_from_code(unsigned code, bool arcs[3][3]) {
  arcs[0][0] = arcs[1][1] = arcs[2][2] = false;
  arcs[0][1] = code & 1u;
  arcs[1][0] = code & 2u;
  arcs[0][2] = code & 4u;
  arcs[2][0] = code & 8u;
  arcs[1][2] = code & 16u;
  arcs[2][1] = code & 32u;
}

bool weakly_connected(unsigned code) {
  int dyads = 0;
  if (code & 3u) ++dyads;
  if (code & 12u) ++dyads;
  if (code & 48u) ++dyads;
  return dyads >= 2;  // two linked dyads over three nodes always share a node
}

unsigned canonical_code(unsigned code) {
  static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  bool arcs[3][3];
  arcs_from_code(code, arcs);
  unsigned best = 63;
  for (const auto& p : kPerms) {
    bool permuted[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) permuted[i][j] = arcs[p[i]][p[j]];
    }
    best = std::min(best, code_from_arcs(permuted));
  }
  return best;
}

// Representative arc codes of the 13 classes, in index order 1..13.
constexpr unsigned kRepresentatives[kTriadClassCount] = {
    5,   // out_star        u->v, u->w
    10,  // in_star         v->u, w->u
    17,  // chain           u->v, v->w
    11,  // mutual_in       u<->v, w->u
    7,   // mutual_out      u<->v, u->w
    21,  // feedforward     u->v, v->w, u->w
    25,  // cycle           u->v, v->w, w->u
    51,  // mutual_path     u<->v, v<->w
    43,  // mutual_in_star  u<->v, w->u, w->v
    23,  // mutual_out_star u<->v, u->w, v->w
    27,  // mutual_cycle    u<->v, v->w, w->u
    55,  // near_complete   all arcs but w->u
    63,  // complete
};

struct TriadTable {
  std::array<int, 64> class_of{};  // 0 when not weakly connected

  TriadTable() {
    std::array<int, 64> canon_to_class{};
    canon_to_class.fill(0);
    int assigned = 0;
    for (int i = 0; i < kTriadClassCount; ++i) {
      unsigned canon = canonical_code(kRepresentatives[i]);
      if (canon_to_class[canon] != 0) throw std::logic_error("triad table: duplicate class");
      canon_to_class[canon] = i + 1;
      ++assigned;
    }
    if (assigned != kTriadClassCount) throw std::logic_error("triad table: bad class count");
    for (unsigned code = 0; code < 64; ++code) {
      if (!weakly_connected(code)) continue;
      int cls = canon_to_class[canonical_code(code)];
      if (cls == 0) throw std::logic_error("triad table: unclassified connected code");
      class_of[code] = cls;
    }
  }
};

const TriadTable& triad_table() {
  static const TriadTable table;
  return table;
}

}  // namespace

std::string_view triad_class_name(int type) {
  constexpr std::array<std::string_view, kTriadClassCount> names = {
      "out_star",   "in_star",         "chain",        "mutual_in",      "mutual_out",
      "feedforward", "cycle",          "mutual_path",  "mutual_in_star", "mutual_out_star",
      "mutual_cycle", "near_complete", "complete"};
  if (type < 1 || type > kTriadClassCount) throw std::out_of_range("triad class index");
  return names[static_cast<size_t>(type - 1)];
}

int classify_triad_code(unsigned code) {
  if (code >= 64) throw std::out_of_range("triad code");
  return triad_table().class_of[code];
}

TriadCensus triad_census(const InteractionGraph& graph) {
  const auto& table = triad_table();
  const size_t n = graph.node_count();
  TriadCensus census;

  auto arc = [&](uint32_t a, uint32_t b) { return graph.has_edge(a, b); };
  auto code_of = [&](uint32_t u, uint32_t v, uint32_t w) {
    unsigned code = 0;
    if (arc(u, v)) code |= 1u;
    if (arc(v, u)) code |= 2u;
    if (arc(u, w)) code |= 4u;
    if (arc(w, u)) code |= 8u;
    if (arc(v, w)) code |= 16u;
    if (arc(w, v)) code |= 32u;
    return code;
  };

#pragma omp parallel
  {
    std::array<int64_t, kTriadClassCount> local{};
    std::vector<uint32_t> merged;
#pragma omp for schedule(dynamic, 16)
    for (size_t ui = 0; ui < n; ++ui) {
      const uint32_t u = static_cast<uint32_t>(ui);
      const auto& nu = graph.neighbors(u);
      for (uint32_t v : nu) {
        if (v <= u) continue;
        const auto& nv = graph.neighbors(v);
        merged.clear();
        std::set_union(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(merged));
        for (uint32_t w : merged) {
          if (w == u || w == v) continue;
          // Count each connected triple once: via its lowest-indexed linked
          // pair (u, v), taking w > v, or u < w < v when w is not adjacent
          // to u (the triple was not seen from the (u, w) pair).
          bool count_here =
              w > v || (w > u && !std::binary_search(nu.begin(), nu.end(), w));
          if (!count_here) continue;
          int cls = table.class_of[code_of(u, v, w)];
          if (cls > 0) ++local[cls - 1];
        }
      }
    }
#pragma omp critical
    {
      for (int i = 0; i < kTriadClassCount; ++i) census.counts[i] += local[i];
    }
  }

  int64_t total = census.total();
  if (total > 0) {
    for (int i = 0; i < kTriadClassCount; ++i) {
      census.fractions[i] =
          static_cast<double>(census.counts[i]) / static_cast<double>(total);
    }
  }
  return census;
}

InteractionGraph randomize(const InteractionGraph& graph, uint64_t seed, int swaps_per_edge) {
  struct Arc {
    uint32_t src, dst;
  };
  std::vector<Arc> arcs;
  arcs.reserve(graph.edge_count());
  std::unordered_set<uint64_t> present;
  present.reserve(graph.edge_count() * 2);
  auto key = [](uint32_t a, uint32_t b) { return (static_cast<uint64_t>(a) << 32) | b; };
  for (const auto& e : graph.edges()) {
    arcs.push_back({e.src, e.dst});
    present.insert(key(e.src, e.dst));
  }

  const size_t m = arcs.size();
  if (m >= 2) {
    Rng rng(seed);
    const int64_t attempts = static_cast<int64_t>(swaps_per_edge) * static_cast<int64_t>(m);
    for (int64_t k = 0; k < attempts; ++k) {
      size_t i = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(m) - 1));
      size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(m) - 1));
      if (i == j) continue;
      Arc& e1 = arcs[i];
      Arc& e2 = arcs[j];
      // Proposed rewiring: (a->b, c->d) becomes (a->d, c->b).
      if (e1.src == e2.dst || e2.src == e1.dst) continue;  // would create a self-loop
      if (e1.dst == e2.dst || e1.src == e2.src) continue;  // swap would be a no-op or collide
      uint64_t new1 = key(e1.src, e2.dst);
      uint64_t new2 = key(e2.src, e1.dst);
      if (present.count(new1) || present.count(new2)) continue;
      present.erase(key(e1.src, e1.dst));
      present.erase(key(e2.src, e2.dst));
      present.insert(new1);
      present.insert(new2);
      std::swap(e1.dst, e2.dst);
    }
  }

  std::vector<InteractionGraph::Edge> edges;
  edges.reserve(m);
  for (const auto& a : arcs) edges.push_back({a.src, a.dst, 1});
  return InteractionGraph(graph.kind(), graph.population(), graph.node_ids(), std::move(edges));
}

namespace {

int64_t directed_diameter(const InteractionGraph& graph) {
  // BFS from every node over out-edges; max finite distance.
  const size_t n = graph.node_count();
  int64_t best = 0;
  std::vector<int64_t> dist(n);
  std::vector<uint32_t> queue;
  queue.reserve(n);
  for (uint32_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[s] = 0;
    queue.push_back(s);
    for (size_t head = 0; head < queue.size(); ++head) {
      uint32_t v = queue[head];
      for (uint32_t w : graph.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
          best = std::max(best, dist[w]);
        }
      }
    }
  }
  return best;
}

}  // namespace

MotifZScores motif_zscores(const InteractionGraph& graph, int n_random, uint64_t seed,
                           int swaps_per_edge) {
  if (n_random < 2) throw std::runtime_error("motif_zscores: n_random must be >= 2");

  MotifZScores result;
  result.n_random = n_random;
  TriadCensus real = triad_census(graph);
  result.real_counts = real.counts;

  std::vector<std::array<int64_t, kTriadClassCount>> samples(n_random);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < n_random; ++r) {
    auto shuffled = randomize(graph, derive_seed(seed, "motif-replicate", static_cast<uint64_t>(r)),
                              swaps_per_edge);
    samples[r] = triad_census(shuffled).counts;
  }

  double max_finite_abs = 0.0;
  for (int i = 0; i < kTriadClassCount; ++i) {
    int64_t sum = 0;
    for (const auto& s : samples) sum += s[i];
    double mean = static_cast<double>(sum) / static_cast<double>(n_random);
    double ss = 0.0;
    for (const auto& s : samples) {
      double d = static_cast<double>(s[i]) - mean;
      ss += d * d;
    }
    double stdev = std::sqrt(ss / static_cast<double>(n_random - 1));
    result.random_mean[i] = mean;
    result.random_std[i] = stdev;

    double real_count = static_cast<double>(real.counts[i]);
    if (stdev > 0.0) {
      result.z[i] = (real_count - mean) / stdev;
      max_finite_abs = std::max(max_finite_abs, std::fabs(result.z[i]));
    } else if (real_count == mean) {
      result.z[i] = 0.0;
    } else {
      result.infinite[i] = real_count > mean ? 1 : -1;
      result.z[i] = 0.0;  // raw value undefined; the flag carries the sign
    }
  }

  // Normalization clamps flagged entries to the largest finite magnitude.
  std::array<double, kTriadClassCount> clamped{};
  bool any_infinite = false;
  for (int i = 0; i < kTriadClassCount; ++i) {
    if (result.infinite[i] != 0) any_infinite = true;
  }
  double clamp_value = max_finite_abs > 0.0 ? max_finite_abs : (any_infinite ? 1.0 : 0.0);
  for (int i = 0; i < kTriadClassCount; ++i) {
    clamped[i] = result.infinite[i] != 0 ? clamp_value * result.infinite[i] : result.z[i];
  }
  double norm = 0.0;
  for (double v : clamped) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (int i = 0; i < kTriadClassCount; ++i) result.z_normalized[i] = clamped[i] / norm;
  }
  return result;
}

std::pair<double, double> diameter_under_randomization(const InteractionGraph& graph, int n_random,
                                                       uint64_t seed, int swaps_per_edge) {
  if (n_random < 2) throw std::runtime_error("diameter_under_randomization: n_random must be >= 2");
  std::vector<int64_t> diameters(n_random);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < n_random; ++r) {
    auto shuffled = randomize(graph, derive_seed(seed, "diameter-replicate", static_cast<uint64_t>(r)),
                              swaps_per_edge);
    diameters[r] = directed_diameter(shuffled);
  }
  int64_t sum = 0;
  for (int64_t d : diameters) sum += d;
  double mean = static_cast<double>(sum) / static_cast<double>(n_random);
  double ss = 0.0;
  for (int64_t d : diameters) {
    double diff = static_cast<double>(d) - mean;
    ss += diff * diff;
  }
  return {mean, std::sqrt(ss / static_cast<double>(n_random - 1))};
}

}  // namespace botdet
