#include "botdet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace botdet {

std::string_view graph_kind_name(GraphKind kind) {
  constexpr std::array<std::string_view, 6> names = {"party", "friendship", "trade",
                                                     "whisper", "mail", "shop"};
  return names[static_cast<size_t>(kind)];
}

std::optional<GraphKind> parse_graph_kind(std::string_view name) {
  for (auto kind : kGraphKinds) {
    if (graph_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view population_name(Population population) {
  switch (population) {
    case Population::kBot: return "bot";
    case Population::kHuman: return "human";
    default: return "all";
  }
}

std::optional<Population> parse_population(std::string_view name) {
  if (name == "bot") return Population::kBot;
  if (name == "human") return Population::kHuman;
  if (name == "all") return Population::kAll;
  return std::nullopt;
}

InteractionGraph::InteractionGraph(GraphKind kind, Population population,
                                   std::vector<std::string> node_ids, std::vector<Edge> edges)
    : kind_(kind), population_(population), node_ids_(std::move(node_ids)) {
  for (const auto& e : edges) {
    if (e.src == e.dst) throw std::runtime_error("interaction graph: self-loop");
    if (e.src >= node_ids_.size() || e.dst >= node_ids_.size())
      throw std::runtime_error("interaction graph: edge endpoint out of range");
    if (e.multiplicity < 1) throw std::runtime_error("interaction graph: multiplicity < 1");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (const auto& e : edges) {
    if (!edges_.empty() && edges_.back().src == e.src && edges_.back().dst == e.dst) {
      edges_.back().multiplicity += e.multiplicity;
    } else {
      edges_.push_back(e);
    }
  }

  const size_t n = node_ids_.size();
  out_.resize(n);
  in_.resize(n);
  und_.resize(n);
  for (const auto& e : edges_) {
    out_[e.src].push_back(e.dst);
    in_[e.dst].push_back(e.src);
  }
  for (size_t v = 0; v < n; ++v) {
    std::sort(in_[v].begin(), in_[v].end());
    und_[v] = out_[v];
    und_[v].insert(und_[v].end(), in_[v].begin(), in_[v].end());
    std::sort(und_[v].begin(), und_[v].end());
    und_[v].erase(std::unique(und_[v].begin(), und_[v].end()), und_[v].end());
  }
}

bool InteractionGraph::has_edge(uint32_t src, uint32_t dst) const {
  const auto& nbrs = out_[src];
  return std::binary_search(nbrs.begin(), nbrs.end(), dst);
}

namespace {

std::optional<GraphKind> edge_kind_for(ActionKind action) {
  switch (action) {
    case ActionKind::kPartyStart: return GraphKind::kParty;
    case ActionKind::kFriendAdd: return GraphKind::kFriendship;
    case ActionKind::kTrade: return GraphKind::kTrade;
    case ActionKind::kWhisper: return GraphKind::kWhisper;
    case ActionKind::kMail: return GraphKind::kMail;
    case ActionKind::kShopSale: return GraphKind::kShop;
    default: return std::nullopt;
  }
}

}  // namespace

InteractionGraph build_graph(const EventLog& log, const LabelMap& labels, GraphKind kind,
                             Population population) {
  // Pair multiplicities keyed by interned player index.
  std::unordered_map<uint64_t, int64_t> mult;
  std::vector<char> in_population(log.player_count(), -1);
  auto member = [&](uint32_t p) -> bool {
    char& cached = in_population[p];
    if (cached < 0) {
      const Label* label = labels.find(log.players.name(p));
      if (label == nullptr)
        throw std::runtime_error("build_graph: no label for player " + log.players.name(p));
      bool ok = population == Population::kAll ||
                (population == Population::kBot && *label == Label::kBot) ||
                (population == Population::kHuman && *label == Label::kHuman);
      cached = ok ? 1 : 0;
    }
    return cached == 1;
  };

  auto add = [&](uint32_t src, uint32_t dst) {
    if (src == dst) return;  // self-interactions never form an edge
    if (!member(src) || !member(dst)) return;
    ++mult[(static_cast<uint64_t>(src) << 32) | dst];
  };

  for (const auto& ev : log.events) {
    auto ek = edge_kind_for(ev.action);
    if (!ek || *ek != kind) continue;
    add(ev.actor, ev.target);
    if (kind == GraphKind::kParty) add(ev.target, ev.actor);  // partying is symmetric
  }

  // Collect incident players and map them to lexicographically sorted ids.
  std::vector<uint32_t> incident;
  incident.reserve(mult.size() * 2);
  for (const auto& [key, count] : mult) {
    incident.push_back(static_cast<uint32_t>(key >> 32));
    incident.push_back(static_cast<uint32_t>(key & 0xffffffffu));
  }
  std::sort(incident.begin(), incident.end());
  incident.erase(std::unique(incident.begin(), incident.end()), incident.end());

  std::vector<std::string> ids;
  ids.reserve(incident.size());
  for (uint32_t p : incident) ids.push_back(log.players.name(p));
  std::vector<uint32_t> order(ids.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return ids[a] < ids[b]; });

  std::vector<std::string> node_ids(ids.size());
  std::unordered_map<uint32_t, uint32_t> to_node;  // log player index -> graph node
  for (size_t rank = 0; rank < order.size(); ++rank) {
    node_ids[rank] = ids[order[rank]];
    to_node[incident[order[rank]]] = static_cast<uint32_t>(rank);
  }

  std::vector<InteractionGraph::Edge> edges;
  edges.reserve(mult.size());
  for (const auto& [key, count] : mult) {
    edges.push_back({to_node[static_cast<uint32_t>(key >> 32)],
                     to_node[static_cast<uint32_t>(key & 0xffffffffu)], count});
  }
  return InteractionGraph(kind, population, std::move(node_ids), std::move(edges));
}

InteractionGraph induce_subgraph(const InteractionGraph& graph,
                                 const std::vector<std::string>& node_set) {
  std::vector<std::string> sorted = node_set;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<char> keep(graph.node_count(), 0);
  for (uint32_t v = 0; v < graph.node_count(); ++v) {
    keep[v] = std::binary_search(sorted.begin(), sorted.end(), graph.node_id(v)) ? 1 : 0;
  }

  std::vector<InteractionGraph::Edge> kept_edges;
  std::vector<uint32_t> incident;
  for (const auto& e : graph.edges()) {
    if (keep[e.src] && keep[e.dst]) {
      kept_edges.push_back(e);
      incident.push_back(e.src);
      incident.push_back(e.dst);
    }
  }
  std::sort(incident.begin(), incident.end());
  incident.erase(std::unique(incident.begin(), incident.end()), incident.end());

  // Node indices were already in lexicographic id order, so the compaction
  // preserves it.
  std::vector<std::string> node_ids;
  node_ids.reserve(incident.size());
  std::unordered_map<uint32_t, uint32_t> remap;
  for (uint32_t v : incident) {
    remap[v] = static_cast<uint32_t>(node_ids.size());
    node_ids.push_back(graph.node_id(v));
  }
  for (auto& e : kept_edges) {
    e.src = remap[e.src];
    e.dst = remap[e.dst];
  }
  return InteractionGraph(graph.kind(), graph.population(), std::move(node_ids),
                          std::move(kept_edges));
}

void write_edge_list(const InteractionGraph& graph, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# kind=" << graph_kind_name(graph.kind())
      << " population=" << population_name(graph.population()) << '\n';
  for (const auto& e : graph.edges()) {
    out << graph.node_id(e.src) << ' ' << graph.node_id(e.dst) << ' ' << e.multiplicity << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

InteractionGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(path + ": empty edge list file");

  std::istringstream hs(header);
  std::string hash, kind_field, pop_field;
  hs >> hash >> kind_field >> pop_field;
  auto value_of = [&](const std::string& field, const std::string& key) {
    if (field.rfind(key + "=", 0) != 0)
      throw std::runtime_error(path + ": bad header field '" + field + "'");
    return field.substr(key.size() + 1);
  };
  if (hash != "#") throw std::runtime_error(path + ": edge list header must start with '#'");
  auto kind = parse_graph_kind(value_of(kind_field, "kind"));
  auto population = parse_population(value_of(pop_field, "population"));
  if (!kind || !population) throw std::runtime_error(path + ": unknown kind or population");

  std::vector<std::string> ids;
  std::unordered_map<std::string, uint32_t> seen;
  struct RawEdge {
    uint32_t src, dst;
    int64_t mult;
  };
  std::vector<RawEdge> raw;
  std::string src, dst;
  int64_t m = 0;
  size_t lineno = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!(ls >> src >> dst >> m))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'src dst multiplicity'");
    auto intern = [&](const std::string& id) {
      auto it = seen.find(id);
      if (it != seen.end()) return it->second;
      uint32_t idx = static_cast<uint32_t>(ids.size());
      ids.push_back(id);
      seen.emplace(id, idx);
      return idx;
    };
    raw.push_back({intern(src), intern(dst), m});
  }

  std::vector<uint32_t> order(ids.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return ids[a] < ids[b]; });
  std::vector<uint32_t> rank(ids.size());
  std::vector<std::string> node_ids(ids.size());
  for (size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = static_cast<uint32_t>(r);
    node_ids[r] = ids[order[r]];
  }
  std::vector<InteractionGraph::Edge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) edges.push_back({rank[e.src], rank[e.dst], e.mult});
  return InteractionGraph(*kind, *population, std::move(node_ids), std::move(edges));
}

}  // namespace botdet
