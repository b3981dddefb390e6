#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botdet/events.hpp"

namespace botdet {

enum class GraphKind : uint8_t { kParty, kFriendship, kTrade, kWhisper, kMail, kShop };
inline constexpr std::array<GraphKind, 6> kGraphKinds = {
    GraphKind::kParty, GraphKind::kFriendship, GraphKind::kTrade,
    GraphKind::kWhisper, GraphKind::kMail, GraphKind::kShop};

enum class Population : uint8_t { kBot, kHuman, kAll };

std::string_view graph_kind_name(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(std::string_view name);
std::string_view population_name(Population population);
std::optional<Population> parse_population(std::string_view name);

// Directed interaction graph over a player subpopulation. Edges are distinct
// ordered pairs with an event multiplicity; self-loops are never stored.
// Nodes are the players incident to at least one edge, indexed 0..n-1 in
// lexicographic order of their identifiers. Immutable after construction.
class InteractionGraph {
 public:
  struct Edge {
    uint32_t src = 0;
    uint32_t dst = 0;
    int64_t multiplicity = 1;
  };

  InteractionGraph() = default;
  // node_ids must be sorted and unique; edges refer to indices into it.
  // Duplicate (src, dst) pairs are folded by summing multiplicity.
  InteractionGraph(GraphKind kind, Population population, std::vector<std::string> node_ids,
                   std::vector<Edge> edges);

  GraphKind kind() const { return kind_; }
  Population population() const { return population_; }
  size_t node_count() const { return node_ids_.size(); }
  size_t edge_count() const { return edges_.size(); }  // distinct directed pairs
  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::string& node_id(uint32_t v) const { return node_ids_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Distinct out-/in-neighbors, sorted ascending.
  const std::vector<uint32_t>& out_neighbors(uint32_t v) const { return out_[v]; }
  const std::vector<uint32_t>& in_neighbors(uint32_t v) const { return in_[v]; }
  // Distinct undirected neighborhood (union of in and out), sorted.
  const std::vector<uint32_t>& neighbors(uint32_t v) const { return und_[v]; }

  bool has_edge(uint32_t src, uint32_t dst) const;

 private:
  GraphKind kind_ = GraphKind::kParty;
  Population population_ = Population::kAll;
  std::vector<std::string> node_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<uint32_t>> out_, in_, und_;
};

// Builds the graph of one interaction kind from the event log. Labels must
// cover every participant of a relevant event. Direction conventions:
//   party:      both directions per dyad per party_start
//   friendship: requester -> requested (friend_add)
//   trade:      giver -> receiver
//   whisper:    speaker -> listener
//   mail:       sender -> recipient
//   shop:       buyer -> merchant
InteractionGraph build_graph(const EventLog& log, const LabelMap& labels, GraphKind kind,
                             Population population);

// Keeps edges with both endpoints in the node set; multiplicities preserved.
// Ids absent from the graph are ignored.
InteractionGraph induce_subgraph(const InteractionGraph& graph,
                                 const std::vector<std::string>& node_set);

// Edge-list text format: one header line "# kind=<kind> population=<pop>",
// then "src dst multiplicity" per line.
void write_edge_list(const InteractionGraph& graph, const std::string& path);
InteractionGraph read_edge_list(const std::string& path);

}  // namespace botdet
