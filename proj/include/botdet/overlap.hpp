#pragma once

#include <vector>

#include "botdet/graph.hpp"

namespace botdet {

// Pairwise similarity of two interaction networks over the union of their
// node sets. Nodes absent from one network contribute degree 0 there.
struct OverlapReport {
  GraphKind kind_a = GraphKind::kParty;
  GraphKind kind_b = GraphKind::kParty;
  double jaccard = 0.0;
  bool jaccard_defined = true;  // false when both edge sets are empty
  double pearson = 0.0;
  bool pearson_defined = true;  // false when a degree vector is constant
  size_t shared_node_count = 0;
};

// |E1 intersect E2| / |E1 union E2| over distinct directed pairs, matched by
// player identifier. Defined as 0 with a flag when both graphs are empty.
OverlapReport link_overlap(const InteractionGraph& a, const InteractionGraph& b);

// Pearson correlation of total degrees indexed by the union of node sets.
OverlapReport degree_overlap(const InteractionGraph& a, const InteractionGraph& b);

// Both measures in one report.
OverlapReport network_overlap(const InteractionGraph& a, const InteractionGraph& b);

}  // namespace botdet
