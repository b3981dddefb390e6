#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

#include "botdet/graph.hpp"

namespace botdet {

// The 13 weakly connected directed three-node isomorphism classes, indexed
// 1..13. The index table is fixed by this enumeration (canonical arc-set
// codes, documented by the representative patterns below); it is not claimed
// to match any external numbering.
//
//   1 out_star         a<-b->c            2 in_star          a->b<-c
//   3 chain            a->b->c            4 mutual_in        a<->b<-c
//   5 mutual_out       a<->b->c           6 feedforward      a->b->c, a->c
//   7 cycle            a->b->c->a         8 mutual_path      a<->b<->c
//   9 mutual_in_star   a<->b, c->a, c->b 10 mutual_out_star  a<->b, a->c, b->c
//  11 mutual_cycle     a<->b, b->c->a    12 near_complete    all arcs but one
//  13 complete         all six arcs
inline constexpr int kTriadClassCount = 13;

enum TriadClass : int {
  kTriadOutStar = 1,
  kTriadInStar = 2,
  kTriadChain = 3,
  kTriadMutualIn = 4,
  kTriadMutualOut = 5,
  kTriadFeedForward = 6,
  kTriadCycle = 7,
  kTriadMutualPath = 8,
  kTriadMutualInStar = 9,
  kTriadMutualOutStar = 10,
  kTriadMutualCycle = 11,
  kTriadNearComplete = 12,
  kTriadComplete = 13,
};

std::string_view triad_class_name(int type);  // type in 1..13

// Classifies a 6-bit arc code over nodes (u, v, w) with bit layout
// bit0 u->v, bit1 v->u, bit2 u->w, bit3 w->u, bit4 v->w, bit5 w->v.
// Returns the class in 1..13, or 0 when the triple is not weakly connected.
int classify_triad_code(unsigned code);

struct TriadCensus {
  std::array<int64_t, kTriadClassCount> counts{};
  std::array<double, kTriadClassCount> fractions{};

  int64_t total() const {
    int64_t t = 0;
    for (int64_t c : counts) t += c;
    return t;
  }
};

// Counts every weakly connected induced three-node subgraph once. Edge
// multiplicities are ignored.
TriadCensus triad_census(const InteractionGraph& graph);

// Degree-preserving randomization of the simple digraph: attempted double
// edge swaps, swaps_per_edge * edge_count attempts, swaps that would create
// a self-loop or duplicate arc are skipped. In/out degree sequences are
// preserved exactly. The result carries multiplicity 1 on every edge.
InteractionGraph randomize(const InteractionGraph& graph, uint64_t seed, int swaps_per_edge = 10);

struct MotifZScores {
  std::array<int64_t, kTriadClassCount> real_counts{};
  std::array<double, kTriadClassCount> random_mean{};
  std::array<double, kTriadClassCount> random_std{};  // sample (n-1) deviation
  std::array<double, kTriadClassCount> z{};           // 0 where flagged infinite
  std::array<int8_t, kTriadClassCount> infinite{};    // -1 / +1 when std=0 and real != mean
  std::array<double, kTriadClassCount> z_normalized{};
  int n_random = 0;
};

// Z-scores of the real census against n_random degree-preserving
// randomizations. Replicate r uses the derived seed (seed, "motif-replicate",
// r), so the ensemble is independent of scheduling. Flagged infinite entries
// are clamped to the largest finite |z| for normalization only.
MotifZScores motif_zscores(const InteractionGraph& graph, int n_random = 100, uint64_t seed = 0,
                           int swaps_per_edge = 10);

// Mean and sample standard deviation of the directed diameter over n_random
// randomizations.
std::pair<double, double> diameter_under_randomization(const InteractionGraph& graph,
                                                       int n_random = 100, uint64_t seed = 0,
                                                       int swaps_per_edge = 10);

}  // namespace botdet
