#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "botdet/features.hpp"
#include "botdet/graph.hpp"
#include "botdet/metrics.hpp"

namespace botdet {

// Players x named features with labels. Rows are ordered by player
// identifier; every row has one value per feature name.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::string> provenance;  // per-feature source module tag
  std::vector<std::string> player_ids;
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::map<std::string, int64_t> imputation_counts;
  bool quantized = false;

  size_t feature_count() const { return feature_names.size(); }
  size_t row_count() const { return rows.size(); }
  std::optional<size_t> feature_index(const std::string& name) const;
  std::vector<double> column(size_t feature) const;
};

// The metric columns appended per interaction network, in order.
inline constexpr std::array<std::string_view, 11> kNetworkMetricNames = {
    "in_degree", "out_degree", "degree",   "betweenness", "closeness", "eigenvector",
    "eccentricity", "authority", "hub",    "pagerank",    "clustering"};

// Personal features, group activity, interaction entropy, then 11 measures
// for each of the 6 interaction networks. Metrics tables are keyed by graph
// kind and typically come from the population="all" graphs. Players absent
// from a network get zeros; the per-feature imputation count is recorded.
// Throws when a player has no label.
FeatureMatrix assemble(const ProfileSet& profiles, const EventLog& log,
                       const std::map<GraphKind, NodeMetricsTable>& metrics,
                       const LabelMap& labels);

struct QuantizedFeature {
  std::string name;
  std::vector<uint8_t> levels;     // 0 low, 1 medium, 2 high, one per row
  std::vector<double> centroids;   // ascending, size <= k
  bool degenerate = false;         // fewer distinct values than requested clusters
};

// Exact 1-D k-means: the optimal clusters of sorted values are contiguous,
// so the globally optimal partition is found by dynamic programming over
// distinct values. Deterministic; the seed parameter is reserved.
QuantizedFeature kmeans_quantize(const std::vector<double>& values, int k = 3, uint64_t seed = 0);

// Replaces every network-measure column with its ordinal quantized level.
void quantize_network_columns(FeatureMatrix& matrix, int k = 3);

struct RankedFeature {
  std::string name;
  size_t index = 0;
  double gain = 0.0;
};

// Information gain of the label given each feature, discretized by
// equal-frequency binning (equal values share a bin). Descending order,
// ties broken by canonical column order. Entropies are in nats.
std::vector<RankedFeature> info_gain_rank(const FeatureMatrix& matrix, int bins = 10);

// First n features of a ranking. Throws when n exceeds the ranking size.
std::vector<std::string> take_top(const std::vector<RankedFeature>& ranking, size_t n);

enum class SubsetSearch { kBestFirst, kGreedyStepwise };

struct SubsetResult {
  std::vector<std::string> features;  // in canonical column order
  double merit = 0.0;
  std::vector<double> merit_trace;    // best merit after each accepted step
};

// Correlation-based subset selection: Merit(S) = k r_cf / sqrt(k + k(k-1) r_ff)
// with symmetric-uncertainty correlations on equal-frequency discretized
// features. Greedy stepwise adds the best strictly improving feature until
// none improves; best-first keeps a frontier of subsets and stops after
// stale_limit consecutive expansions without a new global best.
SubsetResult select_subset(const FeatureMatrix& matrix, SubsetSearch search, int stale_limit = 5,
                           int bins = 10);

void write_matrix_csv(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix read_matrix_csv(const std::string& path);

}  // namespace botdet
