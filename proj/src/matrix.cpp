#include "botdet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <omp.h>

namespace botdet {

std::optional<size_t> FeatureMatrix::feature_index(const std::string& name) const {
  for (size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<double> FeatureMatrix::column(size_t feature) const {
  std::vector<double> col(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) col[r] = rows[r][feature];
  return col;
}

FeatureMatrix assemble(const ProfileSet& profiles, const EventLog& log,
                       const std::map<GraphKind, NodeMetricsTable>& metrics,
                       const LabelMap& labels) {
  FeatureMatrix m;

  auto add_feature = [&](std::string name, std::string from) {
    m.feature_names.push_back(std::move(name));
    m.provenance.push_back(std::move(from));
  };
  add_feature("login_frequency", "behavior-features");
  add_feature("play_time", "behavior-features");
  add_feature("game_money", "behavior-features");
  add_feature("ip_count", "behavior-features");
  for (auto action : kPlayerActions)
    add_feature(std::string(action_name(action)) + "_count", "behavior-features");
  for (auto action : kPlayerActions)
    add_feature(std::string(action_name(action)) + "_ratio", "behavior-features");
  add_feature("harvest_max_per_day", "behavior-features");
  add_feature("party_avg_duration", "behavior-features");
  add_feature("guild_activity_count", "behavior-features");
  add_feature("interaction_entropy", "behavior-features");
  for (auto kind : kGraphKinds) {
    for (auto metric : kNetworkMetricNames) {
      add_feature(std::string(graph_kind_name(kind)) + "_" + std::string(metric), "graph-metrics");
    }
  }
  for (const auto& name : m.feature_names) m.imputation_counts[name] = 0;

  // Rows ordered by player identifier.
  std::vector<uint32_t> order(profiles.profiles.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return log.players.name(a) < log.players.name(b); });

  // Node lookup per metrics table.
  struct TableIndex {
    const NodeMetricsTable* table = nullptr;
    std::unordered_map<std::string, uint32_t> by_id;
  };
  std::map<GraphKind, TableIndex> table_index;
  for (const auto& [kind, table] : metrics) {
    TableIndex ti;
    ti.table = &table;
    for (uint32_t v = 0; v < table.node_ids.size(); ++v) ti.by_id.emplace(table.node_ids[v], v);
    table_index.emplace(kind, std::move(ti));
  }

  m.player_ids.reserve(order.size());
  m.rows.reserve(order.size());
  m.labels.reserve(order.size());
  for (uint32_t p : order) {
    const std::string& id = log.players.name(p);
    const Label* label = labels.find(id);
    if (label == nullptr) throw std::runtime_error("assemble: no label for player " + id);
    const PlayerProfile& prof = profiles.profiles[p];

    std::vector<double> row;
    row.reserve(m.feature_names.size());
    row.push_back(static_cast<double>(prof.login_frequency));
    row.push_back(static_cast<double>(prof.play_time));
    row.push_back(static_cast<double>(prof.game_money));
    row.push_back(static_cast<double>(prof.ip_count));
    for (int64_t c : prof.action_counts) row.push_back(static_cast<double>(c));
    for (double r : prof.action_ratios) row.push_back(r);
    row.push_back(static_cast<double>(prof.harvest_max_per_day));
    row.push_back(prof.party_avg_duration);
    row.push_back(static_cast<double>(prof.guild_activity_count));
    row.push_back(prof.interaction_entropy);

    for (auto kind : kGraphKinds) {
      auto it = table_index.find(kind);
      const uint32_t* node = nullptr;
      if (it != table_index.end()) {
        auto found = it->second.by_id.find(id);
        if (found != it->second.by_id.end()) node = &found->second;
      }
      if (node == nullptr) {
        for (auto metric : kNetworkMetricNames) {
          row.push_back(0.0);
          ++m.imputation_counts[std::string(graph_kind_name(kind)) + "_" + std::string(metric)];
        }
      } else {
        const NodeMetricsTable& t = *it->second.table;
        uint32_t v = *node;
        row.push_back(static_cast<double>(t.degree.in[v]));
        row.push_back(static_cast<double>(t.degree.out[v]));
        row.push_back(static_cast<double>(t.degree.total[v]));
        row.push_back(t.betweenness[v]);
        row.push_back(t.closeness[v]);
        row.push_back(t.eigenvector[v]);
        row.push_back(static_cast<double>(t.eccentricity[v]));
        row.push_back(t.authority[v]);
        row.push_back(t.hub[v]);
        row.push_back(t.pagerank[v]);
        row.push_back(t.clustering[v]);
      }
    }
    m.player_ids.push_back(id);
    m.rows.push_back(std::move(row));
    m.labels.push_back(*label);
  }
  return m;
}

QuantizedFeature kmeans_quantize(const std::vector<double>& values, int k, uint64_t seed) {
  (void)seed;  // deterministic; reserved for future extensions
  if (values.empty()) throw std::runtime_error("kmeans_quantize: empty input");
  if (k < 1) throw std::runtime_error("kmeans_quantize: k must be positive");

  QuantizedFeature out;
  out.levels.resize(values.size());

  // Collapse to weighted distinct values.
  std::vector<double> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const size_t d = distinct.size();

  if (d <= static_cast<size_t>(k)) {
    out.centroids = distinct;
    out.degenerate = d < static_cast<size_t>(k);
    for (size_t i = 0; i < values.size(); ++i) {
      size_t pos = static_cast<size_t>(
          std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
      out.levels[i] = static_cast<uint8_t>(pos);
    }
    return out;
  }

  std::vector<double> weight(d, 0.0);
  for (double v : values) {
    size_t pos = static_cast<size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin());
    weight[pos] += 1.0;
  }

  // Prefix sums for weighted segment SSE.
  std::vector<double> pw(d + 1, 0.0), ps(d + 1, 0.0), pss(d + 1, 0.0);
  for (size_t i = 0; i < d; ++i) {
    pw[i + 1] = pw[i] + weight[i];
    ps[i + 1] = ps[i] + weight[i] * distinct[i];
    pss[i + 1] = pss[i] + weight[i] * distinct[i] * distinct[i];
  }
  auto segment_sse = [&](size_t a, size_t b) {  // inclusive [a, b]
    double w = pw[b + 1] - pw[a];
    double s = ps[b + 1] - ps[a];
    double ss = pss[b + 1] - pss[a];
    double sse = ss - s * s / w;
    return sse < 0.0 ? 0.0 : sse;
  };

  // cost[j][i]: optimal SSE for the first i distinct values in j+1 clusters.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(static_cast<size_t>(k), std::vector<double>(d + 1, inf));
  std::vector<std::vector<size_t>> split(static_cast<size_t>(k), std::vector<size_t>(d + 1, 0));
  for (size_t i = 1; i <= d; ++i) cost[0][i] = segment_sse(0, i - 1);
  for (int j = 1; j < k; ++j) {
    for (size_t i = static_cast<size_t>(j) + 1; i <= d; ++i) {
      for (size_t s = static_cast<size_t>(j); s < i; ++s) {
        double c = cost[j - 1][s] + segment_sse(s, i - 1);
        if (c < cost[j][i]) {
          cost[j][i] = c;
          split[j][i] = s;
        }
      }
    }
  }

  // Recover segment boundaries.
  std::vector<size_t> starts(static_cast<size_t>(k));
  size_t end = d;
  for (int j = k - 1; j >= 1; --j) {
    starts[static_cast<size_t>(j)] = split[static_cast<size_t>(j)][end];
    end = starts[static_cast<size_t>(j)];
  }
  starts[0] = 0;

  out.centroids.resize(static_cast<size_t>(k));
  std::vector<size_t> cluster_of(d);
  for (int j = 0; j < k; ++j) {
    size_t a = starts[static_cast<size_t>(j)];
    size_t b = (j + 1 < k ? starts[static_cast<size_t>(j) + 1] : d) - 1;
    out.centroids[static_cast<size_t>(j)] = (ps[b + 1] - ps[a]) / (pw[b + 1] - pw[a]);
    for (size_t i = a; i <= b; ++i) cluster_of[i] = static_cast<size_t>(j);
  }
  for (size_t i = 0; i < values.size(); ++i) {
    size_t pos = static_cast<size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
    out.levels[i] = static_cast<uint8_t>(cluster_of[pos]);
  }
  return out;
}

void quantize_network_columns(FeatureMatrix& matrix, int k) {
  std::vector<size_t> targets;
  for (size_t f = 0; f < matrix.feature_count(); ++f) {
    if (matrix.provenance[f] == "graph-metrics") targets.push_back(f);
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (size_t t = 0; t < targets.size(); ++t) {
    size_t f = targets[t];
    auto q = kmeans_quantize(matrix.column(f), k);
    for (size_t r = 0; r < matrix.row_count(); ++r) {
      matrix.rows[r][f] = static_cast<double>(q.levels[r]);
    }
  }
  for (size_t f : targets) matrix.provenance[f] = "graph-metrics/quantized";
  matrix.quantized = true;
}

namespace {

double entropy_from_counts(const std::vector<int64_t>& counts, int64_t total) {
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (int64_t c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

// Equal-frequency discretization; rows with equal values share a bin.
// Returns bin ids per row and the bin count.
std::pair<std::vector<int>, int> discretize(const std::vector<double>& values, int bins) {
  const size_t n = values.size();
  std::vector<uint32_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });

  std::vector<int> bin(n, 0);
  int current = 0;
  size_t i = 0;
  while (i < n) {
    // Remaining rows spread over remaining bins.
    size_t remaining_bins = static_cast<size_t>(std::max(1, bins - current));
    size_t target = (n - i + remaining_bins - 1) / remaining_bins;
    size_t j = i + target;
    if (j > n) j = n;
    // Keep equal values together.
    while (j < n && values[order[j]] == values[order[j - 1]]) ++j;
    for (size_t t = i; t < j; ++t) bin[order[t]] = current;
    ++current;
    i = j;
  }
  return {bin, current};
}

double label_entropy(const std::vector<Label>& labels) {
  std::vector<int64_t> counts(2, 0);
  for (Label l : labels) ++counts[static_cast<size_t>(l)];
  return entropy_from_counts(counts, static_cast<int64_t>(labels.size()));
}

double conditional_label_entropy(const std::vector<int>& bins, int bin_count,
                                 const std::vector<Label>& labels) {
  const size_t n = labels.size();
  std::vector<int64_t> per_bin(static_cast<size_t>(bin_count), 0);
  std::vector<std::array<int64_t, 2>> per_bin_class(static_cast<size_t>(bin_count), {0, 0});
  for (size_t i = 0; i < n; ++i) {
    ++per_bin[static_cast<size_t>(bins[i])];
    ++per_bin_class[static_cast<size_t>(bins[i])][static_cast<size_t>(labels[i])];
  }
  double h = 0.0;
  for (int b = 0; b < bin_count; ++b) {
    int64_t nb = per_bin[static_cast<size_t>(b)];
    if (nb == 0) continue;
    std::vector<int64_t> counts(per_bin_class[static_cast<size_t>(b)].begin(),
                                per_bin_class[static_cast<size_t>(b)].end());
    h += static_cast<double>(nb) / static_cast<double>(n) * entropy_from_counts(counts, nb);
  }
  return h;
}

}  // namespace

std::vector<RankedFeature> info_gain_rank(const FeatureMatrix& matrix, int bins) {
  size_t classes_present = 0;
  std::array<bool, 2> seen = {false, false};
  for (Label l : matrix.labels) seen[static_cast<size_t>(l)] = true;
  classes_present = static_cast<size_t>(seen[0]) + static_cast<size_t>(seen[1]);
  if (classes_present < 2) throw std::runtime_error("info_gain_rank: need both classes present");

  const double h_label = label_entropy(matrix.labels);
  std::vector<RankedFeature> ranked(matrix.feature_count());

#pragma omp parallel for schedule(dynamic, 4)
  for (size_t f = 0; f < matrix.feature_count(); ++f) {
    auto [bin_ids, bin_count] = discretize(matrix.column(f), bins);
    double gain = h_label - conditional_label_entropy(bin_ids, bin_count, matrix.labels);
    if (gain < 0.0 && gain > -1e-15) gain = 0.0;  // sweep rounding dust
    ranked[f] = {matrix.feature_names[f], f, gain};
  }

  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
    return a.gain != b.gain ? a.gain > b.gain : a.index < b.index;
  });
  return ranked;
}

std::vector<std::string> take_top(const std::vector<RankedFeature>& ranking, size_t n) {
  if (n > ranking.size()) throw std::runtime_error("take_top: n exceeds ranking size");
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(ranking[i].name);
  return out;
}

namespace {

// Symmetric uncertainty over discretized columns, cached pairwise.
class SuCache {
 public:
  SuCache(const FeatureMatrix& matrix, int bins) : n_(matrix.row_count()) {
    const size_t m = matrix.feature_count();
    bins_.resize(m);
    bin_counts_.resize(m);
    entropies_.resize(m);
#pragma omp parallel for schedule(dynamic, 4)
    for (size_t f = 0; f < m; ++f) {
      auto [ids, count] = discretize(matrix.column(f), bins);
      std::vector<int64_t> counts(static_cast<size_t>(count), 0);
      for (int b : ids) ++counts[static_cast<size_t>(b)];
      entropies_[f] = entropy_from_counts(counts, static_cast<int64_t>(n_));
      bins_[f] = std::move(ids);
      bin_counts_[f] = count;
    }
    label_bins_.resize(n_);
    std::vector<int64_t> lc(2, 0);
    for (size_t i = 0; i < n_; ++i) {
      label_bins_[i] = static_cast<int>(matrix.labels[i]);
      ++lc[static_cast<size_t>(matrix.labels[i])];
    }
    label_entropy_ = entropy_from_counts(lc, static_cast<int64_t>(n_));
    feature_label_.assign(m, -1.0);
    feature_feature_.resize(m);
  }

  double su_with_label(size_t f) {
    if (feature_label_[f] < 0.0) {
      feature_label_[f] = su(bins_[f], bin_counts_[f], entropies_[f], label_bins_, 2, label_entropy_);
    }
    return feature_label_[f];
  }

  double su_between(size_t f, size_t g) {
    if (f == g) return 1.0;
    size_t lo = std::min(f, g), hi = std::max(f, g);
    auto& row = feature_feature_[lo];
    auto it = row.find(hi);
    if (it != row.end()) return it->second;
    double v = su(bins_[lo], bin_counts_[lo], entropies_[lo], bins_[hi], bin_counts_[hi],
                  entropies_[hi]);
    row.emplace(hi, v);
    return v;
  }

 private:
  double su(const std::vector<int>& x, int xc, double hx, const std::vector<int>& y, int yc,
            double hy) const {
    if (hx + hy <= 0.0) return 0.0;
    std::unordered_map<int64_t, int64_t> joint;
    joint.reserve(static_cast<size_t>(xc) * 2);
    for (size_t i = 0; i < n_; ++i) {
      joint[static_cast<int64_t>(x[i]) * yc + y[i]] += 1;
    }
    double hxy = 0.0;
    for (const auto& [key, c] : joint) {
      double p = static_cast<double>(c) / static_cast<double>(n_);
      hxy -= p * std::log(p);
    }
    double value = 2.0 * (hx + hy - hxy) / (hx + hy);
    return std::clamp(value, 0.0, 1.0);
  }

  size_t n_;
  std::vector<std::vector<int>> bins_;
  std::vector<int> bin_counts_;
  std::vector<double> entropies_;
  std::vector<int> label_bins_;
  double label_entropy_ = 0.0;
  std::vector<double> feature_label_;
  std::vector<std::unordered_map<size_t, double>> feature_feature_;
};

double subset_merit(const std::vector<size_t>& subset, SuCache& cache) {
  const size_t k = subset.size();
  if (k == 0) return 0.0;
  double r_cf = 0.0;
  for (size_t f : subset) r_cf += cache.su_with_label(f);
  r_cf /= static_cast<double>(k);
  double r_ff = 0.0;
  if (k > 1) {
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = i + 1; j < k; ++j) r_ff += cache.su_between(subset[i], subset[j]);
    }
    r_ff /= static_cast<double>(k * (k - 1) / 2);
  }
  double denom = std::sqrt(static_cast<double>(k) +
                           static_cast<double>(k) * static_cast<double>(k - 1) * r_ff);
  return denom > 0.0 ? static_cast<double>(k) * r_cf / denom : 0.0;
}

}  // namespace

SubsetResult select_subset(const FeatureMatrix& matrix, SubsetSearch search, int stale_limit,
                           int bins) {
  if (matrix.feature_count() < 2) throw std::runtime_error("select_subset: need at least 2 features");
  SuCache cache(matrix, bins);
  const size_t m = matrix.feature_count();

  SubsetResult result;
  std::vector<size_t> best_subset;
  double best_merit = 0.0;

  if (search == SubsetSearch::kGreedyStepwise) {
    std::vector<size_t> current;
    std::vector<char> used(m, 0);
    for (;;) {
      double step_best = best_merit;
      size_t step_feature = m;
      for (size_t f = 0; f < m; ++f) {
        if (used[f]) continue;
        std::vector<size_t> candidate = current;
        candidate.push_back(f);
        double merit = subset_merit(candidate, cache);
        if (merit > step_best) {
          step_best = merit;
          step_feature = f;
        }
      }
      if (step_feature == m) break;  // no strict improvement
      current.push_back(step_feature);
      used[step_feature] = 1;
      best_merit = step_best;
      best_subset = current;
      result.merit_trace.push_back(best_merit);
    }
  } else {
    // Forward best-first with backtracking over a frontier of subsets.
    struct Node {
      double merit;
      uint64_t id;  // insertion order; lower expands first on merit ties
      std::vector<size_t> subset;
      bool operator<(const Node& other) const {
        return merit != other.merit ? merit > other.merit : id < other.id;
      }
    };
    std::set<Node> frontier;
    std::set<std::vector<size_t>> visited;
    uint64_t next_id = 0;
    frontier.insert({0.0, next_id++, {}});
    visited.insert({});
    int stale = 0;
    while (!frontier.empty() && stale < stale_limit) {
      Node node = *frontier.begin();
      frontier.erase(frontier.begin());
      bool improved = false;
      for (size_t f = 0; f < m; ++f) {
        if (std::binary_search(node.subset.begin(), node.subset.end(), f)) continue;
        std::vector<size_t> child = node.subset;
        child.insert(std::lower_bound(child.begin(), child.end(), f), f);
        if (!visited.insert(child).second) continue;
        double merit = subset_merit(child, cache);
        if (merit > best_merit) {
          best_merit = merit;
          best_subset = child;
          improved = true;
          result.merit_trace.push_back(best_merit);
        }
        frontier.insert({merit, next_id++, std::move(child)});
      }
      stale = improved ? 0 : stale + 1;
    }
  }

  std::sort(best_subset.begin(), best_subset.end());
  for (size_t f : best_subset) result.features.push_back(matrix.feature_names[f]);
  result.merit = best_merit;
  return result;
}

void write_matrix_csv(const FeatureMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "player_id";
  for (const auto& name : matrix.feature_names) out << ',' << name;
  out << ",label\n";
  out.precision(17);
  for (size_t r = 0; r < matrix.row_count(); ++r) {
    out << matrix.player_ids[r];
    for (double v : matrix.rows[r]) out << ',' << v;
    out << ',' << label_name(matrix.labels[r]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty matrix file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  FeatureMatrix m;
  {
    std::istringstream hs(line);
    std::string field;
    std::vector<std::string> header;
    while (std::getline(hs, field, ',')) header.push_back(field);
    if (header.size() < 3 || header.front() != "player_id" || header.back() != "label")
      throw std::runtime_error(path + ": matrix header must be player_id,<features...>,label");
    m.feature_names.assign(header.begin() + 1, header.end() - 1);
    m.provenance.assign(m.feature_names.size(), "file");
  }
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != m.feature_names.size() + 2)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
    m.player_ids.push_back(fields.front());
    std::vector<double> row(m.feature_names.size());
    for (size_t i = 0; i < row.size(); ++i) row[i] = std::stod(fields[i + 1]);
    m.rows.push_back(std::move(row));
    const std::string& label = fields.back();
    if (label == "bot") {
      m.labels.push_back(Label::kBot);
    } else if (label == "human") {
      m.labels.push_back(Label::kHuman);
    } else {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad label: " + label);
    }
  }
  return m;
}

}  // namespace botdet
