/*
 * Copyright 2026 The MRF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Honest, alpha-balanced random forests over metric-space responses.
//
// Three split rules are available:
//   - medoid:        CART criterion with child Fréchet means replaced by
//                    child medoids, read off a precomputed distance matrix.
//                    Never calls the Fréchet-mean solver while fitting.
//   - exact_frechet: CART criterion with exact child Fréchet means, two
//                    solver calls per admissible threshold.
//   - two_means:     one candidate threshold per feature from 1-D 2-means
//                    clustering, scored with exact Fréchet variances.
//
// Predictions minimize the forest-weighted Fréchet functional, i.e. one
// weighted_frechet_mean() call per query.

#ifndef MRF_FOREST_HPP_
#define MRF_FOREST_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/metric_core.hpp"

namespace mrf {

enum class SplitRule { medoid, exact_frechet, two_means };

inline std::string_view to_string(SplitRule rule) {
  switch (rule) {
    case SplitRule::medoid: return "medoid";
    case SplitRule::exact_frechet: return "exact_frechet";
    case SplitRule::two_means: return "two_means";
  }
  return "unknown";
}

inline SplitRule parse_split_rule(std::string_view name) {
  if (name == "medoid") return SplitRule::medoid;
  if (name == "exact_frechet" || name == "exact") return SplitRule::exact_frechet;
  if (name == "two_means" || name == "2means") return SplitRule::two_means;
  throw ConfigError("unknown split rule '" + std::string(name) + "'");
}

struct ForestConfig {
  std::size_t n_trees = 100;
  double subsample_fraction = 0.5;  // drawn without replacement
  bool honesty = true;
  std::size_t min_leaf = 5;     // k: leaves hold k..2k-1 split-half points
  double balance_alpha = 0.05;  // each child keeps >= alpha of its parent
  std::size_t mtry = 0;         // features tried per node; 0 means all
  SplitRule split_rule = SplitRule::medoid;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 = hardware concurrency; never changes results

  void validate() const {
    if (n_trees == 0) throw ConfigError("n_trees must be positive");
    if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0))
      throw ConfigError("subsample_fraction must lie in (0, 1]");
    if (min_leaf == 0) throw ConfigError("min_leaf must be positive");
    if (!(balance_alpha > 0.0 && balance_alpha <= 0.5)) throw ConfigError("balance_alpha must lie in (0, 0.5]");
  }
};

// Smallest child admissible for a parent holding `parent_size` split-half
// points: max(k, ceil(alpha * parent_size)), and at least one.
inline std::size_t min_child_size(std::size_t parent_size, const ForestConfig& config) {
  const double frac = config.balance_alpha * static_cast<double>(parent_size);
  const auto by_alpha = static_cast<std::size_t>(std::ceil(frac - 1e-9));
  return std::max({config.min_leaf, by_alpha, std::size_t{1}});
}

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;

  friend bool operator==(const Split&, const Split&) = default;
};

// Per-search bookkeeping. `scored_candidates` counts candidate (feature,
// threshold) pairs whose score was evaluated; for the solver-backed rules
// each one costs exactly two weighted_frechet_mean() calls.
struct SplitSearchStats {
  std::size_t scored_candidates = 0;
};

namespace detail {

// Features examined at a node, ascending. All of them unless mtry < d.
template <class Rng>
std::vector<std::size_t> candidate_features(std::size_t d, std::size_t mtry, Rng& rng) {
  std::vector<std::size_t> features(d);
  std::iota(features.begin(), features.end(), std::size_t{0});
  if (mtry == 0 || mtry >= d) return features;
  for (std::size_t i = 0; i < mtry; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, d - 1);
    std::swap(features[i], features[pick(rng)]);
  }
  features.resize(mtry);
  std::sort(features.begin(), features.end());
  return features;
}

// Cell positions ordered by coordinate j, ties by training index.
inline std::vector<std::size_t> order_by_feature(std::span<const std::size_t> cell, const Matrix& x,
                                                 std::size_t j) {
  std::vector<std::size_t> order(cell.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double xa = x(cell[a], j);
    const double xb = x(cell[b], j);
    return xa < xb || (xa == xb && cell[a] < cell[b]);
  });
  return order;
}

// Scores within this relative gap are ties. The same partition reached via
// different features can differ in the last bits.
inline constexpr double kScoreTieTolerance = 1e-12;

// Replaces the running best when strictly better; ties keep the first one
// found (features ascending, thresholds ascending).
inline void keep_better(std::optional<Split>& best, const Split& candidate) {
  if (!best || candidate.score < best->score - kScoreTieTolerance * std::max(1.0, std::abs(best->score)))
    best = candidate;
}

inline bool all_zero_distance(const DistanceMatrix& delta, std::span<const std::size_t> cell) {
  for (std::size_t i : cell)
    if (delta(cell.front(), i) != 0.0) return false;
  return true;
}

template <MetricSpace S>
bool all_identical(const S& space, std::span<const typename S::Point> y, std::span<const std::size_t> cell) {
  for (std::size_t i : cell)
    if (space.distance(y[cell.front()], y[i]) != 0.0) return false;
  return true;
}

// Fréchet variance of `members` around their exact weighted Fréchet mean.
template <MetricSpace S>
double exact_variance(const S& space, std::span<const typename S::Point> y, std::span<const std::size_t> members) {
  const WeightVector w = uniform_weights(y.size(), members);
  const typename S::Point center = weighted_frechet_mean(space, y, w);
  double sum = 0.0;
  if constexpr (PreparedDistance<S>) {
    const auto prepared_center = space.prepare(center);
    for (std::size_t i : members) {
      const double d = space.prepared_distance(prepared_center, space.prepare(y[i]));
      sum += d * d;
    }
  } else {
    for (std::size_t i : members) {
      const double d = space.distance(center, y[i]);
      sum += d * d;
    }
  }
  return sum / static_cast<double>(members.size());
}

// Scores the split of `order` after position `left_count` with exact child
// variances; attaches the (feature, threshold) context to solver failures.
template <MetricSpace S>
double exact_split_score(const S& space, std::span<const typename S::Point> y, std::span<const std::size_t> cell,
                         std::span<const std::size_t> order, std::size_t left_count, std::size_t feature,
                         double threshold) {
  std::vector<std::size_t> left, right;
  left.reserve(left_count);
  right.reserve(order.size() - left_count);
  for (std::size_t p = 0; p < order.size(); ++p) (p < left_count ? left : right).push_back(cell[order[p]]);
  try {
    const double vl = exact_variance(space, y, std::span<const std::size_t>(left));
    const double vr = exact_variance(space, y, std::span<const std::size_t>(right));
    return (static_cast<double>(left.size()) * vl + static_cast<double>(right.size()) * vr) /
           static_cast<double>(order.size());
  } catch (const Error& e) {
    throw Error("split search (feature " + std::to_string(feature) + ", threshold " + std::to_string(threshold) +
                "): " + e.what());
  }
}

}  // namespace detail

// Medoids and their sums of squared distances for every prefix and suffix of
// a cell sorted by one coordinate.
struct MedoidSweep {
  struct Entry {
    double sum;         // sum of squared distances to the medoid
    std::size_t index;  // training index of the medoid
  };
  std::vector<std::size_t> order;  // cell positions sorted by the coordinate
  std::vector<Entry> prefix;       // prefix[p]: medoid of order[0..p]
  std::vector<Entry> suffix;       // suffix[p]: medoid of order[p..m-1]
};

namespace detail {

// d2 holds the cell's squared distances in local indexing (m x m).
inline void medoid_sweep_into(std::span<const std::size_t> cell, const Matrix& x, std::span<const double> d2,
                              std::size_t j, std::vector<double>& acc, MedoidSweep& out) {
  const std::size_t m = cell.size();
  using Entry = MedoidSweep::Entry;
  auto better = [](double sum, std::size_t index, const Entry& cur) {
    return sum < cur.sum || (sum == cur.sum && index < cur.index);
  };
  const Entry none{std::numeric_limits<double>::infinity(), std::numeric_limits<std::size_t>::max()};
  out.order = order_by_feature(cell, x, j);
  out.prefix.assign(m, none);
  out.suffix.assign(m, none);
  acc.assign(m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    const std::size_t q = out.order[p];
    for (std::size_t c = 0; c < m; ++c) acc[c] += d2[c * m + q];
    Entry cur = none;
    for (std::size_t r = 0; r <= p; ++r) {
      const std::size_t c = out.order[r];
      if (better(acc[c], cell[c], cur)) cur = {acc[c], cell[c]};
    }
    out.prefix[p] = cur;
  }
  acc.assign(m, 0.0);
  for (std::size_t p = m; p-- > 0;) {
    const std::size_t q = out.order[p];
    for (std::size_t c = 0; c < m; ++c) acc[c] += d2[c * m + q];
    Entry cur = none;
    for (std::size_t r = p; r < m; ++r) {
      const std::size_t c = out.order[r];
      if (better(acc[c], cell[c], cur)) cur = {acc[c], cell[c]};
    }
    out.suffix[p] = cur;
  }
}

inline std::vector<double> local_squared_distances(std::span<const std::size_t> cell, const DistanceMatrix& delta) {
  const std::size_t m = cell.size();
  std::vector<double> d2(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) d2[a * m + b] = delta.squared(cell[a], cell[b]);
  return d2;
}

}  // namespace detail

// Sweeps the cell in coordinate-j order. For every candidate medoid c the
// sum of squared distances to the points already on the left (resp. right)
// is updated in O(m) per step, so one feature costs O(m^2) instead of O(m^3)
// for recomputing medoids per threshold.
inline MedoidSweep medoid_sweep(std::span<const std::size_t> cell, const Matrix& x, const DistanceMatrix& delta,
                                std::size_t j) {
  MedoidSweep out;
  std::vector<double> acc;
  detail::medoid_sweep_into(cell, x, detail::local_squared_distances(cell, delta), j, acc, out);
  return out;
}

// Medoid split search: the CART criterion with child means replaced by
// child medoids, read off the sweep.
template <class Rng>
std::optional<Split> best_split_medoid(std::span<const std::size_t> cell, const Matrix& x,
                                       const DistanceMatrix& delta, const ForestConfig& config, Rng& rng,
                                       SplitSearchStats* stats = nullptr) {
  const std::size_t m = cell.size();
  if (m < 2 * config.min_leaf || m < 2) return std::nullopt;
  if (detail::all_zero_distance(delta, cell)) return std::nullopt;
  const std::size_t min_child = min_child_size(m, config);
  if (2 * min_child > m) return std::nullopt;

  const std::vector<double> d2 = detail::local_squared_distances(cell, delta);
  std::optional<Split> best;
  std::vector<double> acc;
  MedoidSweep sweep;
  for (std::size_t j : detail::candidate_features(x.cols(), config.mtry, rng)) {
    detail::medoid_sweep_into(cell, x, d2, j, acc, sweep);
    for (std::size_t left_count = min_child; left_count + min_child <= m; ++left_count) {
      const double lo = x(cell[sweep.order[left_count - 1]], j);
      const double hi = x(cell[sweep.order[left_count]], j);
      if (!(lo < hi)) continue;
      const double score = (sweep.prefix[left_count - 1].sum + sweep.suffix[left_count].sum) / static_cast<double>(m);
      if (stats) ++stats->scored_candidates;
      detail::keep_better(best, {j, 0.5 * (lo + hi), score});
    }
  }
  return best;
}

// CART split search with exact child Fréchet means.
template <MetricSpace S, class Rng>
std::optional<Split> best_split_exact(std::span<const std::size_t> cell, const Matrix& x,
                                      std::span<const typename S::Point> y, const S& space,
                                      const ForestConfig& config, Rng& rng, SplitSearchStats* stats = nullptr) {
  const std::size_t m = cell.size();
  if (m < 2 * config.min_leaf || m < 2) return std::nullopt;
  if (detail::all_identical(space, y, cell)) return std::nullopt;
  const std::size_t min_child = min_child_size(m, config);
  if (2 * min_child > m) return std::nullopt;

  std::optional<Split> best;
  for (std::size_t j : detail::candidate_features(x.cols(), config.mtry, rng)) {
    const std::vector<std::size_t> order = detail::order_by_feature(cell, x, j);
    for (std::size_t left_count = min_child; left_count + min_child <= m; ++left_count) {
      const double lo = x(cell[order[left_count - 1]], j);
      const double hi = x(cell[order[left_count]], j);
      if (!(lo < hi)) continue;
      const double z = 0.5 * (lo + hi);
      const double score = detail::exact_split_score(space, y, cell, order, left_count, j, z);
      if (stats) ++stats->scored_candidates;
      detail::keep_better(best, {j, z, score});
    }
  }
  return best;
}

// 1-D 2-means (Lloyd) on `values`, initialized at min and max. Returns the
// threshold midway between the two clusters, or nullopt when all values are
// equal.
inline std::optional<double> two_means_threshold(std::span<const double> values, int max_iterations = 50) {
  if (values.empty()) return std::nullopt;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double c1 = *lo_it;
  double c2 = *hi_it;
  if (!(c1 < c2)) return std::nullopt;
  std::vector<char> assign(values.size(), 2);
  for (int iter = 0; iter < max_iterations; ++iter) {
    const double cut = 0.5 * (c1 + c2);
    bool changed = false;
    double s1 = 0.0, s2 = 0.0;
    std::size_t n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const char a = values[i] <= cut ? 0 : 1;
      changed = changed || a != assign[i];
      assign[i] = a;
      if (a == 0) {
        s1 += values[i];
        ++n1;
      } else {
        s2 += values[i];
        ++n2;
      }
    }
    if (!changed || n1 == 0 || n2 == 0) break;
    c1 = s1 / static_cast<double>(n1);
    c2 = s2 / static_cast<double>(n2);
  }
  double left_max = -std::numeric_limits<double>::infinity();
  double right_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (assign[i] == 0) left_max = std::max(left_max, values[i]);
    else right_min = std::min(right_min, values[i]);
  }
  if (!std::isfinite(left_max) || !std::isfinite(right_min)) return std::nullopt;
  return 0.5 * (left_max + right_min);
}

// One candidate per feature from 2-means on the coordinate, scored with exact
// Fréchet variances (two solver calls per scored feature).
template <MetricSpace S, class Rng>
std::optional<Split> best_split_two_means(std::span<const std::size_t> cell, const Matrix& x,
                                          std::span<const typename S::Point> y, const S& space,
                                          const ForestConfig& config, Rng& rng,
                                          SplitSearchStats* stats = nullptr) {
  const std::size_t m = cell.size();
  if (m < 2 * config.min_leaf || m < 2) return std::nullopt;
  if (detail::all_identical(space, y, cell)) return std::nullopt;
  const std::size_t min_child = min_child_size(m, config);

  std::optional<Split> best;
  std::vector<double> coords(m);
  for (std::size_t j : detail::candidate_features(x.cols(), config.mtry, rng)) {
    for (std::size_t i = 0; i < m; ++i) coords[i] = x(cell[i], j);
    const std::optional<double> z = two_means_threshold(coords);
    if (!z) continue;
    const std::vector<std::size_t> order = detail::order_by_feature(cell, x, j);
    const auto left_count =
        static_cast<std::size_t>(std::count_if(coords.begin(), coords.end(), [&](double v) { return v <= *z; }));
    if (left_count < min_child || m - left_count < min_child) continue;
    const double score = detail::exact_split_score(space, y, cell, order, left_count, j, *z);
    if (stats) ++stats->scored_candidates;
    detail::keep_better(best, {j, *z, score});
  }
  return best;
}

struct TreeNode {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t feature = kNone;  // kNone marks a leaf
  double threshold = 0.0;
  std::uint32_t left = kNone;
  std::uint32_t right = kNone;
  std::size_t split_size = 0;              // split-half points that reached the node
  std::vector<std::size_t> leaf_members;   // estimate-half indices (leaves only)
  bool size_exception = false;             // leaf outside [k, 2k-1]

  bool is_leaf() const { return feature == kNone; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<std::size_t> subsample;
  std::vector<std::size_t> split_half;
  std::vector<std::size_t> estimate_half;
  std::size_t scored_candidates = 0;
  std::size_t split_searches = 0;

  const TreeNode& leaf_for(std::span<const double> x) const {
    std::uint32_t id = 0;
    while (!nodes[id].is_leaf()) id = x[nodes[id].feature] <= nodes[id].threshold ? nodes[id].left : nodes[id].right;
    return nodes[id];
  }

  friend bool operator==(const Tree&, const Tree&) = default;
};

// Builds one tree on `data_indices`. With honesty the indices are split
// 50/50 at random: the first half chooses splits, the second fills leaves.
// `delta` is required for the medoid rule and ignored otherwise.
template <MetricSpace S, class Rng>
Tree build_tree(std::span<const std::size_t> data_indices, const Matrix& x, std::span<const typename S::Point> y,
                const S& space, const DistanceMatrix* delta, const ForestConfig& config, Rng& rng) {
  if (config.split_rule == SplitRule::medoid && delta == nullptr)
    throw ConfigError("medoid split rule needs a distance matrix");
  Tree tree;
  tree.subsample.assign(data_indices.begin(), data_indices.end());
  if (config.honesty) {
    std::vector<std::size_t> shuffled = tree.subsample;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::size_t half = (shuffled.size() + 1) / 2;
    tree.split_half.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(half));
    tree.estimate_half.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(half), shuffled.end());
  } else {
    tree.split_half = tree.subsample;
    tree.estimate_half = tree.subsample;
  }
  std::sort(tree.split_half.begin(), tree.split_half.end());
  std::sort(tree.estimate_half.begin(), tree.estimate_half.end());

  struct Pending {
    std::uint32_t node;
    std::vector<std::size_t> split_members;
    std::vector<std::size_t> estimate_members;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, tree.split_half, tree.estimate_half});

  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    const std::size_t m = item.split_members.size();
    tree.nodes[item.node].split_size = m;

    std::optional<Split> split;
    if (m >= 2 * config.min_leaf) {
      SplitSearchStats stats;
      ++tree.split_searches;
      switch (config.split_rule) {
        case SplitRule::medoid:
          split = best_split_medoid(item.split_members, x, *delta, config, rng, &stats);
          break;
        case SplitRule::exact_frechet:
          split = best_split_exact(item.split_members, x, y, space, config, rng, &stats);
          break;
        case SplitRule::two_means:
          split = best_split_two_means(item.split_members, x, y, space, config, rng, &stats);
          break;
      }
      tree.scored_candidates += stats.scored_candidates;
    }

    if (!split) {
      TreeNode& leaf = tree.nodes[item.node];
      leaf.leaf_members = std::move(item.estimate_members);
      leaf.size_exception = m < config.min_leaf || m > 2 * config.min_leaf - 1;
      continue;
    }

    Pending left{static_cast<std::uint32_t>(tree.nodes.size()), {}, {}};
    Pending right{static_cast<std::uint32_t>(tree.nodes.size() + 1), {}, {}};
    for (std::size_t i : item.split_members)
      (x(i, split->feature) <= split->threshold ? left : right).split_members.push_back(i);
    for (std::size_t i : item.estimate_members)
      (x(i, split->feature) <= split->threshold ? left : right).estimate_members.push_back(i);

    TreeNode& node = tree.nodes[item.node];
    node.feature = static_cast<std::uint32_t>(split->feature);
    node.threshold = split->threshold;
    node.left = left.node;
    node.right = right.node;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    // Right pushed first so the left subtree is expanded first.
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return tree;
}

template <MetricSpace S>
class ForestModel {
 public:
  using Point = typename S::Point;

  ForestModel(std::vector<Tree> trees, Matrix x, std::vector<Point> y, const S& space, ForestConfig config)
      : trees_(std::move(trees)), x_(std::move(x)), y_(std::move(y)), space_(&space), config_(config) {}

  const std::vector<Tree>& trees() const { return trees_; }
  const Matrix& train_x() const { return x_; }
  const std::vector<Point>& train_y() const { return y_; }
  const S& space() const { return *space_; }
  const ForestConfig& config() const { return config_; }

  // Average over trees of 1{X_i in leaf(x)} / |leaf(x)|, counting only trees
  // whose leaf holds at least one estimation point.
  WeightVector weights(std::span<const double> query) const {
    if (query.size() != x_.cols())
      throw ValidationError("query has " + std::to_string(query.size()) + " covariates, expected " +
                            std::to_string(x_.cols()));
    for (double v : query)
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("query covariate outside [0, 1]");
    WeightVector w(y_.size(), 0.0);
    std::size_t contributing = 0;
    for (const Tree& tree : trees_) {
      const TreeNode& leaf = tree.leaf_for(query);
      if (leaf.leaf_members.empty()) continue;
      const double share = 1.0 / static_cast<double>(leaf.leaf_members.size());
      for (std::size_t i : leaf.leaf_members) w[i] += share;
      ++contributing;
    }
    if (contributing == 0) throw DegenerateWeightsError("every tree routed the query to an empty leaf");
    double total = 0.0;
    for (double& wi : w) {
      wi /= static_cast<double>(contributing);
      total += wi;
    }
    for (double& wi : w) wi /= total;
    return w;
  }

  Point predict(std::span<const double> query) const {
    const WeightVector w = weights(query);
    return weighted_frechet_mean(*space_, std::span<const Point>(y_), std::span<const double>(w));
  }

 private:
  std::vector<Tree> trees_;
  Matrix x_;
  std::vector<Point> y_;
  const S* space_;
  ForestConfig config_;
};

template <MetricSpace S>
WeightVector forest_weights(const ForestModel<S>& model, std::span<const double> query) {
  return model.weights(query);
}

template <MetricSpace S>
typename S::Point predict(const ForestModel<S>& model, std::span<const double> query) {
  return model.predict(query);
}

// Subsample of size ceil(fraction * n) without replacement, ascending.
template <class Rng>
std::vector<std::size_t> draw_subsample(std::size_t n, double fraction, Rng& rng) {
  const auto s = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(s);
  std::sort(all.begin(), all.end());
  return all;
}

// Fits B trees. Tree b draws everything from its own stream seeded by
// derive_seed(config.seed, b), so the thread count never changes the model.
// The distance matrix is computed once up front for the medoid rule.
template <MetricSpace S>
ForestModel<S> fit(const Matrix& x, std::vector<typename S::Point> y, const S& space, const ForestConfig& config) {
  config.validate();
  const std::size_t n = y.size();
  if (x.rows() != n) throw ConfigError("covariate rows and response count differ");
  if (n < 2 * config.min_leaf) throw ConfigError("need at least 2k training samples");
  if (x.cols() == 0) throw ConfigError("need at least one covariate");
  for (double v : x.data())
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("training covariate outside [0, 1]");
  for (std::size_t i = 0; i < n; ++i) {
    try {
      space.validate(y[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("response " + std::to_string(i) + ": " + e.what());
    }
  }

  std::optional<DistanceMatrix> delta;
  if (config.split_rule == SplitRule::medoid)
    delta = distance_matrix(space, std::span<const typename S::Point>(y), config.threads);

  std::vector<Tree> trees(config.n_trees);
  const std::span<const typename S::Point> responses(y);
  parallel_for(config.n_trees, config.threads, [&](std::size_t b) {
    std::mt19937_64 rng(derive_seed(config.seed, b));
    const std::vector<std::size_t> subsample = draw_subsample(n, config.subsample_fraction, rng);
    trees[b] = build_tree(std::span<const std::size_t>(subsample), x, responses, space,
                          delta ? &*delta : nullptr, config, rng);
  });
  return ForestModel<S>(std::move(trees), x, std::move(y), space, config);
}

}  // namespace mrf

#endif  // MRF_FOREST_HPP_
