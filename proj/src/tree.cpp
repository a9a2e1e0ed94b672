#include <algorithm>
#include <cmath>
#include <span>

#include "ciu/models.hpp"
#include "ciu/rng.hpp"

namespace ciu::detail {

namespace {

double gini2(long pos, long total) {
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  const double q = 1.0 - p;
  return 1.0 - p * p - q * q;
}

// CART induction over sparse rows. Candidate features at a node are the
// features with a nonzero value in the node's instances; absent entries act
// as zeros when thresholds are scanned. Scratch buffers are reused across
// nodes and trees, with an epoch stamp instead of clearing.
class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& data, TreeParams params,
              FeatureSampling sampling)
      : data_(data),
        params_(params),
        sampling_(sampling),
        epoch_of_(data.dim, 0),
        slot_of_(data.dim, 0) {}

  TreeState build(std::vector<size_t> instances, Rng* rng) {
    rng_ = rng;
    TreeState tree;
    grow(tree, std::move(instances), 0);
    return tree;
  }

 private:
  struct ValueGroup {
    double value = 0.0;
    long count = 0;
    long pos = 0;
  };

  int32_t grow(TreeState& tree, std::vector<size_t> instances, int depth) {
    const long total = static_cast<long>(instances.size());
    long pos = 0;
    for (const size_t i : instances) pos += data_.targets[i];

    const int32_t node_id = static_cast<int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.back().leaf_score =
        static_cast<double>(pos) / static_cast<double>(total);

    if (pos == 0 || pos == total || depth >= params_.max_depth ||
        total < params_.min_split) {
      return node_id;
    }

    uint32_t best_feature = 0;
    double best_threshold = 0.0;
    double best_impurity = gini2(pos, total) - 1e-12;
    bool found = false;

    gather(instances);
    for (const uint32_t f : candidates_) {
      const uint32_t slot = slot_of_[f];
      auto begin = values_.begin() + offsets_[slot];
      auto end = begin + nnz_[slot];
      std::sort(begin, end);

      groups_.clear();
      long pos_nnz = 0;
      for (auto it = begin; it != end; ++it) {
        if (groups_.empty() || groups_.back().value != it->first) {
          groups_.push_back(ValueGroup{it->first, 0, 0});
        }
        groups_.back().count += 1;
        groups_.back().pos += it->second;
        pos_nnz += it->second;
      }
      const long zero_count = total - (end - begin);
      if (zero_count > 0) {
        // Implicit zeros slot between negatives and positives.
        const auto at = std::find_if(
            groups_.begin(), groups_.end(),
            [](const ValueGroup& g) { return g.value > 0.0; });
        groups_.insert(at, ValueGroup{0.0, zero_count, pos - pos_nnz});
      }
      if (groups_.size() < 2) continue;

      long left_count = 0;
      long left_pos = 0;
      for (size_t g = 0; g + 1 < groups_.size(); ++g) {
        left_count += groups_[g].count;
        left_pos += groups_[g].pos;
        const long right_count = total - left_count;
        const long right_pos = pos - left_pos;
        const double weighted =
            (static_cast<double>(left_count) * gini2(left_pos, left_count) +
             static_cast<double>(right_count) * gini2(right_pos, right_count)) /
            static_cast<double>(total);
        if (weighted < best_impurity) {
          best_impurity = weighted;
          best_feature = f;
          best_threshold = 0.5 * (groups_[g].value + groups_[g + 1].value);
          found = true;
        }
      }
    }
    if (!found) return node_id;

    std::vector<size_t> left;
    std::vector<size_t> right;
    for (const size_t i : instances) {
      (data_.rows[i].at(best_feature) <= best_threshold ? left : right)
          .push_back(i);
    }
    instances.clear();
    instances.shrink_to_fit();

    tree.nodes[static_cast<size_t>(node_id)].feature =
        static_cast<int32_t>(best_feature);
    tree.nodes[static_cast<size_t>(node_id)].threshold = best_threshold;
    const int32_t l = grow(tree, std::move(left), depth + 1);
    const int32_t r = grow(tree, std::move(right), depth + 1);
    tree.nodes[static_cast<size_t>(node_id)].left = l;
    tree.nodes[static_cast<size_t>(node_id)].right = r;
    return node_id;
  }

  // Fills candidates_ (ascending feature ids), offsets_/nnz_ per slot and
  // the (value, target) buffer for every candidate feature.
  void gather(const std::vector<size_t>& instances) {
    ++epoch_;
    touched_.clear();
    for (const size_t i : instances) {
      for (const auto& [f, v] : data_.rows[i].entries) {
        if (epoch_of_[f] != epoch_) {
          epoch_of_[f] = epoch_;
          slot_of_[f] = static_cast<uint32_t>(touched_.size());
          touched_.push_back(f);
        }
      }
    }
    std::sort(touched_.begin(), touched_.end());

    candidates_ = touched_;
    if (sampling_ == FeatureSampling::kSqrt && rng_ != nullptr &&
        !candidates_.empty()) {
      const size_t m = static_cast<size_t>(
          std::ceil(std::sqrt(static_cast<double>(candidates_.size()))));
      for (size_t i = 0; i < m; ++i) {
        const size_t j = i + static_cast<size_t>(
                                 rng_->below(candidates_.size() - i));
        std::swap(candidates_[i], candidates_[j]);
      }
      candidates_.resize(m);
      std::sort(candidates_.begin(), candidates_.end());
    }

    const size_t n_slots = touched_.size();
    nnz_.assign(n_slots, 0);
    is_candidate_.assign(n_slots, 0);
    for (const uint32_t f : candidates_) is_candidate_[slot_of_[f]] = 1;
    for (const size_t i : instances) {
      for (const auto& [f, v] : data_.rows[i].entries) {
        const uint32_t slot = slot_of_[f];
        if (is_candidate_[slot]) ++nnz_[slot];
      }
    }
    offsets_.assign(n_slots + 1, 0);
    for (size_t s = 0; s < n_slots; ++s) offsets_[s + 1] = offsets_[s] + nnz_[s];
    values_.resize(offsets_[n_slots]);
    cursor_ = offsets_;
    for (const size_t i : instances) {
      const int y = data_.targets[i];
      for (const auto& [f, v] : data_.rows[i].entries) {
        const uint32_t slot = slot_of_[f];
        if (is_candidate_[slot]) values_[cursor_[slot]++] = {v, y};
      }
    }
  }

  const FeatureMatrix& data_;
  TreeParams params_;
  FeatureSampling sampling_;
  Rng* rng_ = nullptr;

  std::vector<uint32_t> epoch_of_;
  std::vector<uint32_t> slot_of_;
  uint32_t epoch_ = 0;
  std::vector<uint32_t> touched_;
  std::vector<uint32_t> candidates_;
  std::vector<size_t> nnz_;
  std::vector<uint8_t> is_candidate_;
  std::vector<size_t> offsets_;
  std::vector<size_t> cursor_;
  std::vector<std::pair<double, int>> values_;
  std::vector<ValueGroup> groups_;
};

}  // namespace

TreeState train_tree(const ModelSpec& spec, const FeatureMatrix& data) {
  TreeBuilder builder(data, spec.tree, FeatureSampling::kAll);
  std::vector<size_t> all(data.rows.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return builder.build(std::move(all), nullptr);
}

ForestState train_forest(const ModelSpec& spec, const FeatureMatrix& data) {
  ForestState forest;
  forest.trees.reserve(static_cast<size_t>(spec.forest.n_trees));
  TreeBuilder builder(data, spec.forest.tree, spec.forest.feature_sampling);
  const size_t n = data.rows.size();
  for (int t = 0; t < spec.forest.n_trees; ++t) {
    // Per-tree stream: parallel tree construction would see the same draws.
    Rng rng = derive_rng(spec.seed, static_cast<uint64_t>(t));
    std::vector<size_t> sample(n);
    if (spec.forest.bootstrap) {
      for (size_t i = 0; i < n; ++i) sample[i] = static_cast<size_t>(rng.below(n));
    } else {
      for (size_t i = 0; i < n; ++i) sample[i] = i;
    }
    forest.trees.push_back(builder.build(std::move(sample), &rng));
  }
  return forest;
}

}  // namespace ciu::detail
