#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ciu/featurize.hpp"
#include "ciu/sparse.hpp"

namespace ciu {

enum class ModelKind { kKnn, kSvmRbf, kRandomForest, kSvmLinear, kDecisionTree };

std::string_view kind_name(ModelKind kind);
ModelKind kind_from_name(std::string_view name);
// Paper row order: k-NN, SVM-rbf, RF, SVM-linear, DT.
std::span<const ModelKind> all_model_kinds();

struct KnnParams {
  int k = 5;
};

struct TreeParams {
  int max_depth = 20;
  int min_split = 2;
};

enum class FeatureSampling { kSqrt, kAll };

struct ForestParams {
  int n_trees = 100;
  TreeParams tree;
  bool bootstrap = true;
  FeatureSampling feature_sampling = FeatureSampling::kSqrt;
};

struct LinearSvmParams {
  double c = 1.0;
  int epochs = 20;
};

struct RbfSvmParams {
  double c = 1.0;
  double gamma = 0.0;  // 0 = auto: 1 / mean active dims per training vector
  double tol = 1e-3;   // KKT stopping tolerance
  long max_iter = 0;   // 0 = auto (100 * n, at least 200000)
};

struct ModelSpec {
  ModelKind kind = ModelKind::kKnn;
  uint64_t seed = 42;
  KnnParams knn;
  TreeParams tree;
  ForestParams forest;
  LinearSvmParams svm_linear;
  RbfSvmParams svm_rbf;

  void validate() const;  // throws ValidationError
};

// --- learned state ---------------------------------------------------------

struct KnnState {
  int k = 5;
  std::vector<SparseVector> points;  // canonical content order
  std::vector<int> labels;
  std::vector<double> norms;
};

struct TreeNode {
  // Leaf when feature < 0; score = positive-class proportion of the leaf.
  int32_t feature = -1;
  double threshold = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  double leaf_score = 0.0;
};

struct TreeState {
  std::vector<TreeNode> nodes;  // root at 0
};

struct ForestState {
  std::vector<TreeState> trees;
};

struct LinearSvmState {
  std::vector<std::pair<uint32_t, double>> weights;  // sparse, index-sorted
  double bias = 0.0;
};

struct RbfSvmState {
  double gamma = 0.0;
  double bias = 0.0;
  std::vector<SparseVector> support;
  std::vector<double> coef;  // alpha_i * y_i
};

// Immutable after training; safe for concurrent scoring.
class TrainedModel {
 public:
  using State = std::variant<KnnState, TreeState, ForestState, LinearSvmState,
                             RbfSvmState>;

  TrainedModel(ModelSpec spec, uint32_t feature_dim, std::string fingerprint,
               State state)
      : spec_(std::move(spec)),
        feature_dim_(feature_dim),
        fingerprint_(std::move(fingerprint)),
        state_(std::move(state)) {}

  // Score in [0, 1]. Throws DimensionMismatch.
  double score(const SparseVector& x) const;
  // label = 1 iff score >= threshold (boundary inclusive).
  int predict(const SparseVector& x, double threshold) const;

  const ModelSpec& spec() const { return spec_; }
  uint32_t feature_dim() const { return feature_dim_; }
  const std::string& config_fingerprint() const { return fingerprint_; }
  const State& state() const { return state_; }

  void save(std::ostream& out) const;
  static TrainedModel load(std::istream& in);

 private:
  ModelSpec spec_;
  uint32_t feature_dim_ = 0;
  std::string fingerprint_;
  State state_;
};

// Deterministic, bit-for-bit reproducible given spec.seed. Throws
// SingleClassTraining / DimensionMismatch / ValidationError.
TrainedModel train(const ModelSpec& spec, const FeatureMatrix& data);

double rbf_kernel(const SparseVector& x, const SparseVector& y, double gamma);
double gini_impurity(std::span<const long> class_counts);
double logistic(double margin);

double score_tree(const TreeState& tree, const SparseVector& x);

// Implementation entry points (svm.cpp / tree.cpp / knn.cpp).
namespace detail {
KnnState train_knn(const ModelSpec& spec, const FeatureMatrix& data);
TreeState train_tree(const ModelSpec& spec, const FeatureMatrix& data);
ForestState train_forest(const ModelSpec& spec, const FeatureMatrix& data);
LinearSvmState train_svm_linear(const ModelSpec& spec, const FeatureMatrix& data);
RbfSvmState train_svm_rbf(const ModelSpec& spec, const FeatureMatrix& data);
double score_state(const KnnState& s, const SparseVector& x);
double score_state(const TreeState& s, const SparseVector& x);
double score_state(const ForestState& s, const SparseVector& x);
double score_state(const LinearSvmState& s, const SparseVector& x);
double score_state(const RbfSvmState& s, const SparseVector& x);
// Content-lexicographic instance order shared by KNN and the SVMs so that
// caller-side permutations of the training set cannot change scores.
std::vector<size_t> canonical_order(const FeatureMatrix& data);
}  // namespace detail

}  // namespace ciu
