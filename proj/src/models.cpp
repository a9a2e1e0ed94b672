#include "ciu/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ciu/errors.hpp"
#include "ciu/textio.hpp"

namespace ciu {

namespace {

constexpr std::array<ModelKind, 5> kKinds = {
    ModelKind::kKnn, ModelKind::kSvmRbf, ModelKind::kRandomForest,
    ModelKind::kSvmLinear, ModelKind::kDecisionTree};

}  // namespace

std::string_view kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kKnn: return "knn";
    case ModelKind::kSvmRbf: return "svm_rbf";
    case ModelKind::kRandomForest: return "rf";
    case ModelKind::kSvmLinear: return "svm_linear";
    case ModelKind::kDecisionTree: return "dt";
  }
  return "?";
}

ModelKind kind_from_name(std::string_view name) {
  for (const ModelKind k : kKinds) {
    if (kind_name(k) == name) return k;
  }
  throw ValidationError("unknown model kind '" + std::string(name) + "'");
}

std::span<const ModelKind> all_model_kinds() { return kKinds; }

void ModelSpec::validate() const {
  switch (kind) {
    case ModelKind::kKnn:
      if (knn.k < 1 || knn.k % 2 == 0) {
        throw ValidationError("knn.k must be odd and >= 1");
      }
      break;
    case ModelKind::kDecisionTree:
      if (tree.max_depth < 1 || tree.min_split < 2) {
        throw ValidationError("tree depth must be >= 1, min_split >= 2");
      }
      break;
    case ModelKind::kRandomForest:
      if (forest.n_trees < 1) throw ValidationError("forest.trees must be >= 1");
      if (forest.tree.max_depth < 1 || forest.tree.min_split < 2) {
        throw ValidationError("tree depth must be >= 1, min_split >= 2");
      }
      break;
    case ModelKind::kSvmLinear:
      if (svm_linear.c <= 0.0) throw ValidationError("svm_linear.c must be > 0");
      if (svm_linear.epochs < 1) throw ValidationError("svm_linear.epochs must be >= 1");
      break;
    case ModelKind::kSvmRbf:
      if (svm_rbf.c <= 0.0) throw ValidationError("svm_rbf.c must be > 0");
      if (svm_rbf.gamma < 0.0) throw ValidationError("svm_rbf.gamma must be >= 0 (0 = auto)");
      if (svm_rbf.tol <= 0.0) throw ValidationError("svm_rbf.tol must be > 0");
      break;
  }
}

double logistic(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

double rbf_kernel(const SparseVector& x, const SparseVector& y, double gamma) {
  return std::exp(-gamma * squared_distance(x, y));
}

double gini_impurity(std::span<const long> class_counts) {
  long total = 0;
  for (const long c : class_counts) total += c;
  double impurity = 1.0;
  for (const long c : class_counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    impurity -= p * p;
  }
  return impurity;
}

double score_tree(const TreeState& tree, const SparseVector& x) {
  int32_t node = 0;
  while (tree.nodes[static_cast<size_t>(node)].feature >= 0) {
    const TreeNode& n = tree.nodes[static_cast<size_t>(node)];
    node = x.at(static_cast<uint32_t>(n.feature)) <= n.threshold ? n.left
                                                                 : n.right;
  }
  return tree.nodes[static_cast<size_t>(node)].leaf_score;
}

namespace detail {

double score_state(const TreeState& s, const SparseVector& x) {
  return score_tree(s, x);
}

double score_state(const ForestState& s, const SparseVector& x) {
  double sum = 0.0;
  for (const TreeState& t : s.trees) sum += score_tree(t, x);
  return sum / static_cast<double>(s.trees.size());
}

double score_state(const LinearSvmState& s, const SparseVector& x) {
  double margin = s.bias;
  auto iw = s.weights.begin();
  for (const auto& [i, v] : x.entries) {
    while (iw != s.weights.end() && iw->first < i) ++iw;
    if (iw == s.weights.end()) break;
    if (iw->first == i) margin += iw->second * v;
  }
  return logistic(margin);
}

double score_state(const RbfSvmState& s, const SparseVector& x) {
  double margin = s.bias;
  for (size_t i = 0; i < s.support.size(); ++i) {
    margin += s.coef[i] * rbf_kernel(s.support[i], x, s.gamma);
  }
  return logistic(margin);
}

std::vector<size_t> canonical_order(const FeatureMatrix& data) {
  std::vector<size_t> order(data.rows.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (content_less(data.rows[a], data.rows[b])) return true;
    if (content_less(data.rows[b], data.rows[a])) return false;
    return data.targets[a] < data.targets[b];
  });
  return order;
}

}  // namespace detail

double TrainedModel::score(const SparseVector& x) const {
  if (x.dim != feature_dim_) {
    throw DimensionMismatch("score: vector dim " + std::to_string(x.dim) +
                            " != model dim " + std::to_string(feature_dim_));
  }
  return std::visit([&](const auto& s) { return detail::score_state(s, x); },
                    state_);
}

int TrainedModel::predict(const SparseVector& x, double threshold) const {
  return score(x) >= threshold ? 1 : 0;
}

TrainedModel train(const ModelSpec& spec, const FeatureMatrix& data) {
  spec.validate();
  if (data.rows.size() < 2) {
    throw ValidationError("train: need at least 2 instances");
  }
  if (data.rows.size() != data.targets.size()) {
    throw ValidationError("train: rows/targets size mismatch");
  }
  long pos = 0;
  for (const int y : data.targets) {
    if (y != 0 && y != 1) throw ValidationError("train: targets must be 0/1");
    pos += y;
  }
  if (pos == 0 || pos == static_cast<long>(data.targets.size())) {
    throw SingleClassTraining("train: both classes must be present");
  }
  for (const SparseVector& row : data.rows) {
    if (row.dim != data.dim) {
      throw DimensionMismatch("train: row dim " + std::to_string(row.dim) +
                              " != matrix dim " + std::to_string(data.dim));
    }
  }

  TrainedModel::State state = [&]() -> TrainedModel::State {
    switch (spec.kind) {
      case ModelKind::kKnn: return detail::train_knn(spec, data);
      case ModelKind::kDecisionTree: return detail::train_tree(spec, data);
      case ModelKind::kRandomForest: return detail::train_forest(spec, data);
      case ModelKind::kSvmLinear: return detail::train_svm_linear(spec, data);
      case ModelKind::kSvmRbf: return detail::train_svm_rbf(spec, data);
    }
    throw ValidationError("train: bad model kind");
  }();
  return TrainedModel(spec, data.dim, data.config_fingerprint,
                      std::move(state));
}

// --- serialization ----------------------------------------------------------
//
// Versioned text container; doubles as hexfloat so deserialized models score
// bit-identically.

namespace {

constexpr std::string_view kMagic = "ciu-model 1";

void write_vec(std::ostream& out, const SparseVector& v) {
  out << v.nnz();
  for (const auto& [i, val] : v.entries) out << ' ' << i << ':' << fmt_hex(val);
  out << '\n';
}

SparseVector read_vec(std::istream& in, uint32_t dim) {
  size_t nnz = 0;
  in >> nnz;
  SparseVector v;
  v.dim = dim;
  v.entries.reserve(nnz);
  for (size_t k = 0; k < nnz; ++k) {
    std::string field;
    in >> field;
    const size_t colon = field.find(':');
    if (colon == std::string::npos) throw ValidationError("model file: bad vector entry");
    v.entries.emplace_back(
        static_cast<uint32_t>(parse_long(field.substr(0, colon), "index")),
        parse_hex_double(field.substr(colon + 1)));
  }
  return v;
}

void write_tree(std::ostream& out, const TreeState& t) {
  out << "tree " << t.nodes.size() << '\n';
  for (const TreeNode& n : t.nodes) {
    if (n.feature < 0) {
      out << "leaf " << fmt_hex(n.leaf_score) << '\n';
    } else {
      out << "split " << n.feature << ' ' << fmt_hex(n.threshold) << ' '
          << n.left << ' ' << n.right << '\n';
    }
  }
}

TreeState read_tree(std::istream& in) {
  std::string word;
  size_t count = 0;
  in >> word >> count;
  if (word != "tree") throw ValidationError("model file: expected tree block");
  TreeState t;
  t.nodes.resize(count);
  for (TreeNode& n : t.nodes) {
    in >> word;
    if (word == "leaf") {
      std::string score;
      in >> score;
      n.feature = -1;
      n.leaf_score = parse_hex_double(score);
    } else if (word == "split") {
      std::string thr;
      in >> n.feature >> thr >> n.left >> n.right;
      n.threshold = parse_hex_double(thr);
    } else {
      throw ValidationError("model file: bad tree node '" + word + "'");
    }
  }
  return t;
}

}  // namespace

void TrainedModel::save(std::ostream& out) const {
  out << kMagic << '\n';
  out << "kind " << kind_name(spec_.kind) << '\n';
  out << "seed " << spec_.seed << '\n';
  out << "feature_dim " << feature_dim_ << '\n';
  out << "fingerprint " << (fingerprint_.empty() ? "-" : fingerprint_) << '\n';
  switch (spec_.kind) {
    case ModelKind::kKnn: {
      const auto& s = std::get<KnnState>(state_);
      out << "k " << s.k << '\n';
      out << "n " << s.points.size() << '\n';
      for (size_t i = 0; i < s.points.size(); ++i) {
        out << s.labels[i] << ' ';
        write_vec(out, s.points[i]);
      }
      break;
    }
    case ModelKind::kDecisionTree:
      write_tree(out, std::get<TreeState>(state_));
      break;
    case ModelKind::kRandomForest: {
      const auto& s = std::get<ForestState>(state_);
      out << "trees " << s.trees.size() << '\n';
      for (const TreeState& t : s.trees) write_tree(out, t);
      break;
    }
    case ModelKind::kSvmLinear: {
      const auto& s = std::get<LinearSvmState>(state_);
      out << "bias " << fmt_hex(s.bias) << '\n';
      SparseVector w{s.weights, feature_dim_};
      out << "weights ";
      write_vec(out, w);
      break;
    }
    case ModelKind::kSvmRbf: {
      const auto& s = std::get<RbfSvmState>(state_);
      out << "gamma " << fmt_hex(s.gamma) << '\n';
      out << "bias " << fmt_hex(s.bias) << '\n';
      out << "nsv " << s.support.size() << '\n';
      for (size_t i = 0; i < s.support.size(); ++i) {
        out << fmt_hex(s.coef[i]) << ' ';
        write_vec(out, s.support[i]);
      }
      break;
    }
  }
  out << "end\n";
}

TrainedModel TrainedModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ValidationError("model file: bad magic/version line");
  }
  std::string word, kind_str;
  in >> word >> kind_str;
  if (word != "kind") throw ValidationError("model file: expected kind");
  ModelSpec spec;
  spec.kind = kind_from_name(kind_str);
  in >> word >> spec.seed;
  if (word != "seed") throw ValidationError("model file: expected seed");
  uint32_t dim = 0;
  in >> word >> dim;
  if (word != "feature_dim") throw ValidationError("model file: expected feature_dim");
  std::string fingerprint;
  in >> word >> fingerprint;
  if (word != "fingerprint") throw ValidationError("model file: expected fingerprint");
  if (fingerprint == "-") fingerprint.clear();

  State state = TreeState{};
  switch (spec.kind) {
    case ModelKind::kKnn: {
      KnnState s;
      size_t n = 0;
      in >> word >> s.k;
      in >> word >> n;
      s.points.reserve(n);
      s.labels.reserve(n);
      for (size_t i = 0; i < n; ++i) {
        int label = 0;
        in >> label;
        s.labels.push_back(label);
        s.points.push_back(read_vec(in, dim));
        s.norms.push_back(std::sqrt(squared_norm(s.points.back())));
      }
      spec.knn.k = s.k;
      state = std::move(s);
      break;
    }
    case ModelKind::kDecisionTree:
      state = read_tree(in);
      break;
    case ModelKind::kRandomForest: {
      ForestState s;
      size_t n = 0;
      in >> word >> n;
      s.trees.reserve(n);
      for (size_t i = 0; i < n; ++i) s.trees.push_back(read_tree(in));
      spec.forest.n_trees = static_cast<int>(n);
      state = std::move(s);
      break;
    }
    case ModelKind::kSvmLinear: {
      LinearSvmState s;
      std::string bias;
      in >> word >> bias;
      s.bias = parse_hex_double(bias);
      in >> word;
      s.weights = read_vec(in, dim).entries;
      state = std::move(s);
      break;
    }
    case ModelKind::kSvmRbf: {
      RbfSvmState s;
      std::string field;
      in >> word >> field;
      s.gamma = parse_hex_double(field);
      in >> word >> field;
      s.bias = parse_hex_double(field);
      size_t n = 0;
      in >> word >> n;
      for (size_t i = 0; i < n; ++i) {
        in >> field;
        s.coef.push_back(parse_hex_double(field));
        s.support.push_back(read_vec(in, dim));
      }
      state = std::move(s);
      break;
    }
  }
  in >> word;
  if (word != "end") throw ValidationError("model file: missing end marker");
  return TrainedModel(spec, dim, fingerprint, std::move(state));
}

}  // namespace ciu
