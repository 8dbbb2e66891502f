#include "driftbench/classifiers/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftbench/rng.hpp"

namespace driftbench {

namespace {

struct SplitResult {
  int feature = -1;
  double threshold = 0;
  double impurity = std::numeric_limits<double>::infinity();
};

// Weighted Gini of a binary split given child counts of the +1 class.
double split_gini(double nl, double pl, double nr, double pr) {
  auto gini = [](double n, double p) {
    if (n == 0) return 0.0;
    const double f = p / n;
    return 2.0 * f * (1.0 - f);
  };
  const double n = nl + nr;
  return (nl * gini(nl, pl) + nr * gini(nr, pr)) / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, Rng& rng)
      : x_(x), y_(y), rng_(rng), d_(static_cast<int>(x.cols())) {
    mtry_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d_))));
    features_.resize(d_);
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<int> sample_indices) {
    DecisionTree tree;
    indices_ = std::move(sample_indices);
    scratch_.reserve(indices_.size());
    grow(tree, 0, static_cast<int>(indices_.size()));
    return tree;
  }

 private:
  // Grows the subtree over indices_[lo, hi); returns its node id.
  int grow(DecisionTree& tree, int lo, int hi) {
    int pos = 0;
    for (int i = lo; i < hi; ++i) {
      if (y_(indices_[i]) == +1) ++pos;
    }
    const int n = hi - lo;
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (pos == 0 || pos == n) {
      tree.nodes[node_id].label = pos == 0 ? -1 : +1;
      return node_id;
    }

    const SplitResult split = best_split(lo, hi);
    if (split.feature < 0) {
      // all candidate features constant on this node
      tree.nodes[node_id].label = 2 * pos >= n ? +1 : -1;
      return node_id;
    }

    auto mid_it = std::partition(
        indices_.begin() + lo, indices_.begin() + hi, [&](int idx) {
          return x_(idx, split.feature) <= split.threshold;
        });
    const int mid = static_cast<int>(mid_it - indices_.begin());

    tree.nodes[node_id].feature = split.feature;
    tree.nodes[node_id].threshold = split.threshold;
    const int left = grow(tree, lo, mid);
    const int right = grow(tree, mid, hi);
    tree.nodes[node_id].left = left;
    tree.nodes[node_id].right = right;
    return node_id;
  }

  SplitResult best_split(int lo, int hi) {
    // Fisher-Yates prefix selects mtry distinct features.
    for (int k = 0; k < mtry_; ++k) {
      const int pick =
          k + static_cast<int>(rng_.below(static_cast<std::uint64_t>(d_ - k)));
      std::swap(features_[k], features_[pick]);
    }

    const int n = hi - lo;
    SplitResult best;
    for (int k = 0; k < mtry_; ++k) {
      const int f = features_[k];
      scratch_.clear();
      for (int i = lo; i < hi; ++i) {
        scratch_.emplace_back(x_(indices_[i], f), y_(indices_[i]));
      }
      std::sort(scratch_.begin(), scratch_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      int total_pos = 0;
      for (const auto& [v, label] : scratch_) {
        if (label == +1) ++total_pos;
      }
      int left_pos = 0;
      for (int i = 0; i < n - 1; ++i) {
        if (scratch_[i].second == +1) ++left_pos;
        if (scratch_[i].first == scratch_[i + 1].first) continue;
        const double imp = split_gini(i + 1, left_pos, n - i - 1,
                                      total_pos - left_pos);
        if (imp < best.impurity) {
          best.impurity = imp;
          best.feature = f;
          best.threshold = 0.5 * (scratch_[i].first + scratch_[i + 1].first);
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXi& y_;
  Rng& rng_;
  int d_;
  int mtry_;
  std::vector<int> features_;
  std::vector<int> indices_;
  std::vector<std::pair<double, int>> scratch_;
};

}  // namespace

int DecisionTree::predict_row(const Eigen::RowVectorXd& x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = x(nodes[node].feature) <= nodes[node].threshold ? nodes[node].left
                                                           : nodes[node].right;
  }
  return nodes[node].label;
}

std::unique_ptr<ForestModel> train_forest(const ClassifierConfig& config,
                                          const LabeledDataset& data,
                                          std::uint64_t seed) {
  const int n = data.size();
  bool has_pos = false, has_neg = false;
  for (int i = 0; i < n; ++i) {
    (data.labels(i) == +1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("train_forest: both classes must be present");
  }

  std::vector<DecisionTree> trees;
  trees.reserve(config.rf_trees);
  for (int k = 0; k < config.rf_trees; ++k) {
    // Per-tree stream: trees are independent of each other and of the
    // build order.
    Rng rng(derive_seed(seed, "tree/" + std::to_string(k)));
    std::vector<int> bootstrap(n);
    for (int i = 0; i < n; ++i) {
      bootstrap[i] =
          static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    }
    TreeBuilder builder(data.points, data.labels, rng);
    trees.push_back(builder.build(std::move(bootstrap)));
  }
  return std::make_unique<ForestModel>(std::move(trees), data.dim());
}

Eigen::VectorXi ForestModel::predict(const Eigen::MatrixXd& points) const {
  check_dim(points);
  const int n = static_cast<int>(points.rows());
  Eigen::VectorXi labels(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::RowVectorXd row = points.row(i);
    int vote = 0;
    for (const auto& tree : trees_) {
      vote += tree.predict_row(row);
    }
    labels(i) = vote >= 0 ? +1 : -1;
  }
  return labels;
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["kind"] = classifier_kind_name(kind());
  doc["dim"] = dim_;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
    }
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  return doc;
}

std::unique_ptr<ForestModel> ForestModel::from_json(const nlohmann::json& doc) {
  std::vector<DecisionTree> trees;
  for (const auto& tree_doc : doc.at("trees")) {
    DecisionTree tree;
    for (const auto& n : tree_doc) {
      TreeNode node;
      node.feature = n.at(0).get<int>();
      node.threshold = n.at(1).get<double>();
      node.left = n.at(2).get<int>();
      node.right = n.at(3).get<int>();
      node.label = n.at(4).get<int>();
      tree.nodes.push_back(node);
    }
    trees.push_back(std::move(tree));
  }
  return std::make_unique<ForestModel>(std::move(trees),
                                       doc.at("dim").get<int>());
}

}  // namespace driftbench
