#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "driftbench/classifiers/classifier.hpp"

namespace driftbench {

/// One CART node; leaf when feature < 0 and label holds the vote.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  int label = +1;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  int predict_row(const Eigen::RowVectorXd& x) const;
};

/// Bagged ensemble of fully grown Gini trees, max_features =
/// floor(sqrt(d)) per split, majority vote (tie -> +1).
class ForestModel : public Model {
 public:
  ForestModel(std::vector<DecisionTree> trees, int dim)
      : trees_(std::move(trees)), dim_(dim) {}

  ClassifierKind kind() const override { return ClassifierKind::random_forest; }
  int dim() const override { return dim_; }
  Eigen::VectorXi predict(const Eigen::MatrixXd& points) const override;
  nlohmann::json to_json() const override;

  const std::vector<DecisionTree>& trees() const { return trees_; }

  static std::unique_ptr<ForestModel> from_json(const nlohmann::json& doc);

 private:
  std::vector<DecisionTree> trees_;
  int dim_;
};

std::unique_ptr<ForestModel> train_forest(const ClassifierConfig& config,
                                          const LabeledDataset& data,
                                          std::uint64_t seed);

}  // namespace driftbench
