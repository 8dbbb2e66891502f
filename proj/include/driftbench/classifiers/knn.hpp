#pragma once

#include <nlohmann/json.hpp>

#include "driftbench/classifiers/classifier.hpp"

namespace driftbench {

/// Lazy k-nearest-neighbour classifier: memorizes the training set and
/// votes uniformly over the k Euclidean-closest points, distance ties
/// broken by lower training index.
class KnnModel : public Model {
 public:
  KnnModel(Eigen::MatrixXd points, Eigen::VectorXi labels, int k)
      : points_(std::move(points)), labels_(std::move(labels)), k_(k) {}

  ClassifierKind kind() const override { return ClassifierKind::knn; }
  int dim() const override { return static_cast<int>(points_.cols()); }
  Eigen::VectorXi predict(const Eigen::MatrixXd& points) const override;
  nlohmann::json to_json() const override;

  int stored_count() const { return static_cast<int>(points_.rows()); }
  int k() const { return k_; }

  static std::unique_ptr<KnnModel> from_json(const nlohmann::json& doc);

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXi labels_;
  int k_;
};

std::unique_ptr<KnnModel> train_knn(const ClassifierConfig& config,
                                    const LabeledDataset& data);

}  // namespace driftbench
