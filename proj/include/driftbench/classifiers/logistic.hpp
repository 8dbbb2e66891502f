#pragma once

#include <nlohmann/json.hpp>

#include "driftbench/classifiers/classifier.hpp"

namespace driftbench {

/// L2-regularized logistic regression fit by damped Newton iterations;
/// the intercept is unpenalized.
class LogisticModel : public Model {
 public:
  LogisticModel(Eigen::VectorXd weights, double intercept)
      : weights_(std::move(weights)), intercept_(intercept) {}

  ClassifierKind kind() const override { return ClassifierKind::logistic; }
  int dim() const override { return static_cast<int>(weights_.size()); }
  Eigen::VectorXi predict(const Eigen::MatrixXd& points) const override;
  nlohmann::json to_json() const override;

  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }

  static std::unique_ptr<LogisticModel> from_json(const nlohmann::json& doc);

 private:
  Eigen::VectorXd weights_;
  double intercept_;
};

std::unique_ptr<LogisticModel> train_logistic(const ClassifierConfig& config,
                                              const LabeledDataset& data);

}  // namespace driftbench
