#pragma once

#include <nlohmann/json.hpp>

#include "driftbench/classifiers/classifier.hpp"

namespace driftbench {

/// Gaussian naive Bayes with maximum-likelihood (biased) per-class
/// feature variances and additive variance smoothing. Tolerates a
/// single-class training set (then predicts that class constantly).
class GaussianNbModel : public Model {
 public:
  struct ClassStats {
    int label = +1;
    double log_prior = 0;
    Eigen::VectorXd mean;
    Eigen::VectorXd var;  // smoothed
  };

  GaussianNbModel(std::vector<ClassStats> classes, int dim)
      : classes_(std::move(classes)), dim_(dim) {}

  ClassifierKind kind() const override { return ClassifierKind::naive_bayes; }
  int dim() const override { return dim_; }
  Eigen::VectorXi predict(const Eigen::MatrixXd& points) const override;
  nlohmann::json to_json() const override;

  const std::vector<ClassStats>& classes() const { return classes_; }

  static std::unique_ptr<GaussianNbModel> from_json(const nlohmann::json& doc);

 private:
  std::vector<ClassStats> classes_;
  int dim_;
};

std::unique_ptr<GaussianNbModel> train_naive_bayes(
    const ClassifierConfig& config, const LabeledDataset& data);

}  // namespace driftbench
