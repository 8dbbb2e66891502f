#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "driftbench/labeling.hpp"

namespace driftbench {

enum class ClassifierKind { svm, logistic, random_forest, naive_bayes, knn };

std::string classifier_kind_name(ClassifierKind kind);
std::optional<ClassifierKind> parse_classifier_kind(const std::string& name);

/// Hyperparameters for all five families; per-kind fields are ignored by
/// the other kinds. Defaults follow the common library defaults the
/// experiments assume.
struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::random_forest;

  // SVM (RBF kernel; gamma = 1 / (d * pooled feature variance))
  double svm_c = 1.0;
  double svm_tol = 1e-3;
  double svm_cache_mb = 512.0;
  long svm_max_iter = 400000;

  // Logistic regression (L2, inverse strength C, unpenalized intercept)
  double lr_c = 1.0;
  double lr_tol = 1e-6;
  int lr_max_iter = 1000;

  // Random forest (Gini, max_features = floor(sqrt(d)), bootstrap,
  // no depth cap, min leaf 1)
  int rf_trees = 100;

  // Gaussian naive Bayes (variance smoothing factor, times the largest
  // per-feature variance)
  double gnb_smoothing = 1e-9;

  // K-nearest neighbours (Euclidean, uniform majority vote; k must be odd)
  int knn_k = 5;

  void validate() const;
  static ClassifierConfig make(ClassifierKind kind);
};

/// A trained, immutable model. Safe for concurrent predict calls.
class Model {
 public:
  virtual ~Model() = default;
  virtual ClassifierKind kind() const = 0;
  virtual int dim() const = 0;
  /// Hard labels over {-1, +1}; throws on dimension mismatch.
  virtual Eigen::VectorXi predict(const Eigen::MatrixXd& points) const = 0;
  /// Versioned JSON document; round-trips through model_from_json to a
  /// model with identical predictions.
  virtual nlohmann::json to_json() const = 0;

 protected:
  void check_dim(const Eigen::MatrixXd& points) const;
};

/// Deterministic given (config, data, seed); only the forest consumes
/// the seed.
std::unique_ptr<Model> train(const ClassifierConfig& config,
                             const LabeledDataset& data, std::uint64_t seed);

std::unique_ptr<Model> model_from_json(const nlohmann::json& doc);

}  // namespace driftbench
