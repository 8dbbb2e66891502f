#pragma once

#include <nlohmann/json.hpp>

#include "driftbench/classifiers/classifier.hpp"

namespace driftbench {

/// RBF-kernel support vector classifier trained by two-variable SMO with
/// first-order (maximal-violating-pair) working-set selection.
class SvmModel : public Model {
 public:
  SvmModel(Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coef,
           double bias, double gamma)
      : support_vectors_(std::move(support_vectors)),
        dual_coef_(std::move(dual_coef)),
        bias_(bias),
        gamma_(gamma) {}

  ClassifierKind kind() const override { return ClassifierKind::svm; }
  int dim() const override { return static_cast<int>(support_vectors_.cols()); }
  Eigen::VectorXi predict(const Eigen::MatrixXd& points) const override;
  nlohmann::json to_json() const override;

  /// Signed decision values, sum_i coef_i K(sv_i, x) + bias.
  Eigen::VectorXd decision_function(const Eigen::MatrixXd& points) const;

  const Eigen::MatrixXd& support_vectors() const { return support_vectors_; }
  const Eigen::VectorXd& dual_coef() const { return dual_coef_; }
  double bias() const { return bias_; }
  double gamma() const { return gamma_; }

  static std::unique_ptr<SvmModel> from_json(const nlohmann::json& doc);

 private:
  Eigen::MatrixXd support_vectors_;
  Eigen::VectorXd dual_coef_;  // alpha_i * y_i for the support vectors
  double bias_;
  double gamma_;
};

/// Diagnostics from the solver exit, for the KKT property checks.
struct SvmTrainInfo {
  double dual_gap = 0;          // m(alpha) - M(alpha) at exit
  double equality_residual = 0; // |sum alpha_i y_i|
  long iterations = 0;
  bool converged = false;
};

std::unique_ptr<SvmModel> train_svm(const ClassifierConfig& config,
                                    const LabeledDataset& data,
                                    SvmTrainInfo* info = nullptr);

}  // namespace driftbench
