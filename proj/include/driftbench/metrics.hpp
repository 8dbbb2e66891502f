#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftbench {

struct ConfusionCounts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }

  /// Tally from paired truth/prediction label sequences over {-1, +1}.
  static ConfusionCounts from_labels(const Eigen::VectorXi& truth,
                                     const Eigen::VectorXi& predicted);
};

/// Accuracy, F1 and MCC from one confusion matrix. A zero denominator in
/// F1 or MCC yields 0 with the corresponding degenerate flag set.
struct MetricBundle {
  double accuracy = 0;
  double f1 = 0;
  double mcc = 0;
  bool f1_degenerate = false;
  bool mcc_degenerate = false;
};

MetricBundle compute_metrics(const ConfusionCounts& counts);

/// Thrown when a degradation rate is requested against a zero baseline.
struct undefined_rate_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// 100 * (same - drifted) / same; negative when the drifted score is
/// higher. Throws undefined_rate_error when same == 0.
double degradation_rate(double metric_same, double metric_drifted);

/// Pairwise Pearson correlations of equal-length columns; diagonal is
/// exactly 1. A zero-variance column is an error.
Eigen::MatrixXd pearson_matrix(
    const std::vector<std::vector<double>>& columns);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace driftbench
