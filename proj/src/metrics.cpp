#include "driftbench/metrics.hpp"

#include <cmath>

namespace driftbench {

ConfusionCounts ConfusionCounts::from_labels(const Eigen::VectorXi& truth,
                                             const Eigen::VectorXi& predicted) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("ConfusionCounts: length mismatch");
  }
  ConfusionCounts c;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth(i) == +1) {
      (predicted(i) == +1 ? c.tp : c.fn)++;
    } else {
      (predicted(i) == -1 ? c.tn : c.fp)++;
    }
  }
  return c;
}

MetricBundle compute_metrics(const ConfusionCounts& c) {
  if (c.total() < 1) {
    throw std::invalid_argument("compute_metrics: empty confusion matrix");
  }
  MetricBundle m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());

  const std::int64_t f1_den = 2 * c.tp + c.fp + c.fn;
  if (f1_den == 0) {
    m.f1 = 0.0;
    m.f1_degenerate = true;
  } else {
    m.f1 = 2.0 * static_cast<double>(c.tp) / static_cast<double>(f1_den);
  }

  const double pp = static_cast<double>(c.tp + c.fp);
  const double ap = static_cast<double>(c.tp + c.fn);
  const double pn = static_cast<double>(c.tn + c.fp);
  const double an = static_cast<double>(c.tn + c.fn);
  if (pp == 0 || ap == 0 || pn == 0 || an == 0) {
    m.mcc = 0.0;
    m.mcc_degenerate = true;
  } else {
    const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                       static_cast<double>(c.fp) * static_cast<double>(c.fn);
    m.mcc = num / std::sqrt(pp * ap * pn * an);
  }
  return m;
}

double degradation_rate(double metric_same, double metric_drifted) {
  if (metric_same == 0.0) {
    throw undefined_rate_error("degradation_rate: zero baseline metric");
  }
  return 100.0 * (metric_same - metric_drifted) / metric_same;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("pearson: need equal lengths >= 2");
  }
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw std::domain_error("pearson: zero-variance column");
  }
  return sab / std::sqrt(saa * sbb);
}

Eigen::MatrixXd pearson_matrix(
    const std::vector<std::vector<double>>& columns) {
  const auto k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    m(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double r = pearson(columns[i], columns[j]);
      m(i, j) = r;
      m(j, i) = r;
    }
  }
  return m;
}

}  // namespace driftbench
