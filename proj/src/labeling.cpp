#include "driftbench/labeling.hpp"

#include <cmath>

#include "driftbench/rng.hpp"

namespace driftbench {

int posterior_dim(PosteriorKind kind) {
  return (kind == PosteriorKind::f1 || kind == PosteriorKind::f2) ? 2 : 4;
}

std::string posterior_name(PosteriorKind kind) {
  switch (kind) {
    case PosteriorKind::f1: return "F1";
    case PosteriorKind::f2: return "F2";
    case PosteriorKind::f3: return "F3";
    case PosteriorKind::f4: return "F4";
  }
  return "?";
}

namespace {

double inner_argument(PosteriorKind kind, const Eigen::VectorXd& x) {
  switch (kind) {
    case PosteriorKind::f1:
      return std::min(0.0, x(0)) + 4.0 * x(1);
    case PosteriorKind::f2:
      return std::min(0.0, x(0)) + 2.0 * x(1);
    case PosteriorKind::f3:
      return std::min(0.0, x(0)) - x(1) + 2.0 * x(2) + 2.0 * x(3);
    case PosteriorKind::f4:
      return std::min(0.0, x(0)) + 4.0 * x(1) - 3.0 * x(2) + 2.0 * x(3);
  }
  return 0.0;
}

void check_dim(PosteriorKind kind, const Eigen::VectorXd& x) {
  if (x.size() != posterior_dim(kind)) {
    throw std::invalid_argument("posterior: point dimension mismatch for " +
                                posterior_name(kind));
  }
}

}  // namespace

double posterior(PosteriorKind kind, const Eigen::VectorXd& x) {
  check_dim(kind, x);
  const double a = inner_argument(kind, x);
  const double shape =
      (kind == PosteriorKind::f2 || kind == PosteriorKind::f4) ? std::sin(a)
                                                               : std::tanh(a);
  return 0.5 * (1.0 + shape);
}

int bayes_label(PosteriorKind kind, const Eigen::VectorXd& x) {
  return posterior(kind, x) >= 0.5 ? +1 : -1;
}

LabeledDataset sample_labels(PosteriorKind kind, const SampleMatrix& points,
                             std::uint64_t seed, DatasetSource source) {
  const int n = static_cast<int>(points.points.rows());
  if (points.points.cols() != posterior_dim(kind)) {
    throw std::invalid_argument("sample_labels: points dimension mismatch");
  }
  LabeledDataset out;
  out.points = points.points;
  out.labels.resize(n);
  out.posterior_values.resize(n);
  out.source = source;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double p = posterior(kind, out.points.row(i).transpose());
    out.posterior_values(i) = p;
    out.labels(i) = rng.uniform() < p ? +1 : -1;
  }
  return out;
}

LabeledDataset label_bayes(PosteriorKind kind, const SampleMatrix& points,
                           DatasetSource source) {
  const int n = static_cast<int>(points.points.rows());
  if (points.points.cols() != posterior_dim(kind)) {
    throw std::invalid_argument("label_bayes: points dimension mismatch");
  }
  LabeledDataset out;
  out.points = points.points;
  out.labels.resize(n);
  out.posterior_values.resize(n);
  out.source = source;
  for (int i = 0; i < n; ++i) {
    const double p = posterior(kind, out.points.row(i).transpose());
    out.posterior_values(i) = p;
    out.labels(i) = p >= 0.5 ? +1 : -1;
  }
  return out;
}

}  // namespace driftbench
