#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "driftbench/gauss.hpp"

namespace driftbench {

/// The four class posterior probability functions. F1/F2 take 2-d inputs,
/// F3/F4 take 4-d inputs; the sine-based F2/F4 oscillate away from the
/// origin and are implemented literally, without clamping.
enum class PosteriorKind { f1, f2, f3, f4 };

int posterior_dim(PosteriorKind kind);
std::string posterior_name(PosteriorKind kind);

/// p(y = +1 | x) for the given function; p(y = -1 | x) = 1 - result.
double posterior(PosteriorKind kind, const Eigen::VectorXd& x);

/// Optimal label: +1 iff posterior >= 1/2 (tie at exactly 1/2 -> +1).
int bayes_label(PosteriorKind kind, const Eigen::VectorXd& x);

enum class DatasetSource { train, test_same, test_drifted };

struct LabeledDataset {
  Eigen::MatrixXd points;           // N x d
  Eigen::VectorXi labels;           // entries in {-1, +1}
  Eigen::VectorXd posterior_values; // cached p(y=+1 | x_i)
  DatasetSource source = DatasetSource::train;

  int size() const { return static_cast<int>(labels.size()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

/// Each label drawn independently as +1 with probability posterior(x_i)
/// from the seeded stream; deterministic given (kind, points, seed).
LabeledDataset sample_labels(PosteriorKind kind, const SampleMatrix& points,
                             std::uint64_t seed,
                             DatasetSource source = DatasetSource::train);

/// Deterministic Bayes-optimal labeling: label_i = bayes_label(kind, x_i).
/// This is what the benchmark protocol uses, so reported accuracies measure
/// distance from the optimal decision boundary rather than label noise.
LabeledDataset label_bayes(PosteriorKind kind, const SampleMatrix& points,
                           DatasetSource source = DatasetSource::train);

}  // namespace driftbench
