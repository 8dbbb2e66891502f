#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace driftbench {

/// Thrown when a covariance matrix fails the symmetric positive-definite
/// check (Cholesky pivot <= 1e-12 or asymmetry above 1e-12).
struct factorization_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters of a multivariate normal input density.
struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }

  /// mu = 0, Sigma = I: the training input density in every experiment.
  static GaussianSpec standard(int d);

  /// Enforces the invariants: mean/cov shapes agree, cov symmetric to
  /// 1e-12, Cholesky succeeds with pivots > 1e-12.
  void validate() const;

  /// Lower Cholesky factor of cov. Throws factorization_error if not PD.
  Eigen::MatrixXd cholesky_lower() const;
};

/// Affine transform of the density parameters that manufactures the test
/// distribution: translation shifts the mean, per-axis scaling and an
/// optional rotation in the (x1, x2) plane reshape the covariance.
struct DriftTransform {
  Eigen::VectorXd translation;
  Eigen::VectorXd scale_factors;          // each strictly positive
  std::optional<double> rotation_deg;     // rotation in the (x1,x2) plane

  static DriftTransform identity(int d);
  void validate() const;
  bool is_identity() const;
};

/// Rows of points plus the seed that produced them.
struct SampleMatrix {
  Eigen::MatrixXd points;  // N x d
  std::uint64_t seed = 0;
};

/// Log density of the multivariate normal, computed through a Cholesky
/// solve (never an explicit inverse).
double log_pdf(const GaussianSpec& spec, const Eigen::VectorXd& x);

/// n rows drawn as mu + L*z with z i.i.d. standard normal from the seeded
/// stream. Identical (spec, n, seed) triples give bit-identical output.
SampleMatrix sample(const GaussianSpec& spec, int n, std::uint64_t seed);

/// Scale-then-rotate composition: mean' = mean + translation,
/// cov' = S Sigma S, then R cov' R^T when a rotation is requested
/// (supported for d in {2, 4} only). Result is symmetrized and
/// revalidated.
GaussianSpec apply_drift(const GaussianSpec& base, const DriftTransform& t);

}  // namespace driftbench
