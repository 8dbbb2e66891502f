#include "driftbench/gauss.hpp"

#include <cmath>
#include <string>

#include "driftbench/rng.hpp"

namespace driftbench {

namespace {

// Cholesky with an explicit pivot floor, so near-singular matrices are
// rejected instead of silently producing garbage factors.
Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot <= 1e-12) {
      throw factorization_error("covariance is not positive definite (pivot " +
                                std::to_string(pivot) + " at " +
                                std::to_string(j) + ")");
    }
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) =
          (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return l;
}

}  // namespace

GaussianSpec GaussianSpec::standard(int d) {
  return {Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d)};
}

void GaussianSpec::validate() const {
  if (mean.size() == 0 || cov.rows() != mean.size() ||
      cov.cols() != mean.size()) {
    throw std::invalid_argument("GaussianSpec: mean/cov dimension mismatch");
  }
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < cov.cols(); ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-12) {
        throw factorization_error("covariance is not symmetric");
      }
    }
  }
  (void)cholesky_or_throw(cov);
}

Eigen::MatrixXd GaussianSpec::cholesky_lower() const {
  return cholesky_or_throw(cov);
}

DriftTransform DriftTransform::identity(int d) {
  return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d), std::nullopt};
}

void DriftTransform::validate() const {
  if (translation.size() != scale_factors.size()) {
    throw std::invalid_argument("DriftTransform: vector length mismatch");
  }
  if ((scale_factors.array() <= 0.0).any()) {
    throw std::invalid_argument("DriftTransform: scale factors must be > 0");
  }
  if (rotation_deg && !std::isfinite(*rotation_deg)) {
    throw std::invalid_argument("DriftTransform: rotation angle not finite");
  }
}

bool DriftTransform::is_identity() const {
  return translation.isZero(0.0) &&
         (scale_factors.array() - 1.0).abs().maxCoeff() == 0.0 &&
         (!rotation_deg || *rotation_deg == 0.0);
}

double log_pdf(const GaussianSpec& spec, const Eigen::VectorXd& x) {
  if (x.size() != spec.mean.size()) {
    throw std::invalid_argument("log_pdf: point dimension mismatch");
  }
  const Eigen::MatrixXd l = spec.cholesky_lower();
  const Eigen::VectorXd z =
      l.triangularView<Eigen::Lower>().solve(x - spec.mean);
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  const double d = static_cast<double>(spec.dim());
  return -0.5 * (d * std::log(2.0 * M_PI) + log_det + z.squaredNorm());
}

SampleMatrix sample(const GaussianSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sample: n must be >= 1");
  }
  const int d = spec.dim();
  const Eigen::MatrixXd l = spec.cholesky_lower();
  Rng rng(seed);
  SampleMatrix out;
  out.seed = seed;
  out.points.resize(n, d);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      z(j) = rng.normal();
    }
    out.points.row(i) = (spec.mean + l * z).transpose();
  }
  return out;
}

GaussianSpec apply_drift(const GaussianSpec& base, const DriftTransform& t) {
  base.validate();
  t.validate();
  const int d = base.dim();
  if (t.translation.size() != d) {
    throw std::invalid_argument("apply_drift: transform dimension mismatch");
  }

  GaussianSpec out;
  out.mean = base.mean + t.translation;

  const Eigen::MatrixXd s = t.scale_factors.asDiagonal();
  Eigen::MatrixXd cov = s * base.cov * s;

  if (t.rotation_deg) {
    if (d != 2 && d != 4) {
      throw std::invalid_argument(
          "apply_drift: rotation supported only for d in {2, 4}");
    }
    const double theta = *t.rotation_deg * M_PI / 180.0;
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(d, d);
    r(0, 0) = std::cos(theta);
    r(0, 1) = -std::sin(theta);
    r(1, 0) = std::sin(theta);
    r(1, 1) = std::cos(theta);
    cov = r * cov * r.transpose();
  }

  // Absorb roundoff so the downstream Cholesky sees an exactly symmetric
  // matrix.
  out.cov = 0.5 * (cov + cov.transpose());
  out.validate();
  return out;
}

}  // namespace driftbench
