#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "driftbench/experiments.hpp"
#include "driftbench/gauss.hpp"
#include "driftbench/rng.hpp"

using namespace driftbench;

TEST_CASE("standard spec is zero-mean identity-covariance") {
  const GaussianSpec s = GaussianSpec::standard(4);
  CHECK(s.dim() == 4);
  CHECK(s.mean.isZero(0.0));
  CHECK(s.cov.isIdentity(0.0));
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("log_pdf matches frozen reference values") {
  const GaussianSpec std2 = GaussianSpec::standard(2);
  Eigen::VectorXd x(2);
  x << 0, 0;
  CHECK(log_pdf(std2, x) == doctest::Approx(-1.8378770664093453).epsilon(1e-12));
  x << 1, -1;
  CHECK(log_pdf(std2, x) == doctest::Approx(-2.8378770664093453).epsilon(1e-12));

  GaussianSpec g;
  g.mean = Eigen::VectorXd(2);
  g.mean << 3, 1;
  g.cov = Eigen::MatrixXd(2, 2);
  g.cov << 3, 0, 0, 2;
  x << 1, 2;
  CHECK(log_pdf(g, x) == doctest::Approx(-3.6504234676900396).epsilon(1e-12));

  GaussianSpec rot;
  rot.mean = Eigen::VectorXd(2);
  rot.mean << 4, -1;
  rot.cov = Eigen::MatrixXd(2, 2);
  rot.cov << 3.5, 0.5, 0.5, 3.5;
  x << 2, 0.5;
  CHECK(log_pdf(rot, x) == doctest::Approx(-4.116788724636678).epsilon(1e-12));

  const GaussianSpec std4 = GaussianSpec::standard(4);
  CHECK(log_pdf(std4, Eigen::VectorXd::Zero(4)) ==
        doctest::Approx(-3.6757541328186907).epsilon(1e-12));
}

TEST_CASE("log_pdf integrates to one over a wide box") {
  GaussianSpec g;
  g.mean = Eigen::VectorXd::Zero(2);
  g.cov = Eigen::MatrixXd(2, 2);
  g.cov << 3, 0, 0, 2;
  const int n = 400;
  const double lo = -8.0, hi = 8.0;
  const double h = (hi - lo) / n;
  double sum = 0;
  Eigen::VectorXd x(2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      x << lo + (i + 0.5) * h, lo + (j + 0.5) * h;
      sum += std::exp(log_pdf(g, x)) * h * h;
    }
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sampling reproduces mean and covariance") {
  GaussianSpec g;
  g.mean = Eigen::VectorXd(2);
  g.mean << 4, -1;
  g.cov = Eigen::MatrixXd(2, 2);
  g.cov << 3.5, 0.5, 0.5, 3.5;
  const int n = 100000;
  const SampleMatrix s = sample(g, n, 1234);
  REQUIRE(s.points.rows() == n);
  const Eigen::RowVectorXd mean = s.points.colwise().mean();
  // standard error of the mean is sqrt(3.5/n) ~ 0.006
  CHECK(mean(0) == doctest::Approx(4.0).epsilon(0.01));
  CHECK(mean(1) == doctest::Approx(-1.0).epsilon(0.03));
  const Eigen::MatrixXd centered = s.points.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);
  CHECK(cov(0, 0) == doctest::Approx(3.5).epsilon(0.03));
  CHECK(cov(1, 1) == doctest::Approx(3.5).epsilon(0.03));
  CHECK(cov(0, 1) == doctest::Approx(0.5).epsilon(0.25));
}

TEST_CASE("sampling is deterministic in the seed") {
  const GaussianSpec g = GaussianSpec::standard(2);
  const SampleMatrix a = sample(g, 500, 99);
  const SampleMatrix b = sample(g, 500, 99);
  const SampleMatrix c = sample(g, 500, 100);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
  CHECK(a.seed == 99);
}

TEST_CASE("apply_drift composes translation, scaling and rotation") {
  const GaussianSpec base = GaussianSpec::standard(2);

  SUBCASE("pure scaling doubles variance quadratically") {
    DriftTransform t = DriftTransform::identity(2);
    t.scale_factors << 2, 1;
    const GaussianSpec out = apply_drift(base, t);
    CHECK(out.mean.isZero(0.0));
    CHECK(out.cov(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(out.cov(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out.cov(0, 1) == 0.0);
  }

  SUBCASE("scale then rotate reproduces the rotated covariance") {
    DriftTransform t = DriftTransform::identity(2);
    t.translation << 4, -1;
    t.scale_factors << 2, std::sqrt(3.0);
    t.rotation_deg = 45.0;
    const GaussianSpec out = apply_drift(base, t);
    CHECK(out.mean(0) == 4.0);
    CHECK(out.mean(1) == -1.0);
    CHECK(out.cov(0, 0) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(out.cov(1, 1) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(out.cov(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.cov(1, 0) == out.cov(0, 1));
  }

  SUBCASE("identity transform is a no-op") {
    const DriftTransform t = DriftTransform::identity(2);
    CHECK(t.is_identity());
    const GaussianSpec out = apply_drift(base, t);
    CHECK((out.mean - base.mean).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((out.cov - base.cov).lpNorm<Eigen::Infinity>() <= 1e-14);
  }

  SUBCASE("rotation preserves the covariance spectrum") {
    DriftTransform scaled = DriftTransform::identity(2);
    scaled.scale_factors << std::sqrt(3.0), std::sqrt(2.0);
    DriftTransform rotated = scaled;
    rotated.rotation_deg = 45.0;
    const GaussianSpec a = apply_drift(base, scaled);
    const GaussianSpec b = apply_drift(base, rotated);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a.cov), eb(b.cov);
    CHECK((ea.eigenvalues() - eb.eigenvalues()).lpNorm<Eigen::Infinity>() <=
          1e-12);
  }

  SUBCASE("4d rotation acts in the first two coordinates") {
    const GaussianSpec base4 = GaussianSpec::standard(4);
    DriftTransform t = DriftTransform::identity(4);
    t.scale_factors << std::sqrt(3.0), std::sqrt(2.0), std::sqrt(2.0),
        std::sqrt(3.0);
    t.rotation_deg = 45.0;
    const GaussianSpec out = apply_drift(base4, t);
    Eigen::MatrixXd want(4, 4);
    want << 2.5, 0.5, 0, 0, 0.5, 2.5, 0, 0, 0, 0, 2, 0, 0, 0, 0, 3;
    CHECK((out.cov - want).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("validation rejects malformed inputs") {
  SUBCASE("asymmetric covariance") {
    GaussianSpec g = GaussianSpec::standard(2);
    g.cov(0, 1) = 0.5;  // (1,0) stays 0
    CHECK_THROWS_AS(g.validate(), factorization_error);
  }
  SUBCASE("non-positive-definite covariance") {
    GaussianSpec g = GaussianSpec::standard(2);
    g.cov << 1, 2, 2, 1;
    CHECK_THROWS_AS(g.validate(), factorization_error);
    CHECK_THROWS_AS(g.cholesky_lower(), factorization_error);
  }
  SUBCASE("shape mismatch") {
    GaussianSpec g;
    g.mean = Eigen::VectorXd::Zero(3);
    g.cov = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("non-positive scale factor") {
    DriftTransform t = DriftTransform::identity(2);
    t.scale_factors << 1, 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  }
  SUBCASE("rotation unsupported outside d in {2,4}") {
    DriftTransform t = DriftTransform::identity(3);
    t.rotation_deg = 30.0;
    CHECK_THROWS_AS(apply_drift(GaussianSpec::standard(3), t),
                    std::invalid_argument);
  }
}

TEST_CASE("seed derivation separates purposes") {
  const std::uint64_t master = 42;
  CHECK(derive_seed(master, "a") != derive_seed(master, "b"));
  CHECK(derive_seed(master, "a") == derive_seed(master, "a"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
}
