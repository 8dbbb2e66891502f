#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "driftbench/classifiers/forest.hpp"
#include "driftbench/classifiers/knn.hpp"
#include "driftbench/classifiers/logistic.hpp"
#include "driftbench/classifiers/naive_bayes.hpp"
#include "driftbench/classifiers/svm.hpp"
#include "driftbench/labeling.hpp"
#include "driftbench/rng.hpp"

using namespace driftbench;

namespace {

// Two well-separated 2D blobs, labels by the blob.
LabeledDataset blobs(int n_per_class, std::uint64_t seed, double gap = 6.0) {
  Rng rng(seed);
  LabeledDataset d;
  const int n = 2 * n_per_class;
  d.points.resize(n, 2);
  d.labels.resize(n);
  d.posterior_values = Eigen::VectorXd::Constant(n, 0.5);
  for (int i = 0; i < n; ++i) {
    const int label = i < n_per_class ? +1 : -1;
    d.points(i, 0) = rng.normal() + (label > 0 ? gap / 2 : -gap / 2);
    d.points(i, 1) = rng.normal();
    d.labels(i) = label;
  }
  return d;
}

LabeledDataset one_dim(std::initializer_list<double> pos,
                       std::initializer_list<double> neg) {
  LabeledDataset d;
  const int n = static_cast<int>(pos.size() + neg.size());
  d.points.resize(n, 1);
  d.labels.resize(n);
  d.posterior_values = Eigen::VectorXd::Constant(n, 0.5);
  int i = 0;
  for (double x : pos) {
    d.points(i, 0) = x;
    d.labels(i++) = +1;
  }
  for (double x : neg) {
    d.points(i, 0) = x;
    d.labels(i++) = -1;
  }
  return d;
}

double train_accuracy(const Model& m, const LabeledDataset& d) {
  const Eigen::VectorXi p = m.predict(d.points);
  int ok = 0;
  for (int i = 0; i < d.size(); ++i) ok += p(i) == d.labels(i);
  return static_cast<double>(ok) / d.size();
}

}  // namespace

TEST_CASE("config validation") {
  ClassifierConfig c = ClassifierConfig::make(ClassifierKind::knn);
  CHECK_NOTHROW(c.validate());
  c.knn_k = 4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ClassifierConfig::make(ClassifierKind::svm);
  c.svm_c = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ClassifierConfig::make(ClassifierKind::random_forest);
  c.rf_trees = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(classifier_kind_name(ClassifierKind::naive_bayes) == "gnb");
  CHECK(parse_classifier_kind("rf") == ClassifierKind::random_forest);
  CHECK_FALSE(parse_classifier_kind("mlp").has_value());
}

TEST_CASE("train dispatcher rejects bad data") {
  const ClassifierConfig c = ClassifierConfig::make(ClassifierKind::naive_bayes);
  LabeledDataset empty;
  empty.points.resize(0, 2);
  empty.labels.resize(0);
  CHECK_THROWS_AS(train(c, empty, 1), std::invalid_argument);
  LabeledDataset bad = blobs(5, 1);
  bad.points(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(train(c, bad, 1), std::invalid_argument);
}

TEST_CASE("gaussian naive bayes closed-form fit on 1D data") {
  const LabeledDataset d = one_dim({1, 2, 3}, {-1, -2, -3});
  const auto model =
      train_naive_bayes(ClassifierConfig::make(ClassifierKind::naive_bayes), d);
  REQUIRE(model->classes().size() == 2);
  const auto& pos = model->classes()[0];
  const auto& neg = model->classes()[1];
  CHECK(pos.label == +1);
  CHECK(pos.mean(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(neg.mean(0) == doctest::Approx(-2.0).epsilon(1e-15));
  // biased (maximum-likelihood) variance plus the tiny smoothing term
  CHECK(pos.var(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(pos.log_prior == doctest::Approx(std::log(0.5)).epsilon(1e-15));

  Eigen::MatrixXd probe(3, 1);
  probe << 0.0, 1.0, -1.0;
  const Eigen::VectorXi out = model->predict(probe);
  CHECK(out(0) == +1);  // symmetric tie -> documented tie-break
  CHECK(out(1) == +1);
  CHECK(out(2) == -1);
}

TEST_CASE("knn memorizes and reproduces training labels at k=1") {
  const LabeledDataset d = blobs(50, 3);
  ClassifierConfig c = ClassifierConfig::make(ClassifierKind::knn);
  c.knn_k = 1;
  const auto model = train_knn(c, d);
  CHECK(model->stored_count() == d.size());
  CHECK(train_accuracy(*model, d) == 1.0);
  c.knn_k = 999;
  CHECK_THROWS_AS(train_knn(c, d), std::invalid_argument);
}

TEST_CASE("knn distance ties break to the lower training index") {
  LabeledDataset d;
  d.points.resize(2, 1);
  d.points << 1.0, -1.0;  // equidistant from the origin
  d.labels.resize(2);
  d.labels << -1, +1;
  d.posterior_values = Eigen::VectorXd::Constant(2, 0.5);
  ClassifierConfig c = ClassifierConfig::make(ClassifierKind::knn);
  c.knn_k = 1;
  const auto model = train_knn(c, d);
  Eigen::MatrixXd probe(1, 1);
  probe << 0.0;
  CHECK(model->predict(probe)(0) == -1);  // index 0 wins the tie
}

TEST_CASE("logistic regression separates blobs") {
  const LabeledDataset d = blobs(100, 5);
  const auto model =
      train_logistic(ClassifierConfig::make(ClassifierKind::logistic), d);
  CHECK(train_accuracy(*model, d) >= 0.99);
  CHECK(model->weights()(0) > 0.0);  // class +1 sits at positive x1
}

TEST_CASE("random forest interpolates separable data") {
  const LabeledDataset d = blobs(250, 7);
  const auto model =
      train_forest(ClassifierConfig::make(ClassifierKind::random_forest), d, 11);
  CHECK(train_accuracy(*model, d) >= 0.99);
}

TEST_CASE("svm satisfies the dual exit conditions") {
  const LabeledDataset d = blobs(200, 9, 2.0);  // overlapping enough for SVs
  SvmTrainInfo info;
  const ClassifierConfig c = ClassifierConfig::make(ClassifierKind::svm);
  const auto model = train_svm(c, d, &info);
  CHECK(info.converged);
  CHECK(info.dual_gap < c.svm_tol);
  CHECK(info.equality_residual <= 1e-6);
  // dual coefficients are alpha_i y_i with 0 <= alpha_i <= C
  for (Eigen::Index i = 0; i < model->dual_coef().size(); ++i) {
    CHECK(std::abs(model->dual_coef()(i)) <= c.svm_c + 1e-12);
    CHECK(model->dual_coef()(i) != 0.0);
  }
  // blob means sit one unit from the boundary, so the Bayes rate is ~0.84
  CHECK(train_accuracy(*model, d) >= 0.75);
}

TEST_CASE("tiny-instance oracle: knn and gnb match hand computation") {
  // 6 one-dimensional points; brute-force oracle evaluated on a 41-grid
  const LabeledDataset d = one_dim({-0.5, 1.0, 2.0}, {0.5, -1.5, -2.5});
  Eigen::MatrixXd grid(41, 1);
  for (int i = 0; i < 41; ++i) grid(i, 0) = -4.0 + 0.2 * i;

  SUBCASE("knn k=3") {
    ClassifierConfig c = ClassifierConfig::make(ClassifierKind::knn);
    c.knn_k = 3;
    const auto model = train_knn(c, d);
    const Eigen::VectorXi got = model->predict(grid);
    for (int i = 0; i < 41; ++i) {
      // oracle: sort (distance, index) pairs exhaustively
      std::vector<std::pair<double, int>> ds;
      for (int j = 0; j < d.size(); ++j) {
        ds.emplace_back(std::abs(grid(i, 0) - d.points(j, 0)), j);
      }
      std::sort(ds.begin(), ds.end());
      int vote = 0;
      for (int j = 0; j < 3; ++j) vote += d.labels(ds[j].second);
      CHECK(got(i) == (vote >= 0 ? +1 : -1));
    }
  }

  SUBCASE("gnb") {
    const auto model = train_naive_bayes(
        ClassifierConfig::make(ClassifierKind::naive_bayes), d);
    // oracle: explicit Gaussian log-likelihood per class
    auto oracle = [&](double x) {
      auto ll = [&](double mean, double var) {
        return std::log(0.5) - 0.5 * std::log(2.0 * M_PI * var) -
               (x - mean) * (x - mean) / (2.0 * var);
      };
      const double mp = (-0.5 + 1.0 + 2.0) / 3.0;
      const double mn = (0.5 - 1.5 - 2.5) / 3.0;
      auto var3 = [](double a, double b, double c, double m) {
        return ((a - m) * (a - m) + (b - m) * (b - m) + (c - m) * (c - m)) / 3.0;
      };
      const double vmax = std::max(var3(-0.5, 1, 2, mp), var3(0.5, -1.5, -2.5, mn));
      const double eps = 1e-9 * vmax;
      const double lp = ll(mp, var3(-0.5, 1, 2, mp) + eps);
      const double ln = ll(mn, var3(0.5, -1.5, -2.5, mn) + eps);
      return lp >= ln ? +1 : -1;
    };
    const Eigen::VectorXi got = model->predict(grid);
    for (int i = 0; i < 41; ++i) CHECK(got(i) == oracle(grid(i, 0)));
  }
}

TEST_CASE("determinism and permutation invariance") {
  const LabeledDataset d = blobs(150, 13, 3.0);
  Eigen::MatrixXd probe = blobs(100, 14, 3.0).points;

  SUBCASE("random forest is deterministic at fixed seed") {
    const auto a = train(ClassifierConfig::make(ClassifierKind::random_forest),
                         d, 21);
    const auto b = train(ClassifierConfig::make(ClassifierKind::random_forest),
                         d, 21);
    const auto c = train(ClassifierConfig::make(ClassifierKind::random_forest),
                         d, 22);
    CHECK(a->predict(probe) == b->predict(probe));
    // a different seed draws different bootstraps; the predictions may
    // coincide but the serialized forests must differ
    CHECK(a->to_json() != c->to_json());
  }

  SUBCASE("gnb and lr are invariant to training order") {
    LabeledDataset shuffled = d;
    Rng rng(31);
    for (int i = d.size() - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.below(i + 1));
      shuffled.points.row(i).swap(shuffled.points.row(j));
      std::swap(shuffled.labels(i), shuffled.labels(j));
    }
    for (const auto kind :
         {ClassifierKind::naive_bayes, ClassifierKind::logistic}) {
      const auto a = train(ClassifierConfig::make(kind), d, 1);
      const auto b = train(ClassifierConfig::make(kind), shuffled, 1);
      CHECK(a->predict(probe) == b->predict(probe));
    }
  }
}

TEST_CASE("json round-trip reproduces predictions for every family") {
  const LabeledDataset d = blobs(120, 41, 2.5);
  const Eigen::MatrixXd probe = blobs(80, 42, 2.5).points;
  for (const auto kind :
       {ClassifierKind::svm, ClassifierKind::logistic,
        ClassifierKind::random_forest, ClassifierKind::naive_bayes,
        ClassifierKind::knn}) {
    const auto model = train(ClassifierConfig::make(kind), d, 5);
    const nlohmann::json doc = model->to_json();
    CHECK(doc.at("format_version") == 1);
    CHECK(doc.at("kind") == classifier_kind_name(kind));
    const auto restored = model_from_json(doc);
    CHECK(restored->kind() == kind);
    CHECK(restored->dim() == 2);
    CHECK(model->predict(probe) == restored->predict(probe));
  }
  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"kind", "bogus"}}),
                  std::invalid_argument);
}

TEST_CASE("predict rejects dimension mismatch") {
  const LabeledDataset d = blobs(30, 51);
  const auto model = train(ClassifierConfig::make(ClassifierKind::knn), d, 1);
  Eigen::MatrixXd probe(2, 3);
  probe.setZero();
  CHECK_THROWS_AS(model->predict(probe), std::invalid_argument);
}
