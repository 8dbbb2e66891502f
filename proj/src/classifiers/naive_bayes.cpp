#include "driftbench/classifiers/naive_bayes.hpp"

#include <cmath>

namespace driftbench {

std::unique_ptr<GaussianNbModel> train_naive_bayes(
    const ClassifierConfig& config, const LabeledDataset& data) {
  const int n = data.size();
  const int d = data.dim();
  if (n == 0) {
    throw std::invalid_argument("train_naive_bayes: empty dataset");
  }

  // Smoothing floor: factor times the largest pooled feature variance.
  const Eigen::RowVectorXd pooled_mean = data.points.colwise().mean();
  const Eigen::RowVectorXd pooled_var =
      (data.points.rowwise() - pooled_mean).array().square().colwise().sum() /
      static_cast<double>(n);
  const double eps = config.gnb_smoothing * pooled_var.maxCoeff();

  std::vector<GaussianNbModel::ClassStats> classes;
  for (int label : {+1, -1}) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (data.labels(i) == label) ++count;
    }
    if (count == 0) continue;
    GaussianNbModel::ClassStats cs;
    cs.label = label;
    cs.log_prior = std::log(static_cast<double>(count) / n);
    cs.mean = Eigen::VectorXd::Zero(d);
    cs.var = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) {
      if (data.labels(i) == label) cs.mean += data.points.row(i).transpose();
    }
    cs.mean /= count;
    for (int i = 0; i < n; ++i) {
      if (data.labels(i) == label) {
        cs.var += (data.points.row(i).transpose() - cs.mean).array().square().matrix();
      }
    }
    cs.var = (cs.var / count).array() + eps;
    classes.push_back(std::move(cs));
  }
  return std::make_unique<GaussianNbModel>(std::move(classes), d);
}

Eigen::VectorXi GaussianNbModel::predict(const Eigen::MatrixXd& points) const {
  check_dim(points);
  const int n = static_cast<int>(points.rows());
  Eigen::VectorXi labels(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = points.row(i).transpose();
    double best_ll = -std::numeric_limits<double>::infinity();
    int best_label = +1;
    for (const auto& cs : classes_) {
      const double ll =
          cs.log_prior -
          0.5 * (cs.var.array().log() + std::log(2.0 * M_PI) +
                 (x - cs.mean).array().square() / cs.var.array())
                    .sum();
      // tie at equal log-posterior resolves to +1 (classes_ lists +1 first)
      if (ll > best_ll) {
        best_ll = ll;
        best_label = cs.label;
      }
    }
    labels(i) = best_label;
  }
  return labels;
}

nlohmann::json GaussianNbModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["kind"] = classifier_kind_name(kind());
  doc["dim"] = dim_;
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& cs : classes_) {
    classes.push_back(
        {{"label", cs.label},
         {"log_prior", cs.log_prior},
         {"mean", std::vector<double>(cs.mean.data(),
                                      cs.mean.data() + cs.mean.size())},
         {"var", std::vector<double>(cs.var.data(),
                                     cs.var.data() + cs.var.size())}});
  }
  doc["classes"] = std::move(classes);
  return doc;
}

std::unique_ptr<GaussianNbModel> GaussianNbModel::from_json(
    const nlohmann::json& doc) {
  std::vector<ClassStats> classes;
  for (const auto& c : doc.at("classes")) {
    ClassStats cs;
    cs.label = c.at("label").get<int>();
    cs.log_prior = c.at("log_prior").get<double>();
    const auto mean_v = c.at("mean").get<std::vector<double>>();
    const auto var_v = c.at("var").get<std::vector<double>>();
    cs.mean = Eigen::Map<const Eigen::VectorXd>(mean_v.data(), mean_v.size());
    cs.var = Eigen::Map<const Eigen::VectorXd>(var_v.data(), var_v.size());
    classes.push_back(std::move(cs));
  }
  return std::make_unique<GaussianNbModel>(std::move(classes),
                                           doc.at("dim").get<int>());
}

}  // namespace driftbench
