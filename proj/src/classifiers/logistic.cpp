#include "driftbench/classifiers/logistic.hpp"

#include <cmath>

namespace driftbench {

namespace {

double log1p_exp(double t) {
  // log(1 + exp(t)) without overflow
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, double b, double c) {
  const Eigen::VectorXd margins = (x * w).array() + b;
  double loss = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    loss += log1p_exp(-y(i) * margins(i));
  }
  return 0.5 * w.squaredNorm() + c * loss;
}

}  // namespace

std::unique_ptr<LogisticModel> train_logistic(const ClassifierConfig& config,
                                              const LabeledDataset& data) {
  const int n = data.size();
  const int d = data.dim();
  bool has_pos = false, has_neg = false;
  for (int i = 0; i < n; ++i) {
    (data.labels(i) == +1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("train_logistic: both classes must be present");
  }

  const Eigen::MatrixXd& x = data.points;
  const Eigen::VectorXd y = data.labels.cast<double>();
  const double c = config.lr_c;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0;
  double obj = objective(x, y, w, b, c);

  for (int it = 0; it < config.lr_max_iter; ++it) {
    const Eigen::VectorXd margins = (x * w).array() + b;
    // sigma(-y f) and the Hessian weights sigma(1 - sigma)
    Eigen::VectorXd s(n), h(n);
    for (int i = 0; i < n; ++i) {
      const double sig = 1.0 / (1.0 + std::exp(y(i) * margins(i)));
      s(i) = sig;
      h(i) = sig * (1.0 - sig);
    }
    Eigen::VectorXd grad_w = w - c * (x.transpose() * (y.array() * s.array()).matrix());
    const double grad_b = -c * (y.array() * s.array()).sum();

    Eigen::VectorXd grad(d + 1);
    grad.head(d) = grad_w;
    grad(d) = grad_b;
    if (grad.lpNorm<Eigen::Infinity>() <= config.lr_tol) break;

    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d + 1, d + 1);
    hess.topLeftCorner(d, d) =
        c * (x.transpose() * h.asDiagonal() * x) +
        Eigen::MatrixXd::Identity(d, d);
    const Eigen::VectorXd xh = x.transpose() * h;
    hess.block(0, d, d, 1) = c * xh;
    hess.block(d, 0, 1, d) = c * xh.transpose();
    hess(d, d) = c * h.sum() + 1e-12;

    Eigen::VectorXd step = hess.ldlt().solve(grad);

    // Backtracking keeps the full Newton step whenever it decreases the
    // objective.
    double t = 1.0;
    for (int ls = 0; ls < 50; ++ls) {
      const Eigen::VectorXd w_new = w - t * step.head(d);
      const double b_new = b - t * step(d);
      const double obj_new = objective(x, y, w_new, b_new, c);
      if (obj_new <= obj) {
        w = w_new;
        b = b_new;
        obj = obj_new;
        break;
      }
      t *= 0.5;
    }
  }
  return std::make_unique<LogisticModel>(std::move(w), b);
}

Eigen::VectorXi LogisticModel::predict(const Eigen::MatrixXd& points) const {
  check_dim(points);
  const Eigen::VectorXd f = (points * weights_).array() + intercept_;
  Eigen::VectorXi labels(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    // sigma(f) > 1/2 <=> f > 0
    labels(i) = f(i) > 0 ? +1 : -1;
  }
  return labels;
}

nlohmann::json LogisticModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["kind"] = classifier_kind_name(kind());
  doc["weights"] =
      std::vector<double>(weights_.data(), weights_.data() + weights_.size());
  doc["intercept"] = intercept_;
  return doc;
}

std::unique_ptr<LogisticModel> LogisticModel::from_json(
    const nlohmann::json& doc) {
  const auto w_v = doc.at("weights").get<std::vector<double>>();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(w_v.data(), w_v.size());
  return std::make_unique<LogisticModel>(std::move(w),
                                         doc.at("intercept").get<double>());
}

}  // namespace driftbench
