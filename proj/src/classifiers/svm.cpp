#include "driftbench/classifiers/svm.hpp"

#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>
#include <vector>

namespace driftbench {

namespace {

constexpr double kTau = 1e-12;

/// Bounded LRU cache of RBF kernel rows, stored as float to double the
/// number of resident rows.
class KernelCache {
 public:
  KernelCache(const Eigen::MatrixXd& x, double gamma, double cache_mb)
      : x_(x), gamma_(gamma), n_(static_cast<int>(x.rows())) {
    sq_norms_ = x_.rowwise().squaredNorm();
    const double row_bytes = static_cast<double>(n_) * sizeof(float);
    max_rows_ = static_cast<std::size_t>(
        std::max(2.0, cache_mb * 1024.0 * 1024.0 / row_bytes));
  }

  const float* row(int t) {
    auto it = index_.find(t);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->data.data();
    }
    if (lru_.size() >= max_rows_) {
      index_.erase(lru_.back().id);
      lru_.pop_back();
    }
    lru_.emplace_front();
    Entry& e = lru_.front();
    e.id = t;
    e.data.resize(n_);
    const Eigen::VectorXd dots = x_ * x_.row(t).transpose();
    const double sqt = sq_norms_(t);
    for (int s = 0; s < n_; ++s) {
      e.data[s] = static_cast<float>(
          std::exp(-gamma_ * (sqt + sq_norms_(s) - 2.0 * dots(s))));
    }
    index_[t] = lru_.begin();
    return e.data.data();
  }

 private:
  struct Entry {
    int id = -1;
    std::vector<float> data;
  };
  const Eigen::MatrixXd& x_;
  double gamma_;
  int n_;
  Eigen::VectorXd sq_norms_;
  std::size_t max_rows_;
  std::list<Entry> lru_;
  std::unordered_map<int, std::list<Entry>::iterator> index_;
};

}  // namespace

std::unique_ptr<SvmModel> train_svm(const ClassifierConfig& config,
                                    const LabeledDataset& data,
                                    SvmTrainInfo* info) {
  const int n = data.size();
  const int d = data.dim();
  const double c = config.svm_c;

  bool has_pos = false, has_neg = false;
  for (int i = 0; i < n; ++i) {
    (data.labels(i) == +1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("train_svm: both classes must be present");
  }

  // "scale" gamma: 1 / (d * variance of the flattened feature array)
  const double mean_all = data.points.mean();
  const double var_all =
      (data.points.array() - mean_all).square().sum() /
      static_cast<double>(n * d);
  const double gamma = 1.0 / (static_cast<double>(d) * var_all);

  KernelCache cache(data.points, gamma, config.svm_cache_mb);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the dual objective
  const Eigen::VectorXi& y = data.labels;

  long iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (; iter < config.svm_max_iter; ++iter) {
    // Maximal violating pair.
    int i = -1, j = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
      const double yg = -static_cast<double>(y(t)) * grad[t];
      const bool in_up = (y(t) == +1) ? (alpha[t] < c) : (alpha[t] > 0);
      const bool in_low = (y(t) == +1) ? (alpha[t] > 0) : (alpha[t] < c);
      if (in_up && yg > gmax) {
        gmax = yg;
        i = t;
      }
      if (in_low && yg < gmin) {
        gmin = yg;
        j = t;
      }
    }
    gap = gmax - gmin;
    if (gap < config.svm_tol) break;

    const float* ki = cache.row(i);
    const float* kj = cache.row(j);
    const double kij = ki[j];
    const double quad = std::max(2.0 - 2.0 * kij, kTau);  // K_ii = K_jj = 1

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y(i) != y(j)) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else {
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = -diff;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = c + diff;
        }
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }

    const double dai = (alpha[i] - old_ai) * y(i);
    const double daj = (alpha[j] - old_aj) * y(j);
    for (int t = 0; t < n; ++t) {
      grad[t] += y(t) * (dai * ki[t] + daj * kj[t]);
    }
  }

  // Bias from the KKT conditions: average -y G over free vectors, or the
  // midpoint of the bound-derived interval when none are free.
  double sum_free = 0, ub = std::numeric_limits<double>::infinity(),
         lb = -std::numeric_limits<double>::infinity();
  int n_free = 0;
  for (int t = 0; t < n; ++t) {
    const double yg = static_cast<double>(y(t)) * grad[t];
    if (alpha[t] >= c - kTau) {
      (y(t) == -1 ? ub = std::min(ub, yg) : lb = std::max(lb, yg));
    } else if (alpha[t] <= kTau) {
      (y(t) == +1 ? ub = std::min(ub, yg) : lb = std::max(lb, yg));
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;

  if (info) {
    info->dual_gap = gap;
    info->iterations = iter;
    info->converged = gap < config.svm_tol;
    double eq = 0;
    for (int t = 0; t < n; ++t) eq += alpha[t] * y(t);
    info->equality_residual = std::abs(eq);
  }

  int n_sv = 0;
  for (int t = 0; t < n; ++t) {
    if (alpha[t] > 0) ++n_sv;
  }
  Eigen::MatrixXd sv(n_sv, d);
  Eigen::VectorXd coef(n_sv);
  for (int t = 0, s = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      sv.row(s) = data.points.row(t);
      coef(s) = alpha[t] * y(t);
      ++s;
    }
  }
  return std::make_unique<SvmModel>(std::move(sv), std::move(coef), -rho,
                                    gamma);
}

Eigen::VectorXd SvmModel::decision_function(
    const Eigen::MatrixXd& points) const {
  check_dim(points);
  const int n = static_cast<int>(points.rows());
  const Eigen::VectorXd sv_sq = support_vectors_.rowwise().squaredNorm();
  Eigen::VectorXd out(n);
  constexpr int kBlock = 512;
  for (int lo = 0; lo < n; lo += kBlock) {
    const int len = std::min(kBlock, n - lo);
    const Eigen::MatrixXd block = points.middleRows(lo, len);
    const Eigen::VectorXd bl_sq = block.rowwise().squaredNorm();
    // m x len squared distances via one GEMM
    Eigen::MatrixXd dist =
        (-2.0 * support_vectors_ * block.transpose()).colwise() + sv_sq;
    dist.rowwise() += bl_sq.transpose();
    out.segment(lo, len) =
        ((-gamma_ * dist.array()).exp().matrix().transpose() * dual_coef_)
            .array() +
        bias_;
  }
  return out;
}

Eigen::VectorXi SvmModel::predict(const Eigen::MatrixXd& points) const {
  const Eigen::VectorXd f = decision_function(points);
  Eigen::VectorXi labels(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    labels(i) = f(i) > 0 ? +1 : -1;
  }
  return labels;
}

nlohmann::json SvmModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["kind"] = classifier_kind_name(kind());
  doc["gamma"] = gamma_;
  doc["bias"] = bias_;
  doc["dual_coef"] = std::vector<double>(
      dual_coef_.data(), dual_coef_.data() + dual_coef_.size());
  std::vector<std::vector<double>> sv;
  for (Eigen::Index i = 0; i < support_vectors_.rows(); ++i) {
    sv.emplace_back(support_vectors_.row(i).begin(),
                    support_vectors_.row(i).end());
  }
  doc["support_vectors"] = sv;
  return doc;
}

std::unique_ptr<SvmModel> SvmModel::from_json(const nlohmann::json& doc) {
  const auto coef_v = doc.at("dual_coef").get<std::vector<double>>();
  const auto sv_v = doc.at("support_vectors")
                        .get<std::vector<std::vector<double>>>();
  const int m = static_cast<int>(sv_v.size());
  const int d = m > 0 ? static_cast<int>(sv_v[0].size()) : 0;
  Eigen::MatrixXd sv(m, d);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j) sv(i, j) = sv_v[i][j];
  }
  Eigen::VectorXd coef =
      Eigen::Map<const Eigen::VectorXd>(coef_v.data(), coef_v.size());
  return std::make_unique<SvmModel>(std::move(sv), std::move(coef),
                                    doc.at("bias").get<double>(),
                                    doc.at("gamma").get<double>());
}

}  // namespace driftbench
