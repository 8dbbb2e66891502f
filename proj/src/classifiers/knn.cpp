#include "driftbench/classifiers/knn.hpp"

#include <algorithm>
#include <vector>

namespace driftbench {

std::unique_ptr<KnnModel> train_knn(const ClassifierConfig& config,
                                    const LabeledDataset& data) {
  if (data.size() == 0) {
    throw std::invalid_argument("train_knn: empty dataset");
  }
  if (config.knn_k > data.size()) {
    throw std::invalid_argument("train_knn: k exceeds training size");
  }
  return std::make_unique<KnnModel>(data.points, data.labels, config.knn_k);
}

Eigen::VectorXi KnnModel::predict(const Eigen::MatrixXd& points) const {
  check_dim(points);
  const int n_test = static_cast<int>(points.rows());
  const int n_train = static_cast<int>(points_.rows());
  const Eigen::VectorXd train_sq = points_.rowwise().squaredNorm();
  Eigen::VectorXi labels(n_test);

  constexpr int kBlock = 256;
  std::vector<std::pair<double, int>> nearest(k_);
  for (int lo = 0; lo < n_test; lo += kBlock) {
    const int len = std::min(kBlock, n_test - lo);
    const Eigen::MatrixXd block = points.middleRows(lo, len);
    const Eigen::VectorXd block_sq = block.rowwise().squaredNorm();
    Eigen::MatrixXd dist =
        (-2.0 * points_ * block.transpose()).colwise() + train_sq;
    dist.rowwise() += block_sq.transpose();

    for (int c = 0; c < len; ++c) {
      // running sorted list of the k best (distance, index) pairs;
      // pair ordering gives the lower-index tie break
      int filled = 0;
      for (int t = 0; t < n_train; ++t) {
        const std::pair<double, int> cand(dist(t, c), t);
        if (filled == k_ && !(cand < nearest[k_ - 1])) continue;
        int pos = std::min(filled, k_ - 1);
        while (pos > 0 && cand < nearest[pos - 1]) {
          nearest[pos] = nearest[pos - 1];
          --pos;
        }
        nearest[pos] = cand;
        if (filled < k_) ++filled;
      }
      int vote = 0;
      for (int t = 0; t < k_; ++t) {
        vote += labels_(nearest[t].second);
      }
      labels(lo + c) = vote >= 0 ? +1 : -1;
    }
  }
  return labels;
}

nlohmann::json KnnModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["kind"] = classifier_kind_name(kind());
  doc["k"] = k_;
  std::vector<std::vector<double>> pts;
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    pts.emplace_back(points_.row(i).begin(), points_.row(i).end());
  }
  doc["points"] = pts;
  doc["labels"] =
      std::vector<int>(labels_.data(), labels_.data() + labels_.size());
  return doc;
}

std::unique_ptr<KnnModel> KnnModel::from_json(const nlohmann::json& doc) {
  const auto pts = doc.at("points").get<std::vector<std::vector<double>>>();
  const auto lab = doc.at("labels").get<std::vector<int>>();
  const int n = static_cast<int>(pts.size());
  const int d = n > 0 ? static_cast<int>(pts[0].size()) : 0;
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = pts[i][j];
    y(i) = lab[i];
  }
  return std::make_unique<KnnModel>(std::move(x), std::move(y),
                                    doc.at("k").get<int>());
}

}  // namespace driftbench
