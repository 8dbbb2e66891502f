#include "driftbench/classifiers/classifier.hpp"

#include <nlohmann/json.hpp>

#include "driftbench/classifiers/forest.hpp"
#include "driftbench/classifiers/knn.hpp"
#include "driftbench/classifiers/logistic.hpp"
#include "driftbench/classifiers/naive_bayes.hpp"
#include "driftbench/classifiers/svm.hpp"

namespace driftbench {

std::string classifier_kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::svm: return "svm";
    case ClassifierKind::logistic: return "lr";
    case ClassifierKind::random_forest: return "rf";
    case ClassifierKind::naive_bayes: return "gnb";
    case ClassifierKind::knn: return "knn";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier_kind(const std::string& name) {
  if (name == "svm") return ClassifierKind::svm;
  if (name == "lr") return ClassifierKind::logistic;
  if (name == "rf") return ClassifierKind::random_forest;
  if (name == "gnb") return ClassifierKind::naive_bayes;
  if (name == "knn") return ClassifierKind::knn;
  return std::nullopt;
}

void ClassifierConfig::validate() const {
  if (svm_c <= 0 || lr_c <= 0) {
    throw std::invalid_argument("ClassifierConfig: C must be > 0");
  }
  if (knn_k < 1 || knn_k % 2 == 0) {
    throw std::invalid_argument("ClassifierConfig: k must be odd and >= 1");
  }
  if (rf_trees < 1) {
    throw std::invalid_argument("ClassifierConfig: tree count must be >= 1");
  }
}

ClassifierConfig ClassifierConfig::make(ClassifierKind kind) {
  ClassifierConfig c;
  c.kind = kind;
  return c;
}

void Model::check_dim(const Eigen::MatrixXd& points) const {
  if (points.cols() != dim()) {
    throw std::invalid_argument("predict: point dimension mismatch");
  }
}

std::unique_ptr<Model> train(const ClassifierConfig& config,
                             const LabeledDataset& data, std::uint64_t seed) {
  config.validate();
  if (data.size() == 0 || data.dim() == 0) {
    throw std::invalid_argument("train: empty dataset");
  }
  if (!data.points.allFinite()) {
    throw std::invalid_argument("train: non-finite features");
  }
  switch (config.kind) {
    case ClassifierKind::svm: return train_svm(config, data);
    case ClassifierKind::logistic: return train_logistic(config, data);
    case ClassifierKind::random_forest: return train_forest(config, data, seed);
    case ClassifierKind::naive_bayes: return train_naive_bayes(config, data);
    case ClassifierKind::knn: return train_knn(config, data);
  }
  throw std::logic_error("train: unknown classifier kind");
}

std::unique_ptr<Model> model_from_json(const nlohmann::json& doc) {
  const auto kind = parse_classifier_kind(doc.at("kind").get<std::string>());
  if (!kind) {
    throw std::invalid_argument("model_from_json: unknown kind");
  }
  switch (*kind) {
    case ClassifierKind::svm: return SvmModel::from_json(doc);
    case ClassifierKind::logistic: return LogisticModel::from_json(doc);
    case ClassifierKind::random_forest: return ForestModel::from_json(doc);
    case ClassifierKind::naive_bayes: return GaussianNbModel::from_json(doc);
    case ClassifierKind::knn: return KnnModel::from_json(doc);
  }
  throw std::logic_error("model_from_json: unreachable");
}

}  // namespace driftbench
