#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "driftbench/classifiers/classifier.hpp"
#include "driftbench/gauss.hpp"
#include "driftbench/labeling.hpp"
#include "driftbench/metrics.hpp"
#include "driftbench/regions.hpp"

namespace driftbench {

/// One catalog entry: a drift applied to the standard-normal training
/// density plus the posterior function shared by all three datasets.
struct ExperimentSpec {
  std::string id;
  int dim = 2;
  DriftTransform drift;
  PosteriorKind posterior = PosteriorKind::f1;
  int n_train = 20000;
  int n_test_same = 20000;
  int n_test_drifted = 20000;
  int n_region_eval = 10000;  // per region

  GaussianSpec train_density() const { return GaussianSpec::standard(dim); }
  GaussianSpec test_density() const {
    return apply_drift(train_density(), drift);
  }
  void validate() const;
};

/// The 18 experiment ids, Exp1.1..Exp1.12 then Exp2.1..Exp2.6.
const std::vector<std::string>& catalog_ids();

/// Published parameterization for an id; throws std::invalid_argument on
/// an unknown id.
ExperimentSpec catalog(const std::string& id);

/// Overall evaluation cell for one (experiment, model) pair.
struct ModelCell {
  std::string model;
  MetricBundle same;
  MetricBundle drifted;
  double degradation_accuracy = 0;
  double degradation_f1 = 0;
  double degradation_mcc = 0;
};

/// Per-region metric bundles for one model. R1 is the region where the
/// test-to-training density ratio is <= 1.
struct RegionCell {
  std::string model;
  MetricBundle r1;
  MetricBundle r2;
};

/// Per-quartile accuracy for one model over the combined region sample.
struct QuartileCell {
  std::string model;
  std::array<double, 4> accuracy{};
};

struct QuartileFragment {
  std::array<double, 5> summary{};  // min, Q1, median, Q3, max of the ratio
  std::array<int, 4> bin_counts{};
  bool degenerate = false;  // some quartile bin is empty
  std::vector<QuartileCell> per_model;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ModelCell> overall;
  std::vector<RegionCell> regions;
  QuartileFragment quartiles;
};

struct RunMeta {
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;
  std::string config_hash;
  int reps = 1;
};

struct EvalReport {
  RunMeta meta;
  std::vector<ExperimentReport> experiments;
};

/// A model kind paired with its trained instance.
struct TrainedModel {
  ClassifierConfig config;
  std::unique_ptr<Model> model;
};

/// Thrown when rejection sampling cannot fill a region within the
/// oversampling cap (e.g. R2 under an identity drift).
struct region_starvation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Labeled points with their density ratios, per region, drawn from the
/// drifted distribution.
struct RegionSamples {
  LabeledDataset r1;
  LabeledDataset r2;
  std::vector<double> ratios_r1;
  std::vector<double> ratios_r2;
};

/// Trains every configured model on the dataset; per-model seeds are
/// derived from (seed, experiment id, model name).
std::vector<TrainedModel> train_models(
    const ExperimentSpec& spec, const std::vector<ClassifierConfig>& configs,
    const LabeledDataset& train_set, std::uint64_t seed);

/// Rejection-samples the drifted density until each region holds
/// spec.n_region_eval labeled points (cap: 100x oversampling, then a
/// region_starvation_error naming the starved region) and evaluates each
/// trained model per region.
std::vector<RegionCell> run_region_eval(const ExperimentSpec& spec,
                                        const std::vector<TrainedModel>& models,
                                        std::uint64_t seed,
                                        RegionSamples* out_samples = nullptr);

/// Quartile summary of the combined region-sample ratios plus per-model
/// per-bin accuracy. Flags degeneracy when a bin is empty.
QuartileFragment run_quartile_eval(const ExperimentSpec& spec,
                                   const std::vector<TrainedModel>& models,
                                   const RegionSamples& samples);

/// End-to-end single-seed run of one experiment: sample and label the
/// three datasets with one posterior function, train the models, and fill
/// the overall, region and quartile fragments. Deterministic given seed.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<ClassifierConfig>& models,
                                std::uint64_t seed);

struct RunOptions {
  std::vector<std::string> experiment_ids;  // empty => full catalog
  std::vector<ClassifierKind> model_kinds;  // empty => all five
  std::uint64_t seed = 0;
  int reps = 1;
  std::optional<int> n_train;
  std::optional<int> n_test;
  std::optional<int> n_region;
  int threads = 0;  // 0 => hardware concurrency

  void validate() const;
  std::vector<ExperimentSpec> resolve_specs() const;
  std::vector<ClassifierConfig> resolve_models() const;
};

/// Runs the configured experiments with a bounded worker pool. With
/// reps > 1 each repetition uses an independently derived seed.
std::vector<EvalReport> run_suite(const RunOptions& options);

nlohmann::json report_to_json(const EvalReport& report);

/// Element-wise mean of structurally identical single-rep reports, with a
/// parallel "experiments_std" tree of standard deviations when there is
/// more than one repetition. Timestamp is taken from the first report.
nlohmann::json aggregate_reports(const std::vector<nlohmann::json>& reports);

/// One row per (experiment, model): same/drifted/degradation x acc/f1/mcc.
std::string report_to_csv(const nlohmann::json& report);

std::string toolkit_version();

}  // namespace driftbench
