#include "driftbench/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "driftbench/rng.hpp"

namespace driftbench {

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

ExperimentSpec make_spec(std::string id, int dim, PosteriorKind posterior,
                         Eigen::VectorXd translation,
                         Eigen::VectorXd scale_factors,
                         std::optional<double> rotation_deg) {
  ExperimentSpec spec;
  spec.id = std::move(id);
  spec.dim = dim;
  spec.posterior = posterior;
  spec.drift.translation = std::move(translation);
  spec.drift.scale_factors = std::move(scale_factors);
  spec.drift.rotation_deg = rotation_deg;
  return spec;
}

std::vector<ExperimentSpec> build_catalog() {
  const double r3 = std::sqrt(3.0);
  const double r2 = std::sqrt(2.0);
  using PK = PosteriorKind;
  const auto none2 = vec2(0, 0);
  const auto ones2 = vec2(1, 1);
  const auto none4 = vec4(0, 0, 0, 0);
  std::vector<ExperimentSpec> cat;
  // Two-dimensional family: odd ids use the tanh posterior, even the sine.
  cat.push_back(make_spec("Exp1.1", 2, PK::f1, vec2(3, 0), ones2, {}));
  cat.push_back(make_spec("Exp1.2", 2, PK::f2, vec2(3, 0), ones2, {}));
  cat.push_back(make_spec("Exp1.3", 2, PK::f1, vec2(3, 1), ones2, {}));
  cat.push_back(make_spec("Exp1.4", 2, PK::f2, vec2(3, 1), ones2, {}));
  cat.push_back(make_spec("Exp1.5", 2, PK::f1, none2, vec2(2, 1), {}));
  cat.push_back(make_spec("Exp1.6", 2, PK::f2, none2, vec2(2, 1), {}));
  cat.push_back(make_spec("Exp1.7", 2, PK::f1, none2, vec2(r3, r2), {}));
  cat.push_back(make_spec("Exp1.8", 2, PK::f2, none2, vec2(r3, r2), {}));
  cat.push_back(make_spec("Exp1.9", 2, PK::f1, vec2(3, 1), vec2(r3, r2), {}));
  cat.push_back(make_spec("Exp1.10", 2, PK::f2, vec2(3, 1), vec2(r3, r2), {}));
  cat.push_back(make_spec("Exp1.11", 2, PK::f1, vec2(4, -1), vec2(2, r3), 45.0));
  cat.push_back(make_spec("Exp1.12", 2, PK::f2, vec2(4, -1), vec2(2, r3), 45.0));
  // Four-dimensional family.
  const auto t4 = vec4(0, -2, -1, 1);
  const auto s4 = vec4(r3, r2, r2, r3);
  cat.push_back(make_spec("Exp2.1", 4, PK::f3, t4, vec4(1, 1, 1, 1), {}));
  cat.push_back(make_spec("Exp2.2", 4, PK::f4, t4, vec4(1, 1, 1, 1), {}));
  cat.push_back(make_spec("Exp2.3", 4, PK::f3, none4, s4, {}));
  cat.push_back(make_spec("Exp2.4", 4, PK::f4, none4, s4, {}));
  cat.push_back(make_spec("Exp2.5", 4, PK::f3, t4, s4, 45.0));
  cat.push_back(make_spec("Exp2.6", 4, PK::f4, t4, s4, 45.0));
  return cat;
}

const std::vector<ExperimentSpec>& full_catalog() {
  static const std::vector<ExperimentSpec> cat = build_catalog();
  return cat;
}

std::uint64_t exp_seed(const ExperimentSpec& spec, std::uint64_t master,
                       std::string_view purpose) {
  return derive_seed(master, spec.id + "/" + std::string(purpose));
}

ModelCell evaluate_overall(const TrainedModel& tm, const LabeledDataset& same,
                           const LabeledDataset& drifted) {
  ModelCell cell;
  cell.model = classifier_kind_name(tm.config.kind);
  cell.same = compute_metrics(
      ConfusionCounts::from_labels(same.labels, tm.model->predict(same.points)));
  cell.drifted = compute_metrics(ConfusionCounts::from_labels(
      drifted.labels, tm.model->predict(drifted.points)));
  cell.degradation_accuracy =
      degradation_rate(cell.same.accuracy, cell.drifted.accuracy);
  cell.degradation_f1 = degradation_rate(cell.same.f1, cell.drifted.f1);
  cell.degradation_mcc = degradation_rate(cell.same.mcc, cell.drifted.mcc);
  return cell;
}

nlohmann::json bundle_to_json(const MetricBundle& b) {
  return {{"accuracy", b.accuracy},
          {"f1", b.f1},
          {"mcc", b.mcc},
          {"f1_degenerate", b.f1_degenerate},
          {"mcc_degenerate", b.mcc_degenerate}};
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json drift;
  drift["translation"] = std::vector<double>(
      spec.drift.translation.data(),
      spec.drift.translation.data() + spec.drift.translation.size());
  drift["scale_factors"] = std::vector<double>(
      spec.drift.scale_factors.data(),
      spec.drift.scale_factors.data() + spec.drift.scale_factors.size());
  if (spec.drift.rotation_deg) {
    drift["rotation_deg"] = *spec.drift.rotation_deg;
  } else {
    drift["rotation_deg"] = nullptr;
  }
  return {{"id", spec.id},
          {"dim", spec.dim},
          {"drift", drift},
          {"posterior", posterior_name(spec.posterior)},
          {"n_train", spec.n_train},
          {"n_test_same", spec.n_test_same},
          {"n_test_drifted", spec.n_test_drifted},
          {"n_region_eval", spec.n_region_eval}};
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Element-wise combination of structurally identical JSON trees.
nlohmann::json combine_nodes(const std::vector<const nlohmann::json*>& nodes,
                             bool want_std) {
  const nlohmann::json& head = *nodes.front();
  if (head.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = head.begin(); it != head.end(); ++it) {
      std::vector<const nlohmann::json*> child;
      child.reserve(nodes.size());
      for (const auto* n : nodes) child.push_back(&n->at(it.key()));
      out[it.key()] = combine_nodes(child, want_std);
    }
    return out;
  }
  if (head.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < head.size(); ++i) {
      std::vector<const nlohmann::json*> child;
      child.reserve(nodes.size());
      for (const auto* n : nodes) child.push_back(&n->at(i));
      out.push_back(combine_nodes(child, want_std));
    }
    return out;
  }
  if (head.is_boolean()) {
    bool any = false;
    for (const auto* n : nodes) any = any || n->get<bool>();
    return want_std ? nlohmann::json(false) : nlohmann::json(any);
  }
  if (head.is_number()) {
    bool all_equal = true;
    for (const auto* n : nodes) all_equal = all_equal && (*n == head);
    if (all_equal && !want_std) return head;
    const double n = static_cast<double>(nodes.size());
    double mean = 0;
    for (const auto* p : nodes) mean += p->get<double>();
    mean /= n;
    if (!want_std) return mean;
    if (nodes.size() < 2) return 0.0;
    double ss = 0;
    for (const auto* p : nodes) {
      const double d = p->get<double>() - mean;
      ss += d * d;
    }
    return std::sqrt(ss / (n - 1.0));
  }
  return head;  // strings, nulls: keep the first
}

}  // namespace

void ExperimentSpec::validate() const {
  if (dim != 2 && dim != 4) {
    throw std::invalid_argument("ExperimentSpec: dim must be 2 or 4");
  }
  if (posterior_dim(posterior) != dim) {
    throw std::invalid_argument(
        "ExperimentSpec: posterior dimension does not match dim");
  }
  if (n_train <= 0 || n_test_same <= 0 || n_test_drifted <= 0 ||
      n_region_eval <= 0) {
    throw std::invalid_argument("ExperimentSpec: sample sizes must be positive");
  }
  drift.validate();
  if (drift.translation.size() != dim || drift.scale_factors.size() != dim) {
    throw std::invalid_argument("ExperimentSpec: drift dimension mismatch");
  }
}

const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& spec : full_catalog()) v.push_back(spec.id);
    return v;
  }();
  return ids;
}

ExperimentSpec catalog(const std::string& id) {
  for (const auto& spec : full_catalog()) {
    if (spec.id == id) return spec;
  }
  throw std::invalid_argument("unknown experiment id: " + id);
}

std::vector<TrainedModel> train_models(
    const ExperimentSpec& spec, const std::vector<ClassifierConfig>& configs,
    const LabeledDataset& train_set, std::uint64_t seed) {
  std::vector<TrainedModel> models;
  models.reserve(configs.size());
  for (const auto& config : configs) {
    const std::uint64_t child = exp_seed(
        spec, seed, "train/" + classifier_kind_name(config.kind));
    models.push_back({config, train(config, train_set, child)});
  }
  return models;
}

std::vector<RegionCell> run_region_eval(const ExperimentSpec& spec,
                                        const std::vector<TrainedModel>& models,
                                        std::uint64_t seed,
                                        RegionSamples* out_samples) {
  spec.validate();
  const GaussianSpec train_d = spec.train_density();
  const GaussianSpec test_d = spec.test_density();
  const int need = spec.n_region_eval;
  const long cap = 100L * 2L * need;

  struct Bucket {
    Eigen::MatrixXd points;
    Eigen::VectorXi labels;
    Eigen::VectorXd posterior_values;
    std::vector<double> ratios;
    int filled = 0;
  };
  Bucket buckets[2];
  for (auto& b : buckets) {
    b.points.resize(need, spec.dim);
    b.labels.resize(need);
    b.posterior_values.resize(need);
    b.ratios.reserve(need);
  }

  long drawn = 0;
  int batch_index = 0;
  constexpr int kBatch = 4096;
  while ((buckets[0].filled < need || buckets[1].filled < need) &&
         drawn < cap) {
    const int n =
        static_cast<int>(std::min<long>(kBatch, cap - drawn));
    const std::string tag = "/" + std::to_string(batch_index);
    const SampleMatrix pts =
        sample(test_d, n, exp_seed(spec, seed, "region-points" + tag));
    const LabeledDataset labeled =
        label_bayes(spec.posterior, pts, DatasetSource::test_drifted);
    const RegionPartition part = assign_regions(train_d, test_d, pts.points);
    for (int i = 0; i < n; ++i) {
      Bucket& b = buckets[part.regions[i] == Region::r1 ? 0 : 1];
      if (b.filled == need) continue;
      b.points.row(b.filled) = pts.points.row(i);
      b.labels(b.filled) = labeled.labels(i);
      b.posterior_values(b.filled) = labeled.posterior_values(i);
      b.ratios.push_back(part.ratios[i]);
      ++b.filled;
    }
    drawn += n;
    ++batch_index;
  }
  for (int r = 0; r < 2; ++r) {
    if (buckets[r].filled < need) {
      throw region_starvation_error(
          spec.id + ": region R" + std::to_string(r + 1) + " produced only " +
          std::to_string(buckets[r].filled) + " of " + std::to_string(need) +
          " points within the oversampling cap");
    }
  }

  std::vector<RegionCell> cells;
  cells.reserve(models.size());
  for (const auto& tm : models) {
    RegionCell cell;
    cell.model = classifier_kind_name(tm.config.kind);
    cell.r1 = compute_metrics(ConfusionCounts::from_labels(
        buckets[0].labels, tm.model->predict(buckets[0].points)));
    cell.r2 = compute_metrics(ConfusionCounts::from_labels(
        buckets[1].labels, tm.model->predict(buckets[1].points)));
    cells.push_back(std::move(cell));
  }

  if (out_samples != nullptr) {
    for (int r = 0; r < 2; ++r) {
      LabeledDataset& ds = (r == 0) ? out_samples->r1 : out_samples->r2;
      ds.points = std::move(buckets[r].points);
      ds.labels = std::move(buckets[r].labels);
      ds.posterior_values = std::move(buckets[r].posterior_values);
      ds.source = DatasetSource::test_drifted;
    }
    out_samples->ratios_r1 = std::move(buckets[0].ratios);
    out_samples->ratios_r2 = std::move(buckets[1].ratios);
  }
  return cells;
}

QuartileFragment run_quartile_eval(const ExperimentSpec& spec,
                                   const std::vector<TrainedModel>& models,
                                   const RegionSamples& samples) {
  const int n1 = samples.r1.size();
  const int n2 = samples.r2.size();
  std::vector<double> ratios;
  ratios.reserve(n1 + n2);
  ratios.insert(ratios.end(), samples.ratios_r1.begin(),
                samples.ratios_r1.end());
  ratios.insert(ratios.end(), samples.ratios_r2.begin(),
                samples.ratios_r2.end());

  Eigen::MatrixXd points(n1 + n2, spec.dim);
  points.topRows(n1) = samples.r1.points;
  points.bottomRows(n2) = samples.r2.points;
  Eigen::VectorXi labels(n1 + n2);
  labels.head(n1) = samples.r1.labels;
  labels.tail(n2) = samples.r2.labels;

  QuartileFragment frag;
  frag.summary = quartile_summary(ratios);
  const std::vector<QuartileBin> bins = bin_by_quartile(ratios, frag.summary);
  for (const QuartileBin b : bins) {
    ++frag.bin_counts[static_cast<int>(b)];
  }
  frag.degenerate = std::any_of(frag.bin_counts.begin(), frag.bin_counts.end(),
                                [](int c) { return c == 0; });

  for (const auto& tm : models) {
    const Eigen::VectorXi predicted = tm.model->predict(points);
    QuartileCell cell;
    cell.model = classifier_kind_name(tm.config.kind);
    std::array<int, 4> correct{};
    for (int i = 0; i < n1 + n2; ++i) {
      if (predicted(i) == labels(i)) ++correct[static_cast<int>(bins[i])];
    }
    for (int q = 0; q < 4; ++q) {
      cell.accuracy[q] =
          frag.bin_counts[q] > 0
              ? static_cast<double>(correct[q]) / frag.bin_counts[q]
              : 0.0;
    }
    frag.per_model.push_back(cell);
  }
  return frag;
}

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<ClassifierConfig>& models,
                                std::uint64_t seed) {
  spec.validate();
  const GaussianSpec train_d = spec.train_density();
  const GaussianSpec test_d = spec.test_density();

  // One posterior function labels all three datasets, via its optimal
  // decision rule (the published benchmark accuracies sit at the noise-free
  // ceiling, so labels carry no Bernoulli noise).
  const LabeledDataset train_set = label_bayes(
      spec.posterior,
      sample(train_d, spec.n_train, exp_seed(spec, seed, "train-points")),
      DatasetSource::train);
  const LabeledDataset test_same = label_bayes(
      spec.posterior,
      sample(train_d, spec.n_test_same,
             exp_seed(spec, seed, "test-same-points")),
      DatasetSource::test_same);
  const LabeledDataset test_drifted = label_bayes(
      spec.posterior,
      sample(test_d, spec.n_test_drifted,
             exp_seed(spec, seed, "drift-points")),
      DatasetSource::test_drifted);

  const std::vector<TrainedModel> trained =
      train_models(spec, models, train_set, seed);

  ExperimentReport report;
  report.spec = spec;
  for (const auto& tm : trained) {
    report.overall.push_back(evaluate_overall(tm, test_same, test_drifted));
  }
  RegionSamples samples;
  report.regions = run_region_eval(spec, trained, seed, &samples);
  report.quartiles = run_quartile_eval(spec, trained, samples);
  return report;
}

void RunOptions::validate() const {
  if (reps < 1) throw std::invalid_argument("RunOptions: reps must be >= 1");
  for (const auto overridden : {n_train, n_test, n_region}) {
    if (overridden && *overridden < 100) {
      throw std::invalid_argument(
          "RunOptions: sample-size overrides must be >= 100");
    }
  }
  for (const auto& id : experiment_ids) catalog(id);  // throws on unknown id
}

std::vector<ExperimentSpec> RunOptions::resolve_specs() const {
  std::vector<std::string> ids =
      experiment_ids.empty() ? catalog_ids() : experiment_ids;
  std::vector<ExperimentSpec> specs;
  for (const auto& id : ids) {
    ExperimentSpec spec = catalog(id);
    if (n_train) spec.n_train = *n_train;
    if (n_test) {
      spec.n_test_same = *n_test;
      spec.n_test_drifted = *n_test;
    }
    if (n_region) spec.n_region_eval = *n_region;
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<ClassifierConfig> RunOptions::resolve_models() const {
  std::vector<ClassifierKind> kinds = model_kinds;
  if (kinds.empty()) {
    kinds = {ClassifierKind::svm, ClassifierKind::logistic,
             ClassifierKind::random_forest, ClassifierKind::naive_bayes,
             ClassifierKind::knn};
  }
  std::vector<ClassifierConfig> configs;
  for (const ClassifierKind k : kinds) {
    configs.push_back(ClassifierConfig::make(k));
  }
  return configs;
}

std::vector<EvalReport> run_suite(const RunOptions& options) {
  options.validate();
  const std::vector<ExperimentSpec> specs = options.resolve_specs();
  const std::vector<ClassifierConfig> configs = options.resolve_models();

  std::ostringstream cfg;
  cfg << options.seed << '|' << options.reps;
  for (const auto& spec : specs) {
    cfg << '|' << spec.id << ':' << spec.n_train << ':' << spec.n_test_same
        << ':' << spec.n_region_eval;
  }
  for (const auto& c : configs) cfg << '|' << classifier_kind_name(c.kind);
  std::ostringstream hash_hex;
  hash_hex << std::hex << std::setw(16) << std::setfill('0')
           << fnv1a64(cfg.str());

  std::vector<EvalReport> reports(options.reps);
  for (int r = 0; r < options.reps; ++r) {
    reports[r].meta.seed = options.seed;
    reports[r].meta.version = toolkit_version();
    reports[r].meta.timestamp = iso_timestamp();
    reports[r].meta.config_hash = hash_hex.str();
    reports[r].meta.reps = options.reps;
    reports[r].experiments.resize(specs.size());
  }

  struct Task {
    int rep;
    int spec_index;
  };
  std::vector<Task> tasks;
  for (int r = 0; r < options.reps; ++r) {
    for (int s = 0; s < static_cast<int>(specs.size()); ++s) {
      tasks.push_back({r, s});
    }
  }

  int n_threads = options.threads;
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }
  n_threads = std::min<int>(n_threads, static_cast<int>(tasks.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        const Task& t = tasks[i];
        const std::uint64_t rep_seed =
            derive_seed(options.seed, "rep/" + std::to_string(t.rep));
        reports[t.rep].experiments[t.spec_index] =
            run_experiment(specs[t.spec_index], configs, rep_seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
        return;
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["meta"] = {{"seed", report.meta.seed},
                 {"version", report.meta.version},
                 {"timestamp", report.meta.timestamp},
                 {"config_hash", report.meta.config_hash},
                 {"reps", report.meta.reps},
                 {"format_version", 1}};
  nlohmann::json experiments = nlohmann::json::array();
  for (const auto& er : report.experiments) {
    nlohmann::json overall = nlohmann::json::array();
    for (const auto& cell : er.overall) {
      overall.push_back(
          {{"model", cell.model},
           {"same", bundle_to_json(cell.same)},
           {"drifted", bundle_to_json(cell.drifted)},
           {"degradation",
            {{"accuracy", cell.degradation_accuracy},
             {"f1", cell.degradation_f1},
             {"mcc", cell.degradation_mcc}}}});
    }
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& cell : er.regions) {
      regions.push_back({{"model", cell.model},
                         {"r1", bundle_to_json(cell.r1)},
                         {"r2", bundle_to_json(cell.r2)}});
    }
    nlohmann::json per_model = nlohmann::json::array();
    for (const auto& cell : er.quartiles.per_model) {
      per_model.push_back({{"model", cell.model},
                           {"accuracy", cell.accuracy}});
    }
    experiments.push_back(
        {{"id", er.spec.id},
         {"spec", spec_to_json(er.spec)},
         {"overall", overall},
         {"regions", regions},
         {"quartiles",
          {{"summary", er.quartiles.summary},
           {"bin_counts", er.quartiles.bin_counts},
           {"degenerate", er.quartiles.degenerate},
           {"per_model_bins", per_model}}}});
  }
  doc["experiments"] = std::move(experiments);
  return doc;
}

nlohmann::json aggregate_reports(const std::vector<nlohmann::json>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("aggregate_reports: no reports");
  }
  if (reports.size() == 1) return reports.front();
  std::vector<const nlohmann::json*> exp_nodes;
  for (const auto& r : reports) exp_nodes.push_back(&r.at("experiments"));
  nlohmann::json out = reports.front();
  out["experiments"] = combine_nodes(exp_nodes, /*want_std=*/false);
  out["experiments_std"] = combine_nodes(exp_nodes, /*want_std=*/true);
  return out;
}

std::string report_to_csv(const nlohmann::json& report) {
  std::ostringstream csv;
  csv << "experiment,model,acc_same,f1_same,mcc_same,acc_drifted,f1_drifted,"
         "mcc_drifted,acc_degradation,f1_degradation,mcc_degradation\n";
  csv << std::setprecision(10);
  for (const auto& er : report.at("experiments")) {
    for (const auto& cell : er.at("overall")) {
      const auto& same = cell.at("same");
      const auto& drifted = cell.at("drifted");
      const auto& deg = cell.at("degradation");
      csv << er.at("id").get<std::string>() << ','
          << cell.at("model").get<std::string>() << ','
          << same.at("accuracy").get<double>() << ','
          << same.at("f1").get<double>() << ','
          << same.at("mcc").get<double>() << ','
          << drifted.at("accuracy").get<double>() << ','
          << drifted.at("f1").get<double>() << ','
          << drifted.at("mcc").get<double>() << ','
          << deg.at("accuracy").get<double>() << ','
          << deg.at("f1").get<double>() << ','
          << deg.at("mcc").get<double>() << '\n';
    }
  }
  return csv.str();
}

std::string toolkit_version() { return "1.0.0"; }

}  // namespace driftbench
