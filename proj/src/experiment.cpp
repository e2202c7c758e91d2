#include "ordot/experiment.hpp"

#include <set>

#include "ordot/error.hpp"

namespace ordot {

void ExperimentConfig::validate() const {
  if (n_train < 1 || n_val < 1) throw ConfigError("n_train and n_val must be >= 1");
  if (runs.empty()) throw ConfigError("runs: at least one run is required");
  if (seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].name.empty()) throw ConfigError("runs[" + std::to_string(i) + "].name: must not be empty");
    if (!names.insert(runs[i].name).second) {
      throw ConfigError("runs[" + std::to_string(i) + "].name: duplicate run name '" + runs[i].name + "'");
    }
  }
  SyntheticOrdinalConfig d = data;
  d.n_samples = n_train + n_val;
  d.validate();
}

ComparisonResult run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n_classes = cfg.data.n_classes;
  const std::vector<BinarySplit> splits =
      cfg.splits.empty() ? default_splits(n_classes) : parse_splits(cfg.splits, n_classes);

  ComparisonResult result;
  for (const auto& s : splits) result.split_names.push_back(s.name);
  std::vector<std::vector<RunOutcome>> per_run(cfg.runs.size());

  for (const std::uint64_t seed : cfg.seeds) {
    SyntheticOrdinalConfig data_cfg = cfg.data;
    data_cfg.n_samples = cfg.n_train + cfg.n_val;
    data_cfg.seed = seed;
    const OrdinalDataset data = generate_synthetic(data_cfg);
    const OrdinalDataset train_part = data.slice(0, cfg.n_train);
    const OrdinalDataset val_part = data.slice(cfg.n_train, cfg.n_train + cfg.n_val);
    const LabeledSet train_set{train_part.features, train_part.noisy_labels};
    const LabeledSet val_set{val_part.features, val_part.clean_labels};

    for (std::size_t r = 0; r < cfg.runs.size(); ++r) {
      const RunConfig& run = cfg.runs[r];
      TrainConfig tc = run.train;
      tc.seed = seed;
      tc.splits = splits;
      tc.tpr_target = cfg.tpr_target;
      MlpModel model(data_cfg.input_dim, run.hidden_dim, n_classes, run.activation, seed);
      TrainResult trained = train(std::move(model), train_set, val_set, tc);

      RunOutcome outcome;
      outcome.run = run.name;
      outcome.seed = seed;
      outcome.final_report = trained.history.empty()
                                 ? evaluate(trained.model.probabilities(val_set.features), val_set.labels, splits,
                                            cfg.tpr_target)
                                 : trained.history.back().validation;
      outcome.history = std::move(trained.history);
      per_run[r].push_back(std::move(outcome));
    }
  }

  for (std::size_t r = 0; r < cfg.runs.size(); ++r) {
    ComparisonRow row;
    row.name = cfg.runs[r].name;
    row.n_seeds = static_cast<int>(per_run[r].size());
    const double k = static_cast<double>(row.n_seeds);
    for (const auto& o : per_run[r]) {
      row.accuracy += o.final_report.accuracy / k;
      row.mae += o.final_report.mae / k;
      row.qwk += o.final_report.qwk / k;
      row.mean_tnr += o.final_report.mean_tnr / k;
      for (const auto& [name, v] : o.final_report.tnr_at_tpr) row.tnr_at_tpr[name] += v / k;
    }
    result.rows.push_back(std::move(row));
    for (auto& o : per_run[r]) result.outcomes.push_back(std::move(o));
  }
  return result;
}

}  // namespace ordot
