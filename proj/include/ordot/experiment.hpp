#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ordot/synthetic.hpp"
#include "ordot/trainer.hpp"

namespace ordot {

struct RunConfig {
  std::string name;
  TrainConfig train;
  int hidden_dim = 32;
  Activation activation = Activation::kRelu;
};

struct ExperimentConfig {
  // n_samples and seed are overridden from n_train + n_val and each entry of seeds.
  SyntheticOrdinalConfig data;
  int n_train = 5000;
  int n_val = 1000;
  std::vector<RunConfig> runs;
  std::vector<std::uint64_t> seeds{0};
  std::string output_dir = "out";
  std::string splits;  // empty selects default_splits(n_classes)
  double tpr_target = 0.95;

  void validate() const;
};

struct RunOutcome {
  std::string run;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> history;
  EvalReport final_report;  // validation metrics after the last epoch
};

// Means over seeds of the final validation metrics of one run.
struct ComparisonRow {
  std::string name;
  int n_seeds = 0;
  double accuracy = 0.0;
  double mae = 0.0;
  double qwk = 0.0;
  double mean_tnr = 0.0;
  std::map<std::string, double> tnr_at_tpr;
};

struct ComparisonResult {
  std::vector<std::string> split_names;
  std::vector<ComparisonRow> rows;  // in config order
  std::vector<RunOutcome> outcomes;  // run-major, then seed
};

// For each seed, draws one dataset (first n_train samples train on noisy
// labels, the rest validate on clean labels) and trains every run on it.
ComparisonResult run_comparison(const ExperimentConfig& cfg);

}  // namespace ordot
