#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordot/experiment.hpp"
#include "ordot/loss.hpp"
#include "ordot/metrics.hpp"

namespace ordot::io {

// Rows of `id,p0,...,p{N-1},label`. Probabilities are renormalized per row.
struct PredictionSet {
  std::vector<std::string> ids;
  Eigen::MatrixXd probabilities;
  std::vector<int> labels;

  int n_classes() const { return static_cast<int>(probabilities.cols()); }
};

PredictionSet read_predictions(std::istream& in);
PredictionSet read_predictions(const std::filesystem::path& path);
void write_predictions(std::ostream& out, const PredictionSet& set);

// "0.1,0.2,0.7" -> {0.1, 0.2, 0.7}; throws ParseError on junk.
std::vector<double> parse_real_list(const std::string& text);

// Shortest round-trip representation of a double.
std::string format_real(double v);

MetricFamily metric_family_from_json(const nlohmann::json& j, const std::string& path);
LossSpec loss_spec_from_json(const nlohmann::json& j, const std::string& path);
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment(const std::filesystem::path& path);

nlohmann::json to_json(const EvalReport& report);

std::string comparison_csv(const ComparisonResult& result);
std::string comparison_text(const ComparisonResult& result);

// Writes history_<run>.csv per run, comparison.csv and comparison.txt into
// dir, and epoch,value series under dir/plots/. Returns the paths written.
std::vector<std::filesystem::path> write_experiment_outputs(const ComparisonResult& result,
                                                            const std::filesystem::path& dir,
                                                            bool with_history = true);

}  // namespace ordot::io
