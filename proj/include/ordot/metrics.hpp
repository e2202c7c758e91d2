#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ordot {

double accuracy(std::span<const int> preds, std::span<const int> truths);

// Mean absolute class-index error.
double mae(std::span<const int> preds, std::span<const int> truths);

// Quadratic weighted kappa with the Kaggle conventions: weights
// (i - j)^2 / (n - 1)^2, expected counts from the outer product of the two
// marginal histograms scaled to the sample count.
double qwk(std::span<const int> preds, std::span<const int> truths, int n_classes);

// Binarization of the ordinal scale: negatives vs positives, e.g. "0-1 vs 2-4".
struct BinarySplit {
  std::string name;
  std::vector<int> negative;
  std::vector<int> positive;
};

// Parses "0:1-4,0-1:2-4" style specs; each side is a class or an inclusive range.
std::vector<BinarySplit> parse_splits(const std::string& text, int n_classes);

struct SplitScores {
  std::vector<double> scores;  // probability mass on the positive classes
  std::vector<int> labels;     // 1 for positive, 0 for negative
};

// Samples whose true class is on neither side of the split are dropped.
SplitScores score_split(const Eigen::MatrixXd& probabilities, std::span<const int> truths,
                        const BinarySplit& split);

// TNR at the largest threshold t with TPR(score >= t) >= tpr_target.
double tnr_at_tpr(std::span<const double> scores, std::span<const int> labels, double tpr_target = 0.95);

struct TnrSummary {
  std::map<std::string, double> per_split;
  double mean = 0.0;
};

TnrSummary mean_tnr_at_tpr(const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& scores_per_split,
                           const std::vector<std::vector<int>>& labels_per_split, double tpr_target = 0.95);

struct EvalReport {
  double accuracy = 0.0;
  double mae = 0.0;
  double qwk = 0.0;
  std::map<std::string, double> tnr_at_tpr;
  double mean_tnr = 0.0;
};

// Predictions are the argmax of each probability row.
EvalReport evaluate(const Eigen::MatrixXd& probabilities, std::span<const int> truths,
                    const std::vector<BinarySplit>& splits, double tpr_target = 0.95);

std::vector<int> argmax_rows(const Eigen::MatrixXd& probabilities);

}  // namespace ordot
