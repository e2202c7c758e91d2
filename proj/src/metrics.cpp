#include "ordot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ordot/error.hpp"

namespace ordot {

namespace {

void require_pairs(std::span<const int> preds, std::span<const int> truths) {
  if (preds.size() != truths.size()) {
    throw ShapeError("predictions and truths differ in length: " + std::to_string(preds.size()) + " vs " +
                     std::to_string(truths.size()));
  }
  if (preds.empty()) throw ShapeError("no samples");
}

std::vector<int> parse_side(const std::string& text, int n_classes, const std::string& whole) {
  const auto dash = text.find('-');
  int lo = 0;
  int hi = 0;
  try {
    std::size_t used = 0;
    if (dash == std::string::npos) {
      lo = hi = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, dash);
      const std::string b = text.substr(dash + 1);
      lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("malformed split '" + whole + "'");
  }
  if (lo > hi || lo < 0 || hi >= n_classes) {
    throw ConfigError("split '" + whole + "' references classes outside [0, " + std::to_string(n_classes - 1) + "]");
  }
  std::vector<int> out;
  for (int c = lo; c <= hi; ++c) out.push_back(c);
  return out;
}

}  // namespace

double accuracy(std::span<const int> preds, std::span<const int> truths) {
  require_pairs(preds, truths);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == truths[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double mae(std::span<const int> preds, std::span<const int> truths) {
  require_pairs(preds, truths);
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) total += std::abs(preds[i] - truths[i]);
  return total / static_cast<double>(preds.size());
}

double qwk(std::span<const int> preds, std::span<const int> truths, int n_classes) {
  require_pairs(preds, truths);
  if (n_classes < 2) throw ShapeError("qwk needs at least 2 classes");
  const auto n = static_cast<std::size_t>(n_classes);
  std::vector<double> observed(n * n, 0.0);
  std::vector<double> truth_hist(n, 0.0);
  std::vector<double> pred_hist(n, 0.0);
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const int p = preds[k];
    const int t = truths[k];
    if (p < 0 || p >= n_classes || t < 0 || t >= n_classes) {
      throw InvalidClass("qwk label outside [0, " + std::to_string(n_classes) + ")");
    }
    observed[static_cast<std::size_t>(t) * n + static_cast<std::size_t>(p)] += 1.0;
    truth_hist[static_cast<std::size_t>(t)] += 1.0;
    pred_hist[static_cast<std::size_t>(p)] += 1.0;
  }
  const double samples = static_cast<double>(preds.size());
  const double span = static_cast<double>((n_classes - 1) * (n_classes - 1));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = static_cast<double>(i) - static_cast<double>(j);
      const double w = d * d / span;
      num += w * observed[i * n + j];
      den += w * truth_hist[i] * pred_hist[j] / samples;
    }
  }
  if (den == 0.0) throw DegenerateKappa("qwk expected-disagreement term is zero");
  return 1.0 - num / den;
}

std::vector<BinarySplit> parse_splits(const std::string& text, int n_classes) {
  std::vector<BinarySplit> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("split '" + item + "' lacks ':'");
    const std::string neg = item.substr(0, colon);
    const std::string pos = item.substr(colon + 1);
    BinarySplit split{neg + " vs " + pos, parse_side(neg, n_classes, item), parse_side(pos, n_classes, item)};
    for (int c : split.negative) {
      if (std::find(split.positive.begin(), split.positive.end(), c) != split.positive.end()) {
        throw ConfigError("split '" + item + "' puts class " + std::to_string(c) + " on both sides");
      }
    }
    out.push_back(std::move(split));
  }
  if (out.empty()) throw ConfigError("empty split list");
  return out;
}

SplitScores score_split(const Eigen::MatrixXd& probabilities, std::span<const int> truths,
                        const BinarySplit& split) {
  if (probabilities.rows() != static_cast<Eigen::Index>(truths.size())) throw ShapeError("probability rows vs truths");
  SplitScores out;
  const auto contains = [](const std::vector<int>& v, int c) { return std::find(v.begin(), v.end(), c) != v.end(); };
  for (Eigen::Index r = 0; r < probabilities.rows(); ++r) {
    const int truth = truths[static_cast<std::size_t>(r)];
    const bool pos = contains(split.positive, truth);
    if (!pos && !contains(split.negative, truth)) continue;
    double score = 0.0;
    for (int c : split.positive) {
      if (c < probabilities.cols()) score += probabilities(r, c);
    }
    out.scores.push_back(score);
    out.labels.push_back(pos ? 1 : 0);
  }
  return out;
}

double tnr_at_tpr(std::span<const double> scores, std::span<const int> labels, double tpr_target) {
  if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] ? pos : neg).push_back(scores[i]);
  if (pos.empty()) throw UndefinedTPR("split has no positive samples");
  if (neg.empty()) throw UndefinedTPR("split has no negative samples; TNR is undefined");

  // Need the k highest positives above the threshold, with k the smallest
  // count reaching the target rate.
  std::sort(pos.begin(), pos.end(), std::greater<>());
  const double total_pos = static_cast<double>(pos.size());
  std::size_t k = pos.size();
  for (std::size_t c = 1; c <= pos.size(); ++c) {
    if (static_cast<double>(c) / total_pos >= tpr_target) {
      k = c;
      break;
    }
  }
  const double threshold = pos[k - 1];
  const auto below = std::count_if(neg.begin(), neg.end(), [threshold](double s) { return s < threshold; });
  return static_cast<double>(below) / static_cast<double>(neg.size());
}

TnrSummary mean_tnr_at_tpr(const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& scores_per_split,
                           const std::vector<std::vector<int>>& labels_per_split, double tpr_target) {
  if (names.size() != scores_per_split.size() || names.size() != labels_per_split.size()) {
    throw ShapeError("split names, scores and labels differ in count");
  }
  if (names.empty()) throw ShapeError("no splits");
  TnrSummary out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double tnr = tnr_at_tpr(scores_per_split[i], labels_per_split[i], tpr_target);
    out.per_split[names[i]] = tnr;
    out.mean += tnr;
  }
  out.mean /= static_cast<double>(names.size());
  return out;
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& probabilities) {
  std::vector<int> out(static_cast<std::size_t>(probabilities.rows()));
  for (Eigen::Index r = 0; r < probabilities.rows(); ++r) {
    Eigen::Index best = 0;
    probabilities.row(r).maxCoeff(&best);
    out[static_cast<std::size_t>(r)] = static_cast<int>(best);
  }
  return out;
}

EvalReport evaluate(const Eigen::MatrixXd& probabilities, std::span<const int> truths,
                    const std::vector<BinarySplit>& splits, double tpr_target) {
  const std::vector<int> preds = argmax_rows(probabilities);
  EvalReport report;
  report.accuracy = accuracy(preds, truths);
  report.mae = mae(preds, truths);
  report.qwk = qwk(preds, truths, static_cast<int>(probabilities.cols()));
  if (!splits.empty()) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<int>> labels;
    for (const auto& split : splits) {
      auto ss = score_split(probabilities, truths, split);
      names.push_back(split.name);
      scores.push_back(std::move(ss.scores));
      labels.push_back(std::move(ss.labels));
    }
    const auto summary = mean_tnr_at_tpr(names, scores, labels, tpr_target);
    report.tnr_at_tpr = summary.per_split;
    report.mean_tnr = summary.mean;
  }
  return report;
}

}  // namespace ordot
