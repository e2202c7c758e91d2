#pragma once

// Reference metric evaluations written from their sample-level definitions.

#include <algorithm>
#include <set>
#include <vector>

namespace ordot::testing {

// Kappa from pairwise squared differences: the weighted expected disagreement
// equals the mean over all (prediction, truth) sample pairs.
inline double reference_qwk(const std::vector<int>& preds, const std::vector<int>& truths) {
  const double n = static_cast<double>(preds.size());
  double observed = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double d = preds[k] - truths[k];
    observed += d * d;
  }
  double expected = 0.0;
  for (int p : preds) {
    for (int t : truths) {
      const double d = p - t;
      expected += d * d;
    }
  }
  return 1.0 - n * observed / expected;
}

// Tries every distinct score as a threshold and keeps the largest one whose
// sensitivity reaches the target.
inline double reference_tnr_at_tpr(const std::vector<double>& scores, const std::vector<int>& labels,
                                   double target) {
  const std::set<double> candidates(scores.begin(), scores.end());
  double best_threshold = -1e300;
  bool found = false;
  for (double thr : candidates) {
    int tp = 0;
    int pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (labels[i] == 1) {
        ++pos;
        tp += scores[i] >= thr;
      }
    }
    if (static_cast<double>(tp) / pos >= target && (!found || thr > best_threshold)) {
      best_threshold = thr;
      found = true;
    }
  }
  int tn = 0;
  int neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) {
      ++neg;
      tn += scores[i] < best_threshold;
    }
  }
  return static_cast<double>(tn) / neg;
}

}  // namespace ordot::testing
