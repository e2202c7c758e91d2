#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ordot {

struct SyntheticOrdinalConfig {
  int n_samples = 1000;
  int input_dim = 10;
  int n_classes = 5;
  double noise_inlier = 0.0;   // probability of a +-1 shift, clipped at the ends
  double noise_outlier = 0.0;  // probability of a uniform resample
  double latent_noise = 0.5;   // unobserved noise added to the latent score
  std::uint64_t seed = 0;

  void validate() const;
};

struct OrdinalDataset {
  Eigen::MatrixXd features;  // one row per sample
  std::vector<double> latent;
  std::vector<int> clean_labels;
  std::vector<int> noisy_labels;
  int n_classes = 0;

  OrdinalDataset slice(int begin, int end) const;
};

// Features are standard normal; the clean label is the equal-frequency
// quantile bucket of a latent score that mixes a linear and a smooth
// nonlinear function of the features plus hidden noise.
OrdinalDataset generate_synthetic(const SyntheticOrdinalConfig& cfg);

}  // namespace ordot
