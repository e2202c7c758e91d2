#include "ordot/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ordot/error.hpp"

namespace ordot {

void SyntheticOrdinalConfig::validate() const {
  if (n_samples < 1 || input_dim < 1 || n_classes < 2) {
    throw ConfigError("synthetic data needs n_samples >= 1, input_dim >= 1, n_classes >= 2");
  }
  if (noise_inlier < 0.0 || noise_outlier < 0.0 || noise_inlier + noise_outlier > 1.0) {
    throw ConfigError("label noise rates must be nonnegative and sum to at most 1");
  }
  if (latent_noise < 0.0) throw ConfigError("latent_noise must be >= 0");
}

OrdinalDataset OrdinalDataset::slice(int begin, int end) const {
  OrdinalDataset out;
  out.n_classes = n_classes;
  out.features = features.middleRows(begin, end - begin);
  out.latent.assign(latent.begin() + begin, latent.begin() + end);
  out.clean_labels.assign(clean_labels.begin() + begin, clean_labels.begin() + end);
  out.noisy_labels.assign(noisy_labels.begin() + begin, noisy_labels.begin() + end);
  return out;
}

OrdinalDataset generate_synthetic(const SyntheticOrdinalConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::VectorXd direction(cfg.input_dim);
  Eigen::VectorXd bend(cfg.input_dim);
  for (int k = 0; k < cfg.input_dim; ++k) direction(k) = normal(rng);
  for (int k = 0; k < cfg.input_dim; ++k) bend(k) = normal(rng);
  direction.normalize();
  bend.normalize();

  OrdinalDataset data;
  data.n_classes = cfg.n_classes;
  data.features.resize(cfg.n_samples, cfg.input_dim);
  data.latent.resize(static_cast<std::size_t>(cfg.n_samples));
  for (int i = 0; i < cfg.n_samples; ++i) {
    for (int k = 0; k < cfg.input_dim; ++k) data.features(i, k) = normal(rng);
    const Eigen::VectorXd x = data.features.row(i).transpose();
    const double linear = direction.dot(x);
    const double curved = std::sin(1.5 * bend.dot(x));
    data.latent[static_cast<std::size_t>(i)] = linear + curved + cfg.latent_noise * normal(rng);
  }

  std::vector<double> sorted = data.latent;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (int c = 1; c < cfg.n_classes; ++c) {
    const auto at = static_cast<std::size_t>(static_cast<long long>(c) * cfg.n_samples / cfg.n_classes);
    cuts.push_back(sorted[std::min(at, sorted.size() - 1)]);
  }

  data.clean_labels.resize(static_cast<std::size_t>(cfg.n_samples));
  data.noisy_labels.resize(static_cast<std::size_t>(cfg.n_samples));
  std::uniform_int_distribution<int> any_class(0, cfg.n_classes - 1);
  for (int i = 0; i < cfg.n_samples; ++i) {
    const double z = data.latent[static_cast<std::size_t>(i)];
    const int clean = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), z) - cuts.begin());
    data.clean_labels[static_cast<std::size_t>(i)] = clean;

    int noisy = clean;
    const double r = unit(rng);
    const bool up = unit(rng) < 0.5;
    if (r < cfg.noise_inlier) {
      noisy = std::clamp(clean + (up ? 1 : -1), 0, cfg.n_classes - 1);
    } else if (r < cfg.noise_inlier + cfg.noise_outlier) {
      noisy = any_class(rng);
    }
    data.noisy_labels[static_cast<std::size_t>(i)] = noisy;
  }
  return data;
}

}  // namespace ordot
