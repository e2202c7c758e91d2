#include "ordot/exact.hpp"

#include <cmath>
#include <cstdlib>

#include "ordot/error.hpp"

namespace ordot {

namespace {

// Remaining masses closer than this are treated as exhausted together.
constexpr double kSweepTieTolerance = 1e-12;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_metric_size(const Histogram& s, const GroundMatrix& g) {
  if (static_cast<int>(s.size()) != g.size()) {
    throw ShapeError("ground matrix is " + std::to_string(g.size()) + "x" +
                     std::to_string(g.size()) + " but histogram has " +
                     std::to_string(s.size()) + " classes");
  }
}

}  // namespace

double TransportPlan::marginal_violation(const Histogram& source, const Histogram& target) const {
  double worst = 0.0;
  const Eigen::VectorXd rows = mass.rowwise().sum();
  const Eigen::VectorXd cols = mass.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows(i) - source[static_cast<std::size_t>(i)]));
  }
  for (Eigen::Index j = 0; j < cols.size(); ++j) {
    worst = std::max(worst, std::abs(cols(j) - target[static_cast<std::size_t>(j)]));
  }
  return worst;
}

double wasserstein_onehot(const Histogram& s, const OneHotLabel& label, const GroundMatrix& g) {
  require_metric_size(s, g);
  if (label.n_classes() != static_cast<int>(s.size())) {
    throw ShapeError("label has " + std::to_string(label.n_classes()) +
                     " classes but histogram has " + std::to_string(s.size()));
  }
  const int j_star = label.true_class();
  double total = 0.0;
  for (int i = 0; i < s.n_classes(); ++i) total += s[i] * g(i, j_star);
  return total;
}

double wasserstein_linear(const Histogram& s, const Histogram& t) {
  require_same_size(s, t);
  double phi = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    phi += s[j] - t[j];
    total += std::abs(phi);
  }
  return total;
}

double wasserstein_step(const Histogram& s, const Histogram& t) {
  require_same_size(s, t);
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) total += std::abs(s[i] - t[i]);
  return 0.5 * total;
}

TransportPlan monotone_coupling(const Histogram& s, const Histogram& t) {
  require_same_size(s, t);
  const std::size_t n = s.size();
  TransportPlan plan{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};

  std::size_t i = 0;
  std::size_t j = 0;
  double left_src = s[0];
  double left_dst = t[0];
  while (i < n && j < n) {
    if (left_src <= 0.0) {
      if (++i < n) left_src = s[i];
      continue;
    }
    if (left_dst <= 0.0) {
      if (++j < n) left_dst = t[j];
      continue;
    }
    const double moved = std::min(left_src, left_dst);
    plan.mass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += moved;
    if (std::abs(left_src - left_dst) <= kSweepTieTolerance) {
      left_src = 0.0;
      left_dst = 0.0;
    } else if (left_src < left_dst) {
      left_dst -= left_src;
      left_src = 0.0;
    } else {
      left_src -= left_dst;
      left_dst = 0.0;
    }
  }
  return plan;
}

double wasserstein_convex(const Histogram& s, const Histogram& t, const GroundMatrix& g) {
  require_same_size(s, t);
  require_metric_size(s, g);
  if (g.family().is_step()) {
    throw UnsupportedFamily("step metric has no monotone-coupling solution; use wasserstein_step");
  }
  return monotone_coupling(s, t).cost(g);
}

double wasserstein_exact(const Histogram& s, const Histogram& t, const GroundMatrix& g) {
  require_metric_size(s, g);
  if (g.family().is_step()) return wasserstein_step(s, t);
  if (g.family().is_linear()) return wasserstein_linear(s, t);
  return wasserstein_convex(s, t, g);
}

std::vector<double> wasserstein_linear_grad(const Histogram& s, const Histogram& t) {
  require_same_size(s, t);
  const std::size_t n = s.size();
  // d/ds_k of sum_j |phi_j| = sum_{j >= k} sgn(phi_j).
  // phi_{N-1} is zero up to rounding and contributes nothing.
  std::vector<double> signs(n, 0.0);
  double phi = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    phi += s[j] - t[j];
    signs[j] = sgn(phi);
  }
  std::vector<double> grad(n, 0.0);
  double suffix = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    suffix += signs[k];
    grad[k] = suffix;
  }
  return grad;
}

std::vector<double> wasserstein_step_grad(const Histogram& s, const Histogram& t) {
  require_same_size(s, t);
  std::vector<double> grad(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) grad[i] = 0.5 * sgn(s[i] - t[i]);
  return grad;
}

std::vector<double> wasserstein_convex_grad(const Histogram& s, const Histogram& t,
                                            const GroundMatrix& g) {
  require_same_size(s, t);
  require_metric_size(s, g);
  if (g.family().is_step()) return wasserstein_step_grad(s, t);

  // The cost is the integral over u in (0, 1) of f(|F^-1(u) - G^-1(u)|).
  // Raising the source breakpoint S_k hands the slice just above S_k from
  // class k+1 to class k, so dW/dS_k = f(|k - j|) - f(|k + 1 - j|) with j
  // the target quantile right above S_k. s_n enters S_k for every k >= n.
  const int n = s.n_classes();
  const std::vector<double> src_cdf = cumulative(s);
  const std::vector<double> dst_cdf = cumulative(t);
  std::vector<double> d_breakpoint(static_cast<std::size_t>(n), 0.0);
  int j = 0;
  for (int k = 0; k + 1 < n; ++k) {
    while (j < n - 1 && dst_cdf[static_cast<std::size_t>(j)] <= src_cdf[static_cast<std::size_t>(k)]) ++j;
    d_breakpoint[static_cast<std::size_t>(k)] = g(k, j) - g(k + 1, j);
  }
  std::vector<double> grad(static_cast<std::size_t>(n), 0.0);
  double suffix = 0.0;
  for (int k = n; k-- > 0;) {
    suffix += d_breakpoint[static_cast<std::size_t>(k)];
    grad[static_cast<std::size_t>(k)] = suffix;
  }
  return grad;
}

}  // namespace ordot
