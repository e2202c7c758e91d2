#pragma once

#include <Eigen/Dense>

#include "ordot/ground_metric.hpp"
#include "ordot/histogram.hpp"

namespace ordot {

enum class SinkhornDomain {
  kAuto,   // log domain below kLogDomainEpsilon, plain scaling otherwise
  kPlain,
  kLog,
};

inline constexpr double kLogDomainEpsilon = 0.05;

struct SinkhornConfig {
  double epsilon = 0.1;
  int max_iters = 10000;
  double convergence_tol = 1e-8;
  SinkhornDomain domain = SinkhornDomain::kAuto;

  void validate() const;
};

struct SinkhornResult {
  double cost = 0.0;  // <P, D> of the regularized plan
  int iterations = 0;
  bool converged = false;
  double marginal_violation = 0.0;
  Eigen::MatrixXd plan;
  // Dual potentials f, g with P_ij = exp((f_i + g_j - D_ij) / epsilon).
  // Entries outside the support of s (resp. t) are left at zero.
  Eigen::VectorXd source_potential;
  Eigen::VectorXd target_potential;
};

// Entropic-regularized transport between s and t by alternating Sinkhorn
// scaling. Classes with zero mass are dropped from the iteration.
SinkhornResult sinkhorn(const Histogram& s, const Histogram& t, const GroundMatrix& g,
                        const SinkhornConfig& cfg = {});

struct SinkhornDistance {
  double cost;
  int iterations;
};

inline SinkhornDistance sinkhorn_distance(const Histogram& s, const Histogram& t,
                                          const GroundMatrix& g, const SinkhornConfig& cfg = {}) {
  const auto r = sinkhorn(s, t, g, cfg);
  return {r.cost, r.iterations};
}

}  // namespace ordot
