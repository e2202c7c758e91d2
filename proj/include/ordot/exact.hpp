#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ordot/ground_metric.hpp"
#include "ordot/histogram.hpp"

namespace ordot {

// Feasible-marginal tolerance for transport plans.
inline constexpr double kPlanTolerance = 1e-7;

// Mass moved from source class i (rows) to target class j (columns).
struct TransportPlan {
  Eigen::MatrixXd mass;

  double cost(const GroundMatrix& g) const { return mass.cwiseProduct(g.costs()).sum(); }
  // Largest absolute deviation of the row/column sums from the given marginals.
  double marginal_violation(const Histogram& source, const Histogram& target) const;
};

// Every unit of mass goes to j*, so the distance is sum_i s_i f(|i - j*|).
double wasserstein_onehot(const Histogram& s, const OneHotLabel& label, const GroundMatrix& g);

// Sum of absolute differences of the two cumulative distributions.
double wasserstein_linear(const Histogram& s, const Histogram& t);

// Half the l1 distance; the exact cost under the 0/1 ground metric.
double wasserstein_step(const Histogram& s, const Histogram& t);

// Exact cost for Linear, Power and Huber metrics via the monotone coupling.
double wasserstein_convex(const Histogram& s, const Histogram& t, const GroundMatrix& g);

// The order-preserving coupling of s and t (north-west corner rule on the
// line), computed by a two-pointer sweep. Optimal for any convex metric.
TransportPlan monotone_coupling(const Histogram& s, const Histogram& t);

// Dispatch to the closed form matching g's family.
double wasserstein_exact(const Histogram& s, const Histogram& t, const GroundMatrix& g);

// Gradients with respect to the source masses. Only differences between
// entries are meaningful: the mass constraint fixes the common offset.
// sgn(0) is taken as 0.
std::vector<double> wasserstein_linear_grad(const Histogram& s, const Histogram& t);
std::vector<double> wasserstein_step_grad(const Histogram& s, const Histogram& t);
// Derivative of the quantile-coupling cost, one-sided at coincident breakpoints.
std::vector<double> wasserstein_convex_grad(const Histogram& s, const Histogram& t,
                                            const GroundMatrix& g);

}  // namespace ordot
