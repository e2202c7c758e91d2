#pragma once

#include "ordot/exact.hpp"
#include "ordot/ground_metric.hpp"
#include "ordot/histogram.hpp"

namespace ordot {

// Largest problem size the oracle accepts.
inline constexpr int kOracleMaxClasses = 16;

struct OracleResult {
  double cost = 0.0;
  TransportPlan plan;
  int pivots = 0;
};

// Solves the balanced transportation LP exactly with the transportation
// simplex (least-cost start, u-v duals, Bland's rule). Independent of the
// closed forms; used to validate them.
OracleResult lp_oracle(const Histogram& s, const Histogram& t, const GroundMatrix& g);

}  // namespace ordot
