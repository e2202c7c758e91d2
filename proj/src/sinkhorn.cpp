#include "ordot/sinkhorn.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ordot/error.hpp"

namespace ordot {

namespace {

std::vector<Eigen::Index> support(const Histogram& h) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] > 0.0) idx.push_back(static_cast<Eigen::Index>(i));
  }
  return idx;
}

double log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.array() - m).exp().sum());
}

struct Reduced {
  Eigen::VectorXd a, b;  // masses on the support
  Eigen::MatrixXd cost;
};

void run_plain(const Reduced& r, const SinkhornConfig& cfg, SinkhornResult& out) {
  const Eigen::MatrixXd kernel = (-r.cost / cfg.epsilon).array().exp().matrix();
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    if (kernel.row(i).maxCoeff() <= 0.0) {
      throw UnderflowError("Sinkhorn kernel row underflowed to zero; increase epsilon or use the log domain");
    }
  }
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    if (kernel.col(j).maxCoeff() <= 0.0) {
      throw UnderflowError("Sinkhorn kernel column underflowed to zero; increase epsilon or use the log domain");
    }
  }

  Eigen::VectorXd u = Eigen::VectorXd::Ones(r.a.size());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(r.b.size());
  for (int it = 1; it <= cfg.max_iters; ++it) {
    u = r.a.cwiseQuotient(kernel * v);
    v = r.b.cwiseQuotient(kernel.transpose() * u);
    out.iterations = it;
    if (!u.allFinite() || !v.allFinite()) {
      throw UnderflowError("Sinkhorn scaling overflowed; increase epsilon or use the log domain");
    }
    // Column marginals are exact after the v update; check the rows.
    const Eigen::VectorXd rows = u.cwiseProduct(kernel * v);
    out.marginal_violation = (rows - r.a).cwiseAbs().maxCoeff();
    if (out.marginal_violation < cfg.convergence_tol) {
      out.converged = true;
      break;
    }
  }
  out.plan = u.asDiagonal() * kernel * v.asDiagonal();
  out.source_potential = cfg.epsilon * u.array().log().matrix();
  out.target_potential = cfg.epsilon * v.array().log().matrix();
}

void run_log(const Reduced& r, const SinkhornConfig& cfg, SinkhornResult& out) {
  const double eps = cfg.epsilon;
  const Eigen::Index m = r.a.size();
  const Eigen::Index k = r.b.size();
  const Eigen::VectorXd log_a = r.a.array().log().matrix();
  const Eigen::VectorXd log_b = r.b.array().log().matrix();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd scratch_row(k);
  Eigen::VectorXd scratch_col(m);

  auto log_plan = [&](Eigen::Index i, Eigen::Index j) { return (f(i) + g(j) - r.cost(i, j)) / eps; };

  for (int it = 1; it <= cfg.max_iters; ++it) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) scratch_row(j) = (g(j) - r.cost(i, j)) / eps;
      f(i) = eps * (log_a(i) - log_sum_exp(scratch_row));
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) scratch_col(i) = (f(i) - r.cost(i, j)) / eps;
      g(j) = eps * (log_b(j) - log_sum_exp(scratch_col));
    }
    out.iterations = it;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) row += std::exp(log_plan(i, j));
      worst = std::max(worst, std::abs(row - r.a(i)));
    }
    out.marginal_violation = worst;
    if (worst < cfg.convergence_tol) {
      out.converged = true;
      break;
    }
  }
  out.plan.resize(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) out.plan(i, j) = std::exp(log_plan(i, j));
  }
  out.source_potential = f;
  out.target_potential = g;
}

}  // namespace

void SinkhornConfig::validate() const {
  std::ostringstream os;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) os << "epsilon must be > 0; ";
  if (max_iters < 1) os << "max_iters must be >= 1; ";
  if (!(convergence_tol > 0.0)) os << "convergence_tol must be > 0; ";
  if (!os.str().empty()) throw ConfigError("invalid Sinkhorn config: " + os.str());
}

SinkhornResult sinkhorn(const Histogram& s, const Histogram& t, const GroundMatrix& g,
                        const SinkhornConfig& cfg) {
  cfg.validate();
  require_same_size(s, t);
  if (static_cast<int>(s.size()) != g.size()) throw ShapeError("ground matrix size mismatch");

  const auto rows = support(s);
  const auto cols = support(t);
  Reduced r;
  r.a.resize(static_cast<Eigen::Index>(rows.size()));
  r.b.resize(static_cast<Eigen::Index>(cols.size()));
  r.cost.resize(r.a.size(), r.b.size());
  for (std::size_t i = 0; i < rows.size(); ++i) r.a(static_cast<Eigen::Index>(i)) = s[static_cast<std::size_t>(rows[i])];
  for (std::size_t j = 0; j < cols.size(); ++j) r.b(static_cast<Eigen::Index>(j)) = t[static_cast<std::size_t>(cols[j])];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      r.cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(static_cast<int>(rows[i]), static_cast<int>(cols[j]));
    }
  }

  const bool use_log = cfg.domain == SinkhornDomain::kLog ||
                       (cfg.domain == SinkhornDomain::kAuto && cfg.epsilon < kLogDomainEpsilon);
  SinkhornResult reduced;
  if (use_log) {
    run_log(r, cfg, reduced);
  } else {
    run_plain(r, cfg, reduced);
  }

  const Eigen::Index n = g.size();
  SinkhornResult out;
  out.iterations = reduced.iterations;
  out.converged = reduced.converged;
  out.marginal_violation = reduced.marginal_violation;
  out.plan = Eigen::MatrixXd::Zero(n, n);
  out.source_potential = Eigen::VectorXd::Zero(n);
  out.target_potential = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.source_potential(rows[i]) = reduced.source_potential(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out.plan(rows[i], cols[j]) = reduced.plan(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.target_potential(cols[j]) = reduced.target_potential(static_cast<Eigen::Index>(j));
  }
  out.cost = out.plan.cwiseProduct(g.costs()).sum();
  return out;
}

}  // namespace ordot
