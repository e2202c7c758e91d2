#include "ordot/lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "ordot/error.hpp"

namespace ordot {

namespace {

constexpr int kMaxPivots = 100000;

// Basis of a balanced n x n transportation problem: 2n - 1 cells forming a
// spanning tree over the bipartite row/column graph.
class TransportSimplex {
 public:
  TransportSimplex(const Histogram& supply, const Histogram& demand, const Eigen::MatrixXd& cost)
      : n_(static_cast<int>(supply.size())),
        cost_(cost),
        flow_(Eigen::MatrixXd::Zero(n_, n_)),
        basic_(static_cast<std::size_t>(n_ * n_), false) {
    least_cost_start(supply, demand);
  }

  int optimize() {
    const double scale = std::max(1.0, cost_.maxCoeff());
    const double tolerance = 1e-13 * scale;
    int pivots = 0;
    std::vector<double> u(static_cast<std::size_t>(n_));
    std::vector<double> v(static_cast<std::size_t>(n_));
    while (true) {
      compute_duals(u, v);
      int enter_i = -1;
      int enter_j = -1;
      for (int i = 0; i < n_ && enter_i < 0; ++i) {
        for (int j = 0; j < n_; ++j) {
          if (is_basic(i, j)) continue;
          if (cost_(i, j) - u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)] < -tolerance) {
            enter_i = i;
            enter_j = j;
            break;
          }
        }
      }
      if (enter_i < 0) return pivots;
      if (++pivots > kMaxPivots) {
        throw OracleFailure("transportation simplex exceeded " + std::to_string(kMaxPivots) +
                            " pivots");
      }
      pivot(enter_i, enter_j);
    }
  }

  const Eigen::MatrixXd& flow() const { return flow_; }

 private:
  bool is_basic(int i, int j) const { return basic_[static_cast<std::size_t>(i * n_ + j)]; }
  void set_basic(int i, int j, bool on) { basic_[static_cast<std::size_t>(i * n_ + j)] = on; }

  void least_cost_start(const Histogram& supply, const Histogram& demand) {
    std::vector<double> left_row(supply.values().begin(), supply.values().end());
    std::vector<double> left_col(demand.values().begin(), demand.values().end());
    std::vector<bool> row_open(static_cast<std::size_t>(n_), true);
    std::vector<bool> col_open(static_cast<std::size_t>(n_), true);
    int open_rows = n_;
    int open_cols = n_;
    // Each allocation closes exactly one line, except the last which closes
    // both, giving 2n - 1 basic cells.
    while (open_rows > 0 && open_cols > 0) {
      int bi = -1;
      int bj = -1;
      for (int i = 0; i < n_; ++i) {
        if (!row_open[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < n_; ++j) {
          if (!col_open[static_cast<std::size_t>(j)]) continue;
          if (bi < 0 || cost_(i, j) < cost_(bi, bj)) {
            bi = i;
            bj = j;
          }
        }
      }
      auto& r = left_row[static_cast<std::size_t>(bi)];
      auto& c = left_col[static_cast<std::size_t>(bj)];
      const double amount = std::max(0.0, std::min(r, c));
      flow_(bi, bj) = amount;
      set_basic(bi, bj, true);
      r -= amount;
      c -= amount;

      bool close_row;
      if (open_rows == 1 && open_cols == 1) {
        row_open[static_cast<std::size_t>(bi)] = false;
        col_open[static_cast<std::size_t>(bj)] = false;
        --open_rows;
        --open_cols;
        continue;
      } else if (open_rows == 1) {
        close_row = false;
      } else if (open_cols == 1) {
        close_row = true;
      } else {
        close_row = r <= c;
      }
      if (close_row) {
        row_open[static_cast<std::size_t>(bi)] = false;
        --open_rows;
      } else {
        col_open[static_cast<std::size_t>(bj)] = false;
        --open_cols;
      }
    }
  }

  // u_i + v_j = c_ij on every basic cell, anchored at u_0 = 0.
  void compute_duals(std::vector<double>& u, std::vector<double>& v) const {
    std::vector<bool> row_known(static_cast<std::size_t>(n_), false);
    std::vector<bool> col_known(static_cast<std::size_t>(n_), false);
    std::queue<int> frontier;  // rows as 0..n-1, columns as n..2n-1
    u[0] = 0.0;
    row_known[0] = true;
    frontier.push(0);
    while (!frontier.empty()) {
      const int node = frontier.front();
      frontier.pop();
      if (node < n_) {
        const int i = node;
        for (int j = 0; j < n_; ++j) {
          if (!is_basic(i, j) || col_known[static_cast<std::size_t>(j)]) continue;
          v[static_cast<std::size_t>(j)] = cost_(i, j) - u[static_cast<std::size_t>(i)];
          col_known[static_cast<std::size_t>(j)] = true;
          frontier.push(n_ + j);
        }
      } else {
        const int j = node - n_;
        for (int i = 0; i < n_; ++i) {
          if (!is_basic(i, j) || row_known[static_cast<std::size_t>(i)]) continue;
          u[static_cast<std::size_t>(i)] = cost_(i, j) - v[static_cast<std::size_t>(j)];
          row_known[static_cast<std::size_t>(i)] = true;
          frontier.push(i);
        }
      }
    }
    const bool spanning = std::all_of(row_known.begin(), row_known.end(), [](bool b) { return b; }) &&
                          std::all_of(col_known.begin(), col_known.end(), [](bool b) { return b; });
    if (!spanning) throw OracleFailure("transportation basis is not a spanning tree");
  }

  // Tree path from column enter_j back to row enter_i, as basic cells.
  std::vector<std::pair<int, int>> tree_path(int enter_i, int enter_j) const {
    const int nodes = 2 * n_;
    std::vector<int> parent(static_cast<std::size_t>(nodes), -1);
    std::vector<bool> seen(static_cast<std::size_t>(nodes), false);
    std::queue<int> frontier;
    frontier.push(n_ + enter_j);
    seen[static_cast<std::size_t>(n_ + enter_j)] = true;
    while (!frontier.empty()) {
      const int node = frontier.front();
      frontier.pop();
      if (node == enter_i) break;
      for (int other = 0; other < n_; ++other) {
        const int i = node < n_ ? node : other;
        const int j = node < n_ ? other : node - n_;
        if (!is_basic(i, j)) continue;
        const int next = node < n_ ? n_ + j : i;
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = true;
        parent[static_cast<std::size_t>(next)] = node;
        frontier.push(next);
      }
    }
    if (!seen[static_cast<std::size_t>(enter_i)]) throw OracleFailure("no basis cycle for entering cell");

    // Walk from the row back to the entering column, then reverse.
    std::vector<std::pair<int, int>> path;
    for (int node = enter_i; parent[static_cast<std::size_t>(node)] != -1;
         node = parent[static_cast<std::size_t>(node)]) {
      const int prev = parent[static_cast<std::size_t>(node)];
      path.emplace_back(node < n_ ? node : prev, node < n_ ? prev - n_ : node - n_);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot(int enter_i, int enter_j) {
    // Cycle: entering cell (+), then path cells alternating (-, +, -, ...).
    const auto path = tree_path(enter_i, enter_j);
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto [i, j] = path[k];
      const double f = flow_(i, j);
      const int index = i * n_ + j;
      if (f < theta || (f == theta && index < path[static_cast<std::size_t>(leave)].first * n_ +
                                                   path[static_cast<std::size_t>(leave)].second)) {
        theta = f;
        leave = static_cast<int>(k);
      }
    }
    flow_(enter_i, enter_j) += theta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto [i, j] = path[k];
      flow_(i, j) += (k % 2 == 0) ? -theta : theta;
    }
    const auto [li, lj] = path[static_cast<std::size_t>(leave)];
    flow_(li, lj) = 0.0;
    set_basic(li, lj, false);
    set_basic(enter_i, enter_j, true);
  }

  int n_;
  const Eigen::MatrixXd& cost_;
  Eigen::MatrixXd flow_;
  std::vector<bool> basic_;
};

}  // namespace

OracleResult lp_oracle(const Histogram& s, const Histogram& t, const GroundMatrix& g) {
  require_same_size(s, t);
  if (static_cast<int>(s.size()) != g.size()) throw ShapeError("ground matrix size mismatch");
  if (g.size() > kOracleMaxClasses) {
    throw ShapeError("lp_oracle supports at most " + std::to_string(kOracleMaxClasses) + " classes");
  }
  const auto total = [](const Histogram& h) {
    return std::accumulate(h.values().begin(), h.values().end(), 0.0);
  };
  if (std::abs(total(s) - total(t)) > kMassTolerance) {
    throw ShapeError("source and target masses differ");
  }

  TransportSimplex simplex(s, t, g.costs());
  OracleResult result;
  result.pivots = simplex.optimize();
  result.plan.mass = simplex.flow();
  result.cost = result.plan.cost(g);
  return result;
}

}  // namespace ordot
