#include "hmot/ot/exact.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "hmot/error.h"
#include "hmot/ot/ground_cost.h"

namespace hmot::ot {
namespace {

constexpr double kReducedCostTolerance = 1e-12;

// Basis is a spanning tree over m row nodes and n column nodes; node ids are
// row i -> i, column j -> m + j. Every basic cell is a tree edge.
class TransportationSimplex {
 public:
  TransportationSimplex(std::span<const double> supply, std::span<const double> demand,
                        std::span<const double> cost)
      : m_(supply.size()),
        n_(demand.size()),
        supply_(supply.begin(), supply.end()),
        demand_(demand.begin(), demand.end()),
        cost_(cost.begin(), cost.end()),
        flow_(m_ * n_, 0.0),
        basic_(m_ * n_, 0),
        adjacency_(m_ + n_),
        row_potential_(m_, 0.0),
        col_potential_(n_, 0.0) {}

  TransportationSolution Solve() {
    LeastCostStart();
    std::size_t degenerate_streak = 0;
    const std::size_t bland_after = 2 * (m_ + n_);
    const std::size_t pivot_limit = 50 * m_ * n_ + 1000;
    std::size_t pivots = 0;
    for (;;) {
      ComputePotentials();
      const bool bland = degenerate_streak > bland_after;
      const std::size_t entering = SelectEntering(bland);
      if (entering == kNone) break;
      if (++pivots > pivot_limit) {
        throw std::runtime_error("transportation simplex exceeded its pivot limit");
      }
      const bool degenerate = Pivot(entering);
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
    }

    TransportationSolution out;
    out.flow = flow_;
    for (double& f : out.flow) f = std::max(f, 0.0);
    out.row_potential = row_potential_;
    out.col_potential = col_potential_;
    out.pivots = pivots;
    for (std::size_t k = 0; k < out.flow.size(); ++k) {
      if (out.flow[k] != 0.0) out.cost += out.flow[k] * cost_[k];
    }
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void AddBasic(std::size_t cell, double amount) {
    basic_[cell] = 1;
    flow_[cell] = amount;
    adjacency_[cell / n_].push_back(cell);
    adjacency_[m_ + cell % n_].push_back(cell);
  }

  void RemoveBasic(std::size_t cell) {
    basic_[cell] = 0;
    flow_[cell] = 0.0;
    for (std::size_t node : {cell / n_, m_ + cell % n_}) {
      auto& list = adjacency_[node];
      list.erase(std::find(list.begin(), list.end(), cell));
    }
  }

  // Greedy cheapest-cell start. Each placement retires exactly one line
  // (row or column), except the final one, which leaves m + n - 1 basic cells
  // forming a spanning tree.
  void LeastCostStart() {
    std::vector<std::size_t> order(m_ * n_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cost_[a] < cost_[b]; });
    std::vector<double> row_left = supply_;
    std::vector<double> col_left = demand_;
    std::vector<char> row_active(m_, 1), col_active(n_, 1);
    std::size_t active_rows = m_, active_cols = n_;
    for (std::size_t cell : order) {
      const std::size_t i = cell / n_, j = cell % n_;
      if (!row_active[i] || !col_active[j]) continue;
      if (active_rows == 1 && active_cols == 1) {
        AddBasic(cell, std::max(col_left[j], 0.0));
        break;
      }
      bool retire_row;
      if (active_rows == 1) {
        retire_row = false;
      } else if (active_cols == 1) {
        retire_row = true;
      } else {
        retire_row = row_left[i] <= col_left[j];
      }
      if (retire_row) {
        const double amount = std::max(row_left[i], 0.0);
        AddBasic(cell, amount);
        col_left[j] -= amount;
        row_left[i] = 0.0;
        row_active[i] = 0;
        --active_rows;
      } else {
        const double amount = std::max(col_left[j], 0.0);
        AddBasic(cell, amount);
        row_left[i] -= amount;
        col_left[j] = 0.0;
        col_active[j] = 0;
        --active_cols;
      }
    }
  }

  void ComputePotentials() {
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    row_potential_[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t i = cell / n_, j = cell % n_;
        if (node < m_) {
          if (seen[m_ + j]) continue;
          col_potential_[j] = cost_[cell] - row_potential_[i];
          seen[m_ + j] = 1;
          stack.push_back(m_ + j);
        } else {
          if (seen[i]) continue;
          row_potential_[i] = cost_[cell] - col_potential_[j];
          seen[i] = 1;
          stack.push_back(i);
        }
      }
    }
  }

  std::size_t SelectEntering(bool bland) const {
    std::size_t best = kNone;
    double best_reduced = -kReducedCostTolerance;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t cell = i * n_ + j;
        if (basic_[cell]) continue;
        const double reduced = cost_[cell] - row_potential_[i] - col_potential_[j];
        if (reduced < best_reduced) {
          if (bland) return cell;
          best_reduced = reduced;
          best = cell;
        }
      }
    }
    return best;
  }

  // Returns true when the pivot moved zero flow.
  bool Pivot(std::size_t entering) {
    const std::size_t from = entering / n_;
    const std::size_t to = m_ + entering % n_;
    std::vector<std::size_t> parent_edge(m_ + n_, kNone);
    std::vector<char> seen(m_ + n_, 0);
    std::queue<std::size_t> queue;
    queue.push(from);
    seen[from] = 1;
    while (!queue.empty() && !seen[to]) {
      const std::size_t node = queue.front();
      queue.pop();
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t other = node < m_ ? m_ + cell % n_ : cell / n_;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_edge[other] = cell;
        queue.push(other);
      }
    }
    if (!seen[to]) throw std::logic_error("transportation basis is not a spanning tree");

    // Walk the tree path from the entering column back to the entering row;
    // signs alternate starting with a decrease next to the column.
    std::vector<std::size_t> path;
    for (std::size_t node = to; node != from;) {
      const std::size_t cell = parent_edge[node];
      path.push_back(cell);
      node = node < m_ ? m_ + cell % n_ : cell / n_;
    }
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) theta = std::min(theta, flow_[path[k]]);
    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (flow_[path[k]] <= theta && (leaving == kNone || path[k] < leaving)) leaving = path[k];
    }
    theta = std::max(theta, 0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
      flow_[path[k]] += (k % 2 == 0) ? -theta : theta;
    }
    RemoveBasic(leaving);
    AddBasic(entering, theta);
    return theta == 0.0;
  }

  std::size_t m_, n_;
  std::vector<double> supply_, demand_, cost_;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> row_potential_, col_potential_;
};

}  // namespace

TransportationSolution SolveTransportation(std::span<const double> supply, std::span<const double> demand,
                                           std::span<const double> cost) {
  if (supply.empty() || demand.empty()) throw InvalidInput("transportation: empty supply or demand");
  if (cost.size() != supply.size() * demand.size()) {
    throw InvalidInput("transportation: cost matrix has " + std::to_string(cost.size()) + " entries, expected " +
                       std::to_string(supply.size() * demand.size()));
  }
  double total_supply = 0.0, total_demand = 0.0;
  for (double s : supply) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("transportation: invalid supply");
    total_supply += s;
  }
  for (double d : demand) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidInput("transportation: invalid demand");
    total_demand += d;
  }
  if (std::abs(total_supply - total_demand) > 1e-9) {
    throw InvalidInput("transportation: unbalanced problem");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw InvalidInput("transportation: non-finite cost");
  }
  return TransportationSimplex(supply, demand, cost).Solve();
}

ExactResult ExactW1(const Heatmap& u, const Heatmap& v) {
  RequireSameShape(u, v, "exact W1");
  RequireUsableShape(u.shape(), "exact W1");
  if (u.size() > kExactMaxCells) {
    throw SizeLimitExceeded("exact W1 is limited to " + std::to_string(kExactMaxCells) + " cells; grid " +
                            ToString(u.shape()) + " has " + std::to_string(u.size()));
  }
  RequireNormalized(u, "exact W1 source");
  RequireNormalized(v, "exact W1 target");

  const GroundCost ground(u.shape());
  std::vector<std::size_t> sources, targets;
  std::vector<double> supply, demand;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) {
      sources.push_back(i);
      supply.push_back(u[i]);
    }
    if (v[i] > 0.0) {
      targets.push_back(i);
      demand.push_back(v[i]);
    }
  }
  std::vector<double> cost(sources.size() * targets.size());
  for (std::size_t a = 0; a < sources.size(); ++a) {
    for (std::size_t b = 0; b < targets.size(); ++b) cost[a * targets.size() + b] = ground(sources[a], targets[b]);
  }
  const auto solution = SolveTransportation(supply, demand, cost);

  ExactResult result;
  result.plan.shape = u.shape();
  result.plan.coupling.assign(u.size() * u.size(), 0.0);
  for (std::size_t a = 0; a < sources.size(); ++a) {
    for (std::size_t b = 0; b < targets.size(); ++b) {
      result.plan.coupling[sources[a] * u.size() + targets[b]] = solution.flow[a * targets.size() + b];
    }
  }
  result.distance = solution.cost;
  result.pivots = solution.pivots;
  return result;
}

}  // namespace hmot::ot
