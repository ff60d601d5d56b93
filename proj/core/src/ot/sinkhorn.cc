#include "hmot/ot/sinkhorn.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "grid_kernel.h"
#include "hmot/error.h"
#include "hmot/ot/ground_cost.h"
#include "hmot/ot/softmax.h"

namespace hmot::ot {
namespace {

using detail::Correlate;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Coarsest epsilon of the warm-up schedule, relative to the largest cost.
constexpr double kScalingStart = 1.0;
constexpr double kScalingFactor = 0.5;
// Source-marginal violation at which a warm-up stage hands over.
constexpr double kStageTolerance = 1e-3;
constexpr int kStageBudget = 100;
// Plain sweeps at the target epsilon before small problems switch to Newton.
constexpr int kSweepsBeforeNewton = 200;

struct Problem {
  const Heatmap& u;
  const Heatmap& v;
  GroundCost cost;
  std::vector<double> log_u, log_v;
  std::vector<char> u_support, v_support;

  Problem(const Heatmap& source, const Heatmap& target) : u(source), v(target), cost(source.shape()) {
    const std::size_t n = u.size();
    log_u.resize(n);
    log_v.resize(n);
    u_support.resize(n);
    v_support.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      u_support[i] = u[i] > 0.0;
      v_support[i] = v[i] > 0.0;
      log_u[i] = u_support[i] ? std::log(u[i]) : kNegInf;
      log_v[i] = v_support[i] ? std::log(v[i]) : kNegInf;
    }
  }
};

double MaxFinite(const std::vector<double>& x) {
  double m = kNegInf;
  for (double e : x) m = std::max(m, e);
  return m;
}

// out[j] = eps * log sum_i exp((pot[i] - C_ij) / eps) on the wanted cells.
void SoftMin(const Problem& p, const detail::GibbsKernel& kernel, const std::vector<double>& pot,
             const std::vector<char>& wanted, std::vector<double>& out) {
  const double eps = kernel.epsilon;
  const std::size_t n = pot.size();
  const double shift = MaxFinite(pot);
  if (kernel.representable) {
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = std::exp((pot[i] - shift) / eps);
    Correlate(p.cost.shape(), kernel.kernel, p.cost.offset_width(), weights, wanted, out);
    for (std::size_t j = 0; j < n; ++j) {
      if (wanted[j]) out[j] = shift + eps * std::log(out[j]);
    }
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!wanted[j]) continue;
    double peak = kNegInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (pot[i] != kNegInf) peak = std::max(peak, pot[i] - p.cost(i, j));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pot[i] != kNegInf) sum += std::exp((pot[i] - p.cost(i, j) - peak) / eps);
    }
    out[j] = peak + eps * std::log(sum);
  }
}

struct RunStats {
  int iterations = 0;
  bool converged = false;
  double marginal_error = std::numeric_limits<double>::infinity();
};

// Alternating log-domain updates. On exit the target marginal is exact and
// `marginal_error` is the L1 violation of the source marginal.
RunStats Iterate(const Problem& p, double eps, double omega, int budget, double tolerance, std::vector<double>& f,
                 std::vector<double>& g) {
  const detail::GibbsKernel kernel(p.cost, eps);
  const std::size_t n = f.size();
  std::vector<double> soft(n), next_f(n);
  RunStats stats;
  double prev_error = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= budget; ++it) {
    SoftMin(p, kernel, f, p.v_support, soft);
    for (std::size_t j = 0; j < n; ++j) g[j] = p.v_support[j] ? eps * p.log_v[j] - soft[j] : kNegInf;
    SoftMin(p, kernel, g, p.u_support, soft);
    double error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.u_support[i]) {
        next_f[i] = kNegInf;
        continue;
      }
      next_f[i] = eps * p.log_u[i] - soft[i];
      error += std::abs(p.u[i] * std::expm1((f[i] - next_f[i]) / eps));
    }
    stats.iterations = it;
    stats.marginal_error = error;
    if (error < tolerance) {
      stats.converged = true;
      break;
    }
    if (it == budget) break;
    // Over-relaxed source update, only while the violation keeps shrinking.
    const bool relax = omega != 1.0 && error < prev_error;
    prev_error = error;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.u_support[i]) f[i] = relax ? f[i] + omega * (next_f[i] - f[i]) : next_f[i];
      else f[i] = kNegInf;
    }
  }
  return stats;
}

struct Evaluation {
  double value = 0.0;
  double regularized = 0.0;
};

Evaluation Evaluate(const Problem& p, double eps, const std::vector<double>& f, const std::vector<double>& g) {
  const std::size_t n = f.size();
  Evaluation e;
  const detail::GibbsKernel kernel(p.cost, eps);
  if (kernel.representable) {
    const double shift = MaxFinite(f);
    std::vector<double> weights(n), mass(n), cost(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = std::exp((f[i] - shift) / eps);
    Correlate(p.cost.shape(), kernel.kernel, p.cost.offset_width(), weights, p.v_support, mass);
    Correlate(p.cost.shape(), kernel.weighted, p.cost.offset_width(), weights, p.v_support, cost);
    // Column j of the plan carries exactly v_j, so its cost is v_j times the
    // kernel-weighted mean cost.
    for (std::size_t j = 0; j < n; ++j) {
      if (p.v_support[j]) e.value += p.v[j] * (cost[j] / mass[j]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.u_support[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!p.v_support[j]) continue;
        const double c = p.cost(i, j);
        e.value += c * std::exp((f[i] + g[j] - c) / eps);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (p.u_support[i]) e.regularized += f[i] * p.u[i];
    if (p.v_support[i]) e.regularized += g[i] * p.v[i];
  }
  e.regularized -= eps;
  return e;
}

std::vector<std::size_t> SupportOf(const std::vector<char>& support) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i]) out.push_back(i);
  }
  return out;
}

// Plan restricted to the supports, with target potentials recomputed from f
// so every column carries exactly v_j.
struct DensePlan {
  std::vector<std::size_t> rows, cols;
  Eigen::MatrixXd plan, cost;
  std::vector<double> g;
  // Semi-dual objective sum_i u_i f_i + sum_j v_j g_j, concave in f.
  double objective = 0.0;
};

DensePlan BuildDensePlan(const Problem& p, double eps, const std::vector<double>& f) {
  DensePlan d;
  d.rows = SupportOf(p.u_support);
  d.cols = SupportOf(p.v_support);
  const auto m = static_cast<Eigen::Index>(d.rows.size());
  const auto n = static_cast<Eigen::Index>(d.cols.size());
  d.cost.resize(m, n);
  d.plan.resize(m, n);
  d.g.assign(p.u.size(), kNegInf);
  for (Eigen::Index b = 0; b < n; ++b) {
    const std::size_t j = d.cols[static_cast<std::size_t>(b)];
    double peak = kNegInf;
    for (Eigen::Index a = 0; a < m; ++a) {
      const std::size_t i = d.rows[static_cast<std::size_t>(a)];
      d.cost(a, b) = p.cost(i, j);
      peak = std::max(peak, f[i] - d.cost(a, b));
    }
    double sum = 0.0;
    for (Eigen::Index a = 0; a < m; ++a) sum += std::exp((f[d.rows[static_cast<std::size_t>(a)]] - d.cost(a, b) - peak) / eps);
    d.g[j] = eps * p.log_v[j] - peak - eps * std::log(sum);
    d.objective += p.v[j] * d.g[j];
    for (Eigen::Index a = 0; a < m; ++a) {
      d.plan(a, b) = std::exp((f[d.rows[static_cast<std::size_t>(a)]] + d.g[j] - d.cost(a, b)) / eps);
    }
  }
  for (std::size_t i : d.rows) d.objective += p.u[i] * f[i];
  return d;
}

// diag(a) - P diag(1/b) P^T with a = P1, b = P^T 1, plus a rank-one gauge
// term so the constant null vector is removed.
Eigen::MatrixXd GaugedLaplacian(const Eigen::MatrixXd& plan) {
  const Eigen::VectorXd col_mass = plan.colwise().sum().transpose();
  const Eigen::MatrixXd scaled = plan * col_mass.cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::MatrixXd laplacian = -(scaled * scaled.transpose());
  // Diagonal from the off-diagonal row sums, which avoids cancelling
  // a_i - sum_j P_ij^2 / b_j.
  const Eigen::Index m = laplacian.rows();
  for (Eigen::Index a = 0; a < m; ++a) {
    laplacian(a, a) = 0.0;
    laplacian(a, a) = -laplacian.row(a).sum();
  }
  const double gauge = std::max(laplacian.diagonal().mean(), std::numeric_limits<double>::min());
  laplacian.array() += gauge / static_cast<double>(m);
  return laplacian;
}

double SourceViolation(const Problem& p, const DensePlan& d) {
  const Eigen::VectorXd row_mass = d.plan.rowwise().sum();
  double error = 0.0;
  for (std::size_t a = 0; a < d.rows.size(); ++a) {
    error += std::abs(p.u[d.rows[a]] - row_mass(static_cast<Eigen::Index>(a)));
  }
  return error;
}

// Newton iterations on the source potential with the target eliminated. The
// Hessian of the semi-dual is the gauged Laplacian over epsilon; steps are
// halved until the objective rises or the source violation drops.
RunStats NewtonPolish(const Problem& p, double eps, int budget, double tolerance, std::vector<double>& f,
                      std::vector<double>& g) {
  RunStats stats;
  DensePlan d = BuildDensePlan(p, eps, f);
  double error = SourceViolation(p, d);
  for (int it = 1; it <= budget; ++it) {
    stats.iterations = it;
    if (error < tolerance) break;
    const auto m = static_cast<Eigen::Index>(d.rows.size());
    Eigen::VectorXd residual(m);
    const Eigen::VectorXd row_mass = d.plan.rowwise().sum();
    for (Eigen::Index a = 0; a < m; ++a) residual(a) = p.u[d.rows[static_cast<std::size_t>(a)]] - row_mass(a);
    const Eigen::VectorXd step = eps * GaugedLaplacian(d.plan).ldlt().solve(residual);
    if (!step.allFinite()) break;
    bool improved = false;
    std::vector<double> trial = f;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      for (Eigen::Index a = 0; a < m; ++a) {
        const std::size_t i = d.rows[static_cast<std::size_t>(a)];
        trial[i] = f[i] + t * step(a);
      }
      DensePlan next = BuildDensePlan(p, eps, trial);
      const double next_error = SourceViolation(p, next);
      if (next.objective > d.objective || next_error < error) {
        f = trial;
        d = std::move(next);
        error = next_error;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  g = d.g;
  stats.marginal_error = error;
  stats.converged = error < tolerance;
  return stats;
}

// d value / d u restricted to the source support, by implicit
// differentiation of the marginal constraints. With P the plan,
// a = P1, b = P^T 1, the derivative lambda solves the graph-Laplacian system
//   (diag(a) - P diag(1/b) P^T) lambda = sum_j P_ij (C_ij - Cbar_j),
// Cbar_j being the mean cost of column j. Determined up to a constant.
std::vector<double> ImplicitGradientDense(const Problem& p, double eps, const std::vector<double>& f) {
  const DensePlan d = BuildDensePlan(p, eps, f);
  const Eigen::Index m = d.plan.rows();
  const Eigen::VectorXd col_mass = d.plan.colwise().sum().transpose();
  const Eigen::VectorXd mean_cost = (d.plan.cwiseProduct(d.cost).colwise().sum().transpose()).cwiseQuotient(col_mass);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    rhs(a) = (d.plan.row(a).array() * (d.cost.row(a).array() - mean_cost.transpose().array())).sum();
  }
  const Eigen::VectorXd lambda = GaugedLaplacian(d.plan).ldlt().solve(rhs);

  std::vector<double> out(p.u.size(), 0.0);
  for (Eigen::Index a = 0; a < m; ++a) out[d.rows[static_cast<std::size_t>(a)]] = lambda(a);
  return out;
}

// Matrix-free variant for large supports: preconditioned conjugate gradients
// with plan products evaluated as kernel correlations.
std::vector<double> ImplicitGradientIterative(const Problem& p, double eps, const std::vector<double>& f) {
  const detail::GibbsKernel kernel(p.cost, eps);
  if (!kernel.representable) {
    throw InvalidInput("implicit Sinkhorn gradient: grid too large for a dense solve at epsilon " +
                       std::to_string(eps));
  }
  const std::size_t n = f.size();
  const auto& shape = p.cost.shape();
  const int tw = p.cost.offset_width();
  const double f_shift = MaxFinite(f);
  std::vector<double> wf(n);
  for (std::size_t i = 0; i < n; ++i) wf[i] = std::exp((f[i] - f_shift) / eps);
  // Columns are exact, so plan_ij = wf_i K_ij b_j / col_norm_j.
  std::vector<double> col_norm(n);
  Correlate(shape, kernel.kernel, tw, wf, p.v_support, col_norm);
  std::vector<double> b(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) b[j] = p.v_support[j] ? p.v[j] : 0.0;
  auto apply_plan = [&](const std::vector<double>& y, std::vector<double>& out) {
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) w[j] = p.v_support[j] ? y[j] * b[j] / col_norm[j] : 0.0;
    Correlate(shape, kernel.kernel, tw, w, p.u_support, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = p.u_support[i] ? out[i] * wf[i] : 0.0;
  };
  auto apply_plan_t = [&](const std::vector<double>& x, std::vector<double>& out) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i] = p.u_support[i] ? x[i] * wf[i] : 0.0;
    Correlate(shape, kernel.kernel, tw, w, p.v_support, out);
    for (std::size_t j = 0; j < n; ++j) out[j] = p.v_support[j] ? out[j] * b[j] / col_norm[j] : 0.0;
  };
  std::vector<double> ones(n, 1.0), row_mass(n);
  apply_plan(ones, row_mass);

  // Right-hand side: sum_j P_ij C_ij - sum_j P_ij Cbar_j.
  std::vector<double> weighted(n), mean_cost(n, 0.0), rhs(n, 0.0), tmp(n);
  Correlate(shape, kernel.weighted, tw, wf, p.v_support, weighted);
  for (std::size_t j = 0; j < n; ++j) {
    if (p.v_support[j]) mean_cost[j] = weighted[j] / col_norm[j];
  }
  {
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) w[j] = p.v_support[j] ? b[j] / col_norm[j] : 0.0;
    Correlate(shape, kernel.weighted, tw, w, p.u_support, tmp);
    apply_plan(mean_cost, rhs);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = p.u_support[i] ? tmp[i] * wf[i] - rhs[i] : 0.0;
  }

  auto apply_laplacian = [&](const std::vector<double>& x, std::vector<double>& out) {
    std::vector<double> y(n), z(n);
    apply_plan_t(x, y);
    for (std::size_t j = 0; j < n; ++j) y[j] = p.v_support[j] ? y[j] / b[j] : 0.0;
    apply_plan(y, z);
    for (std::size_t i = 0; i < n; ++i) out[i] = p.u_support[i] ? row_mass[i] * x[i] - z[i] : 0.0;
  };

  // Jacobi preconditioner: diag = a_i - sum_j P_ij^2 / b_j.
  std::vector<double> diag(n, 1.0);
  {
    std::vector<double> ksq(kernel.kernel.size());
    for (std::size_t k = 0; k < ksq.size(); ++k) ksq[k] = kernel.kernel[k] * kernel.kernel[k];
    std::vector<double> w(n, 0.0), s(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = p.v_support[j] ? b[j] / (col_norm[j] * col_norm[j]) : 0.0;
    Correlate(shape, ksq, tw, w, p.u_support, s);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.u_support[i]) diag[i] = std::max(row_mass[i] - wf[i] * wf[i] * s[i], 1e-300);
    }
  }

  auto project = [&](std::vector<double>& x) {
    double mean = 0.0, count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.u_support[i]) {
        mean += x[i];
        count += 1.0;
      }
    }
    mean /= count;
    for (std::size_t i = 0; i < n; ++i) x[i] = p.u_support[i] ? x[i] - mean : 0.0;
  };
  auto dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  };

  std::vector<double> x(n, 0.0), r = rhs, z(n), d(n), q(n);
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) return x;
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  d = z;
  double rz = dot(r, z);
  constexpr int kMaxCg = 2000;
  for (int it = 0; it < kMaxCg; ++it) {
    apply_laplacian(d, q);
    const double dq = dot(d, q);
    if (!(dq > 0.0)) break;
    const double alpha = rz / dq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * q[i];
    }
    if (std::sqrt(dot(r, r)) <= 1e-12 * rhs_norm) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
  }
  project(x);
  return x;
}

void ValidateInputs(const Heatmap& u, const Heatmap& v) {
  RequireSameShape(u, v, "sinkhorn");
  RequireUsableShape(u.shape(), "sinkhorn");
  RequireNormalized(u, "sinkhorn source");
  RequireNormalized(v, "sinkhorn target");
}

}  // namespace

void SinkhornConfig::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("sinkhorn config: epsilon must be positive, got " + std::to_string(epsilon));
  }
  if (!(marginal_tolerance > 0.0)) {
    throw InvalidInput("sinkhorn config: marginal_tolerance must be positive");
  }
  if (!(relaxation >= 1.0 && relaxation < 2.0)) {
    throw InvalidInput("sinkhorn config: relaxation must lie in [1, 2)");
  }
  if (max_iterations < 1) {
    throw InvalidInput("sinkhorn config: max_iterations must be at least 1");
  }
}

LossResult SinkhornW1(const Heatmap& u, const Heatmap& v, const SinkhornConfig& cfg,
                      const SinkhornPotentials* warm_start) {
  cfg.Validate();
  ValidateInputs(u, v);
  const Problem p(u, v);
  const std::size_t n = u.size();

  std::vector<double> f(n), g(n, 0.0);
  const bool warm = warm_start != nullptr && warm_start->shape == u.shape() && warm_start->source.size() == n;
  for (std::size_t i = 0; i < n; ++i) {
    const double init = warm && std::isfinite(warm_start->source[i]) ? warm_start->source[i] : 0.0;
    f[i] = p.u_support[i] ? init : kNegInf;
  }

  int budget = cfg.max_iterations;
  int used = 0;
  if (cfg.epsilon_scaling && !warm) {
    // Geometric warm-up; every stage shares the iteration budget.
    std::vector<double> schedule;
    for (double e = kScalingStart * p.cost.max_cost(); e > cfg.epsilon; e *= kScalingFactor) schedule.push_back(e);
    for (double e : schedule) {
      if (used >= budget) break;
      const double stage_tol = std::max(cfg.marginal_tolerance, kStageTolerance);
      const auto stats = Iterate(p, e, cfg.relaxation, std::min(budget - used, kStageBudget), stage_tol, f, g);
      used += stats.iterations;
    }
  }
  std::size_t support = 0, target_support = 0;
  for (std::size_t i = 0; i < n; ++i) {
    support += p.u_support[i] ? 1 : 0;
    target_support += p.v_support[i] ? 1 : 0;
  }
  const bool dense = std::max(support, target_support) <= kDenseGradientCells;
  RunStats stats;
  if (used < budget) {
    const int sweeps = dense ? std::min(budget - used, kSweepsBeforeNewton) : budget - used;
    stats = Iterate(p, cfg.epsilon, cfg.relaxation, sweeps, cfg.marginal_tolerance, f, g);
    used += stats.iterations;
    if (!stats.converged && dense && used < budget) {
      stats = NewtonPolish(p, cfg.epsilon, budget - used, cfg.marginal_tolerance, f, g);
      used += stats.iterations;
      if (!stats.converged && used < budget) {
        stats = Iterate(p, cfg.epsilon, cfg.relaxation, budget - used, cfg.marginal_tolerance, f, g);
        used += stats.iterations;
      }
    }
  } else {
    // Budget spent in warm-up: one final pass at the requested epsilon so the
    // potentials and marginals describe the right problem.
    stats = Iterate(p, cfg.epsilon, 1.0, 1, cfg.marginal_tolerance, f, g);
    used += 1;
  }

  LossResult result;
  const auto eval = Evaluate(p, cfg.epsilon, f, g);
  result.value = std::max(eval.value, 0.0);
  result.regularized_value = eval.regularized;
  result.iterations_used = used;
  result.converged = stats.converged;
  result.marginal_error = stats.marginal_error;
  result.gradient = Heatmap(u.shape(), 0.0);

  if (cfg.gradient != GradientMode::kNone) {
    std::vector<double> d_source;
    if (cfg.gradient == GradientMode::kDualPotential) {
      d_source.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) d_source[i] = p.u_support[i] ? f[i] : 0.0;
    } else {
      d_source = dense ? ImplicitGradientDense(p, cfg.epsilon, f) : ImplicitGradientIterative(p, cfg.epsilon, f);
    }
    result.gradient = SoftmaxBackward(u, Heatmap(u.shape(), std::move(d_source)));
  }

  result.potentials.shape = u.shape();
  result.potentials.epsilon = cfg.epsilon;
  result.potentials.source = std::move(f);
  result.potentials.target = std::move(g);
  return result;
}

GradientField SinkhornGradient(const Heatmap& logits_u, const Heatmap& v, const SinkhornConfig& cfg) {
  const Heatmap u = Softmax(logits_u);
  SinkhornConfig c = cfg;
  if (c.gradient == GradientMode::kNone) c.gradient = GradientMode::kImplicit;
  auto result = SinkhornW1(u, v, c);
  return GradientField{std::move(result.gradient), result.converged, result.iterations_used};
}

TransportPlan MaterializePlan(const SinkhornPotentials& potentials) {
  const GroundCost cost(potentials.shape);
  const std::size_t n = cost.cells();
  if (potentials.source.size() != n || potentials.target.size() != n) {
    throw InvalidInput("materialize plan: potentials do not match the grid");
  }
  TransportPlan plan;
  plan.shape = potentials.shape;
  plan.coupling.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (potentials.source[i] == kNegInf) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (potentials.target[j] == kNegInf) continue;
      plan.coupling[i * n + j] =
          std::exp((potentials.source[i] + potentials.target[j] - cost(i, j)) / potentials.epsilon);
    }
  }
  return plan;
}

}  // namespace hmot::ot
