#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "gapvi/gap.hpp"

namespace gapvi {

struct FixedStep {};

struct Backtracking {
  double shrink = 0.5;               // beta_ls in (0, 1)
  double sufficient_decrease = 0.25;  // c_dec
  int max_halvings = 60;
};

using StepRule = std::variant<FixedStep, Backtracking>;

struct SolverConfig {
  double alpha = 0.1;
  StepRule alpha_rule = FixedStep{};
  double lambda = 1.0;
  long max_iters = 100000;
  double eps_gap = 1e-10;
  double eps_stat = 1e-12;
  // Weak-convexity modulus of r. Zero for the indicator of a convex set.
  double rho = 0.0;
  // Record x_k in the trace for dims up to this size; norms above.
  std::size_t snapshot_max_dim = 64;
  // When false only the terminal record is kept.
  bool record_trace = true;

  void validate() const;
};

enum class SolveStatus { SolvedVIP, StationaryNotSolved, MaxIters, Diverged };

std::string to_string(SolveStatus s);

struct TraceRecord {
  long k = 0;
  double gap = 0.0;
  double step_norm = 0.0;         // |x_k - x_{k+1}|, 0 on the terminal row
  double dist_to_solution = 0.0;  // upper bound; NaN when no solutions are known
  double t = 0.0;                 // homotopy parameter; 0 for plain runs
  double elapsed_seconds = 0.0;
  double x_norm = 0.0;
  Vector x;  // empty when dim > snapshot_max_dim
};

struct Trace {
  std::vector<TraceRecord> records;

  // Largest increase between consecutive gap values (<= 0 for a monotone run).
  double max_gap_increase() const;
};

struct SolverResult {
  SolveStatus status = SolveStatus::MaxIters;
  Vector final_x;
  double final_gap = 0.0;
  long iterations = 0;
  Trace trace;
  std::vector<std::string> warnings;
};

// Proximal-gradient step map with f = g_lambda and r = indicator of X:
// T_alpha(x) = Proj_X(x - alpha grad g(x)).
Vector t_alpha(const GapEvaluator& ev, double alpha, VecView x);

// G_alpha(x) = -(1/alpha) [<grad g, T - x> + |x - T|^2 / (2 alpha)].
double g_alpha(const GapEvaluator& ev, double alpha, VecView x);

// E_alpha(x) = g(x) + <grad g, T - x> + |x - T|^2 / (2 alpha).
double e_alpha(const GapEvaluator& ev, double alpha, VecView x);

// The three proximal quantities from one gradient evaluation.
struct ProxQuantities {
  double phi = 0.0;  // g_lambda(x)
  Vector grad;
  Vector T;
  double envelope = 0.0;  // E_alpha
  double prox_gap = 0.0;  // G_alpha
};
ProxQuantities prox_quantities(const GapEvaluator& ev, double alpha, VecView x);

// Algorithm: x_{k+1} = T_alpha(x_k) until gap <= eps_gap (SolvedVIP),
// |x_k - T_alpha(x_k)| <= eps_stat (StationaryNotSolved), the budget runs out
// (MaxIters), or the gap or iterate norm exceeds 1e12 (Diverged).
// `trace_t` fills the t column of the trace.
SolverResult solve_pg(ProblemPtr problem, const SolverConfig& config, VecView x0, double trace_t = 0.0);

// Smooth objective plus prox, for the backtracking rule.
struct CompositeObjective {
  std::function<double(VecView)> value;
  std::function<Vector(VecView)> gradient;
  std::function<Vector(VecView)> prox;  // projection for indicator r
};

CompositeObjective gap_objective(const GapEvaluator& ev);

// Largest alpha0 * shrink^j with
//   f(T_a(x)) <= f(x) - (c_dec / a) |x - T_a(x)|^2.
double backtrack_alpha(const CompositeObjective& obj, VecView x, double alpha0, const Backtracking& rule = {});
double backtrack_alpha(const GapEvaluator& ev, VecView x, double alpha0, const Backtracking& rule = {});

// Modified consensus-optimization update on X = R^d:
//   x - alpha [lambda J(x)^T F(x) - F(x)].
// With pure_gap the +alpha F term is dropped (plain descent on
// (lambda/2)|F|^2).
Vector co_step(const VIProblem& problem, double lambda, double alpha, VecView x, bool pure_gap = false);

}  // namespace gapvi
