#include "gapvi/prox_grad.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "gapvi/errors.hpp"

namespace gapvi {
namespace {

constexpr double kDivergence = 1e12;

TraceRecord make_record(const VIProblem& problem, long k, VecView x, double gap, double step, double t,
                        double elapsed, std::size_t snapshot_max_dim) {
  TraceRecord r;
  r.k = k;
  r.gap = gap;
  r.step_norm = step;
  r.dist_to_solution = problem.distance_to_solutions(x);
  r.t = t;
  r.elapsed_seconds = elapsed;
  r.x_norm = norm(x);
  if (x.size() <= snapshot_max_dim) r.x.assign(x.begin(), x.end());
  return r;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw BadParameters("alpha must be a positive finite number");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw BadParameters("lambda must be a positive finite number");
  if (max_iters < 1) throw BadParameters("max_iters must be >= 1");
  if (!(eps_gap >= 0.0)) throw BadParameters("eps_gap must be >= 0");
  if (!(eps_stat >= 0.0)) throw BadParameters("eps_stat must be >= 0");
  if (!(rho >= 0.0)) throw BadParameters("rho must be >= 0");
  if (const auto* bt = std::get_if<Backtracking>(&alpha_rule)) {
    if (!(bt->shrink > 0.0 && bt->shrink < 1.0)) throw BadParameters("backtracking shrink must lie in (0, 1)");
    if (!(bt->sufficient_decrease > 0.0)) throw BadParameters("sufficient decrease factor must be > 0");
    if (bt->max_halvings < 0) throw BadParameters("max_halvings must be >= 0");
  } else if (rho > 0.0 && !(alpha < 1.0 / rho)) {
    throw BadParameters("fixed alpha must satisfy alpha < 1/rho");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::SolvedVIP:
      return "SolvedVIP";
    case SolveStatus::StationaryNotSolved:
      return "StationaryNotSolved";
    case SolveStatus::MaxIters:
      return "MaxIters";
    case SolveStatus::Diverged:
      return "Diverged";
  }
  return "unknown";
}

double Trace::max_gap_increase() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < records.size(); ++i) worst = std::max(worst, records[i].gap - records[i - 1].gap);
  return records.size() < 2 ? 0.0 : worst;
}

ProxQuantities prox_quantities(const GapEvaluator& ev, double alpha, VecView x) {
  if (!(alpha > 0.0)) throw BadParameters("alpha must be > 0");
  const GapPoint gp = ev.evaluate(x);
  ProxQuantities q;
  q.phi = gp.gap;
  q.grad = ev.gradient(x, gp);
  q.T = ev.problem().feasible_set().project(add_scaled(x, -alpha, q.grad));
  const Vector d = sub(q.T, x);
  const double model = dot(q.grad, d) + dot(d, d) / (2.0 * alpha);
  q.envelope = q.phi + model;
  q.prox_gap = -model / alpha;
  return q;
}

Vector t_alpha(const GapEvaluator& ev, double alpha, VecView x) { return prox_quantities(ev, alpha, x).T; }

double g_alpha(const GapEvaluator& ev, double alpha, VecView x) { return prox_quantities(ev, alpha, x).prox_gap; }

double e_alpha(const GapEvaluator& ev, double alpha, VecView x) { return prox_quantities(ev, alpha, x).envelope; }

SolverResult solve_pg(ProblemPtr problem, const SolverConfig& config, VecView x0, double trace_t) {
  config.validate();
  if (!problem) throw BadParameters("solve_pg: null problem");
  if (x0.size() != problem->dim()) throw BadParameters("solve_pg: x0 has wrong dimension");
  if (!all_finite(x0)) throw BadParameters("solve_pg: x0 is not finite");

  const GapEvaluator ev(problem, config.lambda);
  const FeasibleSet& set = problem->feasible_set();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SolverResult res;
  Vector x(x0.begin(), x0.end());
  if (!set.contains(x, ev.feasibility_tol(x))) {
    std::ostringstream os;
    os << "x0 infeasible (violation " << set.violation(x) << "), projected onto the feasible set";
    res.warnings.push_back(os.str());
    x = set.project(x);
  }

  const auto* backtracking = std::get_if<Backtracking>(&config.alpha_rule);
  const CompositeObjective objective = backtracking ? gap_objective(ev) : CompositeObjective{};

  for (long k = 0;; ++k) {
    const GapPoint gp = ev.evaluate(x);
    const auto finish = [&](SolveStatus status, double step) {
      res.trace.records.push_back(
          make_record(*problem, k, x, gp.gap, step, trace_t, elapsed(), config.snapshot_max_dim));
      res.status = status;
      res.final_gap = gp.gap;
      res.iterations = k;
      res.final_x = x;
      return res;
    };

    if (gp.gap <= config.eps_gap) return finish(SolveStatus::SolvedVIP, 0.0);
    if (!std::isfinite(gp.gap) || gp.gap > kDivergence) return finish(SolveStatus::Diverged, 0.0);
    if (k >= config.max_iters) return finish(SolveStatus::MaxIters, 0.0);

    double alpha = config.alpha;
    if (backtracking) {
      try {
        alpha = backtrack_alpha(objective, x, config.alpha, *backtracking);
      } catch (const NonConvergence&) {
        res.warnings.push_back("no step size gives a decrease above rounding level; stopping as stationary");
        return finish(SolveStatus::StationaryNotSolved, 0.0);
      }
    }
    const Vector grad = ev.gradient(x, gp);
    Vector next = set.project(add_scaled(x, -alpha, grad));
    const double step = distance(x, next);
    if (step <= config.eps_stat) return finish(SolveStatus::StationaryNotSolved, step);
    if (!all_finite(next) || norm(next) > kDivergence) return finish(SolveStatus::Diverged, step);
    if (config.record_trace)
      res.trace.records.push_back(
          make_record(*problem, k, x, gp.gap, step, trace_t, elapsed(), config.snapshot_max_dim));
    x = std::move(next);
  }
}

CompositeObjective gap_objective(const GapEvaluator& ev) {
  CompositeObjective obj;
  obj.value = [ev](VecView x) { return ev.value(x); };
  obj.gradient = [ev](VecView x) { return ev.gradient(x); };
  obj.prox = [ev](VecView z) { return ev.problem().feasible_set().project(z); };
  return obj;
}

double backtrack_alpha(const CompositeObjective& obj, VecView x, double alpha0, const Backtracking& rule) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw BadParameters("backtrack_alpha: alpha0 must be > 0");
  if (!(rule.shrink > 0.0 && rule.shrink < 1.0)) throw BadParameters("backtrack_alpha: shrink must lie in (0, 1)");
  const double f0 = obj.value(x);
  const Vector g = obj.gradient(x);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f0) + norm(g) * norm(x));
  double a = alpha0;
  for (int j = 0; j <= rule.max_halvings; ++j) {
    const Vector T = obj.prox(add_scaled(x, -a, g));
    const double d2 = squared_distance(x, T);
    if (d2 == 0.0) return a;
    const double fT = obj.value(T);
    if (fT <= f0 - rule.sufficient_decrease / a * d2 + noise) return a;
    a *= rule.shrink;
  }
  throw NonConvergence("backtrack_alpha: no sufficient decrease after " + std::to_string(rule.max_halvings) +
                       " reductions");
}

double backtrack_alpha(const GapEvaluator& ev, VecView x, double alpha0, const Backtracking& rule) {
  return backtrack_alpha(gap_objective(ev), x, alpha0, rule);
}

Vector co_step(const VIProblem& problem, double lambda, double alpha, VecView x, bool pure_gap) {
  if (!problem.feasible_set().is_full_space())
    throw BadParameters("co_step: requires an unconstrained feasible set");
  if (!(lambda > 0.0)) throw BadParameters("co_step: lambda must be > 0");
  if (!(alpha >= 0.0)) throw BadParameters("co_step: alpha must be >= 0");
  const Vector F = problem.eval_F(x);
  Vector dir = scaled(lambda, matvec_transposed(problem.eval_jacobian(x), F));
  if (!pure_gap) axpy(-1.0, F, dir);
  return add_scaled(x, -alpha, dir);
}

}  // namespace gapvi
