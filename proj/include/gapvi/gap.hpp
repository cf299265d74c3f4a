#pragma once

#include <optional>

#include "gapvi/problem.hpp"

namespace gapvi {

// Everything one gap evaluation produces, so solvers can reuse F(x) and
// y_lambda(x) instead of recomputing them.
struct GapPoint {
  Vector F;
  Vector y;  // y_lambda(x) = Proj_X(x - lambda F(x))
  double gap = 0.0;
};

// Regularized (Fukushima) gap function
//   g(x) = max_{y in X} <F(x), x - y> - |x - y|^2 / (2 lambda)
// with maximizer y_lambda(x) and gradient
//   grad g(x) = F(x) + J(x)^T (x - y) + (y - x) / lambda.
// Only defined here on the feasible set; evaluations at infeasible points
// throw InfeasiblePoint.
class GapEvaluator {
 public:
  GapEvaluator(ProblemPtr problem, double lambda);

  const VIProblem& problem() const { return *problem_; }
  const ProblemPtr& problem_ptr() const { return problem_; }
  double lambda() const { return lambda_; }

  // Defined for any finite x (no feasibility requirement).
  Vector y_lambda(VecView x) const;

  GapPoint evaluate(VecView x) const;
  double value(VecView x) const;
  Vector gradient(VecView x) const;
  // Gradient from an already computed GapPoint at x.
  Vector gradient(VecView x, const GapPoint& at) const;

  // Tolerance used for the feasibility precondition.
  double feasibility_tol(VecView x) const;

 private:
  void require_feasible(VecView x) const;

  ProblemPtr problem_;
  double lambda_;
};

// g_{lambda1}(x) - g_{lambda2}(x), lambda1 > lambda2 > 0.
double d_gap_value(const GapEvaluator& ev1, const GapEvaluator& ev2, VecView x);

// Bound ||K|| + ||N|| ||I - lambda J|| on the Lipschitz constant of grad g
// for an affine map with Jacobian J, where K = J + J^T - I/lambda and
// N = I/lambda - J^T.
double affine_gap_lipschitz_bound(const Matrix& J, double lambda);

// H in F^(t) = t H + (1 - t) F.
struct Anchor {
  Mapping H;
  JacobianMap JH;
  std::optional<AffineForm> affine;
};

// Identity anchor H(x) = x.
Anchor monotone_anchor(std::size_t dim);
// H(x) = x - center.
Anchor centered_anchor(Vector center);

struct HomotopyMap {
  ProblemPtr base;
  Anchor anchor;
  double t = 0.0;
};

// VI over the same feasible set with F^(t) = t H + (1 - t) F and Jacobian
// t JH + (1 - t) J. t = 0 and t = 1 return the endpoint maps unchanged.
ProblemPtr deform(const HomotopyMap& map);

}  // namespace gapvi
