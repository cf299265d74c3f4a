#include "gapvi/problem.hpp"

#include <cmath>
#include <limits>

#include "gapvi/errors.hpp"

namespace gapvi {
namespace {

Vector project_onto_segment(const Segment& s, VecView x) {
  const Vector dir = sub(s.to, s.from);
  const double len_sq = dot(dir, dir);
  if (len_sq == 0.0) return s.from;
  double t = dot(sub(x, s.from), dir) / len_sq;
  t = std::max(t, 0.0);
  if (!s.ray) t = std::min(t, 1.0);
  return add_scaled(s.from, t, dir);
}

}  // namespace

Vector SolutionSet::project(VecView x) const {
  if (empty()) throw BadParameters("empty solution set");
  Vector best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const double d = squared_distance(p, x);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  for (const auto& s : segments) {
    Vector p = project_onto_segment(s, x);
    const double d = squared_distance(p, x);
    if (d < best_d) {
      best_d = d;
      best = std::move(p);
    }
  }
  return best;
}

double SolutionSet::distance(VecView x) const { return gapvi::distance(project(x), x); }

double fd_step(VecView x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, norm(x));
}

VIProblem::VIProblem(ProblemSpec spec, FeasibleSet set)
    : name_(std::move(spec.name)),
      dim_(spec.dim),
      F_(std::move(spec.F)),
      jacobian_(std::move(spec.jacobian)),
      affine_(std::move(spec.affine)),
      set_(std::move(set)),
      known_solutions_(std::move(spec.known_solutions)),
      solution_set_(std::move(spec.solution_set)),
      metadata_(std::move(spec.metadata)) {
  if (dim_ == 0) throw ValidationError(name_ + ": dimension must be positive");
  if (!F_) throw ValidationError(name_ + ": mapping is empty");
  if (set_.dim() != dim_) throw ValidationError(name_ + ": feasible set dimension differs");
  if (affine_ && (affine_->M.rows() != dim_ || affine_->M.cols() != dim_ || affine_->b.size() != dim_))
    throw ValidationError(name_ + ": affine form has wrong shape");
  if (!(metadata_.recommended_lambda > 0.0)) throw ValidationError(name_ + ": lambda must be positive");
  for (const auto& xs : known_solutions_) {
    if (xs.size() != dim_) throw ValidationError(name_ + ": known solution has wrong dimension");
    if (spec.skip_solution_check) continue;
    // Gap at lambda = 1: <F, x - y> - |x - y|^2 / 2 with y = P(x - F).
    const Vector F = eval_F(xs);
    const Vector y = set_.project(sub(xs, F));
    const Vector r = sub(xs, y);
    const double gap = dot(F, r) - 0.5 * dot(r, r);
    if (!(gap <= 1e-8)) throw ValidationError(name_ + ": listed solution has gap " + std::to_string(gap));
  }
}

Vector VIProblem::eval_F(VecView x) const {
  if (x.size() != dim_) throw BadParameters(name_ + ": eval_F dimension mismatch");
  return F_(x);
}

Matrix VIProblem::eval_jacobian(VecView x) const {
  if (x.size() != dim_) throw BadParameters(name_ + ": eval_jacobian dimension mismatch");
  if (jacobian_) return jacobian_(x);
  return finite_difference_jacobian(x);
}

Matrix VIProblem::finite_difference_jacobian(VecView x) const {
  const double h = fd_step(x);
  Matrix J(dim_, dim_);
  Vector xp(x.begin(), x.end());
  Vector xm(x.begin(), x.end());
  for (std::size_t j = 0; j < dim_; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const Vector fp = F_(xp);
    const Vector fm = F_(xm);
    for (std::size_t i = 0; i < dim_; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

double VIProblem::distance_to_solutions(VecView x) const {
  if (solution_set_ && !solution_set_->empty()) return solution_set_->distance(x);
  if (known_solutions_.empty()) return std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : known_solutions_) best = std::min(best, distance(s, x));
  return best;
}

}  // namespace gapvi
