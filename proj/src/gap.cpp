#include "gapvi/gap.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gapvi/errors.hpp"

namespace gapvi {

GapEvaluator::GapEvaluator(ProblemPtr problem, double lambda) : problem_(std::move(problem)), lambda_(lambda) {
  if (!problem_) throw BadParameters("GapEvaluator: null problem");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw BadParameters("GapEvaluator: lambda must be > 0");
}

Vector GapEvaluator::y_lambda(VecView x) const {
  const Vector F = problem_->eval_F(x);
  return problem_->feasible_set().project(add_scaled(x, -lambda_, F));
}

double GapEvaluator::feasibility_tol(VecView x) const {
  return problem_->feasible_set().projection_options().tol * std::max(1.0, norm_inf(x));
}

void GapEvaluator::require_feasible(VecView x) const {
  if (!problem_->feasible_set().contains(x, feasibility_tol(x))) {
    std::ostringstream os;
    os << problem_->name() << ": gap evaluated at infeasible point (violation "
       << problem_->feasible_set().violation(x) << ")";
    throw InfeasiblePoint(os.str());
  }
}

GapPoint GapEvaluator::evaluate(VecView x) const {
  require_feasible(x);
  GapPoint p;
  p.F = problem_->eval_F(x);
  p.y = problem_->feasible_set().project(add_scaled(x, -lambda_, p.F));
  const Vector r = sub(x, p.y);
  const double linear = dot(p.F, r);
  const double quad = dot(r, r) / (2.0 * lambda_);
  p.gap = linear - quad;
  // g >= 0 on X. Allow roundoff, the residual infeasibility of x, and the projection error of iterative sets.
  double slack = 1e-12 * (1.0 + std::abs(linear) + quad);
  slack += 2.0 * problem_->feasible_set().violation(x) * (norm(p.F) + norm(r) / lambda_);
  slack += 64.0 * std::numeric_limits<double>::epsilon() * norm(p.F) * (norm(x) + lambda_ * norm(p.F));
  if (std::holds_alternative<HalfspaceIntersection>(problem_->feasible_set().variant()))
    slack += problem_->feasible_set().projection_options().tol * (norm(p.F) + norm(r) / lambda_);
  if (p.gap < -slack || std::isnan(p.gap)) {
    std::ostringstream os;
    os << problem_->name() << ": gap function negative at a feasible point (" << p.gap << ")";
    throw Error(os.str());
  }
  return p;
}

double GapEvaluator::value(VecView x) const { return evaluate(x).gap; }

Vector GapEvaluator::gradient(VecView x) const { return gradient(x, evaluate(x)); }

Vector GapEvaluator::gradient(VecView x, const GapPoint& at) const {
  const Vector r = sub(x, at.y);
  const auto& aff = problem_->affine();
  Vector g = aff ? matvec_transposed(aff->M, r) : matvec_transposed(problem_->eval_jacobian(x), r);
  axpy(1.0, at.F, g);
  axpy(-1.0 / lambda_, r, g);
  return g;
}

double d_gap_value(const GapEvaluator& ev1, const GapEvaluator& ev2, VecView x) {
  if (!(ev1.lambda() > ev2.lambda())) throw BadParameters("d_gap_value: requires lambda1 > lambda2");
  if (ev1.problem_ptr() != ev2.problem_ptr()) throw BadParameters("d_gap_value: evaluators differ in problem");
  return ev1.value(x) - ev2.value(x);
}

double affine_gap_lipschitz_bound(const Matrix& J, double lambda) {
  if (!J.square()) throw BadParameters("affine_gap_lipschitz_bound: Jacobian must be square");
  if (!(lambda > 0.0)) throw BadParameters("affine_gap_lipschitz_bound: lambda must be > 0");
  const std::size_t n = J.rows();
  const Matrix I = Matrix::identity(n);
  const Matrix Jt = J.transposed();
  const Matrix K = add(add(J, Jt), scaled(-1.0 / lambda, I));
  const Matrix N = combine(1.0 / lambda, I, -1.0, Jt);
  const Matrix R = combine(1.0, I, -lambda, J);
  return spectral_norm(K) + spectral_norm(N) * spectral_norm(R);
}

Anchor monotone_anchor(std::size_t dim) {
  if (dim == 0) throw BadParameters("monotone_anchor: dim must be >= 1");
  Anchor a;
  a.H = [](VecView x) { return Vector(x.begin(), x.end()); };
  a.JH = [dim](VecView) { return Matrix::identity(dim); };
  a.affine = AffineForm{Matrix::identity(dim), Vector(dim, 0.0)};
  return a;
}

Anchor centered_anchor(Vector center) {
  const std::size_t dim = center.size();
  if (dim == 0) throw BadParameters("centered_anchor: empty center");
  Anchor a;
  a.H = [center](VecView x) { return sub(x, center); };
  a.JH = [dim](VecView) { return Matrix::identity(dim); };
  a.affine = AffineForm{Matrix::identity(dim), scaled(-1.0, center)};
  return a;
}

namespace {
bool anchor_affine(const Anchor& a) { return a.affine.has_value(); }
}  // namespace

ProblemPtr deform(const HomotopyMap& map) {
  if (!map.base) throw BadParameters("deform: null base problem");
  const double t = map.t;
  if (!(t >= 0.0 && t <= 1.0)) throw BadParameters("deform: t must lie in [0, 1]");
  if (t == 0.0) return map.base;

  const VIProblem& base = *map.base;
  ProblemSpec spec;
  std::ostringstream name;
  name << base.name() << "@t=" << t;
  spec.name = name.str();
  spec.dim = base.dim();
  spec.metadata.recommended_lambda = base.metadata().recommended_lambda;
  spec.metadata.sampling_box = base.metadata().sampling_box;

  if (t == 1.0) {
    spec.F = map.anchor.H;
    spec.jacobian = map.anchor.JH;
    spec.affine = map.anchor.affine;
    return std::make_shared<VIProblem>(std::move(spec), base.feasible_set());
  }

  if (base.affine() && anchor_affine(map.anchor)) {
    const AffineForm& h = *map.anchor.affine;
    const AffineForm& f = *base.affine();
    AffineForm a{combine(t, h.M, 1.0 - t, f.M), add(scaled(t, h.b), scaled(1.0 - t, f.b))};
    spec.F = [M = a.M, b = a.b](VecView x) {
      Vector y = matvec(M, x);
      axpy(1.0, b, y);
      return y;
    };
    spec.jacobian = [M = a.M](VecView) { return M; };
    spec.affine = std::move(a);
    return std::make_shared<VIProblem>(std::move(spec), base.feasible_set());
  }
  const ProblemPtr b = map.base;
  const Anchor anchor = map.anchor;
  spec.F = [b, anchor, t](VecView x) {
    Vector out = scaled(t, anchor.H(x));
    axpy(1.0 - t, b->eval_F(x), out);
    return out;
  };
  spec.jacobian = [b, anchor, t](VecView x) { return combine(t, anchor.JH(x), 1.0 - t, b->eval_jacobian(x)); };
  return std::make_shared<VIProblem>(std::move(spec), base.feasible_set());
}

}  // namespace gapvi
