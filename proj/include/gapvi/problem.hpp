#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gapvi/feasible_set.hpp"
#include "gapvi/linalg.hpp"

namespace gapvi {

using Mapping = std::function<Vector(VecView)>;
using JacobianMap = std::function<Matrix(VecView)>;

// F(x) = M x + b. Lets solvers use exact operator norms.
struct AffineForm {
  Matrix M;
  Vector b;
};

// Segment [from, to], or the ray {from + s * (to - from) : s >= 0} when
// `ray` is set.
struct Segment {
  Vector from;
  Vector to;
  bool ray = false;
};

// Representation of a solution set that supports exact Euclidean distance
// and projection: finitely many points plus segments or rays. Continua that
// are only listed by representative points give distance upper bounds.
struct SolutionSet {
  std::vector<Vector> points;
  std::vector<Segment> segments;

  bool empty() const { return points.empty() && segments.empty(); }
  Vector project(VecView x) const;
  double distance(VecView x) const;
};

// Non-functional facts about an instance.
struct ProblemMetadata {
  double recommended_lambda = 1.0;
  std::optional<double> recommended_alpha;
  std::vector<Vector> critical_points;  // interior stationary points of the gap
  std::optional<double> critical_gap;  // gap at the critical points that are not solutions
  std::optional<Box> sampling_box;  // used when the feasible set is unbounded
  std::vector<std::string> notes;
};

struct ProblemSpec {
  std::string name;
  std::size_t dim = 0;
  Mapping F;
  JacobianMap jacobian;  // empty -> central finite differences
  std::optional<AffineForm> affine;
  std::vector<Vector> known_solutions;
  std::optional<SolutionSet> solution_set;
  ProblemMetadata metadata;
  // Skip the construction-time check that known solutions have zero gap.
  bool skip_solution_check = false;
};

// The triple (F, Jacobian of F, feasible set) of a variational inequality.
// Immutable; share through std::shared_ptr<const VIProblem>.
class VIProblem {
 public:
  VIProblem(ProblemSpec spec, FeasibleSet set);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const FeasibleSet& feasible_set() const { return set_; }
  const std::vector<Vector>& known_solutions() const { return known_solutions_; }
  const std::optional<SolutionSet>& solution_set() const { return solution_set_; }
  const ProblemMetadata& metadata() const { return metadata_; }
  const std::optional<AffineForm>& affine() const { return affine_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

  Vector eval_F(VecView x) const;

  // Jacobian J(x)_{ij} = dF_i/dx_j; analytic when provided.
  Matrix eval_jacobian(VecView x) const;
  Matrix finite_difference_jacobian(VecView x) const;

  // Distance to the solution set representation, or to the nearest listed
  // known solution. NaN when nothing is known.
  double distance_to_solutions(VecView x) const;

  const Mapping& mapping() const { return F_; }
  const JacobianMap& jacobian_map() const { return jacobian_; }

 private:
  std::string name_;
  std::size_t dim_;
  Mapping F_;
  JacobianMap jacobian_;
  std::optional<AffineForm> affine_;
  FeasibleSet set_;
  std::vector<Vector> known_solutions_;
  std::optional<SolutionSet> solution_set_;
  ProblemMetadata metadata_;
};

using ProblemPtr = std::shared_ptr<const VIProblem>;

// Finite-difference step (machine epsilon)^(1/3) * max(1, ||x||).
double fd_step(VecView x);

}  // namespace gapvi
