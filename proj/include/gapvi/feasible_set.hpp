#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gapvi/linalg.hpp"

namespace gapvi {

// Componentwise bounds; +-infinity marks an open side.
struct Box {
  Vector lower;
  Vector upper;
};

// Coordinates [begin, end) sum to `mass` and are nonnegative.
struct SimplexBlock {
  std::size_t begin = 0;
  std::size_t end = 0;
  double mass = 1.0;
};

// Product of scaled simplices over a prefix of the coordinates; any
// coordinates after the last block are unconstrained.
struct ScaledSimplexProduct {
  std::size_t dim = 0;
  std::vector<SimplexBlock> blocks;
};

// <a, x> <= b
struct Halfspace {
  Vector a;
  double b = 0.0;
};

struct HalfspaceIntersection {
  std::vector<Halfspace> rows;
  std::optional<Box> box;
  Vector witness;  // a certified feasible point
};

struct FullSpace {
  std::size_t dim = 0;
};

struct ProjectionOptions {
  double tol = 1e-10;
  int max_iters = 10000;
};

// Closed convex set with a Euclidean projection oracle. Immutable after
// construction; the factories validate the variant invariants.
class FeasibleSet {
 public:
  using Variant = std::variant<Box, ScaledSimplexProduct, HalfspaceIntersection, FullSpace>;

  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet box(std::size_t dim, double lower, double upper);
  static FeasibleSet simplex_product(std::size_t dim, std::vector<SimplexBlock> blocks);
  static FeasibleSet halfspaces(std::vector<Halfspace> rows, Vector witness,
                                std::optional<Box> box = std::nullopt,
                                ProjectionOptions opts = {});
  static FeasibleSet full_space(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Variant& variant() const { return set_; }
  const ProjectionOptions& projection_options() const { return opts_; }
  std::string kind() const;

  bool is_bounded() const;
  bool is_full_space() const { return std::holds_alternative<FullSpace>(set_); }

  // Euclidean projection. Exact for Box, ScaledSimplexProduct and FullSpace;
  // Dykstra's method for HalfspaceIntersection (throws NonConvergence).
  Vector project(VecView z) const;

  // True iff every defining constraint is violated by at most tol.
  bool contains(VecView z, double tol) const;

  // Largest constraint violation (0 for feasible points).
  double violation(VecView z) const;

  // A feasible point: box midpoint (or clamp of 0), simplex barycenters,
  // the stored witness, or the origin.
  Vector reference_point() const;

  // Derivative of the projection at z on the face containing project(z):
  // the orthogonal projector onto the tangent subspace of the active face.
  Matrix projection_derivative(VecView z) const;

  // Combinatorial pattern of the face containing project(z). Two inputs with
  // equal signatures are projected by the same affine piece.
  std::vector<std::int8_t> active_signature(VecView z) const;

 private:
  FeasibleSet(std::size_t dim, Variant v, ProjectionOptions opts)
      : dim_(dim), set_(std::move(v)), opts_(opts) {}

  std::size_t dim_;
  Variant set_;
  ProjectionOptions opts_;
};

// Projection of v onto {h >= 0, sum h = mass} (sort and threshold).
Vector project_scaled_simplex(VecView v, double mass);

}  // namespace gapvi
