#include "gapvi/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "gapvi/errors.hpp"

namespace gapvi {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void clamp_into(const Box& box, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(std::max(x[i], box.lower[i]), box.upper[i]);
}

double box_violation(const Box& box, VecView z) {
  double v = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    v = std::max(v, box.lower[i] - z[i]);
    v = std::max(v, z[i] - box.upper[i]);
  }
  return v;
}

void validate_box(const Box& box) {
  if (box.lower.size() != box.upper.size()) throw ValidationError("box: bound dimensions differ");
  for (std::size_t i = 0; i < box.lower.size(); ++i) {
    if (std::isnan(box.lower[i]) || std::isnan(box.upper[i]))
      throw ValidationError("box: NaN bound");
    if (box.lower[i] > box.upper[i]) throw ValidationError("box: lower > upper");
  }
}

void project_halfspace(const Halfspace& h, double a_sq, std::span<double> x) {
  const double excess = dot(h.a, x) - h.b;
  if (excess > 0.0) axpy(-excess / a_sq, h.a, x);
}

// Orthonormal basis of span(rows) by modified Gram-Schmidt.
std::vector<Vector> orthonormalize(const std::vector<Vector>& rows) {
  std::vector<Vector> basis;
  for (const auto& r : rows) {
    Vector v = r;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) axpy(-dot(q, v), q, v);
    const double n = norm(v);
    if (n > 1e-10 * std::max(1.0, norm(r))) {
      for (double& e : v) e /= n;
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

Matrix complement_projector(std::size_t dim, const std::vector<Vector>& normals) {
  Matrix D = Matrix::identity(dim);
  for (const auto& q : orthonormalize(normals))
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) D(i, j) -= q[i] * q[j];
  return D;
}

}  // namespace

Vector project_scaled_simplex(VecView v, double mass) {
  const std::size_t n = v.size();
  if (n == 0) return {};
  // Project v / mass onto the unit simplex, then rescale.
  Vector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / mass;
  Vector sorted = u;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cumsum += sorted[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  Vector out(n);
  double total = 0.0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = mass * std::max(u[i] - theta, 0.0);
    total += out[i];
    support += out[i] > 0.0;
  }
  // Spread the rounding residual of the mass constraint over the support.
  if (support > 0) {
    const double shift = (mass - total) / static_cast<double>(support);
    for (double& o : out)
      if (o > 0.0) o = std::max(o + shift, 0.0);
  }
  return out;
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  Box b{std::move(lower), std::move(upper)};
  validate_box(b);
  const std::size_t d = b.lower.size();
  return FeasibleSet(d, std::move(b), {});
}

FeasibleSet FeasibleSet::box(std::size_t dim, double lower, double upper) {
  return box(Vector(dim, lower), Vector(dim, upper));
}

FeasibleSet FeasibleSet::simplex_product(std::size_t dim, std::vector<SimplexBlock> blocks) {
  std::size_t next = 0;
  for (const auto& b : blocks) {
    if (b.begin != next) throw ValidationError("simplex blocks must partition a prefix of coordinates");
    if (b.end <= b.begin) throw ValidationError("simplex block is empty");
    if (!(b.mass > 0.0) || !std::isfinite(b.mass)) throw ValidationError("simplex mass must be positive");
    next = b.end;
  }
  if (next > dim) throw ValidationError("simplex blocks exceed dimension");
  return FeasibleSet(dim, ScaledSimplexProduct{dim, std::move(blocks)}, {});
}

FeasibleSet FeasibleSet::halfspaces(std::vector<Halfspace> rows, Vector witness,
                                    std::optional<Box> box, ProjectionOptions opts) {
  const std::size_t d = witness.size();
  if (d == 0) throw ValidationError("halfspace intersection needs a witness point");
  if (box) {
    validate_box(*box);
    if (box->lower.size() != d) throw ValidationError("box dimension differs from witness");
    if (box_violation(*box, witness) > 0.0) throw ValidationError("witness violates box");
  }
  for (const auto& h : rows) {
    if (h.a.size() != d) throw ValidationError("halfspace normal has wrong dimension");
    if (norm(h.a) == 0.0) throw ValidationError("halfspace normal is zero");
    if (dot(h.a, witness) - h.b > 1e-12 * std::max(1.0, std::abs(h.b)))
      throw ValidationError("witness violates a halfspace (set may be empty)");
  }
  if (!(opts.tol > 0.0) || opts.max_iters <= 0) throw BadParameters("projection options");
  return FeasibleSet(d, HalfspaceIntersection{std::move(rows), std::move(box), std::move(witness)}, opts);
}

FeasibleSet FeasibleSet::full_space(std::size_t dim) { return FeasibleSet(dim, FullSpace{dim}, {}); }

std::string FeasibleSet::kind() const {
  return std::visit(Overloaded{
                        [](const Box&) { return std::string("box"); },
                        [](const ScaledSimplexProduct&) { return std::string("simplex_product"); },
                        [](const HalfspaceIntersection&) { return std::string("halfspaces"); },
                        [](const FullSpace&) { return std::string("full_space"); },
                    },
                    set_);
}

bool FeasibleSet::is_bounded() const {
  auto finite_box = [](const Box& b) {
    for (std::size_t i = 0; i < b.lower.size(); ++i)
      if (!std::isfinite(b.lower[i]) || !std::isfinite(b.upper[i])) return false;
    return true;
  };
  return std::visit(Overloaded{
                        [&](const Box& b) { return finite_box(b); },
                        [&](const ScaledSimplexProduct& s) {
                          return !s.blocks.empty() && s.blocks.back().end == dim_;
                        },
                        [&](const HalfspaceIntersection& h) { return h.box && finite_box(*h.box); },
                        [](const FullSpace&) { return false; },
                    },
                    set_);
}

Vector FeasibleSet::project(VecView z) const {
  if (z.size() != dim_) throw BadParameters("project: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const Box& b) {
            Vector x(z.begin(), z.end());
            clamp_into(b, x);
            return x;
          },
          [&](const ScaledSimplexProduct& s) {
            Vector x(z.begin(), z.end());
            for (const auto& blk : s.blocks) {
              const Vector p = project_scaled_simplex(z.subspan(blk.begin, blk.end - blk.begin), blk.mass);
              std::copy(p.begin(), p.end(), x.begin() + static_cast<std::ptrdiff_t>(blk.begin));
            }
            return x;
          },
          [&](const HalfspaceIntersection& h) {
            Vector x(z.begin(), z.end());
            if (contains(z, 0.0)) return x;
            // Dykstra: one correction vector per component set.
            const std::size_t m = h.rows.size() + (h.box ? 1 : 0);
            std::vector<Vector> incr(m, Vector(dim_, 0.0));
            std::vector<double> a_sq(h.rows.size());
            for (std::size_t i = 0; i < h.rows.size(); ++i) a_sq[i] = dot(h.rows[i].a, h.rows[i].a);
            Vector prev(dim_);
            Vector shifted(dim_);
            const double stop = 1e-2 * opts_.tol;
            for (int it = 0; it < opts_.max_iters; ++it) {
              prev = x;
              for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < dim_; ++j) shifted[j] = x[j] + incr[i][j];
                x = shifted;
                if (i < h.rows.size())
                  project_halfspace(h.rows[i], a_sq[i], x);
                else
                  clamp_into(*h.box, x);
                for (std::size_t j = 0; j < dim_; ++j) incr[i][j] = shifted[j] - x[j];
              }
              if (distance(x, prev) <= stop && violation(x) <= stop) return x;
            }
            throw NonConvergence("Dykstra projection did not reach tolerance in " +
                                 std::to_string(opts_.max_iters) + " sweeps");
          },
          [&](const FullSpace&) { return Vector(z.begin(), z.end()); },
      },
      set_);
}

double FeasibleSet::violation(VecView z) const {
  if (z.size() != dim_) throw BadParameters("violation: dimension mismatch");
  return std::visit(Overloaded{
                        [&](const Box& b) { return box_violation(b, z); },
                        [&](const ScaledSimplexProduct& s) {
                          double v = 0.0;
                          for (const auto& blk : s.blocks) {
                            double sum = 0.0;
                            for (std::size_t i = blk.begin; i < blk.end; ++i) {
                              v = std::max(v, -z[i]);
                              sum += z[i];
                            }
                            v = std::max(v, std::abs(sum - blk.mass));
                          }
                          return v;
                        },
                        [&](const HalfspaceIntersection& h) {
                          double v = h.box ? box_violation(*h.box, z) : 0.0;
                          for (const auto& row : h.rows) v = std::max(v, dot(row.a, z) - row.b);
                          return v;
                        },
                        [](const FullSpace&) { return 0.0; },
                    },
                    set_);
}

bool FeasibleSet::contains(VecView z, double tol) const {
  if (z.size() != dim_) return false;
  if (!all_finite(z)) return false;
  return violation(z) <= tol;
}

Vector FeasibleSet::reference_point() const {
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          Vector x(dim_);
                          for (std::size_t i = 0; i < dim_; ++i) {
                            const bool lo = std::isfinite(b.lower[i]);
                            const bool hi = std::isfinite(b.upper[i]);
                            x[i] = (lo && hi) ? 0.5 * (b.lower[i] + b.upper[i])
                                              : std::min(std::max(0.0, b.lower[i]), b.upper[i]);
                          }
                          return x;
                        },
                        [&](const ScaledSimplexProduct& s) {
                          Vector x(dim_, 0.0);
                          for (const auto& blk : s.blocks) {
                            const double share = blk.mass / static_cast<double>(blk.end - blk.begin);
                            for (std::size_t i = blk.begin; i < blk.end; ++i) x[i] = share;
                          }
                          return x;
                        },
                        [](const HalfspaceIntersection& h) { return h.witness; },
                        [&](const FullSpace&) { return Vector(dim_, 0.0); },
                    },
                    set_);
}

Matrix FeasibleSet::projection_derivative(VecView z) const {
  return std::visit(
      Overloaded{
          [&](const Box& b) {
            Matrix D(dim_, dim_);
            for (std::size_t i = 0; i < dim_; ++i)
              D(i, i) = (z[i] > b.lower[i] && z[i] < b.upper[i]) ? 1.0 : 0.0;
            return D;
          },
          [&](const ScaledSimplexProduct& s) {
            const Vector y = project(z);
            Matrix D = Matrix::identity(dim_);
            for (const auto& blk : s.blocks) {
              std::vector<std::size_t> support;
              for (std::size_t i = blk.begin; i < blk.end; ++i) {
                D(i, i) = 0.0;
                if (y[i] > 0.0) support.push_back(i);
              }
              const double w = 1.0 / static_cast<double>(support.size());
              for (std::size_t i : support)
                for (std::size_t j : support) D(i, j) = (i == j ? 1.0 : 0.0) - w;
            }
            return D;
          },
          [&](const HalfspaceIntersection& h) {
            const Vector y = project(z);
            std::vector<Vector> normals;
            const double act = 1e3 * opts_.tol;
            for (const auto& row : h.rows)
              if (dot(row.a, y) - row.b >= -act * std::max(1.0, norm(row.a))) normals.push_back(row.a);
            if (h.box) {
              for (std::size_t i = 0; i < dim_; ++i) {
                if (y[i] <= h.box->lower[i] + act || y[i] >= h.box->upper[i] - act) {
                  Vector e(dim_, 0.0);
                  e[i] = 1.0;
                  normals.push_back(std::move(e));
                }
              }
            }
            return complement_projector(dim_, normals);
          },
          [&](const FullSpace&) { return Matrix::identity(dim_); },
      },
      set_);
}

std::vector<std::int8_t> FeasibleSet::active_signature(VecView z) const {
  return std::visit(
      Overloaded{
          [&](const Box& b) {
            std::vector<std::int8_t> s(dim_, 0);
            for (std::size_t i = 0; i < dim_; ++i) s[i] = z[i] <= b.lower[i] ? -1 : (z[i] >= b.upper[i] ? 1 : 0);
            return s;
          },
          [&](const ScaledSimplexProduct&) {
            const Vector y = project(z);
            std::vector<std::int8_t> s(dim_, 0);
            for (std::size_t i = 0; i < dim_; ++i) s[i] = y[i] > 0.0 ? 1 : 0;
            return s;
          },
          [&](const HalfspaceIntersection& h) {
            const Vector y = project(z);
            const double act = 1e3 * opts_.tol;
            std::vector<std::int8_t> s;
            for (const auto& row : h.rows)
              s.push_back(dot(row.a, y) - row.b >= -act * std::max(1.0, norm(row.a)) ? 1 : 0);
            if (h.box)
              for (std::size_t i = 0; i < dim_; ++i)
                s.push_back(y[i] <= h.box->lower[i] + act ? -1 : (y[i] >= h.box->upper[i] - act ? 1 : 0));
            return s;
          },
          [&](const FullSpace&) { return std::vector<std::int8_t>{}; },
      },
      set_);
}

}  // namespace gapvi
