#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapvi/gap.hpp"

namespace gapvi {

// Samples are drawn from the feasible set intersected with `box`. When `box`
// is absent, the problem's sampling box is used, and failing that the set
// itself (which must then be bounded). `anchor_points` come first in every
// sample plan, so a plan for a larger region can extend a smaller one.
struct SampleRegion {
  std::optional<Box> box;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  std::vector<Vector> anchor_points;
};

// Deterministic feasible samples: anchors, then n_samples draws (uniform on
// boxes, Dirichlet on simplex blocks, rejection with a projection fallback on
// halfspace sets).
std::vector<Vector> sample_points(const VIProblem& problem, const SampleRegion& region);

struct LipschitzEstimate {
  double value = 0.0;    // max(safety * sampled, analytic)
  double sampled = 0.0;  // largest observed difference quotient
  std::optional<double> refined;  // local search part of `sampled` (non-affine maps)
  std::optional<double> analytic;
  std::size_t n_pairs = 0;
};

inline constexpr double kLipschitzSafety = 1.2;

// Difference quotients of grad g over consecutive sample pairs and short
// local pairs. For non-affine F, a coordinate search from a fixed seeded set
// of starts (independent of n_samples) maximizes the short-pair quotient.
// For affine F, also the largest operator norm of the local
// affine piece K + N D (I - lambda J) of grad g at the samples, where D is
// the projection derivative at x - lambda F(x).
LipschitzEstimate estimate_lipschitz_detailed(const GapEvaluator& ev, const SampleRegion& region);
double estimate_lipschitz(const GapEvaluator& ev, const SampleRegion& region);

struct PebEstimate {
  double value = 0.0;  // max dist(x, S) / |x - T_alpha(x)|
  std::size_t n_in_level_set = 0;
  std::size_t n_drawn = 0;
  Vector witness;
};

// Empirical lower bound on the level-set error bound constant over
// {x : g(x) <= nu}. Throws NoSamplesInLevelSet when no sample qualifies.
PebEstimate estimate_peb_constant(const GapEvaluator& ev, const SolutionSet& solutions, double nu, double alpha,
                                  const SampleRegion& region);

struct MintyViolation {
  Vector candidate;
  Vector x;
  double value = 0.0;  // <F(x), x - candidate>
};

struct MintyWitness {
  std::vector<MintyViolation> violations;  // one per candidate, the most negative found
};

inline constexpr double kMintyTolerance = 1e-9;

// Searches the samples and `probes` for <F(x), x - x*> < -tol for each
// candidate x*. Returns a witness only when every candidate is violated.
std::optional<MintyWitness> minty_violation_search(const VIProblem& problem, const std::vector<Vector>& candidates,
                                                   const SampleRegion& region, double tol = kMintyTolerance,
                                                   const std::vector<Vector>& probes = {});

// <F(x) - F(x'), x - x'>
double monotonicity_pair_value(const VIProblem& problem, VecView x, VecView x2);

struct MonotonicityReport {
  double min_ratio = 0.0;  // min <F(x) - F(x'), x - x'> / |x - x'|^2
  Vector x;
  Vector x2;
  double pair_value = 0.0;
  std::size_t n_pairs = 0;
  bool monotone_on_samples() const { return min_ratio >= 0.0; }
};

MonotonicityReport monotonicity_probe(const VIProblem& problem, const SampleRegion& region);

struct RestrictedMonotonicityReport {
  double min_ratio = 0.0;  // min <F(x) - F(P x), x - P x> / dist(x, S)^2
  Vector witness;
  std::size_t n_used = 0;
};

// Throws DegenerateRegion when every sample lies in the solution set.
RestrictedMonotonicityReport restricted_strong_monotonicity_probe(const VIProblem& problem,
                                                                  const SolutionSet& solutions,
                                                                  const SampleRegion& region);

struct PropertyResult {
  std::string name;
  std::size_t n_checked = 0;
  std::size_t n_violations = 0;
  double worst_slack = 0.0;  // max of lhs - rhs over the checked samples
  std::vector<Vector> witnesses;
  bool surrogate = false;  // uses the projected-gradient residual for dist(0, subdifferential)
  bool gating = true;      // counts toward the suite verdict
};

struct PropertyReport {
  std::string problem;
  double lambda = 0.0;
  double alpha = 0.0;
  double L = 0.0;
  double rho = 0.0;
  double slack = 0.0;
  std::vector<PropertyResult> properties;

  const PropertyResult& get(const std::string& name) const;
  // Violations across gating properties.
  std::size_t gating_violations() const;
  std::string to_json(int indent = 2) const;
};

struct SuiteConfig {
  double alpha = 0.0;
  std::optional<double> L;  // estimated over the region when absent
  double rho = 0.0;
  double slack = 1e-8;
  std::size_t max_witnesses = 5;
};

// Checks at each sample x (and consecutive pairs (x, u)):
//   prop_ii    E_a(x) = g(x) - a G_a(x)
//   prop_iii   g(T) <= g(x) - (2/a - L - rho)/2 |x - T|^2
//   prop_iv    (1 - a rho)/(2 a^2) |x - T|^2 <= G_a(x)
//   lemma      g(T) - g(u) <= [(1/a + L)|x-u|^2 - (1/a - L)|x-T|^2 - (1/a - rho)|u-T|^2] / 2
//   descent    g(T) <= g(x)
//   prop_v..vii with s(x) = |x - T_b(x)| / b, b = 1e-3 min(a, 1/L) (surrogate, not gating)
// Tolerances are slack * (1 + magnitude of the compared terms).
PropertyReport run_property_suite(const GapEvaluator& ev, const SuiteConfig& config, const SampleRegion& region);

}  // namespace gapvi
