#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapvi/prox_grad.hpp"

namespace gapvi {

struct HomotopyConfig {
  double delta = 0.5;
  SolverConfig inner;
  double eps_gap_inner = 1e-10;
  double t_floor = 1e-8;
  int max_outer = 1000;
  int max_inner_i = 60;
  // Replace inner.alpha by 0.9 / L(t) for affine problems, with L(t) the
  // operator-norm bound on the Lipschitz constant of grad g for F^(t).
  bool recompute_alpha = true;
  // Keep per-iteration rows of every inner solve in HomotopyResult::trace.
  bool record_trace = true;
  // Defaults to the identity anchor.
  std::optional<Anchor> anchor;

  void validate() const;
};

enum class HomotopyStatus { SolvedVIP, StalledInner, MaxOuter };

std::string to_string(HomotopyStatus s);

struct PathEntry {
  double t = 0.0;
  Vector x;
  long inner_iterations = 0;
  SolveStatus inner_status = SolveStatus::MaxIters;
  double gap = 0.0;  // gap of the deformed problem at x
  double alpha = 0.0;
};

struct HomotopyResult {
  HomotopyStatus status = HomotopyStatus::StalledInner;
  Vector final_x;
  double final_gap = 0.0;  // gap of the original problem
  std::vector<PathEntry> path;
  long total_inner_iterations = 0;
  int outer_steps = 0;
  int rejected_probes = 0;
  Trace trace;  // k is cumulative over all inner solves
  std::vector<std::string> warnings;
};

// Continuation from the anchor problem (t = 1) to the target (t = 0).
// Each outer step probes t_i = t (1 - delta^i), i = 1, 2, ..., warm-started
// from the current point, and accepts the first probe whose inner solve
// reaches gap <= eps_gap_inner. Below t_floor a final t = 0 solve decides
// the status. `x0` seeds the t = 1 solve (default: the set's reference point).
HomotopyResult solve_homotopy(ProblemPtr problem, const HomotopyConfig& config,
                              std::optional<Vector> x0 = std::nullopt);

}  // namespace gapvi
