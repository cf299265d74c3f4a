#include "gapvi/homotopy.hpp"

#include <cmath>
#include <sstream>

#include "gapvi/errors.hpp"

namespace gapvi {

void HomotopyConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw BadParameters("delta must lie in (0, 1)");
  if (!(eps_gap_inner >= 0.0)) throw BadParameters("eps_gap_inner must be >= 0");
  if (!(t_floor > 0.0 && t_floor < 1.0)) throw BadParameters("t_floor must lie in (0, 1)");
  if (max_outer < 1) throw BadParameters("max_outer must be >= 1");
  if (max_inner_i < 1) throw BadParameters("max_inner_i must be >= 1");
  inner.validate();
}

std::string to_string(HomotopyStatus s) {
  switch (s) {
    case HomotopyStatus::SolvedVIP:
      return "SolvedVIP";
    case HomotopyStatus::StalledInner:
      return "StalledInner";
    case HomotopyStatus::MaxOuter:
      return "MaxOuter";
  }
  return "unknown";
}

namespace {

class Runner {
 public:
  Runner(ProblemPtr problem, const HomotopyConfig& config)
      : base_(std::move(problem)),
        config_(config),
        anchor_(config.anchor ? *config.anchor : monotone_anchor(base_->dim())) {}

  HomotopyResult run(Vector x) {
    if (!base_->affine()) {
      res_.warnings.push_back(base_->name() +
                              ": mapping is not affine; convergence of the continuation is outside its theory");
    }
    if (x.size() != base_->dim()) throw BadParameters("solve_homotopy: x0 has wrong dimension");

    double t = 1.0;
    SolverResult init = solve_at(t, x);
    if (init.status != SolveStatus::SolvedVIP) return finish(HomotopyStatus::StalledInner, init.final_x);
    x = init.final_x;

    while (t >= config_.t_floor) {
      if (res_.outer_steps >= config_.max_outer) return finish(HomotopyStatus::MaxOuter, x);
      ++res_.outer_steps;
      bool accepted = false;
      for (int i = 1; i <= config_.max_inner_i; ++i) {
        const double ti = t * (1.0 - std::pow(config_.delta, i));
        if (!(ti < t)) break;
        SolverResult r = solve_at(ti, x);
        if (r.status == SolveStatus::SolvedVIP) {
          x = std::move(r.final_x);
          t = ti;
          accepted = true;
          break;
        }
        ++res_.rejected_probes;
        res_.path.pop_back();
      }
      if (!accepted) return finish(HomotopyStatus::StalledInner, x);
    }

    SolverResult last = solve_at(0.0, x);
    return finish(last.status == SolveStatus::SolvedVIP ? HomotopyStatus::SolvedVIP : HomotopyStatus::StalledInner,
                  last.final_x);
  }

 private:
  SolverResult solve_at(double t, VecView x) {
    const ProblemPtr p = deform(HomotopyMap{base_, anchor_, t});
    SolverConfig cfg = config_.inner;
    cfg.eps_gap = config_.eps_gap_inner;
    cfg.record_trace = cfg.record_trace && config_.record_trace;
    if (config_.recompute_alpha && p->affine()) cfg.alpha = 0.9 / affine_gap_lipschitz_bound(p->affine()->M, cfg.lambda);

    SolverResult r = solve_pg(p, cfg, x, t);
    res_.total_inner_iterations += r.iterations;
    for (auto& w : r.warnings) res_.warnings.push_back(std::move(w));
    if (config_.record_trace) {
      for (auto& rec : r.trace.records) {
        rec.k = next_k_++;
        if (!rec.x.empty()) rec.dist_to_solution = base_->distance_to_solutions(rec.x);
        Vector().swap(rec.x);
        res_.trace.records.push_back(std::move(rec));
      }
    } else {
      next_k_ += static_cast<long>(r.trace.records.size());
    }
    r.trace.records.clear();
    res_.path.push_back(PathEntry{t, r.final_x, r.iterations, r.status, r.final_gap, cfg.alpha});
    return r;
  }

  HomotopyResult finish(HomotopyStatus status, Vector x) {
    res_.status = status;
    res_.final_gap = GapEvaluator(base_, config_.inner.lambda).value(x);
    res_.final_x = std::move(x);
    return std::move(res_);
  }

  ProblemPtr base_;
  const HomotopyConfig& config_;
  Anchor anchor_;
  HomotopyResult res_;
  long next_k_ = 0;
};

}  // namespace

HomotopyResult solve_homotopy(ProblemPtr problem, const HomotopyConfig& config, std::optional<Vector> x0) {
  if (!problem) throw BadParameters("solve_homotopy: null problem");
  config.validate();
  Vector start = x0 ? std::move(*x0) : problem->feasible_set().reference_point();
  return Runner(std::move(problem), config).run(std::move(start));
}

}  // namespace gapvi
