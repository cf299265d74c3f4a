#include "gapvi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "gapvi/errors.hpp"
#include "gapvi/prox_grad.hpp"
#include "gapvi/random.hpp"

namespace gapvi {
namespace {

constexpr std::uint64_t kPerturbSeed = 0x9E3779B97F4A7C15ULL;
constexpr std::size_t kRefineStarts = 16;

Box intersect(const Box& a, const Box& b) {
  Box out{a.lower, a.upper};
  for (std::size_t i = 0; i < out.lower.size(); ++i) {
    out.lower[i] = std::max(a.lower[i], b.lower[i]);
    out.upper[i] = std::min(a.upper[i], b.upper[i]);
  }
  return out;
}

void require_bounded(const Box& b) {
  for (std::size_t i = 0; i < b.lower.size(); ++i) {
    if (!std::isfinite(b.lower[i]) || !std::isfinite(b.upper[i]))
      throw DegenerateRegion("sampling region is unbounded; supply a sampling box");
    if (b.lower[i] > b.upper[i]) throw DegenerateRegion("sampling region is empty");
  }
}

Vector uniform_in(const Box& b, Rng& rng) {
  Vector x(b.lower.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(b.lower[i], b.upper[i]);
  return x;
}

bool in_box(const Box& b, VecView x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < b.lower[i] || x[i] > b.upper[i]) return false;
  return true;
}

std::optional<Box> region_box(const VIProblem& problem, const SampleRegion& region) {
  std::optional<Box> box = region.box ? region.box : problem.metadata().sampling_box;
  if (box && (box->lower.size() != problem.dim() || box->upper.size() != problem.dim()))
    throw BadParameters("sampling box has wrong dimension");
  return box;
}

Vector unit_direction(std::size_t n, Rng& rng) {
  Vector v(n);
  double nv = 0.0;
  while (nv == 0.0) {
    for (double& e : v) e = rng.normal();
    nv = norm(v);
  }
  for (double& e : v) e /= nv;
  return v;
}

// Short feasible companion of x for local difference quotients.
Vector local_partner(const FeasibleSet& set, VecView x, Rng& rng) {
  const Vector dir = unit_direction(x.size(), rng);
  const double h = 1e-3 * (1.0 + norm_inf(x));
  return set.project(add_scaled(x, h, dir));
}

// Largest quotient |grad g(u) - grad g(x)| / |u - x| over short feasible
// partners u along coordinate (and, in low dimension, diagonal) directions.
double local_quotient(const GapEvaluator& ev, const FeasibleSet& set, VecView x) {
  const std::size_t n = x.size();
  const double h = 1e-4 * (1.0 + norm_inf(x));
  const Vector gx = ev.gradient(x);
  double best = 0.0;
  auto probe = [&](const Vector& d) {
    for (double sign : {1.0, -1.0}) {
      const Vector u = set.project(add_scaled(x, sign * h, d));
      const double du = distance(x, u);
      if (du > 0.0) best = std::max(best, distance(gx, ev.gradient(u)) / du);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    probe(e);
    if (n > 8) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      for (double sj : {1.0, -1.0}) {
        Vector d(n, 0.0);
        d[i] = std::sqrt(0.5);
        d[j] = sj * std::sqrt(0.5);
        probe(d);
      }
  }
  return best;
}

// Coordinate pattern search for the largest local quotient, started from
// `starts` and kept inside `box` (when given) and the feasible set.
double refine_local_quotient(const GapEvaluator& ev, const FeasibleSet& set, const std::optional<Box>& box,
                             const std::vector<Vector>& starts) {
  constexpr int kRounds = 60;
  double best = 0.0;
  for (const auto& start : starts) {
    Vector x = start;
    double q = local_quotient(ev, set, x);
    double width = 1.0 + norm_inf(x);
    if (box) {
      width = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) width = std::max(width, box->upper[i] - box->lower[i]);
    }
    double step = 0.05 * width;
    for (int round = 0; round < kRounds && step > 1e-6 * width; ++round) {
      bool moved = false;
      for (std::size_t i = 0; i < x.size() && !moved; ++i)
        for (double sign : {1.0, -1.0}) {
          Vector c = x;
          c[i] += sign * step;
          if (box) c[i] = std::clamp(c[i], box->lower[i], box->upper[i]);
          c = set.project(c);
          if (distance(c, x) == 0.0) continue;
          const double qc = local_quotient(ev, set, c);
          if (qc > q) {
            x = std::move(c);
            q = qc;
            moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, q);
  }
  return best;
}

// Records lhs <= rhs within slack * (1 + scale).
class Checker {
 public:
  Checker(std::string name, double slack, std::size_t max_witnesses, bool surrogate = false, bool gating = true)
      : slack_(slack), max_witnesses_(max_witnesses) {
    r_.name = std::move(name);
    r_.surrogate = surrogate;
    r_.gating = gating;
    r_.worst_slack = -std::numeric_limits<double>::infinity();
  }

  void check(double lhs, double rhs, double scale, VecView witness) {
    ++r_.n_checked;
    const double excess = lhs - rhs;
    r_.worst_slack = std::max(r_.worst_slack, excess);
    if (excess > slack_ * (1.0 + std::abs(scale)) || std::isnan(excess)) {
      ++r_.n_violations;
      if (r_.witnesses.size() < max_witnesses_) r_.witnesses.emplace_back(witness.begin(), witness.end());
    }
  }

  PropertyResult result() const {
    PropertyResult r = r_;
    if (r.n_checked == 0) r.worst_slack = 0.0;
    return r;
  }

 private:
  PropertyResult r_;
  double slack_;
  std::size_t max_witnesses_;
};

}  // namespace

std::vector<Vector> sample_points(const VIProblem& problem, const SampleRegion& region) {
  const FeasibleSet& set = problem.feasible_set();
  const std::size_t n = problem.dim();
  std::vector<Vector> pts;
  pts.reserve(region.anchor_points.size() + region.n_samples);
  for (const auto& a : region.anchor_points) {
    if (!set.contains(a, set.projection_options().tol * std::max(1.0, norm_inf(a))))
      throw BadParameters("anchor point is not feasible");
    pts.push_back(a);
  }
  if (region.n_samples == 0) return pts;

  const std::optional<Box> box = region_box(problem, region);
  Rng rng(region.seed);

  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>) {
          const Box b = box ? intersect(v, *box) : v;
          require_bounded(b);
          for (std::size_t s = 0; s < region.n_samples; ++s) pts.push_back(uniform_in(b, rng));
        } else if constexpr (std::is_same_v<T, ScaledSimplexProduct>) {
          std::size_t covered = 0;
          for (const auto& blk : v.blocks) covered = std::max(covered, blk.end);
          if (covered < n && !box) throw DegenerateRegion("free coordinates need a sampling box");
          if (box) require_bounded(*box);
          const std::size_t max_attempts = 1000 * region.n_samples;
          std::size_t attempts = 0;
          while (pts.size() < region.anchor_points.size() + region.n_samples) {
            if (++attempts > max_attempts) throw DegenerateRegion("sampling box barely meets the simplex product");
            Vector x(n, 0.0);
            for (const auto& blk : v.blocks) {
              double total = 0.0;
              for (std::size_t i = blk.begin; i < blk.end; ++i) total += (x[i] = rng.exponential());
              for (std::size_t i = blk.begin; i < blk.end; ++i) x[i] *= blk.mass / total;
            }
            for (std::size_t i = covered; i < n; ++i) x[i] = rng.uniform(box->lower[i], box->upper[i]);
            if (!box || in_box(*box, x)) pts.push_back(std::move(x));
          }
        } else if constexpr (std::is_same_v<T, HalfspaceIntersection>) {
          std::optional<Box> b = box;
          if (v.box) b = b ? intersect(*b, *v.box) : *v.box;
          if (!b) throw DegenerateRegion("sampling region is unbounded; supply a sampling box");
          require_bounded(*b);
          for (std::size_t s = 0; s < region.n_samples; ++s) {
            Vector z;
            bool ok = false;
            for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
              z = uniform_in(*b, rng);
              ok = set.contains(z, 0.0);
            }
            pts.push_back(ok ? std::move(z) : set.project(z));
          }
        } else {
          if (!box) throw DegenerateRegion("sampling region is unbounded; supply a sampling box");
          require_bounded(*box);
          for (std::size_t s = 0; s < region.n_samples; ++s) pts.push_back(uniform_in(*box, rng));
        }
      },
      set.variant());
  return pts;
}

LipschitzEstimate estimate_lipschitz_detailed(const GapEvaluator& ev, const SampleRegion& region) {
  const VIProblem& problem = ev.problem();
  const FeasibleSet& set = problem.feasible_set();
  const std::vector<Vector> pts = sample_points(problem, region);
  if (pts.size() < 2) throw DegenerateRegion("estimate_lipschitz: need at least two samples");

  std::vector<Vector> grads;
  grads.reserve(pts.size());
  for (const auto& x : pts) grads.push_back(ev.gradient(x));

  LipschitzEstimate est;
  bool separated = false;
  auto quotient = [&](VecView x, VecView gx, VecView u, VecView gu) {
    const double dx = distance(x, u);
    if (dx == 0.0) return;
    separated = true;
    ++est.n_pairs;
    est.sampled = std::max(est.sampled, distance(gx, gu) / dx);
  };

  Rng perturb(region.seed ^ kPerturbSeed);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i + 1 < pts.size()) quotient(pts[i], grads[i], pts[i + 1], grads[i + 1]);
    const Vector u = local_partner(set, pts[i], perturb);
    quotient(pts[i], grads[i], u, ev.gradient(u));
  }
  if (!separated) throw DegenerateRegion("estimate_lipschitz: all samples coincide");

  if (!problem.affine() && region.n_samples > 0) {
    SampleRegion seeds = region;
    seeds.anchor_points.clear();
    seeds.n_samples = std::min<std::size_t>(kRefineStarts, region.n_samples);
    seeds.seed = region.seed ^ kPerturbSeed;
    est.refined = refine_local_quotient(ev, set, region_box(problem, region), sample_points(problem, seeds));
    est.sampled = std::max(est.sampled, *est.refined);
  }

  if (const auto& aff = problem.affine()) {
    const std::size_t n = problem.dim();
    const double lam = ev.lambda();
    const Matrix& J = aff->M;
    const Matrix I = Matrix::identity(n);
    const Matrix K = combine(1.0, add(J, J.transposed()), -1.0 / lam, I);
    const Matrix N = combine(1.0 / lam, I, -1.0, J.transposed());
    const Matrix R = combine(1.0, I, -lam, J);
    std::map<std::vector<std::int8_t>, double> seen;
    double best = 0.0;
    for (const auto& x : pts) {
      const Vector z = add_scaled(x, -lam, problem.eval_F(x));
      auto sig = set.active_signature(z);
      auto it = seen.find(sig);
      if (it == seen.end()) {
        const Matrix local = add(K, matmul(matmul(N, set.projection_derivative(z)), R));
        it = seen.emplace(std::move(sig), spectral_norm(local)).first;
      }
      best = std::max(best, it->second);
    }
    est.analytic = best;
  }
  est.value = std::max(kLipschitzSafety * est.sampled, est.analytic.value_or(0.0));
  return est;
}

double estimate_lipschitz(const GapEvaluator& ev, const SampleRegion& region) {
  return estimate_lipschitz_detailed(ev, region).value;
}

PebEstimate estimate_peb_constant(const GapEvaluator& ev, const SolutionSet& solutions, double nu, double alpha,
                                  const SampleRegion& region) {
  if (!(nu > 0.0)) throw BadParameters("estimate_peb_constant: nu must be > 0");
  if (!(alpha > 0.0)) throw BadParameters("estimate_peb_constant: alpha must be > 0");
  if (solutions.empty()) throw BadParameters("estimate_peb_constant: empty solution set");
  const std::vector<Vector> pts = sample_points(ev.problem(), region);
  PebEstimate est;
  est.n_drawn = pts.size();
  for (const auto& x : pts) {
    const ProxQuantities q = prox_quantities(ev, alpha, x);
    if (q.phi > nu) continue;
    ++est.n_in_level_set;
    const double step = distance(x, q.T);
    if (step == 0.0) continue;
    const double ratio = solutions.distance(x) / step;
    if (ratio > est.value) {
      est.value = ratio;
      est.witness = x;
    }
  }
  if (est.n_in_level_set == 0)
    throw NoSamplesInLevelSet("no sample has gap <= " + std::to_string(nu) + " among " +
                              std::to_string(pts.size()));
  return est;
}

std::optional<MintyWitness> minty_violation_search(const VIProblem& problem, const std::vector<Vector>& candidates,
                                                   const SampleRegion& region, double tol,
                                                   const std::vector<Vector>& probes) {
  if (candidates.empty()) throw BadParameters("minty_violation_search: no candidates");
  for (const auto& c : candidates)
    if (c.size() != problem.dim()) throw BadParameters("minty_violation_search: candidate has wrong dimension");

  std::vector<Vector> pts = sample_points(problem, region);
  const FeasibleSet& set = problem.feasible_set();
  for (const auto& p : probes) {
    if (!set.contains(p, set.projection_options().tol)) throw BadParameters("Minty probe point is not feasible");
    pts.push_back(p);
  }

  MintyWitness w;
  for (const auto& c : candidates) w.violations.push_back({c, {}, std::numeric_limits<double>::infinity()});
  for (const auto& x : pts) {
    const Vector F = problem.eval_F(x);
    for (auto& v : w.violations) {
      const double val = dot(F, sub(x, v.candidate));
      if (val < v.value) {
        v.value = val;
        v.x = x;
      }
    }
  }
  for (const auto& v : w.violations)
    if (!(v.value < -tol)) return std::nullopt;
  return w;
}

double monotonicity_pair_value(const VIProblem& problem, VecView x, VecView x2) {
  return dot(sub(problem.eval_F(x), problem.eval_F(x2)), sub(x, x2));
}

MonotonicityReport monotonicity_probe(const VIProblem& problem, const SampleRegion& region) {
  const std::vector<Vector> pts = sample_points(problem, region);
  if (pts.empty()) throw DegenerateRegion("monotonicity_probe: empty region");
  MonotonicityReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& x, const Vector& u) {
    const double d2 = squared_distance(x, u);
    if (d2 == 0.0) return;
    ++rep.n_pairs;
    const double val = monotonicity_pair_value(problem, x, u);
    if (val / d2 < rep.min_ratio) {
      rep.min_ratio = val / d2;
      rep.x = x;
      rep.x2 = u;
      rep.pair_value = val;
    }
  };
  Rng perturb(region.seed ^ kPerturbSeed);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i + 1 < pts.size()) consider(pts[i], pts[i + 1]);
    consider(pts[i], local_partner(problem.feasible_set(), pts[i], perturb));
  }
  if (rep.n_pairs == 0) throw DegenerateRegion("monotonicity_probe: all samples coincide");
  return rep;
}

RestrictedMonotonicityReport restricted_strong_monotonicity_probe(const VIProblem& problem,
                                                                  const SolutionSet& solutions,
                                                                  const SampleRegion& region) {
  if (solutions.empty()) throw BadParameters("restricted_strong_monotonicity_probe: empty solution set");
  RestrictedMonotonicityReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& x : sample_points(problem, region)) {
    const Vector p = solutions.project(x);
    const Vector r = sub(x, p);
    const double d2 = dot(r, r);
    if (d2 <= 1e-24) continue;
    ++rep.n_used;
    const double ratio = dot(sub(problem.eval_F(x), problem.eval_F(p)), r) / d2;
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.witness = x;
    }
  }
  if (rep.n_used == 0) throw DegenerateRegion("every sample lies in the solution set");
  return rep;
}

const PropertyResult& PropertyReport::get(const std::string& name) const {
  for (const auto& p : properties)
    if (p.name == name) return p;
  throw BadParameters("no property named " + name);
}

std::size_t PropertyReport::gating_violations() const {
  std::size_t n = 0;
  for (const auto& p : properties)
    if (p.gating) n += p.n_violations;
  return n;
}

std::string PropertyReport::to_json(int indent) const {
  nlohmann::json j;
  j["problem"] = problem;
  j["lambda"] = lambda;
  j["alpha"] = alpha;
  j["L"] = L;
  j["rho"] = rho;
  j["slack"] = slack;
  j["gating_violations"] = gating_violations();
  auto& arr = j["properties"] = nlohmann::json::array();
  for (const auto& p : properties) {
    arr.push_back({{"name", p.name},
                   {"n_checked", p.n_checked},
                   {"n_violations", p.n_violations},
                   {"worst_slack", p.worst_slack},
                   {"witnesses", p.witnesses},
                   {"surrogate", p.surrogate},
                   {"gating", p.gating}});
  }
  return j.dump(indent);
}

PropertyReport run_property_suite(const GapEvaluator& ev, const SuiteConfig& config, const SampleRegion& region) {
  const double a = config.alpha;
  if (!(a > 0.0) || !std::isfinite(a)) throw BadParameters("run_property_suite: alpha must be > 0");
  if (!(config.rho >= 0.0)) throw BadParameters("run_property_suite: rho must be >= 0");
  const double L = config.L ? *config.L : estimate_lipschitz(ev, region);
  const double rho = config.rho;
  const double b = 1e-3 * (L > 0.0 ? std::min(a, 1.0 / L) : a);

  PropertyReport rep;
  rep.problem = ev.problem().name();
  rep.lambda = ev.lambda();
  rep.alpha = a;
  rep.L = L;
  rep.rho = rho;
  rep.slack = config.slack;

  const std::size_t mw = config.max_witnesses;
  Checker ii("prop_ii", config.slack, mw), iii("prop_iii", config.slack, mw), iv("prop_iv", config.slack, mw),
      lemma("lemma_descent", config.slack, mw), descent("descent", config.slack, mw),
      v("prop_v", config.slack, mw, true, false), vi("prop_vi", config.slack, mw, true, false),
      vii("prop_vii", config.slack, mw, true, false);

  const auto residual = [&](VecView x) { return distance(x, t_alpha(ev, b, x)) / b; };

  const std::vector<Vector> pts = sample_points(ev.problem(), region);
  std::vector<double> phis;
  phis.reserve(pts.size());
  for (const auto& x : pts) phis.push_back(ev.value(x));

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vector& x = pts[i];
    const ProxQuantities q = prox_quantities(ev, a, x);
    const double d2 = squared_distance(x, q.T);
    const double phiT = ev.value(q.T);

    const double ident = q.phi - a * q.prox_gap;
    ii.check(std::abs(q.envelope - ident), 0.0, std::abs(q.phi) + std::abs(q.envelope), x);

    const double iii_rhs = q.phi - 0.5 * (2.0 / a - L - rho) * d2;
    iii.check(phiT, iii_rhs, std::abs(q.phi) + std::abs(phiT) + d2 / a, x);

    const double iv_lhs = (1.0 - a * rho) / (2.0 * a * a) * d2;
    iv.check(iv_lhs, q.prox_gap, std::abs(iv_lhs) + std::abs(q.prox_gap), x);

    descent.check(phiT, q.phi, std::abs(q.phi) + std::abs(phiT), x);

    if (i + 1 < pts.size()) {
      const Vector& u = pts[i + 1];
      const double xu = squared_distance(x, u), uT = squared_distance(u, q.T);
      const double rhs = 0.5 * ((1.0 / a + L) * xu - (1.0 / a - L) * d2 - (1.0 / a - rho) * uT);
      const double scale = std::abs(phiT) + std::abs(phis[i + 1]) + 0.5 * (1.0 / a + L) * (xu + d2 + uT);
      lemma.check(phiT - phis[i + 1], rhs, scale, x);
    }

    const double sx = residual(x);
    v.check(q.prox_gap, sx * sx / (2.0 * (1.0 - a * rho)), std::abs(q.prox_gap) + sx * sx, x);
    const double step = std::sqrt(d2);
    vi.check(step, a / (1.0 - a * rho) * sx, step + a * sx, x);
    const double sT = residual(q.T);
    vii.check(sT, (L + 1.0 / a) * step, sT + (L + 1.0 / a) * step, x);
  }

  for (const Checker* c : {&ii, &iii, &iv, &lemma, &descent, &v, &vi, &vii}) rep.properties.push_back(c->result());
  return rep;
}

}  // namespace gapvi
