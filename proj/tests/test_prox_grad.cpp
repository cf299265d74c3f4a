#include <cmath>

#include "doctest.h"
#include "gapvi/errors.hpp"
#include "gapvi/problems.hpp"
#include "gapvi/prox_grad.hpp"
#include "gapvi/random.hpp"

using namespace gapvi;

namespace {

SolverConfig example_config() {
  SolverConfig c;
  c.alpha = 0.1;
  c.lambda = 1.0;
  c.eps_gap = 1e-12;
  return c;
}

CompositeObjective half_square() {
  CompositeObjective obj;
  obj.value = [](VecView x) { return 0.5 * dot(x, x); };
  obj.gradient = [](VecView x) { return Vector(x.begin(), x.end()); };
  obj.prox = [](VecView z) { return Vector(z.begin(), z.end()); };
  return obj;
}

// F(x) = x on R^d: gap (1/2)|x|^2 for lambda = 1.
ProblemPtr identity_full_space() {
  ProblemSpec spec;
  spec.name = "identity";
  spec.dim = 2;
  spec.F = [](VecView x) { return Vector(x.begin(), x.end()); };
  spec.jacobian = [](VecView) { return Matrix::identity(2); };
  return std::make_shared<VIProblem>(std::move(spec), FeasibleSet::full_space(2));
}

}  // namespace

TEST_SUITE("prox_grad") {
  TEST_CASE("proximal quantities at hand-evaluated points") {
    const GapEvaluator ev(make_example_1_2(), 1.0);
    CHECK(t_alpha(ev, 0.1, Vector{0.4})[0] == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(g_alpha(ev, 0.1, Vector{0.4}) == doctest::Approx(0.08).epsilon(1e-13));
    CHECK(e_alpha(ev, 0.1, Vector{0.4}) == doctest::Approx(0.072).epsilon(1e-13));
    CHECK(t_alpha(ev, 0.1, Vector{2.0 / 3.0})[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(g_alpha(ev, 0.1, Vector{2.0 / 3.0})) <= 1e-13);
    CHECK(e_alpha(ev, 0.1, Vector{2.0 / 3.0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(t_alpha(ev, 0.1, Vector{1.0})[0] == 1.0);
    for (double a : {0.01, 0.1, 1.0}) {
      CHECK(g_alpha(ev, a, Vector{0.0}) == 0.0);
      CHECK(e_alpha(ev, a, Vector{0.0}) == 0.0);
    }
    CHECK_THROWS_AS(t_alpha(ev, 0.0, Vector{0.4}), BadParameters);
  }

  TEST_CASE("envelope identity E = phi - alpha G and G >= 0 at random feasible points") {
    const auto p = make_bimatrix_textbook();
    const GapEvaluator ev(p, p->metadata().recommended_lambda);
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
      const Vector x = p->feasible_set().project(
          Vector{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()});
      const double alpha = 0.001 + 0.05 * rng.uniform();
      const ProxQuantities q = prox_quantities(ev, alpha, x);
      CHECK(std::abs(q.envelope - (q.phi - alpha * q.prox_gap)) <= 1e-10);
      CHECK(q.prox_gap >= -1e-12);
      CHECK(q.prox_gap >= squared_distance(x, q.T) / (2.0 * alpha * alpha) - 1e-10);
    }
  }

  TEST_CASE("PG contracts the one-dimensional example by 1 - alpha") {
    const SolverResult r = solve_pg(make_example_1_2(), example_config(), Vector{0.4});
    CHECK(r.status == SolveStatus::SolvedVIP);
    CHECK(r.iterations <= 150);
    CHECK(std::abs(r.final_x[0]) < 1e-5);
    const auto& rec = r.trace.records;
    REQUIRE(rec.size() == static_cast<std::size_t>(r.iterations) + 1);
    for (std::size_t k = 0; k + 1 < rec.size(); ++k) {
      CHECK(rec[k].dist_to_solution * 0.9 == doctest::Approx(rec[k + 1].dist_to_solution).epsilon(1e-10));
      CHECK(rec[k + 1].gap / rec[k].gap == doctest::Approx(0.81).epsilon(1e-9));
      CHECK(rec[k].k == static_cast<long>(k));
    }
    CHECK(r.trace.max_gap_increase() <= 1e-12);
    CHECK(rec.back().step_norm == 0.0);
  }

  TEST_CASE("PG stops at the spurious critical point") {
    const SolverResult r = solve_pg(make_example_1_2(), example_config(), Vector{2.0 / 3.0});
    CHECK(r.status == SolveStatus::StationaryNotSolved);
    CHECK(r.final_gap == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK(r.iterations == 0);
  }

  TEST_CASE("infeasible start is projected once with a warning") {
    const SolverResult r = solve_pg(make_example_1_2(), example_config(), Vector{3.0});
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("infeasible") != std::string::npos);
    CHECK(r.status == SolveStatus::SolvedVIP);
    CHECK(r.final_x[0] == 1.0);
  }

  TEST_CASE("budget and divergence") {
    SolverConfig c = example_config();
    c.max_iters = 3;
    const SolverResult capped = solve_pg(make_example_1_2(), c, Vector{0.4});
    CHECK(capped.status == SolveStatus::MaxIters);
    CHECK(capped.iterations == 3);

    SolverConfig wild;
    wild.alpha = 5.0;
    const SolverResult blown = solve_pg(identity_full_space(), wild, Vector{1.0, -1.0});
    CHECK(blown.status == SolveStatus::Diverged);
  }

  TEST_CASE("backtracking rule inside the solver keeps the gap monotone") {
    SolverConfig c = example_config();
    c.alpha = 2.0;
    c.alpha_rule = Backtracking{};
    const SolverResult r = solve_pg(make_example_1_2(), c, Vector{0.45});
    CHECK(r.status == SolveStatus::SolvedVIP);
    CHECK(r.trace.max_gap_increase() <= 0.0);
  }

  TEST_CASE("trace recording can be switched off") {
    SolverConfig c = example_config();
    c.record_trace = false;
    const SolverResult r = solve_pg(make_example_1_2(), c, Vector{0.4});
    CHECK(r.trace.records.size() == 1);
    c.record_trace = true;
    c.snapshot_max_dim = 0;
    const SolverResult s = solve_pg(make_example_1_2(), c, Vector{0.4});
    CHECK(s.trace.records.front().x.empty());
    CHECK(s.trace.records.front().x_norm == doctest::Approx(0.4));
  }

  TEST_CASE("config validation and argument errors") {
    const auto p = make_example_1_2();
    auto bad = [&](auto mutate) {
      SolverConfig c = example_config();
      mutate(c);
      CHECK_THROWS_AS(solve_pg(p, c, Vector{0.4}), BadParameters);
    };
    bad([](SolverConfig& c) { c.alpha = 0.0; });
    bad([](SolverConfig& c) { c.alpha = std::nan(""); });
    bad([](SolverConfig& c) { c.lambda = -1.0; });
    bad([](SolverConfig& c) { c.max_iters = 0; });
    bad([](SolverConfig& c) { c.eps_gap = -1.0; });
    bad([](SolverConfig& c) { c.eps_stat = -1.0; });
    bad([](SolverConfig& c) { c.rho = -0.5; });
    bad([](SolverConfig& c) {
      c.rho = 20.0;
      c.alpha = 0.1;
    });
    bad([](SolverConfig& c) { c.alpha_rule = Backtracking{1.5, 0.25, 60}; });
    bad([](SolverConfig& c) { c.alpha_rule = Backtracking{0.5, 0.0, 60}; });
    CHECK_THROWS_AS(solve_pg(nullptr, example_config(), Vector{0.4}), BadParameters);
    CHECK_THROWS_AS(solve_pg(p, example_config(), Vector{0.4, 0.1}), BadParameters);
    CHECK_THROWS_AS(solve_pg(p, example_config(), Vector{std::nan("")}), BadParameters);
  }

  TEST_CASE("backtracking step selection") {
    const GapEvaluator ev(make_example_1_2(), 1.0);
    CHECK(backtrack_alpha(ev, Vector{0.4}, 0.1) == 0.1);
    CHECK(backtrack_alpha(ev, Vector{2.0 / 3.0}, 0.7) == 0.7);
    CHECK(backtrack_alpha(ev, Vector{1.0}, 3.0) == 3.0);
    // x^2/2 at x = 1: a is accepted iff (1-a)^2/2 <= 1/2 - c a, i.e. a <= 2(1 - c).
    CHECK(backtrack_alpha(half_square(), Vector{1.0}, 10.0) == 1.25);
    CHECK(backtrack_alpha(half_square(), Vector{1.0}, 10.0, Backtracking{0.5, 0.5, 60}) == 0.625);
    CHECK(backtrack_alpha(half_square(), Vector{1.0}, 10.0, Backtracking{0.1, 0.25, 60}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(backtrack_alpha(half_square(), Vector{1.0}, 0.0), BadParameters);
    CHECK_THROWS_AS(backtrack_alpha(half_square(), Vector{1.0}, 1.0, Backtracking{1.0, 0.25, 60}), BadParameters);
    CompositeObjective flat = half_square();
    flat.value = [](VecView) { return 0.0; };
    CHECK_THROWS_AS(backtrack_alpha(flat, Vector{1.0}, 1.0, Backtracking{0.5, 0.25, 5}), NonConvergence);
  }

  TEST_CASE("consensus-optimization step") {
    const auto gan = make_toy_gan();
    CHECK(co_step(*gan, 10.0, 0.02, Vector{-2.0, 0.0}) == Vector{-2.0, 0.0});
    CHECK(co_step(*gan, 10.0, 0.0, Vector{0.7, 0.3}) == Vector{0.7, 0.3});
    // At the origin F = (0, 1) and J = [[0, -1/2], [1/2, 1]], so J^T F = (1/2, 1).
    const Vector pure = co_step(*gan, 10.0, 0.02, Vector{0.0, 0.0}, true);
    CHECK(pure[0] == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(pure[1] == doctest::Approx(-0.2).epsilon(1e-12));
    const Vector full = co_step(*gan, 10.0, 0.02, Vector{0.0, 0.0});
    CHECK(full[0] == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(full[1] == doctest::Approx(-0.18).epsilon(1e-12));
    // Pure variant is the gradient step on the unconstrained gap.
    const GapEvaluator ev(gan, 10.0);
    const Vector x{0.4, -1.1};
    const Vector expect = add_scaled(x, -0.02, ev.gradient(x));
    const Vector got = co_step(*gan, 10.0, 0.02, x, true);
    CHECK(got[0] == doctest::Approx(expect[0]).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(expect[1]).epsilon(1e-12));
    CHECK_THROWS_AS(co_step(*make_example_1_2(), 1.0, 0.1, Vector{0.0}), BadParameters);
    CHECK_THROWS_AS(co_step(*gan, 0.0, 0.1, x), BadParameters);
    CHECK_THROWS_AS(co_step(*gan, 1.0, -0.1, x), BadParameters);
  }

  TEST_CASE("status names") {
    CHECK(to_string(SolveStatus::SolvedVIP) == "SolvedVIP");
    CHECK(to_string(SolveStatus::StationaryNotSolved) == "StationaryNotSolved");
    CHECK(to_string(SolveStatus::MaxIters) == "MaxIters");
    CHECK(to_string(SolveStatus::Diverged) == "Diverged");
  }
}
