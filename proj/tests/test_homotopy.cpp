#include <cmath>

#include "doctest.h"
#include "gapvi/errors.hpp"
#include "gapvi/homotopy.hpp"
#include "gapvi/problems.hpp"

using namespace gapvi;

namespace {

HomotopyConfig example_config() {
  HomotopyConfig h;
  h.inner.lambda = 1.0;
  h.inner.alpha = 0.1;
  return h;
}

HomotopyConfig textbook_config(const VIProblem& p) {
  HomotopyConfig h;
  h.inner.lambda = p.metadata().recommended_lambda;
  h.inner.alpha = *p.metadata().recommended_alpha;
  return h;
}

}  // namespace

TEST_SUITE("homotopy") {
  TEST_CASE("one-dimensional example from the anchor solution") {
    const HomotopyResult r = solve_homotopy(make_example_1_2(), example_config(), Vector{0.0});
    CHECK(r.status == HomotopyStatus::SolvedVIP);
    CHECK(r.final_gap <= 1e-10);
    const double x = r.final_x[0];
    CHECK((std::abs(x) < 1e-6 || std::abs(x - 1.0) < 1e-6 || std::abs(x + 1.0) < 1e-6));
    REQUIRE(r.path.size() >= 2);
    CHECK(r.path[0].t == 1.0);
    CHECK(r.path[1].t == 0.5);
    CHECK(r.path.back().t == 0.0);
    CHECK(r.warnings.empty());
  }

  TEST_CASE("path invariants on the textbook game from the stall start") {
    const auto p = make_bimatrix_textbook();
    const HomotopyConfig h = textbook_config(*p);
    const HomotopyResult r = solve_homotopy(p, h, Vector{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5, 0.5});
    REQUIRE(r.status == HomotopyStatus::SolvedVIP);
    CHECK(r.final_gap <= 1e-8);
    CHECK(r.final_gap <= 10.0 * h.eps_gap_inner);
    for (std::size_t i = 1; i < r.path.size(); ++i) {
      CHECK(r.path[i].t < r.path[i - 1].t);
      if (r.path[i].t > 0.0) CHECK(r.path[i].t / r.path[i - 1].t <= 1.0 - h.delta + 1e-15);
    }
    for (const auto& e : r.path) {
      CHECK(e.inner_status == SolveStatus::SolvedVIP);
      CHECK(p->feasible_set().contains(e.x, 1e-12));
      const GapEvaluator ev(deform(HomotopyMap{p, monotone_anchor(5), e.t}), h.inner.lambda);
      CHECK(ev.value(e.x) <= h.eps_gap_inner);
    }
    long k = 0;
    for (const auto& rec : r.trace.records) CHECK(rec.k == k++);
    CHECK(r.total_inner_iterations > 0);
  }

  TEST_CASE("deterministic") {
    const auto p = make_bimatrix_textbook();
    const auto a = solve_homotopy(p, textbook_config(*p));
    const auto b = solve_homotopy(p, textbook_config(*p));
    REQUIRE(a.path.size() == b.path.size());
    for (std::size_t i = 0; i < a.path.size(); ++i) {
      CHECK(a.path[i].t == b.path[i].t);
      CHECK(a.path[i].x == b.path[i].x);
    }
    CHECK(a.final_x == b.final_x);
  }

  TEST_CASE("outer budget and stalled probes") {
    HomotopyConfig h = example_config();
    h.max_outer = 1;
    const auto capped = solve_homotopy(make_example_1_2(), h, Vector{0.0});
    CHECK(capped.status == HomotopyStatus::MaxOuter);
    CHECK(capped.outer_steps == 1);

    const auto p = make_bimatrix_textbook();
    HomotopyConfig s = textbook_config(*p);
    s.inner.max_iters = 2;
    s.max_inner_i = 2;
    s.recompute_alpha = false;
    const auto stalled = solve_homotopy(p, s, Vector{1.0, 0.0, 0.0, 1.0, 0.0});
    CHECK(stalled.status == HomotopyStatus::StalledInner);
  }

  TEST_CASE("non-affine mapping is accepted with a warning") {
    HomotopyConfig h;
    h.inner.lambda = 10.0;
    h.inner.alpha = 0.02;
    h.inner.max_iters = 20;
    h.max_inner_i = 1;
    h.max_outer = 1;
    const auto r = solve_homotopy(make_toy_gan(), h, Vector{-1.5, 0.2});
    REQUIRE_FALSE(r.warnings.empty());
    CHECK(r.warnings[0].find("not affine") != std::string::npos);
  }

  TEST_CASE("centered anchor") {
    HomotopyConfig h = example_config();
    h.anchor = centered_anchor({0.9});
    const auto r = solve_homotopy(make_example_1_2(), h, Vector{0.9});
    CHECK(r.status == HomotopyStatus::SolvedVIP);
    CHECK(std::abs(r.final_x[0] - 1.0) < 1e-6);
  }

  TEST_CASE("argument errors") {
    const auto p = make_example_1_2();
    auto bad = [&](auto mutate) {
      HomotopyConfig h = example_config();
      mutate(h);
      CHECK_THROWS_AS(solve_homotopy(p, h), BadParameters);
    };
    bad([](HomotopyConfig& h) { h.delta = 0.0; });
    bad([](HomotopyConfig& h) { h.delta = 1.0; });
    bad([](HomotopyConfig& h) { h.eps_gap_inner = -1.0; });
    bad([](HomotopyConfig& h) { h.t_floor = 0.0; });
    bad([](HomotopyConfig& h) { h.max_outer = 0; });
    bad([](HomotopyConfig& h) { h.max_inner_i = 0; });
    bad([](HomotopyConfig& h) { h.inner.alpha = -1.0; });
    CHECK_THROWS_AS(solve_homotopy(nullptr, example_config()), BadParameters);
    CHECK_THROWS_AS(solve_homotopy(p, example_config(), Vector{0.0, 0.0}), BadParameters);
  }

  TEST_CASE("status names") {
    CHECK(to_string(HomotopyStatus::SolvedVIP) == "SolvedVIP");
    CHECK(to_string(HomotopyStatus::StalledInner) == "StalledInner");
    CHECK(to_string(HomotopyStatus::MaxOuter) == "MaxOuter");
  }
}
