#include <cmath>

#include "doctest.h"
#include "gapvi/errors.hpp"
#include "gapvi/gap.hpp"
#include "gapvi/problems.hpp"
#include "gapvi/random.hpp"

using namespace gapvi;

namespace {

// Piecewise closed form of g_1 for F(x) = -x on [-1, 1].
double oracle_gap(double x) {
  const double a = std::abs(x);
  return a <= 0.5 ? 0.5 * x * x : -1.5 * x * x + 2.0 * a - 0.5;
}

double inner_objective(const VIProblem& p, double lambda, VecView x, VecView y) {
  const Vector r = sub(x, y);
  return dot(p.eval_F(x), r) - dot(r, r) / (2.0 * lambda);
}

// Directional derivative of g along d by central differences.
double fd_directional(const GapEvaluator& ev, const Vector& x, const Vector& d, double h) {
  return (ev.value(add_scaled(x, h, d)) - ev.value(add_scaled(x, -h, d))) / (2.0 * h);
}

Vector interior_simplex_point(Rng& rng, const std::vector<SimplexBlock>& blocks, std::size_t dim) {
  Vector x(dim, 0.0);
  for (const auto& b : blocks) {
    double s = 0.0;
    for (std::size_t i = b.begin; i < b.end; ++i) s += (x[i] = 0.2 + rng.uniform());
    for (std::size_t i = b.begin; i < b.end; ++i) x[i] *= b.mass / s;
  }
  return x;
}

Vector tangent_direction(Rng& rng, const std::vector<SimplexBlock>& blocks, std::size_t dim) {
  Vector d(dim, 0.0);
  for (const auto& b : blocks) {
    double s = 0.0;
    for (std::size_t i = b.begin; i < b.end; ++i) s += (d[i] = rng.uniform(-1.0, 1.0));
    for (std::size_t i = b.begin; i < b.end; ++i) d[i] -= s / static_cast<double>(b.end - b.begin);
  }
  return d;
}

}  // namespace

TEST_SUITE("gap") {
  TEST_CASE("closed form of the one-dimensional example") {
    const GapEvaluator ev(make_example_1_2(), 1.0);
    for (double x : {-1.0, -0.75, -0.5, -0.1, 0.0, 0.3, 0.5, 2.0 / 3.0, 1.0}) {
      CHECK(ev.value(Vector{x}) == doctest::Approx(oracle_gap(x)).epsilon(1e-14).scale(1.0));
      CHECK(closed_form_gap_example_1_2(x) == doctest::Approx(oracle_gap(x)).epsilon(1e-14).scale(1.0));
    }
    CHECK(ev.y_lambda(Vector{0.3})[0] == doctest::Approx(0.6));
    CHECK(ev.y_lambda(Vector{0.8})[0] == 1.0);
    CHECK(ev.gradient(Vector{0.3})[0] == doctest::Approx(0.3));
    CHECK(ev.gradient(Vector{0.8})[0] == doctest::Approx(-3.0 * 0.8 + 2.0));
    CHECK(ev.gradient(Vector{-0.8})[0] == doctest::Approx(3.0 * 0.8 - 2.0));
    CHECK_THROWS_AS(closed_form_gap_example_1_2(1.5), OutOfDomain);
    CHECK_THROWS_AS(closed_form_gap_gradient_example_1_2(-1.01), OutOfDomain);
  }

  TEST_CASE("gap is the maximum of the inner objective") {
    const auto p = make_example_4_1();
    const GapEvaluator ev(p, 1.0);
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      const Vector x = p->feasible_set().project(Vector{rng.uniform(-3, 3), rng.uniform(0, 11)});
      const Vector y = p->feasible_set().project(Vector{rng.uniform(-3, 3), rng.uniform(0, 11)});
      const GapPoint gp = ev.evaluate(x);
      CHECK(gp.gap >= inner_objective(*p, 1.0, x, y) - 1e-8 * (1.0 + std::abs(gp.gap)));
      CHECK(gp.gap == doctest::Approx(inner_objective(*p, 1.0, x, gp.y)).epsilon(1e-12).scale(1.0));
      CHECK(gp.gap >= -1e-9);
    }
  }

  TEST_CASE("gradient matches directional finite differences on simplex products") {
    const auto p = make_bimatrix_textbook();
    const GapEvaluator ev(p, p->metadata().recommended_lambda);
    const std::vector<SimplexBlock> blocks{{0, 3, 1.0}, {3, 5, 1.0}};
    Rng rng(8);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = interior_simplex_point(rng, blocks, 5);
      const Vector d = tangent_direction(rng, blocks, 5);
      const double h = 1e-6;
      // Stay on one affine piece of the projection.
      const Vector z = add_scaled(x, -ev.lambda(), p->eval_F(x));
      const Vector zp = add_scaled(add_scaled(x, h, d), -ev.lambda(), p->eval_F(add_scaled(x, h, d)));
      const Vector zm = add_scaled(add_scaled(x, -h, d), -ev.lambda(), p->eval_F(add_scaled(x, -h, d)));
      const auto sig = p->feasible_set().active_signature(z);
      if (sig != p->feasible_set().active_signature(zp) || sig != p->feasible_set().active_signature(zm)) continue;
      CHECK(dot(ev.gradient(x), d) == doctest::Approx(fd_directional(ev, x, d, h)).epsilon(1e-6).scale(1.0));
      ++checked;
    }
    CHECK(checked > 20);
  }

  TEST_CASE("gradient matches finite differences on the unconstrained toy GAN") {
    const auto p = make_toy_gan();
    const GapEvaluator ev(p, 10.0);
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
      const Vector x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const Vector g = ev.gradient(x);
      for (std::size_t i = 0; i < 2; ++i) {
        Vector e(2, 0.0);
        e[i] = 1.0;
        CHECK(g[i] == doctest::Approx(fd_directional(ev, x, e, 1e-5)).epsilon(1e-6).scale(1.0));
      }
      // On R^d the gap is (lambda/2)|F|^2.
      const Vector F = p->eval_F(x);
      CHECK(ev.value(x) == doctest::Approx(0.5 * 10.0 * dot(F, F)).epsilon(1e-12));
    }
  }

  TEST_CASE("zero at known solutions, positive elsewhere on samples") {
    for (const auto& p : {make_example_1_2(), make_bimatrix_textbook(), make_strongly_monotone_control()}) {
      const GapEvaluator ev(p, p->metadata().recommended_lambda);
      for (const auto& s : p->known_solutions()) CHECK(std::abs(ev.value(s)) <= 1e-12);
    }
    const GapEvaluator ev(make_strongly_monotone_control(), 1.0);
    for (double x : {-1.0, -0.4, 0.2, 0.9}) CHECK(ev.value(Vector{x}) > 0.0);
  }

  TEST_CASE("error paths") {
    const auto p = make_example_1_2();
    CHECK_THROWS_AS(GapEvaluator(p, 0.0), BadParameters);
    CHECK_THROWS_AS(GapEvaluator(p, std::nan("")), BadParameters);
    CHECK_THROWS_AS(GapEvaluator(nullptr, 1.0), BadParameters);
    const GapEvaluator ev(p, 1.0);
    CHECK_THROWS_AS(ev.value(Vector{1.5}), InfeasiblePoint);
    CHECK_THROWS_AS(ev.gradient(Vector{-2.0}), InfeasiblePoint);
    CHECK_NOTHROW(ev.y_lambda(Vector{5.0}));
  }

  TEST_CASE("D-gap") {
    const auto p = make_example_1_2();
    const GapEvaluator big(p, 1.0);
    const GapEvaluator small(p, 0.5);
    for (double x : {-1.0, -0.3, 0.0, 0.6, 1.0}) CHECK(d_gap_value(big, small, Vector{x}) >= -1e-15);
    CHECK(d_gap_value(big, small, Vector{0.0}) == 0.0);
    CHECK_THROWS_AS(d_gap_value(small, big, Vector{0.0}), BadParameters);
    CHECK_THROWS_AS(d_gap_value(big, GapEvaluator(make_example_1_2(), 0.5), Vector{0.0}), BadParameters);
  }

  TEST_CASE("affine Lipschitz bound") {
    // J = -1, lambda = 1: |K| = |-1 - 1 - 1| = 3, |N| = |1 + 1| = 2, |1 - lambda J| = 2.
    CHECK(affine_gap_lipschitz_bound(Matrix{{-1.0}}, 1.0) == doctest::Approx(7.0));
    CHECK_THROWS_AS(affine_gap_lipschitz_bound(Matrix(2, 3), 1.0), BadParameters);
    CHECK_THROWS_AS(affine_gap_lipschitz_bound(Matrix{{1.0}}, 0.0), BadParameters);
  }

  TEST_CASE("anchors") {
    const Anchor a = monotone_anchor(1);
    CHECK(a.H(Vector{3.0}) == Vector{3.0});
    const Anchor b = monotone_anchor(2);
    CHECK(b.H(Vector{1.0, -1.0}) == Vector{1.0, -1.0});
    CHECK(b.JH(Vector{0.0, 0.0}) == Matrix::identity(2));
    const Anchor c = centered_anchor({1.0, 0.0});
    CHECK(c.H(Vector{1.0, 0.0}) == Vector{0.0, 0.0});
    CHECK_THROWS_AS(monotone_anchor(0), BadParameters);
    CHECK_THROWS_AS(centered_anchor({}), BadParameters);
  }

  TEST_CASE("deformation") {
    const auto base = make_example_1_2();
    CHECK(deform(HomotopyMap{base, monotone_anchor(1), 0.0}) == base);
    const auto one = deform(HomotopyMap{base, monotone_anchor(1), 1.0});
    CHECK(one->eval_F(Vector{0.4})[0] == doctest::Approx(0.4));
    const auto mid = deform(HomotopyMap{base, monotone_anchor(1), 0.25});
    // 0.25 x + 0.75 (-x) = -0.5 x
    CHECK(mid->eval_F(Vector{0.4})[0] == doctest::Approx(-0.2));
    CHECK(mid->eval_jacobian(Vector{0.4})(0, 0) == doctest::Approx(-0.5));
    REQUIRE(mid->affine());
    CHECK(mid->affine()->M(0, 0) == doctest::Approx(-0.5));
    const auto gan = deform(HomotopyMap{make_toy_gan(), monotone_anchor(2), 0.5});
    CHECK_FALSE(gan->affine());
    const Vector x{0.3, -0.2};
    const Vector expect = add(scaled(0.5, x), scaled(0.5, make_toy_gan()->eval_F(x)));
    CHECK(gan->eval_F(x)[0] == doctest::Approx(expect[0]));
    CHECK(gan->eval_F(x)[1] == doctest::Approx(expect[1]));
    CHECK_THROWS_AS(deform(HomotopyMap{base, monotone_anchor(1), 1.5}), BadParameters);
    CHECK_THROWS_AS(deform(HomotopyMap{nullptr, monotone_anchor(1), 0.5}), BadParameters);
  }
}
