#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gapvi/problem.hpp"

namespace gapvi {

// F(x) = -x on [-1, 1]. Solutions {-1, 0, 1}; the gap at lambda = 1 also
// has the stationary points +-2/3 (gap 1/6).
ProblemPtr make_example_1_2();

// g_1 for the instance above in closed form:
//   x^2/2 on [-1/2, 1/2], -3x^2/2 + 2|x| - 1/2 on the outer pieces.
double closed_form_gap_example_1_2(double x);
double closed_form_gap_gradient_example_1_2(double x);

// F(x) = (2 x1 x2, -x1^2) on R x (-inf, 0]. Solutions are the two rays
// {x1 = 0, x2 <= 0} and {x2 = 0, x1 < 0}.
ProblemPtr make_example_1_3();

// F(x, y) = (2 x y^2, -2 x^2 y) on {y >= 1, x + y <= 10}. Solutions
// {0} x [1, 10].
ProblemPtr make_example_4_1();

// F(x) = x on [-1, 1]: strongly monotone control with solution 0.
ProblemPtr make_strongly_monotone_control();

struct BimatrixGame {
  Matrix A;  // n1 x n2, player 1 payoff
  Matrix B;  // n1 x n2, player 2 payoff

  std::size_t n1() const { return A.rows(); }
  std::size_t n2() const { return A.cols(); }
  void validate() const;
  // [[0, -A], [-B^T, 0]]
  Matrix vi_matrix() const;
};

// A = [[3,3],[2,5],[0,6]], B = [[3,2],[2,6],[3,1]]; solution
// (0, 1/3, 2/3, 1/3, 2/3).
BimatrixGame textbook_game();
Vector textbook_solution();

// F(x) = M x on the product of two unit simplices. lambda defaults to
// 1/||M|| (0.5 for the textbook game) and alpha to 0.9/L with L the affine
// bound on the gradient's Lipschitz constant.
ProblemPtr make_bimatrix(const BimatrixGame& game, std::string name = "bimatrix",
                         std::vector<Vector> known_solutions = {});
ProblemPtr make_bimatrix_textbook();

// Integer entries uniform on {0, ..., max_entry}.
BimatrixGame generate_random_bimatrix(std::size_t n1, std::size_t n2, std::uint64_t max_entry, std::uint64_t seed);

struct BenchInstance {
  std::size_t n1;
  std::size_t n2;
  std::uint64_t max_entry;
  std::uint64_t seed;
  std::string name() const;
};

// (3,2,10), (6,4,30), ..., (18,12,110).
std::vector<BenchInstance> bimatrix_grid(std::uint64_t seed = 0);

// "A n1 n2" followed by n1 rows, then "B n1 n2" and n1 rows.
BimatrixGame parse_game(std::istream& in);
BimatrixGame load_game(const std::filesystem::path& path);

struct Link {
  std::size_t tail;  // 1-based node ids
  std::size_t head;
};

struct OdPair {
  std::size_t origin;
  std::size_t destination;
  double demand;
};

struct TrafficNetwork {
  std::size_t nodes = 0;
  std::vector<Link> links;
  std::vector<OdPair> od_pairs;
  std::vector<std::vector<std::vector<std::size_t>>> paths;  // [od][path] -> 0-based link indices
  Matrix C;  // |A| x |A|
  Vector d;  // |A|

  std::size_t path_count() const;
  // |A| x |P| link-path incidence, paths ordered by OD pair.
  Matrix incidence() const;
  void validate() const;
};

// All simple paths in link-id order of exploration; throws
// PathEnumerationOverflow beyond `cap` paths.
std::vector<std::vector<std::size_t>> enumerate_simple_paths(std::size_t nodes, const std::vector<Link>& links,
                                                             std::size_t origin, std::size_t destination,
                                                             std::size_t cap = 64);

enum class CostPreset { UniformOnes, PaperMiddle, Random };

CostPreset parse_cost_preset(const std::string& name);
std::string to_string(CostPreset p);

TrafficNetwork nguyen_dupuis_network(CostPreset preset = CostPreset::UniformOnes, std::uint64_t seed = 0);

// F(h) = L^T (C L h + d) over the product of demand-scaled simplices.
ProblemPtr make_traffic_problem(const TrafficNetwork& net, std::string name = "traffic");
ProblemPtr make_nguyen_dupuis(CostPreset preset = CostPreset::UniformOnes, std::uint64_t seed = 0);

// Line-oriented text format: NODES, LINK, OD, PATH, COST DIAG | COST DENSE,
// COSTD. Missing PATH lines trigger enumeration.
TrafficNetwork parse_tep(std::istream& in);
TrafficNetwork load_tep_network(const std::filesystem::path& path);
void write_tep(std::ostream& out, const TrafficNetwork& net);

// F(theta, phi) for L(theta, phi) = -log(1 + exp(-phi.w)) - log(1 + exp(phi.theta)),
// with s = sigmoid(phi.theta), r = sigmoid(-phi.w):
//   F = (-s phi, -r w + s theta).
// Jacobian blocks:
//   d/dtheta (-s phi) = -s(1-s) phi phi^T
//   d/dphi   (-s phi) = -s I - s(1-s) phi theta^T
//   d/dtheta (s theta) = s I + s(1-s) theta phi^T
//   d/dphi   (-r w + s theta) = r(1-r) w w^T + s(1-s) theta theta^T
ProblemPtr make_toy_gan(Vector omega_star = {-2.0});

}  // namespace gapvi
