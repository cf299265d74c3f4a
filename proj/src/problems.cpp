#include "gapvi/problems.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "gapvi/errors.hpp"
#include "gapvi/gap.hpp"
#include "gapvi/random.hpp"

namespace gapvi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemPtr make_affine(std::string name, Matrix M, Vector b, FeasibleSet set, ProblemMetadata meta,
                       std::vector<Vector> solutions, std::optional<SolutionSet> solution_set = std::nullopt) {
  ProblemSpec spec;
  spec.name = std::move(name);
  spec.dim = M.rows();
  spec.F = [M, b](VecView x) {
    Vector y = matvec(M, x);
    axpy(1.0, b, y);
    return y;
  };
  spec.jacobian = [M](VecView) { return M; };
  spec.affine = AffineForm{std::move(M), std::move(b)};
  spec.known_solutions = std::move(solutions);
  spec.solution_set = std::move(solution_set);
  spec.metadata = std::move(meta);
  return std::make_shared<VIProblem>(std::move(spec), std::move(set));
}

std::string trim_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

template <class T>
T read_value(std::istringstream& is, int line, const char* what) {
  T v{};
  if (!(is >> v)) throw ParseError(std::string("expected ") + what, line);
  return v;
}

void expect_end(std::istringstream& is, int line) {
  std::string extra;
  if (is >> extra) throw ParseError("unexpected token '" + extra + "'", line);
}

}  // namespace

ProblemPtr make_example_1_2() {
  ProblemMetadata meta;
  meta.recommended_lambda = 1.0;
  meta.recommended_alpha = 0.1;
  meta.critical_points = {{-2.0 / 3.0}, {0.0}, {2.0 / 3.0}};
  meta.critical_gap = 1.0 / 6.0;
  SolutionSet sols{{{-1.0}, {0.0}, {1.0}}, {}};
  return make_affine("example1_2", Matrix{{-1.0}}, Vector{0.0}, FeasibleSet::box(1, -1.0, 1.0), meta,
                     {{-1.0}, {1.0}, {0.0}}, sols);
}

double closed_form_gap_example_1_2(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw OutOfDomain("closed_form_gap_example_1_2: x must lie in [-1, 1]");
  const double a = std::abs(x);
  if (a <= 0.5) return 0.5 * x * x;
  return -1.5 * x * x + 2.0 * a - 0.5;
}

double closed_form_gap_gradient_example_1_2(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw OutOfDomain("closed_form_gap_gradient_example_1_2: x must lie in [-1, 1]");
  if (std::abs(x) <= 0.5) return x;
  return x > 0.0 ? -3.0 * x + 2.0 : -3.0 * x - 2.0;
}

ProblemPtr make_example_1_3() {
  ProblemSpec spec;
  spec.name = "example1_3";
  spec.dim = 2;
  spec.F = [](VecView x) { return Vector{2.0 * x[0] * x[1], -x[0] * x[0]}; };
  spec.jacobian = [](VecView x) { return Matrix{{2.0 * x[1], 2.0 * x[0]}, {-2.0 * x[0], 0.0}}; };
  spec.known_solutions = {{0.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}};
  spec.solution_set = SolutionSet{{}, {Segment{{0.0, 0.0}, {0.0, -1.0}, true}, Segment{{0.0, 0.0}, {-1.0, 0.0}, true}}};
  spec.metadata.recommended_lambda = 1.0;
  spec.metadata.sampling_box = Box{{-2.0, -2.0}, {2.0, 0.0}};
  return std::make_shared<VIProblem>(std::move(spec), FeasibleSet::box({-kInf, -kInf}, {kInf, 0.0}));
}

ProblemPtr make_example_4_1() {
  ProblemSpec spec;
  spec.name = "example4_1";
  spec.dim = 2;
  spec.F = [](VecView z) { return Vector{2.0 * z[0] * z[1] * z[1], -2.0 * z[0] * z[0] * z[1]}; };
  spec.jacobian = [](VecView z) {
    const double x = z[0], y = z[1];
    return Matrix{{2.0 * y * y, 4.0 * x * y}, {-4.0 * x * y, -2.0 * x * x}};
  };
  spec.known_solutions = {{0.0, 1.0}, {0.0, 5.0}, {0.0, 10.0}};
  spec.solution_set = SolutionSet{{}, {Segment{{0.0, 1.0}, {0.0, 10.0}, false}}};
  spec.metadata.recommended_lambda = 1.0;  // must exceed 1/(2 * 2)
  spec.metadata.sampling_box = Box{{-2.0, 1.0}, {2.0, 10.0}};
  std::vector<Halfspace> rows{{{0.0, -1.0}, -1.0}, {{1.0, 1.0}, 10.0}};
  return std::make_shared<VIProblem>(std::move(spec), FeasibleSet::halfspaces(std::move(rows), {0.0, 5.0}));
}

ProblemPtr make_strongly_monotone_control() {
  ProblemMetadata meta;
  meta.recommended_lambda = 1.0;
  meta.recommended_alpha = 0.9;
  return make_affine("strongly_monotone", Matrix{{1.0}}, Vector{0.0}, FeasibleSet::box(1, -1.0, 1.0), meta, {{0.0}},
                     SolutionSet{{{0.0}}, {}});
}

void BimatrixGame::validate() const {
  if (A.rows() == 0 || A.cols() == 0) throw ValidationError("bimatrix: empty payoff matrix");
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw ValidationError("bimatrix: A and B dimensions differ");
  if (!all_finite({A.data(), A.rows() * A.cols()}) || !all_finite({B.data(), B.rows() * B.cols()}))
    throw ValidationError("bimatrix: non-finite payoff");
}

Matrix BimatrixGame::vi_matrix() const {
  const std::size_t n = n1() + n2();
  Matrix M(n, n);
  for (std::size_t i = 0; i < n1(); ++i)
    for (std::size_t j = 0; j < n2(); ++j) {
      M(i, n1() + j) = -A(i, j);
      M(n1() + j, i) = -B(i, j);
    }
  return M;
}

BimatrixGame textbook_game() {
  return {Matrix{{3, 3}, {2, 5}, {0, 6}}, Matrix{{3, 2}, {2, 6}, {3, 1}}};
}

Vector textbook_solution() { return {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0}; }

ProblemPtr make_bimatrix(const BimatrixGame& game, std::string name, std::vector<Vector> known_solutions) {
  game.validate();
  Matrix M = game.vi_matrix();
  const std::size_t n = M.rows();
  const double mnorm = spectral_norm(M);
  ProblemMetadata meta;
  meta.recommended_lambda = mnorm > 0.0 ? 1.0 / mnorm : 1.0;
  meta.recommended_alpha = 0.9 / affine_gap_lipschitz_bound(M, meta.recommended_lambda);
  auto set = FeasibleSet::simplex_product(n, {{0, game.n1(), 1.0}, {game.n1(), n, 1.0}});
  std::optional<SolutionSet> sols;
  if (!known_solutions.empty()) sols = SolutionSet{known_solutions, {}};
  return make_affine(std::move(name), std::move(M), Vector(n, 0.0), std::move(set), std::move(meta),
                     std::move(known_solutions), std::move(sols));
}

ProblemPtr make_bimatrix_textbook() {
  const BimatrixGame g = textbook_game();
  Matrix M = g.vi_matrix();
  ProblemMetadata meta;
  meta.recommended_lambda = 0.5;
  meta.recommended_alpha = 0.9 / affine_gap_lipschitz_bound(M, 0.5);
  meta.notes.push_back("PG from (1/3,1/3,1/3,1/2,1/2) stalls near (0.3548,0.2742,0.3710,0.5,0.5)");
  auto set = FeasibleSet::simplex_product(5, {{0, 3, 1.0}, {3, 5, 1.0}});
  return make_affine("bimatrix_textbook", std::move(M), Vector(5, 0.0), std::move(set), std::move(meta),
                     {textbook_solution()}, SolutionSet{{textbook_solution()}, {}});
}

BimatrixGame generate_random_bimatrix(std::size_t n1, std::size_t n2, std::uint64_t max_entry, std::uint64_t seed) {
  if (n1 == 0 || n2 == 0) throw BadParameters("generate_random_bimatrix: sizes must be >= 1");
  Rng rng(seed);
  BimatrixGame g{Matrix(n1, n2), Matrix(n1, n2)};
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) g.A(i, j) = static_cast<double>(rng.uniform_int(max_entry));
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) g.B(i, j) = static_cast<double>(rng.uniform_int(max_entry));
  return g;
}

std::string BenchInstance::name() const {
  return "test-" + std::to_string(n1) + "-" + std::to_string(n2) + "-" + std::to_string(max_entry);
}

std::vector<BenchInstance> bimatrix_grid(std::uint64_t seed) {
  std::vector<BenchInstance> grid;
  for (std::size_t k = 1; k <= 6; ++k) grid.push_back({3 * k, 2 * k, 20 * k - 10, seed + k});
  return grid;
}

BimatrixGame parse_game(std::istream& in) {
  BimatrixGame g;
  int line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::optional<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      std::string s = trim_comment(line);
      if (s.find_first_not_of(" \t\r") != std::string::npos) return s;
    }
    return std::nullopt;
  };
  auto read_block = [&](char tag) {
    const auto header = next_line();
    if (!header) throw ParseError(std::string("missing ") + tag + " block", line_no);
    std::istringstream hs(*header);
    std::string key;
    hs >> key;
    if (key != std::string(1, tag)) throw ParseError(std::string("expected '") + tag + " n1 n2'", line_no);
    const auto r = read_value<long>(hs, line_no, "row count");
    const auto c = read_value<long>(hs, line_no, "column count");
    expect_end(hs, line_no);
    if (r < 1 || c < 1) throw ParseError("matrix dimensions must be positive", line_no);
    Matrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    for (long i = 0; i < r; ++i) {
      const auto row = next_line();
      if (!row) throw ParseError("unexpected end of file in matrix", line_no);
      std::istringstream rs(*row);
      for (long j = 0; j < c; ++j) m(i, j) = read_value<double>(rs, line_no, "matrix entry");
      expect_end(rs, line_no);
    }
    return m;
  };
  g.A = read_block('A');
  g.B = read_block('B');
  if (next_line()) throw ParseError("trailing content after B block", line_no);
  g.validate();
  return g;
}

BimatrixGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_game(in);
}

std::size_t TrafficNetwork::path_count() const {
  std::size_t n = 0;
  for (const auto& p : paths) n += p.size();
  return n;
}

Matrix TrafficNetwork::incidence() const {
  Matrix L(links.size(), path_count());
  std::size_t col = 0;
  for (const auto& od : paths)
    for (const auto& p : od) {
      for (std::size_t a : p) L(a, col) = 1.0;
      ++col;
    }
  return L;
}

void TrafficNetwork::validate() const {
  if (nodes == 0) throw ValidationError("network has no nodes");
  if (links.empty()) throw ValidationError("network has no links");
  for (const auto& l : links)
    if (l.tail < 1 || l.tail > nodes || l.head < 1 || l.head > nodes) throw ValidationError("link references unknown node");
  if (od_pairs.empty()) throw ValidationError("network has no OD pairs");
  for (const auto& od : od_pairs) {
    if (!(od.demand > 0.0) || !std::isfinite(od.demand)) throw ValidationError("demand must be positive");
    if (od.origin < 1 || od.origin > nodes || od.destination < 1 || od.destination > nodes)
      throw ValidationError("OD pair references unknown node");
    if (od.origin == od.destination) throw ValidationError("OD pair origin equals destination");
  }
  if (paths.size() != od_pairs.size()) throw ValidationError("path list does not match OD pairs");
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (paths[k].empty()) throw ValidationError("OD pair " + std::to_string(k + 1) + " has no path");
    for (const auto& p : paths[k]) {
      if (p.empty()) throw ValidationError("empty path");
      std::size_t at = od_pairs[k].origin;
      for (std::size_t a : p) {
        if (a >= links.size()) throw ValidationError("unknown link");
        if (links[a].tail != at) throw ValidationError("path is not a connected walk");
        at = links[a].head;
      }
      if (at != od_pairs[k].destination) throw ValidationError("path does not end at its destination");
    }
  }
  if (C.rows() != links.size() || C.cols() != links.size()) throw ValidationError("cost matrix has wrong shape");
  if (d.size() != links.size()) throw ValidationError("cost vector has wrong length");
}

std::vector<std::vector<std::size_t>> enumerate_simple_paths(std::size_t nodes, const std::vector<Link>& links,
                                                             std::size_t origin, std::size_t destination,
                                                             std::size_t cap) {
  std::vector<std::vector<std::size_t>> out_links(nodes + 1);
  for (std::size_t a = 0; a < links.size(); ++a) out_links.at(links[a].tail).push_back(a);

  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> stack;
  std::vector<bool> visited(nodes + 1, false);
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    if (v == destination) {
      if (found.size() >= cap) throw PathEnumerationOverflow("more than " + std::to_string(cap) + " simple paths");
      found.push_back(stack);
      return;
    }
    visited[v] = true;
    for (std::size_t a : out_links[v]) {
      if (visited[links[a].head]) continue;
      stack.push_back(a);
      dfs(links[a].head);
      stack.pop_back();
    }
    visited[v] = false;
  };
  dfs(origin);
  return found;
}

CostPreset parse_cost_preset(const std::string& name) {
  if (name == "uniform_ones") return CostPreset::UniformOnes;
  if (name == "paper_middle") return CostPreset::PaperMiddle;
  if (name == "random") return CostPreset::Random;
  throw BadParameters("unknown cost preset '" + name + "'");
}

std::string to_string(CostPreset p) {
  switch (p) {
    case CostPreset::UniformOnes:
      return "uniform_ones";
    case CostPreset::PaperMiddle:
      return "paper_middle";
    case CostPreset::Random:
      return "random";
  }
  return "unknown";
}

TrafficNetwork nguyen_dupuis_network(CostPreset preset, std::uint64_t seed) {
  TrafficNetwork net;
  net.nodes = 13;
  net.links = {{1, 5},  {1, 12}, {4, 5},  {4, 9},   {5, 6},   {5, 9},   {6, 7},  {6, 10}, {7, 8},  {7, 11},
               {8, 2},  {9, 10}, {9, 13}, {10, 11}, {11, 2},  {11, 3},  {12, 6}, {12, 8}, {13, 3}};
  net.od_pairs = {{1, 2, 400.0}, {1, 3, 800.0}, {4, 2, 600.0}, {4, 3, 200.0}};
  for (const auto& od : net.od_pairs)
    net.paths.push_back(enumerate_simple_paths(net.nodes, net.links, od.origin, od.destination));

  const std::size_t n = net.links.size();
  // Anti-diagonal permutation J times a column scaling.
  auto anti = [n](const std::function<double(std::size_t, std::size_t)>& X) {
    Matrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) C(i, j) = X(n - 1 - i, j);
    return C;
  };
  switch (preset) {
    case CostPreset::UniformOnes:
      net.C = anti([](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; });
      net.d = Vector(n, 1.0);
      break;
    case CostPreset::PaperMiddle: {
      Vector scale{0.125, 0.1, 0.1,   0.05, 0.075, 0.075, 0.125, 0.05, 0.125,
                   0.125, 0.05, 0.05, 0.025, 0.05, 0.1,   0.025, 0.1,  0.1};
      scale.resize(n, scale.back());
      net.C = anti([&](std::size_t i, std::size_t j) { return i == j ? scale[j] : 0.0; });
      net.d = {7, 9, 9, 12, 3, 9, 5, 13, 5, 9, 9, 10, 9, 6, 9, 8, 7, 14, 11};
      break;
    }
    case CostPreset::Random: {
      Rng rng(seed);
      Matrix X(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) X(i, j) = rng.uniform(0.0, 0.1);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) X(i, j) += rng.uniform(0.0, 1.0);
      net.C = anti([&](std::size_t i, std::size_t j) { return X(i, j); });
      net.d.resize(n);
      for (double& v : net.d) v = rng.uniform(0.0, 10.0);
      break;
    }
  }
  net.validate();
  return net;
}

ProblemPtr make_traffic_problem(const TrafficNetwork& net, std::string name) {
  net.validate();
  const Matrix L = net.incidence();
  const Matrix Lt = L.transposed();
  Matrix M = matmul(Lt, matmul(net.C, L));
  Vector b = matvec(Lt, net.d);
  const std::size_t n = M.rows();

  std::vector<SimplexBlock> blocks;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < net.paths.size(); ++k) {
    blocks.push_back({begin, begin + net.paths[k].size(), net.od_pairs[k].demand});
    begin += net.paths[k].size();
  }

  ProblemMetadata meta;
  const double mnorm = spectral_norm(M);
  meta.recommended_lambda = mnorm > 0.0 ? 1.0 / mnorm : 1.0;
  meta.recommended_alpha = 0.9 / affine_gap_lipschitz_bound(M, meta.recommended_lambda);
  meta.notes.push_back("path variables ordered by OD pair, then by depth-first enumeration order");
  return make_affine(std::move(name), std::move(M), std::move(b), FeasibleSet::simplex_product(n, std::move(blocks)),
                     std::move(meta), {});
}

ProblemPtr make_nguyen_dupuis(CostPreset preset, std::uint64_t seed) {
  const TrafficNetwork net = nguyen_dupuis_network(preset, seed);
  std::string name = "nguyen_dupuis/" + to_string(preset);
  auto p = make_traffic_problem(net, name);
  if (preset != CostPreset::PaperMiddle) return p;
  // Rebuild with the note about the padded scale list.
  ProblemMetadata meta = p->metadata();
  meta.notes.push_back("paper_middle: 18 listed scale values padded to 19 by repeating the last");
  return make_affine(name, p->affine()->M, p->affine()->b, p->feasible_set(), std::move(meta), {});
}

TrafficNetwork parse_tep(std::istream& in) {
  TrafficNetwork net;
  std::map<long, Link> links_by_id;
  std::vector<std::pair<std::size_t, std::vector<long>>> raw_paths;
  std::optional<Matrix> C;
  std::optional<Vector> d;
  bool have_nodes = false;
  std::size_t dense_rows_pending = 0;
  Matrix dense;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream is(trim_comment(line));
    if (dense_rows_pending > 0) {
      std::string probe = is.str();
      if (probe.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::size_t r = dense.rows() - dense_rows_pending;
      for (std::size_t j = 0; j < dense.cols(); ++j) dense(r, j) = read_value<double>(is, line_no, "cost entry");
      expect_end(is, line_no);
      if (--dense_rows_pending == 0) C = dense;
      continue;
    }
    std::string key;
    if (!(is >> key)) continue;
    if (key == "NODES") {
      const long n = read_value<long>(is, line_no, "node count");
      if (n < 1) throw ParseError("node count must be positive", line_no);
      net.nodes = static_cast<std::size_t>(n);
      have_nodes = true;
    } else if (key == "LINK") {
      const long id = read_value<long>(is, line_no, "link id");
      const long tail = read_value<long>(is, line_no, "tail node");
      const long head = read_value<long>(is, line_no, "head node");
      if (id < 1 || tail < 1 || head < 1) throw ParseError("ids must be positive", line_no);
      if (links_by_id.count(id)) throw ParseError("duplicate link id " + std::to_string(id), line_no);
      links_by_id[id] = Link{static_cast<std::size_t>(tail), static_cast<std::size_t>(head)};
    } else if (key == "OD") {
      const long o = read_value<long>(is, line_no, "origin");
      const long t = read_value<long>(is, line_no, "destination");
      const double q = read_value<double>(is, line_no, "demand");
      if (o < 1 || t < 1) throw ParseError("ids must be positive", line_no);
      net.od_pairs.push_back({static_cast<std::size_t>(o), static_cast<std::size_t>(t), q});
    } else if (key == "PATH") {
      const long od = read_value<long>(is, line_no, "OD index");
      std::vector<long> ids;
      long id;
      while (is >> id) ids.push_back(id);
      if (!is.eof()) throw ParseError("bad link id in PATH", line_no);
      if (od < 1) throw ParseError("OD index must be positive", line_no);
      raw_paths.emplace_back(static_cast<std::size_t>(od), std::move(ids));
    } else if (key == "COST") {
      std::string kind;
      is >> kind;
      const std::size_t n = links_by_id.size();
      if (n == 0) throw ParseError("COST before LINK lines", line_no);
      if (kind == "DIAG") {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = read_value<double>(is, line_no, "diagonal entry");
        expect_end(is, line_no);
        C = m;
      } else if (kind == "DENSE") {
        expect_end(is, line_no);
        dense = Matrix(n, n);
        dense_rows_pending = n;
      } else {
        throw ParseError("COST must be DIAG or DENSE", line_no);
      }
    } else if (key == "COSTD") {
      Vector v;
      double x;
      while (is >> x) v.push_back(x);
      if (!is.eof()) throw ParseError("bad number in COSTD", line_no);
      d = std::move(v);
    } else {
      throw ParseError("unknown keyword '" + key + "'", line_no);
    }
  }
  if (dense_rows_pending > 0) throw ParseError("unexpected end of file in COST DENSE", line_no);
  if (!have_nodes) throw ValidationError("missing NODES");
  if (!C) throw ValidationError("missing COST");
  if (!d) throw ValidationError("missing COSTD");

  long expect = 1;
  for (const auto& [id, link] : links_by_id) {
    if (id != expect++) throw ValidationError("link ids must be 1..|A| without gaps");
    net.links.push_back(link);
  }
  net.C = *C;
  net.d = *d;

  net.paths.assign(net.od_pairs.size(), {});
  for (const auto& [od, ids] : raw_paths) {
    if (od > net.od_pairs.size()) throw ValidationError("PATH references unknown OD pair");
    std::vector<std::size_t> p;
    for (long id : ids) {
      if (id < 1 || static_cast<std::size_t>(id) > net.links.size()) throw ValidationError("unknown link");
      p.push_back(static_cast<std::size_t>(id - 1));
    }
    net.paths[od - 1].push_back(std::move(p));
  }
  for (const auto& od : net.od_pairs)
    if (!(od.demand > 0.0)) throw ValidationError("demand must be positive");
  for (std::size_t k = 0; k < net.od_pairs.size(); ++k)
    if (net.paths[k].empty()) {
      const auto& od = net.od_pairs[k];
      if (od.origin > net.nodes || od.destination > net.nodes) throw ValidationError("OD pair references unknown node");
      net.paths[k] = enumerate_simple_paths(net.nodes, net.links, od.origin, od.destination);
    }
  net.validate();
  return net;
}

TrafficNetwork load_tep_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_tep(in);
}

void write_tep(std::ostream& out, const TrafficNetwork& net) {
  out << "NODES " << net.nodes << "\n";
  for (std::size_t a = 0; a < net.links.size(); ++a)
    out << "LINK " << a + 1 << " " << net.links[a].tail << " " << net.links[a].head << "\n";
  for (const auto& od : net.od_pairs) out << "OD " << od.origin << " " << od.destination << " " << od.demand << "\n";
  for (std::size_t k = 0; k < net.paths.size(); ++k)
    for (const auto& p : net.paths[k]) {
      out << "PATH " << k + 1;
      for (std::size_t a : p) out << " " << a + 1;
      out << "\n";
    }
  out.precision(17);
  out << "COST DENSE\n";
  for (std::size_t i = 0; i < net.C.rows(); ++i) {
    for (std::size_t j = 0; j < net.C.cols(); ++j) out << (j ? " " : "") << net.C(i, j);
    out << "\n";
  }
  out << "COSTD";
  for (double v : net.d) out << " " << v;
  out << "\n";
}

ProblemPtr make_toy_gan(Vector omega_star) {
  const std::size_t n = omega_star.size();
  if (n == 0) throw BadParameters("make_toy_gan: omega_star is empty");
  if (!all_finite(omega_star)) throw BadParameters("make_toy_gan: omega_star must be finite");
  const auto sigmoid = [](double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); };

  ProblemSpec spec;
  spec.name = "toy_gan";
  spec.dim = 2 * n;
  spec.F = [n, w = omega_star, sigmoid](VecView x) {
    const VecView th = x.subspan(0, n), ph = x.subspan(n, n);
    const double s = sigmoid(dot(ph, th));
    const double r = sigmoid(-dot(ph, w));
    Vector F(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      F[i] = -s * ph[i];
      F[n + i] = -r * w[i] + s * th[i];
    }
    return F;
  };
  spec.jacobian = [n, w = omega_star, sigmoid](VecView x) {
    const VecView th = x.subspan(0, n), ph = x.subspan(n, n);
    const double s = sigmoid(dot(ph, th));
    const double r = sigmoid(-dot(ph, w));
    const double ds = s * (1.0 - s), dr = r * (1.0 - r);
    Matrix J(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double eye = i == j ? 1.0 : 0.0;
        J(i, j) = -ds * ph[i] * ph[j];
        J(i, n + j) = -s * eye - ds * ph[i] * th[j];
        J(n + i, j) = s * eye + ds * th[i] * ph[j];
        J(n + i, n + j) = dr * w[i] * w[j] + ds * th[i] * th[j];
      }
    return J;
  };
  Vector sol = omega_star;
  sol.resize(2 * n, 0.0);
  spec.known_solutions = {sol};
  spec.solution_set = SolutionSet{{sol}, {}};
  spec.metadata.recommended_lambda = 10.0;
  spec.metadata.recommended_alpha = 0.02;
  spec.metadata.sampling_box = Box{Vector(2 * n, -4.0), Vector(2 * n, 4.0)};
  spec.metadata.notes.push_back("modified consensus optimization is locally stable here for lambda > 7.46");
  return std::make_shared<VIProblem>(std::move(spec), FeasibleSet::full_space(2 * n));
}

}  // namespace gapvi
