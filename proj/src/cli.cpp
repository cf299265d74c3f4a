#include "gapvi/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gapvi/diagnostics.hpp"
#include "gapvi/errors.hpp"

namespace gapvi::cli {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* env = std::getenv("GAPVI_SEED");
  if (!env) return fallback;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(env, &used);
    if (env[used] != '\0') throw BadParameters("");
    return v;
  } catch (const std::exception&) {
    throw BadParameters(std::string("GAPVI_SEED is not an integer: ") + env);
  }
}

// Options shared by the solve and diagnose subcommands.
struct ProblemArgs {
  std::string name;
  std::string file;
  BuiltinOptions builtin;
  std::string omega_text;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    auto* p = app->add_option("--problem", name, "builtin problem name (see `list`)");
    auto* f = app->add_option("--problem-file", file, "problem file (.game or .tep)");
    p->excludes(f);
    app->add_option("--preset", builtin.preset, "nguyen_dupuis cost preset: uniform_ones, paper_middle, random");
    app->add_option("--n1", builtin.n1, "bimatrix_random: strategies of player 1");
    app->add_option("--n2", builtin.n2, "bimatrix_random: strategies of player 2");
    app->add_option("--max-entry", builtin.max_entry, "bimatrix_random: largest payoff entry");
    app->add_option("--omega", omega_text, "toy_gan: comma-separated omega*");
    app->add_option("--seed", seed, "random seed (GAPVI_SEED overrides)");
  }

  void resolve_seed() {
    seed = env_seed(seed);
    builtin.seed = seed;
    if (!omega_text.empty()) builtin.omega = parse_vector(omega_text);
  }

  ProblemPtr build() {
    resolve_seed();
    if (name.empty() == file.empty()) throw BadParameters("exactly one of --problem or --problem-file is required");
    return file.empty() ? make_builtin(name, builtin) : load_problem_file(file);
  }

  json echo() const {
    json j;
    if (!name.empty()) j["problem"] = name;
    if (!file.empty()) j["problem_file"] = file;
    j["preset"] = builtin.preset;
    j["n1"] = builtin.n1;
    j["n2"] = builtin.n2;
    j["max_entry"] = builtin.max_entry;
    j["omega"] = builtin.omega;
    j["seed"] = seed;
    return j;
  }
};

double default_alpha(const ProblemPtr& p, double lambda, std::uint64_t seed) {
  if (p->metadata().recommended_alpha && lambda == p->metadata().recommended_lambda)
    return *p->metadata().recommended_alpha;
  if (p->affine()) return 0.9 / affine_gap_lipschitz_bound(p->affine()->M, lambda);
  SampleRegion region;
  region.n_samples = 2000;
  region.seed = seed;
  return 0.9 / estimate_lipschitz(GapEvaluator(p, lambda), region);
}

Vector resolve_x0(const std::string& text, const ProblemPtr& p, std::uint64_t seed) {
  if (text.empty() || text == "barycenter") return p->feasible_set().reference_point();
  if (text == "random") {
    SampleRegion region;
    region.n_samples = 1;
    region.seed = seed;
    return sample_points(*p, region).front();
  }
  Vector x = parse_vector(text);
  if (x.size() != p->dim())
    throw BadParameters("--x0 has " + std::to_string(x.size()) + " entries, problem has dimension " +
                        std::to_string(p->dim()));
  return x;
}

struct SolveOutcome {
  std::string status;
  int code = kExitUnsolved;
  Vector final_x;
  double final_gap = 0.0;
  long iterations = 0;
  Trace trace;
  std::vector<std::string> warnings;
  json extra = json::object();
};

SolveOutcome run_co(const ProblemPtr& p, const SolverConfig& cfg, Vector x, bool pure_gap) {
  const GapEvaluator ev(p, cfg.lambda);
  SolveOutcome out;
  const auto start = std::chrono::steady_clock::now();
  for (long k = 0;; ++k) {
    const double gap = ev.value(x);
    TraceRecord rec;
    rec.k = k;
    rec.gap = gap;
    rec.dist_to_solution = p->distance_to_solutions(x);
    rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.x_norm = norm(x);
    SolveStatus status = SolveStatus::MaxIters;
    bool done = true;
    Vector next;
    if (gap <= cfg.eps_gap) {
      status = SolveStatus::SolvedVIP;
    } else if (!std::isfinite(gap) || gap > 1e12) {
      status = SolveStatus::Diverged;
    } else if (k >= cfg.max_iters) {
      status = SolveStatus::MaxIters;
    } else {
      next = co_step(*p, cfg.lambda, cfg.alpha, x, pure_gap);
      rec.step_norm = distance(x, next);
      if (rec.step_norm <= cfg.eps_stat) {
        status = SolveStatus::StationaryNotSolved;
      } else if (!all_finite(next) || norm(next) > 1e12) {
        status = SolveStatus::Diverged;
      } else {
        done = false;
      }
    }
    out.trace.records.push_back(std::move(rec));
    if (done) {
      out.status = to_string(status);
      out.code = exit_code(status);
      out.final_x = x;
      out.final_gap = gap;
      out.iterations = k;
      out.extra["final_F_norm"] = norm(p->eval_F(x));
      return out;
    }
    x = std::move(next);
  }
}

int cmd_solve(ProblemArgs& pa, const std::string& solver, const std::string& x0_text, SolverConfig cfg,
              std::optional<double> alpha, std::optional<double> lambda, const std::string& rule,
              HomotopyConfig hcfg, bool pure_gap, const std::string& trace_path, const std::string& summary_path,
              std::ostream& out) {
  const ProblemPtr p = pa.build();
  cfg.lambda = lambda ? *lambda : p->metadata().recommended_lambda;
  cfg.alpha = alpha ? *alpha : default_alpha(p, cfg.lambda, pa.seed);
  cfg.record_trace = !trace_path.empty();
  if (rule == "backtracking") {
    cfg.alpha_rule = Backtracking{};
  } else if (rule != "fixed") {
    throw BadParameters("--rule must be fixed or backtracking");
  }

  SolveOutcome res;
  if (solver == "pg") {
    SolverResult r = solve_pg(p, cfg, resolve_x0(x0_text, p, pa.seed));
    res.status = to_string(r.status);
    res.code = exit_code(r.status);
    res.final_x = std::move(r.final_x);
    res.final_gap = r.final_gap;
    res.iterations = r.iterations;
    res.trace = std::move(r.trace);
    res.warnings = std::move(r.warnings);
  } else if (solver == "homotopy") {
    hcfg.inner = cfg;
    hcfg.recompute_alpha = !alpha.has_value();
    std::optional<Vector> x0;
    if (!x0_text.empty()) x0 = resolve_x0(x0_text, p, pa.seed);
    HomotopyResult r = solve_homotopy(p, hcfg, x0);
    res.status = to_string(r.status);
    res.code = exit_code(r.status);
    res.final_x = std::move(r.final_x);
    res.final_gap = r.final_gap;
    res.iterations = r.total_inner_iterations;
    res.trace = std::move(r.trace);
    res.warnings = std::move(r.warnings);
    json path = json::array();
    for (const auto& e : r.path)
      path.push_back({{"t", e.t},
                      {"x", e.x},
                      {"inner_iterations", e.inner_iterations},
                      {"inner_status", to_string(e.inner_status)},
                      {"gap", e.gap},
                      {"alpha", e.alpha}});
    res.extra["path"] = std::move(path);
    res.extra["outer_steps"] = r.outer_steps;
    res.extra["rejected_probes"] = r.rejected_probes;
  } else if (solver == "co") {
    res = run_co(p, cfg, resolve_x0(x0_text, p, pa.seed), pure_gap);
  } else {
    throw BadParameters("--solver must be pg, homotopy or co");
  }

  json config = pa.echo();
  config["solver"] = solver;
  config["x0"] = x0_text.empty() ? "barycenter" : x0_text;
  config["lambda"] = cfg.lambda;
  config["alpha"] = cfg.alpha;
  config["rule"] = rule;
  config["max_iters"] = cfg.max_iters;
  config["eps_gap"] = cfg.eps_gap;
  config["eps_stat"] = cfg.eps_stat;
  if (solver == "homotopy") {
    config["delta"] = hcfg.delta;
    config["eps_gap_inner"] = hcfg.eps_gap_inner;
    config["t_floor"] = hcfg.t_floor;
    config["max_outer"] = hcfg.max_outer;
    config["max_inner_i"] = hcfg.max_inner_i;
  }
  if (solver == "co") config["pure_gap"] = pure_gap;

  std::string inputs = config.dump();
  if (!pa.file.empty()) inputs += slurp(pa.file);

  json summary;
  summary["problem"] = p->name();
  summary["status"] = res.status;
  summary["exit_code"] = res.code;
  summary["final_x"] = res.final_x;
  summary["final_gap"] = res.final_gap;
  summary["iterations"] = res.iterations;
  summary["config"] = config;
  summary["input_hash"] = content_hash(inputs);
  summary["warnings"] = res.warnings;
  for (auto& [k, v] : res.extra.items()) summary[k] = v;

  if (!trace_path.empty()) {
    std::ostringstream os;
    write_trace_csv(os, res.trace);
    write_file(trace_path, os.str());
  }
  if (!summary_path.empty()) write_file(summary_path, summary.dump(2) + "\n");
  out << p->name() << ": " << res.status << " gap=" << fmt(res.final_gap) << " iterations=" << res.iterations
      << "\n";
  return res.code;
}

int cmd_diagnose(ProblemArgs& pa, const std::string& suite, std::size_t samples, std::optional<double> alpha,
                 std::optional<double> lambda, double nu, const std::string& report_path, std::ostream& out) {
  const ProblemPtr p = pa.build();
  const double lam = lambda ? *lambda : p->metadata().recommended_lambda;
  const GapEvaluator ev(p, lam);
  SampleRegion region;
  region.n_samples = samples;
  region.seed = pa.seed;

  json rep;
  rep["problem"] = p->name();
  rep["suite"] = suite;
  rep["samples"] = samples;
  rep["seed"] = pa.seed;
  int code = kExitSolved;

  auto candidates = [&] {
    std::vector<Vector> c = p->known_solutions();
    if (c.empty()) throw BadParameters(p->name() + " lists no candidate solutions");
    return c;
  };

  if (suite == "proposition") {
    SuiteConfig sc;
    const LipschitzEstimate L = estimate_lipschitz_detailed(ev, region);
    sc.L = L.value;
    sc.alpha = alpha ? *alpha : 0.9 / L.value;
    const PropertyReport pr = run_property_suite(ev, sc, region);
    rep = json::parse(pr.to_json());
    rep["suite"] = suite;
    code = pr.gating_violations() == 0 ? kExitSolved : kExitUnsolved;
    out << p->name() << ": " << pr.gating_violations() << " violations over " << samples << " samples\n";
  } else if (suite == "minty") {
    std::vector<Vector> probes;
    if (p->name() == "toy_gan" && p->dim() == 2) probes.push_back({3.0, 1.0});
    const auto w = minty_violation_search(*p, candidates(), region, kMintyTolerance, probes);
    rep["witness_found"] = w.has_value();
    if (w) {
      json arr = json::array();
      for (const auto& v : w->violations) arr.push_back({{"candidate", v.candidate}, {"x", v.x}, {"value", v.value}});
      rep["violations"] = arr;
    }
    out << p->name() << ": Minty witness " << (w ? "found" : "not found") << "\n";
  } else if (suite == "monotonicity") {
    const MonotonicityReport m = monotonicity_probe(*p, region);
    rep["min_ratio"] = m.min_ratio;
    rep["x"] = m.x;
    rep["x2"] = m.x2;
    rep["pair_value"] = m.pair_value;
    rep["n_pairs"] = m.n_pairs;
    rep["monotone_on_samples"] = m.monotone_on_samples();
    out << p->name() << ": min ratio " << fmt(m.min_ratio) << "\n";
  } else if (suite == "lipschitz") {
    const LipschitzEstimate L = estimate_lipschitz_detailed(ev, region);
    rep["estimate"] = L.value;
    rep["sampled"] = L.sampled;
    if (L.refined) rep["refined"] = *L.refined;
    if (L.analytic) rep["analytic"] = *L.analytic;
    rep["n_pairs"] = L.n_pairs;
    out << p->name() << ": L ~ " << fmt(L.value) << "\n";
  } else if (suite == "peb") {
    SolutionSet sols = p->solution_set() ? *p->solution_set() : SolutionSet{candidates(), {}};
    const double a = alpha ? *alpha : 0.9 / estimate_lipschitz(ev, region);
    const PebEstimate e = estimate_peb_constant(ev, sols, nu, a, region);
    rep["estimate"] = e.value;
    rep["nu"] = nu;
    rep["alpha"] = a;
    rep["n_in_level_set"] = e.n_in_level_set;
    rep["n_drawn"] = e.n_drawn;
    rep["witness"] = e.witness;
    out << p->name() << ": PEB constant >= " << fmt(e.value) << " (" << e.n_in_level_set << " samples)\n";
  } else if (suite == "rsm") {
    SolutionSet sols = p->solution_set() ? *p->solution_set() : SolutionSet{candidates(), {}};
    const RestrictedMonotonicityReport r = restricted_strong_monotonicity_probe(*p, sols, region);
    rep["min_ratio"] = r.min_ratio;
    rep["witness"] = r.witness;
    rep["n_used"] = r.n_used;
    out << p->name() << ": restricted monotonicity ratio " << fmt(r.min_ratio) << "\n";
  } else {
    throw BadParameters("--suite must be proposition, minty, monotonicity, lipschitz, peb or rsm");
  }
  if (!report_path.empty()) write_file(report_path, rep.dump(2) + "\n");
  return code;
}

struct BenchRow {
  std::string instance;
  BenchInstance spec;
  std::string solver;
  std::string status;
  double final_gap;
  long iterations;
  double seconds;
};

constexpr double kBenchAlpha0 = 10.0;

std::vector<BenchRow> bench_instance(const BenchInstance& inst, long max_iters) {
  const ProblemPtr p = make_bimatrix(generate_random_bimatrix(inst.n1, inst.n2, inst.max_entry, inst.seed),
                                     inst.name());
  SolverConfig cfg;
  cfg.lambda = p->metadata().recommended_lambda;
  cfg.alpha = kBenchAlpha0;
  cfg.alpha_rule = Backtracking{};
  cfg.max_iters = max_iters;
  cfg.eps_gap = 1e-10;
  cfg.snapshot_max_dim = 0;
  cfg.record_trace = false;

  std::vector<BenchRow> rows;
  auto t0 = std::chrono::steady_clock::now();
  const SolverResult pg = solve_pg(p, cfg, p->feasible_set().reference_point());
  auto t1 = std::chrono::steady_clock::now();
  rows.push_back({inst.name(), inst, "pg", to_string(pg.status), pg.final_gap, pg.iterations,
                  std::chrono::duration<double>(t1 - t0).count()});

  HomotopyConfig h;
  h.inner = cfg;
  h.recompute_alpha = false;
  h.record_trace = false;
  const HomotopyResult hr = solve_homotopy(p, h);
  auto t2 = std::chrono::steady_clock::now();
  rows.push_back({inst.name(), inst, "homotopy", to_string(hr.status), hr.final_gap, hr.total_inner_iterations,
                  std::chrono::duration<double>(t2 - t1).count()});
  return rows;
}

int cmd_bench(const std::string& preset, std::uint64_t seed, long max_iters, const std::string& out_path,
              std::ostream& out) {
  if (preset.empty()) throw BadParameters("--preset is required");
  if (preset != "bimatrix_grid") throw BadParameters("unknown bench preset '" + preset + "'");
  seed = env_seed(seed);

  std::vector<std::future<std::vector<BenchRow>>> jobs;
  for (const auto& inst : bimatrix_grid(seed))
    jobs.push_back(std::async(std::launch::async, bench_instance, inst, max_iters));

  std::ostringstream csv;
  csv << "instance,n1,n2,max_entry,seed,solver,status,final_gap,iterations,seconds\n";
  csv << std::setprecision(17);
  int homotopy_solved = 0, pg_solved = 0, n = 0;
  for (auto& j : jobs) {
    for (const auto& r : j.get()) {
      csv << r.instance << "," << r.spec.n1 << "," << r.spec.n2 << "," << r.spec.max_entry << "," << r.spec.seed
          << "," << r.solver << "," << r.status << "," << r.final_gap << "," << r.iterations << "," << r.seconds
          << "\n";
      const bool ok = r.final_gap <= 1e-8;
      if (r.solver == "homotopy") {
        homotopy_solved += ok;
        ++n;
      } else {
        pg_solved += ok;
      }
    }
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_file(out_path, csv.str());
  }
  out << "# gap <= 1e-8: pg " << pg_solved << "/" << n << ", homotopy " << homotopy_solved << "/" << n << "\n";
  return homotopy_solved == n ? kExitSolved : kExitUnsolved;
}

}  // namespace

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::SolvedVIP:
      return kExitSolved;
    case SolveStatus::StationaryNotSolved:
      return kExitStationary;
    case SolveStatus::MaxIters:
    case SolveStatus::Diverged:
      return kExitUnsolved;
  }
  return kExitUnsolved;
}

int exit_code(HomotopyStatus s) {
  switch (s) {
    case HomotopyStatus::SolvedVIP:
      return kExitSolved;
    case HomotopyStatus::StalledInner:
      return kExitStationary;
    case HomotopyStatus::MaxOuter:
      return kExitUnsolved;
  }
  return kExitUnsolved;
}

std::vector<std::string> builtin_names() {
  return {"example1_2",        "example1_3",     "example4_1",    "strongly_monotone",
          "bimatrix_textbook", "bimatrix_random", "nguyen_dupuis", "toy_gan"};
}

ProblemPtr make_builtin(const std::string& name, const BuiltinOptions& opts) {
  if (name == "example1_2") return make_example_1_2();
  if (name == "example1_3") return make_example_1_3();
  if (name == "example4_1") return make_example_4_1();
  if (name == "strongly_monotone") return make_strongly_monotone_control();
  if (name == "bimatrix_textbook") return make_bimatrix_textbook();
  if (name == "bimatrix_random") {
    const BenchInstance inst{opts.n1, opts.n2, opts.max_entry, opts.seed};
    return make_bimatrix(generate_random_bimatrix(opts.n1, opts.n2, opts.max_entry, opts.seed), inst.name());
  }
  if (name == "nguyen_dupuis") return make_nguyen_dupuis(parse_cost_preset(opts.preset), opts.seed);
  if (name == "toy_gan") return make_toy_gan(opts.omega);
  throw BadParameters("unknown problem '" + name + "'");
}

ProblemPtr load_problem_file(const std::string& path) {
  const std::filesystem::path fp(path);
  if (fp.extension() == ".game") return make_bimatrix(load_game(fp), fp.stem().string());
  if (fp.extension() == ".tep") return make_traffic_problem(load_tep_network(fp), fp.stem().string());
  throw BadParameters("problem file must end in .game or .tep: " + path);
}

void list_problems(std::ostream& out) {
  for (const auto& name : builtin_names()) {
    const ProblemPtr p = make_builtin(name);
    out << name << " d=" << p->dim();
    if (name == "nguyen_dupuis") out << " links=" << nguyen_dupuis_network().links.size();
    out << " set=" << p->feasible_set().kind() << " lambda=" << fmt(p->metadata().recommended_lambda);
    if (p->metadata().recommended_alpha) {
      out << " alpha=" << fmt(*p->metadata().recommended_alpha);
    } else {
      out << " alpha=auto";
    }
    out << "\n";
  }
}

Vector parse_vector(std::string_view text) {
  Vector v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string tok(text.substr(pos, comma - pos));
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) throw BadParameters("empty entry in vector '" + std::string(text) + "'");
    auto number = [&](const std::string& s) {
      std::size_t used = 0;
      double x;
      try {
        x = std::stod(s, &used);
      } catch (const std::exception&) {
        throw BadParameters("not a number: '" + s + "'");
      }
      if (used != s.size()) throw BadParameters("not a number: '" + s + "'");
      return x;
    };
    const auto slash = tok.find('/');
    if (slash == std::string::npos) {
      v.push_back(number(tok));
    } else {
      const double den = number(tok.substr(slash + 1));
      if (den == 0.0) throw BadParameters("zero denominator in '" + tok + "'");
      v.push_back(number(tok.substr(0, slash)) / den);
    }
    pos = comma + 1;
  }
  return v;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "k,gap,step_norm,dist_to_solution,t\n";
  out << std::setprecision(17);
  for (const auto& r : trace.records)
    out << r.k << "," << r.gap << "," << r.step_norm << "," << r.dist_to_solution << "," << r.t << "\n";
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "k,gap,step_norm,dist_to_solution,t")
    throw ParseError("missing trace header", 1);
  Trace trace;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw ParseError("expected 5 columns", line_no);
    TraceRecord r;
    try {
      r.k = std::stol(cells[0]);
      r.gap = std::stod(cells[1]);
      r.step_norm = std::stod(cells[2]);
      r.dist_to_solution = std::stod(cells[3]);
      r.t = std::stod(cells[4]);
    } catch (const std::exception&) {
      throw ParseError("bad number", line_no);
    }
    trace.records.push_back(std::move(r));
  }
  return trace;
}

std::string content_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw Error("SHA-1 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gap-function solvers for non-monotone variational inequalities", "gapvi"};
  app.require_subcommand(1);

  ProblemArgs solve_pa;
  std::string solver = "pg", x0_text, rule = "fixed", trace_path, summary_path;
  SolverConfig cfg;
  HomotopyConfig hcfg;
  std::optional<double> alpha, lambda;
  bool pure_gap = false;
  auto* solve = app.add_subcommand("solve", "run a solver and write its trace and summary");
  solve_pa.attach(solve);
  solve->add_option("--solver", solver, "pg, homotopy or co")->check(CLI::IsMember({"pg", "homotopy", "co"}));
  solve->add_option("--x0", x0_text, "start: comma-separated values (fractions allowed), barycenter, or random");
  solve->add_option("--lambda", lambda, "gap regularization lambda (default: instance recommendation)");
  solve->add_option("--alpha", alpha, "step size (default: 0.9/L)");
  solve->add_option("--rule", rule, "step rule: fixed or backtracking");
  solve->add_option("--max-iters", cfg.max_iters, "iteration budget per solve");
  solve->add_option("--eps-gap", cfg.eps_gap, "declare solved when gap <= eps-gap");
  solve->add_option("--eps-stat", cfg.eps_stat, "declare stationary when |x - T(x)| <= eps-stat");
  solve->add_option("--delta", hcfg.delta, "homotopy probe factor");
  solve->add_option("--eps-gap-inner", hcfg.eps_gap_inner, "homotopy acceptance tolerance");
  solve->add_option("--t-floor", hcfg.t_floor, "homotopy snap-to-zero threshold");
  solve->add_option("--max-outer", hcfg.max_outer, "homotopy outer budget");
  solve->add_option("--max-inner-i", hcfg.max_inner_i, "homotopy probes per outer step");
  solve->add_flag("--pure-gap", pure_gap, "co: drop the +alpha F term");
  solve->add_option("--trace", trace_path, "trace CSV output path");
  solve->add_option("--summary", summary_path, "JSON summary output path");

  ProblemArgs diag_pa;
  std::string suite = "proposition", report_path;
  std::size_t samples = 500;
  std::optional<double> diag_alpha, diag_lambda;
  double nu = 0.125;
  auto* diagnose = app.add_subcommand("diagnose", "run a diagnostics suite and write its report");
  diag_pa.attach(diagnose);
  diagnose->add_option("--suite", suite, "proposition, minty, monotonicity, lipschitz, peb or rsm");
  diagnose->add_option("--samples", samples, "number of sampled points");
  diagnose->add_option("--alpha", diag_alpha, "step size under test (default: 0.9/L)");
  diagnose->add_option("--lambda", diag_lambda, "gap regularization lambda");
  diagnose->add_option("--nu", nu, "peb: level-set height");
  diagnose->add_option("--report", report_path, "JSON report output path");

  std::string preset, bench_out;
  std::uint64_t bench_seed = 0;
  long bench_iters = 100000;
  auto* bench = app.add_subcommand("bench", "run a benchmark preset with pg and homotopy");
  bench->add_option("--preset", preset, "bimatrix_grid");
  bench->add_option("--seed", bench_seed, "grid seed (GAPVI_SEED overrides)");
  bench->add_option("--max-iters", bench_iters, "iteration budget per solve");
  bench->add_option("--out", bench_out, "CSV output path (default: standard output)");

  auto* list = app.add_subcommand("list", "list builtin problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "gapvi: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve)
      return cmd_solve(solve_pa, solver, x0_text, cfg, alpha, lambda, rule, hcfg, pure_gap, trace_path, summary_path,
                       out);
    if (*diagnose) return cmd_diagnose(diag_pa, suite, samples, diag_alpha, diag_lambda, nu, report_path, out);
    if (*bench) return cmd_bench(preset, bench_seed, bench_iters, bench_out, out);
    if (*list) {
      list_problems(out);
      return 0;
    }
  } catch (const Error& e) {
    err << "gapvi: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace gapvi::cli
