#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gapvi/cli.hpp"
#include "gapvi/errors.hpp"
#include "json.hpp"

using namespace gapvi;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gapvi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gapvi_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes follow solver status") {
    CHECK(cli::exit_code(SolveStatus::SolvedVIP) == 0);
    CHECK(cli::exit_code(SolveStatus::StationaryNotSolved) == 2);
    CHECK(cli::exit_code(SolveStatus::MaxIters) == 3);
    CHECK(cli::exit_code(SolveStatus::Diverged) == 3);
    CHECK(cli::exit_code(HomotopyStatus::SolvedVIP) == 0);
    CHECK(cli::exit_code(HomotopyStatus::StalledInner) == 2);
    CHECK(cli::exit_code(HomotopyStatus::MaxOuter) == 3);
  }

  TEST_CASE("solve writes a summary and a trace") {
    const fs::path summary = scratch("solve.json");
    const fs::path trace = scratch("solve.csv");
    const Run r = invoke({"solve", "--problem", "example1_2", "--x0", "0.4", "--summary", summary.string(), "--trace",
                          trace.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("SolvedVIP") != std::string::npos);
    const auto j = read_json(summary);
    CHECK(j["status"] == "SolvedVIP");
    CHECK(j["exit_code"] == 0);
    CHECK(j["input_hash"].get<std::string>().size() == 40);
    CHECK(j["config"]["solver"] == "pg");
    std::ifstream in(trace);
    const Trace t = cli::read_trace_csv(in);
    CHECK(static_cast<long>(t.records.size()) == j["iterations"].get<long>() + 1);
    CHECK(t.records.back().gap <= 1e-10);
  }

  TEST_CASE("same inputs give the same input hash") {
    const fs::path a = scratch("a.json"), b = scratch("b.json"), c = scratch("c.json");
    invoke({"solve", "--problem", "example1_2", "--x0", "0.4", "--summary", a.string()});
    invoke({"solve", "--problem", "example1_2", "--x0", "0.4", "--summary", b.string()});
    invoke({"solve", "--problem", "example1_2", "--x0", "0.3", "--summary", c.string()});
    CHECK(read_json(a)["input_hash"] == read_json(b)["input_hash"]);
    CHECK(read_json(a)["input_hash"] != read_json(c)["input_hash"]);
  }

  TEST_CASE("stationary and unsolved runs") {
    CHECK(invoke({"solve", "--problem", "example1_2", "--x0", "2/3"}).code == 2);
    CHECK(invoke({"solve", "--problem", "example1_2", "--x0", "0.4", "--max-iters", "1"}).code == 3);
    CHECK(invoke({"solve", "--problem", "example1_2", "--x0", "0.9", "--solver", "homotopy"}).code == 0);
  }

  TEST_CASE("usage errors exit with 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"solve"}).code == 1);
    CHECK(invoke({"solve", "--problem", "nope"}).code == 1);
    CHECK(invoke({"solve", "--problem", "example1_2", "--x0", "0.1,0.2"}).code == 1);
    CHECK(invoke({"solve", "--problem", "example1_2", "--rule", "armijo"}).code == 1);
    CHECK(invoke({"solve", "--problem", "example1_2", "--solver", "newton"}).code == 1);
    CHECK(invoke({"bench"}).code == 1);
    CHECK(invoke({"bench", "--preset", "other"}).code == 1);
    CHECK(invoke({"diagnose", "--problem", "example1_2", "--suite", "bogus"}).code == 1);
    const Run r = invoke({"solve", "--problem", "example1_2", "--problem-file", "x.game"});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("problem files load by extension") {
    const std::string game = std::string(GAPVI_DATA_DIR) + "/textbook.game";
    const Run r = invoke({"solve", "--problem-file", game, "--solver", "homotopy"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("textbook: SolvedVIP", 0) == 0);
    CHECK(cli::load_problem_file(std::string(GAPVI_DATA_DIR) + "/nguyen_dupuis.tep")->dim() == 25);
    CHECK_THROWS_AS(cli::load_problem_file("net.txt"), BadParameters);
  }

  TEST_CASE("diagnose writes a report") {
    const fs::path rep = scratch("minty.json");
    const Run r = invoke({"diagnose", "--problem", "example1_2", "--suite", "minty", "--samples", "200", "--report",
                          rep.string()});
    CHECK(r.code == 0);
    const auto j = read_json(rep);
    CHECK(j["witness_found"] == true);
    CHECK(j["violations"].size() == 3);
    const fs::path prop = scratch("prop.json");
    CHECK(invoke({"diagnose", "--problem", "example1_2", "--samples", "200", "--report", prop.string()}).code == 0);
    CHECK(read_json(prop)["gating_violations"] == 0);
    CHECK(invoke({"diagnose", "--problem", "example1_2", "--samples", "200", "--alpha", "30"}).code == 3);
  }

  TEST_CASE("list names every builtin") {
    const Run r = invoke({"list"});
    CHECK(r.code == 0);
    CHECK(r.out.find("example1_2 d=1") != std::string::npos);
    CHECK(r.out.find("nguyen_dupuis d=25 links=19") != std::string::npos);
    CHECK(r.out.find("toy_gan d=2") != std::string::npos);
    for (const auto& name : cli::builtin_names()) CHECK(r.out.find(name + " d=") != std::string::npos);
    CHECK_THROWS_AS(cli::make_builtin("nope"), BadParameters);
    cli::BuiltinOptions o;
    o.n1 = 4;
    o.n2 = 5;
    CHECK(cli::make_builtin("bimatrix_random", o)->dim() == 9);
  }

  TEST_CASE("vector parsing") {
    CHECK(cli::parse_vector("1, -2.5,1/4") == Vector{1.0, -2.5, 0.25});
    CHECK(cli::parse_vector("2/3")[0] == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(cli::parse_vector(""), BadParameters);
    CHECK_THROWS_AS(cli::parse_vector("1,,2"), BadParameters);
    CHECK_THROWS_AS(cli::parse_vector("1,"), BadParameters);
    CHECK_THROWS_AS(cli::parse_vector("abc"), BadParameters);
    CHECK_THROWS_AS(cli::parse_vector("1.5x"), BadParameters);
    CHECK_THROWS_AS(cli::parse_vector("1/0"), BadParameters);
  }

  TEST_CASE("trace CSV") {
    Trace t;
    TraceRecord a;
    a.k = 0;
    a.gap = 0.1;
    a.step_norm = 1.0 / 3.0;
    a.dist_to_solution = std::nan("");
    a.t = 0.5;
    t.records = {a};
    std::ostringstream out;
    cli::write_trace_csv(out, t);
    std::istringstream in(out.str());
    const Trace back = cli::read_trace_csv(in);
    REQUIRE(back.records.size() == 1);
    CHECK(back.records[0].step_norm == a.step_norm);
    CHECK(std::isnan(back.records[0].dist_to_solution));
    CHECK(back.records[0].t == 0.5);
    std::istringstream no_header("0,1,2,3,4\n");
    CHECK_THROWS_AS(cli::read_trace_csv(no_header), ParseError);
    std::istringstream short_row("k,gap,step_norm,dist_to_solution,t\n0,1,2\n");
    CHECK_THROWS_AS(cli::read_trace_csv(short_row), ParseError);
    std::istringstream bad_number("k,gap,step_norm,dist_to_solution,t\n0,x,2,3,4\n");
    CHECK_THROWS_AS(cli::read_trace_csv(bad_number), ParseError);
  }

  TEST_CASE("content hash matches git blob ids") {
    CHECK(cli::content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(cli::content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(cli::content_hash(std::string_view("a\0b", 3)) == "20b5be91886d0b6f26dc98a225c0dac05fe2c86e");
  }

  TEST_CASE("GAPVI_SEED overrides the seed option") {
    const fs::path a = scratch("seed_a.json"), b = scratch("seed_b.json");
    ::setenv("GAPVI_SEED", "7", 1);
    invoke({"solve", "--problem", "example1_2", "--x0", "random", "--seed", "1", "--summary", a.string()});
    ::unsetenv("GAPVI_SEED");
    invoke({"solve", "--problem", "example1_2", "--x0", "random", "--seed", "7", "--summary", b.string()});
    CHECK(read_json(a)["config"]["seed"] == 7);
    CHECK(read_json(a)["final_x"] == read_json(b)["final_x"]);
    ::setenv("GAPVI_SEED", "seven", 1);
    CHECK(invoke({"solve", "--problem", "example1_2"}).code == 1);
    CHECK(invoke({"bench", "--preset", "bimatrix_grid"}).code == 1);
    ::unsetenv("GAPVI_SEED");
  }
}
