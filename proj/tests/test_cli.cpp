#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = machina::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("machina_cli_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string last_line(const std::string& s) {
  auto t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.rfind('\n') + 1);
}

}  // namespace

TEST_CASE("validate exit codes") {
  TempDir tmp;
  const auto exported = run({"export", "--process", "mbw3"});
  REQUIRE(exported.code == 0);
  CHECK(run({"validate", tmp.write("mbw3.txt", exported.out)}).code == 0);
  CHECK(run({"validate", tmp.write("short.txt", "model: classical\nalphabet: 0 1\nstates: A\nt: A 0 0.4 A\nt: A 1 0.5 A\n")})
            .code == 1);
  CHECK(run({"validate", tmp.write("junk.txt", "this is not a model\n")}).code == 2);
  CHECK(run({"validate", (tmp.path / "missing.txt").string()}).code == 2);
  const auto q = run({"export", "--process", "d4"});
  CHECK(run({"validate", tmp.write("d4.txt", q.out)}).code == 0);
}

TEST_CASE("entropy") {
  const auto q3 = run({"entropy", "--process", "q3", "--alpha", "1", "--format", "csv"});
  REQUIRE(q3.code == 0);
  CHECK(std::abs(std::stod(last_line(q3.out).substr(2)) - 0.614) <= 0.005);
  const auto d4 = run({"entropy", "--process", "d4", "--alpha", "inf", "--format", "csv"});
  CHECK(d4.out == "alpha,S_alpha\ninf,1\n");
  const auto coin = run({"entropy", "--process", "biased_coin:0.5", "--format", "csv"});
  CHECK(coin.out == "alpha,H_alpha\n0,0\n0.5,0\n1,0\n2,0\ninf,0\n");
  CHECK(run({"entropy", "--process", "d4", "--alpha", "-1"}).code == 2);
}

TEST_CASE("lorenz and compare") {
  const auto a = run({"lorenz", "process:mbw4", "process:q4", "--format", "csv"});
  CHECK(a.code == 0);
  CHECK(last_line(a.out) == "verdict,StrictlyMajorizedBy");
  CHECK(last_line(run({"lorenz", "process:q4", "process:d4", "--format", "csv"}).out) == "verdict,Incomparable");
  CHECK(last_line(run({"lorenz", "dist:0.5,0.5", "dist:0.5,0.5", "--format", "csv"}).out) == "verdict,Equivalent");
  CHECK(last_line(run({"compare", "dist:3/4,1/8,1/8,0,0", "dist:0.4,0.2,0.2,0.1,0.1", "--format", "csv"}).out) ==
        "verdict,StrictlyMajorizes");
  CHECK(run({"lorenz", "process:q4"}).code == 2);
  CHECK(run({"compare", "dist:0.5,0.4", "dist:1"}).code == 2);

  SUBCASE("MACHINA_TOL overrides the tolerance") {
    const std::vector<std::string> args{"compare", "dist:0.5000001,0.4999999", "dist:0.5,0.5", "--format", "csv"};
    CHECK(last_line(run(args).out) == "verdict,StrictlyMajorizes");
    setenv("MACHINA_TOL", "1e-6", 1);
    CHECK(last_line(run(args).out) == "verdict,Equivalent");
    unsetenv("MACHINA_TOL");
  }
}

TEST_CASE("epsilonize") {
  TempDir tmp;
  const auto split = run({"export", "--process", "even_odd_split"});
  const auto in = tmp.write("split.txt", split.out);
  const auto out = (tmp.path / "merged.txt").string();
  const auto r = run({"epsilonize", in, "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.find("merged 5 states into 4") != std::string::npos);
  REQUIRE(fs::exists(out));
  CHECK(run({"validate", out}).out.find("4 states") != std::string::npos);

  CHECK(run({"epsilonize", "--process", "mbw3"}).out.find("already an epsilon-machine") != std::string::npos);
  CHECK(run({"epsilonize", "--process", "biased_coin_b"}).out.find("into 1") != std::string::npos);
}

TEST_CASE("qmachine") {
  const auto r = run({"qmachine", "--process", "mbw3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("strong quantum advantage holds") != std::string::npos);
  CHECK(r.out.find("0.833333") != std::string::npos);
  const auto coin = run({"qmachine", "--process", "biased_coin:0.3"});
  CHECK(coin.out.find("dim 1") != std::string::npos);
  const auto warn = run({"qmachine", "--process", "even_odd_split"});
  CHECK(warn.code == 0);
  CHECK(warn.err.find("warning") != std::string::npos);
}

TEST_CASE("counterexample") {
  const auto r = run({"counterexample"});
  CHECK(r.code == 0);
  CHECK(last_line(r.out) == "PASS");
  CHECK(run({"counterexample", "--grid", "50"}).code == 2);
  const auto csv = run({"counterexample", "--grid", "100", "--format", "csv"});
  CHECK(csv.out.rfind("theta,matrix_residual,analytic_residual\n", 0) == 0);
}

TEST_CASE("wordprob") {
  const auto coin = run({"wordprob", "--process", "biased_coin:0.6", "--word", "11", "--format", "csv"});
  CHECK(coin.out == "word,probability\n11,0.36\n");
  const auto q3 = run({"wordprob", "--process", "q3", "--max-len", "4", "--format", "csv"});
  const auto delta = std::stod(last_line(q3.out).substr(std::string("max_delta,").size()));
  CHECK(delta < 1e-9);
  CHECK(run({"wordprob", "--process", "biased_coin", "--word", "2"}).code == 2);
}

TEST_CASE("usage errors and determinism") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"entropy", "--process", "nope"}).code == 2);
  const std::vector<std::string> args{"qmachine", "--process", "mbw4", "--format", "csv"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("csv mode has no prose") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"qmachine", "--process", "mbw4", "--format", "csv"},
           {"epsilonize", "--process", "even_odd_split", "--format", "csv"},
           {"compare", "process:q4", "process:d4", "--format", "csv"}}) {
    const auto r = run(args);
    CHECK(r.out.find(':') == std::string::npos);
    CHECK(r.out.find("holds") == std::string::npos);
  }
}
