#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string out;
};

const std::string bin = WKA_BINARY;

fs::path workdir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "wka_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// Runs a shell command in which WKA stands for the binary.
Result run(std::string cmd) {
  for (std::size_t p; (p = cmd.find("WKA")) != std::string::npos;)
    cmd.replace(p, 3, bin);
  Result r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, f)) > 0)
    r.out.append(buf, got);
  int st = pclose(f);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

nlohmann::json run_json(const std::string& cmd) {
  Result r = run(cmd);
  CHECK(r.status == 0);
  return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("pipelines") {
  nlohmann::json m = run_json("WKA gen group --cyclic 3 | WKA --json markov");
  CHECK(m["pass"] == true);
  CHECK(m["values"]["lambda_inverse"] == 3);

  CHECK(run("WKA gen pairgroupoid 2 | WKA verify").status == 0);

  nlohmann::json t = run_json("WKA gen twosided-example --order 2 | WKA --json tower --depth 1");
  CHECK(t["values"]["dims"] == nlohmann::json::array({8, 32}));
}

TEST_CASE("every command runs") {
  const std::string k = path("z2.json"), pg = path("pg2.json"), act = path("act.json"), dact = path("dact.json");
  const std::string cp = path("cp.json");
  REQUIRE(run("WKA gen group --cyclic 2 -o " + k).status == 0);
  REQUIRE(run("WKA gen pairgroupoid 2 > " + pg).status == 0);
  CHECK(run("WKA gen group --symmetric 3 | WKA verify").status == 0);
  CHECK(run("WKA gen dualgroup --symmetric 3 | WKA verify").status == 0);
  CHECK(run("WKA gen dualgroup --cyclic 3 | WKA verify").status == 0);
  CHECK(run("WKA gen trivial-action " + pg + " --side left -o " + act).status == 0);
  CHECK(run("WKA gen dual-action " + pg + " --side right -o " + dact).status == 0);
  CHECK(run("WKA gen directsum " + k + " " + pg + " | WKA verify").status == 0);
  CHECK(run("WKA verify " + act).status == 0);
  CHECK(run("WKA verify " + dact).status == 0);
  CHECK(run("WKA dual " + pg + " 2>/dev/null | WKA verify").status == 0);
  CHECK(run("WKA dual " + pg + " -o " + path("pgd.json")).status == 0);
  CHECK(run("WKA haar " + pg).status == 0);
  CHECK(run("WKA markov " + pg).status == 0);
  CHECK(run("WKA cross " + pg + " --action " + act + " -o " + cp).status == 0);
  CHECK(run("WKA verify " + cp).status == 0);
  CHECK(run("WKA duality " + pg).status == 0);
  CHECK(run("WKA duality " + k + " --algebra " + act + " 2>/dev/null").status == 2);
  CHECK(run("WKA dual " + k + " -o " + path("z2d.json")).status == 0);
  CHECK(run("WKA gen dual-action " + k + " | WKA duality " + path("z2d.json") + " --algebra -").status == 0);
  CHECK(run("WKA tower " + k + " --depth 2 --left-right 2").status == 0);
  CHECK(run("WKA report " + pg).status == 0);
  CHECK(run("WKA --tol 1e-8 --seed 7 report " + k).status == 0);
}

TEST_CASE("failures name the check") {
  const std::string sum = path("sum.json");
  REQUIRE(run("WKA gen group --cyclic 2 -o " + path("a.json")).status == 0);
  REQUIRE(run("WKA gen group --cyclic 3 -o " + path("b.json")).status == 0);
  REQUIRE(run("WKA gen directsum " + path("a.json") + " " + path("b.json") + " -o " + sum).status == 0);
  Result r = run("WKA markov " + sum + " 2>&1 >/dev/null");
  CHECK(r.status == 1);
  CHECK(r.out.find("lambda_markov") != std::string::npos);
  // the summary still succeeds and records the spectrum
  nlohmann::json rep = run_json("WKA --json report " + sum);
  CHECK(rep["values"]["decomposable"] == true);
  CHECK(rep["values"]["lambda_spectrum"].size() == 2);

  Result bad = run("echo '{\"format_version\": \"1.0\", \"kind\": \"weak_kac\", \"dim\": [' | WKA verify 2>&1");
  CHECK(bad.status == 2);
  CHECK(bad.out.find("column") != std::string::npos);
  Result nan = run("echo '{\"format_version\": \"1.0\", \"kind\": \"star_algebra\", \"dim\": 1, "
                   "\"structure\": [[[NaN, 0]]], \"unit\": [[1, 0]], \"involution\": [[[1, 0]]]}' | WKA verify 2>&1");
  CHECK(nan.status == 2);
  Result shape = run("echo '{\"format_version\": \"1.0\", \"kind\": \"star_algebra\", \"dim\": 1, "
                     "\"structure\": [[[1, 0]]], \"unit\": [[1, 0]], \"involution\": [[1, 0]]}' | WKA verify 2>&1");
  CHECK(shape.status == 2);
  CHECK(shape.out.find("/involution/0:") != std::string::npos);
  CHECK(run("WKA frobnicate 2>/dev/null").status == 2);
}

TEST_CASE("reports are deterministic") {
  const std::string k = path("det.json");
  REQUIRE(run("WKA gen twosided-example --order 2 -o " + k).status == 0);
  for (const char* cmd : {"report", "markov", "haar"}) {
    std::string a = path("r1.json"), b = path("r2.json");
    CHECK(run("WKA --report " + a + " " + cmd + " " + k + " > /dev/null").status == 0);
    CHECK(run("WKA --report " + b + " " + cmd + " " + k + " > /dev/null").status == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }
}
