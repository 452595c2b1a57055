#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "agriopt/io.hpp"
#include "agriopt/runs.hpp"
#include "agriopt/service.hpp"
#include "support.hpp"

using namespace agriopt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with `args` (already shell-quoted where needed).
Run cli(const std::string& args, const fs::path& scratch, const std::string& env = "") {
  const fs::path o = scratch / "stdout.txt", e = scratch / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(AGRIOPT_CLI) + "' " + args + " >'" +
                          o.string() + "' 2>'" + e.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(o);
  r.err = read_file(e);
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::map<std::string, std::string> dir_files(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& f : fs::directory_iterator(dir)) m[f.path().filename().string()] = read_file(f.path());
  return m;
}

}  // namespace

TEST_CASE("solve writes artifacts and a manifest") {
  testing::ScratchDir tmp("cli");
  auto r = cli("solve lkw --data " + q(testing::fixture("lkw")) + " --out " + q(tmp.path() / "o"), tmp.path());
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path() / "o" / "manifest.json"));
  CHECK(fs::exists(tmp.path() / "o" / "result.json"));
  CHECK(fs::exists(tmp.path() / "o" / "result.csv"));
  CHECK(r.out.find("optimal") != std::string::npos);
  CHECK(r.out.front() != '{');
  auto res = solve_result_from_json(json::parse(read_file(tmp.path() / "o" / "result.json")));
  CHECK(res.optimal());
}

TEST_CASE("exit codes") {
  testing::ScratchDir tmp("codes");
  auto inf = cli("solve lkw --data " + q(testing::fixture("lkw_infeasible")) + " --water-reduction 0.8 --out " +
                     q(tmp.path() / "i"),
                 tmp.path());
  CHECK(inf.code == 2);

  auto esca_inf = cli("solve esca --data " + q(testing::fixture("esca_infeasible")) + " --out " + q(tmp.path() / "e"),
                      tmp.path());
  CHECK(esca_inf.code == 2);

  auto x = cli("gp --data " + q(testing::fixture("esca")) + " --scenarios X --out " + q(tmp.path() / "x"), tmp.path());
  CHECK(x.code == 1);
  CHECK(x.err.find("X") != std::string::npos);

  auto usage = cli("solve lkw", tmp.path());
  CHECK(usage.code == 1);

  auto none = cli("", tmp.path());
  CHECK(none.code == 1);

  auto missing = cli("solve lkw --data " + q(tmp.path() / "nowhere") + " --out " + q(tmp.path() / "m"), tmp.path());
  CHECK(missing.code == 1);
  CHECK(missing.err.find("nowhere") != std::string::npos);

  auto range = cli("solve lkw --data " + q(testing::fixture("lkw")) + " --water-reduction 0.95 --out " +
                       q(tmp.path() / "r"),
                   tmp.path());
  CHECK(range.code == 1);

  auto bad_axis = cli("sweep nleb --data " + q(testing::fixture("nleb_reduced")) + " --p 0:0.5 --n 0:0.5:0.1 --out " +
                          q(tmp.path() / "b"),
                      tmp.path());
  CHECK(bad_axis.code == 1);
}

TEST_CASE("output directory falls back to AGRIOPT_OUT") {
  testing::ScratchDir tmp("env");
  const fs::path out = tmp.path() / "from_env";
  auto r = cli("solve esca --data " + q(testing::fixture("esca")) + " --scenario A", tmp.path(),
               "AGRIOPT_OUT=" + q(out));
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "result.json"));
  CHECK(fs::exists(out / "table.csv"));
}

TEST_CASE("replay reproduces a sweep bit for bit") {
  testing::ScratchDir tmp("replay");
  auto r = cli("sweep nleb --data " + q(testing::fixture("nleb_reduced")) +
                   " --p 0:0.5:0.05 --n 0:0.5:0.1 --parallel 2 --out " + q(tmp.path() / "a"),
               tmp.path());
  REQUIRE(r.code == 0);
  auto again = cli("replay " + q(tmp.path() / "a" / "manifest.json") + " --parallel 1 --out " + q(tmp.path() / "b"),
                   tmp.path());
  REQUIRE(again.code == 0);
  auto a = dir_files(tmp.path() / "a"), b = dir_files(tmp.path() / "b");
  CHECK(a.size() == 6);
  CHECK(a == b);
}

TEST_CASE("replay refuses changed data") {
  testing::ScratchDir tmp("stale");
  testing::copy_fixture("lkw", tmp.path() / "data");
  REQUIRE(cli("solve lkw --data " + q(tmp.path() / "data") + " --out " + q(tmp.path() / "a"), tmp.path()).code == 0);
  std::string totals = read_file(tmp.path() / "data" / "totals.json");
  write_file(tmp.path() / "data" / "totals.json", totals + "\n");
  auto r = cli("replay " + q(tmp.path() / "a" / "manifest.json") + " --out " + q(tmp.path() / "b"), tmp.path());
  CHECK(r.code == 1);
  CHECK(r.err.find("hash") != std::string::npos);
}

TEST_CASE("gp export and a replayed service request agree") {
  testing::ScratchDir tmp("gp");
  auto r = cli("gp --data " + q(testing::fixture("esca")) + " --scenarios A,B,C --out " + q(tmp.path() / "gp"),
               tmp.path());
  REQUIRE(r.code == 0);
  auto table = read_file(tmp.path() / "gp" / "table.csv");
  CHECK(table.rfind("key,label,unit,A,B,C", 0) == 0);
  auto scenarios = json::parse(read_file(tmp.path() / "gp" / "scenarios.json"))["scenarios"];
  REQUIRE(scenarios.size() == 3);

  // A request as the explorer would export it, solved by the service and by the CLI.
  const json request{{"id", "audit-1"}, {"scenario", "C"}, {"weights", {{"water_plus", 0.4}}}};
  write_file(tmp.path() / "request.json", request.dump());
  EscaService svc(load_bundle(ModelKind::esca, testing::fixture("esca")));
  auto live = json::parse(svc.handle_solve(request.dump()).body);
  auto c = cli("solve esca --data " + q(testing::fixture("esca")) + " --request " + q(tmp.path() / "request.json") +
                   " --out " + q(tmp.path() / "req"),
               tmp.path());
  REQUIRE(c.code == 0);
  auto batch = json::parse(read_file(tmp.path() / "req" / "result.json"));
  CHECK(batch["solve_result"] == live["solve_result"]);
  CHECK(batch["report"] == live["report"]);
}
