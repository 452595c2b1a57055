#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agriopt/runs.hpp"
#include "support.hpp"

using namespace agriopt;
using nlohmann::json;

namespace {

json manifest(const std::string& command, const std::string& kind, const std::string& fixture, json params) {
  return {{"command", command},
          {"kind", kind},
          {"data_dir", testing::fixture(fixture).string()},
          {"parameters", std::move(params)},
          {"solver", json::object()}};
}

}  // namespace

TEST_CASE("esca requests") {
  auto b = load_bundle(ModelKind::esca, testing::fixture("esca"));
  const auto& base = b.esca();
  auto inst = apply_esca_request(base, {{"scenario", "B"}});
  CHECK(inst.weights == find_scenario(base, "B").weights);
  inst = apply_esca_request(base, {{"scenario", "A"}, {"weights", {{"water_plus", 0.25}}}});
  CHECK(inst.weights[14] == 0.25);
  CHECK(inst.weights[0] == find_scenario(base, "A").weights[0]);
  inst = apply_esca_request(base, {{"targets", {{"budget", 1.0}, {"typical_sale.dairy", 5.0}, {"max_heads.beef", 3.0}}}});
  CHECK(inst.targets.budget == 1.0);
  CHECK(inst.targets.typical_sale[1] == 5.0);
  CHECK(inst.max_heads[0] == 3.0);

  CHECK_THROWS_AS(apply_esca_request(base, {{"weights", {{"water_plus", 1.2}}}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, {{"weights", {{"water_plus", -0.1}}}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, {{"weights", {{"nonsense", 0.1}}}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, {{"targets", {{"nonsense", 0.1}}}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, {{"scenario", "X"}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, {{"model", "lkw"}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, {{"colour", "red"}}), RequestError);
  CHECK_THROWS_AS(apply_esca_request(base, json::array()), RequestError);
}

TEST_CASE("bundle summary") {
  auto b = load_bundle(ModelKind::esca, testing::fixture("esca"));
  auto s = bundle_summary(b);
  CHECK(s["kind"] == "esca");
  CHECK(s["content_hash"] == b.content_hash);
  CHECK(s["weight_labels"].size() == 15);
  CHECK(s["report_rows"].size() == 18);
  CHECK(s["units"]["currency"] == "EUR");
}

TEST_CASE("solve manifests") {
  auto lkw = execute_manifest(manifest("solve", "lkw", "lkw", {{"water_reduction", 0.1}}));
  CHECK(lkw.status == SolveStatus::optimal);
  CHECK(lkw.files.count("result.json") == 1);
  CHECK(lkw.files.count("result.csv") == 1);
  CHECK(lkw.manifest["content_hash"].get<std::string>().size() == 64);
  CHECK(lkw.manifest["parameters"]["water_reduction"] == 0.1);

  auto inf = execute_manifest(manifest("solve", "lkw", "lkw_infeasible", {{"water_reduction", 0.8}}));
  CHECK(inf.status == SolveStatus::infeasible);

  auto v2 = execute_manifest(manifest("solve", "nleb", "nleb_reduced", {{"v2", true}}));
  CHECK(v2.status == SolveStatus::optimal);
  auto esca = execute_manifest(manifest("solve", "esca", "esca", {{"request", {{"scenario", "C"}}}}));
  CHECK(esca.status == SolveStatus::optimal);
  CHECK(json::parse(esca.files["result.json"])["scenario"] == "C");
  CHECK(esca.files.count("table.csv") == 1);
}

TEST_CASE("manifest replays are byte-identical") {
  auto first = execute_manifest(manifest("sweep", "nleb", "nleb_reduced", {{"p", "0:0.5:0.1"}, {"n", "0:0.5:0.25"}}), 2);
  auto again = execute_manifest(first.manifest, 1);
  CHECK(again.files == first.files);
  CHECK(again.manifest == first.manifest);
  CHECK(first.files.count("contour.json") == 1);
  CHECK(json::parse(first.files["grid.json"])["manifest"] == first.manifest);

  auto gp = execute_manifest(manifest("gp", "esca", "esca", {{"scenarios", {"A", "C"}}}));
  CHECK(execute_manifest(gp.manifest).files == gp.files);
  CHECK(json::parse(gp.files["scenarios.json"])["scenarios"].size() == 2);
}

TEST_CASE("manifest errors") {
  auto m = manifest("solve", "lkw", "lkw", json::object());
  m["content_hash"] = std::string(64, '0');
  CHECK_THROWS_AS(execute_manifest(m), ManifestMismatch);
  CHECK_THROWS(execute_manifest(manifest("dance", "lkw", "lkw", json::object())));
  CHECK_THROWS_AS(execute_manifest(manifest("gp", "esca", "esca", {{"scenarios", {"X"}}})), std::exception);
  CHECK_THROWS_AS(execute_manifest(manifest("sweep", "lkw", "lkw", json::object())), RequestError);
  CHECK_THROWS(execute_manifest(manifest("sweep", "nleb", "nleb_reduced", {{"p", "0:0.9:0.1"}, {"n", "0:0.1:0.1"}})));

  auto w = execute_manifest(manifest("sweep", "lkw", "lkw", {{"water", "0:0.5:0.2"}}));
  CHECK_FALSE(w.warnings.empty());
  CHECK(w.manifest["parameters"]["water"]["values"].size() == 3);
}
