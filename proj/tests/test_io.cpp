#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clocale>
#include <cmath>
#include <fstream>
#include <limits>

#include "agriopt/csv.hpp"
#include "agriopt/hash.hpp"
#include "agriopt/io.hpp"
#include "support.hpp"

using namespace agriopt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Replaces the first occurrence of `from` in a file.
void patch(const fs::path& file, const std::string& from, const std::string& to) {
  std::string s = read_file(file);
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, from.size(), to);
  write_file(file, s);
}

std::vector<Diagnostic> load_errors(ModelKind kind, const fs::path& dir) {
  try {
    load_bundle(kind, dir);
  } catch (const DatasetError& e) {
    return e.diagnostics();
  }
  return {};
}

bool has_diag(const std::vector<Diagnostic>& d, std::size_t line, std::size_t col, const std::string& needle) {
  for (const auto& x : d)
    if (x.severity == Severity::error && x.line == line && x.column == col &&
        x.message.find(needle) != std::string::npos)
      return true;
  return false;
}

}  // namespace

TEST_CASE("csv reader") {
  auto t = parse_csv("a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n\r\n2,,3\n");
  REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x, y");
  CHECK(t.rows[0][2] == "say \"hi\"");
  CHECK(t.rows[1][1].empty());
  CHECK(t.lines == std::vector<std::size_t>{2, 4});
  CHECK_THROWS(parse_csv("a\n\"open\n"));
  CHECK(csv_line({"plain", "with,comma", "q\"uote"}) == "plain,\"with,comma\",\"q\"\"uote\"\n");
}

TEST_CASE("numbers are dot-decimal whatever the locale") {
  std::setlocale(LC_ALL, "de_DE.UTF-8");  // may not exist; the parse must not care
  CHECK(parse_number("1.5") == 1.5);
  CHECK(parse_number(" 2e3 ") == 2000.0);
  CHECK_FALSE(parse_number("1,5").has_value());
  CHECK_FALSE(parse_number("").has_value());
  CHECK_FALSE(parse_number("12abc").has_value());
  CHECK(format_sig(1234567.0) == "1.23457e+06");
  CHECK(format_sig(0.5) == "0.5");
  std::setlocale(LC_ALL, "C");
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const std::map<std::string, std::string> a{{"x.csv", "1"}, {"y.json", "{}"}};
  CHECK(content_hash(a) == content_hash(a));
  auto b = a;
  b["x.csv"] = "2";
  CHECK(content_hash(a) != content_hash(b));
  // Moving bytes between files changes the digest.
  CHECK(content_hash({{"a", "xy"}, {"b", ""}}) != content_hash({{"a", "x"}, {"b", "y"}}));
}

TEST_CASE("fixtures load with stable hashes") {
  for (auto [kind, name] : {std::pair{ModelKind::lkw, "lkw"}, {ModelKind::nleb, "nleb_reduced"},
                            {ModelKind::nleb, "nleb"}, {ModelKind::esca, "esca"}}) {
    auto a = load_bundle(kind, testing::fixture(name));
    auto b = load_bundle(kind, testing::fixture(name));
    CHECK(a.content_hash.size() == 64);
    CHECK(a.content_hash == b.content_hash);
    CHECK(a.file_hashes == b.file_hashes);
    CHECK(std::is_sorted(a.files.begin(), a.files.end()));
  }
  auto n = load_bundle(ModelKind::nleb, testing::fixture("nleb"));
  CHECK(n.nleb().subwatersheds.size() == 274);
  CHECK(n.nleb().crops.size() == 28);
  CHECK(n.nleb().currency == "CAD");
  CHECK(load_bundle(ModelKind::lkw, testing::fixture("lkw")).lkw().currency == "EUR");
}

TEST_CASE("hash follows the bytes, not the location") {
  testing::ScratchDir tmp("hash");
  testing::copy_fixture("lkw", tmp.path() / "copy");
  auto a = load_bundle(ModelKind::lkw, testing::fixture("lkw"));
  auto b = load_bundle(ModelKind::lkw, tmp.path() / "copy");
  CHECK(a.content_hash == b.content_hash);
  patch(tmp.path() / "copy" / "totals.json", "58100", "58101");
  CHECK(load_bundle(ModelKind::lkw, tmp.path() / "copy").content_hash != a.content_hash);
}

TEST_CASE("missing values warn and default to zero") {
  auto b = load_bundle(ModelKind::lkw, testing::fixture("lkw"));
  bool warned = false;
  for (const auto& d : b.report.diagnostics)
    warned |= d.severity == Severity::warning && d.message.find("n_export") != std::string::npos && d.line > 1;
  CHECK(warned);
  for (const auto& c : b.lkw().crops)
    if (c.id == "barley") CHECK(c.n_export == 0.0);
}

TEST_CASE("malformed crops.csv gives row-addressed diagnostics") {
  testing::ScratchDir tmp("bad");
  const auto dir = tmp.path() / "lkw";
  testing::copy_fixture("lkw", dir);
  // Line 3 (maize), column 4: water_req.
  patch(dir / "crops.csv", "maize,Maize,935,6500", "maize,Maize,935,6500x");
  // Line 2 (cotton), column 5: fert_N.
  patch(dir / "crops.csv", "cotton,Cotton,720,5200,140", "cotton,Cotton,720,5200,-140");
  auto d = load_errors(ModelKind::lkw, dir);
  CHECK(has_diag(d, 3, 4, "not a number"));
  CHECK(has_diag(d, 2, 5, "negative"));
  bool formatted = false;
  for (const auto& x : d) formatted |= x.to_string().find("crops.csv:3:4: error:") != std::string::npos;
  CHECK(formatted);
}

TEST_CASE("header faults") {
  std::vector<Diagnostic> d;
  parse_crops_csv("id,name,water_req [l/ha]\nx,X,1\n", "crops.csv", "EUR", d);
  CHECK(has_diag(d, 1, 3, "unit mismatch"));
  CHECK(has_diag(d, 1, 0, "missing column 'baseline_area'"));

  d.clear();
  const std::string head =
      "id,name,water_req,fert_N,fert_P2O5,fert_K2O,labour_req,p_export,n_export,baseline_area,net_profit [CAD/ha]\n";
  auto crops = parse_crops_csv(head + "a,A,1,1,1,1,1,1,1,5,100\nb,B,1,1\n", "crops.csv", "CAD", d);
  CHECK(crops.size() == 1);
  CHECK(has_diag(d, 3, 0, "expected 11 fields"));

  d.clear();
  parse_crops_csv(head + "a,A,1,1,1,1,1,1,1,5,100\n", "crops.csv", "EUR", d);
  CHECK(has_diag(d, 1, 11, "unit mismatch"));

  d.clear();
  parse_crops_csv(head + "a,A,1,1,1,1,1,1,1,5,100\na,B,1,1,1,1,1,1,1,5,100\n", "crops.csv", "CAD", d);
  CHECK(has_diag(d, 3, 1, "duplicate crop id"));
}

TEST_CASE("subwatershed and json faults") {
  testing::ScratchDir tmp("sw");
  const auto dir = tmp.path() / "nleb";
  testing::copy_fixture("nleb_reduced", dir);
  patch(dir / "subwatersheds.csv", "sw002,10986.7", "sw002,abc");
  auto d = load_errors(ModelKind::nleb, dir);
  CHECK(has_diag(d, 3, 2, "not a number"));

  std::vector<Diagnostic> j;
  parse_totals_json("{\n  \"total_area\": \"big\"\n}", "totals.json", j);
  CHECK_FALSE(j.empty());
  j.clear();
  parse_totals_json("{\n  \"total_area\": 1,\n  oops\n}", "totals.json", j);
  REQUIRE_FALSE(j.empty());
  CHECK(j[0].line == 3);
  j.clear();
  parse_esca_json("{\"coefficients\": {}}", "esca.json", j);
  CHECK_FALSE(j.empty());
}

TEST_CASE("missing file is reported with its path") {
  testing::ScratchDir tmp("missing");
  const auto dir = tmp.path() / "esca";
  fs::create_directories(dir);
  auto d = load_errors(ModelKind::esca, dir);
  REQUIRE(d.size() == 1);
  CHECK(d[0].message.find((dir / "esca.json").string()) != std::string::npos);
  try {
    load_bundle(ModelKind::lkw, dir);
    FAIL("expected an error");
  } catch (const DatasetError& e) {
    CHECK(std::string(e.what()).find("crops.csv") != std::string::npos);
  }
}

TEST_CASE("shape checks on lkw loads") {
  testing::ScratchDir tmp("shape");
  const auto dir = tmp.path() / "lkw";
  testing::copy_fixture("lkw", dir);
  std::string csv = read_file(dir / "crops.csv");
  csv = csv.substr(0, csv.rfind('\n', csv.size() - 2) + 1);  // drop the last crop
  write_file(dir / "crops.csv", csv);
  CHECK_THROWS_AS(load_bundle(ModelKind::lkw, dir), DatasetError);
  CHECK_NOTHROW(load_bundle(ModelKind::lkw, dir, false));
}

TEST_CASE("SolveResult round trip, non-finite values included") {
  SolveResult r;
  r.status = SolveStatus::unbounded;
  r.variable_labels = {"x", "y"};
  r.x = {1.0, std::numeric_limits<double>::infinity()};
  r.objective = -std::numeric_limits<double>::infinity();
  r.constraints = {{"c", 1.5, 0.0, 2.0, true}};
  r.goals = {{"g", 1, 2, 0, 1, 0.5, 0.25}};
  r.iterations = 7;
  r.ray = {0.5, 1.0};
  r.infeasible_rows = {"q"};
  r.log = {"hello"};
  const json j = to_json(r);
  CHECK(solve_result_from_json(json::parse(j.dump())) == r);

  r.objective = std::nan("");
  auto back = solve_result_from_json(json::parse(to_json(r).dump()));
  CHECK(std::isnan(back.objective));
}

TEST_CASE("exported artifacts round trip") {
  auto lkw = load_bundle(ModelKind::lkw, testing::fixture("lkw"));
  auto g = sweep_lkw(lkw.lkw(), {0.0, 0.4, 0.8});
  g.manifest = {{"tool", "test"}};
  CHECK(sweep_grid_from_json(json::parse(to_json(g).dump())) == g);

  auto nleb = load_bundle(ModelKind::nleb, testing::fixture("nleb_reduced"));
  auto grid = sweep_nleb(nleb.nleb(), {0.0, 0.25, 0.5}, {0.0, 0.25, 0.5});
  CHECK(sweep_grid_from_json(json::parse(to_json(grid).dump())) == grid);
  auto pts = breakeven_contour(grid);
  CHECK(contour_from_json(json::parse(to_json(pts).dump())) == pts);

  auto fw = solve_nleb_v2(nleb.nleb(), *nleb.elasticity, {});
  auto fw_back = fw_result_from_json(json::parse(to_json(fw).dump()));
  CHECK(fw_back.solution == fw.solution);
  CHECK(fw_back.gap == fw.gap);
  CHECK(fw_back.trace == fw.trace);

  SimplexConfig cfg;
  cfg.pivot_rule = PivotRule::bland;
  cfg.max_iterations = 123;
  cfg.feasibility_tol = 1e-8;
  CHECK(simplex_config_from_json(json::parse(to_json(cfg).dump())) == cfg);

  auto esca = load_bundle(ModelKind::esca, testing::fixture("esca"));
  CHECK(esca_instance_from_json(json::parse(to_json(esca.esca()).dump())) == esca.esca());
}

TEST_CASE("csv exports") {
  auto nleb = load_bundle(ModelKind::nleb, testing::fixture("nleb_reduced"));
  auto grid = sweep_nleb(nleb.nleb(), {0.0, 0.5}, {0.0, 0.5});
  auto surface = parse_csv(surface_csv(grid));
  CHECK(surface.header.size() == 3);
  CHECK(surface.rows.size() == 2);
  auto longform = parse_csv(grid_csv(grid));
  CHECK(longform.rows.size() == 4);
  auto esca = load_bundle(ModelKind::esca, testing::fixture("esca"));
  auto table = parse_csv(esca_table_csv(run_weight_scenarios(esca.esca(), esca.esca().scenarios)));
  CHECK(table.header == std::vector<std::string>{"key", "label", "unit", "A", "B", "C"});
  CHECK(table.rows.size() == 18);
}
