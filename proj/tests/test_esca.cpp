#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "agriopt/esca.hpp"
#include "agriopt/io.hpp"
#include "esca_support.hpp"
#include "oracles/esca_grid.hpp"
#include "support.hpp"

using namespace agriopt;

namespace {

const EscaInstance& fixture_instance() {
  static const DatasetBundle b = load_bundle(ModelKind::esca, testing::fixture("esca"));
  return b.esca();
}

const GoalDeviation& goal(const SolveResult& r, std::string_view label) {
  for (const auto& g : r.goals)
    if (g.label == label) return g;
  throw std::out_of_range(std::string(label));
}

}  // namespace

TEST_CASE("weight labels and maps") {
  CHECK(kEscaWeightLabels.size() == 15);
  CHECK(esca_weight_index("water_plus") == 14u);
  CHECK_FALSE(esca_weight_index("nope").has_value());
  auto w = esca_weights_from_map({{"cost_plus", 0.5}}, false);
  CHECK(w[3] == 0.5);
  CHECK_THROWS(esca_weights_from_map({{"bogus", 1.0}}, false));
  CHECK_THROWS(esca_weights_from_map({{"cost_plus", 1.0}}, true));
  auto m = esca_weights_to_map(w);
  CHECK(m.size() == 15);
  CHECK(esca_weights_from_map(m, true) == w);
}

TEST_CASE("reduction layout") {
  const auto& inst = fixture_instance();
  auto red = build_esca_gp(inst);
  CHECK(red.num_decision == 3);
  CHECK(red.d_plus.size() == 11);
  CHECK(red.lp.num_constraints() == 13);
  CHECK(red.lp.constraints[11].label == "area");
  CHECK(red.lp.constraints[12].label == "chemical");
  // Sales over-achievement is free.
  for (std::size_t k = 0; k < 3; ++k) CHECK(red.lp.objective[red.d_plus[k]] == 0.0);
  CHECK(red.lp.objective[red.d_minus[0]] == inst.weights[0]);
  CHECK(red.lp.objective[red.d_plus[3]] == inst.weights[3]);
  CHECK(red.lp.objective[red.d_plus[7]] == inst.weights[14]);
  CHECK(red.lp.objective[red.d_minus[10]] == inst.weights[13]);
}

TEST_CASE("one animal, one sales goal") {
  EscaInstance inst;
  for (std::size_t k = 0; k < 3; ++k) {
    inst.coeffs.animals[k].area_per_head = kAreaPerHead[k];
    inst.max_heads[k] = 0.0;
  }
  inst.max_heads[0].reset();
  inst.coeffs.animals[0].sale = 100;
  inst.targets.typical_sale[0] = 1000;
  inst.targets.available_area = 5;
  inst.weights[0] = 1.0;
  auto r = solve_esca(inst);
  REQUIRE(r.optimal());
  CHECK(r.x[0] == doctest::Approx(10.0));
  CHECK(goal(r, "sales_beef").d_minus == doctest::Approx(0.0));
  CHECK(r.objective == doctest::Approx(0.0));
}

TEST_CASE("all-zero weights") {
  auto inst = fixture_instance();
  inst.weights.fill(0.0);
  auto r = solve_esca(inst);
  REQUIRE(r.optimal());
  CHECK(r.objective == 0.0);
}

TEST_CASE("exactly achievable targets give zero deviation") {
  auto inst = fixture_instance();
  const std::array<double, 3> herd{100, 80, 2000};
  auto lhs = [&](auto f) {
    double s = 0;
    for (std::size_t k = 0; k < 3; ++k) s += f(inst.coeffs.animals[k]) * herd[k];
    return s;
  };
  auto& t = inst.targets;
  for (std::size_t k = 0; k < 3; ++k) {
    t.typical_sale[k] = inst.coeffs.animals[k].sale * herd[k];
    t.production_target[k] = inst.coeffs.animals[k].yield * inst.coeffs.animals[k].growth_rate * herd[k];
  }
  t.budget = lhs([](const auto& a) { return a.cost; });
  t.max_emission_p = lhs([](const auto& a) { return a.p_emission; });
  t.max_emission_c = lhs([](const auto& a) { return a.c_emission; });
  t.organic_fert_target = lhs([](const auto& a) { return a.organic_fert; });
  t.water_available = lhs([](const auto& a) { return a.water; });
  inst.weights.fill(1.0);
  auto r = solve_esca(inst);
  REQUIRE(r.optimal());
  CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-9));
  for (const auto& g : r.goals) {
    CHECK(g.d_minus <= 1e-6 * (1 + g.target));
    if (g.label.rfind("sales", 0) != 0) CHECK(g.d_plus <= 1e-6 * (1 + g.target));
  }
}

TEST_CASE("chemical cap is hard") {
  auto b = load_bundle(ModelKind::esca, testing::fixture("esca_infeasible"));
  auto r = solve_esca(b.esca());
  CHECK(r.status == SolveStatus::infeasible);
  CHECK(std::find(r.infeasible_rows.begin(), r.infeasible_rows.end(), "chemical") != r.infeasible_rows.end());
}

TEST_CASE("negative weight is rejected") {
  auto inst = fixture_instance();
  inst.weights[2] = -0.1;
  CHECK_FALSE(validate_esca(inst).empty());
  CHECK_THROWS_AS(solve_esca(inst), std::invalid_argument);
}

TEST_CASE("random instances: deviations, accounting, grid oracle, scaling") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 40; ++k) {
    auto inst = testing::random_esca(rng);
    INFO("instance " << k);
    auto r = solve_esca(inst);
    REQUIRE(r.optimal());
    for (const auto& g : r.goals) {
      if (g.w_plus + g.w_minus > 0) CHECK(std::min(g.d_plus, g.d_minus) <= 1e-9);
      CHECK(std::abs(g.achieved + g.d_minus - g.d_plus - g.target) <= 1e-7);
    }
    auto grid = oracle::esca_grid_search(inst);
    REQUIRE(grid.feasible);
    const double tol = 1e-9 * (1 + std::abs(grid.objective));
    CHECK(r.objective <= grid.objective + tol);
    CHECK(grid.objective - r.objective <= oracle::esca_lipschitz_step(oracle::esca_rows(inst)) + tol);
    // The library's objective is the penalty of its own heads.
    CHECK(oracle::esca_penalty(oracle::esca_rows(inst), {r.x[0], r.x[1], r.x[2]}) ==
          doctest::Approx(r.objective).epsilon(1e-9));

    auto scaled = inst;
    for (auto& w : scaled.weights) w *= 10;
    auto s = solve_esca(scaled);
    REQUIRE(s.optimal());
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(s.x[j] - r.x[j]) <= 1e-6);
  }
}

TEST_CASE("scenario mechanics on the fixture") {
  const auto& inst = fixture_instance();
  REQUIRE(inst.scenarios.size() == 3);
  auto res = run_weight_scenarios(inst, inst.scenarios);
  REQUIRE(res.size() == 3);
  CHECK(res[0].name == "A");
  CHECK(res[1].name == "B");
  CHECK(res[2].name == "C");
  for (const auto& s : res) REQUIRE(s.result.optimal());
  const auto &a = res[0].result, &b = res[1].result, &c = res[2].result;
  CHECK(goal(a, "p_emission").d_plus <= 1e-6);
  CHECK(goal(a, "c_emission").d_plus <= 1e-6);
  CHECK(goal(a, "water").d_plus <= 1e-6);
  CHECK(goal(b, "sales_beef").d_minus <= 1e-6);
  CHECK(goal(b, "sales_dairy").d_minus <= 1e-6);
  const auto& wc = res[2].weights;
  CHECK(weighted_deviation(c, wc) <= std::max(weighted_deviation(a, wc), weighted_deviation(b, wc)) + 1e-9);
  CHECK(weighted_deviation(c, wc) == doctest::Approx(c.objective));
  // B over-spends and over-emits P, as its weights ignore both.
  CHECK(goal(b, "cost").d_plus > 0.0);
  CHECK(goal(b, "p_emission").d_plus > 0.0);
  CHECK(a.x != b.x);
  CHECK(b.x != c.x);
}

TEST_CASE("scenario runner consistency") {
  const auto& inst = fixture_instance();
  const auto& sc = find_scenario(inst, "C");
  auto one = run_weight_scenarios(inst, {sc});
  auto copy = inst;
  copy.weights = sc.weights;
  CHECK(one[0].result == solve_esca(copy));
  auto twice = run_weight_scenarios(inst, {sc, {"C2", sc.weights}});
  CHECK(twice[0].result == twice[1].result);
  CHECK_THROWS_AS(find_scenario(inst, "X"), std::out_of_range);
}

TEST_CASE("report rows") {
  const auto& rows = esca_report_rows();
  CHECK(rows.size() == 18);
  auto r = solve_esca(fixture_instance());
  auto v = esca_report_values(r);
  REQUIRE(v.size() == 18);
  CHECK(v[0] == r.x[0]);
  CHECK(v[3] == goal(r, "sales_beef").d_minus);
  CHECK(v[17] == goal(r, "water").d_plus);
  CHECK_THROWS(esca_report_values(SolveResult{}));
}
