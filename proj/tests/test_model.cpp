#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "agriopt/model.hpp"

using namespace agriopt;

TEST_CASE("enum names round-trip") {
  for (auto s : {Sense::maximize, Sense::minimize}) CHECK(parse_sense(to_string(s)) == s);
  for (auto r : {Relation::less_equal, Relation::equal, Relation::greater_equal})
    CHECK(parse_relation(to_string(r)) == r);
  for (auto s : {SolveStatus::optimal, SolveStatus::infeasible, SolveStatus::unbounded, SolveStatus::iteration_limit})
    CHECK(parse_status(to_string(s)) == s);
  CHECK_THROWS(parse_relation("<>"));
  CHECK_THROWS(parse_sense("max"));
}

TEST_CASE("add_variable pads existing rows") {
  LpProblem p;
  p.add_variable("x", 1.0);
  p.add_constraint({2.0}, Relation::less_equal, 4.0, "c");
  p.add_variable("y", 3.0, 1.0, 5.0);
  REQUIRE(p.num_variables() == 2);
  CHECK(p.constraints[0].coefficients == std::vector<double>{2.0, 0.0});
  CHECK(p.lower_bounds[1] == 1.0);
  CHECK(p.upper_bounds[1] == 5.0);
  CHECK(validate_problem(p).empty());
}

TEST_CASE("validate_problem flags structural faults") {
  LpProblem p;
  p.add_variable("x", 1.0, 2.0, 1.0);
  CHECK_FALSE(validate_problem(p).empty());

  LpProblem q;
  q.add_variable("x", 1.0);
  q.constraints.push_back({{1.0, 2.0}, Relation::less_equal, 1.0, "wide"});
  CHECK_FALSE(validate_problem(q).empty());

  LpProblem r;
  r.add_variable("x", std::numeric_limits<double>::quiet_NaN());
  CHECK_FALSE(validate_problem(r).empty());

  LpProblem s;
  s.add_variable("x", 1.0);
  s.add_constraint({1.0}, Relation::less_equal, std::numeric_limits<double>::infinity());
  CHECK_FALSE(validate_problem(s).empty());
}

TEST_CASE("crop profit representations") {
  CropRecord c;
  c.id = "corn";
  c.yield = 10000;
  c.price = 0.2;
  c.prod_cost = 1200;
  CHECK(c.profit_per_ha() == doctest::Approx(800.0));
  CHECK(validate_crop(c).empty());

  c.net_profit = 800.0;
  CHECK(validate_crop(c).empty());
  c.net_profit = 800.0 * (1 + 1e-6);
  CHECK_FALSE(validate_crop(c).empty());
  CHECK(c.profit_per_ha() == *c.net_profit);
}

TEST_CASE("crop invariants") {
  CropRecord c;
  c.id = "x";
  c.baseline_area = 10.0;
  c.min_area = 12.0;
  CHECK_FALSE(validate_crop(c).empty());
  c.min_area = 5.0;
  c.water_req = -1.0;
  CHECK_FALSE(validate_crop(c).empty());
  c.water_req = 0.0;
  c.fertilizer_req = {1, 2, 3};
  CHECK(validate_crop(c).empty());
  CHECK(c.total_fertilizer() == 6.0);
}

TEST_CASE("sub-watershed invariants") {
  SubWatershed s{"sw1", 100.0, {{"corn", 60.0}, {"wheat", 30.0}}};
  CHECK(validate_subwatershed(s).empty());
  CHECK(s.baseline_total() == 90.0);
  CHECK(s.allows("corn"));
  CHECK_FALSE(s.allows("rice"));
  s.baseline_areas["rice"] = 20.0;
  CHECK_FALSE(validate_subwatershed(s).empty());
}

TEST_CASE("totals invariants") {
  RegionTotals t;
  CHECK(validate_totals(t).empty());
  t.production_min_fraction = 2.0;
  CHECK_FALSE(validate_totals(t).empty());
  t.production_min_fraction = 0.5;
  t.production_bounds["corn"] = {5.0, 1.0};
  CHECK_FALSE(validate_totals(t).empty());
  t.production_bounds["corn"] = {1.0, 5.0};
  t.total_water = -3.0;
  CHECK_FALSE(validate_totals(t).empty());
}

TEST_CASE("livestock invariants") {
  LivestockCoefficients l;
  for (std::size_t k = 0; k < 3; ++k) l.animals[k].area_per_head = kAreaPerHead[k];
  CHECK(validate_livestock(l).empty());
  l[Animal::poultry].organic_fert = 1.0;
  CHECK_FALSE(validate_livestock(l).empty());
  l[Animal::poultry].organic_fert = 0.0;
  l[Animal::beef].area_per_head = 1.0;
  CHECK_FALSE(validate_livestock(l).empty());
  l[Animal::beef].area_per_head = 0.5;
  l[Animal::dairy].cost = -5.0;
  CHECK_FALSE(validate_livestock(l).empty());
}

TEST_CASE("binding labels") {
  SolveResult r;
  r.constraints = {{"a", 1, 0, 2, true}, {"b", 1, 3, 0, false}, {"c", 1, 0, 0, true}};
  CHECK(r.binding_labels() == std::vector<std::string>{"a", "c"});
}
