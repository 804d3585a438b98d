#include "doctest.h"

#include <cmath>
#include <set>

#include "barter/enumeration.hpp"
#include "barter/solvers.hpp"
#include "support/fixtures.hpp"

using namespace barter;

namespace {

OutcomePoint pt(const char* x, const char* y) { return {Rational::parse(x), Rational::parse(y)}; }

Periphery per_of(std::vector<OutcomePoint> pts) { return periphery(PointCloud::from_points(pts)); }

std::set<OutcomePoint> chosen_set(const SolutionReport& r) {
  std::set<OutcomePoint> out;
  for (const auto& c : r.chosen) out.insert(*c.exact);
  return out;
}

const Periphery& table_periphery() {
  static const Periphery per = periphery(enumerate_cloud(fixtures::table_instance()));
  return per;
}

Rational exact_objective(const SolutionReport& r) { return std::get<Rational>(*r.objective); }

}  // namespace

TEST_CASE("nash") {
  const SolutionReport r = nash_solution(table_periphery());
  CHECK(chosen_set(r) == std::set<OutcomePoint>{pt("27", "17")});
  CHECK(exact_objective(r) == Rational(459));
  CHECK_FALSE(r.is_lottery);
  REQUIRE(r.chosen[0].exchanges.size() == 1);
  CHECK(r.chosen[0].exchanges[0].moved() == ((ItemMask{1} << 10) | (ItemMask{1} << 13)));

  CHECK(chosen_set(nash_solution(per_of({pt("2", "2")}))) == std::set<OutcomePoint>{pt("2", "2")});
  const SolutionReport tie = nash_solution(per_of({pt("1", "6"), pt("2", "3"), pt("3", "2"), pt("6", "1")}));
  CHECK(tie.tie_count() == 4);
  CHECK(exact_objective(tie) == Rational(6));
  CHECK(*tie.headline().exact == pt("1", "6"));
}

TEST_CASE("sum") {
  const SolutionReport r = sum_solution(table_periphery());
  CHECK(chosen_set(r) == std::set<OutcomePoint>{pt("27", "17")});
  CHECK(exact_objective(r) == Rational(44));
  // (2,5) also sums to 7, so the exhaustive tie set has three members
  const SolutionReport tie = sum_solution(per_of({pt("2", "5"), pt("4", "3"), pt("5", "2")}));
  CHECK(chosen_set(tie) == std::set<OutcomePoint>{pt("2", "5"), pt("4", "3"), pt("5", "2")});
  const SolutionReport pair = sum_solution(per_of({pt("1", "5"), pt("4", "3"), pt("5", "2")}));
  CHECK(chosen_set(pair) == std::set<OutcomePoint>{pt("4", "3"), pt("5", "2")});
  CHECK(exact_objective(tie) == Rational(7));
}

TEST_CASE("median") {
  const SolutionReport r = median_solution(table_periphery());
  CHECK(chosen_set(r) == std::set<OutcomePoint>{pt("9", "28")});
  const SolutionReport even = median_solution(per_of({pt("2", "8"), pt("6", "4")}));
  CHECK(even.is_lottery);
  REQUIRE(even.chosen.size() == 1);
  CHECK(*even.chosen[0].exact == pt("4", "6"));
  REQUIRE(even.chosen[0].lottery);
  CHECK(even.chosen[0].lottery->first.point == pt("2", "8"));
  CHECK(even.chosen[0].lottery->second.point == pt("6", "4"));
  CHECK(std::get<Rational>(even.chosen[0].lottery->weight) == Rational(1, 2));
}

TEST_CASE("equitable rescale") {
  const auto [scale, rescaled] = equitable_rescale(table_periphery());
  CHECK(scale.factor_x == Rational(1, 39));
  CHECK(scale.factor_y == Rational(1, 32));
  CHECK(rescaled.x_anchor->point == pt("1", "0"));
  CHECK(rescaled.y_anchor->point == pt("0", "1"));

  const EquitableScale sym = equitable_scale(per_of({pt("1", "3"), pt("3", "1")}));
  CHECK(sym.factor_x == sym.factor_y);
  const EquitableScale closest = equitable_scale(per_of({pt("10", "1"), pt("2", "5")}));
  CHECK(closest.factor_x == Rational(1, 10));
  CHECK(closest.factor_y == Rational(1, 5));

  // four-quadrant uses the whole cloud's extent
  const Periphery wide = periphery(PointCloud::from_points({pt("2", "3"), pt("-50", "1"), pt("1", "-7")}));
  const EquitableScale four = equitable_scale(wide, RescaleVariant::FourQuadrant);
  CHECK(four.factor_x == Rational(1, 50));
  CHECK(four.factor_y == Rational(1, 7));
  CHECK_THROWS_AS(equitable_scale(Periphery{}), std::invalid_argument);
}

TEST_CASE("eq-sum and eq-diagonal") {
  CHECK(chosen_set(eq_sum_solution(table_periphery())) == std::set<OutcomePoint>{pt("27", "17")});
  CHECK(chosen_set(eq_diagonal_solution(table_periphery())) == std::set<OutcomePoint>{pt("21", "21")});

  const Periphery sym =
      periphery(PointCloud::from_points({pt("1", "3"), pt("3", "1"), pt("4", "0"), pt("0", "4")}));
  CHECK(chosen_set(eq_sum_solution(sym)) == std::set<OutcomePoint>{pt("1", "3"), pt("3", "1")});
  CHECK(chosen_set(eq_diagonal_solution(sym)) == std::set<OutcomePoint>{pt("1", "3"), pt("3", "1")});

  const Periphery hit = per_of({pt("1", "4"), pt("2", "2"), pt("4", "1")});
  const SolutionReport d = eq_diagonal_solution(hit);
  CHECK(chosen_set(d) == std::set<OutcomePoint>{pt("2", "2")});
  CHECK(exact_objective(d) == Rational(0));
}

TEST_CASE("eq-arc") {
  const SolutionReport one = eq_arclength_solution(per_of({pt("3", "5")}));
  CHECK_FALSE(one.is_lottery);
  CHECK(*one.chosen[0].exact == pt("3", "5"));

  const SolutionReport sym = eq_arclength_solution(per_of({pt("1", "3"), pt("3", "1")}));
  CHECK(sym.is_lottery);
  CHECK(sym.chosen[0].u_x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sym.chosen[0].u_y == doctest::Approx(2.0).epsilon(1e-12));

  // the returned point sits halfway along the rescaled 13-point chain
  const SolutionReport r = eq_arclength_solution(table_periphery());
  std::vector<std::pair<double, double>> chain;
  for (const auto& [x, y] : fixtures::kTableRows) {
    chain.emplace_back(Rational::parse(x).to_double() / 39, Rational::parse(y).to_double() / 32);
  }
  double total = 0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    total += std::hypot(chain[i + 1].first - chain[i].first, chain[i + 1].second - chain[i].second);
  }
  const double cx = r.chosen[0].u_x / 39;
  const double cy = r.chosen[0].u_y / 32;
  double along = 0;
  bool located = false;
  for (std::size_t i = 0; i + 1 < chain.size() && !located; ++i) {
    const auto [ax, ay] = chain[i];
    const auto [bx, by] = chain[i + 1];
    const double len = std::hypot(bx - ax, by - ay);
    const double cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    const double dot = (bx - ax) * (cx - ax) + (by - ay) * (cy - ay);
    if (std::abs(cross) < 1e-12 && dot >= -1e-12 && dot <= len * len + 1e-12) {
      along += std::hypot(cx - ax, cy - ay);
      located = true;
    } else {
      along += len;
    }
  }
  REQUIRE(located);
  CHECK(std::abs(along - total / 2) <= 1e-9 * total);

  const SolutionReport hull = eq_arclength_solution(table_periphery(), PathVariant::Hull);
  CHECK(hull.chosen.size() == 1);
  CHECK(parse_path_variant("adjacent") == PathVariant::AdjacentChain);
  CHECK(parse_path_variant("hull") == PathVariant::Hull);
}

TEST_CASE("hull nash") {
  const Periphery& per = table_periphery();
  const SolutionReport r = hull_nash_solution(lottery_hull(per), per);
  REQUIRE(r.chosen.size() == 1);
  CHECK(*r.chosen[0].exact == OutcomePoint{Rational(105, 4), Rational(35, 2)});
  CHECK(exact_objective(r) == Rational(3675, 8));
  CHECK(r.is_lottery);
  REQUIRE(r.chosen[0].lottery);
  CHECK(r.chosen[0].lottery->first.point == pt("21", "21"));
  CHECK(r.chosen[0].lottery->second.point == pt("27", "17"));

  const Periphery single = per_of({pt("2", "3")});
  const SolutionReport s = hull_nash_solution(lottery_hull(single), single);
  CHECK(*s.chosen[0].exact == pt("2", "3"));
  CHECK(exact_objective(s) == Rational(6));
  CHECK_FALSE(s.is_lottery);

  // segment (0,2k)-(2k,0) peaks at (k,k)
  const Periphery seg = periphery(PointCloud::from_points({pt("0", "6"), pt("6", "0"), pt("1", "4")}));
  const SolutionReport m = hull_nash_solution(lottery_hull(seg), seg);
  CHECK(*m.chosen[0].exact == pt("3", "3"));
  CHECK(exact_objective(m) == Rational(9));
}

TEST_CASE("empty periphery is no trade for every solver") {
  for (Algorithm a : kAllAlgorithms) {
    const SolutionReport r = solve(a, Periphery{});
    CHECK(r.no_trade);
    CHECK(r.chosen.empty());
    CHECK(r.algorithm == a);
  }
}

TEST_CASE("algorithm names") {
  for (Algorithm a : kAllAlgorithms) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("kalai"), std::invalid_argument);
}

TEST_CASE("constant-sum product table") {
  const ProductTable t = constant_sum_product_table(10, 1, Rational::parse("6.674e-11"), 10);
  REQUIRE(t.rows.size() == 11);
  const long long products[] = {0, 9, 16, 21, 24, 25, 24, 21, 16, 9, 0};
  for (std::size_t i = 0; i < 11; ++i) CHECK(t.rows[i].product == Rational(products[i]));
  CHECK(t.argmax == std::vector<std::size_t>{5});
  CHECK(t.rows[4].m1 == Rational(4));
  CHECK(t.rows[4].m2 == Rational(6));
  for (long long k = 1; k <= 6; ++k) {
    const ProductTable even = constant_sum_product_table(2 * k, 1, 1, 1);
    REQUIRE(even.argmax.size() == 1);
    CHECK(even.rows[even.argmax[0]].m1 == Rational(k));
  }
  CHECK_THROWS_AS(constant_sum_product_table(10, 3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(constant_sum_product_table(10, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("constant-sum line picks the even split") {
  // rescaled peripheries on u_x + u_y = C
  const Periphery line = per_of({pt("1", "9"), pt("3", "7"), pt("4", "6"), pt("7", "3"), pt("9", "1")});
  CHECK(chosen_set(nash_solution(line)) == std::set<OutcomePoint>{pt("4", "6")});
}
