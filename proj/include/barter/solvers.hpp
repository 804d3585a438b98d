#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "barter/enumeration.hpp"

namespace barter {

enum class Algorithm { Nash, Sum, Median, EqSum, EqDiagonal, EqArc, HullNash };

/// Fixed reporting order.
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Nash,   Algorithm::Sum,        Algorithm::Median,
                                              Algorithm::EqSum,  Algorithm::EqDiagonal, Algorithm::EqArc,
                                              Algorithm::HullNash};

/// CLI names: nash, sum, median, eq-sum, eq-diagonal, eq-arc, hull-nash.
std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// A randomized outcome: with probability `weight` the `second` point,
/// otherwise the `first`.
struct Lottery {
  CloudPoint first;
  CloudPoint second;
  std::variant<Rational, double> weight;
};

struct ChosenPoint {
  double u_x = 0;
  double u_y = 0;
  std::optional<OutcomePoint> exact;  // absent only for arc-length interpolation
  std::vector<Exchange> exchanges;    // empty for lottery points
  std::optional<Lottery> lottery;
};

using Objective = std::variant<Rational, double>;

struct SolutionReport {
  Algorithm algorithm = Algorithm::Nash;
  bool no_trade = false;  // empty periphery
  std::vector<ChosenPoint> chosen;
  bool is_lottery = false;
  std::optional<Objective> objective;

  std::size_t tie_count() const { return chosen.size(); }
  /// Tie member with the lexicographically smallest (u_x, u_y).
  const ChosenPoint& headline() const;
};

double objective_as_double(const Objective& o);

enum class RescaleVariant { FirstQuadrant, FourQuadrant };

struct EquitableScale {
  Rational factor_x;
  Rational factor_y;
  RescaleVariant variant = RescaleVariant::FirstQuadrant;
};

enum class PathVariant { AdjacentChain, Hull };

std::string_view to_string(PathVariant v);
PathVariant parse_path_variant(std::string_view name);

SolutionReport nash_solution(const Periphery& per);
SolutionReport sum_solution(const Periphery& per);
/// Algorithm A.
SolutionReport median_solution(const Periphery& per);

/// Factors mapping the anchor extremes to length 1. Throws
/// std::invalid_argument on an empty periphery.
EquitableScale equitable_scale(const Periphery& per, RescaleVariant variant = RescaleVariant::FirstQuadrant);
std::pair<EquitableScale, Periphery> equitable_rescale(const Periphery& per,
                                                       RescaleVariant variant = RescaleVariant::FirstQuadrant);

/// Algorithm B.
SolutionReport eq_sum_solution(const Periphery& per);
/// Algorithm C.
SolutionReport eq_diagonal_solution(const Periphery& per);
/// Algorithm D. Arc length is measured in floating point.
SolutionReport eq_arclength_solution(const Periphery& per, PathVariant path = PathVariant::AdjacentChain);

SolutionReport hull_nash_solution(const LotteryHull& hull, const Periphery& per);

SolutionReport solve(Algorithm algorithm, const Periphery& per, PathVariant path = PathVariant::AdjacentChain);

struct ProductRow {
  Rational m1;
  Rational m2;
  Rational product;
  Rational force;
};

struct ProductTable {
  std::vector<ProductRow> rows;
  std::vector<std::size_t> argmax;  // row indices with maximal product
};

/// Rows m1 = 0, step, ..., total with m2 = total - m1 and force
/// g * m1 * m2 / distance^2. Throws std::invalid_argument if step does not
/// divide total or any argument is non-positive.
ProductTable constant_sum_product_table(const Rational& total, const Rational& step, const Rational& g_constant,
                                        const Rational& distance);

}  // namespace barter
