#include "barter/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace barter {

namespace {

constexpr double kSegmentTolerance = 1e-12;

ChosenPoint vertex_choice(const CloudPoint& cp) {
  ChosenPoint c;
  c.exact = cp.point;
  c.u_x = cp.point.u_x.to_double();
  c.u_y = cp.point.u_y.to_double();
  c.exchanges = cp.exchanges;
  return c;
}

SolutionReport no_trade(Algorithm algorithm) {
  SolutionReport r;
  r.algorithm = algorithm;
  r.no_trade = true;
  return r;
}

// Every periphery point attaining the extreme score.
SolutionReport extremal_set(Algorithm algorithm, const Periphery& per,
                            const std::function<Rational(const OutcomePoint&)>& score,
                            bool maximize) {
  if (per.empty()) return no_trade(algorithm);
  std::vector<Rational> scores;
  scores.reserve(per.size());
  for (const auto& cp : per.points) scores.push_back(score(cp.point));
  const Rational best =
      maximize ? *std::max_element(scores.begin(), scores.end()) : *std::min_element(scores.begin(), scores.end());
  SolutionReport r;
  r.algorithm = algorithm;
  r.objective = best;
  for (std::size_t i = 0; i < per.size(); ++i) {
    if (scores[i] == best) r.chosen.push_back(vertex_choice(per.points[i]));
  }
  return r;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Nash: return "nash";
    case Algorithm::Sum: return "sum";
    case Algorithm::Median: return "median";
    case Algorithm::EqSum: return "eq-sum";
    case Algorithm::EqDiagonal: return "eq-diagonal";
    case Algorithm::EqArc: return "eq-arc";
    case Algorithm::HullNash: return "hull-nash";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(PathVariant v) {
  return v == PathVariant::AdjacentChain ? "adjacent-chain" : "hull";
}

PathVariant parse_path_variant(std::string_view name) {
  if (name == "adjacent-chain" || name == "adjacent") return PathVariant::AdjacentChain;
  if (name == "hull") return PathVariant::Hull;
  throw std::invalid_argument("unknown path variant '" + std::string(name) + "'");
}

const ChosenPoint& SolutionReport::headline() const {
  if (chosen.empty()) throw std::logic_error("no-trade report has no headline point");
  return *std::min_element(chosen.begin(), chosen.end(), [](const ChosenPoint& a, const ChosenPoint& b) {
    if (a.exact && b.exact) return *a.exact < *b.exact;
    return std::tie(a.u_x, a.u_y) < std::tie(b.u_x, b.u_y);
  });
}

double objective_as_double(const Objective& o) {
  return std::visit([](const auto& v) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Rational>) {
      return v.to_double();
    } else {
      return v;
    }
  }, o);
}

SolutionReport nash_solution(const Periphery& per) {
  return extremal_set(Algorithm::Nash, per, [](const OutcomePoint& p) { return p.u_x * p.u_y; }, true);
}

SolutionReport sum_solution(const Periphery& per) {
  return extremal_set(Algorithm::Sum, per, [](const OutcomePoint& p) { return p.u_x + p.u_y; }, true);
}

SolutionReport median_solution(const Periphery& per) {
  if (per.empty()) return no_trade(Algorithm::Median);
  SolutionReport r;
  r.algorithm = Algorithm::Median;
  const std::size_t n = per.size();
  if (n % 2 == 1) {
    r.chosen.push_back(vertex_choice(per.points[(n - 1) / 2]));
    r.objective = Rational(static_cast<long long>((n - 1) / 2));
    return r;
  }
  const CloudPoint& lo = per.points[n / 2 - 1];
  const CloudPoint& hi = per.points[n / 2];
  const Rational half(1, 2);
  ChosenPoint mid;
  mid.exact = OutcomePoint{(lo.point.u_x + hi.point.u_x) * half, (lo.point.u_y + hi.point.u_y) * half};
  mid.u_x = mid.exact->u_x.to_double();
  mid.u_y = mid.exact->u_y.to_double();
  mid.lottery = Lottery{lo, hi, half};
  r.chosen.push_back(std::move(mid));
  r.is_lottery = true;
  r.objective = Rational(static_cast<long long>(n - 1), 2);
  return r;
}

EquitableScale equitable_scale(const Periphery& per, RescaleVariant variant) {
  if (per.empty()) throw std::invalid_argument("equitable rescaling needs a non-empty periphery");
  Rational r;
  Rational s;
  if (variant == RescaleVariant::FirstQuadrant) {
    for (const auto& cp : per.points) {
      r = std::max(r, cp.point.u_x);
      s = std::max(s, cp.point.u_y);
    }
    if (per.x_anchor) r = std::max(r, per.x_anchor->point.u_x);
    if (per.y_anchor) s = std::max(s, per.y_anchor->point.u_y);
  } else {
    r = per.extent_x;
    s = per.extent_y;
    for (const auto& cp : per.points) {
      r = std::max(r, cp.point.u_x);
      s = std::max(s, cp.point.u_y);
    }
  }
  return {Rational(1) / r, Rational(1) / s, variant};
}

std::pair<EquitableScale, Periphery> equitable_rescale(const Periphery& per, RescaleVariant variant) {
  const EquitableScale scale = equitable_scale(per, variant);
  auto rescale = [&](CloudPoint cp) {
    cp.point.u_x *= scale.factor_x;
    cp.point.u_y *= scale.factor_y;
    return cp;
  };
  Periphery out;
  for (const auto& cp : per.points) out.points.push_back(rescale(cp));
  if (per.x_anchor) out.x_anchor = rescale(*per.x_anchor);
  if (per.y_anchor) out.y_anchor = rescale(*per.y_anchor);
  out.extent_x = per.extent_x * scale.factor_x;
  out.extent_y = per.extent_y * scale.factor_y;
  return {scale, std::move(out)};
}

SolutionReport eq_sum_solution(const Periphery& per) {
  if (per.empty()) return no_trade(Algorithm::EqSum);
  const EquitableScale sc = equitable_scale(per);
  return extremal_set(
      Algorithm::EqSum, per,
      [&](const OutcomePoint& p) { return p.u_x * sc.factor_x + p.u_y * sc.factor_y; }, true);
}

SolutionReport eq_diagonal_solution(const Periphery& per) {
  if (per.empty()) return no_trade(Algorithm::EqDiagonal);
  const EquitableScale sc = equitable_scale(per);
  return extremal_set(
      Algorithm::EqDiagonal, per,
      [&](const OutcomePoint& p) { return abs(p.u_x * sc.factor_x - p.u_y * sc.factor_y); }, false);
}

SolutionReport eq_arclength_solution(const Periphery& per, PathVariant path) {
  if (per.empty()) return no_trade(Algorithm::EqArc);
  SolutionReport r;
  r.algorithm = Algorithm::EqArc;
  if (per.size() == 1) {
    r.chosen.push_back(vertex_choice(per.points.front()));
    r.objective = 0.0;
    return r;
  }
  const EquitableScale sc = equitable_scale(per);
  const std::vector<CloudPoint> vertices =
      path == PathVariant::Hull ? lottery_hull(per).vertices : frontier_with_anchors(per);

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& v : vertices) {
    xs.push_back((v.point.u_x * sc.factor_x).to_double());
    ys.push_back((v.point.u_y * sc.factor_y).to_double());
  }
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    cumulative.push_back(cumulative.back() + std::hypot(xs[i + 1] - xs[i], ys[i + 1] - ys[i]));
  }
  const double half = cumulative.back() / 2;
  r.objective = half;

  std::size_t seg = 0;
  while (seg + 2 < cumulative.size() && cumulative[seg + 1] < half) ++seg;
  const double len = cumulative[seg + 1] - cumulative[seg];
  const double t = len > 0 ? (half - cumulative[seg]) / len : 0.0;
  const CloudPoint& a = vertices[seg];
  const CloudPoint& b = vertices[seg + 1];
  // a vertex hit is reported only when it is a real periphery point
  auto as_vertex = [&](const CloudPoint& v) { return per.contains(v.point); };
  if (t <= kSegmentTolerance && as_vertex(a)) {
    r.chosen.push_back(vertex_choice(a));
  } else if (t >= 1 - kSegmentTolerance && as_vertex(b)) {
    r.chosen.push_back(vertex_choice(b));
  } else {
    ChosenPoint c;
    const double ax = a.point.u_x.to_double();
    const double ay = a.point.u_y.to_double();
    c.u_x = ax + t * (b.point.u_x.to_double() - ax);
    c.u_y = ay + t * (b.point.u_y.to_double() - ay);
    c.lottery = Lottery{a, b, t};
    r.chosen.push_back(std::move(c));
    r.is_lottery = true;
  }
  return r;
}

SolutionReport hull_nash_solution(const LotteryHull& hull, const Periphery& per) {
  if (hull.empty()) return no_trade(Algorithm::HullNash);
  SolutionReport r;
  r.algorithm = Algorithm::HullNash;

  // best vertex first, then interior optima of each concave segment product
  std::size_t best_vertex = 0;
  for (std::size_t i = 1; i < hull.vertices.size(); ++i) {
    const auto& p = hull.vertices[i].point;
    const auto& q = hull.vertices[best_vertex].point;
    if (p.u_x * p.u_y > q.u_x * q.u_y) best_vertex = i;
  }
  const auto& bv = hull.vertices[best_vertex].point;
  Rational best = bv.u_x * bv.u_y;
  std::optional<std::pair<std::size_t, Rational>> best_interior;  // segment, t

  for (std::size_t i = 0; i + 1 < hull.vertices.size(); ++i) {
    const auto& a = hull.vertices[i].point;
    const auto& b = hull.vertices[i + 1].point;
    const Rational dx = b.u_x - a.u_x;
    const Rational dy = b.u_y - a.u_y;
    const Rational curvature = dx * dy;  // < 0 on a descending segment
    if (curvature.sign() >= 0) continue;
    // d/dt (ax + t dx)(ay + t dy) = 0
    const Rational t = -(a.u_x * dy + a.u_y * dx) / (Rational(2) * curvature);
    if (t.sign() <= 0 || t >= Rational(1)) continue;
    const Rational value = (a.u_x + t * dx) * (a.u_y + t * dy);
    if (value > best) {
      best = value;
      best_interior = {i, t};
    }
  }

  r.objective = best;
  if (!best_interior) {
    const CloudPoint& v = hull.vertices[best_vertex];
    r.chosen.push_back(vertex_choice(v));
    if (!per.contains(v.point)) r.is_lottery = true;
    return r;
  }
  const auto& [seg, t] = *best_interior;
  const CloudPoint& a = hull.vertices[seg];
  const CloudPoint& b = hull.vertices[seg + 1];
  ChosenPoint c;
  c.exact = OutcomePoint{a.point.u_x + t * (b.point.u_x - a.point.u_x), a.point.u_y + t * (b.point.u_y - a.point.u_y)};
  c.u_x = c.exact->u_x.to_double();
  c.u_y = c.exact->u_y.to_double();
  c.lottery = Lottery{a, b, t};
  r.chosen.push_back(std::move(c));
  r.is_lottery = true;
  return r;
}

SolutionReport solve(Algorithm algorithm, const Periphery& per, PathVariant path) {
  switch (algorithm) {
    case Algorithm::Nash: return nash_solution(per);
    case Algorithm::Sum: return sum_solution(per);
    case Algorithm::Median: return median_solution(per);
    case Algorithm::EqSum: return eq_sum_solution(per);
    case Algorithm::EqDiagonal: return eq_diagonal_solution(per);
    case Algorithm::EqArc: return eq_arclength_solution(per, path);
    case Algorithm::HullNash:
      if (per.empty()) return no_trade(Algorithm::HullNash);
      return hull_nash_solution(lottery_hull(per), per);
  }
  throw std::logic_error("unhandled algorithm");
}

ProductTable constant_sum_product_table(const Rational& total, const Rational& step, const Rational& g_constant,
                                        const Rational& distance) {
  if (total.sign() <= 0 || step.sign() <= 0 || g_constant.sign() <= 0 || distance.sign() <= 0) {
    throw std::invalid_argument("constant-sum table arguments must be positive");
  }
  const Rational steps = total / step;
  if (!steps.is_integer()) {
    throw std::invalid_argument("step " + step.str() + " does not divide total " + total.str());
  }
  if (!steps.numerator().fits_slong_p()) throw std::invalid_argument("too many table rows");
  ProductTable table;
  const long count = steps.numerator().get_si();
  const Rational r2 = distance * distance;
  for (long k = 0; k <= count; ++k) {
    ProductRow row;
    row.m1 = step * Rational(k);
    row.m2 = total - row.m1;
    row.product = row.m1 * row.m2;
    row.force = g_constant * row.product / r2;
    table.rows.push_back(std::move(row));
  }
  Rational best = table.rows.front().product;
  for (const auto& row : table.rows) best = std::max(best, row.product);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].product == best) table.argmax.push_back(i);
  }
  return table;
}

}  // namespace barter
