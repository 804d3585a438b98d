// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "barter/enumeration.hpp"
#include "barter/invariance.hpp"
#include "barter/lab.hpp"
#include "barter/notrade.hpp"
#include "barter/plot.hpp"
#include "barter/report.hpp"
#include "barter/solvers.hpp"
#include "support/fixtures.hpp"
#include "support/reference.hpp"

using namespace barter;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

OutcomePoint pt(const char* x, const char* y) { return {Rational::parse(x), Rational::parse(y)}; }

std::string show(const OutcomePoint& p) { return "(" + p.u_x.str() + ", " + p.u_y.str() + ")"; }

std::set<OutcomePoint> chosen_set(const SolutionReport& r) {
  std::set<OutcomePoint> out;
  for (const auto& c : r.chosen) {
    expect(c.exact.has_value(), std::string(to_string(r.algorithm)) + " returned an inexact point");
    out.insert(*c.exact);
  }
  return out;
}

Rational exact_objective(const SolutionReport& r) {
  expect(r.objective && std::holds_alternative<Rational>(*r.objective), "missing exact objective");
  return std::get<Rational>(*r.objective);
}

// Seeded instance with p + q <= max_items, both sides non-empty unless allow_empty.
Instance random_instance(Rng& rng, std::size_t max_items, std::uint64_t seed, Condition cond = Condition::Unconstrained,
                         bool allow_empty = false) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  const std::size_t lo = allow_empty ? 0 : 1;
  cfg.p = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(max_items - 1)));
  cfg.q = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(max_items - cfg.p)));
  const std::uint64_t grids[] = {1, 2, 4};
  cfg.value_grid = grids[rng.below(3)];
  const std::int64_t highs[] = {3, 10, 25};
  cfg.value_hi = highs[rng.below(3)];
  cfg.condition = cond;
  return generate(cfg);
}

// ---------------------------------------------------------------------------

void table_reproduction() {
  const Instance inst = fixtures::table_instance();
  const PointCloud cloud = enumerate_cloud(inst);
  for (std::size_t k = 0; k < fixtures::kTableRows.size(); ++k) {
    const OutcomePoint row = pt(fixtures::kTableRows[k].first, fixtures::kTableRows[k].second);
    expect(cloud.find(row) != nullptr, "row " + show(row) + " missing from the cloud");
    expect(row.u_x * row.u_y == Rational::parse(fixtures::kTableProducts[k]),
           "product of " + show(row) + " differs from the table");
  }
  expect(pt("7", "29.5").u_x * pt("7", "29.5").u_y == Rational::parse("206.5"), "(7, 29.5) product");
  const Periphery per = periphery(cloud);
  const SolutionReport nash = nash_solution(per);
  expect(nash.tie_count() == 1 && *nash.headline().exact == pt("27", "17"), "nash headline");
  expect(exact_objective(nash) == Rational(459), "nash objective");
  const SolutionReport median = median_solution(per);
  expect(chosen_set(median) == std::set<OutcomePoint>{pt("9", "28")}, "median choice");
}

// Nash argmax exchanges found by brute force over a reference evaluation.
std::vector<ItemMask> naive_nash_masks(const std::vector<OutcomePoint>& points) {
  std::vector<ItemMask> out;
  std::optional<Rational> best;
  for (ItemMask m = 0; m < points.size(); ++m) {
    if (!reference::positive(points[m])) continue;
    const Rational v = points[m].u_x * points[m].u_y;
    if (!best || v > *best) {
      best = v;
      out.clear();
    }
    if (v == *best) out.push_back(m);
  }
  return out;
}

void scale_invariance() {
  Rng rng(0x5ca1e);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Instance inst = random_instance(rng, 10, 1000 + i);
    const Rational fx = random_factor(rng);
    const Rational fy = random_factor(rng);
    const int mode = static_cast<int>(i % 3);  // X, Y, both
    Instance scaled = inst;
    if (mode != 1) scaled = apply_scale(scaled, ScaleTransform(PlayerId::X, fx));
    if (mode != 0) scaled = apply_scale(scaled, ScaleTransform(PlayerId::Y, fy));
    const Rational ax = mode != 1 ? fx : Rational(1);
    const Rational ay = mode != 0 ? fy : Rational(1);

    const ItemMask total = ItemMask{1} << inst.size();
    std::vector<OutcomePoint> before, after;
    for (ItemMask m = 0; m < total; ++m) {
      before.push_back(reference::evaluate(inst, m));
      after.push_back(reference::evaluate(scaled, m));
      const std::string where = "instance " + std::to_string(i) + " mask " + std::to_string(m);
      expect(reference::positive(before.back()) == reference::positive(after.back()), where + ": acceptability");
      expect(after.back().u_x == ax * before.back().u_x, where + ": u_x not scaled exactly");
      expect(after.back().u_y == ay * before.back().u_y, where + ": u_y not scaled exactly");
    }
    const auto argmax = naive_nash_masks(before);
    expect(argmax == naive_nash_masks(after), "instance " + std::to_string(i) + ": argmax exchange set moved");
    expect(nash_argmax_exchanges(enumerate_cloud(inst)) == argmax, "library argmax differs from reference");
    expect(nash_argmax_exchanges(enumerate_cloud(scaled)) == argmax, "library scaled argmax differs");
    if (mode == 0) expect(check_scale_invariance(inst, ScaleTransform(PlayerId::X, fx)).passed, "check_scale X");
    if (mode == 1) expect(check_scale_invariance(inst, ScaleTransform(PlayerId::Y, fy)).passed, "check_scale Y");
  }
}

// Translated margin summed item by item.
Rational shifted_margin(const Instance& inst, ItemMask moved, PlayerId player, const Rational& b) {
  Rational margin;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!((moved >> i) & 1)) continue;
    const Item& it = inst.items()[i];
    const Rational v = it.value_to(player) + b;
    margin = it.owner == player ? margin - v : margin + v;
  }
  return margin;
}

void translation_flip() {
  Rng rng(0x7e57);
  std::size_t flips = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Instance inst = random_instance(rng, 10, 5000 + i);
    for (ItemMask m = 1; m < (ItemMask{1} << inst.size()); ++m) {
      const OutcomePoint p = reference::evaluate(inst, m);
      if (!reference::positive(p)) continue;
      const Exchange ex = Exchange::from_moved(inst, m);
      for (PlayerId player : {PlayerId::X, PlayerId::Y}) {
        const ItemMask own = inst.owned_by(player);
        const std::size_t given = static_cast<std::size_t>(std::popcount(m & own));
        const std::size_t received = static_cast<std::size_t>(std::popcount(m & ~own));
        const Rational margin = p.u(player);
        const FlipReport report = check_translation_flip(inst, ex, player);
        const std::string where = "instance " + std::to_string(i) + " mask " + std::to_string(m);
        if (received < given) {
          const Rational bstar = margin / Rational(static_cast<long long>(given - received));
          expect(report.flip_possible && report.threshold && *report.threshold == bstar, where + ": threshold");
          for (const Rational& b : {bstar, bstar + Rational(1, 1000), bstar * Rational(2), bstar * Rational(10),
                                    bstar + Rational(1000), Rational(1000000)}) {
            if (b < bstar) continue;
            expect(shifted_margin(inst, m, player, b).sign() <= 0, where + ": accepted at b >= b*");
            expect(translated_margin(inst, ex, player, b) == shifted_margin(inst, m, player, b), where + ": margin");
          }
          for (const Rational& b : {bstar / Rational(2), bstar * Rational(999, 1000), bstar / Rational(1000)}) {
            expect(shifted_margin(inst, m, player, b).sign() > 0, where + ": rejected below b*");
          }
          ++flips;
        } else {
          expect(!report.flip_possible, where + ": flip claimed with m >= n");
          for (const Rational& b : {Rational(1, 3), Rational(1), Rational(10), Rational(1000), Rational(1000000)}) {
            expect(shifted_margin(inst, m, player, b).sign() > 0, where + ": flipped with m >= n");
          }
        }
      }
    }
  }
  expect(flips > 0, "suite contains no m < n exchange");
}

std::size_t brute_positive(const Instance& inst) {
  std::size_t n = 0;
  for (ItemMask m = 0; m < (ItemMask{1} << inst.size()); ++m) n += reference::positive(reference::evaluate(inst, m));
  return n;
}

void no_trade_certificates() {
  const Instance dom = fixtures::dominance_table();
  const Instance comp = fixtures::compensation_table();
  expect(detect_mutual_dominance(dom).has_value(), "mutual dominance did not fire");
  const auto x = detect_insufficient_compensation(comp, PlayerId::X);
  expect(x.has_value() && x->other_sum == Rational(11) && x->own_min == Rational(12), "compensation 11 < 12");
  expect(brute_positive(dom) == 0 && brute_positive(comp) == 0, "brute force found an acceptable exchange");
  const NoTradeCertificate a = certify_no_trade(dom);
  const NoTradeCertificate b = certify_no_trade(comp);
  expect(a.kind == NoTradeKind::MutualDominance && a.brute_force_verified && a.exchanges_checked == 512 &&
             a.acceptable_exchanges == 0,
         "dominance certificate");
  expect(b.kind == NoTradeKind::InsufficientCompensationX && b.brute_force_verified && b.exchanges_checked == 512 &&
             b.acceptable_exchanges == 0,
         "compensation certificate");
}

void identical_valuation() {
  Rng rng(0x1d);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Instance inst = random_instance(rng, 12, 9000 + i, Condition::IdenticalValuation);
    for (const auto& cp : enumerate_cloud(inst).points) {
      expect(cp.point.u_x + cp.point.u_y == Rational(0), "instance " + std::to_string(i) + ": off the line");
    }
  }
  const Instance zs = fixtures::zero_sum_instance();
  expect(marginal_utilities(zs, Exchange{0b00111, 0b11000}) == OutcomePoint{4, -4}, "worked example (4, -4)");
}

void gravity_table() {
  const ProductTable t = constant_sum_product_table(10, 1, Rational::parse("6.674e-11"), 10);
  const long long products[] = {0, 9, 16, 21, 24, 25, 24, 21, 16, 9, 0};
  const double printed[] = {0, 6.00e-12, 1.06e-11, 1.40e-11, 1.60e-11, 1.66e-11,
                            1.60e-11, 1.40e-11, 1.06e-11, 6.00e-12, 0};
  expect(t.rows.size() == 11, "row count");
  for (std::size_t i = 0; i < 11; ++i) {
    expect(t.rows[i].m1 == Rational(static_cast<long long>(i)), "m1 column");
    expect(t.rows[i].product == Rational(products[i]), "product column");
    const double f = t.rows[i].force.to_double();
    char ours[32], theirs[32];
    std::snprintf(ours, sizeof ours, "%.1e", f);
    std::snprintf(theirs, sizeof theirs, "%.1e", printed[i]);
    expect(std::string(ours) == theirs, "force row " + std::to_string(i) + ": " + ours + " vs " + theirs);
    expect(std::abs(f - printed[i]) <= 0.01e-11 + 1e-24, "force row " + std::to_string(i) + " outside 0.01e-11");
  }
  expect(t.argmax == std::vector<std::size_t>{5}, "argmax");
  expect(t.rows[5].m2 == Rational(5), "argmax at (5, 5)");
}

void hull_nash() {
  const Instance inst = fixtures::table_instance();
  const PointCloud cloud = enumerate_cloud(inst);
  const Periphery per = periphery(cloud);
  const LotteryHull hull = lottery_hull(per);
  const SolutionReport r = hull_nash_solution(hull, per);
  expect(r.chosen.size() == 1, "hull maximizer not unique");
  const OutcomePoint best{Rational(105, 4), Rational(35, 2)};
  expect(*r.chosen[0].exact == best, "maximizer " + show(*r.chosen[0].exact));
  const Rational value = exact_objective(r);
  expect(value == Rational(3675, 8) && value > Rational(459), "product 3675/8 > 459");

  const double target = value.to_double();
  double sampled = 0;
  for (std::size_t s = 0; s + 1 < hull.vertices.size(); ++s) {
    const double ax = hull.vertices[s].point.u_x.to_double(), ay = hull.vertices[s].point.u_y.to_double();
    const double bx = hull.vertices[s + 1].point.u_x.to_double(), by = hull.vertices[s + 1].point.u_y.to_double();
    constexpr int kSamples = 100000;
    for (int k = 0; k <= kSamples; ++k) {
      const double t = static_cast<double>(k) / kSamples;
      const double v = (ax + t * (bx - ax)) * (ay + t * (by - ay));
      expect(v <= target * (1 + 1e-9), "a sampled hull point beats the maximizer");
      sampled = std::max(sampled, v);
    }
  }
  expect(sampled >= target * (1 - 1e-9), "densified maximum does not reach the maximizer");
  const auto ref = reference::cloud(inst);
  const auto [ref_pt, ref_value] = reference::hull_nash(ref, reference::periphery(ref));
  expect(ref_pt == best && ref_value == value, "all-pairs reference disagrees");
}

// Arc position of (x, y) along the chain, or nullopt when not on it.
std::optional<double> arc_position(const std::vector<std::pair<double, double>>& chain, double x, double y) {
  double along = 0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto [ax, ay] = chain[i];
    const auto [bx, by] = chain[i + 1];
    const double len = std::hypot(bx - ax, by - ay);
    const double cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
    const double dot = (bx - ax) * (x - ax) + (by - ay) * (y - ay);
    if (std::abs(cross) <= 1e-12 * std::max(1.0, len) && dot >= -1e-12 && dot <= len * len + 1e-12) {
      return along + std::hypot(x - ax, y - ay);
    }
    along += len;
  }
  return std::nullopt;
}

void compare_with_reference(const Instance& inst, const std::string& where) {
  const auto ref = reference::cloud(inst);
  const auto ref_per = reference::periphery(ref);
  const PointCloud cloud = enumerate_cloud(inst);
  const Periphery per = periphery(cloud);

  std::vector<OutcomePoint> got;
  for (const auto& cp : per.points) {
    got.push_back(cp.point);
    const auto it = ref.find(cp.point);
    expect(it != ref.end(), where + ": periphery point not in reference cloud");
    std::vector<ItemMask> masks;
    for (const auto& ex : cp.exchanges) masks.push_back(ex.moved());
    expect(masks == it->second, where + ": achieving exchanges differ");
  }
  expect(got == ref_per, where + ": periphery differs");
  const auto xa = reference::x_anchor(ref);
  const auto ya = reference::y_anchor(ref);
  expect(xa.has_value() == per.x_anchor.has_value() && (!xa || *xa == per.x_anchor->point), where + ": x anchor");
  expect(ya.has_value() == per.y_anchor.has_value() && (!ya || *ya == per.y_anchor->point), where + ": y anchor");

  if (ref_per.empty()) {
    for (Algorithm a : kAllAlgorithms) expect(solve(a, per).no_trade, where + ": expected no trade");
    return;
  }
  expect(chosen_set(nash_solution(per)) == reference::nash(ref_per), where + ": nash");
  expect(chosen_set(sum_solution(per)) == reference::sum(ref_per), where + ": sum");
  expect(chosen_set(eq_sum_solution(per)) == reference::eq_sum(ref, ref_per), where + ": eq-sum");
  expect(chosen_set(eq_diagonal_solution(per)) == reference::eq_diagonal(ref, ref_per), where + ": eq-diagonal");

  const auto mid = reference::median(ref_per);
  const SolutionReport med = median_solution(per);
  expect(med.chosen.size() == 1, where + ": median count");
  if (mid.size() == 1) {
    expect(!med.is_lottery && *med.chosen[0].exact == mid[0], where + ": median");
  } else {
    const auto& lot = med.chosen[0].lottery;
    expect(med.is_lottery && lot && lot->first.point == mid[0] && lot->second.point == mid[1], where + ": median pair");
  }

  const auto [hull_pt, hull_value] = reference::hull_nash(ref, ref_per);
  const SolutionReport hn = solve(Algorithm::HullNash, per);
  expect(hn.chosen.size() == 1 && *hn.chosen[0].exact == hull_pt && exact_objective(hn) == hull_value,
         where + ": hull-nash");

  // chain in rescaled coordinates: undominated anchors around the periphery
  const auto [r, s] = reference::first_quadrant_extremes(ref, ref_per);
  std::vector<OutcomePoint> chain_pts;
  if (ya && ya->u_y > ref_per.front().u_y) chain_pts.push_back(*ya);
  chain_pts.insert(chain_pts.end(), ref_per.begin(), ref_per.end());
  if (xa && xa->u_x > ref_per.back().u_x) chain_pts.push_back(*xa);
  std::vector<std::pair<double, double>> chain;
  for (const auto& p : chain_pts) chain.emplace_back((p.u_x / r).to_double(), (p.u_y / s).to_double());
  double total = 0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    total += std::hypot(chain[i + 1].first - chain[i].first, chain[i + 1].second - chain[i].second);
  }
  const SolutionReport arc = eq_arclength_solution(per);
  expect(arc.chosen.size() == 1, where + ": eq-arc count");
  if (ref_per.size() == 1) {
    expect(*arc.chosen[0].exact == ref_per[0], where + ": eq-arc single point");
  } else {
    const auto pos = arc_position(chain, arc.chosen[0].u_x / r.to_double(), arc.chosen[0].u_y / s.to_double());
    expect(pos.has_value(), where + ": eq-arc point off the chain");
    expect(std::abs(*pos - total / 2) <= 1e-9 * total, where + ": eq-arc not halfway");
  }
}

void oracle_equivalence() {
  Rng rng(0x0acc);
  for (std::uint64_t i = 0; i < 600; ++i) {
    const Condition cond = i % 10 == 9 ? Condition::MutualDominance : Condition::Unconstrained;
    const Instance inst = random_instance(rng, 8, 20000 + i, cond, true);
    compare_with_reference(inst, "instance " + std::to_string(i));
  }
  // hand-built ties on several axes
  std::vector<Item> items;
  for (int k = 0; k < 4; ++k) {
    items.push_back(fixtures::item("x" + std::to_string(k), PlayerId::X, "1", "2"));
    items.push_back(fixtures::item("y" + std::to_string(k), PlayerId::Y, "2", "1"));
  }
  compare_with_reference(Instance(items), "symmetric instance");
}

void greedy_failure() {
  const Instance inst = fixtures::greedy_trap();
  const GreedyResult g = greedy_one_for_one(inst);
  expect(g.final_point == OutcomePoint{0, 0} && g.trace.empty(), "greedy moved away from (0, 0)");
  const auto ref = reference::cloud(inst);
  const auto best = reference::nash(reference::periphery(ref));
  expect(!best.empty(), "no acceptable exchange");
  const OutcomePoint opt = *best.begin();
  expect(opt.u_x * opt.u_y > Rational(0), "optimum product is not positive");
  const SolutionReport n = nash_solution(periphery(enumerate_cloud(inst)));
  expect(exact_objective(n) == opt.u_x * opt.u_y, "library optimum differs");
}

std::string pipeline_bytes(const Instance& inst, unsigned workers) {
  EnumerationOptions opts;
  opts.workers = workers;
  const PointCloud cloud = enumerate_cloud(inst, opts);
  const Periphery per = periphery(cloud);
  std::ostringstream out;
  out << cloud_csv(cloud, per, false) << cloud_csv(cloud, per, true);
  for (Algorithm a : kAllAlgorithms) {
    for (PathVariant v : {PathVariant::AdjacentChain, PathVariant::Hull}) {
      out << to_json(inst, solve(a, per, v)).dump(2) << "\n";
    }
  }
  PlotOptions popts;
  popts.hull = true;
  popts.annotate = true;
  std::optional<NoTradeKind> kind;
  if (per.empty()) kind = certify_no_trade(inst, opts).kind;
  out << render_svg(cloud, per, popts, kind);
  return out.str();
}

void determinism() {
  GeneratorConfig cfg;
  cfg.seed = 31337;
  cfg.p = 8;
  cfg.q = 8;
  cfg.value_grid = 2;
  const std::vector<Instance> suite = {fixtures::table_instance(), fixtures::dominance_table(), generate(cfg)};
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const std::string first = pipeline_bytes(suite[i], 1);
    expect(pipeline_bytes(suite[i], 1) == first, "instance " + std::to_string(i) + ": second run differs");
    expect(pipeline_bytes(suite[i], 4) == first, "instance " + std::to_string(i) + ": 4 workers differ");
    expect(pipeline_bytes(suite[i], 4) == first, "instance " + std::to_string(i) + ": second 4-worker run differs");
  }
  GeneratorConfig lab_cfg;
  lab_cfg.seed = 4;
  expect(to_json(compare_algorithms(lab_cfg, 30, 1)).dump() == to_json(compare_algorithms(lab_cfg, 30, 4)).dump(),
         "lab statistics depend on worker count");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "table reproduction", 1, table_reproduction},
      {2, "scale invariance over 1000 instances", 60, scale_invariance},
      {3, "translation flip thresholds over 500 instances", 60, translation_flip},
      {4, "no-trade certificates with brute force", 1, no_trade_certificates},
      {5, "identical valuation line over 200 instances", 10, identical_valuation},
      {6, "constant-sum gravity table", 1, gravity_table},
      {7, "hull Nash maximizer", 1, hull_nash},
      {8, "oracle equivalence for p+q <= 8", 120, oracle_equivalence},
      {9, "greedy one-for-one failure witness", 1, greedy_failure},
      {10, "determinism across runs and worker counts", 30, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && seconds > c.limit_seconds) {
      ok = false;
      detail = "over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s budget";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", seconds);
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << timing << ")";
    if (!ok) std::cout << " - " << detail;
    std::cout << "\n";
    failed += !ok;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
