#include "barter/lab.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace barter {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::between with hi < lo");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Unconstrained: return "unconstrained";
    case Condition::IdenticalValuation: return "identical-valuation";
    case Condition::MutualDominance: return "mutual-dominance";
    case Condition::InsufficientCompensation: return "insufficient-compensation";
  }
  return "unknown";
}

Condition parse_condition(std::string_view name) {
  for (Condition c : {Condition::Unconstrained, Condition::IdenticalValuation, Condition::MutualDominance,
                      Condition::InsufficientCompensation}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown condition '" + std::string(name) + "'");
}

namespace {

class ValueGrid {
 public:
  explicit ValueGrid(const GeneratorConfig& cfg) : lo_(cfg.value_lo), grid_(cfg.value_grid) {
    if (cfg.value_grid == 0) throw GenerationError("value grid must be at least 1");
    if (cfg.value_lo.sign() < 0) throw GenerationError("values must be nonnegative");
    if (cfg.value_hi < cfg.value_lo) throw GenerationError("value range is empty");
    const Rational steps = (cfg.value_hi - cfg.value_lo) * Rational(static_cast<long long>(grid_));
    const mpz_class floor_steps = steps.numerator() / steps.denominator();
    if (!floor_steps.fits_slong_p()) throw GenerationError("value grid too fine");
    count_ = static_cast<std::uint64_t>(floor_steps.get_si()) + 1;
  }

  std::uint64_t count() const { return count_; }
  Rational at(std::uint64_t k) const {
    return lo_ + Rational(static_cast<long long>(k), static_cast<long long>(grid_));
  }
  Rational draw(Rng& rng) const { return at(rng.below(count_)); }
  /// Smallest grid index whose value exceeds v, or count() if none.
  std::uint64_t first_above(const Rational& v) const {
    if (v < lo_) return 0;
    const Rational steps = (v - lo_) * Rational(static_cast<long long>(grid_));
    const mpz_class k = steps.numerator() / steps.denominator() + 1;
    if (!k.fits_slong_p()) return count_;
    return std::min<std::uint64_t>(count_, static_cast<std::uint64_t>(k.get_si()));
  }

 private:
  Rational lo_;
  std::uint64_t grid_;
  std::uint64_t count_ = 1;
};

std::string item_name(PlayerId owner, std::size_t k) {
  return (owner == PlayerId::X ? "x" : "y") + std::to_string(k);
}

Item make_item(PlayerId owner, std::size_t k, Rational to_x, Rational to_y) {
  return Item{item_name(owner, k), owner, std::move(to_x), std::move(to_y)};
}

}  // namespace

Instance generate(const GeneratorConfig& cfg) {
  const ValueGrid grid(cfg);
  Rng rng(cfg.seed);
  std::vector<Item> items;
  const std::size_t total = cfg.p + cfg.q;
  auto owner_of = [&](std::size_t i) { return i < cfg.p ? PlayerId::X : PlayerId::Y; };
  auto index_of = [&](std::size_t i) { return i < cfg.p ? i : i - cfg.p; };

  switch (cfg.condition) {
    case Condition::Unconstrained:
      for (std::size_t i = 0; i < total; ++i) {
        Rational vx = grid.draw(rng);
        Rational vy = grid.draw(rng);
        items.push_back(make_item(owner_of(i), index_of(i), std::move(vx), std::move(vy)));
      }
      break;
    case Condition::IdenticalValuation:
      for (std::size_t i = 0; i < total; ++i) {
        Rational v = grid.draw(rng);
        items.push_back(make_item(owner_of(i), index_of(i), v, v));
      }
      break;
    case Condition::MutualDominance: {
      int attempts = 0;
      for (std::size_t i = 0; i < total; ++i) {
        for (;;) {
          if (++attempts > kMaxGenerationAttempts) {
            throw GenerationError("mutual dominance not reached within " +
                                  std::to_string(kMaxGenerationAttempts) + " draws");
          }
          Rational own = grid.draw(rng);
          Rational theirs = grid.draw(rng);
          if (own > theirs) {
            const bool x_owns = owner_of(i) == PlayerId::X;
            items.push_back(make_item(owner_of(i), index_of(i), x_owns ? own : theirs, x_owns ? theirs : own));
            break;
          }
        }
      }
      break;
    }
    case Condition::InsufficientCompensation: {
      if (cfg.p == 0) throw GenerationError("insufficient compensation needs X to own an item");
      for (int attempt = 1;; ++attempt) {
        if (attempt > kMaxGenerationAttempts) {
          throw GenerationError("insufficient compensation not reached within " +
                                std::to_string(kMaxGenerationAttempts) + " draws");
        }
        // Y's items first: X's own values must then exceed their sum
        std::vector<Item> y_items;
        Rational sum;
        for (std::size_t k = 0; k < cfg.q; ++k) {
          Rational vx = grid.draw(rng);
          Rational vy = grid.draw(rng);
          sum += vx;
          y_items.push_back(make_item(PlayerId::Y, k, std::move(vx), std::move(vy)));
        }
        const std::uint64_t lowest = grid.first_above(sum);
        if (lowest >= grid.count()) continue;
        items.clear();
        for (std::size_t k = 0; k < cfg.p; ++k) {
          Rational vx = grid.at(lowest + rng.below(grid.count() - lowest));
          Rational vy = grid.draw(rng);
          items.push_back(make_item(PlayerId::X, k, std::move(vx), std::move(vy)));
        }
        items.insert(items.end(), y_items.begin(), y_items.end());
        break;
      }
      break;
    }
  }
  return Instance(std::move(items));
}

Rational random_factor(Rng& rng) {
  const auto num = rng.between(1, 20);
  const auto den = rng.between(1, 20);
  return Rational(num, den);
}

GreedyResult greedy_one_for_one(const Instance& inst) {
  const auto& items = inst.items();
  std::vector<PlayerId> holder;
  for (const Item& item : items) holder.push_back(item.owner);

  GreedyResult result;
  for (;;) {
    std::optional<GreedyStep> best;
    Rational best_product;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (holder[i] != PlayerId::X) continue;
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (holder[j] != PlayerId::Y) continue;
        Rational gain_x = items[j].value_to_x - items[i].value_to_x;
        Rational gain_y = items[i].value_to_y - items[j].value_to_y;
        if (gain_x.sign() <= 0 || gain_y.sign() <= 0) continue;
        Rational product = gain_x * gain_y;
        if (!best || product > best_product) {
          best_product = std::move(product);
          best = GreedyStep{i, j, std::move(gain_x), std::move(gain_y)};
        }
      }
    }
    if (!best) break;
    holder[best->x_item] = PlayerId::Y;
    holder[best->y_item] = PlayerId::X;
    result.trace.push_back(std::move(*best));
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (holder[i] == items[i].owner) continue;
    (items[i].owner == PlayerId::X ? result.net_exchange.give_x : result.net_exchange.give_y) |= ItemMask{1} << i;
  }
  result.final_point = marginal_utilities(inst, result.net_exchange);
  return result;
}

Instance swap_players(const Instance& inst) {
  std::vector<Item> items;
  for (const Item& item : inst.items()) {
    items.push_back(Item{item.name, other(item.owner), item.value_to_y, item.value_to_x});
  }
  return Instance(std::move(items), true);
}

std::vector<ItemMask> choice_exchanges(const SolutionReport& report) {
  std::vector<ItemMask> out;
  for (const auto& c : report.chosen) {
    for (const auto& ex : c.exchanges) out.push_back(ex.moved());
    if (c.lottery) {
      for (const auto* side : {&c.lottery->first, &c.lottery->second}) {
        for (const auto& ex : side->exchanges) out.push_back(ex.moved());
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct Coord {
  double x;
  double y;
  std::optional<OutcomePoint> exact;
};

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

bool same_coord(const Coord& a, const Coord& b) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return close(a.x, b.x) && close(a.y, b.y);
}

std::vector<Coord> coords(const SolutionReport& r) {
  std::vector<Coord> out;
  for (const auto& c : r.chosen) out.push_back({c.u_x, c.u_y, c.exact});
  return out;
}

bool same_choice(std::vector<Coord> a, std::vector<Coord> b) {
  if (a.size() != b.size()) return false;
  auto order = [](const Coord& l, const Coord& r) { return std::tie(l.x, l.y) < std::tie(r.x, r.y); };
  std::sort(a.begin(), a.end(), order);
  std::sort(b.begin(), b.end(), order);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_coord(a[i], b[i])) return false;
  }
  return true;
}

std::vector<Coord> mapped(const SolutionReport& r, const Rational& fx, const Rational& fy) {
  std::vector<Coord> out;
  for (const auto& c : r.chosen) {
    Coord m{c.u_x * fx.to_double(), c.u_y * fy.to_double(), std::nullopt};
    if (c.exact) m.exact = OutcomePoint{c.exact->u_x * fx, c.exact->u_y * fy};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Coord> mirrored(const SolutionReport& r) {
  std::vector<Coord> out;
  for (const auto& c : r.chosen) {
    Coord m{c.u_y, c.u_x, std::nullopt};
    if (c.exact) m.exact = OutcomePoint{c.exact->u_y, c.exact->u_x};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<SolutionReport> solve_all(const Periphery& per) {
  std::vector<SolutionReport> out;
  for (Algorithm a : kAllAlgorithms) out.push_back(solve(a, per));
  return out;
}

std::size_t bin_of(double v, bool right_closed) {
  double scaled = v * static_cast<double>(ComparisonStats::kBins);
  long k = right_closed ? static_cast<long>(std::ceil(scaled)) - 1 : static_cast<long>(std::floor(scaled));
  return static_cast<std::size_t>(std::clamp<long>(k, 0, ComparisonStats::kBins - 1));
}

}  // namespace

std::uint64_t ComparisonStats::traded_instances() const {
  return instances_run - per_algorithm[0].no_trade;
}

void ComparisonStats::merge(const ComparisonStats& o) {
  instances_run += o.instances_run;
  for (std::size_t i = 0; i < kAlgorithms; ++i) {
    for (std::size_t j = 0; j < kAlgorithms; ++j) agreement[i][j] += o.agreement[i][j];
    per_algorithm[i].algorithm = kAllAlgorithms[i];
    per_algorithm[i].no_trade += o.per_algorithm[i].no_trade;
    per_algorithm[i].ties += o.per_algorithm[i].ties;
    per_algorithm[i].unique += o.per_algorithm[i].unique;
    per_algorithm[i].scale_invariant += o.per_algorithm[i].scale_invariant;
    per_algorithm[i].symmetric += o.per_algorithm[i].symmetric;
  }
  median_nash_disagreements += o.median_nash_disagreements;
  collapse_ratio_sum += o.collapse_ratio_sum;
  greedy_optimal += o.greedy_optimal;
  greedy_stuck += o.greedy_stuck;
  greedy_gap_sum += o.greedy_gap_sum;
  for (std::size_t k = 0; k < kBins; ++k) {
    collapse_histogram[k] += o.collapse_histogram[k];
    greedy_gap_histogram[k] += o.greedy_gap_histogram[k];
  }
}

ComparisonStats compare_on_instance(const Instance& inst, std::uint64_t seed, const EnumerationOptions& opts) {
  ComparisonStats stats;
  for (std::size_t i = 0; i < ComparisonStats::kAlgorithms; ++i) stats.per_algorithm[i].algorithm = kAllAlgorithms[i];
  stats.instances_run = 1;

  const PointCloud cloud = enumerate_cloud(inst, opts);
  const Periphery per = periphery(cloud);
  const auto reports = solve_all(per);

  Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
  const Rational fx = random_factor(rng);
  const Rational fy = random_factor(rng);
  const Instance scaled = apply_scale(apply_scale(inst, {PlayerId::X, fx}), {PlayerId::Y, fy});
  const auto scaled_reports = solve_all(periphery(enumerate_cloud(scaled, opts)));
  const auto swapped_reports = solve_all(periphery(enumerate_cloud(swap_players(inst), opts)));

  for (std::size_t i = 0; i < reports.size(); ++i) {
    AlgorithmStats& a = stats.per_algorithm[i];
    const SolutionReport& r = reports[i];
    if (r.no_trade) ++a.no_trade;
    if (r.tie_count() > 1) ++a.ties;
    if (r.tie_count() == 1) ++a.unique;
    if (r.no_trade == scaled_reports[i].no_trade && same_choice(mapped(r, fx, fy), coords(scaled_reports[i]))) {
      ++a.scale_invariant;
    }
    if (r.no_trade == swapped_reports[i].no_trade && same_choice(mirrored(r), coords(swapped_reports[i]))) {
      ++a.symmetric;
    }
    for (std::size_t j = 0; j < reports.size(); ++j) {
      if (reports[i].no_trade == reports[j].no_trade && same_choice(coords(reports[i]), coords(reports[j]))) {
        ++stats.agreement[i][j];
      }
    }
  }

  const Rational ratio = collapse_ratio(cloud);
  stats.collapse_ratio_sum = ratio.to_double();
  ++stats.collapse_histogram[bin_of(ratio.to_double(), true)];

  const SolutionReport& nash = reports[0];
  if (!nash.no_trade) {
    if (!same_choice(coords(reports[2]), coords(nash))) ++stats.median_nash_disagreements;
    const GreedyResult greedy = greedy_one_for_one(inst);
    const Rational best = std::get<Rational>(*nash.objective);
    const Rational got = acceptable(greedy.final_point) ? greedy.final_point.u_x * greedy.final_point.u_y : Rational(0);
    const double gap = 1.0 - (got / best).to_double();
    if (got == best) ++stats.greedy_optimal;
    if (greedy.net_exchange.is_null()) ++stats.greedy_stuck;
    stats.greedy_gap_sum = gap;
    ++stats.greedy_gap_histogram[bin_of(gap, false)];
  }
  return stats;
}

ComparisonStats compare_algorithms(const GeneratorConfig& cfg, std::uint64_t runs, unsigned workers,
                                   const EnumerationOptions& opts) {
  std::vector<ComparisonStats> results(runs);
  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      GeneratorConfig c = cfg;
      c.seed = cfg.seed + i;
      results[i] = compare_on_instance(generate(c), c.seed, opts);
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1 || runs < 2) {
    run_range(0, runs);
  } else {
    // instance generation errors surface on the calling thread
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (runs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min(runs, chunk * w);
      const std::uint64_t end = std::min(runs, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  ComparisonStats total;
  for (std::size_t i = 0; i < ComparisonStats::kAlgorithms; ++i) total.per_algorithm[i].algorithm = kAllAlgorithms[i];
  for (const auto& r : results) total.merge(r);
  return total;
}

ProbeReport median_dislike_scale_probe(const Instance& inst, const std::vector<Rational>& factors,
                                       const EnumerationOptions& opts) {
  auto choices = [&](const Instance& in) {
    const Periphery per = periphery(enumerate_cloud(in, opts));
    if (per.empty()) throw std::invalid_argument("median probe needs a non-empty periphery");
    return std::pair{choice_exchanges(median_solution(per)), choice_exchanges(nash_solution(per))};
  };
  ProbeReport report;
  std::tie(report.median_exchanges, report.nash_exchanges) = choices(inst);
  if (report.median_exchanges == report.nash_exchanges) {
    throw std::invalid_argument("median and Nash choices coincide on this instance");
  }
  for (const Rational& f : factors) {
    for (PlayerId player : {PlayerId::X, PlayerId::Y}) {
      ProbeRow row;
      row.player = player;
      row.factor = f;
      std::tie(row.median_exchanges, row.nash_exchanges) = choices(apply_scale(inst, {player, f}));
      row.stable = row.median_exchanges == report.median_exchanges && row.nash_exchanges == report.nash_exchanges &&
                   row.median_exchanges != row.nash_exchanges;
      report.passed = report.passed && row.stable;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace barter
