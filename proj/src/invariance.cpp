#include "barter/invariance.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace barter {

ScaleTransform::ScaleTransform(PlayerId player, Rational factor) : player_(player), factor_(std::move(factor)) {
  if (factor_.sign() <= 0) {
    throw std::invalid_argument("scale factor must be strictly positive, got " + factor_.str());
  }
}

Instance apply_scale(const Instance& inst, const ScaleTransform& t) {
  std::vector<Item> items = inst.items();
  for (Item& item : items) {
    Rational& v = t.player() == PlayerId::X ? item.value_to_x : item.value_to_y;
    v *= t.factor();
  }
  const bool had_negative = std::any_of(inst.items().begin(), inst.items().end(), [](const Item& it) {
    return it.value_to_x.sign() < 0 || it.value_to_y.sign() < 0;
  });
  return Instance(std::move(items), had_negative);
}

Instance apply_translation(const Instance& inst, const TranslationTransform& t, bool strict) {
  std::vector<Item> items = inst.items();
  for (Item& item : items) {
    Rational& v = t.player == PlayerId::X ? item.value_to_x : item.value_to_y;
    v += t.offset;
  }
  return Instance(std::move(items), !strict);
}

std::vector<std::size_t> argmax_positions(std::span<const Rational> values) {
  std::vector<std::size_t> out;
  if (values.empty()) return out;
  const Rational best = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best) out.push_back(i);
  }
  return out;
}

std::vector<ItemMask> nash_argmax_exchanges(const PointCloud& cloud) {
  const Periphery per = periphery(cloud);
  std::vector<ItemMask> out;
  if (per.empty()) return out;
  std::vector<Rational> products;
  for (const auto& cp : per.points) products.push_back(cp.point.u_x * cp.point.u_y);
  for (std::size_t i : argmax_positions(products)) {
    for (const auto& ex : per.points[i].exchanges) out.push_back(ex.moved());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Point of every exchange, indexed by moved mask.
std::unordered_map<ItemMask, const OutcomePoint*> by_mask(const PointCloud& cloud) {
  std::unordered_map<ItemMask, const OutcomePoint*> index;
  index.reserve(cloud.total_exchanges);
  for (const auto& cp : cloud.points) {
    for (const auto& ex : cp.exchanges) index.emplace(ex.moved(), &cp.point);
  }
  return index;
}

}  // namespace

ScaleCheckReport check_scale_invariance(const Instance& inst, const ScaleTransform& t,
                                        const EnumerationOptions& opts) {
  const Instance scaled = apply_scale(inst, t);
  const PointCloud before = enumerate_cloud(inst, opts);
  const PointCloud after = enumerate_cloud(scaled, opts);

  ScaleCheckReport report;
  report.exchanges_checked = before.total_exchanges;
  const auto original = by_mask(before);
  const auto transformed = by_mask(after);
  const PlayerId fixed = other(t.player());
  for (std::uint64_t mask = 0; mask < before.total_exchanges; ++mask) {
    const OutcomePoint& a = *original.at(mask);
    const OutcomePoint& b = *transformed.at(mask);
    std::string failure;
    if (acceptable(a) != acceptable(b)) {
      failure = "acceptability changed";
    } else if (b.u(t.player()) != a.u(t.player()) * t.factor()) {
      failure = "scaled marginal utility is not factor times the original";
    } else if (b.u(fixed) != a.u(fixed)) {
      failure = "the other player's marginal utility changed";
    }
    if (!failure.empty() && report.passed) {
      report.passed = false;
      report.counterexample = mask;
      report.failure = failure;
    }
  }
  report.argmax_original = nash_argmax_exchanges(before);
  report.argmax_scaled = nash_argmax_exchanges(after);
  if (report.passed && report.argmax_original != report.argmax_scaled) {
    report.passed = false;
    report.failure = "Nash argmax exchange set changed";
  }
  return report;
}

Rational translated_margin(const Instance& inst, const Exchange& ex, PlayerId player, const Rational& b) {
  const Instance shifted = apply_translation(inst, {player, b});
  return marginal_utilities(shifted, ex).u(player);
}

FlipReport check_translation_flip(const Instance& inst, const Exchange& ex, PlayerId player) {
  const OutcomePoint pt = marginal_utilities(inst, ex);
  FlipReport report;
  report.player = player;
  report.margin = pt.u(player);
  if (report.margin.sign() <= 0) {
    throw std::invalid_argument("exchange is not acceptable to " + std::string(to_string(player)) +
                                " (marginal utility " + report.margin.str() + ")");
  }
  const ItemMask received = player == PlayerId::X ? ex.give_y : ex.give_x;
  const ItemMask given = player == PlayerId::X ? ex.give_x : ex.give_y;
  report.received = static_cast<std::size_t>(std::popcount(received));
  report.given = static_cast<std::size_t>(std::popcount(given));
  if (report.received < report.given) {
    report.flip_possible = true;
    report.threshold = report.margin / Rational(static_cast<long long>(report.given - report.received));
  }
  return report;
}

std::optional<TranslationCounterexample> find_translation_counterexample(const Instance& inst,
                                                                         const EnumerationOptions& opts) {
  const PointCloud cloud = enumerate_cloud(inst, opts);
  std::optional<TranslationCounterexample> best;
  auto better = [](const TranslationCounterexample& a, const TranslationCounterexample& b) {
    if (a.threshold != b.threshold) return a.threshold < b.threshold;
    if (a.exchange.moved() != b.exchange.moved()) return a.exchange.moved() < b.exchange.moved();
    return a.player == PlayerId::X && b.player == PlayerId::Y;
  };
  for (const auto& cp : cloud.points) {
    if (!acceptable(cp.point)) continue;
    for (const auto& ex : cp.exchanges) {
      for (PlayerId player : {PlayerId::X, PlayerId::Y}) {
        const FlipReport flip = check_translation_flip(inst, ex, player);
        if (!flip.flip_possible) continue;
        TranslationCounterexample candidate{ex, player, *flip.threshold};
        if (!best || better(candidate, *best)) best = candidate;
      }
    }
  }
  return best;
}

ZeroItemReport zero_item_consistency(const Instance& inst, const ScaleTransform& scale,
                                     const TranslationTransform& translation) {
  if (scale.player() != translation.player) {
    throw std::invalid_argument("scale and translation must target the same player");
  }
  const PlayerId player = scale.player();
  const auto& items = inst.items();
  const auto zero = std::find_if(items.begin(), items.end(), [&](const Item& it) { return it.value_to(player).is_zero(); });
  if (zero == items.end()) {
    throw std::invalid_argument("no item is worth zero to " + std::string(to_string(player)));
  }
  const auto index = static_cast<std::size_t>(zero - items.begin());
  ZeroItemReport report;
  report.item = zero->name;
  report.scaled_value = apply_scale(inst, scale).items()[index].value_to(player);
  report.translated_value = apply_translation(inst, translation).items()[index].value_to(player);
  report.scale_consistent = report.scaled_value.is_zero();
  report.translation_consistent = report.translated_value.is_zero();
  return report;
}

}  // namespace barter
