#include "barter/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

namespace barter {

namespace {

// Hard ceiling regardless of force: the cloud is materialized in memory.
constexpr std::size_t kMaterializeCeiling = 32;

struct IntEntry {
  std::int64_t x;
  std::int64_t y;
  ItemMask moved;
  auto key() const { return std::tie(x, y, moved); }
};

struct ExactEntry {
  Rational x;
  Rational y;
  ItemMask moved;
};

// Runs fn(begin, end) over [0, total) split into contiguous chunks.
template <typename Fn>
void parallel_ranges(std::uint64_t total, unsigned workers, Fn fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || total < 1024) {
    fn(std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(total, chunk * w);
    const std::uint64_t end = std::min(total, begin + chunk);
    if (begin == end) break;
    pool.emplace_back([=] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

// Per-item signed contribution to (u_x, u_y) when the item moves.
struct ItemDelta {
  Rational dx;
  Rational dy;
};

std::vector<ItemDelta> item_deltas(const Instance& inst) {
  std::vector<ItemDelta> deltas;
  deltas.reserve(inst.size());
  for (const Item& item : inst.items()) {
    if (item.owner == PlayerId::X) {
      deltas.push_back({-item.value_to_x, item.value_to_y});
    } else {
      deltas.push_back({item.value_to_x, -item.value_to_y});
    }
  }
  return deltas;
}

mpz_class common_denominator(const std::vector<ItemDelta>& deltas, bool x_axis) {
  mpz_class lcm = 1;
  for (const auto& d : deltas) {
    const Rational& v = x_axis ? d.dx : d.dy;
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.denominator().get_mpz_t());
  }
  return lcm;
}

// Scaled integer numerators, or empty when any partial sum could leave int64.
std::optional<std::vector<std::int64_t>> scaled(const std::vector<ItemDelta>& deltas, bool x_axis,
                                                const mpz_class& den) {
  std::vector<std::int64_t> out;
  mpz_class total_abs = 0;
  for (const auto& d : deltas) {
    const Rational& v = x_axis ? d.dx : d.dy;
    const mpz_class n = v.numerator() * (den / v.denominator());
    total_abs += abs(n);
    if (!n.fits_slong_p()) return std::nullopt;
    out.push_back(n.get_si());
  }
  if (total_abs > mpz_class(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
  return out;
}

void append_group(std::vector<CloudPoint>& out, OutcomePoint pt, std::vector<Exchange> exchanges) {
  out.push_back({std::move(pt), std::move(exchanges)});
}

PointCloud integer_cloud(const Instance& inst, const std::vector<std::int64_t>& nx,
                         const std::vector<std::int64_t>& ny, const mpz_class& dx,
                         const mpz_class& dy, unsigned workers) {
  const std::size_t n = inst.size();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<IntEntry> entries(total);
  parallel_ranges(total, workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      std::int64_t sx = 0;
      std::int64_t sy = 0;
      for (ItemMask m = mask; m != 0; m &= m - 1) {
        const auto i = static_cast<std::size_t>(std::countr_zero(m));
        sx += nx[i];
        sy += ny[i];
      }
      entries[mask] = {sx, sy, mask};
    }
  });
  std::sort(entries.begin(), entries.end(),
            [](const IntEntry& a, const IntEntry& b) { return a.key() < b.key(); });

  PointCloud cloud;
  cloud.total_exchanges = total;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    std::vector<Exchange> group;
    while (j < entries.size() && entries[j].x == entries[i].x && entries[j].y == entries[i].y) {
      group.push_back(Exchange::from_moved(inst, entries[j].moved));
      ++j;
    }
    OutcomePoint pt{Rational(mpq_class(mpz_class(static_cast<long>(entries[i].x)), dx)),
                    Rational(mpq_class(mpz_class(static_cast<long>(entries[i].y)), dy))};
    append_group(cloud.points, std::move(pt), std::move(group));
    i = j;
  }
  return cloud;
}

PointCloud exact_cloud(const Instance& inst, const std::vector<ItemDelta>& deltas, unsigned workers) {
  const std::uint64_t total = std::uint64_t{1} << inst.size();
  std::vector<ExactEntry> entries(total);
  parallel_ranges(total, workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      ExactEntry e{0, 0, mask};
      for (ItemMask m = mask; m != 0; m &= m - 1) {
        const auto i = static_cast<std::size_t>(std::countr_zero(m));
        e.x += deltas[i].dx;
        e.y += deltas[i].dy;
      }
      entries[mask] = std::move(e);
    }
  });
  std::sort(entries.begin(), entries.end(), [](const ExactEntry& a, const ExactEntry& b) {
    return std::tie(a.x, a.y, a.moved) < std::tie(b.x, b.y, b.moved);
  });
  PointCloud cloud;
  cloud.total_exchanges = total;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    std::vector<Exchange> group;
    while (j < entries.size() && entries[j].x == entries[i].x && entries[j].y == entries[i].y) {
      group.push_back(Exchange::from_moved(inst, entries[j].moved));
      ++j;
    }
    append_group(cloud.points, OutcomePoint{entries[i].x, entries[i].y}, std::move(group));
    i = j;
  }
  return cloud;
}

}  // namespace

void check_enumeration_limit(const Instance& inst, const EnumerationOptions& opts) {
  const std::size_t n = inst.size();
  const std::string count = "2^" + std::to_string(n) +
                            (n < 63 ? " = " + std::to_string(std::uint64_t{1} << n) : std::string());
  if (n > opts.limit && !opts.force) {
    throw LimitExceeded("instance has " + std::to_string(n) + " items (" + count +
                        " exchanges), above the enumeration limit of " +
                        std::to_string(opts.limit) + " items; pass --force to enumerate anyway");
  }
  if (n > kMaterializeCeiling) {
    throw LimitExceeded("instance has " + std::to_string(n) + " items (" + count +
                        " exchanges); clouds above 2^" + std::to_string(kMaterializeCeiling) +
                        " exchanges are not supported");
  }
}

PointCloud PointCloud::from_points(const std::vector<OutcomePoint>& raw) {
  std::vector<OutcomePoint> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  PointCloud cloud;
  cloud.total_exchanges = raw.size();
  for (const auto& pt : sorted) {
    if (cloud.points.empty() || cloud.points.back().point != pt) cloud.points.push_back({pt, {}});
  }
  return cloud;
}

const CloudPoint* PointCloud::find(const OutcomePoint& pt) const {
  auto it = std::lower_bound(points.begin(), points.end(), pt,
                             [](const CloudPoint& cp, const OutcomePoint& key) { return cp.point < key; });
  return it != points.end() && it->point == pt ? &*it : nullptr;
}

PointCloud enumerate_cloud(const Instance& inst, const EnumerationOptions& opts) {
  check_enumeration_limit(inst, opts);
  const auto deltas = item_deltas(inst);
  const mpz_class dx = common_denominator(deltas, true);
  const mpz_class dy = common_denominator(deltas, false);
  const auto nx = scaled(deltas, true, dx);
  const auto ny = scaled(deltas, false, dy);
  if (nx && ny) return integer_cloud(inst, *nx, *ny, dx, dy, opts.workers);
  return exact_cloud(inst, deltas, opts.workers);
}

PointCloud merge_clouds(const PointCloud& a, const PointCloud& b) {
  PointCloud out;
  out.total_exchanges = a.total_exchanges + b.total_exchanges;
  auto ia = a.points.begin();
  auto ib = b.points.begin();
  while (ia != a.points.end() || ib != b.points.end()) {
    if (ib == b.points.end() || (ia != a.points.end() && ia->point < ib->point)) {
      out.points.push_back(*ia++);
    } else if (ia == a.points.end() || ib->point < ia->point) {
      out.points.push_back(*ib++);
    } else {
      CloudPoint merged{ia->point, {}};
      std::set_union(ia->exchanges.begin(), ia->exchanges.end(), ib->exchanges.begin(),
                     ib->exchanges.end(), std::back_inserter(merged.exchanges));
      out.points.push_back(std::move(merged));
      ++ia;
      ++ib;
    }
  }
  return out;
}

Rational collapse_ratio(const PointCloud& cloud) {
  if (cloud.total_exchanges == 0) throw std::invalid_argument("collapse ratio of an empty cloud");
  return Rational(mpq_class(mpz_class(static_cast<unsigned long>(cloud.points.size())),
                            mpz_class(static_cast<unsigned long>(cloud.total_exchanges))));
}

bool dominates(const OutcomePoint& other, const OutcomePoint& pt) {
  return other.u_x >= pt.u_x && other.u_y >= pt.u_y && (other.u_x > pt.u_x || other.u_y > pt.u_y);
}

bool Periphery::contains(const OutcomePoint& pt) const {
  return std::any_of(points.begin(), points.end(), [&](const CloudPoint& cp) { return cp.point == pt; });
}

Periphery periphery(const PointCloud& cloud) {
  Periphery per;
  std::vector<const CloudPoint*> candidates;
  for (const auto& cp : cloud.points) {
    const int sx = cp.point.u_x.sign();
    const int sy = cp.point.u_y.sign();
    if (abs(cp.point.u_x) > per.extent_x) per.extent_x = abs(cp.point.u_x);
    if (abs(cp.point.u_y) > per.extent_y) per.extent_y = abs(cp.point.u_y);
    if (sx > 0 && sy > 0) {
      candidates.push_back(&cp);
    } else if (sx > 0 && sy == 0) {
      if (!per.x_anchor || cp.point.u_x > per.x_anchor->point.u_x) per.x_anchor = cp;
    } else if (sx == 0 && sy > 0) {
      if (!per.y_anchor || cp.point.u_y > per.y_anchor->point.u_y) per.y_anchor = cp;
    }
  }
  // cloud order is (u_x, u_y) ascending; sweep from the right keeping
  // points that beat every u_y seen at greater or equal u_x
  std::optional<Rational> best_y;
  std::vector<CloudPoint> kept;
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    const CloudPoint& cp = **it;
    if (!kept.empty() && kept.back().point.u_x == cp.point.u_x) continue;
    if (!best_y || cp.point.u_y > *best_y) {
      best_y = cp.point.u_y;
      kept.push_back(cp);
    }
  }
  std::reverse(kept.begin(), kept.end());
  per.points = std::move(kept);
  return per;
}

namespace {

// > 0 for a left turn o -> a -> b.
Rational cross(const OutcomePoint& o, const OutcomePoint& a, const OutcomePoint& b) {
  return (a.u_x - o.u_x) * (b.u_y - o.u_y) - (a.u_y - o.u_y) * (b.u_x - o.u_x);
}

}  // namespace

std::vector<CloudPoint> frontier_with_anchors(const Periphery& per) {
  auto on_frontier = [&](const CloudPoint& anchor) {
    return std::none_of(per.points.begin(), per.points.end(),
                        [&](const CloudPoint& cp) { return dominates(cp.point, anchor.point); });
  };
  std::vector<CloudPoint> out;
  if (per.y_anchor && on_frontier(*per.y_anchor)) out.push_back(*per.y_anchor);
  out.insert(out.end(), per.points.begin(), per.points.end());
  if (per.x_anchor && on_frontier(*per.x_anchor)) out.push_back(*per.x_anchor);
  return out;
}

LotteryHull lottery_hull(const Periphery& per, bool with_anchors) {
  // already strictly increasing in u_x
  std::vector<CloudPoint> pts = with_anchors ? frontier_with_anchors(per) : per.points;

  LotteryHull hull;
  for (auto& cp : pts) {
    while (hull.vertices.size() >= 2 &&
           cross(hull.vertices[hull.vertices.size() - 2].point, hull.vertices.back().point, cp.point).sign() >= 0) {
      hull.vertices.pop_back();
    }
    hull.vertices.push_back(std::move(cp));
  }
  return hull;
}

std::optional<Rational> LotteryHull::height_at(const Rational& x) const {
  if (vertices.empty()) return std::nullopt;
  if (x < vertices.front().point.u_x || x > vertices.back().point.u_x) return std::nullopt;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& a = vertices[i].point;
    const auto& b = vertices[i + 1].point;
    if (x >= a.u_x && x <= b.u_x) {
      return a.u_y + (b.u_y - a.u_y) * (x - a.u_x) / (b.u_x - a.u_x);
    }
  }
  return vertices.front().point.u_y;
}

std::string cloud_csv(const PointCloud& cloud, const Periphery& per, bool points_only) {
  std::ostringstream out;
  out << "u_x,u_y,count,acceptable,on_periphery\n";
  for (const auto& cp : cloud.points) {
    const std::string flags = std::string(acceptable(cp.point) ? "true" : "false") + "," +
                              (per.contains(cp.point) ? "true" : "false");
    const std::string coords = cp.point.u_x.str() + "," + cp.point.u_y.str();
    if (points_only || cp.exchanges.empty()) {
      out << coords << "," << std::max<std::size_t>(cp.exchanges.size(), 1) << "," << flags << "\n";
    } else {
      for (std::size_t k = 0; k < cp.exchanges.size(); ++k) out << coords << ",1," << flags << "\n";
    }
  }
  return out.str();
}

}  // namespace barter
