#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "barter/model.hpp"

namespace barter {

inline constexpr std::size_t kDefaultEnumerationLimit = 20;

struct EnumerationOptions {
  std::size_t limit = kDefaultEnumerationLimit;  // max p + q without force
  bool force = false;
  unsigned workers = 1;
};

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws LimitExceeded naming 2^(p+q) when the instance is too large.
void check_enumeration_limit(const Instance& inst, const EnumerationOptions& opts);

/// A distinct outcome point and every exchange that lands on it, in
/// increasing moved-mask order.
struct CloudPoint {
  OutcomePoint point;
  std::vector<Exchange> exchanges;

  friend bool operator==(const CloudPoint&, const CloudPoint&) = default;
};

struct PointCloud {
  std::vector<CloudPoint> points;  // sorted by (u_x, u_y)
  std::uint64_t total_exchanges = 0;

  /// Synthetic cloud from raw points (no exchanges attached). Duplicates
  /// are merged; each raw point counts as one exchange.
  static PointCloud from_points(const std::vector<OutcomePoint>& raw);

  const CloudPoint* find(const OutcomePoint& pt) const;
  friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

/// All 2^(p+q) exchanges, merged by exact coordinates. The result does not
/// depend on opts.workers.
PointCloud enumerate_cloud(const Instance& inst, const EnumerationOptions& opts = {});

/// Associative, commutative union of two partial clouds.
PointCloud merge_clouds(const PointCloud& a, const PointCloud& b);

/// Distinct points over total exchanges.
Rational collapse_ratio(const PointCloud& cloud);

/// Acceptable, nondominated points in increasing u_x order, plus the axis
/// anchors (r, 0) with maximal r > 0 and (0, s) with maximal s > 0 when the
/// cloud has them, and the cloud's extent on each axis.
struct Periphery {
  std::vector<CloudPoint> points;
  std::optional<CloudPoint> x_anchor;  // (r, 0)
  std::optional<CloudPoint> y_anchor;  // (0, s)
  Rational extent_x;                   // max |u_x| over the cloud
  Rational extent_y;                   // max |u_y| over the cloud

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  bool contains(const OutcomePoint& pt) const;
};

Periphery periphery(const PointCloud& cloud);

/// True when `other` weakly dominates `pt` with at least one strict coordinate.
bool dominates(const OutcomePoint& other, const OutcomePoint& pt);

/// Anchors not dominated by a periphery point, framing the periphery:
/// (0, s) first, then the periphery in u_x order, then (r, 0).
std::vector<CloudPoint> frontier_with_anchors(const Periphery& per);

struct LotteryHull {
  std::vector<CloudPoint> vertices;  // increasing u_x, strictly decreasing slopes

  bool empty() const { return vertices.empty(); }
  /// Height of the upper envelope at u_x = x, or nullopt outside its range.
  std::optional<Rational> height_at(const Rational& x) const;
};

/// Upper-right convex hull over the periphery and, when `with_anchors`,
/// its axis anchors. Collinear interior points are dropped as vertices.
LotteryHull lottery_hull(const Periphery& per, bool with_anchors = true);

/// "u_x,u_y,count,acceptable,on_periphery". Without `points_only` there is
/// one row per exchange (count 1); with it one row per distinct point.
std::string cloud_csv(const PointCloud& cloud, const Periphery& per, bool points_only);

}  // namespace barter
