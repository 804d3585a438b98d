#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "barter/rational.hpp"

namespace barter {

enum class PlayerId { X, Y };

inline PlayerId other(PlayerId p) { return p == PlayerId::X ? PlayerId::Y : PlayerId::X; }
std::string_view to_string(PlayerId p);
/// "X"/"Y" (case-insensitive). Throws std::invalid_argument otherwise.
PlayerId parse_player(std::string_view text);

struct Item {
  std::string name;
  PlayerId owner = PlayerId::X;
  Rational value_to_x;
  Rational value_to_y;

  const Rational& value_to(PlayerId p) const {
    return p == PlayerId::X ? value_to_x : value_to_y;
  }

  friend bool operator==(const Item&, const Item&) = default;
};

/// Bit i of a mask refers to item i in instance (file) order.
using ItemMask = std::uint64_t;

/// Largest instance whose subsets fit the mask and count types.
inline constexpr std::size_t kMaxItems = 62;

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Instance {
 public:
  Instance() = default;
  /// Throws InstanceError on duplicate names, negative utilities or more
  /// than kMaxItems items. Negative values are admitted only when
  /// `allow_negative` is set (translated instances).
  explicit Instance(std::vector<Item> items, bool allow_negative = false);

  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t p() const { return p_; }
  std::size_t q() const { return q_; }
  ItemMask owned_by(PlayerId player) const {
    return player == PlayerId::X ? x_mask_ : y_mask_;
  }
  ItemMask all_items() const { return x_mask_ | y_mask_; }

  friend bool operator==(const Instance& a, const Instance& b) { return a.items_ == b.items_; }

 private:
  std::vector<Item> items_;
  std::size_t p_ = 0;
  std::size_t q_ = 0;
  ItemMask x_mask_ = 0;
  ItemMask y_mask_ = 0;
};

/// Items X hands to Y and items Y hands to X. Both empty is the null exchange.
struct Exchange {
  ItemMask give_x = 0;
  ItemMask give_y = 0;

  /// Splits a mask of moved items by current ownership.
  static Exchange from_moved(const Instance& inst, ItemMask moved) {
    return {moved & inst.owned_by(PlayerId::X), moved & inst.owned_by(PlayerId::Y)};
  }
  ItemMask moved() const { return give_x | give_y; }
  bool is_null() const { return give_x == 0 && give_y == 0; }

  friend bool operator==(const Exchange&, const Exchange&) = default;
  friend auto operator<=>(const Exchange& a, const Exchange& b) {
    return a.moved() <=> b.moved();
  }
};

struct OutcomePoint {
  Rational u_x;
  Rational u_y;

  const Rational& u(PlayerId p) const { return p == PlayerId::X ? u_x : u_y; }

  friend bool operator==(const OutcomePoint&, const OutcomePoint&) = default;
  friend auto operator<=>(const OutcomePoint&, const OutcomePoint&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the JSON instance format. Utility fields accept JSON numbers
/// (read from their literal text, never through a double) or strings
/// holding integers, decimals or "num/den". Throws ParseError.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);
/// Canonical JSON rendering; exact values as strings.
std::string serialize_instance(const Instance& inst);

/// Throws std::out_of_range if the exchange names an item the giver
/// does not own or that lies outside the instance.
void validate_exchange(const Instance& inst, const Exchange& ex);

OutcomePoint marginal_utilities(const Instance& inst, const Exchange& ex);

/// Strictly profitable to both players; axis points are excluded.
inline bool acceptable(const OutcomePoint& pt) { return pt.u_x.sign() > 0 && pt.u_y.sign() > 0; }

std::vector<std::string> item_names(const Instance& inst, ItemMask mask);
/// "X gives {radio, pen}, Y gives {bike}".
std::string describe(const Instance& inst, const Exchange& ex);

}  // namespace barter
