#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barter/enumeration.hpp"

namespace barter {

/// Multiplies one player's utility function by a positive factor.
class ScaleTransform {
 public:
  /// Throws std::invalid_argument unless factor > 0.
  ScaleTransform(PlayerId player, Rational factor);
  PlayerId player() const { return player_; }
  const Rational& factor() const { return factor_; }

 private:
  PlayerId player_;
  Rational factor_;
};

/// Adds a constant (any sign) to one player's utility function.
struct TranslationTransform {
  PlayerId player = PlayerId::X;
  Rational offset;
};

/// Scales the player's valuation of every item, own and other's.
Instance apply_scale(const Instance& inst, const ScaleTransform& t);
/// With `strict`, throws InstanceError if any utility turns negative.
Instance apply_translation(const Instance& inst, const TranslationTransform& t, bool strict = false);

/// Positions of every element equal to the maximum.
std::vector<std::size_t> argmax_positions(std::span<const Rational> values);

/// Moved-item masks of every exchange attaining the maximal Nash product
/// over the periphery; empty when no trade is acceptable.
std::vector<ItemMask> nash_argmax_exchanges(const PointCloud& cloud);

struct ScaleCheckReport {
  bool passed = true;
  std::uint64_t exchanges_checked = 0;
  std::vector<ItemMask> argmax_original;
  std::vector<ItemMask> argmax_scaled;
  std::optional<ItemMask> counterexample;
  std::string failure;  // which property broke, empty when passed
};

/// Compares every exchange on the original and scaled instance: identical
/// acceptability, identical Nash argmax exchange set, and the scaled
/// player's marginal utility equal to factor times the original.
ScaleCheckReport check_scale_invariance(const Instance& inst, const ScaleTransform& t,
                                        const EnumerationOptions& opts = {});

struct FlipReport {
  PlayerId player = PlayerId::X;
  std::size_t received = 0;  // m
  std::size_t given = 0;     // n
  Rational margin;           // player's original marginal utility
  bool flip_possible = false;
  std::optional<Rational> threshold;  // b*; any b >= b* makes the player reject
};

/// Throws std::invalid_argument unless the exchange strictly benefits `player`.
FlipReport check_translation_flip(const Instance& inst, const Exchange& ex, PlayerId player);

/// `player`'s marginal utility of `ex` once their utilities are shifted by b.
Rational translated_margin(const Instance& inst, const Exchange& ex, PlayerId player, const Rational& b);

struct TranslationCounterexample {
  Exchange exchange;
  PlayerId player = PlayerId::X;
  Rational threshold;
};

/// Mutually acceptable exchange with the smallest flip threshold over both
/// players (ties: smaller moved mask, then X before Y), or none.
std::optional<TranslationCounterexample> find_translation_counterexample(const Instance& inst,
                                                                         const EnumerationOptions& opts = {});

struct ZeroItemReport {
  std::string item;
  Rational scaled_value;      // always 0
  Rational translated_value;  // the offset
  bool scale_consistent = false;
  bool translation_consistent = false;
};

/// Throws std::invalid_argument when the transforms target different players
/// or the player values no item at zero.
ZeroItemReport zero_item_consistency(const Instance& inst, const ScaleTransform& scale,
                                     const TranslationTransform& translation);

}  // namespace barter
