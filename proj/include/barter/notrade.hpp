#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "barter/enumeration.hpp"

namespace barter {

enum class NoTradeKind {
  None,
  IdenticalValuation,
  MutualDominance,
  InsufficientCompensationX,
  InsufficientCompensationY,
};

std::string_view to_string(NoTradeKind k);

struct ItemComparison {
  std::string item;
  Rational owner_value;
  Rational other_value;
};

/// Every item valued the same by both players (vacuous when empty).
struct IdenticalValuation {
  std::vector<ItemComparison> items;
};

/// Every item valued strictly more by its owner.
struct MutualDominance {
  std::vector<ItemComparison> items;
};

/// What `player` assigns to everything the other owns, against the
/// cheapest item they own themselves.
struct CompensationCheck {
  PlayerId player = PlayerId::X;
  bool applicable = false;  // player owns at least one item
  bool holds = false;       // other_sum < own_min
  Rational other_sum;
  Rational own_min;
  std::string cheapest_item;
};

std::optional<IdenticalValuation> detect_identical_valuation(const Instance& inst);
std::optional<MutualDominance> detect_mutual_dominance(const Instance& inst);
CompensationCheck check_insufficient_compensation(const Instance& inst, PlayerId player);
/// The check when it holds; nullopt when it fails or is not applicable.
std::optional<CompensationCheck> detect_insufficient_compensation(const Instance& inst, PlayerId player);

struct NoTradeCertificate {
  NoTradeKind kind = NoTradeKind::None;
  std::vector<NoTradeKind> firing;  // in detector order
  std::optional<IdenticalValuation> identical;
  std::optional<MutualDominance> dominance;
  CompensationCheck compensation_x;
  CompensationCheck compensation_y;
  bool brute_force_verified = false;
  std::uint64_t exchanges_checked = 0;
  std::size_t acceptable_exchanges = 0;
};

class CertificateMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Runs the detectors in order (identical valuation, mutual dominance,
/// insufficient compensation for X then Y). Within the enumeration limit
/// the verdict is cross-checked against brute force; a detector firing on
/// an instance that has an acceptable exchange throws CertificateMismatch.
NoTradeCertificate certify_no_trade(const Instance& inst, const EnumerationOptions& opts = {});

}  // namespace barter
