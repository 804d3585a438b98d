#include "barter/notrade.hpp"

#include <algorithm>

namespace barter {

std::string_view to_string(NoTradeKind k) {
  switch (k) {
    case NoTradeKind::None: return "none";
    case NoTradeKind::IdenticalValuation: return "identical-valuation";
    case NoTradeKind::MutualDominance: return "mutual-dominance";
    case NoTradeKind::InsufficientCompensationX: return "insufficient-compensation-X";
    case NoTradeKind::InsufficientCompensationY: return "insufficient-compensation-Y";
  }
  return "unknown";
}

namespace {

ItemComparison compare(const Item& item) {
  return {item.name, item.value_to(item.owner), item.value_to(other(item.owner))};
}

}  // namespace

std::optional<IdenticalValuation> detect_identical_valuation(const Instance& inst) {
  IdenticalValuation witness;
  for (const Item& item : inst.items()) {
    if (item.value_to_x != item.value_to_y) return std::nullopt;
    witness.items.push_back(compare(item));
  }
  return witness;
}

std::optional<MutualDominance> detect_mutual_dominance(const Instance& inst) {
  MutualDominance witness;
  for (const Item& item : inst.items()) {
    ItemComparison c = compare(item);
    if (!(c.owner_value > c.other_value)) return std::nullopt;
    witness.items.push_back(std::move(c));
  }
  return witness;
}

CompensationCheck check_insufficient_compensation(const Instance& inst, PlayerId player) {
  CompensationCheck check;
  check.player = player;
  std::optional<Rational> own_min;
  for (const Item& item : inst.items()) {
    const Rational& v = item.value_to(player);
    if (item.owner == player) {
      if (!own_min || v < *own_min) {
        own_min = v;
        check.cheapest_item = item.name;
      }
    } else {
      check.other_sum += v;
    }
  }
  if (!own_min) return check;
  check.applicable = true;
  check.own_min = *own_min;
  check.holds = check.other_sum < check.own_min;
  return check;
}

std::optional<CompensationCheck> detect_insufficient_compensation(const Instance& inst, PlayerId player) {
  CompensationCheck check = check_insufficient_compensation(inst, player);
  if (!check.holds) return std::nullopt;
  return check;
}

NoTradeCertificate certify_no_trade(const Instance& inst, const EnumerationOptions& opts) {
  NoTradeCertificate cert;
  cert.identical = detect_identical_valuation(inst);
  cert.dominance = detect_mutual_dominance(inst);
  cert.compensation_x = check_insufficient_compensation(inst, PlayerId::X);
  cert.compensation_y = check_insufficient_compensation(inst, PlayerId::Y);
  if (cert.identical) cert.firing.push_back(NoTradeKind::IdenticalValuation);
  if (cert.dominance) cert.firing.push_back(NoTradeKind::MutualDominance);
  if (cert.compensation_x.holds) cert.firing.push_back(NoTradeKind::InsufficientCompensationX);
  if (cert.compensation_y.holds) cert.firing.push_back(NoTradeKind::InsufficientCompensationY);
  if (!cert.firing.empty()) cert.kind = cert.firing.front();

  if (inst.size() > opts.limit && !opts.force) return cert;
  const PointCloud cloud = enumerate_cloud(inst, opts);
  cert.exchanges_checked = cloud.total_exchanges;
  for (const auto& cp : cloud.points) {
    if (acceptable(cp.point)) cert.acceptable_exchanges += cp.exchanges.size();
  }
  if (cert.kind != NoTradeKind::None && cert.acceptable_exchanges != 0) {
    throw CertificateMismatch(std::string(to_string(cert.kind)) + " certificate fired but brute force found " +
                              std::to_string(cert.acceptable_exchanges) + " acceptable exchanges");
  }
  cert.brute_force_verified = true;
  return cert;
}

}  // namespace barter
