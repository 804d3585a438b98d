#include "barter/report.hpp"

#include <sstream>

namespace barter {

namespace {

Json objective_json(const Objective& o) {
  return std::visit([](const auto& v) -> Json {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Rational>) {
      return to_json(v);
    } else {
      return v;
    }
  }, o);
}

Json exchanges_json(const Instance& inst, const std::vector<Exchange>& exchanges) {
  Json arr = Json::array();
  for (const auto& ex : exchanges) arr.push_back(to_json(inst, ex));
  return arr;
}

Json chosen_json(const ChosenPoint& c) {
  if (c.exact) return to_json(*c.exact);
  Json j;
  j["u_x"] = c.u_x;
  j["u_y"] = c.u_y;
  return j;
}

Json masks_json(const Instance& inst, const std::vector<ItemMask>& masks) {
  Json arr = Json::array();
  for (ItemMask m : masks) arr.push_back(to_json(inst, Exchange::from_moved(inst, m)));
  return arr;
}

Json comparisons_json(const std::vector<ItemComparison>& items) {
  Json arr = Json::array();
  for (const auto& c : items) {
    Json j;
    j["item"] = c.item;
    j["owner_value"] = to_json(c.owner_value);
    j["other_value"] = to_json(c.other_value);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json compensation_json(const CompensationCheck& c) {
  Json j;
  j["player"] = std::string(to_string(c.player));
  j["applicable"] = c.applicable;
  j["holds"] = c.holds;
  j["other_sum"] = to_json(c.other_sum);
  if (c.applicable) {
    j["own_min"] = to_json(c.own_min);
    j["cheapest_item"] = c.cheapest_item;
  }
  return j;
}

}  // namespace

std::string render(const Rational& r, bool decimal) { return decimal ? r.decimal(6) : r.str(); }

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const OutcomePoint& pt) {
  Json j;
  j["u_x"] = to_json(pt.u_x);
  j["u_y"] = to_json(pt.u_y);
  return j;
}

Json to_json(const Instance& inst, const Exchange& ex) {
  Json j;
  j["x_gives"] = item_names(inst, ex.give_x);
  j["y_gives"] = item_names(inst, ex.give_y);
  return j;
}

Json to_json(const Instance& inst, const SolutionReport& report) {
  Json j;
  j["algorithm"] = std::string(to_string(report.algorithm));
  j["no_trade"] = report.no_trade;
  Json chosen = Json::array();
  Json exchanges = Json::array();
  Json lotteries = Json::array();
  for (const auto& c : report.chosen) {
    chosen.push_back(chosen_json(c));
    exchanges.push_back(exchanges_json(inst, c.exchanges));
    if (c.lottery) {
      Json l;
      l["first"] = to_json(c.lottery->first.point);
      l["first_exchanges"] = exchanges_json(inst, c.lottery->first.exchanges);
      l["second"] = to_json(c.lottery->second.point);
      l["second_exchanges"] = exchanges_json(inst, c.lottery->second.exchanges);
      l["probability_second"] = objective_json(c.lottery->weight);
      lotteries.push_back(std::move(l));
    }
  }
  j["chosen"] = std::move(chosen);
  j["exchanges"] = std::move(exchanges);
  j["objective"] = report.objective ? objective_json(*report.objective) : Json(nullptr);
  j["is_lottery"] = report.is_lottery;
  j["tie_count"] = report.tie_count();
  j["headline"] = report.chosen.empty() ? Json(nullptr) : chosen_json(report.headline());
  if (!lotteries.empty()) j["lottery"] = std::move(lotteries);
  return j;
}

Json to_json(const NoTradeCertificate& cert) {
  Json j;
  j["kind"] = std::string(to_string(cert.kind));
  Json witness;
  Json firing = Json::array();
  for (auto k : cert.firing) firing.push_back(std::string(to_string(k)));
  witness["firing"] = std::move(firing);
  if (cert.identical) witness["identical_valuation"] = comparisons_json(cert.identical->items);
  if (cert.dominance) witness["mutual_dominance"] = comparisons_json(cert.dominance->items);
  witness["compensation_x"] = compensation_json(cert.compensation_x);
  witness["compensation_y"] = compensation_json(cert.compensation_y);
  j["witness"] = std::move(witness);
  j["brute_force_verified"] = cert.brute_force_verified;
  j["exchanges_checked"] = cert.exchanges_checked;
  j["acceptable_exchanges"] = cert.acceptable_exchanges;
  return j;
}

Json to_json(const Instance& inst, const ScaleCheckReport& report) {
  Json j;
  j["passed"] = report.passed;
  j["exchanges_checked"] = report.exchanges_checked;
  j["argmax_original"] = masks_json(inst, report.argmax_original);
  j["argmax_scaled"] = masks_json(inst, report.argmax_scaled);
  j["counterexample"] =
      report.counterexample ? to_json(inst, Exchange::from_moved(inst, *report.counterexample)) : Json(nullptr);
  j["failure"] = report.failure.empty() ? Json(nullptr) : Json(report.failure);
  return j;
}

Json to_json(const Instance&, const FlipReport& report) {
  Json j;
  j["player"] = std::string(to_string(report.player));
  j["received"] = report.received;
  j["given"] = report.given;
  j["margin"] = to_json(report.margin);
  j["flip_possible"] = report.flip_possible;
  j["threshold"] = report.threshold ? to_json(*report.threshold) : Json(nullptr);
  return j;
}

Json to_json(const Instance& inst, const TranslationCounterexample& cx) {
  Json j;
  j["exchange"] = to_json(inst, cx.exchange);
  j["player"] = std::string(to_string(cx.player));
  j["threshold"] = to_json(cx.threshold);
  return j;
}

Json to_json(const ComparisonStats& stats) {
  Json j;
  j["instances_run"] = stats.instances_run;
  Json names = Json::array();
  for (Algorithm a : kAllAlgorithms) names.push_back(std::string(to_string(a)));
  j["algorithms"] = names;
  Json matrix = Json::array();
  for (const auto& row : stats.agreement) matrix.push_back(Json(row));
  j["agreement"] = std::move(matrix);
  Json per = Json::array();
  for (const auto& a : stats.per_algorithm) {
    Json s;
    s["algorithm"] = std::string(to_string(a.algorithm));
    s["no_trade"] = a.no_trade;
    s["ties"] = a.ties;
    s["unique"] = a.unique;
    s["scale_invariant"] = a.scale_invariant;
    s["symmetric"] = a.symmetric;
    per.push_back(std::move(s));
  }
  j["per_algorithm"] = std::move(per);
  j["median_nash_disagreements"] = stats.median_nash_disagreements;
  j["mean_collapse_ratio"] = stats.mean_collapse_ratio();
  j["collapse_histogram"] = stats.collapse_histogram;
  const auto traded = stats.traded_instances();
  j["traded_instances"] = traded;
  j["greedy_optimal"] = stats.greedy_optimal;
  j["greedy_stuck"] = stats.greedy_stuck;
  j["mean_greedy_gap"] = traded ? stats.greedy_gap_sum / static_cast<double>(traded) : 0.0;
  j["greedy_gap_histogram"] = stats.greedy_gap_histogram;
  return j;
}

Json to_json(const Instance& inst, const ProbeReport& report) {
  Json j;
  j["passed"] = report.passed;
  j["median_exchanges"] = masks_json(inst, report.median_exchanges);
  j["nash_exchanges"] = masks_json(inst, report.nash_exchanges);
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["player"] = std::string(to_string(r.player));
    row["factor"] = to_json(r.factor);
    row["stable"] = r.stable;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const Instance& inst, const GreedyResult& result) {
  Json j;
  j["final"] = to_json(result.final_point);
  j["net_exchange"] = to_json(inst, result.net_exchange);
  Json steps = Json::array();
  for (const auto& s : result.trace) {
    Json step;
    step["x_gives"] = inst.items()[s.x_item].name;
    step["y_gives"] = inst.items()[s.y_item].name;
    step["gain_x"] = to_json(s.gain_x);
    step["gain_y"] = to_json(s.gain_y);
    steps.push_back(std::move(step));
  }
  j["trace"] = std::move(steps);
  return j;
}

std::string agreement_csv(const ComparisonStats& stats) {
  std::ostringstream out;
  out << "algorithm";
  for (Algorithm a : kAllAlgorithms) out << "," << to_string(a);
  out << "\n";
  for (std::size_t i = 0; i < ComparisonStats::kAlgorithms; ++i) {
    out << to_string(kAllAlgorithms[i]);
    for (std::size_t k = 0; k < ComparisonStats::kAlgorithms; ++k) out << "," << stats.agreement[i][k];
    out << "\n";
  }
  return out.str();
}

}  // namespace barter
