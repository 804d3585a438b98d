#pragma once

#include <string>

#include "json.hpp"

#include "barter/invariance.hpp"
#include "barter/lab.hpp"
#include "barter/notrade.hpp"
#include "barter/solvers.hpp"

namespace barter {

using Json = nlohmann::ordered_json;

/// Exact values are emitted as "num/den" strings; floating values as numbers.
Json to_json(const Rational& r);
Json to_json(const OutcomePoint& pt);
Json to_json(const Instance& inst, const Exchange& ex);

/// {"algorithm", "chosen", "exchanges", "objective", "is_lottery",
///  "tie_count", "headline", "no_trade", "lottery"}
Json to_json(const Instance& inst, const SolutionReport& report);
Json to_json(const NoTradeCertificate& cert);
Json to_json(const Instance& inst, const ScaleCheckReport& report);
Json to_json(const Instance& inst, const FlipReport& report);
Json to_json(const Instance& inst, const TranslationCounterexample& cx);
Json to_json(const ComparisonStats& stats);
Json to_json(const Instance& inst, const ProbeReport& report);
Json to_json(const Instance& inst, const GreedyResult& result);

/// Square agreement matrix with a header row of algorithm names.
std::string agreement_csv(const ComparisonStats& stats);

/// Rational rendering for humans: "num/den", or 6-digit fixed decimals.
std::string render(const Rational& r, bool decimal);

}  // namespace barter
