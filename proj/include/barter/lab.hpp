#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "barter/invariance.hpp"
#include "barter/notrade.hpp"
#include "barter/solvers.hpp"

namespace barter {

/// std::mt19937_64 seeded with the 64-bit seed. A bounded draw below n
/// rejects raw outputs x < (2^64 mod n) and returns x mod n, so sequences
/// are identical on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

enum class Condition { Unconstrained, IdenticalValuation, MutualDominance, InsufficientCompensation };

std::string_view to_string(Condition c);
Condition parse_condition(std::string_view name);

inline constexpr int kMaxGenerationAttempts = 10000;

/// Values are drawn from the grid lo, lo + 1/grid, ..., hi.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::size_t p = 3;
  std::size_t q = 3;
  Rational value_lo = 0;
  Rational value_hi = 10;
  std::uint64_t value_grid = 1;
  Condition condition = Condition::Unconstrained;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Items "x0".."x{p-1}" owned by X then "y0".."y{q-1}" owned by Y.
/// InsufficientCompensation is imposed for X. Throws GenerationError after
/// kMaxGenerationAttempts failed draws.
Instance generate(const GeneratorConfig& cfg);

/// Random factor num/den with num, den in [1, 20].
Rational random_factor(Rng& rng);

struct GreedyStep {
  std::size_t x_item;  // index of the item X hands over
  std::size_t y_item;
  Rational gain_x;
  Rational gain_y;
};

struct GreedyResult {
  OutcomePoint final_point;
  Exchange net_exchange;  // items that ended with the other player
  std::vector<GreedyStep> trace;
};

/// Repeats the mutually profitable one-for-one swap with the largest
/// product of per-step gains (ties: lowest X item, then lowest Y item)
/// until none is left.
GreedyResult greedy_one_for_one(const Instance& inst);

/// X and Y exchange roles: owners flip and the two valuations swap.
Instance swap_players(const Instance& inst);

struct AlgorithmStats {
  Algorithm algorithm = Algorithm::Nash;
  std::uint64_t no_trade = 0;
  std::uint64_t ties = 0;            // more than one chosen point
  std::uint64_t unique = 0;          // exactly one chosen point
  std::uint64_t scale_invariant = 0; // choice maps onto the rescaled choice
  std::uint64_t symmetric = 0;       // choice mirrors when players swap
};

struct ComparisonStats {
  static constexpr std::size_t kAlgorithms = std::size(kAllAlgorithms);
  static constexpr std::size_t kBins = 10;

  std::uint64_t instances_run = 0;
  std::array<std::array<std::uint64_t, kAlgorithms>, kAlgorithms> agreement{};
  std::array<AlgorithmStats, kAlgorithms> per_algorithm{};
  std::uint64_t median_nash_disagreements = 0;
  double collapse_ratio_sum = 0;
  std::array<std::uint64_t, kBins> collapse_histogram{};  // (k/10, (k+1)/10]
  std::uint64_t greedy_optimal = 0;      // greedy reaches the Nash product
  std::uint64_t greedy_stuck = 0;        // greedy at (0,0) while trade exists
  double greedy_gap_sum = 0;             // relative gap 1 - greedy/nash
  std::array<std::uint64_t, kBins> greedy_gap_histogram{};  // [k/10, (k+1)/10)

  double mean_collapse_ratio() const { return instances_run ? collapse_ratio_sum / static_cast<double>(instances_run) : 0; }
  /// Instances with a trade, where the gap is defined.
  std::uint64_t traded_instances() const;
  void merge(const ComparisonStats& other);
};

/// Instance `i` is generated with seed cfg.seed + i. Results do not depend
/// on `workers`.
ComparisonStats compare_algorithms(const GeneratorConfig& cfg, std::uint64_t runs, unsigned workers = 1,
                                   const EnumerationOptions& opts = {});

/// Statistics for a single, already built instance.
ComparisonStats compare_on_instance(const Instance& inst, std::uint64_t seed, const EnumerationOptions& opts = {});

struct ProbeRow {
  PlayerId player = PlayerId::X;
  Rational factor;
  std::vector<ItemMask> median_exchanges;
  std::vector<ItemMask> nash_exchanges;
  bool stable = false;  // both choices unchanged and still distinct
};

struct ProbeReport {
  bool passed = true;
  std::vector<ItemMask> median_exchanges;
  std::vector<ItemMask> nash_exchanges;
  std::vector<ProbeRow> rows;
};

/// Throws std::invalid_argument if the periphery is empty or the median
/// and Nash choices coincide on the original instance.
ProbeReport median_dislike_scale_probe(const Instance& inst, const std::vector<Rational>& factors,
                                       const EnumerationOptions& opts = {});

/// Exchanges behind a report's choice: the achieving exchanges, or both
/// supports of a lottery. Sorted moved masks.
std::vector<ItemMask> choice_exchanges(const SolutionReport& report);

}  // namespace barter
