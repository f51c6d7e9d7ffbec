#pragma once

// Strategy enumeration over small shapes, benchmark environments, and the
// search comparing the best general process-function strategy with the best
// statically ordered one.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopf/core.hpp"
#include "hopf/verify.hpp"

namespace hopf {

struct PartyShape {
  std::size_t actions = 1;
  std::size_t observations = 1;
  bool operator==(const PartyShape&) const = default;
};

/// Strategy space: w : M x Omega_1 x ... x Omega_n -> M x A_1 x ... x A_n.
struct StrategyShape {
  std::size_t memory = 1;
  std::vector<PartyShape> parties;

  static StrategyShape for_environment(const DecPomdp& pomdp, std::size_t memory);

  /// Rows of a strategy table: |M| * prod |Omega_i|.
  std::uint64_t rows() const;
  /// Distinct row values: |M| * prod |A_i|.
  std::uint64_t row_values() const;
  /// row_values()^rows(), saturating at 2^64 - 1.
  std::uint64_t candidate_count() const;

  void validate() const;
  bool operator==(const StrategyShape&) const = default;
};

/// Streams the valid one-input process functions with P = F = M, built
/// directly from (w_F, w_I) pairs in lexicographic table order.
class Pf1Enumerator {
 public:
  Pf1Enumerator(std::size_t memory, std::size_t observations, std::size_t actions,
                std::uint64_t budget = default_budget());

  /// |M|^(|M||Omega|) * |A|^|M|.
  std::uint64_t count() const { return count_; }
  std::optional<ProcessFunction1> next();

 private:
  std::size_t memory_, observations_, actions_;
  std::uint64_t count_;
  // Digits per memory value: w_F(m, 0), w_I(m), w_F(m, 1), ..., w_F(m, |Omega|-1).
  std::vector<Index> digits_;
  std::vector<std::size_t> radix_;
  bool done_ = false;
};

std::vector<ProcessFunction1> enumerate_pf_1(std::size_t memory, std::size_t observations,
                                             std::size_t actions,
                                             std::uint64_t budget = default_budget());

struct EnumerateOptions {
  std::uint64_t budget = default_budget();
  std::uint64_t seed = 0;
  unsigned threads = 0;
  /// Sampling mode: tables drawn when the candidate count exceeds the budget.
  std::uint64_t samples = 100'000;
  bool allow_sampling = true;
};

/// The valid strategies of a shape, stored compactly as row-value sequences
/// in lexicographic order.
class StrategyCatalog {
 public:
  StrategyCatalog(StrategyShape shape, std::vector<Index> row_values, std::uint64_t examined,
                  bool sampled);

  const StrategyShape& shape() const { return shape_; }
  std::size_t size() const { return rows_ == 0 ? 0 : values_.size() / rows_; }
  std::span<const Index> row_values(std::size_t k) const {
    return {values_.data() + k * rows_, rows_};
  }
  /// Materialized strategy, status valid.
  ProcessFunctionN at(std::size_t k) const;

  std::uint64_t examined() const { return examined_; }
  bool sampled() const { return sampled_; }

 private:
  StrategyShape shape_;
  std::size_t rows_;
  std::vector<Index> values_;
  std::uint64_t examined_;
  bool sampled_;
};

/// Exhaustive when candidate_count() <= budget, otherwise (if allowed) a
/// seeded uniform sample of `samples` tables. Either way only tables passing
/// the n-input fixed-point check are kept.
StrategyCatalog enumerate_pf_n(const StrategyShape& shape, const EnumerateOptions& options = {});

/// Strategy table for a row-value sequence (status unchecked).
ProcessFunctionN strategy_from_row_values(const StrategyShape& shape,
                                          std::span<const Index> row_values);

/// Guess-your-neighbour's-input environment on n in [2, 4] parties with bit
/// inputs. Party i observes its own input s_i whatever it does; the state
/// steps through all input assignments in index order; reward 1 iff every
/// a_i equals s_{i+1 mod n}.
DecPomdp gyni_env(std::size_t parties);

enum class SearchMode { general, ordered };

struct SearchOptions {
  double gamma = 0.9;
  Index m0 = 0;
  /// Uniform over S when empty.
  std::optional<InitialDistribution> mu;
  EnumerateOptions enumeration;
};

struct StrategyResult {
  ProcessFunctionN strategy;
  std::optional<CombOrder> order;
  double value = 0.0;
  bool operator==(const StrategyResult&) const = default;
};

struct SearchCounts {
  std::uint64_t total = 0;    // candidate tables examined
  std::uint64_t valid = 0;    // passing the fixed-point check
  std::uint64_t ordered = 0;  // valid and admitting a static causal order
  bool operator==(const SearchCounts&) const = default;
};

struct SearchReport {
  StrategyShape shape;
  std::string environment_id;
  double gamma = 0.0;
  Index m0 = 0;
  std::optional<StrategyResult> best_general;
  std::optional<StrategyResult> best_ordered;
  SearchCounts counts;
  /// best_general - best_ordered when both modes ran.
  std::optional<double> advantage;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  bool sampled = false;
  bool operator==(const SearchReport&) const = default;
};

/// Maximizes performance(w, P, m0, mu, gamma) over the (mode-filtered)
/// catalog. Ties go to the lexicographically least table.
StrategyResult best_strategy(const DecPomdp& pomdp, const StrategyShape& shape, SearchMode mode,
                             const SearchOptions& options = {});

/// Runs both modes over one enumeration; advantage = general - ordered >= 0.
SearchReport advantage_search(const DecPomdp& pomdp, const StrategyShape& shape,
                              const SearchOptions& options = {},
                              std::string environment_id = "");

/// Report over a prebuilt catalog with the requested modes filled in.
/// Counts cover the whole catalog in every case.
SearchReport search_catalog(const StrategyCatalog& catalog, const DecPomdp& pomdp,
                            const SearchOptions& options, bool general, bool ordered,
                            std::string environment_id = "");

/// First strategy of the catalog that admits no static causal order.
std::optional<ProcessFunctionN> find_unordered(const StrategyCatalog& catalog);

}  // namespace hopf
