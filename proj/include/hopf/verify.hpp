#pragma once

// Deciding the unique fixed-point condition, the lens decomposition of
// one-input process functions, observation independence of dec-POMDPs and
// static causal orders of n-input process functions.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hopf/core.hpp"

namespace hopf {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// kDefaultBudget unless HOPF_BUDGET holds a positive integer.
std::uint64_t default_budget();

struct UfpVerdict {
  bool valid = false;
  std::optional<UfpWitness> witness;
};

/// Enumerates every inserted f : I -> Obs and every p, counting the solutions
/// of o = f(w_I(p, o)). The witness is the first violating (f, p) in
/// lexicographic order of f's table, then p.
UfpVerdict check_ufp_1_bruteforce(const ProcessFunction1& w, std::uint64_t budget = default_budget());

/// Valid iff w_I(p, .) is constant for each p. On failure the witness is the
/// two-fixed-point function built from the first offending (p, o, o').
UfpVerdict check_ufp_1_fast(const ProcessFunction1& w);

/// Runs the fast check and records the verdict on a copy.
ProcessFunction1 validated(ProcessFunction1 w);

/// w(p, o) = (forward(p, o), emit(p)).
struct Lens {
  TableFunction forward;  // P x Obs -> F
  TableFunction emit;     // P -> I
};

Lens decompose(const ProcessFunction1& w);
ProcessFunction1 recompose(const Lens& lens);

/// Brute-force decision of the n-input condition. `threads` = 0 uses the
/// available hardware parallelism; the verdict and witness do not depend on
/// it.
UfpVerdict check_ufp_n(const ProcessFunctionN& w, std::uint64_t budget = default_budget(),
                       unsigned threads = 0);

ProcessFunctionN validated(ProcessFunctionN w, std::uint64_t budget = default_budget(),
                           unsigned threads = 0);

/// Allocation-free brute-force decider over a fixed shape, operating on the
/// action columns of a table. Used by check_ufp_n and the strategy search.
class UfpKernel {
 public:
  UfpKernel(std::size_t past_size, std::vector<std::size_t> action_sizes,
            std::vector<std::size_t> observation_sizes);

  std::size_t party_count() const { return action_sizes_.size(); }
  std::size_t joint_observations() const { return joint_obs_; }
  std::size_t rows() const { return past_size_ * joint_obs_; }

  /// Number of inserted-function tuples.
  std::uint64_t inserted_count() const { return inserted_count_; }

  /// Elementary checks of a full scan: inserted tuples x |P| x |Omega|.
  std::uint64_t cost() const;

  /// `actions` holds rows() x party_count() entries (action of party i at
  /// row r in actions[r * n + i]).
  bool is_valid(std::span<const Index> actions) const;

  /// First violation among inserted tuples [begin, end) in lexicographic
  /// order, or nullopt.
  std::optional<UfpWitness> first_violation(std::span<const Index> actions, std::uint64_t begin,
                                            std::uint64_t end) const;

 private:
  // Decodes inserted tuple `k` into the flat per-party table buffer.
  void decode_inserted(std::uint64_t k, std::vector<Index>& flat) const;
  bool advance(std::vector<Index>& flat) const;
  UfpWitness make_witness(Index p, const std::vector<Index>& flat,
                          std::span<const Index> actions) const;
  // Number of solutions at p, saturating at 2.
  int count_solutions(std::size_t p, const std::vector<Index>& flat,
                      std::span<const Index> actions) const;

  std::size_t past_size_;
  std::vector<std::size_t> action_sizes_;
  std::vector<std::size_t> observation_sizes_;
  std::vector<std::size_t> table_offsets_;  // start of party i's f table in the flat buffer
  std::vector<std::size_t> digit_radix_;    // radix of each flat position
  std::vector<Index> obs_digits_;           // joint_obs_ x n
  std::size_t joint_obs_ = 1;
  std::uint64_t inserted_count_ = 1;
};

/// Party i's component of O does not vary with a_j for j != i. The
/// counterexample names the party, the state and two joint actions differing
/// only off party i.
struct SignallingCounterexample {
  std::size_t party = 0;
  Index state = 0;
  IndexTuple action;
  IndexTuple other_action;
};

using ObsIndependenceResult = std::variant<std::vector<TableFunction>, SignallingCounterexample>;

ObsIndependenceResult check_obs_independence(const DecPomdp& pomdp);

/// A permutation of party indices. Stored 0-based; printed 1-based.
class CombOrder {
 public:
  explicit CombOrder(std::vector<std::size_t> sigma);
  const std::vector<std::size_t>& sigma() const { return sigma_; }
  std::size_t size() const { return sigma_.size(); }
  bool operator==(const CombOrder&) const = default;

 private:
  std::vector<std::size_t> sigma_;
};

/// True iff each w_{A_sigma(k)} depends only on p and o_sigma(1..k-1).
bool check_comb_order(const ProcessFunctionN& w, const CombOrder& order);

/// Lexicographically least order passing check_comb_order (n <= 8).
std::optional<CombOrder> is_causally_ordered(const ProcessFunctionN& w);

}  // namespace hopf
