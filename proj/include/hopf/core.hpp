#pragma once

// Domain types shared by every module: finite sets, dense function tables,
// deterministic (dec-)POMDPs, agents and process functions.
//
// Every set is index based (0..size-1). Multi-axis values are addressed
// row-major with the LAST axis varying fastest, both in memory and in the
// serialized form.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopf/error.hpp"

namespace hopf {

using Index = std::uint32_t;
using IndexTuple = std::vector<Index>;

/// Mixed-radix offset of `digits` (last digit fastest). Throws DomainError if
/// any digit is out of range.
std::size_t encode_mixed(std::span<const std::size_t> radices, std::span<const Index> digits);
IndexTuple decode_mixed(std::span<const std::size_t> radices, std::size_t offset);

/// Checked product of sizes; throws BudgetExceeded on overflow of 64 bits.
std::uint64_t checked_product(std::span<const std::size_t> sizes);

class FiniteSet {
 public:
  explicit FiniteSet(std::size_t size, std::vector<std::string> labels = {});

  std::size_t size() const { return size_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  /// Unlabelled set whose size is the product of the given sets.
  static FiniteSet product(std::span<const FiniteSet> sets);

  bool operator==(const FiniteSet&) const = default;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

std::vector<std::size_t> sizes_of(std::span<const FiniteSet> sets);

/// A total function between products of finite sets stored as a dense table.
/// Each row holds one index per codomain axis; rows are laid out row-major
/// over the domain axes.
class TableFunction {
 public:
  using Rule = std::function<IndexTuple(std::span<const Index>)>;

  TableFunction(std::vector<FiniteSet> domain, std::vector<FiniteSet> codomain,
                std::vector<Index> entries);

  /// Tabulates `rule` over every domain tuple.
  static TableFunction tabulate(std::vector<FiniteSet> domain, std::vector<FiniteSet> codomain,
                                const Rule& rule);

  const std::vector<FiniteSet>& domain() const { return domain_; }
  const std::vector<FiniteSet>& codomain() const { return codomain_; }
  const std::vector<Index>& entries() const { return entries_; }

  std::size_t rows() const { return rows_; }
  std::size_t arity() const { return codomain_.size(); }

  std::size_t offset(std::span<const Index> input) const;
  IndexTuple decode(std::size_t offset) const;

  std::span<const Index> row(std::size_t offset) const {
    return {entries_.data() + offset * arity(), arity()};
  }
  Index at(std::size_t row, std::size_t component) const {
    return entries_[row * arity() + component];
  }

  IndexTuple eval(std::span<const Index> input) const;
  IndexTuple eval(std::initializer_list<Index> input) const {
    return eval(std::span<const Index>(input.begin(), input.size()));
  }
  /// First codomain component; convenient for single-output tables.
  Index operator()(std::initializer_list<Index> input) const {
    return at(offset(std::span<const Index>(input.begin(), input.size())), 0);
  }

  bool operator==(const TableFunction&) const = default;

 private:
  std::vector<FiniteSet> domain_;
  std::vector<FiniteSet> codomain_;
  std::vector<std::size_t> domain_sizes_;
  std::size_t rows_ = 0;
  std::vector<Index> entries_;
};

/// Deterministic POMDP <S, A, Omega, T, O, R>.
class DetPomdp {
 public:
  /// `T` and `O` are flat S x A tables (action fastest); `R` likewise.
  DetPomdp(FiniteSet states, FiniteSet actions, FiniteSet observations,
           std::vector<Index> transition, std::vector<Index> observation,
           std::vector<double> reward);

  const FiniteSet& states() const { return states_; }
  const FiniteSet& actions() const { return actions_; }
  const FiniteSet& observations() const { return observations_; }
  const TableFunction& transition() const { return transition_; }
  const TableFunction& observation() const { return observation_; }
  const std::vector<double>& rewards() const { return reward_; }

  Index next_state(Index s, Index a) const { return transition_.at(row(s, a), 0); }
  Index observe(Index s, Index a) const { return observation_.at(row(s, a), 0); }
  double reward(Index s, Index a) const { return reward_[row(s, a)]; }

  /// max |R| over all (s, a).
  double reward_bound() const;

  bool operator==(const DetPomdp&) const = default;

 private:
  std::size_t row(Index s, Index a) const;

  FiniteSet states_;
  FiniteSet actions_;
  FiniteSet observations_;
  TableFunction transition_;
  TableFunction observation_;
  std::vector<double> reward_;
};

/// Deterministic agent: policy M -> A and memory update M x A x Omega -> M.
class Agent {
 public:
  Agent(FiniteSet memory, FiniteSet actions, FiniteSet observations, std::vector<Index> policy,
        std::vector<Index> update);

  const FiniteSet& memory() const { return memory_; }
  const FiniteSet& actions() const { return actions_; }
  const FiniteSet& observations() const { return observations_; }
  const TableFunction& policy() const { return policy_; }
  const TableFunction& update() const { return update_; }

  Index act(Index m) const { return policy_({m}); }
  Index next_memory(Index m, Index a, Index o) const { return update_({m, a, o}); }

  bool operator==(const Agent&) const = default;

 private:
  FiniteSet memory_;
  FiniteSet actions_;
  FiniteSet observations_;
  TableFunction policy_;
  TableFunction update_;
};

enum class UfpStatus { unchecked, valid, invalid };

/// Evidence that the unique fixed-point condition fails: the inserted
/// functions (one table per party, indexed by action) together with every
/// solution of the fixed-point system at `p`. The solution list has zero or
/// at least two entries.
struct UfpWitness {
  Index p = 0;
  std::vector<IndexTuple> inserted;
  std::vector<IndexTuple> solutions;

  bool operator==(const UfpWitness&) const = default;
};

/// Candidate one-input process function w : P x Obs -> F x I.
class ProcessFunction1 {
 public:
  /// `entries` is the flat P x Obs table of (f, i) pairs.
  ProcessFunction1(FiniteSet p, FiniteSet obs, FiniteSet f, FiniteSet i, std::vector<Index> entries);

  const FiniteSet& past() const { return table_.domain()[0]; }
  const FiniteSet& obs() const { return table_.domain()[1]; }
  const FiniteSet& future() const { return table_.codomain()[0]; }
  const FiniteSet& input() const { return table_.codomain()[1]; }
  const TableFunction& table() const { return table_; }

  Index forward(Index p, Index o) const { return table_.at(row(p, o), 0); }
  Index emitted(Index p, Index o) const { return table_.at(row(p, o), 1); }

  UfpStatus status() const { return status_; }
  const std::optional<UfpWitness>& witness() const { return witness_; }

  /// Records a verdict. Valid requires the Obs-constancy criterion to hold,
  /// invalid requires a witness; both are checked.
  void set_status(UfpStatus status, std::optional<UfpWitness> witness = std::nullopt);

  bool operator==(const ProcessFunction1&) const = default;

 private:
  std::size_t row(Index p, Index o) const;

  TableFunction table_;
  UfpStatus status_ = UfpStatus::unchecked;
  std::optional<UfpWitness> witness_;
};

struct PartyInterface {
  FiniteSet actions;
  FiniteSet observations;
  bool operator==(const PartyInterface&) const = default;
};

/// Candidate n-input process function
/// w : P x Omega_1 x ... x Omega_n -> F x A_1 x ... x A_n.
class ProcessFunctionN {
 public:
  /// `entries` holds, for every row (p, o_1, ..., o_n), the tuple
  /// (f, a_1, ..., a_n).
  ProcessFunctionN(FiniteSet p, FiniteSet f, std::vector<PartyInterface> parties,
                   std::vector<Index> entries);

  static ProcessFunctionN from_one_input(const ProcessFunction1& w);
  ProcessFunction1 to_one_input() const;

  const FiniteSet& past() const { return table_.domain()[0]; }
  const FiniteSet& future() const { return table_.codomain()[0]; }
  const std::vector<PartyInterface>& parties() const { return parties_; }
  std::size_t party_count() const { return parties_.size(); }
  const TableFunction& table() const { return table_; }

  std::size_t joint_observation_count() const { return joint_obs_; }
  std::vector<std::size_t> observation_sizes() const;
  std::vector<std::size_t> action_sizes() const;

  /// Row of (p, joint observation index).
  std::size_t row(Index p, std::size_t joint_obs) const { return p * joint_obs_ + joint_obs; }
  Index forward(std::size_t row) const { return table_.at(row, 0); }
  Index action(std::size_t row, std::size_t party) const { return table_.at(row, party + 1); }

  UfpStatus status() const { return status_; }
  const std::optional<UfpWitness>& witness() const { return witness_; }
  void set_status(UfpStatus status, std::optional<UfpWitness> witness = std::nullopt);

  bool operator==(const ProcessFunctionN&) const = default;

 private:
  std::vector<PartyInterface> parties_;
  TableFunction table_;
  std::size_t joint_obs_ = 1;
  UfpStatus status_ = UfpStatus::unchecked;
  std::optional<UfpWitness> witness_;
};

struct PartySets {
  FiniteSet states;
  FiniteSet actions;
  FiniteSet observations;
  bool operator==(const PartySets&) const = default;
};

/// Deterministic factored n-party dec-POMDP: a POMDP over the product sets,
/// optionally carrying per-party observation tables O_i : S x A_i -> Omega_i.
/// Joint indices of the product sets are row-major over parties.
class DecPomdp {
 public:
  DecPomdp(std::vector<PartySets> parties, DetPomdp joint,
           std::optional<std::vector<TableFunction>> factored_obs = std::nullopt);

  const std::vector<PartySets>& parties() const { return parties_; }
  std::size_t party_count() const { return parties_.size(); }
  const DetPomdp& joint() const { return joint_; }
  const std::optional<std::vector<TableFunction>>& factored_obs() const { return factored_obs_; }
  bool observation_independent() const { return factored_obs_.has_value(); }

  IndexTuple split_state(Index s) const;
  IndexTuple split_action(Index a) const;
  IndexTuple split_observation(Index o) const;
  Index join_state(std::span<const Index> parts) const;
  Index join_action(std::span<const Index> parts) const;
  Index join_observation(std::span<const Index> parts) const;

  /// O_i(s, a_i); requires factored observations.
  Index local_observation(std::size_t party, Index s, Index a_i) const;

  std::vector<std::size_t> state_sizes() const;
  std::vector<std::size_t> action_sizes() const;
  std::vector<std::size_t> observation_sizes() const;

  /// Copy with the factored tables dropped or replaced (re-validated).
  DecPomdp with_factored_obs(std::optional<std::vector<TableFunction>> factored) const;

  bool operator==(const DecPomdp&) const = default;

 private:
  std::vector<PartySets> parties_;
  DetPomdp joint_;
  std::optional<std::vector<TableFunction>> factored_obs_;
};

/// Wraps a single-party POMDP as a one-party dec-POMDP (O_1 = O).
DecPomdp as_single_party(const DetPomdp& pomdp);

/// f_i^s(a_i) := O_i(s, a_i).
TableFunction curry_state(const DecPomdp& pomdp, std::size_t party, Index s);

struct Trajectory {
  std::vector<Index> memories;
  std::vector<Index> states;
  std::vector<double> rewards;

  std::size_t horizon() const { return rewards.size(); }
  bool operator==(const Trajectory&) const = default;
};

class DiscountSpec {
 public:
  explicit DiscountSpec(double gamma);
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

class InitialDistribution {
 public:
  explicit InitialDistribution(std::vector<double> probs);
  static InitialDistribution uniform(std::size_t n);
  static InitialDistribution point_mass(std::size_t n, Index at);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

}  // namespace hopf
