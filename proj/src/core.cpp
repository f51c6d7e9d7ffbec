#include "hopf/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace hopf {

namespace {

std::string describe_tuple(std::span<const Index> t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << t[k];
  os << ')';
  return os.str();
}

std::vector<FiniteSet> one(const FiniteSet& s) { return {s}; }

}  // namespace

std::size_t encode_mixed(std::span<const std::size_t> radices, std::span<const Index> digits) {
  if (radices.size() != digits.size()) {
    throw DomainError("tuple " + describe_tuple(digits) + " has " + std::to_string(digits.size()) +
                      " components, expected " + std::to_string(radices.size()));
  }
  std::size_t offset = 0;
  for (std::size_t k = 0; k < radices.size(); ++k) {
    if (digits[k] >= radices[k]) {
      throw DomainError("component " + std::to_string(k) + " of " + describe_tuple(digits) +
                        " is out of range for a set of size " + std::to_string(radices[k]));
    }
    offset = offset * radices[k] + digits[k];
  }
  return offset;
}

IndexTuple decode_mixed(std::span<const std::size_t> radices, std::size_t offset) {
  IndexTuple digits(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    digits[k] = static_cast<Index>(offset % radices[k]);
    offset /= radices[k];
  }
  if (offset != 0) throw DomainError("offset out of range");
  return digits;
}

std::uint64_t checked_product(std::span<const std::size_t> sizes) {
  std::uint64_t total = 1;
  for (auto s : sizes) {
    if (s != 0 && total > std::numeric_limits<std::uint64_t>::max() / s) {
      throw BudgetExceeded("size product overflows 64 bits");
    }
    total *= s;
  }
  return total;
}

// ---------------------------------------------------------------------------

FiniteSet::FiniteSet(std::size_t size, std::vector<std::string> labels)
    : size_(size), labels_(std::move(labels)) {
  if (size_ == 0) throw InvariantViolation("finite set must be non-empty");
  if (size_ > std::numeric_limits<Index>::max()) throw InvariantViolation("finite set too large");
  if (!labels_.empty()) {
    if (labels_.size() != size_) {
      throw InvariantViolation("labels: " + std::to_string(labels_.size()) +
                               " labels for a set of size " + std::to_string(size_));
    }
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) throw InvariantViolation("labels: duplicate label '" + l + "'");
    }
  }
}

FiniteSet FiniteSet::product(std::span<const FiniteSet> sets) {
  auto sizes = sizes_of(sets);
  auto total = checked_product(sizes);
  if (total > std::numeric_limits<Index>::max()) throw InvariantViolation("product set too large");
  return FiniteSet(static_cast<std::size_t>(total));
}

std::vector<std::size_t> sizes_of(std::span<const FiniteSet> sets) {
  std::vector<std::size_t> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(s.size());
  return out;
}

// ---------------------------------------------------------------------------

TableFunction::TableFunction(std::vector<FiniteSet> domain, std::vector<FiniteSet> codomain,
                             std::vector<Index> entries)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), entries_(std::move(entries)) {
  if (codomain_.empty()) throw InvariantViolation("table: codomain needs at least one axis");
  domain_sizes_ = sizes_of(domain_);
  auto rows = checked_product(domain_sizes_);
  rows_ = static_cast<std::size_t>(rows);
  if (entries_.size() != rows_ * arity()) {
    throw InvariantViolation("table: length " + std::to_string(entries_.size()) +
                             " does not match " + std::to_string(rows_) + " rows x " +
                             std::to_string(arity()) + " codomain axes");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto axis = k % arity();
    if (entries_[k] >= codomain_[axis].size()) {
      throw InvariantViolation("table: entry " + std::to_string(entries_[k]) + " at row " +
                               std::to_string(k / arity()) + " exceeds codomain axis " +
                               std::to_string(axis) + " of size " +
                               std::to_string(codomain_[axis].size()));
    }
  }
}

TableFunction TableFunction::tabulate(std::vector<FiniteSet> domain,
                                      std::vector<FiniteSet> codomain, const Rule& rule) {
  const auto sizes = sizes_of(domain);
  const auto rows = checked_product(sizes);
  std::vector<Index> entries;
  entries.reserve(rows * codomain.size());
  for (std::size_t r = 0; r < rows; ++r) {
    auto out = rule(decode_mixed(sizes, r));
    if (out.size() != codomain.size()) throw TypeMismatch("tabulate: rule returned wrong arity");
    entries.insert(entries.end(), out.begin(), out.end());
  }
  return TableFunction(std::move(domain), std::move(codomain), std::move(entries));
}

std::size_t TableFunction::offset(std::span<const Index> input) const {
  return encode_mixed(domain_sizes_, input);
}

IndexTuple TableFunction::decode(std::size_t offset) const {
  return decode_mixed(domain_sizes_, offset);
}

IndexTuple TableFunction::eval(std::span<const Index> input) const {
  auto r = row(offset(input));
  return {r.begin(), r.end()};
}

// ---------------------------------------------------------------------------

DetPomdp::DetPomdp(FiniteSet states, FiniteSet actions, FiniteSet observations,
                   std::vector<Index> transition, std::vector<Index> observation,
                   std::vector<double> reward)
    : states_(std::move(states)),
      actions_(std::move(actions)),
      observations_(std::move(observations)),
      transition_({states_, actions_}, one(states_), std::move(transition)),
      observation_({states_, actions_}, one(observations_), std::move(observation)),
      reward_(std::move(reward)) {
  if (reward_.size() != transition_.rows()) {
    throw InvariantViolation("R: length " + std::to_string(reward_.size()) + " does not match " +
                             std::to_string(transition_.rows()) + " state-action pairs");
  }
  for (std::size_t k = 0; k < reward_.size(); ++k) {
    if (!std::isfinite(reward_[k])) {
      throw InvariantViolation("R: entry " + std::to_string(k) + " is not finite");
    }
  }
}

std::size_t DetPomdp::row(Index s, Index a) const {
  if (s >= states_.size() || a >= actions_.size()) {
    throw DomainError("state/action (" + std::to_string(s) + "," + std::to_string(a) +
                      ") out of range");
  }
  return static_cast<std::size_t>(s) * actions_.size() + a;
}

double DetPomdp::reward_bound() const {
  double bound = 0.0;
  for (double r : reward_) bound = std::max(bound, std::abs(r));
  return bound;
}

// ---------------------------------------------------------------------------

Agent::Agent(FiniteSet memory, FiniteSet actions, FiniteSet observations,
             std::vector<Index> policy, std::vector<Index> update)
    : memory_(std::move(memory)),
      actions_(std::move(actions)),
      observations_(std::move(observations)),
      policy_(one(memory_), one(actions_), std::move(policy)),
      update_({memory_, actions_, observations_}, one(memory_), std::move(update)) {}

// ---------------------------------------------------------------------------

ProcessFunction1::ProcessFunction1(FiniteSet p, FiniteSet obs, FiniteSet f, FiniteSet i,
                                   std::vector<Index> entries)
    : table_({std::move(p), std::move(obs)}, {std::move(f), std::move(i)}, std::move(entries)) {}

std::size_t ProcessFunction1::row(Index p, Index o) const {
  if (p >= past().size() || o >= obs().size()) {
    throw DomainError("(p,o) = (" + std::to_string(p) + "," + std::to_string(o) +
                      ") out of range");
  }
  return static_cast<std::size_t>(p) * obs().size() + o;
}

void ProcessFunction1::set_status(UfpStatus status, std::optional<UfpWitness> witness) {
  if (status == UfpStatus::valid) {
    for (Index p = 0; p < past().size(); ++p) {
      for (Index o = 1; o < obs().size(); ++o) {
        if (emitted(p, o) != emitted(p, 0)) {
          throw InvariantViolation("status: I-component depends on the observation at p = " +
                                   std::to_string(p));
        }
      }
    }
    witness.reset();
  } else if (status == UfpStatus::invalid) {
    if (!witness) throw InvariantViolation("status: invalid verdict needs a witness");
  } else {
    witness.reset();
  }
  status_ = status;
  witness_ = std::move(witness);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<FiniteSet> pfn_domain(const FiniteSet& p, const std::vector<PartyInterface>& parties) {
  std::vector<FiniteSet> axes{p};
  for (const auto& party : parties) axes.push_back(party.observations);
  return axes;
}

std::vector<FiniteSet> pfn_codomain(const FiniteSet& f,
                                    const std::vector<PartyInterface>& parties) {
  std::vector<FiniteSet> axes{f};
  for (const auto& party : parties) axes.push_back(party.actions);
  return axes;
}

}  // namespace

ProcessFunctionN::ProcessFunctionN(FiniteSet p, FiniteSet f, std::vector<PartyInterface> parties,
                                   std::vector<Index> entries)
    : parties_(std::move(parties)),
      table_(pfn_domain(p, parties_), pfn_codomain(f, parties_), std::move(entries)) {
  if (parties_.empty()) throw InvariantViolation("parties: need at least one party");
  joint_obs_ = table_.rows() / past().size();
}

ProcessFunctionN ProcessFunctionN::from_one_input(const ProcessFunction1& w) {
  ProcessFunctionN out(w.past(), w.future(), {PartyInterface{w.input(), w.obs()}},
                       w.table().entries());
  if (w.status() != UfpStatus::unchecked) out.set_status(w.status(), w.witness());
  return out;
}

ProcessFunction1 ProcessFunctionN::to_one_input() const {
  if (party_count() != 1) throw TypeMismatch("to_one_input: process function has several parties");
  ProcessFunction1 out(past(), parties_[0].observations, future(), parties_[0].actions,
                       table_.entries());
  if (status_ != UfpStatus::unchecked) out.set_status(status_, witness_);
  return out;
}

std::vector<std::size_t> ProcessFunctionN::observation_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& party : parties_) out.push_back(party.observations.size());
  return out;
}

std::vector<std::size_t> ProcessFunctionN::action_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& party : parties_) out.push_back(party.actions.size());
  return out;
}

void ProcessFunctionN::set_status(UfpStatus status, std::optional<UfpWitness> witness) {
  if (status == UfpStatus::invalid && !witness) {
    throw InvariantViolation("status: invalid verdict needs a witness");
  }
  if (status != UfpStatus::invalid) witness.reset();
  status_ = status;
  witness_ = std::move(witness);
}

// ---------------------------------------------------------------------------

namespace {

template <class Get>
std::vector<std::size_t> party_sizes(const std::vector<PartySets>& parties, Get get) {
  std::vector<std::size_t> out;
  for (const auto& p : parties) out.push_back(get(p).size());
  return out;
}

}  // namespace

DecPomdp::DecPomdp(std::vector<PartySets> parties, DetPomdp joint,
                   std::optional<std::vector<TableFunction>> factored_obs)
    : parties_(std::move(parties)), joint_(std::move(joint)) {
  if (parties_.empty()) throw InvariantViolation("parties: need at least one party");
  if (checked_product(state_sizes()) != joint_.states().size()) {
    throw InvariantViolation("S: joint state set does not match the product of party state sets");
  }
  if (checked_product(action_sizes()) != joint_.actions().size()) {
    throw InvariantViolation("A: joint action set does not match the product of party action sets");
  }
  if (checked_product(observation_sizes()) != joint_.observations().size()) {
    throw InvariantViolation(
        "Omega: joint observation set does not match the product of party observation sets");
  }
  if (factored_obs) {
    auto& tables = *factored_obs;
    if (tables.size() != parties_.size()) {
      throw InvariantViolation("factored_obs: expected one table per party");
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto& t = tables[i];
      if (t.domain().size() != 2 || t.domain()[0].size() != joint_.states().size() ||
          t.domain()[1].size() != parties_[i].actions.size() || t.arity() != 1 ||
          t.codomain()[0].size() != parties_[i].observations.size()) {
        throw InvariantViolation("factored_obs[" + std::to_string(i) +
                                 "]: axes must be S x A_i -> Omega_i");
      }
    }
    // O(s,a) = (O_1(s,a_1), ..., O_n(s,a_n)) entrywise.
    for (Index s = 0; s < joint_.states().size(); ++s) {
      for (Index a = 0; a < joint_.actions().size(); ++a) {
        const auto parts = split_action(a);
        const auto obs = split_observation(joint_.observe(s, a));
        for (std::size_t i = 0; i < parties_.size(); ++i) {
          if (tables[i]({s, parts[i]}) != obs[i]) {
            throw InvariantViolation("factored_obs[" + std::to_string(i) +
                                     "]: disagrees with O at s = " + std::to_string(s) +
                                     ", a = " + std::to_string(a));
          }
        }
      }
    }
  }
  factored_obs_ = std::move(factored_obs);
}

std::vector<std::size_t> DecPomdp::state_sizes() const {
  return party_sizes(parties_, [](const PartySets& p) -> const FiniteSet& { return p.states; });
}
std::vector<std::size_t> DecPomdp::action_sizes() const {
  return party_sizes(parties_, [](const PartySets& p) -> const FiniteSet& { return p.actions; });
}
std::vector<std::size_t> DecPomdp::observation_sizes() const {
  return party_sizes(parties_,
                     [](const PartySets& p) -> const FiniteSet& { return p.observations; });
}

IndexTuple DecPomdp::split_state(Index s) const { return decode_mixed(state_sizes(), s); }
IndexTuple DecPomdp::split_action(Index a) const { return decode_mixed(action_sizes(), a); }
IndexTuple DecPomdp::split_observation(Index o) const {
  return decode_mixed(observation_sizes(), o);
}
Index DecPomdp::join_state(std::span<const Index> parts) const {
  return static_cast<Index>(encode_mixed(state_sizes(), parts));
}
Index DecPomdp::join_action(std::span<const Index> parts) const {
  return static_cast<Index>(encode_mixed(action_sizes(), parts));
}
Index DecPomdp::join_observation(std::span<const Index> parts) const {
  return static_cast<Index>(encode_mixed(observation_sizes(), parts));
}

Index DecPomdp::local_observation(std::size_t party, Index s, Index a_i) const {
  if (!factored_obs_) throw NotObservationIndependent("environment has no factored observations");
  if (party >= parties_.size()) throw DomainError("party index out of range");
  return (*factored_obs_)[party]({s, a_i});
}

DecPomdp DecPomdp::with_factored_obs(std::optional<std::vector<TableFunction>> factored) const {
  return DecPomdp(parties_, joint_, std::move(factored));
}

DecPomdp as_single_party(const DetPomdp& pomdp) {
  std::vector<PartySets> parties{{pomdp.states(), pomdp.actions(), pomdp.observations()}};
  std::vector<TableFunction> factored{pomdp.observation()};
  return DecPomdp(std::move(parties), pomdp, std::move(factored));
}

TableFunction curry_state(const DecPomdp& pomdp, std::size_t party, Index s) {
  if (!pomdp.observation_independent()) {
    throw NotObservationIndependent("curry_state: environment is not observation independent");
  }
  if (party >= pomdp.party_count()) throw DomainError("curry_state: party index out of range");
  if (s >= pomdp.joint().states().size()) throw DomainError("curry_state: state out of range");
  const auto& ps = pomdp.parties()[party];
  std::vector<Index> entries;
  for (Index a = 0; a < ps.actions.size(); ++a) {
    entries.push_back(pomdp.local_observation(party, s, a));
  }
  return TableFunction({ps.actions}, {ps.observations}, std::move(entries));
}

// ---------------------------------------------------------------------------

DiscountSpec::DiscountSpec(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvariantViolation("gamma: must lie in [0, 1), got " + std::to_string(gamma));
  }
}

InitialDistribution::InitialDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvariantViolation("mu: empty distribution");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvariantViolation("mu: negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvariantViolation("mu: entries sum to " + std::to_string(total) + ", not 1");
  }
}

InitialDistribution InitialDistribution::uniform(std::size_t n) {
  return InitialDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

InitialDistribution InitialDistribution::point_mass(std::size_t n, Index at) {
  if (at >= n) throw DomainError("point mass outside the state set");
  std::vector<double> probs(n, 0.0);
  probs[at] = 1.0;
  return InitialDistribution(std::move(probs));
}

}  // namespace hopf
