#include "hopf/dynamics.hpp"

#include <cmath>
#include <cstdint>

namespace hopf {

EncodedPomdp encode_pomdp(const DetPomdp& pomdp) {
  std::vector<double> values;
  std::vector<Index> entries;
  for (Index a = 0; a < pomdp.actions().size(); ++a) {
    for (Index s = 0; s < pomdp.states().size(); ++s) {
      const double r = pomdp.reward(s, a);
      Index r_index = 0;
      while (r_index < values.size() && values[r_index] != r) ++r_index;
      if (r_index == values.size()) values.push_back(r);
      entries.insert(entries.end(), {pomdp.observe(s, a), pomdp.next_state(s, a), r_index});
    }
  }
  TableFunction table({pomdp.actions(), pomdp.states()},
                      {pomdp.observations(), pomdp.states(), FiniteSet(values.size())},
                      std::move(entries));
  return {std::move(table), std::move(values)};
}

namespace {

void require_memory_type(const FiniteSet& past, const FiniteSet& future) {
  if (past.size() != future.size()) {
    throw TypeMismatch("link step: P and F differ, so w does not update a memory");
  }
}

void require_compatible(const ProcessFunction1& w, const DetPomdp& pomdp) {
  if (w.status() != UfpStatus::valid) {
    throw PreconditionError("link_step_1: process function is not validated");
  }
  require_memory_type(w.past(), w.future());
  if (w.obs().size() != pomdp.observations().size() || w.input().size() != pomdp.actions().size()) {
    throw TypeMismatch("link_step_1: process function and environment disagree on A or Omega");
  }
}

void require_compatible(const ProcessFunctionN& w, const DecPomdp& pomdp) {
  if (w.status() != UfpStatus::valid) {
    throw PreconditionError("link_step_n: process function is not validated");
  }
  if (!pomdp.observation_independent()) {
    throw NotObservationIndependent("link_step_n: environment is not observation independent");
  }
  require_memory_type(w.past(), w.future());
  if (w.party_count() != pomdp.party_count() || w.action_sizes() != pomdp.action_sizes() ||
      w.observation_sizes() != pomdp.observation_sizes()) {
    throw TypeMismatch("link_step_n: process function and environment disagree on party sets");
  }
}

template <class Step>
Trajectory rollout_with(Step&& step, Index m0, Index s0, std::size_t horizon) {
  Trajectory out;
  out.memories.push_back(m0);
  out.states.push_back(s0);
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto r = step(out.memories.back(), out.states.back());
    out.memories.push_back(r.memory);
    out.states.push_back(r.state);
    out.rewards.push_back(r.reward);
  }
  return out;
}

template <class Step>
TruncatedValue truncated_with(Step&& step, Index m0, Index s0, double gamma, std::size_t steps,
                              double reward_bound) {
  if (steps == 0) throw DomainError("discounted_reward_truncated: need at least one step");
  const auto traj = rollout_with(step, m0, s0, steps);
  double value = 0.0;
  double weight = 1.0;
  for (double r : traj.rewards) {
    value += weight * r;
    weight *= gamma;
  }
  return {value, std::pow(gamma, static_cast<double>(steps)) * reward_bound / (1.0 - gamma)};
}

template <class Step>
double exact_with(Step&& step, std::size_t memories, std::size_t states, Index m0, Index s0,
                  double gamma) {
  if (m0 >= memories || s0 >= states) throw DomainError("initial memory or state out of range");
  std::vector<std::int64_t> first_visit(memories * states, -1);
  std::vector<double> rewards;
  Index m = m0, s = s0;
  auto key = [&] { return static_cast<std::size_t>(m) * states + s; };
  while (first_visit[key()] < 0) {
    first_visit[key()] = static_cast<std::int64_t>(rewards.size());
    const auto r = step(m, s);
    rewards.push_back(r.reward);
    m = r.memory;
    s = r.state;
  }
  const auto cycle_start = static_cast<std::size_t>(first_visit[key()]);
  double prefix = 0.0, weight = 1.0;
  for (std::size_t t = 0; t < cycle_start; ++t) {
    prefix += weight * rewards[t];
    weight *= gamma;
  }
  const double lead = weight;  // gamma^k
  double cycle = 0.0, cycle_weight = 1.0;
  for (std::size_t t = cycle_start; t < rewards.size(); ++t) {
    cycle += cycle_weight * rewards[t];
    cycle_weight *= gamma;
  }
  // cycle_weight is now gamma^L.
  return prefix + lead * cycle / (1.0 - cycle_weight);
}

template <class Exact>
double performance_with(Exact&& exact, const InitialDistribution& mu, std::size_t states) {
  if (mu.size() != states) throw TypeMismatch("performance: mu is not a distribution over S");
  double total = 0.0;
  for (Index s = 0; s < states; ++s) {
    if (mu.probs()[s] != 0.0) total += mu.probs()[s] * exact(s);
  }
  return total;
}

}  // namespace

StepResult link_step_1(const ProcessFunction1& w, const DetPomdp& pomdp, Index m, Index s) {
  require_compatible(w, pomdp);
  if (m >= w.past().size()) throw DomainError("link_step_1: memory out of range");
  const Index a = w.emitted(m, 0);
  const Index o = pomdp.observe(s, a);
  return {w.forward(m, o), pomdp.next_state(s, a), pomdp.reward(s, a)};
}

StepResult link_step_n(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m, Index s) {
  require_compatible(w, pomdp);
  if (m >= w.past().size()) throw DomainError("link_step_n: memory out of range");
  if (s >= pomdp.joint().states().size()) throw DomainError("link_step_n: state out of range");
  const auto n = w.party_count();
  std::vector<TableFunction> local;
  local.reserve(n);
  for (std::size_t i = 0; i < n; ++i) local.push_back(curry_state(pomdp, i, s));

  const auto sizes = w.observation_sizes();
  std::size_t solutions = 0;
  std::size_t solution_row = 0;
  for (std::size_t o = 0; o < w.joint_observation_count(); ++o) {
    const auto row = w.row(m, o);
    const auto digits = decode_mixed(sizes, o);
    bool fixed = true;
    for (std::size_t i = 0; i < n && fixed; ++i) {
      fixed = local[i]({w.action(row, i)}) == digits[i];
    }
    if (fixed) {
      ++solutions;
      solution_row = row;
    }
  }
  if (solutions != 1) {
    throw ConsistencyViolation("link_step_n: fixed-point system at (m, s) = (" +
                               std::to_string(m) + ", " + std::to_string(s) + ") has " +
                               std::to_string(solutions) + " solutions");
  }
  IndexTuple actions(n);
  for (std::size_t i = 0; i < n; ++i) actions[i] = w.action(solution_row, i);
  const Index a = pomdp.join_action(actions);
  return {w.forward(solution_row), pomdp.joint().next_state(s, a), pomdp.joint().reward(s, a)};
}

Trajectory rollout(const ProcessFunction1& w, const DetPomdp& pomdp, Index m0, Index s0,
                   std::size_t horizon) {
  require_compatible(w, pomdp);
  if (m0 >= w.past().size() || s0 >= pomdp.states().size()) {
    throw DomainError("rollout: initial memory or state out of range");
  }
  return rollout_with([&](Index m, Index s) { return link_step_1(w, pomdp, m, s); }, m0, s0,
                      horizon);
}

Trajectory rollout(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m0, Index s0,
                   std::size_t horizon) {
  require_compatible(w, pomdp);
  if (m0 >= w.past().size() || s0 >= pomdp.joint().states().size()) {
    throw DomainError("rollout: initial memory or state out of range");
  }
  return rollout_with([&](Index m, Index s) { return link_step_n(w, pomdp, m, s); }, m0, s0,
                      horizon);
}

TruncatedValue discounted_reward_truncated(const ProcessFunction1& w, const DetPomdp& pomdp,
                                           Index m0, Index s0, DiscountSpec gamma,
                                           std::size_t steps) {
  require_compatible(w, pomdp);
  return truncated_with([&](Index m, Index s) { return link_step_1(w, pomdp, m, s); }, m0, s0,
                        gamma.gamma(), steps, pomdp.reward_bound());
}

TruncatedValue discounted_reward_truncated(const ProcessFunctionN& w, const DecPomdp& pomdp,
                                           Index m0, Index s0, DiscountSpec gamma,
                                           std::size_t steps) {
  require_compatible(w, pomdp);
  return truncated_with([&](Index m, Index s) { return link_step_n(w, pomdp, m, s); }, m0, s0,
                        gamma.gamma(), steps, pomdp.joint().reward_bound());
}

double discounted_reward_exact(const ProcessFunction1& w, const DetPomdp& pomdp, Index m0,
                               Index s0, DiscountSpec gamma) {
  require_compatible(w, pomdp);
  return exact_with([&](Index m, Index s) { return link_step_1(w, pomdp, m, s); },
                    w.past().size(), pomdp.states().size(), m0, s0, gamma.gamma());
}

double discounted_reward_exact(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m0,
                               Index s0, DiscountSpec gamma) {
  require_compatible(w, pomdp);
  return exact_with([&](Index m, Index s) { return link_step_n(w, pomdp, m, s); },
                    w.past().size(), pomdp.joint().states().size(), m0, s0, gamma.gamma());
}

double performance(const ProcessFunction1& w, const DetPomdp& pomdp, Index m0,
                   const InitialDistribution& mu, DiscountSpec gamma) {
  return performance_with(
      [&](Index s) { return discounted_reward_exact(w, pomdp, m0, s, gamma); }, mu,
      pomdp.states().size());
}

double performance(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m0,
                   const InitialDistribution& mu, DiscountSpec gamma) {
  return performance_with(
      [&](Index s) { return discounted_reward_exact(w, pomdp, m0, s, gamma); }, mu,
      pomdp.joint().states().size());
}

}  // namespace hopf
