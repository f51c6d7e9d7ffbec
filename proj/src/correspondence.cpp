#include "hopf/correspondence.hpp"

#include <cassert>

#include "hopf/verify.hpp"

namespace hopf {

namespace {

bool same_sizes(const FiniteSet& a, const FiniteSet& b) { return a.size() == b.size(); }

void require_same_axes(const Agent& a, const Agent& b) {
  if (!same_sizes(a.memory(), b.memory()) || !same_sizes(a.actions(), b.actions()) ||
      !same_sizes(a.observations(), b.observations())) {
    throw TypeMismatch("agents are defined over different sets");
  }
}

}  // namespace

ProcessFunction1 agent_to_pf(const Agent& agent) {
  std::vector<Index> entries;
  entries.reserve(agent.memory().size() * agent.observations().size() * 2);
  for (Index m = 0; m < agent.memory().size(); ++m) {
    const Index a = agent.act(m);
    for (Index o = 0; o < agent.observations().size(); ++o) {
      entries.push_back(agent.next_memory(m, a, o));
      entries.push_back(a);
    }
  }
  ProcessFunction1 w(agent.memory(), agent.observations(), agent.memory(), agent.actions(),
                     std::move(entries));
  w.set_status(UfpStatus::valid);
  return w;
}

Agent pf_to_agent(const ProcessFunction1& w) {
  if (w.status() != UfpStatus::valid) {
    throw PreconditionError("pf_to_agent: process function is not validated");
  }
  if (w.past().size() != w.future().size()) {
    throw TypeMismatch("pf_to_agent: P and F differ, so w is not a memory update");
  }
  const auto lens = decompose(w);
  const auto& actions = w.input();
  const auto& obs = w.obs();
  std::vector<Index> update;
  for (Index m = 0; m < w.past().size(); ++m) {
    for (Index a = 0; a < actions.size(); ++a) {
      for (Index o = 0; o < obs.size(); ++o) update.push_back(lens.forward({m, o}));
    }
  }
  return Agent(w.past(), actions, obs, lens.emit.entries(), std::move(update));
}

StepResult one_step_direct(const Agent& agent, const DetPomdp& pomdp, Index m, Index s) {
  if (!same_sizes(agent.actions(), pomdp.actions()) ||
      !same_sizes(agent.observations(), pomdp.observations())) {
    throw TypeMismatch("one_step_direct: agent and environment disagree on A or Omega");
  }
  const Index a = agent.act(m);
  const Index o = pomdp.observe(s, a);
  return {agent.next_memory(m, a, o), pomdp.next_state(s, a), pomdp.reward(s, a)};
}

Index probe_state(const FiniteSet& actions, Index o, Index a_prev) {
  return o * static_cast<Index>(actions.size()) + a_prev;
}

DetPomdp probe_pomdp(const FiniteSet& observations, const FiniteSet& actions, Index o,
                     Index a_prev, Index o_reset) {
  if (o >= observations.size() || o_reset >= observations.size() || a_prev >= actions.size()) {
    throw DomainError("probe_pomdp: index out of range");
  }
  const auto n_states = observations.size() * actions.size();
  std::vector<Index> transition, observation;
  for (Index s = 0; s < n_states; ++s) {
    const Index s_obs = s / static_cast<Index>(actions.size());
    for (Index a = 0; a < actions.size(); ++a) {
      transition.push_back(probe_state(actions, o_reset, a));
      observation.push_back(s_obs);
    }
  }
  std::vector<double> reward(n_states * actions.size(), 1.0);
  return DetPomdp(FiniteSet(n_states), actions, observations, std::move(transition),
                  std::move(observation), std::move(reward));
}

bool agents_equivalent(const Agent& a, const Agent& b) {
  require_same_axes(a, b);
  const bool same_w = agent_to_pf(a).table().entries() == agent_to_pf(b).table().entries();
  const bool same_policy = a.policy().entries() == b.policy().entries();
  // The I-component of w is the policy.
  assert(!same_w || same_policy);
  return same_w && same_policy;
}

}  // namespace hopf
