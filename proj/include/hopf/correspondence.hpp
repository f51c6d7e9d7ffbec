#pragma once

// Agents <-> one-input process functions, and the one-step interaction of an
// agent with a POMDP.

#include "hopf/core.hpp"

namespace hopf {

/// (m', s', r) produced by one round of interaction.
struct StepResult {
  Index memory = 0;
  Index state = 0;
  double reward = 0.0;
  bool operator==(const StepResult&) const = default;
};

/// w(m, o) = (U(m, pi(m), o), pi(m)); status valid by construction.
ProcessFunction1 agent_to_pf(const Agent& agent);

/// pi = w_I, U(m, a, o) = w_F(m, o) for every a. Requires a valid w with
/// P = F.
Agent pf_to_agent(const ProcessFunction1& w);

/// a = pi(m); s' = T(s,a); o = O(s,a); r = R(s,a); m' = U(m,a,o).
StepResult one_step_direct(const Agent& agent, const DetPomdp& pomdp, Index m, Index s);

/// Discriminating environment over S = Omega x A (state (o, a') at index
/// o * |A| + a'). T((o,a'), a) = (o_reset, a), O((o,a'), a) = o, R = 1.
/// The arguments name the state the probe is meant to start from; the tables
/// do not depend on them beyond range checks.
DetPomdp probe_pomdp(const FiniteSet& observations, const FiniteSet& actions, Index o, Index a_prev,
                     Index o_reset);

/// Index of the probe state (o, a').
Index probe_state(const FiniteSet& actions, Index o, Index a_prev);

/// Equal induced process functions and equal policies.
bool agents_equivalent(const Agent& a, const Agent& b);

}  // namespace hopf
