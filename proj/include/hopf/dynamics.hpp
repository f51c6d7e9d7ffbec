#pragma once

// Link products of process functions with environments, rollouts and
// discounted rewards.

#include <vector>

#include "hopf/core.hpp"
#include "hopf/correspondence.hpp"

namespace hopf {

/// A POMDP as the single function (a, s) -> (O(s,a), T(s,a), r-index). The
/// reward axis indexes `reward_values`, which lists each distinct reward in
/// order of first appearance.
struct EncodedPomdp {
  TableFunction table;
  std::vector<double> reward_values;
};

EncodedPomdp encode_pomdp(const DetPomdp& pomdp);

/// a = w_I(m); o = O(s,a); m' = w_F(m,o); s' = T(s,a); r = R(s,a).
StepResult link_step_1(const ProcessFunction1& w, const DetPomdp& pomdp, Index m, Index s);

/// Solves o_i = O_i(s, w_{A_i}(m, o)) for the unique joint observation,
/// evaluates w there and steps the environment with the resulting actions.
StepResult link_step_n(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m, Index s);

Trajectory rollout(const ProcessFunction1& w, const DetPomdp& pomdp, Index m0, Index s0,
                   std::size_t horizon);
Trajectory rollout(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m0, Index s0,
                   std::size_t horizon);

struct TruncatedValue {
  double value = 0.0;
  double error_bound = 0.0;  // gamma^T * Rmax / (1 - gamma)
};

TruncatedValue discounted_reward_truncated(const ProcessFunction1& w, const DetPomdp& pomdp,
                                           Index m0, Index s0, DiscountSpec gamma,
                                           std::size_t steps);
TruncatedValue discounted_reward_truncated(const ProcessFunctionN& w, const DecPomdp& pomdp,
                                           Index m0, Index s0, DiscountSpec gamma,
                                           std::size_t steps);

/// Closed form of sum_{t>=1} gamma^(t-1) r_t: the joint (m, s) trajectory is
/// eventually periodic, so the tail is a geometric series over one period.
double discounted_reward_exact(const ProcessFunction1& w, const DetPomdp& pomdp, Index m0,
                               Index s0, DiscountSpec gamma);
double discounted_reward_exact(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m0,
                               Index s0, DiscountSpec gamma);

/// sum_s mu(s) * discounted_reward_exact(w, P, m0, s).
double performance(const ProcessFunction1& w, const DetPomdp& pomdp, Index m0,
                   const InitialDistribution& mu, DiscountSpec gamma);
double performance(const ProcessFunctionN& w, const DecPomdp& pomdp, Index m0,
                   const InitialDistribution& mu, DiscountSpec gamma);

}  // namespace hopf
