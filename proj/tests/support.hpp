#pragma once

// Generators and naive reference implementations used by the tests. The
// oracles deliberately avoid the library's kernels: they recurse over
// inserted functions and compare table rows pairwise.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <random>
#include <vector>

#include "hopf/core.hpp"

namespace hopf::test {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline std::vector<Index> random_entries(Rng& rng, std::size_t rows,
                                         const std::vector<std::size_t>& radices) {
  std::vector<Index> out;
  out.reserve(rows * radices.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto k : radices) out.push_back(static_cast<Index>(uniform(rng, k)));
  }
  return out;
}

inline DetPomdp random_pomdp(Rng& rng, std::size_t s, std::size_t a, std::size_t o,
                             bool integer_rewards = false) {
  std::vector<double> reward(s * a);
  std::uniform_real_distribution<double> real(-2.0, 3.0);
  for (auto& r : reward) r = integer_rewards ? static_cast<double>(uniform(rng, 4)) : real(rng);
  return DetPomdp(FiniteSet(s), FiniteSet(a), FiniteSet(o), random_entries(rng, s * a, {s}),
                  random_entries(rng, s * a, {o}), std::move(reward));
}

inline Agent random_agent(Rng& rng, std::size_t m, std::size_t a, std::size_t o) {
  return Agent(FiniteSet(m), FiniteSet(a), FiniteSet(o), random_entries(rng, m, {a}),
               random_entries(rng, m * a * o, {m}));
}

/// Every table over `rows` rows whose entries have the given radices.
inline void for_each_table(std::size_t rows, const std::vector<std::size_t>& radices,
                           const std::function<void(const std::vector<Index>&)>& visit) {
  std::vector<Index> entries(rows * radices.size(), 0);
  const std::size_t width = radices.size();
  while (true) {
    visit(entries);
    std::size_t pos = entries.size();
    while (pos > 0) {
      --pos;
      if (++entries[pos] < radices[pos % width]) break;
      entries[pos] = 0;
      if (pos == 0) return;
    }
  }
}

/// Solutions of o_i = f_i(w_{A_i}(p, o)) at p, for one inserted tuple.
inline std::vector<IndexTuple> naive_solutions(const ProcessFunctionN& w, Index p,
                                               const std::vector<std::vector<Index>>& f) {
  const auto obs = w.observation_sizes();
  std::vector<IndexTuple> out;
  for (std::size_t j = 0; j < w.joint_observation_count(); ++j) {
    const auto o = decode_mixed(obs, j);
    const auto row = w.row(p, j);
    bool fixed = true;
    for (std::size_t i = 0; i < w.party_count() && fixed; ++i) fixed = f[i][w.action(row, i)] == o[i];
    if (fixed) out.push_back(o);
  }
  return out;
}

/// Reference decision of the n-input fixed-point condition by recursion over
/// inserted tuples.
inline bool naive_ufp_n(const ProcessFunctionN& w) {
  const auto acts = w.action_sizes();
  const auto obs = w.observation_sizes();
  std::vector<std::vector<Index>> f(w.party_count());
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == w.party_count()) {
      for (Index p = 0; p < w.past().size(); ++p) {
        if (naive_solutions(w, p, f).size() != 1) return false;
      }
      return true;
    }
    bool ok = true;
    for_each_table(acts[i], {obs[i]}, [&](const std::vector<Index>& table) {
      if (!ok) return;
      f[i] = table;
      ok = rec(i + 1);
    });
    return ok;
  };
  return rec(0);
}

/// Reference static-order check: two rows that agree on p and on the
/// observations of the parties before sigma(k) must agree on a_sigma(k).
inline bool naive_comb_order(const ProcessFunctionN& w, const std::vector<std::size_t>& sigma) {
  const auto obs = w.observation_sizes();
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    std::vector<bool> allowed(sigma.size(), false);
    for (std::size_t j = 0; j < k; ++j) allowed[sigma[j]] = true;
    for (Index p = 0; p < w.past().size(); ++p) {
      for (std::size_t x = 0; x < w.joint_observation_count(); ++x) {
        for (std::size_t y = x + 1; y < w.joint_observation_count(); ++y) {
          const auto ox = decode_mixed(obs, x), oy = decode_mixed(obs, y);
          bool same = true;
          for (std::size_t i = 0; i < sigma.size(); ++i) same = same && (!allowed[i] || ox[i] == oy[i]);
          if (same && w.action(w.row(p, x), sigma[k]) != w.action(w.row(p, y), sigma[k])) return false;
        }
      }
    }
  }
  return true;
}

/// Reward sequence of an agent driven directly, without process functions.
inline std::vector<double> direct_rewards(const Agent& agent, const DetPomdp& pomdp, Index m,
                                          Index s, std::size_t steps) {
  std::vector<double> out;
  for (std::size_t t = 0; t < steps; ++t) {
    const Index a = agent.act(m);
    out.push_back(pomdp.reward(s, a));
    const Index o = pomdp.observe(s, a);
    m = agent.next_memory(m, a, o);
    s = pomdp.next_state(s, a);
  }
  return out;
}

inline double discounted(const std::vector<double>& rewards, double gamma) {
  double sum = 0.0, weight = 1.0;
  for (double r : rewards) {
    sum += weight * r;
    weight *= gamma;
  }
  return sum;
}

struct PartySizes {
  std::size_t states, actions, observations;
};

/// Dec-POMDP over per-party tuples. `step` maps (s, a) tuples to the next
/// state tuple, `observe` to the observation tuple. Factored observations are
/// derived when `factored` is set (the caller promises independence).
inline DecPomdp make_dec(
    const std::vector<PartySizes>& sizes,
    const std::function<IndexTuple(const IndexTuple&, const IndexTuple&)>& step,
    const std::function<IndexTuple(const IndexTuple&, const IndexTuple&)>& observe,
    const std::function<double(const IndexTuple&, const IndexTuple&)>& reward, bool factored) {
  std::vector<std::size_t> ss, as, os;
  std::vector<PartySets> parties;
  for (const auto& p : sizes) {
    ss.push_back(p.states);
    as.push_back(p.actions);
    os.push_back(p.observations);
    parties.push_back({FiniteSet(p.states), FiniteSet(p.actions), FiniteSet(p.observations)});
  }
  std::size_t ns = 1, na = 1, no = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) ns *= ss[i], na *= as[i], no *= os[i];
  std::vector<Index> t, o;
  std::vector<double> r;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      const auto st = decode_mixed(ss, s), at = decode_mixed(as, a);
      t.push_back(static_cast<Index>(encode_mixed(ss, step(st, at))));
      o.push_back(static_cast<Index>(encode_mixed(os, observe(st, at))));
      r.push_back(reward(st, at));
    }
  }
  DetPomdp joint(FiniteSet(ns), FiniteSet(na), FiniteSet(no), std::move(t), std::move(o),
                 std::move(r));
  std::optional<std::vector<TableFunction>> local;
  if (factored) {
    local.emplace();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      local->push_back(TableFunction::tabulate(
          {FiniteSet(ns), FiniteSet(as[i])}, {FiniteSet(os[i])}, [&](std::span<const Index> in) {
            IndexTuple at(sizes.size(), 0);
            at[i] = in[1];
            return IndexTuple{observe(decode_mixed(ss, in[0]), at)[i]};
          }));
    }
  }
  return DecPomdp(std::move(parties), std::move(joint), std::move(local));
}

/// Two-party bit process function with trivial P/F from an action rule.
inline ProcessFunctionN bit_pf2(const std::function<std::pair<Index, Index>(Index, Index)>& rule) {
  std::vector<Index> entries;
  for (Index o1 = 0; o1 < 2; ++o1) {
    for (Index o2 = 0; o2 < 2; ++o2) {
      const auto [a1, a2] = rule(o1, o2);
      entries.insert(entries.end(), {0, a1, a2});
    }
  }
  const PartyInterface bit{FiniteSet(2), FiniteSet(2)};
  return ProcessFunctionN(FiniteSet(1), FiniteSet(1), {bit, bit}, std::move(entries));
}

}  // namespace hopf::test
