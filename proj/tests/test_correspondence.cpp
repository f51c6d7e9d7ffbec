#include "doctest.h"
#include "hopf/correspondence.hpp"
#include "hopf/verify.hpp"
#include "support.hpp"

using namespace hopf;

namespace {

const FiniteSet kBit(2);

void for_each_bit_agent(const std::function<void(const Agent&)>& visit) {
  test::for_each_table(2, {2}, [&](const std::vector<Index>& policy) {
    test::for_each_table(8, {2}, [&](const std::vector<Index>& update) {
      visit(Agent(kBit, kBit, kBit, policy, update));
    });
  });
}

// Searches every probe environment of the agents' size for a step on which
// they differ.
bool probes_distinguish(const Agent& a, const Agent& b) {
  const auto& obs = a.observations();
  const auto& acts = a.actions();
  for (Index o = 0; o < obs.size(); ++o) {
    for (Index prev = 0; prev < acts.size(); ++prev) {
      for (Index reset = 0; reset < obs.size(); ++reset) {
        const auto probe = probe_pomdp(obs, acts, o, prev, reset);
        const Index s = probe_state(acts, o, prev);
        for (Index m = 0; m < a.memory().size(); ++m) {
          if (!(one_step_direct(a, probe, m, s) == one_step_direct(b, probe, m, s))) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

TEST_SUITE("correspondence") {

TEST_CASE("agent to process function examples") {
  const Agent echo(kBit, kBit, kBit, {0, 1}, {0, 1, 0, 1, 0, 1, 0, 1});
  const auto w = agent_to_pf(echo);
  CHECK(w.status() == UfpStatus::valid);
  for (Index m = 0; m < 2; ++m) {
    for (Index o = 0; o < 2; ++o) {
      CHECK(w.forward(m, o) == o);
      CHECK(w.emitted(m, o) == m);
    }
  }

  const Agent still(kBit, kBit, kBit, {0, 0}, {0, 0, 0, 0, 1, 1, 1, 1});
  const auto v = agent_to_pf(still);
  CHECK(v.table().entries() == std::vector<Index>{0, 0, 0, 0, 1, 0, 1, 0});
}

TEST_CASE("process function to agent examples") {
  const auto w = validated(ProcessFunction1(kBit, kBit, kBit, kBit, {0, 0, 1, 0, 0, 1, 1, 1}));
  const auto agent = pf_to_agent(w);
  CHECK(agent.policy().entries() == std::vector<Index>{0, 1});
  for (Index m = 0; m < 2; ++m) {
    for (Index a = 0; a < 2; ++a) {
      for (Index o = 0; o < 2; ++o) CHECK(agent.next_memory(m, a, o) == o);
    }
  }

  CHECK_THROWS_AS(pf_to_agent(ProcessFunction1(kBit, kBit, kBit, kBit, {0, 0, 1, 0, 0, 1, 1, 1})),
                  PreconditionError);
  const auto wide = validated(ProcessFunction1(kBit, kBit, FiniteSet(3), kBit,
                                               {0, 0, 1, 0, 2, 1, 1, 1}));
  CHECK_THROWS_AS(pf_to_agent(wide), TypeMismatch);
}

TEST_CASE("induced process functions pass the brute-force check") {
  for_each_bit_agent([](const Agent& a) { CHECK(check_ufp_1_bruteforce(agent_to_pf(a)).valid); });
  test::Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = test::random_agent(rng, 1 + test::uniform(rng, 3), 1 + test::uniform(rng, 3),
                                      1 + test::uniform(rng, 3));
    CHECK(check_ufp_1_bruteforce(agent_to_pf(a)).valid);
  }
}

TEST_CASE("bijection on process functions") {
  int count = 0;
  test::for_each_table(4, {2, 2}, [&](const std::vector<Index>& entries) {
    auto w = validated(ProcessFunction1(kBit, kBit, kBit, kBit, entries));
    if (w.status() != UfpStatus::valid) return;
    ++count;
    CHECK(agent_to_pf(pf_to_agent(w)) == w);
  });
  CHECK(count == 64);

  test::Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = agent_to_pf(test::random_agent(rng, 3, 3, 3));
    CHECK(agent_to_pf(pf_to_agent(w)) == w);
  }
}

TEST_CASE("round trip through process functions preserves agents up to equivalence") {
  for_each_bit_agent([](const Agent& a) {
    const auto back = pf_to_agent(agent_to_pf(a));
    CHECK(agents_equivalent(a, back));
    CHECK_FALSE(probes_distinguish(a, back));
  });
}

TEST_CASE("equivalence is sound and complete against the probe family") {
  std::vector<Agent> agents;
  for_each_bit_agent([&](const Agent& a) { agents.push_back(a); });
  test::Rng rng(61);
  for (int trial = 0; trial < 4000; ++trial) {
    const auto& a = agents[test::uniform(rng, agents.size())];
    const auto& b = agents[test::uniform(rng, agents.size())];
    const bool same = agents_equivalent(a, b);
    CHECK(same == agents_equivalent(b, a));
    CHECK(same == !probes_distinguish(a, b));
  }
  for (const auto& a : agents) CHECK(agents_equivalent(a, a));
}

TEST_CASE("equivalence examples") {
  // Updates differ only under the action the policy never takes at m = 0.
  const Agent a(kBit, kBit, kBit, {0, 1}, {0, 1, 0, 0, 1, 1, 0, 1});
  const Agent b(kBit, kBit, kBit, {0, 1}, {0, 1, 1, 1, 1, 1, 0, 1});
  CHECK(agents_equivalent(a, b));
  CHECK_FALSE(probes_distinguish(a, b));

  const Agent c(kBit, kBit, kBit, {1, 1}, {0, 1, 0, 0, 1, 1, 0, 1});
  CHECK_FALSE(agents_equivalent(a, c));
  CHECK(probes_distinguish(a, c));

  const Agent other(FiniteSet(3), kBit, kBit, {0, 1, 0}, std::vector<Index>(12, 0));
  CHECK_THROWS_AS(agents_equivalent(a, other), TypeMismatch);
}

TEST_CASE("probe environments") {
  const FiniteSet obs(3), acts(2);
  for (Index reset = 0; reset < 3; ++reset) {
    const auto p = probe_pomdp(obs, acts, 1, 0, reset);
    CHECK(p.states().size() == 6);
    for (Index o = 0; o < 3; ++o) {
      for (Index prev = 0; prev < 2; ++prev) {
        const Index s = probe_state(acts, o, prev);
        for (Index a = 0; a < 2; ++a) {
          CHECK(p.observe(s, a) == o);
          CHECK(p.reward(s, a) == 1.0);
          CHECK(p.next_state(s, a) == probe_state(acts, reset, a));
        }
      }
    }
  }
  CHECK_THROWS_AS(probe_pomdp(obs, acts, 3, 0, 0), DomainError);
}

TEST_CASE("one step of an agent") {
  const FiniteSet one(1);
  const DetPomdp constant(one, kBit, one, {0, 0}, {0, 0}, {2.5, 2.5});
  const Agent agent(kBit, kBit, one, {1, 0}, {1, 0, 0, 1});
  CHECK(one_step_direct(agent, constant, 0, 0) == StepResult{0, 0, 2.5});
  CHECK(one_step_direct(agent, constant, 1, 0) == StepResult{0, 0, 2.5});

  // O(s, a) = s, so the agent reads the state.
  const DetPomdp reveal(kBit, kBit, kBit, {1, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 2, 3});
  const Agent reader(kBit, kBit, kBit, {1, 0}, {0, 1, 1, 0, 1, 1, 0, 0});
  for (Index m = 0; m < 2; ++m) {
    for (Index s = 0; s < 2; ++s) {
      const auto step = one_step_direct(reader, reveal, m, s);
      CHECK(step.memory == reader.next_memory(m, reader.act(m), s));
    }
  }

  const DetPomdp wide(one, FiniteSet(3), one, {0, 0, 0}, {0, 0, 0}, {0, 0, 0});
  CHECK_THROWS_AS(one_step_direct(agent, wide, 0, 0), TypeMismatch);
}

}  // TEST_SUITE
