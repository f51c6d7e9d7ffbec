#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hopf/dynamics.hpp"
#include "hopf/search.hpp"
#include "hopf/verify.hpp"
#include "support.hpp"

using namespace hopf;

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t out = 1;
  while (e--) out *= b;
  return out;
}

StrategyShape bit_shape(std::size_t parties, std::size_t memory = 1) {
  return StrategyShape{memory, std::vector<PartyShape>(parties, PartyShape{2, 2})};
}

// Random observation-independent two-party bit environment.
DecPomdp random_bit_env(test::Rng& rng) {
  const auto t = test::random_entries(rng, 16, {4});
  const auto o1 = test::random_entries(rng, 8, {2});
  const auto o2 = test::random_entries(rng, 8, {2});
  const auto r = test::random_entries(rng, 16, {3});
  return test::make_dec(
      {{2, 2, 2}, {2, 2, 2}},
      [=](const IndexTuple& s, const IndexTuple& a) {
        return decode_mixed(std::vector<std::size_t>{2, 2}, t[(s[0] * 2 + s[1]) * 4 + a[0] * 2 + a[1]]);
      },
      [=](const IndexTuple& s, const IndexTuple& a) {
        const std::size_t joint = s[0] * 2 + s[1];
        return IndexTuple{o1[joint * 2 + a[0]], o2[joint * 2 + a[1]]};
      },
      [=](const IndexTuple& s, const IndexTuple& a) {
        return 0.5 * r[(s[0] * 2 + s[1]) * 4 + a[0] * 2 + a[1]];
      },
      true);
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("shapes") {
  const auto shape = bit_shape(3);
  CHECK(shape.rows() == 8);
  CHECK(shape.row_values() == 8);
  CHECK(shape.candidate_count() == ipow(8, 8));
  CHECK(StrategyShape::for_environment(gyni_env(3), 1) == shape);
  CHECK(StrategyShape{2, {{5, 5}, {5, 5}, {5, 5}}}.candidate_count() == UINT64_MAX);
  const StrategyShape no_memory{0, {{2, 2}}};
  const StrategyShape no_parties{1, {}};
  CHECK_THROWS_AS(no_memory.validate(), InvariantViolation);
  CHECK_THROWS_AS(no_parties.validate(), InvariantViolation);
}

TEST_CASE("one-input enumeration counts") {
  for (std::size_t m = 1; m <= 3; ++m) {
    for (std::size_t o = 1; o <= 3; ++o) {
      for (std::size_t a = 1; a <= 3; ++a) {
        Pf1Enumerator e(m, o, a);
        const auto expected = ipow(m, m * o) * ipow(a, m);
        CHECK(e.count() == expected);
        std::uint64_t seen = 0;
        while (e.next()) ++seen;
        CHECK(seen == expected);
      }
    }
  }
  CHECK(enumerate_pf_1(1, 2, 3).size() == 3);
  CHECK_THROWS_AS(Pf1Enumerator(3, 3, 3, 1000), BudgetExceeded);
}

TEST_CASE("one-input enumeration is the filtered table list in order") {
  std::vector<ProcessFunction1> filtered;
  const FiniteSet bit(2);
  test::for_each_table(4, {2, 2}, [&](const std::vector<Index>& entries) {
    ProcessFunction1 w(bit, bit, bit, bit, entries);
    if (check_ufp_1_bruteforce(w).valid) {
      w.set_status(UfpStatus::valid);
      filtered.push_back(w);
    }
  });
  const auto listed = enumerate_pf_1(2, 2, 2);
  CHECK(listed.size() == 64);
  CHECK(listed == filtered);

  for (const auto& w : enumerate_pf_1(2, 3, 3)) CHECK(check_ufp_1_bruteforce(w).valid);
}

TEST_CASE("n-input enumeration") {
  SUBCASE("a single party reproduces the one-input list") {
    const auto catalog = enumerate_pf_n(StrategyShape{2, {{3, 2}}});
    const auto listed = enumerate_pf_1(2, 2, 3);
    REQUIRE(catalog.size() == listed.size());
    for (std::size_t k = 0; k < listed.size(); ++k) {
      CHECK(catalog.at(k).to_one_input() == listed[k]);
    }
  }
  SUBCASE("two bit parties match the recursive oracle") {
    const auto catalog = enumerate_pf_n(bit_shape(2));
    std::vector<std::vector<Index>> expected;
    const PartyInterface bit{FiniteSet(2), FiniteSet(2)};
    test::for_each_table(4, {1, 2, 2}, [&](const std::vector<Index>& entries) {
      if (test::naive_ufp_n(ProcessFunctionN(FiniteSet(1), FiniteSet(1), {bit, bit}, entries))) {
        expected.push_back(entries);
      }
    });
    REQUIRE(catalog.size() == expected.size());
    CHECK(catalog.examined() == 256);
    CHECK_FALSE(catalog.sampled());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      CHECK(catalog.at(k).table().entries() == expected[k]);
      CHECK(check_ufp_n(catalog.at(k), kDefaultBudget, 1).valid);
    }
  }
  SUBCASE("memory and mixed sizes match the recursive oracle") {
    const StrategyShape shape{2, {{2, 1}, {1, 2}}};
    const auto catalog = enumerate_pf_n(shape);
    std::size_t expected = 0;
    const std::vector<PartyInterface> parties{{FiniteSet(2), FiniteSet(1)}, {FiniteSet(1), FiniteSet(2)}};
    test::for_each_table(4, {2, 2, 1}, [&](const std::vector<Index>& entries) {
      expected += test::naive_ufp_n(ProcessFunctionN(FiniteSet(2), FiniteSet(2), parties, entries));
    });
    CHECK(catalog.size() == expected);
  }
  SUBCASE("worker count does not change the catalog") {
    EnumerateOptions one;
    one.threads = 1;
    EnumerateOptions many;
    many.threads = 5;
    const auto a = enumerate_pf_n(StrategyShape{2, {{2, 2}}}, one);
    const auto b = enumerate_pf_n(StrategyShape{2, {{2, 2}}}, many);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.at(k) == b.at(k));
  }
}

TEST_CASE("sampling mode") {
  EnumerateOptions options;
  options.budget = 100;
  options.samples = 60;
  options.seed = 1234;
  const auto shape = bit_shape(2);
  options.threads = 1;
  const auto a = enumerate_pf_n(shape, options);
  options.threads = 4;
  const auto b = enumerate_pf_n(shape, options);
  CHECK(a.sampled());
  CHECK(a.examined() == 60);
  CHECK(a.size() > 0);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::equal(a.row_values(k).begin(), a.row_values(k).end(), b.row_values(k).begin()));
    CHECK(check_ufp_n(a.at(k), kDefaultBudget, 1).valid);
    if (k > 0) {
      CHECK(std::lexicographical_compare(a.row_values(k - 1).begin(), a.row_values(k - 1).end(),
                                         a.row_values(k).begin(), a.row_values(k).end()));
    }
  }
  options.seed = 4321;
  const auto c = enumerate_pf_n(shape, options);
  bool differs = c.size() != a.size();
  for (std::size_t k = 0; !differs && k < a.size(); ++k) differs = !(c.at(k) == a.at(k));
  CHECK(differs);

  options.allow_sampling = false;
  CHECK_THROWS_AS(enumerate_pf_n(shape, options), BudgetExceeded);
}

TEST_CASE("guess your neighbour's input") {
  const auto env = gyni_env(2);
  CHECK(env.observation_independent());
  CHECK(std::holds_alternative<std::vector<TableFunction>>(check_obs_independence(env.with_factored_obs(std::nullopt))));
  const Index s = env.join_state(IndexTuple{0, 1});
  CHECK(env.joint().reward(s, env.join_action(IndexTuple{1, 0})) == 1.0);
  CHECK(env.joint().reward(s, env.join_action(IndexTuple{0, 0})) == 0.0);
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto g = gyni_env(n);
    const std::size_t states = std::size_t{1} << n;
    for (Index st = 0; st < states; ++st) {
      const auto bits = g.split_state(st);
      for (Index a = 0; a < states; ++a) {
        const auto guess = g.split_action(a);
        bool win = true;
        for (std::size_t i = 0; i < n; ++i) win = win && guess[i] == bits[(i + 1) % n];
        CHECK(g.joint().reward(st, a) == (win ? 1.0 : 0.0));
        CHECK(g.split_observation(g.joint().observe(st, a)) == bits);
      }
    }
  }
  CHECK_THROWS_AS(gyni_env(1), DomainError);
  CHECK_THROWS_AS(gyni_env(5), DomainError);
}

TEST_CASE("best strategy on a single-strategy shape") {
  const auto env = test::make_dec(
      {{3, 1, 1}}, [](const IndexTuple& s, const IndexTuple&) { return s; },
      [](const IndexTuple&, const IndexTuple&) { return IndexTuple{0}; },
      [](const IndexTuple& s, const IndexTuple&) { return 1.0 + s[0]; }, true);
  SearchOptions options;
  options.gamma = 0.5;
  const auto best = best_strategy(env, StrategyShape{1, {{1, 1}}}, SearchMode::general, options);
  CHECK(std::abs(best.value - (1.0 + 2.0 + 3.0) / 3.0 / 0.5) < 1e-12);
  CHECK(best.order == CombOrder({0}));
}

TEST_CASE("best strategy ties go to the first table") {
  test::Rng rng(103);
  for (int trial = 0; trial < 5; ++trial) {
    const auto env = random_bit_env(rng);
    SearchOptions options;
    options.gamma = 0.5;
    const auto shape = bit_shape(2);
    const auto best = best_strategy(env, shape, SearchMode::general, options);
    const auto catalog = enumerate_pf_n(shape);
    const auto mu = InitialDistribution::uniform(4);
    double top = -INFINITY;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      const double v = performance(catalog.at(k), env, 0, mu, DiscountSpec(0.5));
      if (v > top) top = v, arg = k;
    }
    CHECK(best.value == top);
    CHECK(best.strategy == catalog.at(arg));
  }
}

TEST_CASE("advantage is never negative and vanishes at one and two bit parties") {
  test::Rng rng(107);
  std::vector<DecPomdp> envs{gyni_env(2)};
  for (int k = 0; k < 6; ++k) envs.push_back(random_bit_env(rng));
  for (const auto& env : envs) {
    for (double gamma : {0.0, 0.5, 0.9}) {
      SearchOptions options;
      options.gamma = gamma;
      const auto report = advantage_search(env, bit_shape(2), options, "bits");
      REQUIRE(report.advantage);
      CHECK(*report.advantage == 0.0);
      CHECK(report.counts.ordered == report.counts.valid);
      CHECK(report.counts.valid <= report.counts.total);
      CHECK(report.best_ordered->value <= report.best_general->value);
    }
  }
  for (int k = 0; k < 10; ++k) {
    const auto p = test::random_pomdp(rng, 1 + test::uniform(rng, 3), 1 + test::uniform(rng, 2),
                                      1 + test::uniform(rng, 2));
    const auto env = as_single_party(p);
    const auto report = advantage_search(env, StrategyShape::for_environment(env, 2));
    CHECK(*report.advantage == 0.0);
    CHECK(report.counts.ordered == report.counts.valid);
  }
}

TEST_CASE("search reports are consistent on three parties") {
  SearchOptions options;
  options.gamma = 0.5;
  const auto report = advantage_search(gyni_env(3), bit_shape(3), options, "gyni-3");
  CHECK(report.counts.total == ipow(8, 8));
  CHECK(report.counts.ordered <= report.counts.valid);
  CHECK(report.counts.valid <= report.counts.total);
  CHECK(report.counts.ordered < report.counts.valid);
  CHECK(*report.advantage >= 0.0);
  CHECK(report.best_ordered->order.has_value());
  CHECK(check_comb_order(report.best_ordered->strategy, *report.best_ordered->order));
}

TEST_CASE("search errors") {
  SearchOptions options;
  options.enumeration.budget = 10;
  options.enumeration.samples = 0;
  CHECK_THROWS_AS(best_strategy(gyni_env(2), bit_shape(2), SearchMode::general, options), NoStrategy);
  CHECK_THROWS_AS(best_strategy(gyni_env(2), bit_shape(3), SearchMode::general), TypeMismatch);
  CHECK_THROWS_AS(best_strategy(gyni_env(2).with_factored_obs(std::nullopt), bit_shape(2), SearchMode::general),
                  NotObservationIndependent);
}

TEST_CASE("first unordered strategy on three bit parties") {
  const auto catalog = enumerate_pf_n(bit_shape(3));
  const auto w = find_unordered(catalog);
  REQUIRE(w);
  CHECK_FALSE(is_causally_ordered(*w));
  CHECK(test::naive_ufp_n(*w));
  std::vector<std::size_t> sigma{0, 1, 2};
  do {
    CHECK_FALSE(test::naive_comb_order(*w, sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  CHECK_FALSE(find_unordered(enumerate_pf_n(bit_shape(2))));
}

}  // TEST_SUITE
