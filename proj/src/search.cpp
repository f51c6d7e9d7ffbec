#include "hopf/search.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "hopf/dynamics.hpp"
#include "parallel.hpp"

namespace hopf {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::vector<std::size_t> row_value_radices(const StrategyShape& shape) {
  std::vector<std::size_t> radices{shape.memory};
  for (const auto& p : shape.parties) radices.push_back(p.actions);
  return radices;
}

std::vector<std::size_t> party_actions(const StrategyShape& shape) {
  std::vector<std::size_t> out;
  for (const auto& p : shape.parties) out.push_back(p.actions);
  return out;
}

std::vector<std::size_t> party_observations(const StrategyShape& shape) {
  std::vector<std::size_t> out;
  for (const auto& p : shape.parties) out.push_back(p.observations);
  return out;
}

// Party actions for each row value: lut[v * n + i].
std::vector<Index> action_lut(const StrategyShape& shape) {
  const auto radices = row_value_radices(shape);
  std::vector<Index> lut;
  for (std::uint64_t v = 0; v < shape.row_values(); ++v) {
    const auto digits = decode_mixed(radices, v);
    lut.insert(lut.end(), digits.begin() + 1, digits.end());
  }
  return lut;
}

}  // namespace

// ---------------------------------------------------------------------------

StrategyShape StrategyShape::for_environment(const DecPomdp& pomdp, std::size_t memory) {
  StrategyShape shape;
  shape.memory = memory;
  for (const auto& party : pomdp.parties()) {
    shape.parties.push_back({party.actions.size(), party.observations.size()});
  }
  shape.validate();
  return shape;
}

void StrategyShape::validate() const {
  if (memory == 0) throw InvariantViolation("shape: memory size must be at least 1");
  if (parties.empty()) throw InvariantViolation("shape: need at least one party");
  for (const auto& p : parties) {
    if (p.actions == 0 || p.observations == 0) {
      throw InvariantViolation("shape: party sets must be non-empty");
    }
  }
}

std::uint64_t StrategyShape::rows() const {
  std::uint64_t out = memory;
  for (const auto& p : parties) out = saturating_mul(out, p.observations);
  return out;
}

std::uint64_t StrategyShape::row_values() const {
  std::uint64_t out = memory;
  for (const auto& p : parties) out = saturating_mul(out, p.actions);
  return out;
}

std::uint64_t StrategyShape::candidate_count() const {
  std::uint64_t out = 1;
  const auto base = row_values();
  for (std::uint64_t r = 0; r < rows(); ++r) out = saturating_mul(out, base);
  return out;
}

// ---------------------------------------------------------------------------

Pf1Enumerator::Pf1Enumerator(std::size_t memory, std::size_t observations, std::size_t actions,
                             std::uint64_t budget)
    : memory_(memory), observations_(observations), actions_(actions), count_(1) {
  if (memory == 0 || observations == 0 || actions == 0) {
    throw InvariantViolation("enumerate_pf_1: sets must be non-empty");
  }
  for (std::size_t m = 0; m < memory; ++m) {
    radix_.push_back(memory);
    radix_.push_back(actions);
    for (std::size_t o = 1; o < observations; ++o) radix_.push_back(memory);
  }
  for (auto r : radix_) count_ = saturating_mul(count_, r);
  if (count_ > budget) {
    throw BudgetExceeded("enumerate_pf_1: " + std::to_string(count_) +
                         " process functions exceed the budget of " + std::to_string(budget));
  }
  digits_.assign(radix_.size(), 0);
}

std::optional<ProcessFunction1> Pf1Enumerator::next() {
  if (done_) return std::nullopt;
  std::vector<Index> entries;
  entries.reserve(memory_ * observations_ * 2);
  const std::size_t stride = observations_ + 1;
  for (std::size_t m = 0; m < memory_; ++m) {
    const Index* d = digits_.data() + m * stride;
    const Index emit = d[1];
    entries.push_back(d[0]);
    entries.push_back(emit);
    for (std::size_t o = 1; o < observations_; ++o) {
      entries.push_back(d[o + 1]);
      entries.push_back(emit);
    }
  }
  ProcessFunction1 w(FiniteSet{memory_}, FiniteSet{observations_}, FiniteSet{memory_},
                     FiniteSet{actions_}, std::move(entries));
  w.set_status(UfpStatus::valid);

  std::size_t pos = digits_.size();
  while (pos > 0 && ++digits_[pos - 1] == radix_[pos - 1]) digits_[--pos] = 0;
  if (pos == 0) done_ = true;
  return w;
}

std::vector<ProcessFunction1> enumerate_pf_1(std::size_t memory, std::size_t observations,
                                             std::size_t actions, std::uint64_t budget) {
  Pf1Enumerator gen(memory, observations, actions, budget);
  std::vector<ProcessFunction1> out;
  out.reserve(gen.count());
  while (auto w = gen.next()) out.push_back(std::move(*w));
  return out;
}

// ---------------------------------------------------------------------------

StrategyCatalog::StrategyCatalog(StrategyShape shape, std::vector<Index> row_values,
                                 std::uint64_t examined, bool sampled)
    : shape_(std::move(shape)),
      rows_(static_cast<std::size_t>(shape_.rows())),
      values_(std::move(row_values)),
      examined_(examined),
      sampled_(sampled) {
  if (rows_ == 0 || values_.size() % rows_ != 0) {
    throw InvariantViolation("catalog: row values do not form whole tables");
  }
}

ProcessFunctionN StrategyCatalog::at(std::size_t k) const {
  if (k >= size()) throw DomainError("catalog index out of range");
  auto w = strategy_from_row_values(shape_, row_values(k));
  w.set_status(UfpStatus::valid);
  return w;
}

ProcessFunctionN strategy_from_row_values(const StrategyShape& shape,
                                          std::span<const Index> row_values) {
  shape.validate();
  if (row_values.size() != shape.rows()) throw TypeMismatch("row values: wrong table length");
  const auto radices = row_value_radices(shape);
  std::vector<Index> entries;
  entries.reserve(row_values.size() * radices.size());
  for (auto v : row_values) {
    if (v >= shape.row_values()) throw DomainError("row value out of range");
    const auto digits = decode_mixed(radices, v);
    entries.insert(entries.end(), digits.begin(), digits.end());
  }
  std::vector<PartyInterface> parties;
  for (const auto& p : shape.parties) {
    parties.push_back({FiniteSet(p.actions), FiniteSet(p.observations)});
  }
  return ProcessFunctionN(FiniteSet(shape.memory), FiniteSet(shape.memory), std::move(parties),
                          std::move(entries));
}

namespace {

StrategyCatalog scan_exhaustive(const StrategyShape& shape, const EnumerateOptions& options) {
  const auto n = shape.parties.size();
  const auto rows = static_cast<std::size_t>(shape.rows());
  const auto base = static_cast<Index>(shape.row_values());
  const auto total = shape.candidate_count();
  const auto lut = action_lut(shape);
  const UfpKernel kernel(shape.memory, party_actions(shape), party_observations(shape));

  const std::size_t shards =
      static_cast<std::size_t>(std::min<std::uint64_t>(total, 256));
  std::vector<std::vector<Index>> found(shards);
  detail::for_each_shard(shards, options.threads, [&](std::size_t k) {
    const std::uint64_t begin = detail::shard_begin(total, k, shards);
    const std::uint64_t end = detail::shard_begin(total, k + 1, shards);
    std::vector<Index> digits(rows, 0);
    std::uint64_t rest = begin;
    for (std::size_t r = rows; r-- > 0;) {
      digits[r] = static_cast<Index>(rest % base);
      rest /= base;
    }
    std::vector<Index> actions(rows * n);
    auto refresh = [&](std::size_t r) {
      std::copy_n(lut.begin() + static_cast<std::ptrdiff_t>(digits[r] * n), n,
                  actions.begin() + static_cast<std::ptrdiff_t>(r * n));
    };
    for (std::size_t r = 0; r < rows; ++r) refresh(r);
    auto& out = found[k];
    for (std::uint64_t c = begin; c < end; ++c) {
      if (kernel.is_valid(actions)) out.insert(out.end(), digits.begin(), digits.end());
      for (std::size_t r = rows; r-- > 0;) {
        const bool carry = ++digits[r] == base;
        if (carry) digits[r] = 0;
        refresh(r);
        if (!carry) break;
      }
    }
  });
  std::vector<Index> values;
  for (auto& chunk : found) values.insert(values.end(), chunk.begin(), chunk.end());
  return StrategyCatalog(shape, std::move(values), total, false);
}

StrategyCatalog scan_sampled(const StrategyShape& shape, const EnumerateOptions& options) {
  const auto n = shape.parties.size();
  const auto rows = static_cast<std::size_t>(shape.rows());
  if (rows > std::numeric_limits<std::uint32_t>::max() / 4) {
    throw BudgetExceeded("sampling: strategy tables are too large");
  }
  const auto lut = action_lut(shape);
  const UfpKernel kernel(shape.memory, party_actions(shape), party_observations(shape));
  const std::uint64_t samples = options.samples;
  constexpr std::size_t kShards = 64;
  std::vector<std::vector<std::vector<Index>>> found(kShards);
  detail::for_each_shard(kShards, options.threads, [&](std::size_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(shape.row_values() - 1));
    std::vector<Index> digits(rows);
    std::vector<Index> actions(rows * n);
    const std::uint64_t count = detail::shard_begin(samples, k + 1, kShards) - detail::shard_begin(samples, k, kShards);
    for (std::uint64_t c = 0; c < count; ++c) {
      for (std::size_t r = 0; r < rows; ++r) {
        digits[r] = pick(rng);
        std::copy_n(lut.begin() + static_cast<std::ptrdiff_t>(digits[r] * n), n,
                    actions.begin() + static_cast<std::ptrdiff_t>(r * n));
      }
      if (kernel.is_valid(actions)) found[k].push_back(digits);
    }
  });
  std::vector<std::vector<Index>> all;
  for (auto& chunk : found) {
    for (auto& t : chunk) all.push_back(std::move(t));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<Index> values;
  for (const auto& t : all) values.insert(values.end(), t.begin(), t.end());
  return StrategyCatalog(shape, std::move(values), samples, true);
}

}  // namespace

StrategyCatalog enumerate_pf_n(const StrategyShape& shape, const EnumerateOptions& options) {
  shape.validate();
  if (shape.row_values() > std::numeric_limits<Index>::max()) {
    throw BudgetExceeded("enumerate_pf_n: row value space too large");
  }
  if (shape.candidate_count() <= options.budget) return scan_exhaustive(shape, options);
  if (!options.allow_sampling) {
    throw BudgetExceeded("enumerate_pf_n: " + std::to_string(shape.candidate_count()) +
                         " candidate tables exceed the budget of " +
                         std::to_string(options.budget));
  }
  return scan_sampled(shape, options);
}

// ---------------------------------------------------------------------------

DecPomdp gyni_env(std::size_t parties) {
  if (parties < 2 || parties > 4) throw DomainError("gyni_env: party count must be in [2, 4]");
  const FiniteSet bit(2);
  std::vector<PartySets> sets(parties, PartySets{bit, bit, bit});
  const std::size_t joint = std::size_t{1} << parties;
  std::vector<std::size_t> radices(parties, 2);

  std::vector<Index> transition, observation;
  std::vector<double> reward;
  for (std::size_t s = 0; s < joint; ++s) {
    const auto inputs = decode_mixed(radices, s);
    for (std::size_t a = 0; a < joint; ++a) {
      const auto guesses = decode_mixed(radices, a);
      transition.push_back(static_cast<Index>((s + 1) % joint));
      observation.push_back(static_cast<Index>(s));
      bool win = true;
      for (std::size_t i = 0; i < parties; ++i) win = win && guesses[i] == inputs[(i + 1) % parties];
      reward.push_back(win ? 1.0 : 0.0);
    }
  }
  DetPomdp pomdp(FiniteSet{joint}, FiniteSet{joint}, FiniteSet{joint}, std::move(transition),
                 std::move(observation), std::move(reward));

  std::vector<TableFunction> factored;
  for (std::size_t i = 0; i < parties; ++i) {
    std::vector<Index> entries;
    for (std::size_t s = 0; s < joint; ++s) {
      const auto inputs = decode_mixed(radices, s);
      entries.push_back(inputs[i]);
      entries.push_back(inputs[i]);
    }
    factored.emplace_back(std::vector<FiniteSet>{FiniteSet(joint), bit}, std::vector<FiniteSet>{bit},
                          std::move(entries));
  }
  return DecPomdp(std::move(sets), std::move(pomdp), std::move(factored));
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  std::size_t index = 0;
  double value = 0.0;
  std::optional<CombOrder> order;
};

struct Sweep {
  std::optional<Candidate> general;
  std::optional<Candidate> ordered;
  std::uint64_t ordered_count = 0;
};

void keep_better(std::optional<Candidate>& best, const Candidate& c) {
  if (!best || c.value > best->value || (c.value == best->value && c.index < best->index)) {
    best = c;
  }
}

Sweep sweep(const StrategyCatalog& catalog, const DecPomdp& pomdp, const SearchOptions& options,
            bool want_general, bool want_ordered) {
  if (!pomdp.observation_independent()) {
    throw NotObservationIndependent("search: environment is not observation independent");
  }
  const DiscountSpec gamma(options.gamma);
  const auto mu =
      options.mu ? *options.mu : InitialDistribution::uniform(pomdp.joint().states().size());
  if (options.m0 >= catalog.shape().memory) throw DomainError("search: m0 out of range");

  const std::size_t total = catalog.size();
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(total, 256));
  std::vector<Sweep> partial(shards);
  detail::for_each_shard(shards, options.enumeration.threads, [&](std::size_t k) {
    auto& local = partial[k];
    for (std::size_t idx = detail::shard_begin(total, k, shards); idx < detail::shard_begin(total, k + 1, shards); ++idx) {
      const auto w = catalog.at(idx);
      auto order = is_causally_ordered(w);
      if (order) ++local.ordered_count;
      if (!want_general && !order) continue;
      const double value = performance(w, pomdp, options.m0, mu, gamma);
      Candidate c{idx, value, order};
      if (want_general) keep_better(local.general, c);
      if (want_ordered && order) keep_better(local.ordered, c);
    }
  });
  Sweep out;
  for (const auto& p : partial) {
    out.ordered_count += p.ordered_count;
    if (p.general) keep_better(out.general, *p.general);
    if (p.ordered) keep_better(out.ordered, *p.ordered);
  }
  return out;
}

StrategyResult materialize(const StrategyCatalog& catalog, const Candidate& c) {
  return {catalog.at(c.index), c.order, c.value};
}

void require_shape(const DecPomdp& pomdp, const StrategyShape& shape) {
  shape.validate();
  const auto expected = StrategyShape::for_environment(pomdp, shape.memory);
  if (!(expected == shape)) throw TypeMismatch("search: shape does not match the environment");
}

}  // namespace

StrategyResult best_strategy(const DecPomdp& pomdp, const StrategyShape& shape, SearchMode mode,
                             const SearchOptions& options) {
  require_shape(pomdp, shape);
  const auto catalog = enumerate_pf_n(shape, options.enumeration);
  const bool general = mode == SearchMode::general;
  const auto result = sweep(catalog, pomdp, options, general, !general);
  const auto& best = general ? result.general : result.ordered;
  if (!best) throw NoStrategy("best_strategy: no candidate strategy in this mode");
  return materialize(catalog, *best);
}

SearchReport search_catalog(const StrategyCatalog& catalog, const DecPomdp& pomdp,
                            const SearchOptions& options, bool general, bool ordered,
                            std::string environment_id) {
  require_shape(pomdp, catalog.shape());
  const auto result = sweep(catalog, pomdp, options, general, ordered);
  if ((general && !result.general) || (ordered && !result.ordered)) {
    throw NoStrategy("search: no candidate strategy found");
  }
  SearchReport report;
  report.shape = catalog.shape();
  report.environment_id = std::move(environment_id);
  report.gamma = options.gamma;
  report.m0 = options.m0;
  if (general) report.best_general = materialize(catalog, *result.general);
  if (ordered) report.best_ordered = materialize(catalog, *result.ordered);
  report.counts = {catalog.examined(), catalog.size(), result.ordered_count};
  if (general && ordered) report.advantage = report.best_general->value - report.best_ordered->value;
  report.seed = options.enumeration.seed;
  report.budget = options.enumeration.budget;
  report.sampled = catalog.sampled();
  return report;
}

SearchReport advantage_search(const DecPomdp& pomdp, const StrategyShape& shape,
                              const SearchOptions& options, std::string environment_id) {
  require_shape(pomdp, shape);
  const auto catalog = enumerate_pf_n(shape, options.enumeration);
  return search_catalog(catalog, pomdp, options, true, true, std::move(environment_id));
}

std::optional<ProcessFunctionN> find_unordered(const StrategyCatalog& catalog) {
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    auto w = catalog.at(k);
    if (!is_causally_ordered(w)) return w;
  }
  return std::nullopt;
}

}  // namespace hopf
