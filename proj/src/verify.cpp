#include "hopf/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "parallel.hpp"

namespace hopf {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("HOPF_BUDGET")) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return kDefaultBudget;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < exp; ++k) out = saturating_mul(out, base);
  return out;
}

void require_budget(std::uint64_t cost, std::uint64_t budget, const char* what) {
  if (cost > budget) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(cost) +
                         " elementary checks exceed the budget of " + std::to_string(budget));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// One-input process functions.

UfpVerdict check_ufp_1_bruteforce(const ProcessFunction1& w, std::uint64_t budget) {
  const std::size_t n_obs = w.obs().size();
  const std::size_t n_in = w.input().size();
  const std::size_t n_past = w.past().size();
  const auto cost = saturating_mul(saturating_mul(saturating_pow(n_obs, n_in), n_past), n_obs);
  require_budget(cost, budget, "check_ufp_1_bruteforce");

  std::vector<Index> f(n_in, 0);
  while (true) {
    for (Index p = 0; p < n_past; ++p) {
      std::vector<IndexTuple> solutions;
      for (Index o = 0; o < n_obs; ++o) {
        if (f[w.emitted(p, o)] == o) solutions.push_back({o});
      }
      if (solutions.size() != 1) {
        return {false, UfpWitness{p, {f}, std::move(solutions)}};
      }
    }
    std::size_t pos = n_in;
    while (pos > 0 && ++f[pos - 1] == n_obs) f[--pos] = 0;
    if (pos == 0) break;
  }
  return {true, std::nullopt};
}

UfpVerdict check_ufp_1_fast(const ProcessFunction1& w) {
  for (Index p = 0; p < w.past().size(); ++p) {
    const Index first = w.emitted(p, 0);
    for (Index o = 1; o < w.obs().size(); ++o) {
      const Index other = w.emitted(p, o);
      if (other == first) continue;
      // f sends w_I(p,0) to 0 and w_I(p,o) to o: both are fixed points.
      IndexTuple f(w.input().size(), 0);
      f[other] = o;
      std::vector<IndexTuple> solutions;
      for (Index x = 0; x < w.obs().size(); ++x) {
        if (f[w.emitted(p, x)] == x) solutions.push_back({x});
      }
      return {false, UfpWitness{p, {std::move(f)}, std::move(solutions)}};
    }
  }
  return {true, std::nullopt};
}

ProcessFunction1 validated(ProcessFunction1 w) {
  auto verdict = check_ufp_1_fast(w);
  w.set_status(verdict.valid ? UfpStatus::valid : UfpStatus::invalid, std::move(verdict.witness));
  return w;
}

Lens decompose(const ProcessFunction1& w) {
  if (w.status() != UfpStatus::valid) {
    throw PreconditionError("decompose: process function has not been validated");
  }
  std::vector<Index> forward, emit;
  for (Index p = 0; p < w.past().size(); ++p) {
    emit.push_back(w.emitted(p, 0));
    for (Index o = 0; o < w.obs().size(); ++o) forward.push_back(w.forward(p, o));
  }
  return {TableFunction({w.past(), w.obs()}, {w.future()}, std::move(forward)),
          TableFunction({w.past()}, {w.input()}, std::move(emit))};
}

ProcessFunction1 recompose(const Lens& lens) {
  const auto& past = lens.forward.domain().at(0);
  const auto& obs = lens.forward.domain().at(1);
  if (lens.emit.domain().size() != 1 || lens.emit.domain()[0].size() != past.size()) {
    throw TypeMismatch("recompose: forward and emit disagree on P");
  }
  std::vector<Index> entries;
  for (Index p = 0; p < past.size(); ++p) {
    for (Index o = 0; o < obs.size(); ++o) {
      entries.push_back(lens.forward({p, o}));
      entries.push_back(lens.emit({p}));
    }
  }
  ProcessFunction1 w(past, obs, lens.forward.codomain()[0], lens.emit.codomain()[0],
                     std::move(entries));
  w.set_status(UfpStatus::valid);
  return w;
}

// ---------------------------------------------------------------------------
// n-input process functions.

UfpKernel::UfpKernel(std::size_t past_size, std::vector<std::size_t> action_sizes,
                     std::vector<std::size_t> observation_sizes)
    : past_size_(past_size),
      action_sizes_(std::move(action_sizes)),
      observation_sizes_(std::move(observation_sizes)) {
  const auto n = action_sizes_.size();
  if (n == 0 || observation_sizes_.size() != n) {
    throw TypeMismatch("UfpKernel: action and observation lists must be non-empty and aligned");
  }
  joint_obs_ = static_cast<std::size_t>(checked_product(observation_sizes_));
  for (std::size_t i = 0; i < n; ++i) {
    table_offsets_.push_back(digit_radix_.size());
    digit_radix_.insert(digit_radix_.end(), action_sizes_[i], observation_sizes_[i]);
    inserted_count_ =
        saturating_mul(inserted_count_, saturating_pow(observation_sizes_[i], action_sizes_[i]));
  }
  obs_digits_.reserve(joint_obs_ * n);
  for (std::size_t o = 0; o < joint_obs_; ++o) {
    auto digits = decode_mixed(observation_sizes_, o);
    obs_digits_.insert(obs_digits_.end(), digits.begin(), digits.end());
  }
}

std::uint64_t UfpKernel::cost() const {
  return saturating_mul(saturating_mul(inserted_count_, past_size_), joint_obs_);
}

void UfpKernel::decode_inserted(std::uint64_t k, std::vector<Index>& flat) const {
  flat.assign(digit_radix_.size(), 0);
  for (std::size_t pos = digit_radix_.size(); pos-- > 0;) {
    flat[pos] = static_cast<Index>(k % digit_radix_[pos]);
    k /= digit_radix_[pos];
  }
}

bool UfpKernel::advance(std::vector<Index>& flat) const {
  for (std::size_t pos = flat.size(); pos-- > 0;) {
    if (++flat[pos] < digit_radix_[pos]) return true;
    flat[pos] = 0;
  }
  return false;
}

int UfpKernel::count_solutions(std::size_t p, const std::vector<Index>& flat,
                               std::span<const Index> actions) const {
  const auto n = party_count();
  int count = 0;
  const Index* row = actions.data() + p * joint_obs_ * n;
  const Index* digits = obs_digits_.data();
  for (std::size_t o = 0; o < joint_obs_; ++o, row += n, digits += n) {
    bool fixed = true;
    for (std::size_t i = 0; i < n && fixed; ++i) {
      fixed = flat[table_offsets_[i] + row[i]] == digits[i];
    }
    if (fixed && ++count == 2) return 2;
  }
  return count;
}

UfpWitness UfpKernel::make_witness(Index p, const std::vector<Index>& flat,
                                   std::span<const Index> actions) const {
  const auto n = party_count();
  UfpWitness witness;
  witness.p = p;
  for (std::size_t i = 0; i < n; ++i) {
    auto begin = flat.begin() + static_cast<std::ptrdiff_t>(table_offsets_[i]);
    witness.inserted.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(action_sizes_[i]));
  }
  for (std::size_t o = 0; o < joint_obs_; ++o) {
    const Index* row = actions.data() + (p * joint_obs_ + o) * n;
    bool fixed = true;
    for (std::size_t i = 0; i < n && fixed; ++i) {
      fixed = flat[table_offsets_[i] + row[i]] == obs_digits_[o * n + i];
    }
    if (fixed) {
      witness.solutions.emplace_back(obs_digits_.begin() + static_cast<std::ptrdiff_t>(o * n),
                                     obs_digits_.begin() + static_cast<std::ptrdiff_t>((o + 1) * n));
    }
  }
  return witness;
}

std::optional<UfpWitness> UfpKernel::first_violation(std::span<const Index> actions,
                                                     std::uint64_t begin,
                                                     std::uint64_t end) const {
  if (actions.size() != rows() * party_count()) throw TypeMismatch("UfpKernel: table shape");
  if (begin >= end) return std::nullopt;
  std::vector<Index> flat;
  decode_inserted(begin, flat);
  for (std::uint64_t k = begin; k < end; ++k) {
    for (std::size_t p = 0; p < past_size_; ++p) {
      if (count_solutions(p, flat, actions) != 1) {
        return make_witness(static_cast<Index>(p), flat, actions);
      }
    }
    advance(flat);
  }
  return std::nullopt;
}

bool UfpKernel::is_valid(std::span<const Index> actions) const {
  const auto n = party_count();
  // Necessary condition: a_i never varies with o_i alone. Otherwise constant
  // f_j (j != i) plus a two-point f_i give two fixed points.
  std::size_t stride = 1;
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t radix = observation_sizes_[i];
    for (std::size_t r = 0; r < rows(); ++r) {
      const std::size_t digit = (r / stride) % radix;
      if (digit == 0) continue;
      if (actions[r * n + i] != actions[(r - digit * stride) * n + i]) return false;
    }
    stride *= radix;
  }
  std::vector<Index> flat(digit_radix_.size(), 0);
  do {
    for (std::size_t p = 0; p < past_size_; ++p) {
      if (count_solutions(p, flat, actions) != 1) return false;
    }
  } while (advance(flat));
  return true;
}

namespace {

std::vector<Index> action_columns(const ProcessFunctionN& w) {
  const auto n = w.party_count();
  std::vector<Index> actions;
  actions.reserve(w.table().rows() * n);
  for (std::size_t r = 0; r < w.table().rows(); ++r) {
    for (std::size_t i = 0; i < n; ++i) actions.push_back(w.action(r, i));
  }
  return actions;
}

}  // namespace

UfpVerdict check_ufp_n(const ProcessFunctionN& w, std::uint64_t budget, unsigned threads) {
  UfpKernel kernel(w.past().size(), w.action_sizes(), w.observation_sizes());
  require_budget(kernel.cost(), budget, "check_ufp_n");
  const auto actions = action_columns(w);

  const auto total = kernel.inserted_count();
  const std::size_t shards =
      static_cast<std::size_t>(std::min<std::uint64_t>(total, 16ull * detail::resolve_threads(threads)));
  std::vector<std::optional<UfpWitness>> found(shards);
  std::atomic<std::size_t> lowest{shards};
  detail::for_each_shard(shards, threads, [&](std::size_t k) {
    if (k > lowest.load()) return;
    const auto begin = detail::shard_begin(total, k, shards);
    const auto end = detail::shard_begin(total, k + 1, shards);
    found[k] = kernel.first_violation(actions, begin, end);
    if (found[k]) {
      auto cur = lowest.load();
      while (k < cur && !lowest.compare_exchange_weak(cur, k)) {
      }
    }
  });
  for (auto& witness : found) {
    if (witness) return {false, std::move(witness)};
  }
  return {true, std::nullopt};
}

ProcessFunctionN validated(ProcessFunctionN w, std::uint64_t budget, unsigned threads) {
  auto verdict = check_ufp_n(w, budget, threads);
  w.set_status(verdict.valid ? UfpStatus::valid : UfpStatus::invalid, std::move(verdict.witness));
  return w;
}

// ---------------------------------------------------------------------------
// Observation independence.

ObsIndependenceResult check_obs_independence(const DecPomdp& pomdp) {
  const auto& joint = pomdp.joint();
  const auto n = pomdp.party_count();
  const auto action_sizes = pomdp.action_sizes();
  std::vector<std::vector<Index>> tables(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Index s = 0; s < joint.states().size(); ++s) {
      // Reference action: a_i varies, every other coordinate fixed at 0.
      for (Index ai = 0; ai < action_sizes[i]; ++ai) {
        IndexTuple base(n, 0);
        base[i] = ai;
        tables[i].push_back(pomdp.split_observation(joint.observe(s, pomdp.join_action(base)))[i]);
      }
      for (Index a = 0; a < joint.actions().size(); ++a) {
        auto parts = pomdp.split_action(a);
        const auto oi = pomdp.split_observation(joint.observe(s, a))[i];
        IndexTuple base(n, 0);
        base[i] = parts[i];
        if (oi != tables[i][static_cast<std::size_t>(s) * action_sizes[i] + parts[i]]) {
          return SignallingCounterexample{i, s, std::move(base), std::move(parts)};
        }
      }
    }
  }
  std::vector<TableFunction> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& party = pomdp.parties()[i];
    out.emplace_back(std::vector<FiniteSet>{FiniteSet(joint.states().size()), party.actions},
                     std::vector<FiniteSet>{party.observations}, std::move(tables[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Causal orders.

CombOrder::CombOrder(std::vector<std::size_t> sigma) : sigma_(std::move(sigma)) {
  std::vector<bool> seen(sigma_.size(), false);
  for (auto k : sigma_) {
    if (k >= sigma_.size() || seen[k]) throw InvariantViolation("order: not a permutation");
    seen[k] = true;
  }
}

namespace {

void require_not_invalid(const ProcessFunctionN& w) {
  if (w.status() == UfpStatus::invalid) {
    throw PreconditionError("causal order: process function is invalid");
  }
}

// depends[q][j]: party q's action changes with o_j somewhere.
std::vector<std::vector<bool>> dependency_sets(const ProcessFunctionN& w) {
  const auto n = w.party_count();
  const auto sizes = w.observation_sizes();
  std::vector<std::vector<bool>> depends(n, std::vector<bool>(n, false));
  std::size_t stride = 1;
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t r = 0; r < w.table().rows(); ++r) {
      const std::size_t digit = (r / stride) % sizes[j];
      if (digit == 0) continue;
      const std::size_t base = r - digit * stride;
      for (std::size_t q = 0; q < n; ++q) {
        if (w.action(r, q) != w.action(base, q)) depends[q][j] = true;
      }
    }
    stride *= sizes[j];
  }
  return depends;
}

}  // namespace

bool check_comb_order(const ProcessFunctionN& w, const CombOrder& order) {
  require_not_invalid(w);
  const auto n = w.party_count();
  if (order.size() != n) throw TypeMismatch("check_comb_order: order has the wrong length");
  const auto sizes = w.observation_sizes();
  const auto joint = w.joint_observation_count();
  std::vector<bool> allowed(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const auto q = order.sigma()[k];
    // Compare against the row with every later coordinate reset to 0.
    for (std::size_t r = 0; r < w.table().rows(); ++r) {
      auto o = decode_mixed(sizes, r % joint);
      for (std::size_t j = 0; j < n; ++j) {
        if (!allowed[j]) o[j] = 0;
      }
      const auto canonical = (r / joint) * joint + encode_mixed(sizes, o);
      if (w.action(r, q) != w.action(canonical, q)) return false;
    }
    allowed[q] = true;
  }
  return true;
}

std::optional<CombOrder> is_causally_ordered(const ProcessFunctionN& w) {
  require_not_invalid(w);
  const auto n = w.party_count();
  if (n > 8) throw BudgetExceeded("is_causally_ordered: more than 8 parties");
  const auto depends = dependency_sets(w);
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    std::vector<bool> before(n, false);
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      const auto q = sigma[k];
      for (std::size_t j = 0; j < n && ok; ++j) ok = !depends[q][j] || before[j];
      before[q] = true;
    }
    if (ok) return CombOrder(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return std::nullopt;
}

}  // namespace hopf
