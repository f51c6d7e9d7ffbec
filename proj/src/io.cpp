#include "hopf/io.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include "hopf/verify.hpp"
#include "json.hpp"

namespace hopf {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Canonical writer.

std::string format_real(double v) {
  char buf[40];
  if (v == 0.0) v = 0.0;  // -0 reads back as the integer 0
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

void write_scalar(std::ostream& os, const json& j) {
  if (j.is_number_float()) {
    os << format_real(j.get<double>());
  } else {
    os << j.dump();
  }
}

void write_canonical(std::ostream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t k = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++k) {
      os << inner << json(it.key()).dump() << ": ";
      write_canonical(os, it.value(), indent + 1);
      os << (k + 1 < j.size() ? ",\n" : "\n");
    }
    os << pad << '}';
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return is_scalar(e); });
    if (flat) {
      os << '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ", ";
        write_scalar(os, j[k]);
      }
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      os << inner;
      write_canonical(os, j[k], indent + 1);
      os << (k + 1 < j.size() ? ",\n" : "\n");
    }
    os << pad << ']';
  } else {
    write_scalar(os, j);
  }
}

// ---------------------------------------------------------------------------
// Reading helpers. Every error names the JSON path of the offending field.

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

const json* optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::uint64_t read_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    schema_error(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Index read_index(const json& j, const std::string& path) {
  const auto v = read_uint(j, path);
  if (v > std::numeric_limits<Index>::max()) schema_error(path, "index too large");
  return static_cast<Index>(v);
}

double read_real(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

std::vector<Index> read_indices(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of integers");
  std::vector<Index> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(read_index(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<double> read_reals(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(read_real(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// Runs `make`, prefixing invariant violations with `path`.
template <class Make>
auto at_path(const std::string& path, Make&& make) {
  try {
    return make();
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(path + "." + e.what());
  } catch (const DomainError& e) {
    throw InvariantViolation(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Finite sets.

json to_json(const FiniteSet& s) {
  json j = {{"size", s.size()}};
  if (s.has_labels()) j["labels"] = s.labels();
  return j;
}

FiniteSet set_from_json(const json& j, const std::string& path) {
  const auto size = read_uint(field(j, "size", path), path + ".size");
  std::vector<std::string> labels;
  if (const json* l = optional_field(j, "labels")) {
    if (!l->is_array()) schema_error(path + ".labels", "expected an array of strings");
    for (const auto& e : *l) {
      if (!e.is_string()) schema_error(path + ".labels", "expected an array of strings");
      labels.push_back(e.get<std::string>());
    }
  }
  return at_path(path, [&] { return FiniteSet(size, std::move(labels)); });
}

// ---------------------------------------------------------------------------
// Witnesses and statuses.

const char* status_name(UfpStatus s) {
  switch (s) {
    case UfpStatus::valid:
      return "valid";
    case UfpStatus::invalid:
      return "invalid";
    case UfpStatus::unchecked:
      break;
  }
  return "unchecked";
}

json to_json(const UfpWitness& w) {
  return {{"p", w.p}, {"inserted", w.inserted}, {"solutions", w.solutions}};
}

UfpWitness witness_from_json(const json& j, const std::string& path) {
  UfpWitness w;
  w.p = read_index(field(j, "p", path), path + ".p");
  for (const char* key : {"inserted", "solutions"}) {
    const auto& arr = field(j, key, path);
    if (!arr.is_array()) schema_error(path + "." + key, "expected an array of arrays");
    auto& dest = std::string(key) == "inserted" ? w.inserted : w.solutions;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      dest.push_back(read_indices(arr[k], path + "." + key + "[" + std::to_string(k) + "]"));
    }
  }
  return w;
}

template <class Pf>
void write_status(json& j, const Pf& w) {
  j["status"] = status_name(w.status());
  if (w.witness()) j["witness"] = to_json(*w.witness());
}

struct StoredStatus {
  UfpStatus status = UfpStatus::unchecked;
  std::optional<UfpWitness> witness;
};

StoredStatus read_status(const json& j, const std::string& path) {
  StoredStatus out;
  if (const json* s = optional_field(j, "status")) {
    if (!s->is_string()) schema_error(path + ".status", "expected a string");
    const auto name = s->get<std::string>();
    if (name == "valid") {
      out.status = UfpStatus::valid;
    } else if (name == "invalid") {
      out.status = UfpStatus::invalid;
    } else if (name != "unchecked") {
      schema_error(path + ".status", "unknown status '" + name + "'");
    }
  }
  if (const json* w = optional_field(j, "witness")) out.witness = witness_from_json(*w, path + ".witness");
  if (out.status == UfpStatus::invalid && !out.witness) {
    throw InvariantViolation(path + ".witness: an invalid verdict needs a witness");
  }
  return out;
}

// ---------------------------------------------------------------------------
// POMDPs.

json to_json(const DetPomdp& p) {
  return {{"S", to_json(p.states())},
          {"A", to_json(p.actions())},
          {"Omega", to_json(p.observations())},
          {"T", p.transition().entries()},
          {"O", p.observation().entries()},
          {"R", p.rewards()}};
}

DetPomdp pomdp_from_json(const json& j, const std::string& path) {
  auto s = set_from_json(field(j, "S", path), path + ".S");
  auto a = set_from_json(field(j, "A", path), path + ".A");
  auto o = set_from_json(field(j, "Omega", path), path + ".Omega");
  auto t = read_indices(field(j, "T", path), path + ".T");
  auto obs = read_indices(field(j, "O", path), path + ".O");
  auto r = read_reals(field(j, "R", path), path + ".R");
  const auto rows = s.size() * a.size();
  if (t.size() != rows) throw InvariantViolation(path + ".T: table length " + std::to_string(t.size()) + " != |S|*|A| = " + std::to_string(rows));
  if (obs.size() != rows) throw InvariantViolation(path + ".O: table length " + std::to_string(obs.size()) + " != |S|*|A| = " + std::to_string(rows));
  return at_path(path, [&] {
    return DetPomdp(std::move(s), std::move(a), std::move(o), std::move(t), std::move(obs),
                    std::move(r));
  });
}

json to_json(const DecPomdp& p) {
  json parties = json::array();
  for (const auto& party : p.parties()) {
    parties.push_back({{"S", to_json(party.states)},
                       {"A", to_json(party.actions)},
                       {"Omega", to_json(party.observations)}});
  }
  const auto& joint = p.joint();
  std::vector<Index> t, o;
  for (Index s = 0; s < joint.states().size(); ++s) {
    for (Index a = 0; a < joint.actions().size(); ++a) {
      auto ts = p.split_state(joint.next_state(s, a));
      auto os = p.split_observation(joint.observe(s, a));
      t.insert(t.end(), ts.begin(), ts.end());
      o.insert(o.end(), os.begin(), os.end());
    }
  }
  json j = {{"parties", parties}, {"T", t}, {"O", o}, {"R", joint.rewards()}};
  if (p.factored_obs()) {
    json factored = json::array();
    for (const auto& table : *p.factored_obs()) factored.push_back(table.entries());
    j["factored_obs"] = factored;
  }
  return j;
}

DecPomdp dec_pomdp_from_json(const json& j, const std::string& path) {
  const auto& jp = field(j, "parties", path);
  if (!jp.is_array() || jp.empty()) schema_error(path + ".parties", "expected a non-empty array");
  std::vector<PartySets> parties;
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const auto pp = path + ".parties[" + std::to_string(k) + "]";
    parties.push_back({set_from_json(field(jp[k], "S", pp), pp + ".S"),
                       set_from_json(field(jp[k], "A", pp), pp + ".A"),
                       set_from_json(field(jp[k], "Omega", pp), pp + ".Omega")});
  }
  const auto n = parties.size();
  std::vector<std::size_t> ss, as, os;
  for (const auto& p : parties) {
    ss.push_back(p.states.size());
    as.push_back(p.actions.size());
    os.push_back(p.observations.size());
  }
  const auto n_states = checked_product(ss);
  const auto n_actions = checked_product(as);
  const auto n_obs = checked_product(os);
  const auto rows = n_states * n_actions;

  auto t = read_indices(field(j, "T", path), path + ".T");
  auto o = read_indices(field(j, "O", path), path + ".O");
  auto r = read_reals(field(j, "R", path), path + ".R");
  if (t.size() != rows * n) {
    throw InvariantViolation(path + ".T: table length " + std::to_string(t.size()) + " != " +
                             std::to_string(rows) + " rows x " + std::to_string(n) + " parties");
  }
  if (o.size() != rows * n) {
    throw InvariantViolation(path + ".O: table length " + std::to_string(o.size()) + " != " +
                             std::to_string(rows) + " rows x " + std::to_string(n) + " parties");
  }
  std::vector<Index> t_joint, o_joint;
  for (std::size_t row = 0; row < rows; ++row) {
    std::span<const Index> tp(t.data() + row * n, n), op(o.data() + row * n, n);
    t_joint.push_back(static_cast<Index>(at_path(path + ".T", [&] { return encode_mixed(ss, tp); })));
    o_joint.push_back(static_cast<Index>(at_path(path + ".O", [&] { return encode_mixed(os, op); })));
  }
  auto joint = at_path(path, [&] {
    return DetPomdp(FiniteSet(n_states), FiniteSet(n_actions), FiniteSet(n_obs),
                    std::move(t_joint), std::move(o_joint), std::move(r));
  });
  std::optional<std::vector<TableFunction>> factored;
  if (const json* f = optional_field(j, "factored_obs")) {
    if (!f->is_array() || f->size() != n) {
      schema_error(path + ".factored_obs", "expected one table per party");
    }
    factored.emplace();
    for (std::size_t i = 0; i < n; ++i) {
      const auto fp = path + ".factored_obs[" + std::to_string(i) + "]";
      auto entries = read_indices((*f)[i], fp);
      factored->push_back(at_path(fp, [&] {
        return TableFunction({FiniteSet(n_states), parties[i].actions}, {parties[i].observations},
                             std::move(entries));
      }));
    }
  }
  return at_path(path, [&] { return DecPomdp(std::move(parties), std::move(joint), std::move(factored)); });
}

// ---------------------------------------------------------------------------
// Agents and process functions.

json to_json(const Agent& a) {
  return {{"M", to_json(a.memory())},
          {"A", to_json(a.actions())},
          {"Omega", to_json(a.observations())},
          {"policy", a.policy().entries()},
          {"update", a.update().entries()}};
}

Agent agent_from_json(const json& j, const std::string& path) {
  auto m = set_from_json(field(j, "M", path), path + ".M");
  auto a = set_from_json(field(j, "A", path), path + ".A");
  auto o = set_from_json(field(j, "Omega", path), path + ".Omega");
  auto policy = read_indices(field(j, "policy", path), path + ".policy");
  auto update = read_indices(field(j, "update", path), path + ".update");
  if (policy.size() != m.size()) {
    throw InvariantViolation(path + ".policy: table length " + std::to_string(policy.size()) + " != |M|");
  }
  if (update.size() != m.size() * a.size() * o.size()) {
    throw InvariantViolation(path + ".update: table length " + std::to_string(update.size()) + " != |M|*|A|*|Omega|");
  }
  return at_path(path, [&] {
    return Agent(std::move(m), std::move(a), std::move(o), std::move(policy), std::move(update));
  });
}

json to_json(const ProcessFunction1& w) {
  json j = {{"P", to_json(w.past())},
            {"Obs", to_json(w.obs())},
            {"F", to_json(w.future())},
            {"I", to_json(w.input())},
            {"w", w.table().entries()}};
  write_status(j, w);
  return j;
}

ProcessFunction1 pf1_from_json(const json& j, const std::string& path) {
  auto p = set_from_json(field(j, "P", path), path + ".P");
  auto obs = set_from_json(field(j, "Obs", path), path + ".Obs");
  auto f = set_from_json(field(j, "F", path), path + ".F");
  auto i = set_from_json(field(j, "I", path), path + ".I");
  auto entries = read_indices(field(j, "w", path), path + ".w");
  if (entries.size() != p.size() * obs.size() * 2) {
    throw InvariantViolation(path + ".w: table length " + std::to_string(entries.size()) +
                             " != |P|*|Obs| rows x 2 components");
  }
  auto w = at_path(path, [&] {
    return ProcessFunction1(std::move(p), std::move(obs), std::move(f), std::move(i), std::move(entries));
  });
  auto stored = read_status(j, path);
  if (stored.status != UfpStatus::unchecked) {
    const bool valid = check_ufp_1_fast(w).valid;
    if (valid != (stored.status == UfpStatus::valid)) {
      throw InvariantViolation(path + ".status: recorded verdict '" + status_name(stored.status) +
                               "' does not hold");
    }
    w.set_status(stored.status, std::move(stored.witness));
  }
  return w;
}

json to_json(const ProcessFunctionN& w) {
  json parties = json::array();
  for (const auto& party : w.parties()) {
    parties.push_back({{"A", to_json(party.actions)}, {"Omega", to_json(party.observations)}});
  }
  json j = {{"P", to_json(w.past())},
            {"F", to_json(w.future())},
            {"parties", parties},
            {"w", w.table().entries()}};
  write_status(j, w);
  return j;
}

ProcessFunctionN pfn_from_json(const json& j, const std::string& path) {
  auto p = set_from_json(field(j, "P", path), path + ".P");
  auto f = set_from_json(field(j, "F", path), path + ".F");
  const auto& jp = field(j, "parties", path);
  if (!jp.is_array() || jp.empty()) schema_error(path + ".parties", "expected a non-empty array");
  std::vector<PartyInterface> parties;
  std::uint64_t rows = p.size();
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const auto pp = path + ".parties[" + std::to_string(k) + "]";
    parties.push_back({set_from_json(field(jp[k], "A", pp), pp + ".A"),
                       set_from_json(field(jp[k], "Omega", pp), pp + ".Omega")});
    rows *= parties.back().observations.size();
  }
  auto entries = read_indices(field(j, "w", path), path + ".w");
  if (entries.size() != rows * (parties.size() + 1)) {
    throw InvariantViolation(path + ".w: table length " + std::to_string(entries.size()) + " != " +
                             std::to_string(rows) + " rows x " +
                             std::to_string(parties.size() + 1) + " components");
  }
  auto w = at_path(path, [&] {
    return ProcessFunctionN(std::move(p), std::move(f), std::move(parties), std::move(entries));
  });
  auto stored = read_status(j, path);
  if (stored.status != UfpStatus::unchecked) {
    const bool valid = check_ufp_n(w).valid;
    if (valid != (stored.status == UfpStatus::valid)) {
      throw InvariantViolation(path + ".status: recorded verdict '" + status_name(stored.status) +
                               "' does not hold");
    }
    w.set_status(stored.status, std::move(stored.witness));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Reports and trajectories.

json order_json(const std::optional<CombOrder>& order) {
  if (!order) return nullptr;
  std::vector<std::size_t> one_based;
  for (auto k : order->sigma()) one_based.push_back(k + 1);
  return one_based;
}

std::optional<CombOrder> order_from_json(const json* j, const std::string& path) {
  if (!j) return std::nullopt;
  auto one_based = read_indices(*j, path);
  std::vector<std::size_t> sigma;
  for (auto k : one_based) {
    if (k == 0) schema_error(path, "orders are 1-based");
    sigma.push_back(k - 1);
  }
  return at_path(path, [&] { return CombOrder(std::move(sigma)); });
}

json to_json(const StrategyShape& shape) {
  json parties = json::array();
  for (const auto& p : shape.parties) {
    parties.push_back({{"actions", p.actions}, {"observations", p.observations}});
  }
  return {{"memory", shape.memory}, {"parties", parties}};
}

StrategyShape shape_from_json(const json& j, const std::string& path) {
  StrategyShape shape;
  shape.memory = read_uint(field(j, "memory", path), path + ".memory");
  const auto& jp = field(j, "parties", path);
  if (!jp.is_array()) schema_error(path + ".parties", "expected an array");
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const auto pp = path + ".parties[" + std::to_string(k) + "]";
    shape.parties.push_back({read_uint(field(jp[k], "actions", pp), pp + ".actions"),
                             read_uint(field(jp[k], "observations", pp), pp + ".observations")});
  }
  at_path(path, [&] {
    shape.validate();
    return 0;
  });
  return shape;
}

json to_json(const StrategyResult& r) {
  return {{"w", to_json(r.strategy)}, {"order", order_json(r.order)}, {"value", r.value}};
}

StrategyResult result_from_json(const json& j, const std::string& path) {
  return {pfn_from_json(field(j, "w", path), path + ".w"),
          order_from_json(optional_field(j, "order"), path + ".order"),
          read_real(field(j, "value", path), path + ".value")};
}

json to_json(const SearchReport& r) {
  json j = {{"shape", to_json(r.shape)},
            {"environment_id", r.environment_id},
            {"gamma", r.gamma},
            {"m0", r.m0},
            {"counts", {{"total", r.counts.total}, {"valid", r.counts.valid}, {"ordered", r.counts.ordered}}},
            {"advantage", r.advantage ? json(*r.advantage) : json(nullptr)},
            {"seed", r.seed},
            {"budget", r.budget},
            {"sampled", r.sampled}};
  j["best_general"] = r.best_general ? to_json(*r.best_general) : json(nullptr);
  j["best_ordered"] = r.best_ordered ? to_json(*r.best_ordered) : json(nullptr);
  return j;
}

bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected a boolean");
  return j.get<bool>();
}

SearchReport report_from_json(const json& j, const std::string& path) {
  SearchReport r;
  r.shape = shape_from_json(field(j, "shape", path), path + ".shape");
  const auto& id = field(j, "environment_id", path);
  if (!id.is_string()) schema_error(path + ".environment_id", "expected a string");
  r.environment_id = id.get<std::string>();
  r.gamma = read_real(field(j, "gamma", path), path + ".gamma");
  r.m0 = read_index(field(j, "m0", path), path + ".m0");
  const auto& c = field(j, "counts", path);
  r.counts.total = read_uint(field(c, "total", path + ".counts"), path + ".counts.total");
  r.counts.valid = read_uint(field(c, "valid", path + ".counts"), path + ".counts.valid");
  r.counts.ordered = read_uint(field(c, "ordered", path + ".counts"), path + ".counts.ordered");
  if (!(r.counts.ordered <= r.counts.valid && r.counts.valid <= r.counts.total)) {
    throw InvariantViolation(path + ".counts: expected ordered <= valid <= total");
  }
  if (const json* a = optional_field(j, "advantage")) r.advantage = read_real(*a, path + ".advantage");
  r.seed = read_uint(field(j, "seed", path), path + ".seed");
  r.budget = read_uint(field(j, "budget", path), path + ".budget");
  r.sampled = read_bool(field(j, "sampled", path), path + ".sampled");
  if (const json* g = optional_field(j, "best_general")) r.best_general = result_from_json(*g, path + ".best_general");
  if (const json* o = optional_field(j, "best_ordered")) r.best_ordered = result_from_json(*o, path + ".best_ordered");
  if (r.best_general && r.best_ordered && r.best_ordered->value > r.best_general->value) {
    throw InvariantViolation(path + ".best_ordered: value exceeds best_general");
  }
  return r;
}

json to_json(const TrajectoryRecord& t) {
  json j = {{"memories", t.trajectory.memories},
            {"states", t.trajectory.states},
            {"rewards", t.trajectory.rewards}};
  if (t.discounted) {
    const auto& d = *t.discounted;
    json dj = {{"gamma", d.gamma}, {"value", d.value}, {"exact", d.exact}};
    if (d.error_bound) {
      dj["error_bound"] = *d.error_bound;
      dj["steps"] = d.steps;
    }
    j["discounted"] = dj;
  }
  return j;
}

TrajectoryRecord trajectory_from_json(const json& j, const std::string& path) {
  TrajectoryRecord t;
  t.trajectory.memories = read_indices(field(j, "memories", path), path + ".memories");
  t.trajectory.states = read_indices(field(j, "states", path), path + ".states");
  t.trajectory.rewards = read_reals(field(j, "rewards", path), path + ".rewards");
  const auto h = t.trajectory.rewards.size();
  if (t.trajectory.memories.size() != h + 1 || t.trajectory.states.size() != h + 1) {
    throw InvariantViolation(path + ": memories and states need horizon + 1 entries");
  }
  if (const json* d = optional_field(j, "discounted")) {
    const auto dp = path + ".discounted";
    DiscountSummary s;
    s.gamma = read_real(field(*d, "gamma", dp), dp + ".gamma");
    at_path(dp + ".gamma", [&] { return DiscountSpec(s.gamma); });
    s.value = read_real(field(*d, "value", dp), dp + ".value");
    s.exact = read_bool(field(*d, "exact", dp), dp + ".exact");
    if (const json* e = optional_field(*d, "error_bound")) {
      s.error_bound = read_real(*e, dp + ".error_bound");
      s.steps = read_uint(field(*d, "steps", dp), dp + ".steps");
    }
    t.discounted = s;
  }
  return t;
}

json payload_json(const Payload& p) {
  return std::visit([](const auto& v) { return to_json(v); }, p);
}

}  // namespace

std::string_view Document::kind() const {
  static constexpr std::string_view names[] = {"pomdp",       "dec_pomdp",          "agent",
                                               "process_function_1", "process_function_n",
                                               "search_report", "trajectory"};
  return names[payload.index()];
}

std::string dump_document(const Document& doc) {
  json j = {{"format_version", std::string(kFormatVersion)},
            {"kind", std::string(doc.kind())},
            {"payload", payload_json(doc.payload)}};
  std::ostringstream os;
  write_canonical(os, j, 0);
  os << '\n';
  return os.str();
}

Document parse_document(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
  const std::string root(source);
  try {
    const auto& version = field(j, "format_version", root);
    if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
      schema_error(root + ".format_version", "unsupported format version " + version.dump());
    }
    const auto& kind = field(j, "kind", root);
    if (!kind.is_string()) schema_error(root + ".kind", "expected a string");
    const auto name = kind.get<std::string>();
    const auto& payload = field(j, "payload", root);
    const auto path = root + ".payload";
    if (name == "pomdp") return {pomdp_from_json(payload, path)};
    if (name == "dec_pomdp") return {dec_pomdp_from_json(payload, path)};
    if (name == "agent") return {agent_from_json(payload, path)};
    if (name == "process_function_1") return {pf1_from_json(payload, path)};
    if (name == "process_function_n") return {pfn_from_json(payload, path)};
    if (name == "search_report") return {report_from_json(payload, path)};
    if (name == "trajectory") return {trajectory_from_json(payload, path)};
    schema_error(root + ".kind", "unknown document kind '" + name + "'");
  } catch (const json::exception& e) {
    throw ParseError(root + ": " + e.what());
  }
}

Document load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path.string());
}

void save(const Document& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out << dump_document(doc);
  if (!out) throw Error(path.string() + ": write failed");
}

std::string report_csv(const SearchReport& r) {
  std::ostringstream os;
  os << "environment_id,mode,value,order,memory,parties,gamma,total,valid,ordered,advantage,seed,"
        "budget,sampled,table\n";
  std::string parties;
  for (std::size_t k = 0; k < r.shape.parties.size(); ++k) {
    if (k) parties += ' ';
    parties += std::to_string(r.shape.parties[k].actions) + "x" +
               std::to_string(r.shape.parties[k].observations);
  }
  auto line = [&](const char* mode, const std::optional<StrategyResult>& res) {
    if (!res) return;
    std::string order, table;
    if (res->order) {
      for (std::size_t k = 0; k < res->order->size(); ++k) {
        order += (k ? " " : "") + std::to_string(res->order->sigma()[k] + 1);
      }
    }
    const auto& entries = res->strategy.table().entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      table += (k ? " " : "") + std::to_string(entries[k]);
    }
    std::string id = r.environment_id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : id) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      id = quoted + "\"";
    }
    os << id << ',' << mode << ',' << format_real(res->value) << ',' << order << ','
       << r.shape.memory << ',' << parties << ',' << format_real(r.gamma) << ','
       << r.counts.total << ',' << r.counts.valid << ',' << r.counts.ordered << ','
       << (r.advantage ? format_real(*r.advantage) : std::string()) << ',' << r.seed << ',' << r.budget << ','
       << (r.sampled ? "true" : "false") << ',' << table << '\n';
  };
  line("general", r.best_general);
  line("ordered", r.best_ordered);
  return os.str();
}

}  // namespace hopf
