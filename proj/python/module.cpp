// Python bindings. Values cross the boundary as canonical JSON document text;
// the Python package converts to and from dicts.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopf/cli.hpp"
#include "hopf/correspondence.hpp"
#include "hopf/dynamics.hpp"
#include "hopf/io.hpp"
#include "hopf/search.hpp"
#include "hopf/verify.hpp"

namespace py = pybind11;
using namespace hopf;

namespace {

template <class T>
T payload_as(const std::string& text, const char* what) {
  auto doc = parse_document(text);
  if (auto* v = std::get_if<T>(&doc.payload)) return std::move(*v);
  throw TypeMismatch(std::string("expected a ") + what + " document, got " + std::string(doc.kind()));
}

std::string dump(Payload p) { return dump_document({std::move(p)}); }

py::object witness_dict(const std::optional<UfpWitness>& w) {
  if (!w) return py::none();
  py::dict d;
  d["p"] = w->p;
  d["inserted"] = w->inserted;
  d["solutions"] = w->solutions;
  return d;
}

py::object order_list(const std::optional<CombOrder>& order) {
  if (!order) return py::none();
  return py::cast(order->sigma());
}

py::dict validate(const std::string& text, std::uint64_t budget) {
  const auto doc = parse_document(text);
  py::dict out;
  out["kind"] = std::string(doc.kind());
  out["valid"] = true;
  if (const auto* w = std::get_if<ProcessFunction1>(&doc.payload)) {
    const auto verdict = check_ufp_1_fast(*w);
    out["valid"] = verdict.valid;
    out["witness"] = witness_dict(verdict.witness);
  } else if (const auto* wn = std::get_if<ProcessFunctionN>(&doc.payload)) {
    UfpVerdict verdict;
    std::optional<CombOrder> order;
    {
      py::gil_scoped_release release;
      verdict = check_ufp_n(*wn, budget ? budget : default_budget());
      if (verdict.valid) {
        auto checked = *wn;
        checked.set_status(UfpStatus::valid);
        order = is_causally_ordered(checked);
      }
    }
    out["valid"] = verdict.valid;
    out["witness"] = witness_dict(verdict.witness);
    out["causal_order"] = order_list(order);
  } else if (const auto* d = std::get_if<DecPomdp>(&doc.payload)) {
    const auto result = check_obs_independence(d->with_factored_obs(std::nullopt));
    if (const auto* cx = std::get_if<SignallingCounterexample>(&result)) {
      py::dict c;
      c["party"] = cx->party;
      c["state"] = cx->state;
      c["action"] = cx->action;
      c["other_action"] = cx->other_action;
      out["valid"] = false;
      out["counterexample"] = c;
    } else {
      out["counterexample"] = py::none();
    }
  }
  return out;
}

ProcessFunction1 as_pf1(const Document& doc) {
  if (const auto* a = std::get_if<Agent>(&doc.payload)) return agent_to_pf(*a);
  if (const auto* w = std::get_if<ProcessFunction1>(&doc.payload)) return *w;
  throw TypeMismatch("expected an agent or process_function_1 strategy, got " + std::string(doc.kind()));
}

ProcessFunctionN as_pfn(const Document& doc) {
  if (const auto* w = std::get_if<ProcessFunctionN>(&doc.payload)) return *w;
  return ProcessFunctionN::from_one_input(as_pf1(doc));
}

py::dict simulate(const std::string& env_text, const std::string& strategy_text, Index m0, Index s0,
                  std::size_t horizon, double gamma, bool exact) {
  const auto env = parse_document(env_text);
  const auto strategy = parse_document(strategy_text);
  const DiscountSpec spec(gamma);
  Trajectory t;
  double value = 0.0;
  std::optional<double> bound;
  if (const auto* p = std::get_if<DetPomdp>(&env.payload)) {
    const auto w = validated(as_pf1(strategy));
    t = rollout(w, *p, m0, s0, horizon);
    if (exact) {
      value = discounted_reward_exact(w, *p, m0, s0, spec);
    } else {
      const auto v = discounted_reward_truncated(w, *p, m0, s0, spec, horizon);
      value = v.value;
      bound = v.error_bound;
    }
  } else if (const auto* d = std::get_if<DecPomdp>(&env.payload)) {
    const auto w = validated(as_pfn(strategy));
    t = rollout(w, *d, m0, s0, horizon);
    if (exact) {
      value = discounted_reward_exact(w, *d, m0, s0, spec);
    } else {
      const auto v = discounted_reward_truncated(w, *d, m0, s0, spec, horizon);
      value = v.value;
      bound = v.error_bound;
    }
  } else {
    throw TypeMismatch("expected a pomdp or dec_pomdp environment, got " + std::string(env.kind()));
  }
  py::dict out;
  out["memories"] = t.memories;
  out["states"] = t.states;
  out["rewards"] = t.rewards;
  out["value"] = value;
  out["error_bound"] = bound ? py::cast(*bound) : py::none();
  return out;
}

DecPomdp search_env(const std::string& text) {
  const auto doc = parse_document(text);
  DecPomdp env = [&] {
    if (const auto* d = std::get_if<DecPomdp>(&doc.payload)) return *d;
    if (const auto* p = std::get_if<DetPomdp>(&doc.payload)) return as_single_party(*p);
    throw TypeMismatch("expected a pomdp or dec_pomdp environment, got " + std::string(doc.kind()));
  }();
  if (env.observation_independent()) return env;
  const auto result = check_obs_independence(env);
  if (std::holds_alternative<SignallingCounterexample>(result)) {
    throw NotObservationIndependent("environment is not observation independent");
  }
  return env.with_factored_obs(std::get<std::vector<TableFunction>>(result));
}

py::dict search(const std::string& env_text, std::size_t memory, double gamma, const std::string& mode,
                std::uint64_t budget, std::uint64_t seed, std::uint64_t samples, bool allow_sampling,
                unsigned threads, const std::string& environment_id) {
  if (mode != "advantage" && mode != "general" && mode != "ordered") {
    throw DomainError("mode must be advantage, general or ordered");
  }
  const auto env = search_env(env_text);
  SearchOptions options;
  options.gamma = gamma;
  options.enumeration.budget = budget ? budget : default_budget();
  options.enumeration.seed = seed;
  options.enumeration.samples = samples;
  options.enumeration.allow_sampling = allow_sampling;
  options.enumeration.threads = threads;
  std::string report_text;
  std::optional<std::string> witness_text;
  {
    py::gil_scoped_release release;
    const auto catalog = enumerate_pf_n(StrategyShape::for_environment(env, memory), options.enumeration);
    const auto report = search_catalog(catalog, env, options, mode != "ordered", mode != "general",
                                       environment_id);
    report_text = dump(report);
    if (auto w = find_unordered(catalog)) witness_text = dump(std::move(*w));
  }
  py::dict out;
  out["report"] = report_text;
  out["witness"] = witness_text ? py::cast(*witness_text) : py::none();
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli_main(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Process functions, agents and deterministic POMDPs";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<TypeMismatch>(m, "TypeMismatch", base);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base);
  py::register_exception<PreconditionError>(m, "PreconditionError", base);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);
  py::register_exception<NotObservationIndependent>(m, "NotObservationIndependent", base);
  py::register_exception<ConsistencyViolation>(m, "ConsistencyViolation", base);
  py::register_exception<NoStrategy>(m, "NoStrategy", base);
  py::register_exception<ParseError>(m, "ParseError", base);

  m.def("canonical", [](const std::string& text) { return dump_document(parse_document(text)); },
        "Parse, validate and re-emit a document canonically.", py::arg("text"));
  m.def("validate", &validate, "Check the condition appropriate to the document kind.", py::arg("text"),
        py::arg("budget") = 0);
  m.def(
      "agent_to_pf", [](const std::string& text) { return dump(agent_to_pf(payload_as<Agent>(text, "agent"))); },
      py::arg("text"));
  m.def(
      "pf_to_agent",
      [](const std::string& text) {
        return dump(pf_to_agent(validated(payload_as<ProcessFunction1>(text, "process_function_1"))));
      },
      py::arg("text"));
  m.def("simulate", &simulate, py::arg("environment"), py::arg("strategy"), py::arg("m0") = 0,
        py::arg("s0") = 0, py::arg("horizon") = 10, py::arg("gamma") = 0.9, py::arg("exact") = true);
  m.def("search", &search, py::arg("environment"), py::arg("memory") = 1, py::arg("gamma") = 0.9,
        py::arg("mode") = "advantage", py::arg("budget") = 0, py::arg("seed") = 0,
        py::arg("samples") = 100000, py::arg("allow_sampling") = true, py::arg("threads") = 0,
        py::arg("environment_id") = "");
  m.def("gyni_env", [](std::size_t n) { return dump(gyni_env(n)); }, py::arg("parties"));
  m.def("report_csv", [](const std::string& text) {
    return report_csv(payload_as<SearchReport>(text, "search_report"));
  }, py::arg("text"));
  m.def("run_cli", &run_cli, "Run the command-line tool in-process; returns (code, stdout, stderr).",
        py::arg("args"));
}
