#include "hopf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hopf/correspondence.hpp"
#include "hopf/dynamics.hpp"
#include "hopf/io.hpp"
#include "hopf/search.hpp"
#include "hopf/verify.hpp"

namespace hopf {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// A check that ran and said no; reported with exit code 1.
struct ValidationFailure {
  std::string message;
};

std::string join(const std::vector<Index>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + std::to_string(v[k]);
  return out;
}

std::string bracket(const std::vector<Index>& v) { return "[" + join(v, ", ") + "]"; }

std::string describe(const UfpWitness& w, bool one_input) {
  std::ostringstream os;
  os << "witness: p=" << w.p;
  if (one_input && w.solutions.size() >= 2) {
    os << " o=" << w.solutions[0][0] << " o'=" << w.solutions[1][0];
  }
  os << " f=";
  for (std::size_t i = 0; i < w.inserted.size(); ++i) os << (i ? " " : "") << bracket(w.inserted[i]);
  os << "\nsolutions (" << w.solutions.size() << "):";
  for (const auto& s : w.solutions) os << ' ' << bracket(s);
  return os.str();
}

std::string describe(const std::optional<CombOrder>& order) {
  if (!order) return "none (indefinite)";
  std::string out;
  for (std::size_t k = 0; k < order->size(); ++k) {
    out += (k ? " " : "") + std::to_string(order->sigma()[k] + 1);
  }
  return out;
}

void emit(const Document& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << dump_document(doc);
  } else {
    save(doc, path);
  }
}

ProcessFunction1 require_valid(ProcessFunction1 w) {
  if (w.status() == UfpStatus::unchecked) w = validated(std::move(w));
  if (w.status() == UfpStatus::invalid) {
    throw ValidationFailure{"invalid process function\n" + describe(*w.witness(), true)};
  }
  return w;
}

ProcessFunctionN require_valid(ProcessFunctionN w, unsigned threads) {
  if (w.status() == UfpStatus::unchecked) w = validated(std::move(w), default_budget(), threads);
  if (w.status() == UfpStatus::invalid) {
    throw ValidationFailure{"invalid process function\n" + describe(*w.witness(), false)};
  }
  return w;
}

// ---------------------------------------------------------------------------

int run_validate(const std::string& file, unsigned threads, std::ostream& out) {
  const auto doc = load(file);
  return std::visit(
      overloaded{
          [&](const ProcessFunction1& w) {
            const auto fast = check_ufp_1_fast(w);
            try {
              const auto brute = check_ufp_1_bruteforce(w);
              if (brute.valid != fast.valid) throw Error("brute-force and fast checks disagree");
              out << "bruteforce: " << (brute.valid ? "valid" : "invalid") << '\n';
            } catch (const BudgetExceeded&) {
              out << "bruteforce: skipped (over budget)\n";
            }
            if (fast.valid) {
              out << "valid\n";
              return kExitOk;
            }
            out << "invalid\n" << describe(*fast.witness, true) << '\n';
            return kExitValidationFailed;
          },
          [&](const ProcessFunctionN& w) {
            const auto verdict = check_ufp_n(w, default_budget(), threads);
            if (!verdict.valid) {
              out << "invalid\n" << describe(*verdict.witness, false) << '\n';
              return kExitValidationFailed;
            }
            auto checked = w;
            checked.set_status(UfpStatus::valid);
            out << "valid\ncausal order: " << describe(is_causally_ordered(checked)) << '\n';
            return kExitOk;
          },
          [&](const DecPomdp& p) {
            const auto result = check_obs_independence(p);
            if (const auto* cx = std::get_if<SignallingCounterexample>(&result)) {
              out << "not observation independent\ncounterexample: party " << cx->party + 1
                  << " state " << cx->state << " a=" << bracket(cx->action)
                  << " a'=" << bracket(cx->other_action) << '\n';
              return kExitValidationFailed;
            }
            out << "valid\nobservation independent\n";
            return kExitOk;
          },
          [&](const auto&) {
            out << "valid\n";
            return kExitOk;
          }},
      doc.payload);
}

int run_convert(const std::string& file, const std::string& to, const std::string& output,
                std::ostream& out) {
  const auto doc = load(file);
  if (to == "agent") {
    if (const auto* w = std::get_if<ProcessFunction1>(&doc.payload)) {
      emit({pf_to_agent(require_valid(*w))}, output, out);
    } else if (const auto* a = std::get_if<Agent>(&doc.payload)) {
      emit({*a}, output, out);
    } else {
      throw ParseError(file + ": convert --to agent expects a process_function_1 document");
    }
  } else {
    if (const auto* a = std::get_if<Agent>(&doc.payload)) {
      emit({agent_to_pf(*a)}, output, out);
    } else if (const auto* w = std::get_if<ProcessFunction1>(&doc.payload)) {
      emit({require_valid(*w)}, output, out);
    } else {
      throw ParseError(file + ": convert --to pf expects an agent document");
    }
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string env, strategy, output;
  Index m0 = 0, s0 = 0;
  std::size_t horizon = 10;
  double gamma = 0.9;
  bool exact = false;
};

int run_simulate(const SimulateArgs& args, unsigned threads, std::ostream& out) {
  const auto env_doc = load(args.env);
  const auto strategy_doc = load(args.strategy);
  const DiscountSpec gamma(args.gamma);

  TrajectoryRecord record;
  DiscountSummary summary;
  summary.gamma = args.gamma;
  summary.exact = args.exact;
  if (!args.exact) {
    if (args.horizon == 0) throw DomainError("simulate: truncated sums need --horizon >= 1");
    summary.steps = args.horizon;
  }

  auto one_input = [&](const ProcessFunction1& w, const DetPomdp& p) {
    record.trajectory = rollout(w, p, args.m0, args.s0, args.horizon);
    if (args.exact) {
      summary.value = discounted_reward_exact(w, p, args.m0, args.s0, gamma);
    } else {
      const auto t = discounted_reward_truncated(w, p, args.m0, args.s0, gamma, args.horizon);
      summary.value = t.value;
      summary.error_bound = t.error_bound;
    }
  };
  auto n_input = [&](const ProcessFunctionN& w, const DecPomdp& p) {
    record.trajectory = rollout(w, p, args.m0, args.s0, args.horizon);
    if (args.exact) {
      summary.value = discounted_reward_exact(w, p, args.m0, args.s0, gamma);
    } else {
      const auto t = discounted_reward_truncated(w, p, args.m0, args.s0, gamma, args.horizon);
      summary.value = t.value;
      summary.error_bound = t.error_bound;
    }
  };

  std::optional<ProcessFunction1> pf1;
  std::optional<ProcessFunctionN> pfn;
  if (const auto* a = std::get_if<Agent>(&strategy_doc.payload)) {
    pf1 = agent_to_pf(*a);
  } else if (const auto* w = std::get_if<ProcessFunction1>(&strategy_doc.payload)) {
    pf1 = require_valid(*w);
  } else if (const auto* wn = std::get_if<ProcessFunctionN>(&strategy_doc.payload)) {
    pfn = require_valid(*wn, threads);
  } else {
    throw ParseError(args.strategy + ": expected an agent or process function document");
  }

  if (const auto* p = std::get_if<DetPomdp>(&env_doc.payload)) {
    if (pfn && pfn->party_count() != 1) {
      throw TypeMismatch("simulate: a multi-party strategy needs a dec_pomdp environment");
    }
    one_input(pf1 ? *pf1 : pfn->to_one_input(), *p);
  } else if (const auto* d = std::get_if<DecPomdp>(&env_doc.payload)) {
    n_input(pfn ? *pfn : ProcessFunctionN::from_one_input(*pf1), *d);
  } else {
    throw ParseError(args.env + ": expected a pomdp or dec_pomdp document");
  }
  record.discounted = summary;
  emit({record}, args.output, out);
  return kExitOk;
}

struct SearchArgs {
  std::string env, mode = "advantage", output, witness_out, id;
  std::size_t memory = 1;
  double gamma = 0.9;
  std::uint64_t budget = 0, seed = 0, samples = 100'000;
};

int run_search(const SearchArgs& args, unsigned threads, std::ostream& out) {
  std::optional<DecPomdp> env;
  std::string id = args.id;
  if (args.env.rfind("gyni:", 0) == 0) {
    const auto n = std::stoul(args.env.substr(5));
    env = gyni_env(n);
    if (id.empty()) id = "gyni-" + std::to_string(n);
  } else {
    const auto doc = load(args.env);
    if (const auto* d = std::get_if<DecPomdp>(&doc.payload)) {
      env = *d;
    } else if (const auto* p = std::get_if<DetPomdp>(&doc.payload)) {
      env = as_single_party(*p);
    } else {
      throw ParseError(args.env + ": expected a pomdp or dec_pomdp document");
    }
    if (id.empty()) id = std::filesystem::path(args.env).stem().string();
  }
  if (!env->observation_independent()) {
    const auto result = check_obs_independence(*env);
    if (std::holds_alternative<SignallingCounterexample>(result)) {
      throw ValidationFailure{"environment is not observation independent"};
    }
    env = env->with_factored_obs(std::get<std::vector<TableFunction>>(result));
  }

  SearchOptions options;
  options.gamma = args.gamma;
  options.enumeration.budget = args.budget ? args.budget : default_budget();
  options.enumeration.seed = args.seed;
  options.enumeration.threads = threads;
  options.enumeration.samples = args.samples;
  const auto shape = StrategyShape::for_environment(*env, args.memory);
  const auto catalog = enumerate_pf_n(shape, options.enumeration);

  const bool general = args.mode != "ordered";
  const bool ordered = args.mode != "general";
  const auto report = search_catalog(catalog, *env, options, general, ordered, id);
  if (!args.witness_out.empty()) {
    if (auto w = find_unordered(catalog)) {
      save({*w}, args.witness_out);
    } else {
      std::ofstream(args.witness_out, std::ios::trunc);  // leaves an empty file: none found
    }
  }
  emit({report}, args.output, out);
  return kExitOk;
}

int run_report(const std::string& file, bool csv, std::ostream& out) {
  const auto doc = load(file);
  const auto* report = std::get_if<SearchReport>(&doc.payload);
  if (!report) throw ParseError(file + ": expected a search_report document");
  if (csv) {
    out << report_csv(*report);
    return kExitOk;
  }
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "environment: " << report->environment_id << '\n'
      << "memory: " << report->shape.memory << ", parties: " << report->shape.parties.size() << '\n'
      << "candidates: " << report->counts.total << (report->sampled ? " (sampled)" : "")
      << ", valid: " << report->counts.valid << ", ordered: " << report->counts.ordered << '\n';
  if (report->best_general) out << "best general: " << real(report->best_general->value) << '\n';
  if (report->best_ordered) {
    out << "best ordered: " << real(report->best_ordered->value)
        << " (order " << describe(report->best_ordered->order) << ")\n";
  }
  if (report->advantage) out << "advantage: " << real(*report->advantage) << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hopf: process-function strategies for deterministic (dec-)POMDPs", "hopf"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = available parallelism)");

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a document (fixed-point condition, "
                                                  "observation independence, schema)");
  validate->add_option("file", file, "Document to check")->required();

  std::string to, convert_out;
  auto* convert = app.add_subcommand("convert", "Agent <-> one-input process function");
  convert->add_option("file", file, "Input document")->required();
  convert->add_option("--to", to, "Target kind")->required()->check(CLI::IsMember({"agent", "pf"}));
  convert->add_option("-o,--output", convert_out, "Output file (default stdout)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Roll out a strategy and its discounted reward");
  simulate->add_option("env", sim.env, "Environment document")->required();
  simulate->add_option("strategy", sim.strategy, "Agent or process function document")->required();
  simulate->add_option("--m0", sim.m0, "Initial memory");
  simulate->add_option("--s0", sim.s0, "Initial state");
  simulate->add_option("--horizon", sim.horizon, "Steps to record (and to sum when truncated)");
  simulate->add_option("--gamma", sim.gamma, "Discount factor in [0, 1)");
  simulate->add_flag("--exact", sim.exact, "Closed-form infinite discounted sum");
  simulate->add_option("-o,--output", sim.output, "Output file (default stdout)");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Best general vs. best ordered strategy");
  search_cmd->add_option("env", search.env, "Environment document or gyni:N")->required();
  search_cmd->add_option("--memory", search.memory, "Strategy memory size |M|");
  search_cmd->add_option("--gamma", search.gamma, "Discount factor in [0, 1)");
  search_cmd->add_option("--budget", search.budget, "Candidate-table budget (default HOPF_BUDGET or 1e8)");
  search_cmd->add_option("--seed", search.seed, "Seed for sampling mode");
  search_cmd->add_option("--samples", search.samples, "Tables drawn in sampling mode");
  search_cmd->add_option("--mode", search.mode, "general | ordered | advantage")
      ->check(CLI::IsMember({"general", "ordered", "advantage"}));
  search_cmd->add_option("--witness-out", search.witness_out,
                         "Write the first strategy with no static causal order here");
  search_cmd->add_option("--id", search.id, "Environment id recorded in the report");
  search_cmd->add_option("-o,--output", search.output, "Output file (default stdout)");

  bool csv = false;
  auto* report = app.add_subcommand("report", "Summarize a search report");
  report->add_option("file", file, "search_report document")->required();
  report->add_flag("--csv", csv, "Flatten to CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(file, threads, out);
    if (convert->parsed()) return run_convert(file, to, convert_out, out);
    if (simulate->parsed()) return run_simulate(sim, threads, out);
    if (search_cmd->parsed()) return run_search(search, threads, out);
    if (report->parsed()) return run_report(file, csv, out);
  } catch (const ValidationFailure& f) {
    err << f.message << '\n';
    return kExitValidationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace hopf
