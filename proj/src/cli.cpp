#include "cachelab/cli.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cachelab/bayes.hpp"
#include "cachelab/simkit.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string trace_path;
  std::string format = "plain";
  std::string pre_evict;
  std::uint64_t address_space = 0;
  std::uint64_t timer = 0;
  std::string prefetch;
  std::size_t order = 1;
  std::size_t top_k = 1;
  double p_min = 0.1;
  double alpha = 1.0;
  std::uint64_t min_support = 2;
  std::string trigger = "every";
  std::string arc_adaptation = "unit";
  std::string out = "table";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--trace", f.trace_path, "Trace file")->required();
  cmd->add_option("--format", f.format, "Trace format: plain or smpc");
  cmd->add_option("--pre-evict", f.pre_evict, "Pre-eviction rule: halfway");
  cmd->add_option("--address-space", f.address_space, "Key space size for the halfway rule");
  cmd->add_option("--pre-evict-timer", f.timer, "Evict entries idle for T requests");
  cmd->add_option("--prefetch", f.prefetch, "Prefetcher: pgm");
  cmd->add_option("--order", f.order, "Predictor context length (1 or 2)");
  cmd->add_option("--top-k", f.top_k, "Prefetch at most K keys per access");
  cmd->add_option("--p-min", f.p_min, "Minimum predicted probability");
  cmd->add_option("--alpha", f.alpha, "Additive smoothing");
  cmd->add_option("--min-support", f.min_support, "Observations needed before predicting");
  cmd->add_option("--trigger", f.trigger, "Prefetch trigger: every or miss");
  cmd->add_option("--arc-adaptation", f.arc_adaptation, "ARC target adaptation: unit or ratio");
  cmd->add_option("--out", f.out, "Report format: json, csv or table");
}

Trace load_trace(const CommonFlags& f) {
  if (f.format != "plain" && f.format != "smpc") throw UsageError("--format must be plain or smpc");
  const std::string text = read_file(f.trace_path);
  try {
    return f.format == "plain" ? parse_plain(text) : parse_smpc(text);
  } catch (const MalformedLine& e) {
    throw std::runtime_error(f.trace_path + ": " + e.what());
  }
}

ReportFormat report_format(const CommonFlags& f) {
  auto fmt = parse_report_format(f.out);
  if (!fmt) throw UsageError("--out must be json, csv or table");
  return *fmt;
}

// Everything but the policy and capacity.
RunConfig base_config(const CommonFlags& f, const CLI::App* cmd) {
  RunConfig rc;
  if (f.arc_adaptation == "unit") {
    rc.cache.arc_adaptation = ArcAdaptation::Unit;
  } else if (f.arc_adaptation == "ratio") {
    rc.cache.arc_adaptation = ArcAdaptation::Ratio;
  } else {
    throw UsageError("--arc-adaptation must be unit or ratio");
  }

  PreEvictConfig pre;
  if (!f.pre_evict.empty()) {
    if (f.pre_evict != "halfway") throw UsageError("--pre-evict must be halfway");
    if (cmd->count("--address-space") == 0) throw UsageError("--pre-evict halfway needs --address-space");
    pre.halfway_enabled = true;
    pre.address_space_size = f.address_space;
  } else if (cmd->count("--address-space")) {
    throw UsageError("--address-space needs --pre-evict halfway");
  }
  if (cmd->count("--pre-evict-timer")) {
    pre.timer_enabled = true;
    pre.timer_init = f.timer;
  }
  if (pre.enabled()) rc.pre = pre;

  const bool tuned = cmd->count("--order") || cmd->count("--top-k") || cmd->count("--p-min") ||
                     cmd->count("--alpha") || cmd->count("--min-support") || cmd->count("--trigger");
  if (!f.prefetch.empty()) {
    if (f.prefetch != "pgm") throw UsageError("--prefetch must be pgm");
    PrefetchSettings ps;
    ps.predictor.order = f.order;
    ps.predictor.alpha = f.alpha;
    ps.predictor.min_support = f.min_support;
    ps.prefetch.top_k = f.top_k;
    ps.prefetch.p_min = f.p_min;
    if (f.trigger == "every") {
      ps.prefetch.trigger = PrefetchTrigger::OnEveryAccess;
    } else if (f.trigger == "miss") {
      ps.prefetch.trigger = PrefetchTrigger::OnMiss;
    } else {
      throw UsageError("--trigger must be every or miss");
    }
    rc.prefetch = ps;
  } else if (tuned) {
    throw UsageError("prefetch options need --prefetch pgm");
  }
  return rc;
}

Policy policy_flag(const std::string& name) {
  auto p = parse_policy(name);
  if (!p) throw UsageError("unknown policy '" + name + "'");
  return *p;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

int cmd_run(const CommonFlags& f, const CLI::App* cmd, const std::string& policy, std::size_t capacity,
            std::ostream& out) {
  const auto format = report_format(f);
  RunConfig rc = base_config(f, cmd);
  rc.cache.policy = policy_flag(policy);
  rc.cache.capacity = capacity;
  rc.label = fmt::format("{}@{}", to_string(rc.cache.policy), capacity);
  rc.validate();
  const Trace trace = load_trace(f);
  const SimReport report = run_sim(trace, rc);
  out << emit_report(std::span<const SimReport>(&report, 1), format);
  return kExitOk;
}

int cmd_compare(const CommonFlags& f, const CLI::App* cmd, const std::string& policies,
                const std::string& capacities, std::ostream& out) {
  const auto format = report_format(f);
  const RunConfig base = base_config(f, cmd);
  std::vector<Policy> ps;
  for (const auto& p : split(policies, ',')) ps.push_back(policy_flag(p));
  const auto cap_tokens = split(capacities, ',');
  if (ps.empty() || cap_tokens.empty()) throw UsageError("--policies and --capacities must be nonempty");
  for (const auto& t : cap_tokens)
    if (resolve_capacity(t, 1) == 0) throw UsageError("invalid capacity '" + t + "'");

  const Trace trace = load_trace(f);
  std::vector<RunConfig> configs;
  for (Policy p : ps) {
    for (const auto& t : cap_tokens) {
      RunConfig rc = base;
      rc.cache.policy = p;
      rc.cache.capacity = resolve_capacity(t, trace.size());
      rc.label = fmt::format("{}@{}", to_string(p), rc.cache.capacity);
      configs.push_back(std::move(rc));
    }
  }
  const auto reports = compare(trace, configs);
  out << emit_report(reports, format);
  return kExitOk;
}

int cmd_gen_trace(const std::string& model, std::uint64_t states, std::size_t length, double determinism,
                  std::uint64_t seed, const std::string& path) {
  if (model != "markov") throw UsageError("--model must be markov");
  const Trace trace = gen_markov_trace(seed, states, length, determinism);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path + ": cannot open file for writing");
  os << emit_plain(trace);
  if (!os) throw std::runtime_error(path + ": write failed");
  return kExitOk;
}

int cmd_lru_sim(std::istream& in, std::ostream& out) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  LruProblemSet set;
  try {
    set = parse_lru_problem(text);
  } catch (const MalformedCase& e) {
    throw std::runtime_error(std::string("<stdin>: ") + e.what());
  }
  for (std::size_t i = 0; i < set.cases.size(); ++i) {
    const auto& c = set.cases[i];
    out << "Simulation " << (i + 1) << "\n";
    Cache cache(CacheConfig{c.capacity, Policy::LRU});
    Seq now = 0;
    for (char ch : c.script) {
      if (ch == '!') {
        std::string line;
        for (Key k : cache.snapshot_lru_order()) line.push_back(key_letter(k));
        out << line << "\n";
      } else {
        cache.access(letter_key(ch), now++);
      }
    }
  }
  return kExitOk;
}

int cmd_bayes(const std::string& net_path, const std::string& query, const std::string& evidence,
              const std::string& method, std::ostream& out) {
  if (method != "enum" && method != "ve") throw UsageError("--method must be enum or ve");
  std::vector<std::pair<std::string, std::string>> items;
  if (!evidence.empty()) {
    for (const auto& item : split(evidence, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
        throw UsageError("evidence items must look like VAR=VAL, got '" + item + "'");
      items.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
  }
  const std::string text = read_file(net_path);
  std::optional<bayes::BayesNet> net;
  try {
    net.emplace(bayes::parse_net_json(text));
  } catch (const bayes::BayesError& e) {
    throw std::runtime_error(net_path + ": " + e.what());
  }
  const bayes::VarId q = net->index_of(query);
  const bayes::Evidence ev = bayes::parse_evidence(*net, items);
  if (ev.count(q)) throw UsageError("query variable '" + query + "' is also in the evidence");
  const auto dist = method == "enum" ? bayes::infer_enumeration(*net, q, ev)
                                     : bayes::infer_variable_elimination(*net, q, ev);
  const auto& var = net->variable(q);
  for (std::size_t i = 0; i < dist.size(); ++i) out << fmt::format("{} {:.6f}\n", var.values[i], dist[i]);
  return kExitOk;
}

}  // namespace

std::size_t resolve_capacity(const std::string& token, std::size_t n) {
  const double dn = static_cast<double>(n);
  if (token == "log") return n < 2 ? 1 : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::log10(dn))));
  if (token == "sqrt") return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(dn))));
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 18) return 0;
  return static_cast<std::size_t>(std::stoull(token));
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven cache replacement and prefetching lab", "cachelab"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_policy;
  std::size_t run_capacity = 0;
  auto* run = app.add_subcommand("run", "Simulate one configuration over a trace");
  add_common(run, run_flags);
  run->add_option("--policy", run_policy, "fifo, lifo, lru, mru or arc")->required();
  run->add_option("--capacity", run_capacity, "Cache capacity in entries")->required();

  CommonFlags cmp_flags;
  std::string cmp_policies, cmp_capacities;
  auto* cmp = app.add_subcommand("compare", "Simulate every policy/capacity pair over one trace");
  add_common(cmp, cmp_flags);
  cmp->add_option("--policies", cmp_policies, "Comma list of policies")->required();
  cmp->add_option("--capacities", cmp_capacities, "Comma list of capacities, log or sqrt")->required();

  std::string model, gen_out;
  std::uint64_t states = 0, seed = 0;
  std::size_t length = 0;
  double determinism = 0.0;
  auto* gen = app.add_subcommand("gen-trace", "Write a seeded synthetic trace");
  gen->add_option("--model", model, "markov")->required();
  gen->add_option("--states", states, "Number of distinct keys")->required();
  gen->add_option("--length", length, "Number of accesses")->required();
  gen->add_option("--determinism", determinism, "Probability of the successor step")->required();
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "Output path")->required();

  auto* lru = app.add_subcommand("lru-sim", "Run the letter-script LRU problem from standard input");

  std::string net_path, query, evidence, method = "ve";
  auto* bn = app.add_subcommand("bayes", "Query a Bayesian network");
  bn->add_option("--net", net_path, "Net definition (JSON)")->required();
  bn->add_option("--query", query, "Query variable")->required();
  bn->add_option("--evidence", evidence, "VAR=VAL,...");
  bn->add_option("--method", method, "enum or ve");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cachelab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_flags, run, run_policy, run_capacity, out);
    if (*cmp) return cmd_compare(cmp_flags, cmp, cmp_policies, cmp_capacities, out);
    if (*gen) return cmd_gen_trace(model, states, length, determinism, seed, gen_out);
    if (*lru) return cmd_lru_sim(in, out);
    if (*bn) return cmd_bayes(net_path, query, evidence, method, out);
  } catch (const UsageError& e) {
    err << "cachelab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bayes::InvalidQuery& e) {
    err << "cachelab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "cachelab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "cachelab: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cachelab
