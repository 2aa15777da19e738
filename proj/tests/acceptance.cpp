// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each check also returns a transcript of the reports it
// produced; the determinism criterion reruns everything and compares them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cachelab/bayes.hpp"
#include "cachelab/cli.hpp"
#include "cachelab/pre_evict.hpp"
#include "cachelab/simkit.hpp"
#include "cachelab/trace.hpp"
#include "oracle.hpp"
#include "random_net.hpp"

using namespace cachelab;

namespace {

const std::string kData = CACHELAB_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string transcript;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0 = no stated limit
  std::function<Outcome()> run;
};

Trace make_trace(const std::vector<Key>& keys) {
  Trace t;
  for (std::size_t i = 0; i < keys.size(); ++i) t.events.push_back({i, keys[i], OpKind::Unspecified});
  return t;
}

RunConfig config(Policy p, std::size_t k, bool pgm = false) {
  RunConfig rc;
  rc.cache = {k, p};
  rc.label = fmt::format("{}@{}{}", to_string(p), k, pgm ? "+pgm" : "");
  if (pgm) rc.prefetch = PrefetchSettings{};
  return rc;
}

std::uint64_t naive_misses(Policy p, std::size_t k, const std::vector<Key>& keys) {
  oracle::NaiveCache c(k, p);
  std::uint64_t m = 0;
  for (Key key : keys) m += c.access(key) ? 0 : 1;
  return m;
}

bool bookkeeping_ok(const SimReport& r) {
  const double expect_cov = (r.prefetch_hits + r.demand_misses) == 0
                                ? 0.0
                                : 100.0 * static_cast<double>(r.prefetch_hits) /
                                      static_cast<double>(r.prefetch_hits + r.demand_misses);
  return r.prefetch_useful + r.prefetch_useless + r.prefetch_harmful == r.prefetch_issued &&
         r.prefetch_useful == r.prefetch_hits && r.coverage >= 0.0 && r.coverage <= 100.0 &&
         std::abs(r.coverage - expect_cov) <= 1e-12;
}

std::string csv(const std::vector<SimReport>& rs) { return emit_report(rs, ReportFormat::Csv); }

Outcome golden_lru() {
  Outcome o;
  std::istringstream in(read_file(kData + "/lru_golden.in"));
  std::ostringstream out, err;
  const int code = run_cli({"lru-sim"}, in, out, err);
  o.require(code == 0, "lru-sim exit " + std::to_string(code) + ": " + err.str());
  o.require(out.str() == read_file(kData + "/lru_golden.out"), "output differs from the golden table");
  if (o.pass) o.detail = "3 cases, 7 printed states match";
  o.transcript = out.str();
  return o;
}

Outcome fifo_faults() {
  Outcome o;
  const std::vector<Key> classic{7, 0, 1, 2, 0, 3, 0, 4, 2, 3, 0, 3, 2, 1, 2, 0, 1, 7, 0, 1};
  const std::vector<Key> prefix(classic.begin(), classic.begin() + 10);
  auto full = run_sim(make_trace(classic), config(Policy::FIFO, 3));
  auto pre = run_sim(make_trace(prefix), config(Policy::FIFO, 3));
  o.require(naive_misses(Policy::FIFO, 3, classic) == 15, "reference model disagrees on the 20-reference string");
  o.require(full.demand_misses == 15, fmt::format("20-reference string: {} misses", full.demand_misses));
  o.require(naive_misses(Policy::FIFO, 3, prefix) == 9, "reference model disagrees on the 10-reference prefix");
  o.require(pre.demand_misses == 9, fmt::format("10-reference prefix: {} misses", pre.demand_misses));
  o.detail = o.pass ? "20 refs -> 15 misses, 10-ref prefix -> 9" : o.detail;
  o.transcript = csv({full, pre});
  return o;
}

Outcome belady() {
  Outcome o;
  const std::vector<Key> s{1, 2, 3, 4, 1, 2, 5, 1, 2, 3, 4, 5};
  const auto trace = make_trace(s);
  auto f3 = run_sim(trace, config(Policy::FIFO, 3));
  auto f4 = run_sim(trace, config(Policy::FIFO, 4));
  o.require(f3.demand_misses == 9 && naive_misses(Policy::FIFO, 3, s) == 9, "FIFO k=3 is not 9 misses");
  o.require(f4.demand_misses == 10 && naive_misses(Policy::FIFO, 4, s) == 10, "FIFO k=4 is not 10 misses");
  std::vector<SimReport> rs{f3, f4};
  std::uint64_t prev_hits = 0;
  for (std::size_t k = 1; k <= 6; ++k) {
    auto r = run_sim(trace, config(Policy::LRU, k));
    o.require(r.demand_misses == naive_misses(Policy::LRU, k, s), "LRU disagrees with the reference model");
    o.require(r.demand_hits >= prev_hits, fmt::format("LRU hits drop at k={}", k));
    if (k == 4) o.require(r.demand_misses == 8, fmt::format("LRU k=4: {} misses", r.demand_misses));
    prev_hits = r.demand_hits;
    rs.push_back(r);
  }
  if (o.pass) o.detail = "FIFO 9 (k=3) vs 10 (k=4); LRU k=4 -> 8, hits monotone";
  o.transcript = csv(rs);
  return o;
}

Outcome lru_stack() {
  Outcome o;
  std::ostringstream t;
  int traces = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto trace = make_trace(oracle::random_keys(seed, 10000, 200));
    std::uint64_t prev = 0;
    for (std::size_t k : {2, 4, 8, 16, 32}) {
      auto r = run_sim(trace, config(Policy::LRU, k));
      o.require(r.demand_hits >= prev, fmt::format("seed {} k {}: hits {} < {}", seed, k, r.demand_hits, prev));
      prev = r.demand_hits;
      t << r.demand_hits << ' ';
    }
    ++traces;
  }
  if (o.pass) o.detail = fmt::format("{} traces x 5 capacities", traces);
  o.transcript = t.str();
  return o;
}

Outcome inference_equivalence() {
  using namespace cachelab::bayes;
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  std::ostringstream t;
  for (int n = 0; n < 200; ++n) {
    auto net = testnet::random_binary_net(rng, 3 + rng() % 4);
    const VarId q = rng() % net.size();
    Evidence ev;
    for (VarId v = 0; v < net.size(); ++v)
      if (v != q && rng() % 2) ev[v] = rng() % 2;
    const auto ref = infer_enumeration(net, q, ev);
    auto order = default_elimination_order(net, q, ev);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto ve = infer_variable_elimination(net, q, ev, order);
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ref[i] - ve[i]));
    }
    t << fmt::format("{:.12f} ", ref[0]);
  }
  o.require(worst <= 1e-9, fmt::format("max deviation {:.3e}", worst));
  if (o.pass) o.detail = fmt::format("200 nets x 5 orders, max deviation {:.1e}", worst);
  o.transcript = t.str();
  return o;
}

Outcome sprinkler() {
  using namespace cachelab::bayes;
  Outcome o;
  const auto net = parse_net_json(read_file(kData + "/sprinkler.json"));
  const VarId rain = net.index_of("Rain");
  const VarId wet = net.index_of("WetGrass");
  // Enumeration oracle written out by hand over Sprinkler.
  const double rain_wet = 0.2 * (0.01 * 0.99 + 0.99 * 0.8);
  const double dry_wet = 0.8 * (0.4 * 0.9 + 0.6 * 0.0);
  const double posterior = rain_wet / (rain_wet + dry_wet);
  const auto pe = infer_enumeration(net, rain, {});
  const auto pv = infer_variable_elimination(net, rain, {});
  o.require(pe[0] == 0.2, fmt::format("enumeration prior {:.17g}", pe[0]));
  o.require(pv[0] == 0.2, fmt::format("elimination prior {:.17g}", pv[0]));
  const auto qe = infer_enumeration(net, rain, {{wet, 0}});
  const auto qv = infer_variable_elimination(net, rain, {{wet, 0}});
  const auto six = [](double x) { return fmt::format("{:.6f}", x); };
  o.require(six(qe[0]) == six(posterior), "enumeration posterior " + six(qe[0]));
  o.require(six(qv[0]) == six(posterior), "elimination posterior " + six(qv[0]));
  if (o.pass) o.detail = "P(Rain=T)=0.2, P(Rain=T|WetGrass=T)=" + six(posterior) + " both methods";
  o.transcript = six(qe[0]) + six(qv[0]);
  return o;
}

Outcome blanket() {
  using namespace cachelab::bayes;
  Outcome o;
  const auto net = parse_net_json(read_file(kData + "/diamond.json"));
  o.require(markov_blanket(net, "C") == std::set<std::string>{"A", "D", "E"}, "blanket(C) is not {A,D,E}");
  double worst = 0.0;
  for (VarId x = 0; x < net.size(); ++x) {
    const auto mb = markov_blanket(net, x);
    for (std::size_t mask = 0; mask < (std::size_t{1} << net.size()); ++mask) {
      Evidence all, on_mb;
      for (VarId v = 0; v < net.size(); ++v) {
        if (v == x) continue;
        all[v] = (mask >> v) & 1;
        if (mb.count(v)) on_mb[v] = all[v];
      }
      const auto a = infer_enumeration(net, x, all);
      const auto b = infer_enumeration(net, x, on_mb);
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  o.require(worst <= 1e-9, fmt::format("screening deviation {:.3e}", worst));
  if (o.pass) o.detail = fmt::format("blanket(C)={{A,D,E}}, screening deviation {:.1e}", worst);
  return o;
}

Outcome prefetch_uplift() {
  Outcome o;
  std::vector<SimReport> rs;
  double min_gain = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto trace = gen_markov_trace(seed, 500, 80000, 0.9);
    auto reports = compare(trace, {config(Policy::LRU, 32), config(Policy::LRU, 32, true)});
    const double gain = reports[1].hit_ratio - reports[0].hit_ratio;
    min_gain = std::min(min_gain, gain);
    o.require(gain >= 0.05, fmt::format("seed {}: gain {:.4f}", seed, gain));
    o.require(bookkeeping_ok(reports[1]), fmt::format("seed {}: prefetch bookkeeping", seed));
    rs.insert(rs.end(), reports.begin(), reports.end());
  }
  if (o.pass) o.detail = fmt::format("10 seeds, smallest gain {:.1f} points", 100 * min_gain);
  o.transcript = csv(rs);
  return o;
}

Outcome capacity_sweep() {
  Outcome o;
  const auto trace = gen_markov_trace(600000, 1000, 600000, 0.6);
  const std::size_t n = trace.size();
  const std::size_t ks[] = {resolve_capacity("log", n), resolve_capacity("32", n), resolve_capacity("sqrt", n)};
  o.require(ks[0] == 6 && ks[1] == 32 && ks[2] == 775, "capacity tokens did not resolve to 6/32/775");
  std::vector<RunConfig> configs;
  for (auto p : {Policy::FIFO, Policy::LIFO, Policy::LRU, Policy::MRU, Policy::ARC})
    for (std::size_t k : ks) configs.push_back(config(p, k));
  const auto rs = compare(trace, configs);
  for (std::size_t i = 0; i < rs.size(); i += 3) {
    o.require(rs[i].demand_hits <= rs[i + 1].demand_hits && rs[i + 1].demand_hits <= rs[i + 2].demand_hits,
              fmt::format("{}: hits {} / {} / {}", rs[i].label, rs[i].demand_hits, rs[i + 1].demand_hits,
                          rs[i + 2].demand_hits));
  }
  if (o.pass) o.detail = "5 policies, hits(k=6) <= hits(k=32) <= hits(k=775)";
  o.transcript = csv(rs);
  return o;
}

Outcome pre_evict_contracts() {
  Outcome o;
  std::ostringstream t;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto keys = oracle::random_keys(seed + 500, 4000, 128);
    const Policy p = static_cast<Policy>(seed % 5);
    const std::size_t k = 4 + seed % 29;

    // Disabled wrapper against the bare policy.
    Cache bare(CacheConfig{k, p});
    PreEvictCache off(CacheConfig{k, p}, PreEvictConfig{});
    for (Seq i = 0; i < keys.size(); ++i) {
      auto a = bare.access(keys[i], i);
      auto b = off.access(keys[i], i);
      if (a.hit() != b.access.hit() || a.evicted != b.access.evicted) {
        o.require(false, fmt::format("seed {}: disabled wrapper diverges at {}", seed, i));
        break;
      }
    }

    // Timers T=16 together with halfway on a 128-key space.
    PreEvictConfig cfg;
    cfg.timer_enabled = true;
    cfg.timer_init = 16;
    cfg.halfway_enabled = true;
    cfg.address_space_size = 128;
    PreEvictCache on(CacheConfig{k, p}, cfg);
    std::map<Key, Seq> last_hit_or_insert;
    std::uint64_t timer_ev = 0, halfway_ev = 0;
    for (Seq i = 0; i < keys.size() && o.pass; ++i) {
      auto out = on.access(keys[i], i);
      timer_ev += out.timer_evicted.size();
      halfway_ev += out.halfway_evicted.size();
      last_hit_or_insert[keys[i]] = i;
      for (Key r : on.base().snapshot_lru_order())
        o.require(i - last_hit_or_insert[r] < 16, fmt::format("seed {}: key {} idle 16 requests", seed, r));
      if (!out.access.hit() && keys[i] >= cfg.halfway())
        for (Key r : on.base().snapshot_lru_order())
          o.require(r >= cfg.halfway(), fmt::format("seed {}: key {} below halfway after miss", seed, r));
    }
    t << timer_ev << '/' << halfway_ev << ' ';
  }
  if (o.pass) o.detail = "50 traces: identity, T=16 survival bound, halfway postcondition";
  o.transcript = t.str();
  return o;
}

Outcome prefetch_bookkeeping() {
  Outcome o;
  std::vector<SimReport> rs;
  std::mt19937_64 rng(77);
  for (int i = 0; i < 60; ++i) {
    const auto trace = gen_markov_trace(rng(), 50 + rng() % 400, 20000, 0.5 + 0.5 * static_cast<double>(i % 6) / 5);
    RunConfig rc = config(static_cast<Policy>(i % 5), 2 + rng() % 60, true);
    rc.prefetch->predictor.order = 1 + i % 2;
    rc.prefetch->predictor.alpha = static_cast<double>(i % 3);
    rc.prefetch->prefetch.top_k = 1 + i % 3;
    rc.prefetch->prefetch.p_min = 0.05 * (i % 4);
    rc.prefetch->prefetch.trigger = i % 7 == 0 ? PrefetchTrigger::OnMiss : PrefetchTrigger::OnEveryAccess;
    if (i % 4 == 0) {
      PreEvictConfig pre;
      pre.timer_enabled = true;
      pre.timer_init = 64;
      rc.pre = pre;
    }
    auto r = run_sim(trace, rc);
    o.require(bookkeeping_ok(r), fmt::format("run {} ({}): counters inconsistent", i, r.label));
    rs.push_back(r);
  }
  if (o.pass) o.detail = "60 prefetching runs across policies, orders and triggers";
  o.transcript = csv(rs);
  return o;
}

std::vector<Criterion> criteria() {
  return {
      {1, "golden LRU simulator output", 1.0, golden_lru},
      {2, "FIFO fault count on the classic string", 1.0, fifo_faults},
      {3, "Belady's anomaly under FIFO, LRU monotone", 0.0, belady},
      {4, "LRU stack property on 100 seeded traces", 0.0, lru_stack},
      {5, "enumeration equals variable elimination", 30.0, inference_equivalence},
      {6, "sprinkler prior and posterior", 0.0, sprinkler},
      {7, "Markov blanket and screening", 0.0, blanket},
      {8, "PGM prefetch lifts LRU hit ratio", 10.0, prefetch_uplift},
      {9, "capacity sweep k=6/32/775", 30.0, capacity_sweep},
      {10, "pre-eviction contracts", 0.0, pre_evict_contracts},
      {11, "prefetch bookkeeping", 0.0, prefetch_bookkeeping},
  };
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  std::map<int, std::string> first;
  const auto list = criteria();

  for (const auto& c : list) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s && o.pass) {
      o.pass = false;
      o.detail = fmt::format("took {:.2f}s, limit {:.0f}s", secs, c.budget_s);
    }
    first[c.id] = o.transcript;
    failures += o.pass ? 0 : 1;
    std::printf("%s  [%2d] %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }

  // Determinism: rerun every check and compare transcripts byte for byte.
  {
    const auto t0 = clock::now();
    Outcome o;
    for (const auto& c : list) {
      std::string again;
      try {
        again = c.run().transcript;
      } catch (const std::exception& e) {
        again = std::string("exception: ") + e.what();
      }
      o.require(again == first[c.id], fmt::format("criterion {} produced different output on rerun", c.id));
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (o.pass) o.detail = "all reports byte-identical on rerun";
    failures += o.pass ? 0 : 1;
    std::printf("%s  [12] repeated runs are byte-identical (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
  }

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
