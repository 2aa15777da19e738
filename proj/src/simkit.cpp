#include "cachelab/simkit.hpp"

#include <atomic>
#include <exception>
#include <set>
#include <thread>
#include <unordered_set>

namespace cachelab {

void RunConfig::validate() const {
  cache.validate();
  if (pre) pre->validate();
  if (prefetch) {
    prefetch->prefetch.validate();
    prefetch->predictor.validate();
  }
}

SimReport run_sim(const Trace& trace, const RunConfig& config) {
  config.validate();
  PreEvictCache cache(config.cache, config.pre.value_or(PreEvictConfig{}));
  std::optional<MarkovPredictor> predictor;
  if (config.prefetch) predictor.emplace(config.prefetch->predictor);
  PrefetchLedger ledger;

  SimReport r;
  r.label = config.label;
  std::unordered_set<Key> seen;

  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Key key = trace.events[i].key;
    const Seq now = i;

    if (predictor) predictor->observe(key);
    auto out = cache.access(key, now);

    ++r.accesses;
    if (out.access.hit()) {
      ++r.demand_hits;
    } else {
      ++r.demand_misses;
      if (!seen.count(key)) ++r.compulsory_misses;
    }
    seen.insert(key);
    r.evictions += out.access.evicted.size();
    r.timer_evictions += out.timer_evicted.size();
    r.halfway_evictions += out.halfway_evicted.size();

    if (!predictor) continue;

    // The demand event resolves before this access's evictions, so a victim
    // re-request marks its prefetch harmful even if the prefetched key is
    // displaced by the same access.
    if (out.access.hit()) {
      ledger.resolve(DemandHit{key});
    } else {
      ledger.resolve(DemandMiss{key});
    }
    for (Key k : out.access.evicted) ledger.resolve(Evicted{k});

    const auto& pf = config.prefetch->prefetch;
    if (pf.trigger == PrefetchTrigger::OnMiss && out.access.hit()) continue;
    const auto ctx = predictor->context();
    const auto predictions = predictor->predict_next(ctx, pf.top_k);
    Cache& base = cache.base();
    const auto picks = decide_prefetch(predictions, pf, [&](Key k) { return base.contains(k); });
    for (Key k : picks) {
      if (base.contains(k)) continue;
      auto victim = base.insert_prefetched(k, now, ledger.records().size());
      if (victim) {
        ++r.evictions;
        ledger.resolve(Evicted{*victim});
      }
      ledger.issue(k, now, victim);
    }
  }

  if (predictor) {
    ledger.finalize();
    const auto& s = ledger.stats();
    r.prefetch_issued = s.issued;
    r.prefetch_useful = s.useful;
    r.prefetch_useless = s.useless;
    r.prefetch_harmful = s.harmful;
    r.prefetch_hits = s.prefetch_hits;
    r.coverage = coverage(s);
  }
  r.hit_ratio = r.accesses ? static_cast<double>(r.demand_hits) / static_cast<double>(r.accesses) : 0.0;
  r.distinct_keys = seen.size();
  return r;
}

std::vector<SimReport> compare(const Trace& trace, const std::vector<RunConfig>& configs, unsigned max_threads) {
  if (configs.empty()) throw std::invalid_argument("compare needs at least one configuration");
  std::set<std::string> labels;
  for (const auto& c : configs) {
    if (!labels.insert(c.label).second) throw DuplicateLabel(c.label);
    c.validate();
  }

  std::vector<SimReport> reports(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) {
      try {
        reports[i] = run_sim(trace, configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return reports;
}

}  // namespace cachelab
