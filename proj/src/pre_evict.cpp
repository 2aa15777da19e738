#include "cachelab/pre_evict.hpp"

#include <stdexcept>

namespace cachelab {

void PreEvictConfig::validate() const {
  if (timer_enabled && timer_init < 1) throw std::invalid_argument("timer_init must be at least 1");
  if (halfway_enabled && address_space_size < 2)
    throw std::invalid_argument("address_space_size must be at least 2 for the halfway rule");
}

std::vector<Key> halfway_filter(const Cache& cache, Key requested, const PreEvictConfig& config) {
  std::vector<Key> out;
  const Key halfway = config.halfway();
  if (requested < halfway) return out;
  for (Key k : cache.recency_list())
    if (k < halfway) out.push_back(k);
  return out;
}

std::uint64_t timer_remaining(const EntryMeta& meta, Seq now, const PreEvictConfig& config) {
  const Seq elapsed = now - meta.timer_armed_at;
  return elapsed >= config.timer_init ? 0 : config.timer_init - elapsed;
}

std::vector<Key> tick_timers(const Cache& cache, Seq now, const PreEvictConfig& config) {
  std::vector<Key> expired;
  // Timers are armed exactly when an entry moves to the MRU end of the
  // recency list (insertion or demand hit), so that list is sorted by arming
  // tick and expiries form a prefix of it.
  for (Key k : cache.recency_list()) {
    if (timer_remaining(*cache.find(k), now, config) != 0) break;
    expired.push_back(k);
  }
  return expired;
}

PreEvictCache::PreEvictCache(CacheConfig base, PreEvictConfig pre) : cache_(base), pre_(pre) {
  pre_.validate();
}

PreEvictOutcome PreEvictCache::access(Key key, Seq seq) {
  PreEvictOutcome out;
  if (pre_.timer_enabled) {
    out.timer_evicted = tick_timers(cache_, seq, pre_);
    for (Key k : out.timer_evicted) cache_.evict(k);
  }
  if (pre_.halfway_enabled && !cache_.contains(key)) {
    out.halfway_evicted = halfway_filter(cache_, key, pre_);
    for (Key k : out.halfway_evicted) cache_.evict(k);
  }
  out.access = cache_.access(key, seq);
  std::vector<Key> all = out.timer_evicted;
  all.insert(all.end(), out.halfway_evicted.begin(), out.halfway_evicted.end());
  all.insert(all.end(), out.access.evicted.begin(), out.access.evicted.end());
  out.access.evicted = std::move(all);
  return out;
}

}  // namespace cachelab
