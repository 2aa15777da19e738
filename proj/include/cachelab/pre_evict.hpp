#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cachelab/cache.hpp"

namespace cachelab {

struct PreEvictConfig {
  bool halfway_enabled = false;
  // Size of the key space; keys below address_space_size / 2 form the lower
  // block that a request in the upper half clears.
  std::uint64_t address_space_size = 0;
  bool timer_enabled = false;
  // Requests an entry may go without a demand hit before it expires.
  std::uint64_t timer_init = 2048;

  bool enabled() const { return halfway_enabled || timer_enabled; }
  std::uint64_t halfway() const { return address_space_size / 2; }
  void validate() const;
};

// Keys to evict ahead of a demand miss on `requested`: every resident key
// below halfway when the request is at or above it, otherwise none.
std::vector<Key> halfway_filter(const Cache& cache, Key requested, const PreEvictConfig& config);

// Remaining timer of a resident entry as seen by the tick at `now`.
std::uint64_t timer_remaining(const EntryMeta& meta, Seq now, const PreEvictConfig& config);

// Advances every resident timer to tick `now` and returns the keys whose timer
// has reached zero, oldest arming first. Does not evict.
std::vector<Key> tick_timers(const Cache& cache, Seq now, const PreEvictConfig& config);

struct PreEvictOutcome {
  AccessOutcome access;
  std::vector<Key> timer_evicted;
  std::vector<Key> halfway_evicted;
};

// A base policy wrapped with pre-eviction. Per access: timer expiries, then
// the hit check, then on a miss the halfway rule followed by the base
// policy's insertion.
class PreEvictCache {
 public:
  PreEvictCache(CacheConfig base, PreEvictConfig pre);

  PreEvictOutcome access(Key key, Seq seq);

  Cache& base() { return cache_; }
  const Cache& base() const { return cache_; }
  const PreEvictConfig& pre_config() const { return pre_; }

 private:
  Cache cache_;
  PreEvictConfig pre_;
};

}  // namespace cachelab
