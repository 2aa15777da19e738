#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cachelab/trace.hpp"

namespace cachelab {

enum class Policy { FIFO, LIFO, LRU, MRU, ARC };

// How far a ghost hit moves ARC's T1 target: always one slot, or by the
// ghost-list size ratio as in the original algorithm.
enum class ArcAdaptation { Unit, Ratio };

std::string_view to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view name);

struct CacheConfig {
  std::size_t capacity = 1;
  Policy policy = Policy::LRU;
  ArcAdaptation arc_adaptation = ArcAdaptation::Unit;

  // Throws std::invalid_argument on capacity 0.
  void validate() const;
};

struct EntryMeta {
  Key key = 0;
  Seq inserted_at = 0;
  Seq last_used_at = 0;
  std::uint64_t use_count = 0;
  // Tick at which the expiry timer was last (re)armed; only read by the
  // pre-eviction wrapper.
  Seq timer_armed_at = 0;
  bool prefetched = false;
  std::optional<std::uint64_t> prefetch_id;
};

enum class AccessKind { Hit, Miss };

struct AccessOutcome {
  AccessKind kind = AccessKind::Miss;
  std::vector<Key> evicted;
  bool was_prefetched_hit = false;

  bool hit() const { return kind == AccessKind::Hit; }
};

// Four-list adaptive replacement state. T1/T2 hold resident keys (LRU at the
// front), B1/B2 hold ghost keys evicted from T1/T2 respectively.
class ArcState {
 public:
  enum class List : std::uint8_t { T1, T2, B1, B2 };

  ArcState(std::size_t capacity, ArcAdaptation adaptation);

  std::optional<List> where(Key key) const;
  std::size_t target_t1() const { return p_; }
  std::size_t capacity() const { return capacity_; }
  const std::list<Key>& t1() const { return lists_[0]; }
  const std::list<Key>& t2() const { return lists_[1]; }
  const std::list<Key>& b1() const { return lists_[2]; }
  const std::list<Key>& b2() const { return lists_[3]; }
  std::size_t resident() const { return t1().size() + t2().size(); }

  // Resident hit: promote to the MRU end of T2.
  void on_hit(Key key);

  // Key not resident. A demand miss adapts p on a ghost hit and recalls the
  // key into T2; a non-demand insertion forgets any ghost and enters T1
  // without adapting. Returns the resident key displaced, if any.
  std::optional<Key> on_miss(Key key, bool demand);

  // Remove a resident key without leaving a ghost.
  void drop(Key key);

  // Returns an empty string when every structural invariant holds, else a
  // description of the first violation.
  std::string check_invariants() const;

 private:
  struct Slot {
    List list;
    std::list<Key>::iterator it;
  };

  std::list<Key>& list(List l) { return lists_[static_cast<int>(l)]; }
  void push_mru(List l, Key key);
  void erase(Key key);
  Key pop_lru(List l);
  Key replace();

  std::size_t capacity_;
  ArcAdaptation adaptation_;
  std::size_t p_ = 0;
  std::list<Key> lists_[4];
  std::unordered_map<Key, Slot> index_;
};

// Single-level, fully-associative cache of unit-size entries addressed by key.
class Cache {
 public:
  explicit Cache(CacheConfig config);

  const CacheConfig& config() const { return config_; }
  std::size_t capacity() const { return config_.capacity; }
  std::size_t size() const { return entries_.size(); }
  bool full() const { return entries_.size() >= config_.capacity; }
  Seq clock() const { return clock_; }

  bool contains(Key key) const { return entries_.count(key) != 0; }
  const EntryMeta* find(Key key) const;

  // Demand access at tick `seq`. Ticks must not go backwards.
  AccessOutcome access(Key key, Seq seq);

  // Non-demand insertion (prefetch) of a key that is not resident, through
  // the policy's normal insertion path. Returns the displaced key, if any.
  std::optional<Key> insert_prefetched(Key key, Seq seq, std::uint64_t prefetch_id);

  // Forced removal of a resident key (pre-eviction).
  void evict(Key key);

  // Victim the configured classical policy would choose. Requires size() > 0.
  Key victim() const;
  Key victim_fifo() const;
  Key victim_lifo() const;
  Key victim_lru() const;
  Key victim_mru() const;

  // Resident keys, least recently used first.
  std::vector<Key> snapshot_lru_order() const;
  // Resident keys, oldest insertion first.
  std::vector<Key> insertion_order() const;

  const std::list<Key>& recency_list() const { return recency_; }
  const ArcState* arc() const { return arc_ ? &*arc_ : nullptr; }

  // Empty when the resident map and the order books agree.
  std::string check_invariants() const;

 private:
  struct Entry {
    EntryMeta meta;
    std::list<Key>::iterator recency_it;
    std::list<Key>::iterator insertion_it;
  };

  void advance(Seq seq);
  std::optional<Key> make_room(Key incoming, bool demand);
  void remove(Key key);
  Entry& emplace(Key key, Seq seq);

  CacheConfig config_;
  Seq clock_ = 0;
  std::unordered_map<Key, Entry> entries_;
  std::list<Key> recency_;    // least -> most recently used
  std::list<Key> insertion_;  // oldest -> newest
  std::optional<ArcState> arc_;
};

}  // namespace cachelab
