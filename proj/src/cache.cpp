#include "cachelab/cache.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace cachelab {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::FIFO: return "fifo";
    case Policy::LIFO: return "lifo";
    case Policy::LRU: return "lru";
    case Policy::MRU: return "mru";
    case Policy::ARC: return "arc";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view name) {
  for (auto p : {Policy::FIFO, Policy::LIFO, Policy::LRU, Policy::MRU, Policy::ARC})
    if (to_string(p) == name) return p;
  return std::nullopt;
}

void CacheConfig::validate() const {
  if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
}

Cache::Cache(CacheConfig config) : config_(config) {
  config_.validate();
  if (config_.policy == Policy::ARC) arc_.emplace(config_.capacity, config_.arc_adaptation);
}

const EntryMeta* Cache::find(Key key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second.meta;
}

void Cache::advance(Seq seq) {
  if (seq < clock_) throw std::logic_error("cache clock moved backwards");
  clock_ = seq;
}

AccessOutcome Cache::access(Key key, Seq seq) {
  advance(seq);
  AccessOutcome out;
  if (auto it = entries_.find(key); it != entries_.end()) {
    auto& e = it->second;
    out.kind = AccessKind::Hit;
    out.was_prefetched_hit = e.meta.prefetched;
    e.meta.prefetched = false;
    e.meta.last_used_at = seq;
    e.meta.timer_armed_at = seq;
    ++e.meta.use_count;
    recency_.splice(recency_.end(), recency_, e.recency_it);
    if (arc_) arc_->on_hit(key);
    return out;
  }
  out.kind = AccessKind::Miss;
  if (auto victim = make_room(key, true)) out.evicted.push_back(*victim);
  emplace(key, seq).meta.use_count = 1;
  return out;
}

std::optional<Key> Cache::insert_prefetched(Key key, Seq seq, std::uint64_t prefetch_id) {
  advance(seq);
  if (contains(key)) throw std::logic_error("prefetch of a resident key");
  auto victim = make_room(key, false);
  auto& e = emplace(key, seq);
  e.meta.use_count = 0;
  e.meta.prefetched = true;
  e.meta.prefetch_id = prefetch_id;
  return victim;
}

void Cache::evict(Key key) {
  if (!contains(key)) throw std::logic_error("eviction of a non-resident key");
  if (arc_) arc_->drop(key);
  remove(key);
}

std::optional<Key> Cache::make_room(Key incoming, bool demand) {
  if (arc_) {
    auto victim = arc_->on_miss(incoming, demand);
    if (victim) remove(*victim);
    return victim;
  }
  if (!full()) return std::nullopt;
  Key v = victim();
  remove(v);
  return v;
}

void Cache::remove(Key key) {
  auto it = entries_.find(key);
  recency_.erase(it->second.recency_it);
  insertion_.erase(it->second.insertion_it);
  entries_.erase(it);
}

Cache::Entry& Cache::emplace(Key key, Seq seq) {
  Entry e;
  e.meta.key = key;
  e.meta.inserted_at = seq;
  e.meta.last_used_at = seq;
  e.meta.timer_armed_at = seq;
  e.recency_it = recency_.insert(recency_.end(), key);
  e.insertion_it = insertion_.insert(insertion_.end(), key);
  return entries_.emplace(key, std::move(e)).first->second;
}

Key Cache::victim() const {
  switch (config_.policy) {
    case Policy::FIFO: return victim_fifo();
    case Policy::LIFO: return victim_lifo();
    case Policy::LRU: return victim_lru();
    case Policy::MRU: return victim_mru();
    case Policy::ARC:
      if (arc_->t1().size() >= std::max<std::size_t>(1, arc_->target_t1())) return arc_->t1().front();
      return arc_->t2().front();
  }
  throw std::logic_error("unknown policy");
}

Key Cache::victim_fifo() const {
  if (insertion_.empty()) throw std::logic_error("victim requested from an empty cache");
  return insertion_.front();
}

Key Cache::victim_lifo() const {
  if (insertion_.empty()) throw std::logic_error("victim requested from an empty cache");
  return insertion_.back();
}

Key Cache::victim_lru() const {
  if (recency_.empty()) throw std::logic_error("victim requested from an empty cache");
  return recency_.front();
}

Key Cache::victim_mru() const {
  if (recency_.empty()) throw std::logic_error("victim requested from an empty cache");
  return recency_.back();
}

std::vector<Key> Cache::snapshot_lru_order() const { return {recency_.begin(), recency_.end()}; }

std::vector<Key> Cache::insertion_order() const { return {insertion_.begin(), insertion_.end()}; }

std::string Cache::check_invariants() const {
  if (entries_.size() > config_.capacity) return "resident count exceeds capacity";
  if (recency_.size() != entries_.size() || insertion_.size() != entries_.size())
    return "order books disagree with the resident map";
  std::unordered_set<Key> seen;
  for (Key k : recency_) {
    if (!entries_.count(k) || !seen.insert(k).second) return "recency order corrupted";
  }
  seen.clear();
  for (Key k : insertion_) {
    if (!entries_.count(k) || !seen.insert(k).second) return "insertion order corrupted";
  }
  for (const auto& [k, e] : entries_) {
    if (e.meta.last_used_at < e.meta.inserted_at) return "last use precedes insertion";
  }
  if (arc_) {
    if (auto err = arc_->check_invariants(); !err.empty()) return err;
    if (arc_->resident() != entries_.size()) return "ARC lists disagree with the resident map";
    for (Key k : arc_->t1())
      if (!entries_.count(k)) return "T1 key not resident";
    for (Key k : arc_->t2())
      if (!entries_.count(k)) return "T2 key not resident";
  }
  return {};
}

}  // namespace cachelab
