#include <algorithm>
#include <stdexcept>

#include "cachelab/cache.hpp"

namespace cachelab {

ArcState::ArcState(std::size_t capacity, ArcAdaptation adaptation)
    : capacity_(capacity), adaptation_(adaptation) {
  if (capacity == 0) throw std::invalid_argument("ARC capacity must be positive");
}

std::optional<ArcState::List> ArcState::where(Key key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second.list;
}

void ArcState::push_mru(List l, Key key) {
  auto& lst = list(l);
  lst.push_back(key);
  index_[key] = Slot{l, std::prev(lst.end())};
}

void ArcState::erase(Key key) {
  auto it = index_.find(key);
  if (it == index_.end()) return;
  list(it->second.list).erase(it->second.it);
  index_.erase(it);
}

Key ArcState::pop_lru(List l) {
  auto& lst = list(l);
  Key key = lst.front();
  lst.pop_front();
  index_.erase(key);
  return key;
}

// Moves the LRU of T1 to B1 while T1 holds at least max(1, p) keys,
// otherwise the LRU of T2 to B2. Only called on a full cache.
Key ArcState::replace() {
  if (t1().size() >= std::max<std::size_t>(1, p_)) {
    Key k = pop_lru(List::T1);
    push_mru(List::B1, k);
    return k;
  }
  Key k = pop_lru(List::T2);
  push_mru(List::B2, k);
  return k;
}

void ArcState::on_hit(Key key) {
  auto loc = where(key);
  if (loc != List::T1 && loc != List::T2) throw std::logic_error("ARC hit on non-resident key");
  erase(key);
  push_mru(List::T2, key);
}

std::optional<Key> ArcState::on_miss(Key key, bool demand) {
  auto loc = where(key);
  if (loc == List::T1 || loc == List::T2) throw std::logic_error("ARC miss on resident key");

  const bool full = resident() >= capacity_;
  std::optional<Key> evicted;

  if (demand && loc == List::B1) {
    std::size_t delta = 1;
    if (adaptation_ == ArcAdaptation::Ratio) delta = std::max<std::size_t>(1, b2().size() / b1().size());
    p_ = std::min(capacity_, p_ + delta);
    if (full) evicted = replace();
    erase(key);
    push_mru(List::T2, key);
    return evicted;
  }
  if (demand && loc == List::B2) {
    std::size_t delta = 1;
    if (adaptation_ == ArcAdaptation::Ratio) delta = std::max<std::size_t>(1, b1().size() / b2().size());
    p_ = p_ > delta ? p_ - delta : 0;
    if (full) evicted = replace();
    erase(key);
    push_mru(List::T2, key);
    return evicted;
  }

  // Prefetch into a ghost slot: forget the history, enter as a cold key.
  if (loc) erase(key);

  if (t1().size() + b1().size() >= capacity_) {
    if (t1().size() < capacity_) {
      pop_lru(List::B1);
      if (full) evicted = replace();
    } else {
      evicted = pop_lru(List::T1);
    }
  } else {
    const std::size_t total = t1().size() + t2().size() + b1().size() + b2().size();
    if (total >= capacity_) {
      if (total >= 2 * capacity_ && !b2().empty()) pop_lru(List::B2);
      if (full) evicted = replace();
    }
  }
  push_mru(List::T1, key);
  return evicted;
}

void ArcState::drop(Key key) {
  auto loc = where(key);
  if (loc != List::T1 && loc != List::T2) throw std::logic_error("ARC drop of non-resident key");
  erase(key);
}

std::string ArcState::check_invariants() const {
  std::size_t listed = 0;
  for (int l = 0; l < 4; ++l) {
    for (auto it = lists_[l].begin(); it != lists_[l].end(); ++it) {
      auto slot = index_.find(*it);
      if (slot == index_.end() || static_cast<int>(slot->second.list) != l || slot->second.it != it)
        return "list entry " + std::to_string(*it) + " not indexed consistently";
      ++listed;
    }
  }
  if (listed != index_.size()) return "index holds keys missing from the lists";
  if (resident() > capacity_) return "more resident keys than capacity";
  if (t1().size() + b1().size() > capacity_) return "|T1|+|B1| exceeds capacity";
  if (listed > 2 * capacity_) return "directory exceeds twice the capacity";
  if (p_ > capacity_) return "p outside [0, capacity]";
  return {};
}

}  // namespace cachelab
