#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cachelab/trace.hpp"

namespace cachelab {

struct PredictorConfig {
  // Context length: 1 is a plain Markov chain, 2 also conditions on the
  // key before last.
  std::size_t order = 1;
  double alpha = 1.0;
  std::uint64_t min_support = 2;

  void validate() const;
};

struct Prediction {
  Key key = 0;
  double probability = 0.0;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Online order-1/2 transition counter over trace keys.
class MarkovPredictor {
 public:
  explicit MarkovPredictor(PredictorConfig config = {});

  const PredictorConfig& config() const { return config_; }

  // Counts context -> key once a full context exists, then shifts key in.
  void observe(Key key);

  // The last `order` observed keys, oldest first; shorter before warmup.
  std::vector<Key> context() const;

  // Successors of `context`, smoothed as (count + alpha) / (total + alpha *
  // distinct successors), highest first with ties by ascending key. Empty
  // when the context has fewer than min_support observations.
  std::vector<Prediction> predict_next(std::span<const Key> context, std::size_t top_k) const;

  std::uint64_t count(std::span<const Key> context, Key successor) const;
  std::uint64_t support(std::span<const Key> context) const;
  std::size_t context_count() const { return rows_.size(); }

 private:
  using ContextKey = std::array<Key, 2>;
  struct ContextHash {
    std::size_t operator()(const ContextKey& c) const noexcept {
      return std::hash<Key>{}(c[0] * 0x9E3779B97F4A7C15ull ^ c[1]);
    }
  };
  struct Row {
    std::uint64_t total = 0;
    std::unordered_map<Key, std::uint64_t> successors;
  };

  std::optional<ContextKey> make_key(std::span<const Key> context) const;

  PredictorConfig config_;
  std::unordered_map<ContextKey, Row, ContextHash> rows_;
  std::array<Key, 2> window_{};
  std::size_t filled_ = 0;
};

enum class PrefetchTrigger { OnMiss, OnEveryAccess };

struct PrefetchConfig {
  std::size_t top_k = 1;
  double p_min = 0.1;
  PrefetchTrigger trigger = PrefetchTrigger::OnEveryAccess;

  void validate() const;
};

// Up to top_k predicted keys with probability >= p_min that are not resident,
// in rank order.
std::vector<Key> decide_prefetch(std::span<const Prediction> predictions, const PrefetchConfig& config,
                                 const std::function<bool(Key)>& is_resident);

enum class PrefetchOutcome { Pending, Useful, Useless, Harmful };

struct PrefetchRecord {
  std::uint64_t id = 0;
  Key key = 0;
  Seq issued_at = 0;
  std::optional<Key> victim;
  PrefetchOutcome outcome = PrefetchOutcome::Pending;
};

struct PrefetchStats {
  std::uint64_t issued = 0;
  std::uint64_t useful = 0;
  std::uint64_t useless = 0;
  std::uint64_t harmful = 0;
  std::uint64_t prefetch_hits = 0;
  std::uint64_t demand_misses = 0;
};

// 100 * prefetch_hits / (prefetch_hits + demand_misses); 0 when both are 0.
double coverage(const PrefetchStats& stats);

struct DemandHit {
  Key key;
};
struct DemandMiss {
  Key key;
};
struct Evicted {
  Key key;
};

// Ledger of issued prefetches. Each record resolves exactly once: Useful on a
// demand hit to its key, Useless when its key is evicted untouched, Harmful
// when the key it displaced is demand-missed while it is still pending.
class PrefetchLedger {
 public:
  std::uint64_t issue(Key key, Seq seq, std::optional<Key> victim);

  void resolve(DemandHit e);
  void resolve(DemandMiss e);
  void resolve(Evicted e);

  // End of trace: every pending record becomes Useless.
  void finalize();

  const std::vector<PrefetchRecord>& records() const { return records_; }
  const PrefetchStats& stats() const { return stats_; }
  std::size_t pending() const { return pending_by_key_.size(); }

 private:
  void settle(std::uint64_t id, PrefetchOutcome outcome);

  std::vector<PrefetchRecord> records_;
  PrefetchStats stats_;
  std::unordered_map<Key, std::uint64_t> pending_by_key_;
  std::unordered_map<Key, std::vector<std::uint64_t>> pending_by_victim_;
};

}  // namespace cachelab
