#include "cachelab/prefetch.hpp"

#include <algorithm>
#include <stdexcept>

namespace cachelab {

void PredictorConfig::validate() const {
  if (order != 1 && order != 2) throw std::invalid_argument("predictor order must be 1 or 2");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
}

MarkovPredictor::MarkovPredictor(PredictorConfig config) : config_(config) { config_.validate(); }

std::optional<MarkovPredictor::ContextKey> MarkovPredictor::make_key(std::span<const Key> context) const {
  if (context.size() != config_.order) return std::nullopt;
  ContextKey k{};
  std::copy(context.begin(), context.end(), k.begin());
  return k;
}

void MarkovPredictor::observe(Key key) {
  const std::size_t order = config_.order;
  if (filled_ == order) {
    auto& row = rows_[*make_key(std::span<const Key>(window_.data(), order))];
    ++row.total;
    ++row.successors[key];
  }
  // Newest key sits at window_[order - 1].
  for (std::size_t i = 0; i + 1 < order; ++i) window_[i] = window_[i + 1];
  window_[order - 1] = key;
  filled_ = std::min(filled_ + 1, order);
}

std::vector<Key> MarkovPredictor::context() const {
  const std::size_t order = config_.order;
  return {window_.begin() + static_cast<std::ptrdiff_t>(order - filled_),
          window_.begin() + static_cast<std::ptrdiff_t>(order)};
}

std::uint64_t MarkovPredictor::support(std::span<const Key> context) const {
  auto k = make_key(context);
  if (!k) return 0;
  auto it = rows_.find(*k);
  return it == rows_.end() ? 0 : it->second.total;
}

std::uint64_t MarkovPredictor::count(std::span<const Key> context, Key successor) const {
  auto k = make_key(context);
  if (!k) return 0;
  auto it = rows_.find(*k);
  if (it == rows_.end()) return 0;
  auto s = it->second.successors.find(successor);
  return s == it->second.successors.end() ? 0 : s->second;
}

std::vector<Prediction> MarkovPredictor::predict_next(std::span<const Key> context, std::size_t top_k) const {
  auto k = make_key(context);
  if (!k || top_k == 0) return {};
  auto it = rows_.find(*k);
  if (it == rows_.end()) return {};
  const Row& row = it->second;
  if (row.total < config_.min_support || row.total == 0) return {};

  std::vector<std::pair<Key, std::uint64_t>> ranked(row.successors.begin(), row.successors.end());
  // Smoothed probability is monotone in the raw count.
  auto better = [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; };
  const std::size_t n = std::min(top_k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(), better);

  const double denom = static_cast<double>(row.total) + config_.alpha * static_cast<double>(row.successors.size());
  std::vector<Prediction> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({ranked[i].first, (static_cast<double>(ranked[i].second) + config_.alpha) / denom});
  return out;
}

void PrefetchConfig::validate() const {
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  if (!(p_min >= 0.0 && p_min <= 1.0)) throw std::invalid_argument("p_min must lie in [0, 1]");
}

std::vector<Key> decide_prefetch(std::span<const Prediction> predictions, const PrefetchConfig& config,
                                 const std::function<bool(Key)>& is_resident) {
  std::vector<Key> out;
  for (const auto& p : predictions) {
    if (out.size() >= config.top_k) break;
    if (p.probability < config.p_min || is_resident(p.key)) continue;
    out.push_back(p.key);
  }
  return out;
}

double coverage(const PrefetchStats& stats) {
  const std::uint64_t denom = stats.prefetch_hits + stats.demand_misses;
  if (denom == 0) return 0.0;
  return 100.0 * static_cast<double>(stats.prefetch_hits) / static_cast<double>(denom);
}

std::uint64_t PrefetchLedger::issue(Key key, Seq seq, std::optional<Key> victim) {
  if (auto it = pending_by_key_.find(key); it != pending_by_key_.end())
    settle(it->second, PrefetchOutcome::Useless);
  const std::uint64_t id = records_.size();
  records_.push_back({id, key, seq, victim, PrefetchOutcome::Pending});
  ++stats_.issued;
  pending_by_key_[key] = id;
  if (victim) pending_by_victim_[*victim].push_back(id);
  return id;
}

void PrefetchLedger::settle(std::uint64_t id, PrefetchOutcome outcome) {
  auto& rec = records_[id];
  if (rec.outcome != PrefetchOutcome::Pending) return;
  rec.outcome = outcome;
  switch (outcome) {
    case PrefetchOutcome::Useful: ++stats_.useful; break;
    case PrefetchOutcome::Useless: ++stats_.useless; break;
    case PrefetchOutcome::Harmful: ++stats_.harmful; break;
    case PrefetchOutcome::Pending: break;
  }
  if (auto it = pending_by_key_.find(rec.key); it != pending_by_key_.end() && it->second == id)
    pending_by_key_.erase(it);
  if (rec.victim) {
    auto it = pending_by_victim_.find(*rec.victim);
    if (it != pending_by_victim_.end()) {
      std::erase(it->second, id);
      if (it->second.empty()) pending_by_victim_.erase(it);
    }
  }
}

void PrefetchLedger::resolve(DemandHit e) {
  auto it = pending_by_key_.find(e.key);
  if (it == pending_by_key_.end()) return;
  ++stats_.prefetch_hits;
  settle(it->second, PrefetchOutcome::Useful);
}

void PrefetchLedger::resolve(DemandMiss e) {
  ++stats_.demand_misses;
  auto it = pending_by_victim_.find(e.key);
  if (it == pending_by_victim_.end()) return;
  const auto ids = it->second;
  for (auto id : ids) settle(id, PrefetchOutcome::Harmful);
}

void PrefetchLedger::resolve(Evicted e) {
  auto it = pending_by_key_.find(e.key);
  if (it == pending_by_key_.end()) return;
  settle(it->second, PrefetchOutcome::Useless);
}

void PrefetchLedger::finalize() {
  std::vector<std::uint64_t> ids;
  for (const auto& [key, id] : pending_by_key_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (auto id : ids) settle(id, PrefetchOutcome::Useless);
}

}  // namespace cachelab
