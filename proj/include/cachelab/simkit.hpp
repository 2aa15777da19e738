#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cachelab/cache.hpp"
#include "cachelab/pre_evict.hpp"
#include "cachelab/prefetch.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

struct PrefetchSettings {
  PrefetchConfig prefetch;
  PredictorConfig predictor;
};

struct RunConfig {
  std::string label;
  CacheConfig cache;
  std::optional<PreEvictConfig> pre;
  std::optional<PrefetchSettings> prefetch;

  void validate() const;
};

struct SimReport {
  std::string label;
  std::uint64_t accesses = 0;
  std::uint64_t demand_hits = 0;
  std::uint64_t demand_misses = 0;
  std::uint64_t compulsory_misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t timer_evictions = 0;
  std::uint64_t halfway_evictions = 0;
  std::uint64_t prefetch_issued = 0;
  std::uint64_t prefetch_useful = 0;
  std::uint64_t prefetch_useless = 0;
  std::uint64_t prefetch_harmful = 0;
  std::uint64_t prefetch_hits = 0;
  double coverage = 0.0;
  double hit_ratio = 0.0;
  std::uint64_t distinct_keys = 0;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Report field names in their serialized order.
inline constexpr std::array<std::string_view, 16> kReportFields{
    "label",           "accesses",        "demand_hits",      "demand_misses",
    "compulsory_misses", "evictions",     "timer_evictions",  "halfway_evictions",
    "prefetch_issued", "prefetch_useful", "prefetch_useless", "prefetch_harmful",
    "prefetch_hits",   "coverage",        "hit_ratio",        "distinct_keys"};

class DuplicateLabel : public std::invalid_argument {
 public:
  explicit DuplicateLabel(const std::string& label)
      : std::invalid_argument("duplicate run label '" + label + "'") {}
};

// Replays the trace on one global clock (one tick per event). Per event:
// timer expiries, predictor update, hit/miss with halfway filtering and base
// policy insertion, prefetch decision and insertion, outcome bookkeeping.
SimReport run_sim(const Trace& trace, const RunConfig& config);

// One independent run per config over the same trace, possibly in parallel.
// Reports come back in config order.
std::vector<SimReport> compare(const Trace& trace, const std::vector<RunConfig>& configs,
                               unsigned max_threads = 0);

enum class ReportFormat { Json, Csv, Table };

std::optional<ReportFormat> parse_report_format(std::string_view name);

std::string emit_report(std::span<const SimReport> reports, ReportFormat format);

// Reads back the csv form of emit_report.
std::vector<SimReport> parse_csv_reports(std::string_view text);

}  // namespace cachelab
