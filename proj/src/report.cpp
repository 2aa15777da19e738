#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

#include "cachelab/simkit.hpp"
#include "json.hpp"

namespace cachelab {

namespace {

std::vector<std::string> report_cells(const SimReport& r) {
  auto u = [](std::uint64_t v) { return std::to_string(v); };
  auto f = [](double v) { return fmt::format("{:.4f}", v); };
  return {r.label,
          u(r.accesses),
          u(r.demand_hits),
          u(r.demand_misses),
          u(r.compulsory_misses),
          u(r.evictions),
          u(r.timer_evictions),
          u(r.halfway_evictions),
          u(r.prefetch_issued),
          u(r.prefetch_useful),
          u(r.prefetch_useless),
          u(r.prefetch_harmful),
          u(r.prefetch_hits),
          f(r.coverage),
          f(r.hit_ratio),
          u(r.distinct_keys)};
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string emit_json(std::span<const SimReport> reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json o;
    o["label"] = r.label;
    o["accesses"] = r.accesses;
    o["demand_hits"] = r.demand_hits;
    o["demand_misses"] = r.demand_misses;
    o["compulsory_misses"] = r.compulsory_misses;
    o["evictions"] = r.evictions;
    o["timer_evictions"] = r.timer_evictions;
    o["halfway_evictions"] = r.halfway_evictions;
    o["prefetch_issued"] = r.prefetch_issued;
    o["prefetch_useful"] = r.prefetch_useful;
    o["prefetch_useless"] = r.prefetch_useless;
    o["prefetch_harmful"] = r.prefetch_harmful;
    o["prefetch_hits"] = r.prefetch_hits;
    o["coverage"] = r.coverage;
    o["hit_ratio"] = r.hit_ratio;
    o["distinct_keys"] = r.distinct_keys;
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

std::string emit_csv(std::span<const SimReport> reports) {
  std::string out;
  for (std::size_t i = 0; i < kReportFields.size(); ++i) {
    if (i) out.push_back(',');
    out.append(kReportFields[i]);
  }
  out.push_back('\n');
  for (const auto& r : reports) {
    auto cells = report_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_escape(cells[i]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string emit_table(std::span<const SimReport> reports) {
  std::vector<std::vector<std::string>> rows;
  rows.emplace_back(kReportFields.begin(), kReportFields.end());
  for (const auto& r : reports) rows.push_back(report_cells(r));
  std::vector<std::size_t> width(kReportFields.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) line += "  ";
      // Label left-aligned, numbers right-aligned.
      if (i == 0) {
        line += fmt::format("{:<{}}", rows[r][i], width[i]);
      } else {
        line += fmt::format("{:>{}}", rows[r][i], width[i]);
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell.push_back(c);
      any = true;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t to_u64(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "table") return ReportFormat::Table;
  return std::nullopt;
}

std::string emit_report(std::span<const SimReport> reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return emit_json(reports);
    case ReportFormat::Csv: return emit_csv(reports);
    case ReportFormat::Table: return emit_table(reports);
  }
  return {};
}

std::vector<SimReport> parse_csv_reports(std::string_view text) {
  auto rows = split_csv(text);
  if (rows.empty()) throw std::runtime_error("csv: missing header row");
  const auto& header = rows.front();
  if (header.size() != kReportFields.size()) throw std::runtime_error("csv: unexpected header");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != kReportFields[i]) throw std::runtime_error("csv: unexpected column '" + header[i] + "'");

  std::vector<SimReport> out;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    const auto& c = rows[n];
    const std::size_t line = n + 1;
    if (c.size() != kReportFields.size())
      throw std::runtime_error("csv line " + std::to_string(line) + ": wrong column count");
    SimReport r;
    r.label = c[0];
    r.accesses = to_u64(c[1], line);
    r.demand_hits = to_u64(c[2], line);
    r.demand_misses = to_u64(c[3], line);
    r.compulsory_misses = to_u64(c[4], line);
    r.evictions = to_u64(c[5], line);
    r.timer_evictions = to_u64(c[6], line);
    r.halfway_evictions = to_u64(c[7], line);
    r.prefetch_issued = to_u64(c[8], line);
    r.prefetch_useful = to_u64(c[9], line);
    r.prefetch_useless = to_u64(c[10], line);
    r.prefetch_harmful = to_u64(c[11], line);
    r.prefetch_hits = to_u64(c[12], line);
    r.coverage = to_double(c[13], line);
    r.hit_ratio = to_double(c[14], line);
    r.distinct_keys = to_u64(c[15], line);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cachelab
