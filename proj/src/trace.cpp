#include "cachelab/trace.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace cachelab {

namespace {

// Splits on LF, dropping a trailing CR so CRLF files parse identically.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!fn(++line_no, line)) return;
  }
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_u64(std::string_view tok, std::uint64_t& out, bool allow_hex) {
  int base = 10;
  if (allow_hex && tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    tok.remove_prefix(2);
    base = 16;
  }
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out, base);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

}  // namespace

MalformedLine::MalformedLine(std::size_t line_no, const std::string& why)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + why), line_no_(line_no) {}

MalformedCase::MalformedCase(std::size_t line_no, const std::string& why)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + why), line_no_(line_no) {}

std::vector<Key> Trace::keys() const {
  std::vector<Key> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.key);
  return out;
}

Trace parse_plain(std::string_view text) {
  Trace trace;
  trace.source = TraceSource::Plain;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') return true;
    Key key = 0;
    if (!parse_u64(line, key, true))
      throw MalformedLine(line_no, "invalid key '" + std::string(line) + "'");
    trace.events.push_back({trace.events.size(), key, OpKind::Unspecified});
    return true;
  });
  return trace;
}

Trace parse_smpc(std::string_view text) {
  Trace trace;
  trace.source = TraceSource::Smpc;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    auto line = trim(raw);
    if (line.empty()) return true;
    auto fields = split_ws(line);
    if (fields.size() != 2) throw MalformedLine(line_no, "expected '<op> <address>'");
    OpKind op;
    if (fields[0] == "0") {
      op = OpKind::InstrFetch;
    } else if (fields[0] == "2") {
      op = OpKind::DataRead;
    } else if (fields[0] == "3") {
      op = OpKind::DataWrite;
    } else {
      throw MalformedLine(line_no, "unknown op code '" + std::string(fields[0]) + "'");
    }
    Key key = 0;
    if (!parse_u64(fields[1], key, false))
      throw MalformedLine(line_no, "invalid address '" + std::string(fields[1]) + "'");
    trace.events.push_back({trace.events.size(), key, op});
    return true;
  });
  return trace;
}

std::string emit_plain(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 8);
  char buf[24];
  for (const auto& e : trace.events) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.key);
    out.append(buf, ptr);
    out.push_back('\n');
  }
  return out;
}

LruProblemSet parse_lru_problem(std::string_view text) {
  LruProblemSet set;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    auto line = trim(raw);
    if (line.empty()) return true;
    if (line == "0") return false;
    auto fields = split_ws(line);
    if (fields.size() != 2) throw MalformedCase(line_no, "expected '<capacity> <script>'");
    std::uint64_t cap = 0;
    if (!parse_u64(fields[0], cap, false) || cap < 1)
      throw MalformedCase(line_no, "capacity must be a positive integer");
    auto script = fields[1];
    for (char c : script) {
      if (!((c >= 'A' && c <= 'Z') || c == '!'))
        throw MalformedCase(line_no, std::string("invalid script character '") + c + "'");
    }
    if (script.front() == '!') throw MalformedCase(line_no, "script must start with a letter");
    if (script.find('!') == std::string_view::npos)
      throw MalformedCase(line_no, "script has no '!'");
    set.cases.push_back({static_cast<std::size_t>(cap), std::string(script)});
    return true;
  });
  // A missing "0" terminator is tolerated; end of input ends the set.
  return set;
}

Trace gen_markov_trace(std::uint64_t seed, std::uint64_t num_keys, std::size_t length,
                       double determinism) {
  if (!(determinism >= 0.0 && determinism <= 1.0))
    throw std::invalid_argument("determinism must lie in [0, 1]");
  if (num_keys < 2) throw std::invalid_argument("num_keys must be at least 2");
  if (length < 1) throw std::invalid_argument("length must be positive");

  // Explicit draws instead of <random> distributions, whose output is
  // implementation-defined; traces must be identical across toolchains.
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto below = [&](std::uint64_t n) { return rng() % n; };

  Trace trace;
  trace.source = TraceSource::Synthetic;
  trace.events.reserve(length);
  Key state = below(num_keys);
  for (std::size_t i = 0; i < length; ++i) {
    trace.events.push_back({i, state, OpKind::Unspecified});
    if (unit() < determinism) {
      state = (state + 1) % num_keys;
    } else {
      state = below(num_keys);
    }
  }
  return trace;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cachelab
