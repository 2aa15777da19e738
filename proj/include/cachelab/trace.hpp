#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cachelab {

using Key = std::uint64_t;
using Seq = std::uint64_t;

enum class OpKind { InstrFetch, DataRead, DataWrite, Unspecified };

enum class TraceSource { Plain, Smpc, Synthetic };

struct TraceEvent {
  Seq seq = 0;
  Key key = 0;
  OpKind op = OpKind::Unspecified;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;
  TraceSource source = TraceSource::Plain;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  std::vector<Key> keys() const;
};

// One case of the letter-script LRU problem: a capacity and a script over
// 'A'..'Z' (accesses) and '!' (print the cache).
struct LruCase {
  std::size_t capacity = 0;
  std::string script;
};

struct LruProblemSet {
  std::vector<LruCase> cases;
};

// Raised for a line of a trace file that cannot be decoded. line_no is 1-based.
class MalformedLine : public std::runtime_error {
 public:
  explicit MalformedLine(std::size_t line_no, const std::string& why);
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class MalformedCase : public std::runtime_error {
 public:
  explicit MalformedCase(std::size_t line_no, const std::string& why);
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

// One key per line, decimal or 0x-prefixed hex. '#' starts a comment line.
Trace parse_plain(std::string_view text);

// Two columns per line: "<op> <address>" with op in {0, 2, 3}.
Trace parse_smpc(std::string_view text);

// Inverse of parse_plain: one decimal key per line.
std::string emit_plain(const Trace& trace);

LruProblemSet parse_lru_problem(std::string_view text);

inline Key letter_key(char c) { return static_cast<Key>(c - 'A'); }
inline char key_letter(Key k) { return static_cast<char>('A' + k); }

// Seeded order-1 Markov chain over {0..num_keys-1}. From state s the next key
// is (s + 1) % num_keys with probability `determinism`, otherwise uniform.
Trace gen_markov_trace(std::uint64_t seed, std::uint64_t num_keys,
                       std::size_t length, double determinism);

std::string read_file(const std::string& path);

}  // namespace cachelab
