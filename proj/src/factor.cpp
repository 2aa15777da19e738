#include <algorithm>
#include <span>

#include "cachelab/bayes.hpp"
#include "cachelab/factor_kernels.hpp"

namespace cachelab::bayes {

namespace {

std::size_t product(const std::vector<std::size_t>& cards) {
  std::size_t n = 1;
  for (auto c : cards) n *= c;
  return n;
}

std::size_t position(const std::vector<VarId>& scope, VarId v) {
  auto it = std::find(scope.begin(), scope.end(), v);
  return it == scope.end() ? scope.size() : static_cast<std::size_t>(it - scope.begin());
}

}  // namespace

Factor::Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size()) throw BayesError("factor scope and cardinalities differ in length");
  if (values_.size() != product(cards_)) throw BayesError("factor table size does not match its scope");
  for (double v : values_)
    if (v < 0.0) throw BayesError("factor values must be nonnegative");
}

Factor Factor::from_cpt(const BayesNet& net, VarId child) {
  std::vector<VarId> scope = net.parents(child);
  scope.push_back(child);
  std::vector<std::size_t> cards;
  for (VarId v : scope) cards.push_back(net.cardinality(v));
  return Factor(std::move(scope), std::move(cards), net.table(child));
}

bool Factor::mentions(VarId v) const { return position(scope_, v) < scope_.size(); }

Factor Factor::restrict(VarId v, std::size_t value) const {
  const std::size_t pos = position(scope_, v);
  if (pos == scope_.size()) return *this;
  const std::size_t card = cards_[pos];
  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < cards_.size(); ++i) inner *= cards_[i];
  const std::size_t outer = values_.size() / (card * inner);

  Factor out;
  out.scope_ = scope_;
  out.cards_ = cards_;
  out.scope_.erase(out.scope_.begin() + static_cast<std::ptrdiff_t>(pos));
  out.cards_.erase(out.cards_.begin() + static_cast<std::ptrdiff_t>(pos));
  out.values_.resize(outer * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    auto src = values_.begin() + static_cast<std::ptrdiff_t>((o * card + value) * inner);
    std::copy(src, src + static_cast<std::ptrdiff_t>(inner), out.values_.begin() + static_cast<std::ptrdiff_t>(o * inner));
  }
  return out;
}

// For the summed variable at position j, the table splits into `outer`
// blocks of `card` contiguous slabs of length `inner`; the slabs of each
// block are added together.
Factor Factor::sum_out(VarId v) const {
  const std::size_t pos = position(scope_, v);
  if (pos == scope_.size()) throw UnknownVariable("#" + std::to_string(v));
  const auto& k = kernels::active();
  const std::size_t card = cards_[pos];
  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < cards_.size(); ++i) inner *= cards_[i];
  const std::size_t outer = values_.size() / (card * inner);

  Factor out;
  out.scope_ = scope_;
  out.cards_ = cards_;
  out.scope_.erase(out.scope_.begin() + static_cast<std::ptrdiff_t>(pos));
  out.cards_.erase(out.cards_.begin() + static_cast<std::ptrdiff_t>(pos));
  out.values_.assign(outer * inner, 0.0);
  std::span<const double> src(values_);
  std::span<double> dst(out.values_);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t x = 0; x < card; ++x)
      k.accumulate(dst.subspan(o * inner, inner), src.subspan((o * card + x) * inner, inner));
  return out;
}

// Result scope is a's scope followed by b's variables not in a. Both operands
// are laid out over that scope, then multiplied elementwise.
Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  out.scope_ = a.scope_;
  out.cards_ = a.cards_;
  for (std::size_t i = 0; i < b.scope_.size(); ++i) {
    if (!a.mentions(b.scope_[i])) {
      out.scope_.push_back(b.scope_[i]);
      out.cards_.push_back(b.cards_[i]);
    }
  }
  const std::size_t total = product(out.cards_);
  const std::size_t extra = total / a.values_.size();

  // a's scope is a prefix of the result scope: each entry repeats `extra` times.
  out.values_.resize(total);
  for (std::size_t i = 0; i < a.values_.size(); ++i)
    std::fill_n(out.values_.begin() + static_cast<std::ptrdiff_t>(i * extra), extra, a.values_[i]);

  // b is gathered through per-result-axis strides into its own table.
  std::vector<std::size_t> b_stride(out.scope_.size(), 0);
  {
    std::size_t s = 1;
    for (std::size_t i = b.scope_.size(); i-- > 0;) {
      b_stride[position(out.scope_, b.scope_[i])] = s;
      s *= b.cards_[i];
    }
  }
  std::vector<double> gathered(total);
  std::vector<std::size_t> digit(out.scope_.size(), 0);
  std::size_t b_index = 0;
  for (std::size_t i = 0; i < total; ++i) {
    gathered[i] = b.values_[b_index];
    for (std::size_t d = out.scope_.size(); d-- > 0;) {
      if (++digit[d] < out.cards_[d]) {
        b_index += b_stride[d];
        break;
      }
      b_index -= b_stride[d] * (out.cards_[d] - 1);
      digit[d] = 0;
    }
  }
  kernels::active().multiply(out.values_, gathered);
  return out;
}

std::vector<Factor> eliminate_variable(std::vector<Factor> factors, VarId var) {
  std::vector<Factor> kept;
  std::optional<Factor> joined;
  for (auto& f : factors) {
    if (f.mentions(var)) {
      joined = joined ? multiply(*joined, f) : std::move(f);
    } else {
      kept.push_back(std::move(f));
    }
  }
  if (!joined) throw UnknownVariable("#" + std::to_string(var));
  kept.push_back(joined->sum_out(var));
  return kept;
}

namespace {

std::vector<Factor> evidence_factors(const BayesNet& net, const Evidence& evidence) {
  std::vector<Factor> factors;
  for (VarId v = 0; v < net.size(); ++v) {
    Factor f = Factor::from_cpt(net, v);
    for (const auto& [ev, value] : evidence) f = f.restrict(ev, value);
    factors.push_back(std::move(f));
  }
  return factors;
}

std::size_t eliminated_scope_size(const std::vector<Factor>& factors, VarId var) {
  std::vector<VarId> scope;
  for (const auto& f : factors) {
    if (!f.mentions(var)) continue;
    for (VarId v : f.scope())
      if (v != var && std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
  }
  return scope.size();
}

}  // namespace

std::vector<VarId> default_elimination_order(const BayesNet& net, VarId query, const Evidence& evidence) {
  validate_query(net, query, evidence);
  auto factors = evidence_factors(net, evidence);
  std::vector<VarId> remaining;
  for (VarId v = 0; v < net.size(); ++v)
    if (v != query && !evidence.count(v)) remaining.push_back(v);

  std::vector<VarId> order;
  while (!remaining.empty()) {
    auto best = remaining.begin();
    std::size_t best_size = eliminated_scope_size(factors, *best);
    for (auto it = std::next(remaining.begin()); it != remaining.end(); ++it) {
      const std::size_t s = eliminated_scope_size(factors, *it);
      if (s < best_size || (s == best_size && net.variable(*it).name < net.variable(*best).name)) {
        best = it;
        best_size = s;
      }
    }
    order.push_back(*best);
    factors = eliminate_variable(std::move(factors), *best);
    remaining.erase(best);
  }
  return order;
}

Distribution infer_variable_elimination(const BayesNet& net, VarId query, const Evidence& evidence,
                                        const std::optional<std::vector<VarId>>& order) {
  validate_query(net, query, evidence);
  std::vector<VarId> plan;
  if (order) {
    std::vector<VarId> expected;
    for (VarId v = 0; v < net.size(); ++v)
      if (v != query && !evidence.count(v)) expected.push_back(v);
    std::vector<VarId> given = *order;
    std::sort(given.begin(), given.end());
    if (given != expected)
      throw InvalidOrder("elimination order must list each non-query, non-evidence variable exactly once");
    plan = *order;
  } else {
    plan = default_elimination_order(net, query, evidence);
  }

  auto factors = evidence_factors(net, evidence);
  for (VarId v : plan) factors = eliminate_variable(std::move(factors), v);

  Factor result;
  for (const auto& f : factors) result = multiply(result, f);
  // Every other variable is eliminated or observed, leaving scope {query}.
  Distribution dist = result.values();
  const auto& k = kernels::active();
  const double total = k.sum(dist);
  if (!(total > 0.0)) throw ZeroEvidence();
  k.scale(dist, 1.0 / total);
  return dist;
}

}  // namespace cachelab::bayes
