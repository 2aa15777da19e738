#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Discrete Bayesian networks: exact inference by enumeration and by variable
// elimination, Markov blankets, and CPT learning from complete data.
namespace cachelab::bayes {

using VarId = std::size_t;
// One value per variable, indexed by VarId.
using Assignment = std::vector<std::size_t>;
// Observed value per variable.
using Evidence = std::map<VarId, std::size_t>;
using Distribution = std::vector<double>;

class BayesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownVariable : public BayesError {
 public:
  explicit UnknownVariable(const std::string& name) : BayesError("unknown variable '" + name + "'") {}
};

class IncompleteAssignment : public BayesError {
 public:
  using BayesError::BayesError;
};

class ZeroEvidence : public BayesError {
 public:
  ZeroEvidence() : BayesError("evidence has zero probability") {}
};

class InvalidOrder : public BayesError {
 public:
  using BayesError::BayesError;
};

class InvalidQuery : public BayesError {
 public:
  using BayesError::BayesError;
};

class EmptyData : public BayesError {
 public:
  EmptyData() : BayesError("no training rows and zero pseudocount") {}
};

// Net definition that violates a structural or numeric invariant. The
// message names the offending field, e.g. "cpts[1].rows[2]".
class InvalidNet : public BayesError {
 public:
  using BayesError::BayesError;
};

struct Variable {
  std::string name;
  std::size_t cardinality = 2;
  // Value labels; defaults to "0", "1", ... when empty.
  std::vector<std::string> values;
};

// CPT as written in a net definition: rows are distributions over the child,
// one per parent assignment in lexicographic order (first parent slowest).
struct CptSpec {
  std::string child;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;
};

class BayesNet {
 public:
  // Validates names, cardinalities, parent references, acyclicity and rows.
  BayesNet(std::vector<Variable> variables, const std::vector<CptSpec>& cpts);

  std::size_t size() const { return vars_.size(); }
  const Variable& variable(VarId v) const { return vars_.at(v); }
  VarId index_of(std::string_view name) const;
  std::size_t cardinality(VarId v) const { return vars_[v].cardinality; }
  std::size_t value_index(VarId v, std::string_view label) const;

  const std::vector<VarId>& parents(VarId v) const { return parents_[v]; }
  const std::vector<VarId>& children(VarId v) const { return children_[v]; }
  // Parents before children.
  const std::vector<VarId>& topological_order() const { return topo_; }

  // Row-major table: row index from the parent values (first parent slowest),
  // then one column per child value.
  const std::vector<double>& table(VarId v) const { return tables_[v]; }
  double probability(VarId child, std::size_t value, const Assignment& full) const;

  std::vector<CptSpec> cpt_specs() const;

 private:
  std::vector<Variable> vars_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<std::vector<double>> tables_;
  std::vector<VarId> topo_;
};

// Nonnegative table over an ordered scope, lexicographic with the first
// scope variable slowest.
class Factor {
 public:
  Factor() : values_{1.0} {}
  Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values);

  static Factor from_cpt(const BayesNet& net, VarId child);

  const std::vector<VarId>& scope() const { return scope_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  bool mentions(VarId v) const;

  Factor restrict(VarId v, std::size_t value) const;
  Factor sum_out(VarId v) const;
  friend Factor multiply(const Factor& a, const Factor& b);

 private:
  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

Factor multiply(const Factor& a, const Factor& b);

double joint_probability(const BayesNet& net, const Assignment& full);
// Name/label form; every variable must be assigned.
double joint_probability(const BayesNet& net, const std::map<std::string, std::string>& full);

// Throws unless `query` and the evidence refer to existing variables and
// values and the query itself is unobserved.
void validate_query(const BayesNet& net, VarId query, const Evidence& evidence);

Distribution infer_enumeration(const BayesNet& net, VarId query, const Evidence& evidence);

// Multiplies every factor mentioning `var`, sums `var` out, and appends the
// result after the untouched factors.
std::vector<Factor> eliminate_variable(std::vector<Factor> factors, VarId var);

// Elimination order used when none is given: repeatedly the variable whose
// elimination yields the smallest factor scope, ties broken by name.
std::vector<VarId> default_elimination_order(const BayesNet& net, VarId query, const Evidence& evidence);

Distribution infer_variable_elimination(const BayesNet& net, VarId query, const Evidence& evidence,
                                        const std::optional<std::vector<VarId>>& order = std::nullopt);

std::set<VarId> markov_blanket(const BayesNet& net, VarId var);
std::set<std::string> markov_blanket(const BayesNet& net, std::string_view name);

struct NodeStructure {
  Variable variable;
  std::vector<std::string> parents;
};

// Counting estimator with additive smoothing alpha. Rows of `data` hold one
// value per node in `structure` order. A parent assignment never observed
// with alpha == 0 gets a uniform row.
BayesNet learn_cpts(const std::vector<NodeStructure>& structure, const std::vector<Assignment>& data,
                    double alpha);

// Ancestral sampling with a fixed seed.
std::vector<Assignment> sample(const BayesNet& net, std::uint64_t seed, std::size_t count);

Evidence parse_evidence(const BayesNet& net, const std::vector<std::pair<std::string, std::string>>& items);

BayesNet parse_net_json(std::string_view text);
std::string to_json(const BayesNet& net);

}  // namespace cachelab::bayes
