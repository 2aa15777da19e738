#include "cachelab/bayes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace cachelab::bayes {

namespace {

constexpr double kRowTolerance = 1e-9;

std::string field(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

}  // namespace

BayesNet::BayesNet(std::vector<Variable> variables, const std::vector<CptSpec>& cpts)
    : vars_(std::move(variables)) {
  const std::size_t n = vars_.size();
  std::unordered_map<std::string, VarId> by_name;
  for (VarId v = 0; v < n; ++v) {
    auto& var = vars_[v];
    const auto where = field("variables", v);
    if (var.name.empty()) throw InvalidNet(where + ".name: empty");
    if (!by_name.emplace(var.name, v).second) throw InvalidNet(where + ".name: duplicate '" + var.name + "'");
    if (var.cardinality < 2) throw InvalidNet(where + ".cardinality: must be at least 2");
    if (var.values.empty()) {
      for (std::size_t i = 0; i < var.cardinality; ++i) var.values.push_back(std::to_string(i));
    } else if (var.values.size() != var.cardinality) {
      throw InvalidNet(where + ".values: expected " + std::to_string(var.cardinality) + " labels");
    }
    std::unordered_set<std::string> labels(var.values.begin(), var.values.end());
    if (labels.size() != var.values.size()) throw InvalidNet(where + ".values: duplicate label");
  }

  parents_.assign(n, {});
  children_.assign(n, {});
  tables_.assign(n, {});
  std::vector<bool> has_cpt(n, false);

  for (std::size_t c = 0; c < cpts.size(); ++c) {
    const auto& spec = cpts[c];
    const auto where = field("cpts", c);
    auto child_it = by_name.find(spec.child);
    if (child_it == by_name.end()) throw InvalidNet(where + ".child: unknown variable '" + spec.child + "'");
    const VarId child = child_it->second;
    if (has_cpt[child]) throw InvalidNet(where + ".child: second CPT for '" + spec.child + "'");
    has_cpt[child] = true;

    std::size_t rows = 1;
    for (std::size_t p = 0; p < spec.parents.size(); ++p) {
      auto it = by_name.find(spec.parents[p]);
      if (it == by_name.end())
        throw InvalidNet(field(where + ".parents", p) + ": unknown variable '" + spec.parents[p] + "'");
      if (it->second == child) throw InvalidNet(field(where + ".parents", p) + ": variable is its own parent");
      if (std::find(parents_[child].begin(), parents_[child].end(), it->second) != parents_[child].end())
        throw InvalidNet(field(where + ".parents", p) + ": duplicate parent");
      parents_[child].push_back(it->second);
      children_[it->second].push_back(child);
      rows *= vars_[it->second].cardinality;
    }
    if (spec.rows.size() != rows)
      throw InvalidNet(where + ".rows: expected " + std::to_string(rows) + " rows, got " +
                       std::to_string(spec.rows.size()));
    const std::size_t card = vars_[child].cardinality;
    auto& table = tables_[child];
    table.reserve(rows * card);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& row = spec.rows[r];
      const auto row_where = field(where + ".rows", r);
      if (row.size() != card)
        throw InvalidNet(row_where + ": expected " + std::to_string(card) + " entries");
      double total = 0.0;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0) throw InvalidNet(row_where + ": entries must be finite and nonnegative");
        total += p;
      }
      if (std::abs(total - 1.0) > kRowTolerance)
        throw InvalidNet(row_where + ": row sums to " + std::to_string(total) + ", not 1");
      table.insert(table.end(), row.begin(), row.end());
    }
  }
  for (VarId v = 0; v < n; ++v)
    if (!has_cpt[v]) throw InvalidNet("cpts: no CPT for '" + vars_[v].name + "'");

  // Kahn's algorithm, smallest id first, so the order is deterministic.
  std::vector<std::size_t> indegree(n);
  for (VarId v = 0; v < n; ++v) indegree[v] = parents_[v].size();
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (VarId v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (VarId c : children_[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (topo_.size() != n) throw InvalidNet("cpts: parent links form a cycle");
}

VarId BayesNet::index_of(std::string_view name) const {
  for (VarId v = 0; v < vars_.size(); ++v)
    if (vars_[v].name == name) return v;
  throw UnknownVariable(std::string(name));
}

std::size_t BayesNet::value_index(VarId v, std::string_view label) const {
  const auto& values = vars_.at(v).values;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == label) return i;
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), idx);
  if (ec == std::errc{} && ptr == label.data() + label.size() && idx < values.size()) return idx;
  throw BayesError("variable '" + vars_[v].name + "' has no value '" + std::string(label) + "'");
}

double BayesNet::probability(VarId child, std::size_t value, const Assignment& full) const {
  std::size_t row = 0;
  for (VarId p : parents_[child]) row = row * vars_[p].cardinality + full[p];
  return tables_[child][row * vars_[child].cardinality + value];
}

std::vector<CptSpec> BayesNet::cpt_specs() const {
  std::vector<CptSpec> out;
  for (VarId v = 0; v < vars_.size(); ++v) {
    CptSpec spec;
    spec.child = vars_[v].name;
    for (VarId p : parents_[v]) spec.parents.push_back(vars_[p].name);
    const std::size_t card = vars_[v].cardinality;
    for (std::size_t i = 0; i < tables_[v].size(); i += card)
      spec.rows.emplace_back(tables_[v].begin() + i, tables_[v].begin() + i + card);
    out.push_back(std::move(spec));
  }
  return out;
}

double joint_probability(const BayesNet& net, const Assignment& full) {
  if (full.size() != net.size())
    throw IncompleteAssignment("assignment covers " + std::to_string(full.size()) + " of " +
                               std::to_string(net.size()) + " variables");
  double p = 1.0;
  for (VarId v = 0; v < net.size(); ++v) {
    if (full[v] >= net.cardinality(v))
      throw BayesError("value out of range for '" + net.variable(v).name + "'");
    p *= net.probability(v, full[v], full);
  }
  return p;
}

double joint_probability(const BayesNet& net, const std::map<std::string, std::string>& full) {
  Assignment a(net.size(), 0);
  std::vector<bool> set(net.size(), false);
  for (const auto& [name, label] : full) {
    VarId v = net.index_of(name);
    a[v] = net.value_index(v, label);
    set[v] = true;
  }
  for (VarId v = 0; v < net.size(); ++v)
    if (!set[v]) throw IncompleteAssignment("no value for '" + net.variable(v).name + "'");
  return joint_probability(net, a);
}

void validate_query(const BayesNet& net, VarId query, const Evidence& evidence) {
  if (query >= net.size()) throw UnknownVariable("#" + std::to_string(query));
  if (evidence.count(query)) throw InvalidQuery("query variable '" + net.variable(query).name + "' is observed");
  for (const auto& [v, value] : evidence) {
    if (v >= net.size()) throw UnknownVariable("#" + std::to_string(v));
    if (value >= net.cardinality(v)) throw BayesError("evidence value out of range for '" + net.variable(v).name + "'");
  }
}

// Sums the full joint over every completion consistent with the evidence.
Distribution infer_enumeration(const BayesNet& net, VarId query, const Evidence& evidence) {
  validate_query(net, query, evidence);
  Distribution dist(net.cardinality(query), 0.0);
  std::vector<VarId> free;
  Assignment a(net.size(), 0);
  for (VarId v = 0; v < net.size(); ++v) {
    if (auto it = evidence.find(v); it != evidence.end()) {
      a[v] = it->second;
    } else {
      free.push_back(v);
    }
  }
  while (true) {
    dist[a[query]] += joint_probability(net, a);
    // Odometer over the free variables, last one fastest.
    std::size_t i = free.size();
    while (i > 0) {
      VarId v = free[i - 1];
      if (++a[v] < net.cardinality(v)) break;
      a[v] = 0;
      --i;
    }
    if (i == 0) break;
  }
  double total = 0.0;
  for (double p : dist) total += p;
  if (total <= 0.0) throw ZeroEvidence();
  for (double& p : dist) p /= total;
  return dist;
}

std::set<VarId> markov_blanket(const BayesNet& net, VarId var) {
  if (var >= net.size()) throw UnknownVariable("#" + std::to_string(var));
  std::set<VarId> out(net.parents(var).begin(), net.parents(var).end());
  for (VarId c : net.children(var)) {
    out.insert(c);
    out.insert(net.parents(c).begin(), net.parents(c).end());
  }
  out.erase(var);
  return out;
}

std::set<std::string> markov_blanket(const BayesNet& net, std::string_view name) {
  std::set<std::string> out;
  for (VarId v : markov_blanket(net, net.index_of(name))) out.insert(net.variable(v).name);
  return out;
}

BayesNet learn_cpts(const std::vector<NodeStructure>& structure, const std::vector<Assignment>& data,
                    double alpha) {
  if (alpha < 0.0 || !std::isfinite(alpha)) throw BayesError("pseudocount must be finite and nonnegative");
  if (data.empty() && alpha == 0.0) throw EmptyData();

  std::vector<Variable> vars;
  for (const auto& node : structure) vars.push_back(node.variable);
  std::unordered_map<std::string, VarId> by_name;
  for (VarId v = 0; v < vars.size(); ++v) by_name[vars[v].name] = v;

  for (std::size_t r = 0; r < data.size(); ++r) {
    if (data[r].size() != vars.size()) throw IncompleteAssignment(field("data", r) + ": wrong width");
    for (VarId v = 0; v < vars.size(); ++v)
      if (data[r][v] >= vars[v].cardinality) throw BayesError(field("data", r) + ": value out of range");
  }

  std::vector<CptSpec> cpts;
  for (VarId v = 0; v < vars.size(); ++v) {
    const auto& node = structure[v];
    std::vector<VarId> parents;
    std::size_t rows = 1;
    for (const auto& pname : node.parents) {
      auto it = by_name.find(pname);
      if (it == by_name.end()) throw UnknownVariable(pname);
      parents.push_back(it->second);
      rows *= vars[it->second].cardinality;
    }
    const std::size_t card = vars[v].cardinality;
    std::vector<double> counts(rows * card, 0.0);
    for (const auto& row : data) {
      std::size_t r = 0;
      for (VarId p : parents) r = r * vars[p].cardinality + row[p];
      counts[r * card + row[v]] += 1.0;
    }
    CptSpec spec{vars[v].name, node.parents, {}};
    for (std::size_t r = 0; r < rows; ++r) {
      double support = 0.0;
      for (std::size_t k = 0; k < card; ++k) support += counts[r * card + k];
      const double denom = support + alpha * static_cast<double>(card);
      std::vector<double> dist(card);
      for (std::size_t k = 0; k < card; ++k)
        dist[k] = denom > 0.0 ? (counts[r * card + k] + alpha) / denom : 1.0 / static_cast<double>(card);
      spec.rows.push_back(std::move(dist));
    }
    cpts.push_back(std::move(spec));
  }
  return BayesNet(std::move(vars), cpts);
}

std::vector<Assignment> sample(const BayesNet& net, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Assignment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Assignment a(net.size(), 0);
    for (VarId v : net.topological_order()) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      double acc = 0.0;
      std::size_t value = net.cardinality(v) - 1;
      for (std::size_t k = 0; k < net.cardinality(v); ++k) {
        acc += net.probability(v, k, a);
        if (u < acc) {
          value = k;
          break;
        }
      }
      a[v] = value;
    }
    out.push_back(std::move(a));
  }
  return out;
}

Evidence parse_evidence(const BayesNet& net, const std::vector<std::pair<std::string, std::string>>& items) {
  Evidence ev;
  for (const auto& [name, label] : items) {
    VarId v = net.index_of(name);
    ev[v] = net.value_index(v, label);
  }
  return ev;
}

BayesNet parse_net_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidNet(std::string("net file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidNet("net file: top level must be an object");
  if (!doc.contains("variables") || !doc["variables"].is_array()) throw InvalidNet("variables: missing array");
  if (!doc.contains("cpts") || !doc["cpts"].is_array()) throw InvalidNet("cpts: missing array");

  std::vector<Variable> vars;
  const auto& jv = doc["variables"];
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const auto where = field("variables", i);
    const auto& e = jv[i];
    if (!e.is_object()) throw InvalidNet(where + ": must be an object");
    if (!e.contains("name") || !e["name"].is_string()) throw InvalidNet(where + ".name: missing string");
    if (!e.contains("cardinality") || !e["cardinality"].is_number_unsigned())
      throw InvalidNet(where + ".cardinality: missing nonnegative integer");
    Variable var{e["name"].get<std::string>(), e["cardinality"].get<std::size_t>(), {}};
    if (e.contains("values")) {
      if (!e["values"].is_array()) throw InvalidNet(where + ".values: must be an array");
      for (std::size_t k = 0; k < e["values"].size(); ++k) {
        if (!e["values"][k].is_string()) throw InvalidNet(field(where + ".values", k) + ": must be a string");
        var.values.push_back(e["values"][k].get<std::string>());
      }
    }
    vars.push_back(std::move(var));
  }

  std::vector<CptSpec> cpts;
  const auto& jc = doc["cpts"];
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const auto where = field("cpts", i);
    const auto& e = jc[i];
    if (!e.is_object()) throw InvalidNet(where + ": must be an object");
    if (!e.contains("child") || !e["child"].is_string()) throw InvalidNet(where + ".child: missing string");
    CptSpec spec;
    spec.child = e["child"].get<std::string>();
    if (e.contains("parents")) {
      if (!e["parents"].is_array()) throw InvalidNet(where + ".parents: must be an array");
      for (std::size_t k = 0; k < e["parents"].size(); ++k) {
        if (!e["parents"][k].is_string()) throw InvalidNet(field(where + ".parents", k) + ": must be a string");
        spec.parents.push_back(e["parents"][k].get<std::string>());
      }
    }
    if (!e.contains("rows") || !e["rows"].is_array()) throw InvalidNet(where + ".rows: missing array");
    for (std::size_t r = 0; r < e["rows"].size(); ++r) {
      const auto& row = e["rows"][r];
      const auto row_where = field(where + ".rows", r);
      if (!row.is_array()) throw InvalidNet(row_where + ": must be an array");
      std::vector<double> values;
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!row[k].is_number()) throw InvalidNet(field(row_where, k) + ": must be a number");
        values.push_back(row[k].get<double>());
      }
      spec.rows.push_back(std::move(values));
    }
    cpts.push_back(std::move(spec));
  }
  return BayesNet(std::move(vars), cpts);
}

std::string to_json(const BayesNet& net) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["variables"] = ordered_json::array();
  for (VarId v = 0; v < net.size(); ++v) {
    const auto& var = net.variable(v);
    doc["variables"].push_back({{"name", var.name}, {"cardinality", var.cardinality}, {"values", var.values}});
  }
  doc["cpts"] = ordered_json::array();
  for (const auto& spec : net.cpt_specs())
    doc["cpts"].push_back({{"child", spec.child}, {"parents", spec.parents}, {"rows", spec.rows}});
  return doc.dump(2);
}

}  // namespace cachelab::bayes
