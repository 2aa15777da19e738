#pragma once

#include <random>
#include <string>
#include <vector>

#include "cachelab/bayes.hpp"

namespace testnet {

// Random DAG over n binary variables X0..X{n-1}: an edge i -> j (i < j) with
// probability 0.5, at most 3 parents each, CPT entries drawn from (0.05, 0.95).
inline cachelab::bayes::BayesNet random_binary_net(std::mt19937_64& rng, std::size_t n) {
  using namespace cachelab::bayes;
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back({"X" + std::to_string(i), 2, {}});
  std::vector<CptSpec> cpts;
  for (std::size_t j = 0; j < n; ++j) {
    CptSpec spec;
    spec.child = vars[j].name;
    for (std::size_t i = 0; i < j; ++i)
      if (spec.parents.size() < 3 && (rng() & 1)) spec.parents.push_back(vars[i].name);
    const std::size_t rows = std::size_t{1} << spec.parents.size();
    for (std::size_t r = 0; r < rows; ++r) {
      const double p = u(rng);
      spec.rows.push_back({p, 1.0 - p});
    }
    cpts.push_back(std::move(spec));
  }
  return BayesNet(std::move(vars), cpts);
}

// Sprinkler network in code form; values T (index 0) and F.
inline cachelab::bayes::BayesNet sprinkler() {
  using namespace cachelab::bayes;
  std::vector<Variable> vars{{"Rain", 2, {"T", "F"}}, {"Sprinkler", 2, {"T", "F"}}, {"WetGrass", 2, {"T", "F"}}};
  std::vector<CptSpec> cpts{
      {"Rain", {}, {{0.2, 0.8}}},
      {"Sprinkler", {"Rain"}, {{0.01, 0.99}, {0.4, 0.6}}},
      {"WetGrass", {"Sprinkler", "Rain"}, {{0.99, 0.01}, {0.9, 0.1}, {0.8, 0.2}, {0.0, 1.0}}}};
  return BayesNet(std::move(vars), cpts);
}

// A -> C, B -> D, C -> E, D -> E with arbitrary strictly positive CPTs.
inline cachelab::bayes::BayesNet diamond() {
  using namespace cachelab::bayes;
  std::vector<Variable> vars{{"A", 2, {}}, {"B", 2, {}}, {"C", 2, {}}, {"D", 2, {}}, {"E", 2, {}}};
  std::vector<CptSpec> cpts{{"A", {}, {{0.3, 0.7}}},
                            {"B", {}, {{0.6, 0.4}}},
                            {"C", {"A"}, {{0.25, 0.75}, {0.8, 0.2}}},
                            {"D", {"B"}, {{0.1, 0.9}, {0.55, 0.45}}},
                            {"E", {"C", "D"}, {{0.9, 0.1}, {0.35, 0.65}, {0.6, 0.4}, {0.05, 0.95}}}};
  return BayesNet(std::move(vars), cpts);
}

}  // namespace testnet
