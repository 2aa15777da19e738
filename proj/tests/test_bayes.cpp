#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cachelab/bayes.hpp"
#include "oracle.hpp"
#include "random_net.hpp"

using namespace cachelab::bayes;

namespace {

// P(Rain=T, WetGrass=T) and P(Rain=F, WetGrass=T) summed by hand over Sprinkler.
constexpr double kRainWet = 0.2 * (0.01 * 0.99 + 0.99 * 0.8);
constexpr double kDryWet = 0.8 * (0.4 * 0.9 + 0.6 * 0.0);

void expect_near(const Distribution& a, const Distribution& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << i;
}

}  // namespace

TEST(Sprinkler, JointFactorizes) {
  auto net = testnet::sprinkler();
  EXPECT_NEAR(joint_probability(net, {{"Rain", "T"}, {"Sprinkler", "T"}, {"WetGrass", "T"}}), 0.2 * 0.01 * 0.99,
              1e-15);
  EXPECT_THROW(joint_probability(net, {{"Rain", "T"}}), IncompleteAssignment);
}

TEST(Sprinkler, PriorAndPosterior) {
  auto net = testnet::sprinkler();
  const VarId rain = net.index_of("Rain");
  const VarId wet = net.index_of("WetGrass");
  EXPECT_EQ(infer_enumeration(net, rain, {})[0], 0.2);
  EXPECT_NEAR(infer_variable_elimination(net, rain, {})[0], 0.2, 1e-15);
  const double expect = kRainWet / (kRainWet + kDryWet);
  EXPECT_NEAR(infer_enumeration(net, rain, {{wet, 0}})[0], expect, 1e-12);
  EXPECT_NEAR(infer_variable_elimination(net, rain, {{wet, 0}})[0], expect, 1e-12);
}

TEST(Sprinkler, JsonMatchesCodeForm) {
  auto a = parse_net_json(oracle::kSprinklerJson);
  auto b = testnet::sprinkler();
  for (VarId v = 0; v < a.size(); ++v) EXPECT_EQ(a.table(v), b.table(v));
  auto c = parse_net_json(to_json(a));
  for (VarId v = 0; v < a.size(); ++v) EXPECT_EQ(a.table(v), c.table(v));
  EXPECT_EQ(c.variable(0).values, (std::vector<std::string>{"T", "F"}));
}

TEST(Query, Preconditions) {
  auto net = testnet::sprinkler();
  const VarId rain = net.index_of("Rain");
  EXPECT_THROW(infer_enumeration(net, rain, {{rain, 0}}), InvalidQuery);
  EXPECT_THROW(infer_variable_elimination(net, rain, {{rain, 0}}), InvalidQuery);
  EXPECT_THROW(net.index_of("Snow"), UnknownVariable);
  EXPECT_THROW(net.value_index(rain, "maybe"), BayesError);
}

TEST(Query, DeterministicEntries) {
  // WetGrass=T is impossible when neither Sprinkler nor Rain is on.
  auto net = testnet::sprinkler();
  const VarId rain = net.index_of("Rain");
  const VarId sprinkler = net.index_of("Sprinkler");
  const VarId wet = net.index_of("WetGrass");
  EXPECT_EQ(infer_enumeration(net, wet, {{rain, 1}, {sprinkler, 1}})[0], 0.0);
  EXPECT_NEAR(infer_enumeration(net, rain, {{sprinkler, 1}, {wet, 0}})[0], 1.0, 1e-15);
}

TEST(Query, ZeroEvidenceThrows) {
  std::vector<Variable> vars{{"A", 2, {}}, {"B", 2, {}}};
  std::vector<CptSpec> cpts{{"A", {}, {{1.0, 0.0}}}, {"B", {"A"}, {{1.0, 0.0}, {0.5, 0.5}}}};
  BayesNet net(vars, cpts);
  EXPECT_THROW(infer_enumeration(net, 0, {{1, 1}}), ZeroEvidence);
  EXPECT_THROW(infer_variable_elimination(net, 0, {{1, 1}}), ZeroEvidence);
}

TEST(Net, RejectsCyclesAndBadRows) {
  std::vector<Variable> vars{{"A", 2, {}}, {"B", 2, {}}};
  EXPECT_THROW(BayesNet(vars, {{"A", {"B"}, {{0.5, 0.5}, {0.5, 0.5}}}, {"B", {"A"}, {{0.5, 0.5}, {0.5, 0.5}}}}),
               InvalidNet);
  EXPECT_THROW(BayesNet(vars, {{"A", {}, {{0.5, 0.6}}}, {"B", {}, {{0.5, 0.5}}}}), InvalidNet);
  EXPECT_THROW(BayesNet(vars, {{"A", {}, {{0.5, 0.5}}}, {"B", {"C"}, {{0.5, 0.5}, {0.5, 0.5}}}}), InvalidNet);
  EXPECT_THROW(BayesNet(vars, {{"A", {}, {{0.5, 0.5}}}, {"B", {"A"}, {{0.5, 0.5}}}}), InvalidNet);
  EXPECT_THROW(BayesNet(vars, {{"A", {}, {{-0.5, 1.5}}}, {"B", {}, {{0.5, 0.5}}}}), InvalidNet);
}

TEST(Net, JsonDiagnosticsNameTheField) {
  const char* bad = R"({"variables":[{"name":"A","cardinality":2}],
                        "cpts":[{"child":"A","parents":[],"rows":[[0.5,0.4]]}]})";
  try {
    parse_net_json(bad);
    FAIL();
  } catch (const InvalidNet& e) {
    EXPECT_NE(std::string(e.what()).find("cpts[0]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_net_json("{"), InvalidNet);
  EXPECT_THROW(parse_net_json("[]"), InvalidNet);
}

TEST(Net, TopologicalOrderPutsParentsFirst) {
  auto net = testnet::diamond();
  const auto& order = net.topological_order();
  std::vector<std::size_t> pos(net.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (VarId v = 0; v < net.size(); ++v)
    for (VarId p : net.parents(v)) EXPECT_LT(pos[p], pos[v]);
}

TEST(Factor, MultiplyAndSumOutByHand) {
  // f(A,B) * g(B,C), then sum out B.
  Factor f({0, 1}, {2, 2}, {0.1, 0.2, 0.3, 0.4});
  Factor g({1, 2}, {2, 2}, {1.0, 2.0, 3.0, 4.0});
  Factor h = multiply(f, g);
  ASSERT_EQ(h.scope(), (std::vector<VarId>{0, 1, 2}));
  // h(a,b,c) = f(a,b) g(b,c)
  const std::vector<double> want{0.1 * 1, 0.1 * 2, 0.2 * 3, 0.2 * 4, 0.3 * 1, 0.3 * 2, 0.4 * 3, 0.4 * 4};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(h.values()[i], want[i], 1e-15);
  Factor s = h.sum_out(1);
  ASSERT_EQ(s.scope(), (std::vector<VarId>{0, 2}));
  EXPECT_NEAR(s.values()[0], 0.1 * 1 + 0.2 * 3, 1e-15);
  EXPECT_NEAR(s.values()[3], 0.3 * 2 + 0.4 * 4, 1e-15);
  Factor r = h.restrict(2, 1);
  ASSERT_EQ(r.scope(), (std::vector<VarId>{0, 1}));
  EXPECT_NEAR(r.values()[1], 0.2 * 4, 1e-15);
}

TEST(Factor, EliminateVariableKeepsOthers) {
  auto net = testnet::diamond();
  std::vector<Factor> fs;
  for (VarId v = 0; v < net.size(); ++v) fs.push_back(Factor::from_cpt(net, v));
  auto out = eliminate_variable(fs, net.index_of("A"));
  EXPECT_EQ(out.size(), fs.size() - 1);
  for (const auto& f : out) EXPECT_FALSE(f.mentions(net.index_of("A")));
}

TEST(Blanket, Diamond) {
  auto net = testnet::diamond();
  EXPECT_EQ(markov_blanket(net, "C"), (std::set<std::string>{"A", "D", "E"}));
  EXPECT_EQ(markov_blanket(net, "A"), (std::set<std::string>{"C"}));
  EXPECT_EQ(markov_blanket(net, "E"), (std::set<std::string>{"C", "D"}));
}

// Property: given its blanket, a variable is independent of everything else.
TEST(BlanketProperty, Screening) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto net = trial == 0 ? testnet::diamond() : testnet::random_binary_net(rng, 3 + trial % 4);
    for (VarId x = 0; x < net.size(); ++x) {
      const auto blanket = markov_blanket(net, x);
      for (std::size_t mask = 0; mask < (std::size_t{1} << net.size()); ++mask) {
        Evidence on_blanket, on_all;
        for (VarId v = 0; v < net.size(); ++v) {
          if (v == x) continue;
          on_all[v] = (mask >> v) & 1;
          if (blanket.count(v)) on_blanket[v] = on_all[v];
        }
        expect_near(infer_enumeration(net, x, on_blanket), infer_enumeration(net, x, on_all), 1e-9);
      }
    }
  }
}

// Property: enumeration and elimination agree under every order tried.
TEST(InferenceProperty, EnumerationMatchesElimination) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = testnet::random_binary_net(rng, 3 + trial % 4);
    const VarId q = rng() % net.size();
    Evidence ev;
    for (VarId v = 0; v < net.size(); ++v)
      if (v != q && rng() % 3 == 0) ev[v] = rng() % 2;
    const auto ref = infer_enumeration(net, q, ev);
    expect_near(infer_variable_elimination(net, q, ev), ref, 1e-9);
    auto order = default_elimination_order(net, q, ev);
    for (int k = 0; k < 3; ++k) {
      std::shuffle(order.begin(), order.end(), rng);
      expect_near(infer_variable_elimination(net, q, ev, order), ref, 1e-9);
    }
  }
}

TEST(Elimination, RejectsBadOrder) {
  auto net = testnet::diamond();
  EXPECT_THROW(infer_variable_elimination(net, 0, {}, std::vector<VarId>{1, 2}), InvalidOrder);
  EXPECT_THROW(infer_variable_elimination(net, 0, {}, std::vector<VarId>{0, 1, 2, 3, 4}), InvalidOrder);
}

TEST(Elimination, DefaultOrderSkipsQueryAndEvidence) {
  auto net = testnet::diamond();
  auto order = default_elimination_order(net, 0, {{4, 1}});
  EXPECT_EQ(order.size(), 3u);
  for (VarId v : order) EXPECT_TRUE(v != 0 && v != 4);
}

TEST(Learn, CountsWithSmoothing) {
  std::vector<NodeStructure> s{{{"A", 2, {}}, {}}, {{"B", 2, {}}, {"A"}}};
  // A=0 three times (B=0,0,1), A=1 once (B=1).
  std::vector<Assignment> data{{0, 0}, {0, 0}, {0, 1}, {1, 1}};
  auto ml = learn_cpts(s, data, 0.0);
  EXPECT_NEAR(ml.table(0)[0], 0.75, 1e-15);
  EXPECT_NEAR(ml.table(1)[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(ml.table(1)[3], 1.0, 1e-15);
  auto lap = learn_cpts(s, data, 1.0);
  EXPECT_NEAR(lap.table(0)[0], 4.0 / 6.0, 1e-15);
  EXPECT_NEAR(lap.table(1)[0], 3.0 / 5.0, 1e-15);
  EXPECT_NEAR(lap.table(1)[2], 1.0 / 3.0, 1e-15);
}

TEST(Learn, UnseenParentRowAndEmptyData) {
  std::vector<NodeStructure> s{{{"A", 2, {}}, {}}, {{"B", 2, {}}, {"A"}}};
  auto net = learn_cpts(s, {{0, 1}}, 0.0);
  EXPECT_EQ(net.table(1)[2], 0.5);
  EXPECT_EQ(net.table(1)[3], 0.5);
  EXPECT_THROW(learn_cpts(s, {}, 0.0), EmptyData);
  auto uniform = learn_cpts(s, {}, 1.0);
  EXPECT_EQ(uniform.table(0)[0], 0.5);
}

TEST(Learn, RecoversSampledNet) {
  auto truth = testnet::diamond();
  auto data = sample(truth, 3, 200000);
  std::vector<NodeStructure> s;
  for (VarId v = 0; v < truth.size(); ++v) {
    NodeStructure n{truth.variable(v), {}};
    for (VarId p : truth.parents(v)) n.parents.push_back(truth.variable(p).name);
    s.push_back(n);
  }
  auto learned = learn_cpts(s, data, 1.0);
  for (VarId v = 0; v < truth.size(); ++v)
    for (std::size_t i = 0; i < truth.table(v).size(); ++i) EXPECT_NEAR(learned.table(v)[i], truth.table(v)[i], 0.02);
  EXPECT_EQ(sample(truth, 3, 50), sample(truth, 3, 50));
}
