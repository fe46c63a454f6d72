#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include "posdec/dtree.hpp"
#include "posdec/errors.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

using namespace posdec;
using tu::R;
using tu::chance;
using tu::klot;
using tu::lot;

namespace {

bool has_rule(const std::vector<ValidationIssue>& issues,
              const std::string& rule) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.rule == rule; });
}

Strategy pick(std::vector<std::pair<std::string, std::string>> choices) {
  Strategy s;
  for (auto& [d, c] : choices) s.choose(d, c);
  return s;
}

}  // namespace

TEST_CASE("node registry basics") {
  DecisionTree t = tu::two_stage_fixture();
  CHECK(t.size() == 18);
  CHECK(t.edge_count() == 17);
  CHECK(t.contains("d1"));
  CHECK_FALSE(t.contains("nope"));
  CHECK(t.is_decision("d0"));
  CHECK(t.is_chance("c3"));
  CHECK(t.is_leaf("l9"));
  CHECK_THROWS_AS(t.at("nope"), DomainError);
  CHECK_THROWS_AS(t.add("d0", DecisionNode{{"c1"}}), DomainError);
  // Insertion order is preserved.
  CHECK(t.ids().front() == "d0");
}

TEST_CASE("well-formed trees validate cleanly") {
  CHECK(validate_tree(tu::two_stage_fixture()).empty());
  CHECK(validate_tree(tu::chn_gap_tree()).empty());
  CHECK(validate_tree(tu::kappa_fixture()).empty());
}

TEST_CASE("validation flags each structural defect") {
  SUBCASE("root must exist and be a decision node") {
    DecisionTree t(TreeMode::Possibilistic, "r");
    CHECK(has_rule(validate_tree(t), "missing-node"));

    DecisionTree u(TreeMode::Possibilistic, "c");
    u.add("c", chance({{"l", "1"}}));
    u.add("l", LeafNode{Utility(R("1"))});
    CHECK(has_rule(validate_tree(u), "root-kind"));
  }

  SUBCASE("children must be registered") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"ghost"}});
    CHECK(has_rule(validate_tree(t), "missing-child"));
  }

  SUBCASE("every node has at most one parent") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"c1", "c2"}});
    t.add("c1", chance({{"l", "1"}}));
    t.add("c2", chance({{"l", "1"}}));
    t.add("l", LeafNode{Utility(R("1"))});
    CHECK(has_rule(validate_tree(t), "multi-parent"));
  }

  SUBCASE("chance degrees must reach 1 somewhere") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"c"}});
    t.add("c", chance({{"l1", "0.5"}, {"l2", "0.9"}}));
    t.add("l1", LeafNode{Utility(R("0"))});
    t.add("l2", LeafNode{Utility(R("1"))});
    CHECK(has_rule(validate_tree(t), "normalization"));
  }

  SUBCASE("kappa trees need a fully plausible edge") {
    DecisionTree t(TreeMode::Kappa, "d");
    t.add("d", DecisionNode{{"c"}});
    t.add("c", tu::kchance({{"l1", 1}, {"l2", 2}}));
    t.add("l1", LeafNode{KappaRank(0)});
    t.add("l2", LeafNode{KappaRank(1)});
    CHECK(has_rule(validate_tree(t), "normalization"));
  }

  SUBCASE("decision children are chance nodes, chance children are not") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"l"}});
    t.add("l", LeafNode{Utility(R("1"))});
    CHECK(has_rule(validate_tree(t), "child-kind"));

    DecisionTree u(TreeMode::Possibilistic, "d");
    u.add("d", DecisionNode{{"c1"}});
    u.add("c1", chance({{"c2", "1"}}));
    u.add("c2", chance({{"l", "1"}}));
    u.add("l", LeafNode{Utility(R("1"))});
    CHECK(has_rule(validate_tree(u), "child-kind"));
  }

  SUBCASE("empty child lists are rejected") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{});
    CHECK(has_rule(validate_tree(t), "empty-children"));

    DecisionTree u(TreeMode::Possibilistic, "d");
    u.add("d", DecisionNode{{"c"}});
    u.add("c", ChanceNode{});
    CHECK(has_rule(validate_tree(u), "empty-children"));
  }

  SUBCASE("edge weights must match the tree mode") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"c"}});
    ChanceNode c;
    c.edges.push_back(ChanceEdge{"l", KappaRank(0)});
    t.add("c", std::move(c));
    t.add("l", LeafNode{Utility(R("1"))});
    CHECK(has_rule(validate_tree(t), "weight-kind"));
  }

  SUBCASE("leaf values must match the tree mode") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"c"}});
    t.add("c", chance({{"l", "1"}}));
    t.add("l", LeafNode{KappaRank(3)});
    CHECK(has_rule(validate_tree(t), "leaf-kind"));
  }

  SUBCASE("scalar and pair leaves cannot be mixed") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"c"}});
    t.add("c", chance({{"l1", "1"}, {"l2", "1"}}));
    t.add("l1", LeafNode{Utility(R("1"))});
    t.add("l2", LeafNode{BinaryUtility(Degree::one(), Degree::zero())});
    CHECK(has_rule(validate_tree(t), "leaf-mixed"));
  }

  SUBCASE("disconnected nodes are reported") {
    DecisionTree t(TreeMode::Possibilistic, "d");
    t.add("d", DecisionNode{{"c"}});
    t.add("c", chance({{"l", "1"}}));
    t.add("l", LeafNode{Utility(R("1"))});
    t.add("orphan", LeafNode{Utility(R("0"))});
    CHECK(has_rule(validate_tree(t), "unreachable"));
  }

  SUBCASE("numeric id suffixes out of stage order only warn") {
    DecisionTree t(TreeMode::Possibilistic, "d5");
    t.add("d5", DecisionNode{{"c1"}});
    t.add("c1", chance({{"d2", "1"}}));
    t.add("d2", DecisionNode{{"c2"}});
    t.add("c2", chance({{"l1", "1"}}));
    t.add("l1", LeafNode{Utility(R("1"))});
    const auto issues = validate_tree(t);
    CHECK(has_rule(issues, "temporal-order"));
    CHECK_FALSE(has_errors(issues));
  }
}

TEST_CASE("strategy validation reports soundness and completeness") {
  const DecisionTree t = tu::two_stage_fixture();

  SUBCASE("a complete assignment along the chosen path is clean") {
    const auto issues =
        validate_strategy(t, pick({{"d0", "c1"}, {"d1", "c3"}}));
    CHECK(issues.empty());
  }

  SUBCASE("assignments to unreachable decisions are harmless") {
    const auto issues = validate_strategy(
        t, pick({{"d0", "c1"}, {"d1", "c3"}, {"d2", "c5"}}));
    CHECK(issues.empty());
  }

  SUBCASE("an unresolved reachable decision is incomplete") {
    CHECK(has_rule(validate_strategy(t, pick({{"d0", "c1"}})),
                   "completeness"));
    CHECK(has_rule(validate_strategy(t, Strategy{}), "completeness"));
  }

  SUBCASE("choices must be declared children") {
    CHECK(has_rule(validate_strategy(t, pick({{"d0", "c3"}})), "soundness"));
  }

  SUBCASE("choices at unknown nodes are rejected") {
    CHECK(has_rule(validate_strategy(t, pick({{"dx", "c1"}})),
                   "unknown-node"));
    CHECK(has_rule(validate_strategy(t, pick({{"l1", "c1"}})),
                   "unknown-node"));
  }
}

TEST_CASE("issue rendering is severity rule node detail") {
  const ValidationIssue issue{IssueSeverity::Error, "normalization", "c2",
                              "max degree is 0.9"};
  CHECK(to_string(issue) == "error normalization c2: max degree is 0.9");
}

TEST_CASE("strategy reduction on a depth-one tree reads off the edges") {
  DecisionTree t(TreeMode::Possibilistic, "d0");
  t.add("d0", DecisionNode{{"c1"}});
  t.add("c1", chance({{"l1", "0.4"}, {"l2", "1"}}));
  t.add("l1", LeafNode{Utility(Rat(4))});
  t.add("l2", LeafNode{Utility(Rat(7))});
  const auto reduced = strategy_lottery(t, pick({{"d0", "c1"}}));
  CHECK(std::get<SimpleLottery>(reduced) == lot({{"0.4", "4"}, {"1", "7"}}));
}

TEST_CASE("strategy reduction composes nested chance stages") {
  // Both branches certain; the merged lottery keeps the best degree
  // per utility across the two children.
  DecisionTree t(TreeMode::Possibilistic, "d0");
  t.add("d0", DecisionNode{{"c0"}});
  t.add("c0", chance({{"d1", "1"}, {"d2", "1"}}));
  t.add("d1", DecisionNode{{"c1"}});
  t.add("d2", DecisionNode{{"c2"}});
  t.add("c1", chance({{"l1", "0.2"}, {"l2", "1"}, {"l3", "0.5"}}));
  t.add("l1", LeafNode{Utility(Rat(0))});
  t.add("l2", LeafNode{Utility(Rat(2))});
  t.add("l3", LeafNode{Utility(Rat(9))});
  t.add("c2", chance({{"l4", "0.4"}, {"l5", "1"}}));
  t.add("l4", LeafNode{Utility(Rat(4))});
  t.add("l5", LeafNode{Utility(Rat(7))});
  const auto reduced = strategy_lottery(
      t, pick({{"d0", "c0"}, {"d1", "c1"}, {"d2", "c2"}}));
  CHECK(std::get<SimpleLottery>(reduced) == tu::wide_merged());
}

TEST_CASE("strategy reduction in the embedded composition tree") {
  const DecisionTree t = tu::chn_gap_tree();
  const auto greedy = strategy_lottery(t, tu::chn_gap_greedy_strategy());
  CHECK(std::get<SimpleLottery>(greedy) == tu::chn_better());
  const auto other = strategy_lottery(
      t, pick({{"d0", "c0"}, {"d1", "c2"}, {"d2", "c3"}}));
  CHECK(std::get<SimpleLottery>(other) ==
        lot({{"0.1", "0"}, {"0.55", "0.5"}, {"1", "1"}}));
}

TEST_CASE("strategy reduction of kappa trees adds ranks along paths") {
  const DecisionTree t = tu::kappa_fixture();
  CHECK(std::get<KappaLottery>(strategy_lottery(t, pick({{"d0", "c1"}}))) ==
        klot({{0, 5}, {2, 1}}));
  CHECK(std::get<KappaLottery>(strategy_lottery(t, pick({{"d0", "c2"}}))) ==
        klot({{0, 0}, {1, 3}}));
}

TEST_CASE("strategy reduction keeps pair leaves intact") {
  DecisionTree t(TreeMode::Possibilistic, "d0");
  t.add("d0", DecisionNode{{"c1"}});
  t.add("c1", chance({{"l1", "0.5"}, {"l2", "1"}}));
  t.add("l1", LeafNode{BinaryUtility(Degree::one(), Degree(R("0.2")))});
  t.add("l2", LeafNode{BinaryUtility(Degree(R("0.7")), Degree::one())});
  const auto reduced = strategy_lottery(t, pick({{"d0", "c1"}}));
  const auto& l = std::get<SimpleLottery>(reduced);
  // Pair leaves are carried as a two-point scalar lottery over {0, 1}.
  CHECK(pu_of(l, {}) == BinaryUtility(Degree(R("0.7")), Degree::one()));
}

TEST_CASE("incomplete strategies cannot be reduced") {
  const DecisionTree t = tu::two_stage_fixture();
  CHECK_THROWS_AS(strategy_lottery(t, pick({{"d0", "c1"}})), DomainError);
  CHECK_THROWS_AS(strategy_lottery(t, Strategy{}), DomainError);
}

TEST_CASE("reachability tracks the chosen path") {
  const DecisionTree t = tu::two_stage_fixture();
  const auto reach = reachable_decisions(t, pick({{"d0", "c1"}}));
  CHECK(reach == std::vector<NodeId>{"d0", "d1"});
  const auto other = reachable_decisions(t, pick({{"d0", "c2"}}));
  CHECK(other == std::vector<NodeId>{"d0", "d2"});
}

TEST_CASE("canonicalization drops unreachable assignments") {
  const DecisionTree t = tu::two_stage_fixture();
  const Strategy padded = pick({{"d0", "c1"}, {"d1", "c4"}, {"d2", "c6"}});
  const Strategy canon = canonicalize(t, padded);
  CHECK(canon == pick({{"d0", "c1"}, {"d1", "c4"}}));
  CHECK(canonicalize(t, canon) == canon);
}

TEST_CASE("the enumerator lists each canonical strategy exactly once") {
  SUBCASE("a lone decision yields one strategy per choice") {
    DecisionTree t(TreeMode::Possibilistic, "d0");
    t.add("d0", DecisionNode{{"c1", "c2", "c3"}});
    t.add("c1", chance({{"l1", "1"}}));
    t.add("l1", LeafNode{Utility(R("0"))});
    t.add("c2", chance({{"l2", "1"}}));
    t.add("l2", LeafNode{Utility(R("0.5"))});
    t.add("c3", chance({{"l3", "1"}}));
    t.add("l3", LeafNode{Utility(R("1"))});
    StrategyEnumerator e(t);
    std::vector<Strategy> all;
    while (auto s = e.next()) all.push_back(*s);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == pick({{"d0", "c1"}}));
    CHECK(all[1] == pick({{"d0", "c2"}}));
    CHECK(all[2] == pick({{"d0", "c3"}}));
    CHECK(count_strategies(t) == 3);
  }

  SUBCASE("two stages multiply along branches and add across choices") {
    const DecisionTree t = tu::two_stage_fixture();
    StrategyEnumerator e(t);
    std::vector<Strategy> all;
    while (auto s = e.next()) all.push_back(*s);
    REQUIRE(all.size() == 4);
    CHECK(count_strategies(t) == 4);
    // Declared choice order, depth first.
    CHECK(all[0] == pick({{"d0", "c1"}, {"d1", "c3"}}));
    CHECK(all[1] == pick({{"d0", "c1"}, {"d1", "c4"}}));
    CHECK(all[2] == pick({{"d0", "c2"}, {"d2", "c5"}}));
    CHECK(all[3] == pick({{"d0", "c2"}, {"d2", "c6"}}));
    for (const Strategy& s : all) {
      CHECK(validate_strategy(t, s).empty());
      CHECK(canonicalize(t, s) == s);
    }
  }

  SUBCASE("agrees with the odometer brute force on random trees") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      TreeProfile profile = TreeProfile::defaults(
          seed % 2 == 0 ? TreeMode::Possibilistic : TreeMode::Kappa);
      profile.depth = 1 + static_cast<int>(seed % 3);
      const DecisionTree t = random_tree(seed, profile);
      StrategyEnumerator e(t);
      std::vector<Strategy> streamed;
      while (auto s = e.next()) streamed.push_back(*s);
      const std::vector<Strategy> brute = tu::brute_strategies(t);
      REQUIRE(streamed.size() == brute.size());
      CHECK(count_strategies(t) == Int(streamed.size()));
      std::set<std::map<NodeId, NodeId>> seen;
      for (const Strategy& s : streamed) {
        CHECK(validate_strategy(t, s).empty());
        CHECK(seen.insert(s.choices()).second);  // no duplicates
      }
      for (const Strategy& s : brute) {
        CHECK(seen.count(s.choices()) == 1);
      }
    }
  }
}

TEST_CASE("generated trees are deterministic and always valid") {
  const TreeProfile p = TreeProfile::defaults(TreeMode::Possibilistic);
  const DecisionTree a = random_tree(7, p);
  const DecisionTree b = random_tree(7, p);
  CHECK(a.ids() == b.ids());
  CHECK(a.edge_count() == b.edge_count());

  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    TreeProfile profile = TreeProfile::defaults(
        seed % 3 == 0 ? TreeMode::Kappa : TreeMode::Possibilistic);
    profile.depth = static_cast<int>(seed % 4);
    profile.branching = 2 + static_cast<int>(seed % 2);
    if (seed % 5 == 0 && profile.mode == TreeMode::Possibilistic) {
      profile.pair_leaves = true;
    }
    const DecisionTree t = random_tree(seed, profile);
    const auto issues = validate_tree(t);
    CHECK_FALSE(has_errors(issues));
    CHECK(count_strategies(t) > 0);
  }
}

TEST_CASE("decision caps keep generated trees small") {
  TreeProfile p = TreeProfile::defaults(TreeMode::Possibilistic);
  p.depth = 4;
  p.branching = 3;
  p.max_decisions = 12;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DecisionTree t = random_tree(seed, p);
    std::size_t decisions = 0;
    for (const NodeId& id : t.ids()) {
      if (t.is_decision(id)) ++decisions;
    }
    CHECK(decisions <= 12);
    CHECK_FALSE(has_errors(validate_tree(t)));
  }
}
