#include "posdec/commands.hpp"

#include "posdec/criteria.hpp"
#include "posdec/dtree.hpp"
#include "posdec/errors.hpp"
#include "posdec/io.hpp"
#include "posdec/lottery.hpp"
#include "posdec/propcheck.hpp"
#include "posdec/rational.hpp"
#include "posdec/solver.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace posdec::cli {
namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what();
    if (e.line() > 0) {
      err << " (line " << e.line() << ", column " << e.column() << ")";
    }
    err << "\n";
    return 2;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

Criterion make_criterion(const std::string& name,
                         const std::string& embedding) {
  if (name.empty()) {
    throw DomainError("a criterion is required (--criterion)");
  }
  const CriterionId id = parse_criterion_id(name);
  std::optional<EmbedMode> mode;
  if (!embedding.empty()) {
    mode = parse_embed_mode(embedding);
  }
  return Criterion(id, mode);
}

TreeDocument load_checked_tree(const std::string& path, std::ostream& err) {
  TreeDocument doc = parse_tree_document(read_text_file(path));
  const auto issues = validate_tree(doc.tree);
  for (const auto& issue : issues) {
    err << to_string(issue) << "\n";
  }
  if (has_errors(issues)) {
    throw DomainError("tree fails validation: " + path);
  }
  return doc;
}

Strategy load_checked_strategy(const std::string& path,
                               const DecisionTree& tree, std::ostream& err) {
  Strategy strategy = parse_strategy_document(read_text_file(path));
  const auto issues = validate_strategy(tree, strategy);
  for (const auto& issue : issues) {
    err << to_string(issue) << "\n";
  }
  if (has_errors(issues)) {
    throw DomainError("strategy fails validation: " + path);
  }
  return strategy;
}

std::string fraction_text(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

/// "653/1000 (= 0.653)" when the decimal terminates, plain fraction or
/// integer otherwise.  Never inexact.
std::string rational_text(const Rat& r) {
  const std::string frac = fraction_text(r);
  const std::string dec = format_rational(r);
  return dec == frac ? frac : frac + " (= " + dec + ")";
}

std::string value_text(const CriterionValue& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "none"; }
    std::string operator()(const Rat& r) const { return rational_text(r); }
    std::string operator()(const BinaryUtility& u) const {
      return to_string(u);
    }
    std::string operator()(const KappaRank& k) const { return to_string(k); }
  };
  return std::visit(Visitor{}, value);
}

std::string reduced_text(const ReducedLottery& lottery) {
  if (const auto* s = std::get_if<SimpleLottery>(&lottery)) {
    return to_string(*s);
  }
  return to_string(std::get<KappaLottery>(lottery));
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

/// Complete alternating tree with deterministic labels: every decision
/// node offers `branching` chance nodes, every chance node `branching`
/// outcomes, down to `depth` decision stages below the root.
DecisionTree bench_tree(int depth, int branching) {
  DecisionTree tree(TreeMode::Possibilistic, "d0");
  const std::vector<Rat> utility_pool = {Rat(0), Rat(1, 4), Rat(1, 2),
                                         Rat(3, 4), Rat(1)};
  const std::vector<Rat> degree_pool = {Rat(7, 10), Rat(1, 2), Rat(3, 10),
                                        Rat(1, 10), Rat(9, 10)};
  struct Item {
    NodeId id;
    int stage;
  };
  std::vector<Item> queue{{"d0", 0}};
  std::size_t next_id = 1;
  std::size_t u_index = 0;
  std::size_t d_index = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Item item = queue[q];
    std::vector<NodeId> chance_ids;
    for (int c = 0; c < branching; ++c) {
      chance_ids.push_back("c" + std::to_string(next_id++));
    }
    tree.add(item.id, DecisionNode{chance_ids});
    for (const NodeId& cid : chance_ids) {
      ChanceNode chance;
      std::vector<std::pair<NodeId, LeafNode>> leaves;
      for (int e = 0; e < branching; ++e) {
        const Degree weight =
            e == 0 ? Degree::one()
                   : Degree(degree_pool[(d_index++) % degree_pool.size()]);
        if (item.stage < depth) {
          NodeId did = "d" + std::to_string(next_id++);
          chance.edges.push_back(ChanceEdge{did, weight});
          queue.push_back({std::move(did), item.stage + 1});
        } else {
          NodeId lid = "l" + std::to_string(next_id++);
          chance.edges.push_back(ChanceEdge{lid, weight});
          leaves.emplace_back(
              std::move(lid),
              LeafNode{Utility(utility_pool[(u_index++) %
                                            utility_pool.size()])});
        }
      }
      tree.add(cid, std::move(chance));
      for (auto& [lid, leaf] : leaves) {
        tree.add(lid, std::move(leaf));
      }
    }
  }
  return tree;
}

}  // namespace

int cmd_check(const CheckOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() -> int {
    const TreeDocument doc = parse_tree_document(
        read_text_file(options.tree_path));
    const auto tree_issues = validate_tree(doc.tree);
    for (const auto& issue : tree_issues) {
      out << to_string(issue) << "\n";
    }
    if (has_errors(tree_issues)) {
      return 1;
    }
    std::size_t issue_count = tree_issues.size();
    if (!options.strategy_path.empty()) {
      const Strategy strategy = parse_strategy_document(
          read_text_file(options.strategy_path));
      const auto strategy_issues = validate_strategy(doc.tree, strategy);
      for (const auto& issue : strategy_issues) {
        out << to_string(issue) << "\n";
      }
      if (has_errors(strategy_issues)) {
        return 1;
      }
      issue_count += strategy_issues.size();
    }
    if (issue_count == 0) {
      out << "ok\n";
    }
    return 0;
  });
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() -> int {
    const TreeDocument doc = load_checked_tree(options.tree_path, err);
    const Criterion criterion =
        make_criterion(options.criterion, options.embedding);
    const Strategy strategy =
        load_checked_strategy(options.strategy_path, doc.tree, err);
    const ReducedLottery reduced = strategy_lottery(doc.tree, strategy);
    out << "reduced: " << reduced_text(reduced) << "\n";
    const CriterionValue value = evaluate_reduced(criterion, reduced);
    out << "value: " << value_text(value) << "\n";
    return 0;
  });
}

int cmd_optimize(const OptimizeOptions& options, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() -> int {
    const TreeDocument doc = load_checked_tree(options.tree_path, err);
    const Criterion criterion =
        make_criterion(options.criterion, options.embedding);
    ::posdec::OptimizeOptions solve;
    if (options.method == "dp") {
      solve.method = MethodChoice::Dp;
    } else if (options.method == "exhaustive") {
      solve.method = MethodChoice::Exhaustive;
    } else if (options.method == "auto") {
      solve.method = MethodChoice::Auto;
    } else {
      throw DomainError("unknown method \"" + options.method +
                        "\" (expected auto, dp, or exhaustive)");
    }
    solve.allow_non_monotone = options.unsafe_dp;
    if (options.budget > 0) {
      solve.budget = options.budget;
    }
    solve.chn_prune = options.chn_prune;
    const OptimizationResult result = optimize(doc.tree, criterion, solve);
    emit(format_strategy_document(result.strategy, doc.tree),
         options.out_path, out);
    err << "method: " << to_string(result.method)
        << (result.heuristic ? " (heuristic, may be suboptimal)" : "")
        << "\n";
    err << "value: " << value_text(result.value) << "\n";
    err << "nodes visited: " << result.stats.nodes_visited << "\n";
    err << "edges visited: " << result.stats.edges_visited << "\n";
    err << "strategies examined: " << result.stats.strategies_examined
        << "\n";
    err << "wall seconds: " << result.stats.wall_seconds << "\n";
    return 0;
  });
}

int cmd_fuzz(const FuzzOptions& options, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (!options.replay_path.empty()) {
      const MonotonicityViolation recorded =
          parse_witness_document(read_text_file(options.replay_path));
      const auto again = check_trial(recorded.trial, true);
      if (!again) {
        err << "witness does not reproduce: the trial shows no violation\n";
        return 1;
      }
      const bool same = again->reversed == recorded.reversed &&
                        again->base_left == recorded.base_left &&
                        again->base_right == recorded.base_right &&
                        again->composed_left == recorded.composed_left &&
                        again->composed_right == recorded.composed_right &&
                        again->reduced_left == recorded.reduced_left &&
                        again->reduced_right == recorded.reduced_right;
      if (!same) {
        err << "witness mismatch: recomputed values differ from the "
               "recorded ones\n";
        return 1;
      }
      out << "witness confirmed: "
          << to_string(recorded.trial.criterion) << " violation reproduces\n";
      return 0;
    }
    const Criterion criterion =
        make_criterion(options.criterion, options.embedding);
    const FuzzReport report =
        fuzz_monotonicity(criterion, options.trials, options.seed,
                          FuzzGrid::defaults(), options.symmetric);
    out << "criterion: " << to_string(criterion) << "\n";
    out << "trials: " << report.trials << "\n";
    out << "violations: " << report.violations << "\n";
    out << "expected: "
        << (report.expected_monotone ? "no violations"
                                     : "at least one violation")
        << "\n";
    if (report.first && !options.witness_out.empty()) {
      write_text_file(options.witness_out,
                      format_witness_document(*report.first));
      out << "witness: " << options.witness_out << "\n";
    }
    out << "outcome: "
        << (report.matches_expectation() ? "as expected" : "UNEXPECTED")
        << "\n";
    return report.matches_expectation() ? 0 : 1;
  });
}

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    TreeMode mode;
    if (options.mode == "possibilistic") {
      mode = TreeMode::Possibilistic;
    } else if (options.mode == "kappa") {
      mode = TreeMode::Kappa;
    } else {
      throw DomainError("unknown mode \"" + options.mode +
                        "\" (expected possibilistic or kappa)");
    }
    if (options.depth < 0 || options.branching < 1) {
      throw DomainError("depth must be >= 0 and branching >= 1");
    }
    TreeProfile profile = TreeProfile::defaults(mode);
    profile.depth = options.depth;
    profile.branching = options.branching;
    profile.pair_leaves = options.pair_leaves;
    DecisionTree tree = random_tree(options.seed, profile);
    emit(format_tree_document(TreeDocument{std::move(tree), ""}),
         options.out_path, out);
    return 0;
  });
}

int cmd_bench(const BenchOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() -> int {
    const Criterion criterion = make_criterion(options.criterion, "");
    if (kappa_criterion(criterion.id)) {
      throw DomainError("bench trees are possibilistic; omeu does not apply");
    }
    if (!weakly_monotone(criterion.id)) {
      throw DomainError(
          "bench measures backward induction; pick a weakly monotone "
          "criterion");
    }
    if (options.max_depth < 0 || options.branching < 1) {
      throw DomainError("max depth must be >= 0 and branching >= 1");
    }
    out << "depth  nodes  edges  dp-edge-visits  strategies  enumerated\n";
    for (int depth = 0; depth <= options.max_depth; ++depth) {
      const DecisionTree tree = bench_tree(depth, options.branching);
      const OptimizationResult dp = dp_optimize(tree, criterion);
      if (dp.stats.edges_visited != tree.edge_count()) {
        throw DomainError(
            "backward induction visited " +
            std::to_string(dp.stats.edges_visited) + " edges on a tree with " +
            std::to_string(tree.edge_count()));
      }
      const Int closed = count_strategies(tree);
      std::string enumerated = "-";
      if (closed <= Int(options.enumerate_cap)) {
        StrategyEnumerator enumerator(tree);
        Int n = 0;
        while (enumerator.next()) {
          ++n;
        }
        if (n != closed) {
          throw DomainError("enumerated " + n.str() +
                            " strategies but the closed form gives " +
                            closed.str());
        }
        enumerated = n.str();
      }
      out << depth << "  " << tree.size() << "  " << tree.edge_count()
          << "  " << dp.stats.edges_visited << "  " << closed.str() << "  "
          << enumerated << "\n";
      err << "depth " << depth << ": dp " << dp.stats.wall_seconds << "s\n";
    }
    out << "dp edge visits equal edge counts; enumerated strategy counts "
           "match the closed form\n";
    return 0;
  });
}

}  // namespace posdec::cli
