#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include "posdec/commands.hpp"
#include "posdec/io.hpp"

#include <filesystem>
#include <sstream>
#include <string>

using namespace posdec;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <typename Options, typename Fn>
Run run(Fn fn, const Options& options) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = fn(options, out, err);
  return {code, out.str(), err.str()};
}

/// Scratch directory for files the commands read and write.
fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "posdec-cmd-tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  write_text_file(p.string(), text);
  return p.string();
}

std::string fixture_path(const std::string& name, const DecisionTree& tree,
                         const std::string& comment = "") {
  return write_scratch(name, format_tree_document({tree, comment}));
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("check accepts valid trees and reports issues otherwise") {
  const std::string good = fixture_path("good.json", tu::two_stage_fixture());
  const Run ok = run(cli::cmd_check, cli::CheckOptions{good, ""});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "ok"));

  DecisionTree bad(TreeMode::Possibilistic, "d0");
  bad.add("d0", DecisionNode{{"c1"}});
  bad.add("c1", tu::chance({{"l1", "0.9"}}));
  bad.add("l1", LeafNode{Utility(tu::R("1"))});
  const std::string badp = fixture_path("bad.json", bad);
  const Run flagged = run(cli::cmd_check, cli::CheckOptions{badp, ""});
  CHECK(flagged.code == 1);
  CHECK(contains(flagged.out, "normalization"));

  const std::string trunc = write_scratch("trunc.json", "{\"format\": ");
  const Run broken = run(cli::cmd_check, cli::CheckOptions{trunc, ""});
  CHECK(broken.code == 2);
  CHECK(contains(broken.err, "parse error"));
  CHECK(contains(broken.err, "line"));

  const Run missing =
      run(cli::cmd_check, cli::CheckOptions{"/nonexistent/tree.json", ""});
  CHECK(missing.code == 1);
}

TEST_CASE("check can vet a strategy against its tree") {
  const DecisionTree t = tu::two_stage_fixture();
  const std::string tree = fixture_path("vet-tree.json", t);
  Strategy s;
  s.choose("d0", "c1");
  s.choose("d1", "c3");
  const std::string strat =
      write_scratch("vet-strategy.json", format_strategy_document(s, t));
  const Run ok = run(cli::cmd_check, cli::CheckOptions{tree, strat});
  CHECK(ok.code == 0);

  Strategy incomplete;
  incomplete.choose("d0", "c1");
  const std::string strat2 = write_scratch(
      "vet-incomplete.json", format_strategy_document(incomplete, t));
  const Run bad = run(cli::cmd_check, cli::CheckOptions{tree, strat2});
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "completeness"));
}

TEST_CASE("evaluate prints the reduced lottery and the value") {
  const DecisionTree t = tu::chn_gap_tree();
  const std::string tree = fixture_path("eval-tree.json", t);
  const std::string strat = write_scratch(
      "eval-strategy.json",
      format_strategy_document(tu::chn_gap_greedy_strategy(), t));

  const Run chn = run(cli::cmd_evaluate,
                      cli::EvaluateOptions{tree, strat, "chn", ""});
  CHECK(chn.code == 0);
  CHECK(contains(chn.out, "reduced: <0.2/0, 0.5/0.51, 1/1>"));
  CHECK(contains(chn.out, "value: 653/1000 (= 0.653)"));

  const Run upes = run(cli::cmd_evaluate,
                       cli::EvaluateOptions{tree, strat, "upes", ""});
  CHECK(upes.code == 0);
  CHECK(contains(upes.out, "value: 51/100 (= 0.51)"));

  const Run ln =
      run(cli::cmd_evaluate, cli::EvaluateOptions{tree, strat, "ln", ""});
  CHECK(ln.code == 0);
  CHECK(contains(ln.out, "value: none"));

  const Run pu = run(cli::cmd_evaluate,
                     cli::EvaluateOptions{tree, strat, "pu", "pessimistic"});
  CHECK(pu.code == 0);
  CHECK(contains(pu.out, "value: <1, 0.49>"));

  SUBCASE("missing embedding for pu on scalars is a domain error") {
    const Run bare =
        run(cli::cmd_evaluate, cli::EvaluateOptions{tree, strat, "pu", ""});
    CHECK(bare.code == 1);
    CHECK(contains(bare.err, "error:"));
  }

  SUBCASE("unknown criterion names fail fast") {
    const Run bad =
        run(cli::cmd_evaluate, cli::EvaluateOptions{tree, strat, "meu", ""});
    CHECK(bad.code == 1);
  }
}

TEST_CASE("evaluate works on kappa trees") {
  const DecisionTree t = tu::kappa_fixture();
  const std::string tree = fixture_path("eval-kappa.json", t);
  Strategy s;
  s.choose("d0", "c1");
  const std::string strat =
      write_scratch("eval-kappa-strategy.json", format_strategy_document(s, t));
  const Run r =
      run(cli::cmd_evaluate, cli::EvaluateOptions{tree, strat, "omeu", ""});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "reduced: <2/1, 0/5>"));
  CHECK(contains(r.out, "value: 3"));
}

TEST_CASE("optimize writes the strategy document and reports stats") {
  const std::string tree =
      fixture_path("opt-tree.json", tu::two_stage_fixture());
  cli::OptimizeOptions o;
  o.tree_path = tree;
  o.criterion = "upes";
  const Run r = run(cli::cmd_optimize, o);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"format\": \"posdec-strategy\""));
  CHECK(contains(r.err, "method: dp"));
  CHECK(contains(r.err, "value:"));
  CHECK(contains(r.err, "edges visited: 17"));
  const Strategy s = parse_strategy_document(r.out);
  CHECK(validate_strategy(tu::two_stage_fixture(), s).empty());
}

TEST_CASE("optimize dispatches the Choquet criteria to exhaustive search") {
  const std::string tree = fixture_path("opt-gap.json", tu::chn_gap_tree());
  cli::OptimizeOptions o;
  o.tree_path = tree;
  o.criterion = "chn";
  const Run r = run(cli::cmd_optimize, o);
  CHECK(r.code == 0);
  CHECK(contains(r.err, "method: exhaustive"));
  CHECK(contains(r.err, "value: 27/40 (= 0.675)"));
  const Strategy s = parse_strategy_document(r.out);
  CHECK(s.choice("d1") == NodeId("c2"));

  SUBCASE("forcing backward induction needs the explicit escape hatch") {
    cli::OptimizeOptions forced = o;
    forced.method = "dp";
    const Run refused = run(cli::cmd_optimize, forced);
    CHECK(refused.code == 1);
    CHECK(contains(refused.err, "backward induction"));

    forced.unsafe_dp = true;
    const Run greedy = run(cli::cmd_optimize, forced);
    CHECK(greedy.code == 0);
    CHECK(contains(greedy.err, "value: 653/1000 (= 0.653)"));
    CHECK(contains(greedy.err, "heuristic, may be suboptimal"));
  }

  SUBCASE("a strategy budget aborts with the budget exit code") {
    cli::OptimizeOptions tight = o;
    tight.budget = 1;
    const Run aborted = run(cli::cmd_optimize, tight);
    CHECK(aborted.code == 3);
    CHECK(contains(aborted.err, "budget exceeded"));
  }

  SUBCASE("--out sends the document to a file instead") {
    cli::OptimizeOptions to_file = o;
    to_file.out_path = (scratch() / "opt-out.json").string();
    const Run r2 = run(cli::cmd_optimize, to_file);
    CHECK(r2.code == 0);
    CHECK(r2.out.empty());
    const Strategy s2 =
        parse_strategy_document(read_text_file(to_file.out_path));
    CHECK(s2.choice("d1") == NodeId("c2"));
  }
}

TEST_CASE("fuzz classifies criteria and writes a replayable witness") {
  const fs::path wpath = scratch() / "chn-witness.json";
  cli::FuzzOptions fo;
  fo.criterion = "chn";
  fo.trials = 60;
  fo.seed = 5;
  fo.witness_out = wpath.string();
  const Run fuzz = run(cli::cmd_fuzz, fo);
  CHECK(fuzz.code == 0);
  CHECK(contains(fuzz.out, "criterion: chn"));
  CHECK(contains(fuzz.out, "trials: 60"));
  CHECK(contains(fuzz.out, "expected: at least one violation"));
  CHECK(contains(fuzz.out, "outcome: as expected"));
  CHECK(fs::exists(wpath));

  SUBCASE("replay confirms the witness byte for byte") {
    cli::FuzzOptions ro;
    ro.replay_path = wpath.string();
    const Run replay = run(cli::cmd_fuzz, ro);
    CHECK(replay.code == 0);
    CHECK(contains(replay.out, "witness confirmed"));
  }

  SUBCASE("replay rejects a tampered witness") {
    std::string text = read_text_file(wpath.string());
    const auto pos = text.find("0.653");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "0.654");
    const std::string tampered =
        write_scratch("tampered-witness.json", text);
    cli::FuzzOptions ro;
    ro.replay_path = tampered;
    const Run replay = run(cli::cmd_fuzz, ro);
    CHECK(replay.code == 1);
    CHECK_FALSE(contains(replay.out, "witness confirmed"));
  }
}

TEST_CASE("fuzz reports zero violations for monotone criteria") {
  cli::FuzzOptions fo;
  fo.criterion = "upes";
  fo.trials = 500;
  fo.witness_out = "";
  const Run r = run(cli::cmd_fuzz, fo);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "violations: 0"));
  CHECK(contains(r.out, "expected: no violations"));
  CHECK(contains(r.out, "outcome: as expected"));

  cli::FuzzOptions ko;
  ko.criterion = "omeu";
  ko.trials = 500;
  ko.witness_out = "";
  CHECK(run(cli::cmd_fuzz, ko).code == 0);

  SUBCASE("pu without an embedding cannot be fuzzed") {
    cli::FuzzOptions po;
    po.criterion = "pu";
    po.trials = 10;
    CHECK(run(cli::cmd_fuzz, po).code == 1);
  }
}

TEST_CASE("gen emits identical documents for identical flags") {
  cli::GenOptions g;
  g.seed = 12;
  g.depth = 2;
  g.branching = 2;
  const Run a = run(cli::cmd_gen, g);
  const Run b = run(cli::cmd_gen, g);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const TreeDocument doc = parse_tree_document(a.out);
  CHECK_FALSE(has_errors(validate_tree(doc.tree)));

  SUBCASE("different seeds differ") {
    cli::GenOptions g2 = g;
    g2.seed = 13;
    CHECK(run(cli::cmd_gen, g2).out != a.out);
  }

  SUBCASE("kappa mode generates normalized rank edges") {
    cli::GenOptions k;
    k.seed = 3;
    k.mode = "kappa";
    const Run r = run(cli::cmd_gen, k);
    CHECK(r.code == 0);
    const TreeDocument doc2 = parse_tree_document(r.out);
    CHECK(doc2.tree.mode() == TreeMode::Kappa);
    CHECK_FALSE(has_errors(validate_tree(doc2.tree)));
    for (const NodeId& id : doc2.tree.ids()) {
      if (!doc2.tree.is_chance(id)) continue;
      const auto& node = std::get<ChanceNode>(doc2.tree.at(id));
      bool has_zero = false;
      for (const ChanceEdge& e : node.edges) {
        has_zero = has_zero || std::get<KappaRank>(e.weight).is_zero();
      }
      CHECK(has_zero);
    }
  }

  SUBCASE("unknown mode is rejected") {
    cli::GenOptions bad = g;
    bad.mode = "bayesian";
    CHECK(run(cli::cmd_gen, bad).code == 1);
  }
}

TEST_CASE("bench checks its own counts and prints the table") {
  cli::BenchOptions b;
  b.max_depth = 2;
  const Run r = run(cli::cmd_bench, b);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "depth"));
  CHECK(contains(r.out, "128"));  // strategies at depth 2, branching 2
  CHECK(contains(r.err, "depth 2"));
}
