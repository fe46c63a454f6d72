#include "posdec/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{
      "Exact evaluation and optimization of strategies in possibilistic "
      "and kappa-ranked decision trees"};
  app.require_subcommand(1);

  const std::vector<std::string> criteria = {"upes", "uopt", "pu",  "ln",
                                             "lpi",  "chn",  "chpi", "omeu"};
  const std::vector<std::string> embeddings = {"optimistic", "pessimistic"};

  posdec::cli::CheckOptions check_options;
  CLI::App* check = app.add_subcommand(
      "check", "Validate a tree document (and optionally a strategy)");
  check->add_option("--tree", check_options.tree_path, "tree document")
      ->required();
  check->add_option("--strategy", check_options.strategy_path,
                    "strategy document to validate against the tree");

  posdec::cli::EvaluateOptions evaluate_options;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Reduce a strategy to its lottery and evaluate it");
  evaluate->add_option("--tree", evaluate_options.tree_path, "tree document")
      ->required();
  evaluate
      ->add_option("--strategy", evaluate_options.strategy_path,
                   "strategy document")
      ->required();
  evaluate
      ->add_option("--criterion", evaluate_options.criterion,
                   "decision criterion")
      ->required()
      ->check(CLI::IsMember(criteria));
  evaluate
      ->add_option("--embedding", evaluate_options.embedding,
                   "scalar-to-pair embedding for pu over scalar leaves")
      ->check(CLI::IsMember(embeddings));

  posdec::cli::OptimizeOptions optimize_options;
  CLI::App* optimize =
      app.add_subcommand("optimize", "Find an optimal strategy");
  optimize->add_option("--tree", optimize_options.tree_path, "tree document")
      ->required();
  optimize
      ->add_option("--criterion", optimize_options.criterion,
                   "decision criterion")
      ->required()
      ->check(CLI::IsMember(criteria));
  optimize
      ->add_option("--embedding", optimize_options.embedding,
                   "scalar-to-pair embedding for pu over scalar leaves")
      ->check(CLI::IsMember(embeddings));
  optimize
      ->add_option("--method", optimize_options.method,
                   "auto, dp (backward induction), or exhaustive")
      ->check(CLI::IsMember({"auto", "dp", "exhaustive"}));
  optimize->add_flag(
      "--unsafe-dp", optimize_options.unsafe_dp,
      "allow backward induction where it is only a heuristic");
  optimize->add_option(
      "--budget", optimize_options.budget,
      "max strategies examined by exhaustive search (0 = unlimited)");
  optimize->add_flag("--chn-prune", optimize_options.chn_prune,
                     "upper-bound prune for exhaustive chn search");
  optimize->add_option("--out", optimize_options.out_path,
                       "write the strategy document here instead of stdout");

  posdec::cli::FuzzOptions fuzz_options;
  CLI::App* fuzz = app.add_subcommand(
      "fuzz", "Randomized compositionality check of a criterion");
  fuzz->add_option("--criterion", fuzz_options.criterion,
                   "decision criterion")
      ->check(CLI::IsMember(criteria));
  fuzz->add_option("--embedding", fuzz_options.embedding,
                   "scalar-to-pair embedding (required for pu)")
      ->check(CLI::IsMember(embeddings));
  fuzz->add_option("--trials", fuzz_options.trials, "random trials to run");
  fuzz->add_option("--seed", fuzz_options.seed, "random seed");
  fuzz->add_flag("--symmetric", fuzz_options.symmetric,
                 "check both preference directions");
  fuzz->add_option("--witness-out", fuzz_options.witness_out,
                   "where to write the first violation (empty: nowhere)");
  fuzz->add_option("--replay", fuzz_options.replay_path,
                   "re-verify a recorded witness file instead of fuzzing");

  posdec::cli::GenOptions gen_options;
  CLI::App* gen =
      app.add_subcommand("gen", "Generate a deterministic random tree");
  gen->add_option("--seed", gen_options.seed, "random seed");
  gen->add_option("--depth", gen_options.depth,
                  "decision stages below the root");
  gen->add_option("--branching", gen_options.branching,
                  "children per decision and chance node");
  gen->add_option("--mode", gen_options.mode, "possibilistic or kappa")
      ->check(CLI::IsMember({"possibilistic", "kappa"}));
  gen->add_flag("--pair-leaves", gen_options.pair_leaves,
                "binary-utility leaves instead of scalars");
  gen->add_option("--out", gen_options.out_path,
                  "write the tree document here instead of stdout");

  posdec::cli::BenchOptions bench_options;
  CLI::App* bench = app.add_subcommand(
      "bench",
      "Compare backward-induction work against strategy-space size");
  bench->add_option("--max-depth", bench_options.max_depth,
                    "largest decision depth to measure");
  bench->add_option("--branching", bench_options.branching,
                    "children per decision and chance node");
  bench->add_option("--criterion", bench_options.criterion,
                    "weakly monotone criterion to optimize")
      ->check(CLI::IsMember(criteria));
  bench->add_option("--enumerate-cap", bench_options.enumerate_cap,
                    "skip exhaustive enumeration above this many strategies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) {
    return posdec::cli::cmd_check(check_options, std::cout, std::cerr);
  }
  if (evaluate->parsed()) {
    return posdec::cli::cmd_evaluate(evaluate_options, std::cout, std::cerr);
  }
  if (optimize->parsed()) {
    return posdec::cli::cmd_optimize(optimize_options, std::cout, std::cerr);
  }
  if (fuzz->parsed()) {
    return posdec::cli::cmd_fuzz(fuzz_options, std::cout, std::cerr);
  }
  if (gen->parsed()) {
    return posdec::cli::cmd_gen(gen_options, std::cout, std::cerr);
  }
  if (bench->parsed()) {
    return posdec::cli::cmd_bench(bench_options, std::cout, std::cerr);
  }
  return 0;
}
