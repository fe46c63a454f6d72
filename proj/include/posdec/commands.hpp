#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace posdec::cli {

/// Options mirror the command-line flags one to one; every command is a
/// pure function of them plus the named files, writing human output to
/// `out` and diagnostics to `err`, and returning the process exit code:
/// 0 success (or expected classification), 1 domain violation, 2 parse
/// error, 3 budget exceeded.

struct CheckOptions {
  std::string tree_path;
  std::string strategy_path;  // empty: check the tree alone
};

struct EvaluateOptions {
  std::string tree_path;
  std::string strategy_path;
  std::string criterion;
  std::string embedding;  // empty: none
};

struct OptimizeOptions {
  std::string tree_path;
  std::string criterion;
  std::string embedding;
  std::string method = "auto";  // auto|dp|exhaustive
  bool unsafe_dp = false;
  std::uint64_t budget = 0;  // exhaustive strategy budget, 0 = unlimited
  bool chn_prune = false;
  std::string out_path;  // empty: strategy document to `out`
};

struct FuzzOptions {
  std::string criterion;
  std::string embedding;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  bool symmetric = false;  // also check the mirrored preference
  std::string witness_out = "witness.json";  // empty: do not write one
  std::string replay_path;  // when set, re-verify a recorded witness
};

struct GenOptions {
  std::uint64_t seed = 1;
  int depth = 2;
  int branching = 2;
  std::string mode = "possibilistic";
  bool pair_leaves = false;
  std::string out_path;
};

struct BenchOptions {
  int max_depth = 3;
  int branching = 2;
  std::string criterion = "upes";
  std::uint64_t enumerate_cap = 100000;  // skip enumeration above this
};

int cmd_check(const CheckOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out,
                 std::ostream& err);
int cmd_optimize(const OptimizeOptions& options, std::ostream& out,
                 std::ostream& err);
int cmd_fuzz(const FuzzOptions& options, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out,
              std::ostream& err);

}  // namespace posdec::cli
