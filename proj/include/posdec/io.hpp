#pragma once

#include "posdec/dtree.hpp"
#include "posdec/propcheck.hpp"

#include <string>

namespace posdec {

/// A decision tree together with the optional free-text comment carried
/// by its document.
struct TreeDocument {
  DecisionTree tree;
  std::string comment;
};

/// Reads a tree document.  Malformed JSON or schema violations raise
/// ParseError (with position for lexical errors); out-of-range values
/// raise DomainError.  Structural soundness beyond the schema is the
/// business of validate_tree, not the parser.
TreeDocument parse_tree_document(const std::string& text);
std::string format_tree_document(const TreeDocument& doc);

/// Reads a strategy document; "bottom" entries are simply absent from
/// the result.
Strategy parse_strategy_document(const std::string& text);

/// Writes every decision node of the tree in document order, mapping
/// unassigned ones to "bottom".
std::string format_strategy_document(const Strategy& strategy,
                                     const DecisionTree& tree);

/// Round-trips a recorded monotonicity violation, including the reduced
/// compositions and all four criterion values, so a run can be replayed
/// and checked against what was recorded.
std::string format_witness_document(const MonotonicityViolation& violation);
MonotonicityViolation parse_witness_document(const std::string& text);

/// Lowercase criterion and embedding names as used on the command line
/// ("upes", "uopt", "pu", "ln", "lpi", "chn", "chpi", "omeu";
/// "optimistic", "pessimistic").  Unknown names are domain errors.
CriterionId parse_criterion_id(const std::string& name);
EmbedMode parse_embed_mode(const std::string& name);

/// Whole-file helpers; failures are domain errors naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace posdec
