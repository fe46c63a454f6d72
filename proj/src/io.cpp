#include "posdec/io.hpp"

#include "posdec/errors.hpp"
#include "posdec/rational.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

namespace posdec {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void rethrow_with_position(const std::string& text,
                                        const Json::parse_error& e) {
  std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
  if (pos > text.size()) pos = text.size();
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw ParseError(e.what(), line, column);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    rethrow_with_position(text, e);
  }
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  return *it;
}

std::string get_string(const Json& j, const char* key,
                       const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_string()) {
    throw ParseError(where + ": field \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

/// Numbers may be JSON integers or strings like "0.51" and "51/100".
/// Non-integer JSON numbers are rejected: they would pass through
/// floating point and stop being exact.
Rat get_rational(const Json& v, const std::string& where) {
  if (v.is_string()) {
    auto parsed = try_parse_rational(v.get<std::string>());
    if (!parsed) {
      throw ParseError(where + ": \"" + v.get<std::string>() +
                       "\" is not a number");
    }
    return *parsed;
  }
  if (v.is_number_unsigned()) {
    return Rat(v.get<std::uint64_t>());
  }
  if (v.is_number_integer()) {
    return Rat(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    throw ParseError(where +
                     ": write non-integer numbers as strings, e.g. \"0.5\", "
                     "so they stay exact");
  }
  throw ParseError(where + ": expected a number or a numeric string");
}

KappaRank get_rank(const Json& v, const std::string& where) {
  if (v.is_string() && v.get<std::string>() == "inf") {
    return KappaRank::infinity();
  }
  const Rat n = get_rational(v, where);
  const Rat limit(std::numeric_limits<std::uint64_t>::max());
  if (boost::multiprecision::denominator(n) != 1 || n < 0 || n > limit) {
    throw DomainError(where +
                      ": a rank must be a non-negative integer or \"inf\"");
  }
  return KappaRank(
      boost::multiprecision::numerator(n).convert_to<std::uint64_t>());
}

EdgeWeight get_weight(const Json& v, TreeMode mode, const std::string& where) {
  if (mode == TreeMode::Kappa) {
    return get_rank(v, where);
  }
  return Degree(get_rational(v, where));
}

LeafValue get_leaf_value(const Json& node, const std::string& where) {
  const bool has_utility = node.contains("utility");
  const bool has_pair = node.contains("utility_pair");
  const bool has_mu = node.contains("mu");
  if (int(has_utility) + int(has_pair) + int(has_mu) != 1) {
    throw ParseError(where +
                     ": a leaf needs exactly one of \"utility\", "
                     "\"utility_pair\", \"mu\"");
  }
  if (has_utility) {
    return Utility(get_rational(node.at("utility"), where + ".utility"));
  }
  if (has_mu) {
    return get_rank(node.at("mu"), where + ".mu");
  }
  const Json& pair = node.at("utility_pair");
  if (!pair.is_object()) {
    throw ParseError(where +
                     ".utility_pair: expected an object with \"top\" and "
                     "\"bottom\"");
  }
  Degree top(get_rational(member(pair, "top", where + ".utility_pair"),
                          where + ".utility_pair.top"));
  Degree bottom(get_rational(member(pair, "bottom", where + ".utility_pair"),
                             where + ".utility_pair.bottom"));
  return BinaryUtility(top, bottom);
}

void check_version(const Json& doc, const std::string& where) {
  const Json& version = member(doc, "version", where);
  if (!version.is_number_integer() || version.get<std::int64_t>() != 1) {
    throw ParseError(where + ": unsupported version");
  }
}

Json weight_to_json(const EdgeWeight& w) {
  if (const auto* d = std::get_if<Degree>(&w)) {
    return format_rational(d->value());
  }
  return to_string(std::get<KappaRank>(w));
}

Json simple_lottery_json(const SimpleLottery& lottery) {
  Json a = Json::array();
  for (const LotteryEntry& e : lottery.entries()) {
    Json je;
    je["utility"] = format_rational(e.utility.value());
    je["degree"] = format_rational(e.degree.value());
    a.push_back(std::move(je));
  }
  return a;
}

Json kappa_lottery_json(const KappaLottery& lottery) {
  Json a = Json::array();
  for (const KappaEntry& e : lottery.entries()) {
    Json je;
    je["mu"] = to_string(e.mu);
    je["kappa"] = to_string(e.kappa);
    a.push_back(std::move(je));
  }
  return a;
}

Json reduced_json(const ReducedLottery& lottery) {
  if (const auto* s = std::get_if<SimpleLottery>(&lottery)) {
    return simple_lottery_json(*s);
  }
  return kappa_lottery_json(std::get<KappaLottery>(lottery));
}

Json value_json(const CriterionValue& value) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(const Rat& r) const { return format_rational(r); }
    Json operator()(const BinaryUtility& u) const {
      Json j;
      j["top"] = format_rational(u.top().value());
      j["bottom"] = format_rational(u.bottom().value());
      return j;
    }
    Json operator()(const KappaRank& k) const { return to_string(k); }
  };
  return std::visit(Visitor{}, value);
}

SimpleLottery parse_simple_lottery(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    throw ParseError(where + ": expected an array of lottery entries");
  }
  std::vector<LotteryEntry> entries;
  for (const Json& e : j) {
    if (!e.is_object()) {
      throw ParseError(where + ": every lottery entry must be an object");
    }
    entries.push_back(LotteryEntry{
        Utility(get_rational(member(e, "utility", where), where + ".utility")),
        Degree(get_rational(member(e, "degree", where), where + ".degree"))});
  }
  return SimpleLottery::make(std::move(entries));
}

KappaLottery parse_kappa_lottery(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    throw ParseError(where + ": expected an array of lottery entries");
  }
  std::vector<KappaEntry> entries;
  for (const Json& e : j) {
    if (!e.is_object()) {
      throw ParseError(where + ": every lottery entry must be an object");
    }
    entries.push_back(
        KappaEntry{get_rank(member(e, "mu", where), where + ".mu"),
                   get_rank(member(e, "kappa", where), where + ".kappa")});
  }
  return KappaLottery::make(std::move(entries));
}

CriterionValue parse_value(const Json& j, const Criterion& criterion,
                           const std::string& where) {
  switch (criterion.id) {
    case CriterionId::Ln:
    case CriterionId::LPi:
      if (!j.is_null()) {
        throw ParseError(where +
                         ": expected null for a purely comparative criterion");
      }
      return std::monostate{};
    case CriterionId::Pu: {
      if (!j.is_object()) {
        throw ParseError(where +
                         ": expected an object with \"top\" and \"bottom\"");
      }
      return BinaryUtility(
          Degree(get_rational(member(j, "top", where), where + ".top")),
          Degree(get_rational(member(j, "bottom", where), where + ".bottom")));
    }
    case CriterionId::Omeu:
      return get_rank(j, where);
    default:
      return get_rational(j, where);
  }
  throw ParseError(where + ": unrecognized value");
}

}  // namespace

TreeDocument parse_tree_document(const std::string& text) {
  Json doc = parse_json(text);
  if (!doc.is_object()) {
    throw ParseError("tree document: expected a JSON object");
  }
  if (get_string(doc, "format", "tree document") != "posdec-tree") {
    throw ParseError("tree document: field \"format\" must be \"posdec-tree\"");
  }
  check_version(doc, "tree document");
  const std::string mode_name = get_string(doc, "mode", "tree document");
  TreeMode mode;
  if (mode_name == "possibilistic") {
    mode = TreeMode::Possibilistic;
  } else if (mode_name == "kappa") {
    mode = TreeMode::Kappa;
  } else {
    throw ParseError(
        "tree document: field \"mode\" must be \"possibilistic\" or "
        "\"kappa\"");
  }
  const std::string root = get_string(doc, "root", "tree document");
  if (root.empty()) {
    throw ParseError("tree document: field \"root\" must be non-empty");
  }
  std::string comment;
  if (auto it = doc.find("comment"); it != doc.end()) {
    if (!it->is_string()) {
      throw ParseError("tree document: field \"comment\" must be a string");
    }
    comment = it->get<std::string>();
  }
  const Json& nodes = member(doc, "nodes", "tree document");
  if (!nodes.is_array()) {
    throw ParseError("tree document: field \"nodes\" must be an array");
  }
  DecisionTree tree(mode, root);
  for (const Json& node : nodes) {
    if (!node.is_object()) {
      throw ParseError("tree document: every node must be an object");
    }
    const std::string id = get_string(node, "id", "node");
    if (id.empty()) {
      throw ParseError("node: field \"id\" must be non-empty");
    }
    const std::string where = "node \"" + id + "\"";
    if (tree.contains(id)) {
      throw ParseError(where + ": duplicate id");
    }
    const std::string kind = get_string(node, "kind", where);
    if (kind == "decision") {
      const Json& children = member(node, "children", where);
      if (!children.is_array()) {
        throw ParseError(where + ": \"children\" must be an array of ids");
      }
      DecisionNode d;
      for (const Json& c : children) {
        if (!c.is_string()) {
          throw ParseError(where + ": \"children\" must be an array of ids");
        }
        d.choices.push_back(c.get<std::string>());
      }
      tree.add(id, std::move(d));
    } else if (kind == "chance") {
      const Json& edges = member(node, "edges", where);
      if (!edges.is_array()) {
        throw ParseError(where + ": \"edges\" must be an array");
      }
      ChanceNode c;
      for (const Json& edge : edges) {
        if (!edge.is_object()) {
          throw ParseError(where + ": every edge must be an object");
        }
        const std::string edge_where = where + " edge";
        ChanceEdge e{get_string(edge, "child", edge_where),
                     get_weight(member(edge, "degree", edge_where), mode,
                                edge_where + " degree")};
        c.edges.push_back(std::move(e));
      }
      tree.add(id, std::move(c));
    } else if (kind == "leaf") {
      tree.add(id, LeafNode{get_leaf_value(node, where)});
    } else {
      throw ParseError(
          where + ": \"kind\" must be \"decision\", \"chance\", or \"leaf\"");
    }
  }
  return TreeDocument{std::move(tree), std::move(comment)};
}

std::string format_tree_document(const TreeDocument& doc) {
  Json out;
  out["format"] = "posdec-tree";
  out["version"] = 1;
  out["mode"] =
      doc.tree.mode() == TreeMode::Kappa ? "kappa" : "possibilistic";
  out["root"] = doc.tree.root();
  if (!doc.comment.empty()) {
    out["comment"] = doc.comment;
  }
  Json nodes = Json::array();
  for (const NodeId& id : doc.tree.ids()) {
    Json n;
    n["id"] = id;
    const Node& node = doc.tree.at(id);
    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      n["kind"] = "decision";
      n["children"] = d->choices;
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      n["kind"] = "chance";
      Json edges = Json::array();
      for (const ChanceEdge& e : c->edges) {
        Json je;
        je["child"] = e.child;
        je["degree"] = weight_to_json(e.weight);
        edges.push_back(std::move(je));
      }
      n["edges"] = std::move(edges);
    } else {
      const auto& leaf = std::get<LeafNode>(node);
      n["kind"] = "leaf";
      if (const auto* u = std::get_if<Utility>(&leaf.value)) {
        n["utility"] = format_rational(u->value());
      } else if (const auto* p = std::get_if<BinaryUtility>(&leaf.value)) {
        Json pair;
        pair["top"] = format_rational(p->top().value());
        pair["bottom"] = format_rational(p->bottom().value());
        n["utility_pair"] = std::move(pair);
      } else {
        n["mu"] = to_string(std::get<KappaRank>(leaf.value));
      }
    }
    nodes.push_back(std::move(n));
  }
  out["nodes"] = std::move(nodes);
  return out.dump(2) + "\n";
}

Strategy parse_strategy_document(const std::string& text) {
  Json doc = parse_json(text);
  if (!doc.is_object()) {
    throw ParseError("strategy document: expected a JSON object");
  }
  if (get_string(doc, "format", "strategy document") != "posdec-strategy") {
    throw ParseError(
        "strategy document: field \"format\" must be \"posdec-strategy\"");
  }
  check_version(doc, "strategy document");
  const Json& choices = member(doc, "choices", "strategy document");
  if (!choices.is_object()) {
    throw ParseError("strategy document: field \"choices\" must be an object");
  }
  Strategy strategy;
  for (const auto& [decision, value] : choices.items()) {
    if (!value.is_string()) {
      throw ParseError("strategy document: choice for \"" + decision +
                       "\" must be a chance node id or \"bottom\"");
    }
    const std::string chosen = value.get<std::string>();
    if (chosen == "bottom") {
      continue;
    }
    strategy.choose(decision, chosen);
  }
  return strategy;
}

std::string format_strategy_document(const Strategy& strategy,
                                     const DecisionTree& tree) {
  Json out;
  out["format"] = "posdec-strategy";
  out["version"] = 1;
  Json choices = Json::object();
  for (const NodeId& id : tree.ids()) {
    if (!tree.is_decision(id)) {
      continue;
    }
    const auto chosen = strategy.choice(id);
    choices[id] = chosen ? *chosen : "bottom";
  }
  out["choices"] = std::move(choices);
  return out.dump(2) + "\n";
}

std::string format_witness_document(const MonotonicityViolation& violation) {
  Json out;
  out["format"] = "posdec-witness";
  out["version"] = 1;
  out["criterion"] = to_string(violation.trial.criterion.id);
  if (violation.trial.criterion.embedding) {
    out["embedding"] = to_string(*violation.trial.criterion.embedding);
  }
  const auto* poss =
      std::get_if<PossibilisticTrial>(&violation.trial.payload);
  out["kind"] = poss ? "possibilistic" : "kappa";
  out["direction"] = violation.reversed ? "reversed" : "forward";
  if (poss) {
    out["alpha"] = format_rational(poss->alpha.value());
    out["beta"] = format_rational(poss->beta.value());
    out["left"] = simple_lottery_json(poss->left);
    out["right"] = simple_lottery_json(poss->right);
    out["shared"] = simple_lottery_json(poss->shared);
  } else {
    const auto& k =
        std::get<KappaMonotonicityTrial>(violation.trial.payload);
    out["alpha"] = to_string(k.alpha);
    out["beta"] = to_string(k.beta);
    out["left"] = kappa_lottery_json(k.left);
    out["right"] = kappa_lottery_json(k.right);
    out["shared"] = kappa_lottery_json(k.shared);
  }
  Json base;
  base["left"] = value_json(violation.base_left);
  base["right"] = value_json(violation.base_right);
  out["base"] = std::move(base);
  Json composed;
  composed["left"] = value_json(violation.composed_left);
  composed["right"] = value_json(violation.composed_right);
  composed["left_lottery"] = reduced_json(violation.reduced_left);
  composed["right_lottery"] = reduced_json(violation.reduced_right);
  out["composed"] = std::move(composed);
  return out.dump(2) + "\n";
}

MonotonicityViolation parse_witness_document(const std::string& text) {
  Json doc = parse_json(text);
  if (!doc.is_object()) {
    throw ParseError("witness document: expected a JSON object");
  }
  if (get_string(doc, "format", "witness document") != "posdec-witness") {
    throw ParseError(
        "witness document: field \"format\" must be \"posdec-witness\"");
  }
  check_version(doc, "witness document");
  CriterionId id;
  try {
    id = parse_criterion_id(get_string(doc, "criterion", "witness document"));
  } catch (const DomainError& e) {
    throw ParseError(std::string("witness document: ") + e.what());
  }
  std::optional<EmbedMode> embedding;
  if (auto it = doc.find("embedding"); it != doc.end()) {
    if (!it->is_string()) {
      throw ParseError(
          "witness document: field \"embedding\" must be a string");
    }
    try {
      embedding = parse_embed_mode(it->get<std::string>());
    } catch (const DomainError& e) {
      throw ParseError(std::string("witness document: ") + e.what());
    }
  }
  const Criterion criterion(id, embedding);
  const std::string kind = get_string(doc, "kind", "witness document");
  MonotonicityTrial trial = [&]() -> MonotonicityTrial {
    if (kind == "possibilistic") {
      return {criterion,
              PossibilisticTrial{
                  parse_simple_lottery(member(doc, "left", "witness document"),
                                       "left"),
                  parse_simple_lottery(member(doc, "right", "witness document"),
                                       "right"),
                  parse_simple_lottery(
                      member(doc, "shared", "witness document"), "shared"),
                  Degree(get_rational(member(doc, "alpha", "witness document"),
                                      "alpha")),
                  Degree(get_rational(member(doc, "beta", "witness document"),
                                      "beta"))}};
    }
    if (kind == "kappa") {
      return {criterion,
              KappaMonotonicityTrial{
                  parse_kappa_lottery(member(doc, "left", "witness document"),
                                      "left"),
                  parse_kappa_lottery(member(doc, "right", "witness document"),
                                      "right"),
                  parse_kappa_lottery(member(doc, "shared", "witness document"),
                                      "shared"),
                  get_rank(member(doc, "alpha", "witness document"), "alpha"),
                  get_rank(member(doc, "beta", "witness document"), "beta")}};
    }
    throw ParseError(
        "witness document: field \"kind\" must be \"possibilistic\" or "
        "\"kappa\"");
  }();
  const std::string direction =
      get_string(doc, "direction", "witness document");
  if (direction != "forward" && direction != "reversed") {
    throw ParseError(
        "witness document: field \"direction\" must be \"forward\" or "
        "\"reversed\"");
  }
  const Json& base = member(doc, "base", "witness document");
  if (!base.is_object()) {
    throw ParseError("witness document: field \"base\" must be an object");
  }
  const Json& composed = member(doc, "composed", "witness document");
  if (!composed.is_object()) {
    throw ParseError("witness document: field \"composed\" must be an object");
  }
  auto reduced = [&](const char* key) -> ReducedLottery {
    const Json& j = member(composed, key, "composed");
    const std::string where = std::string("composed.") + key;
    if (kind == "possibilistic") {
      return parse_simple_lottery(j, where);
    }
    return parse_kappa_lottery(j, where);
  };
  return MonotonicityViolation{
      std::move(trial),
      direction == "reversed",
      parse_value(member(base, "left", "base"), criterion, "base.left"),
      parse_value(member(base, "right", "base"), criterion, "base.right"),
      parse_value(member(composed, "left", "composed"), criterion,
                  "composed.left"),
      parse_value(member(composed, "right", "composed"), criterion,
                  "composed.right"),
      reduced("left_lottery"),
      reduced("right_lottery")};
}

CriterionId parse_criterion_id(const std::string& name) {
  if (name == "upes") return CriterionId::UPes;
  if (name == "uopt") return CriterionId::UOpt;
  if (name == "pu") return CriterionId::Pu;
  if (name == "ln") return CriterionId::Ln;
  if (name == "lpi") return CriterionId::LPi;
  if (name == "chn") return CriterionId::ChN;
  if (name == "chpi") return CriterionId::ChPi;
  if (name == "omeu") return CriterionId::Omeu;
  throw DomainError("unknown criterion \"" + name +
                    "\" (expected one of upes, uopt, pu, ln, lpi, chn, "
                    "chpi, omeu)");
}

EmbedMode parse_embed_mode(const std::string& name) {
  if (name == "optimistic") return EmbedMode::Optimistic;
  if (name == "pessimistic") return EmbedMode::Pessimistic;
  throw DomainError("unknown embedding \"" + name +
                    "\" (expected \"optimistic\" or \"pessimistic\")");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DomainError("cannot read file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw DomainError("cannot read file: " + path);
  }
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DomainError("cannot write file: " + path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw DomainError("cannot write file: " + path);
  }
}

}  // namespace posdec
