#include "ftcausal/document.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ftcausal {
namespace {

using Json = nlohmann::ordered_json;

const Json& field(const Json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw ParseError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(ptr, "missing field '" + key + "'");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::string as_string(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw ParseError(ptr, "expected a string");
  return j.get<std::string>();
}

int as_int(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ParseError(ptr, "expected an integer");
  return j.get<int>();
}

const Json& as_array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw ParseError(ptr, "expected an array");
  return j;
}

std::vector<std::string> as_strings(const Json& j, const std::string& ptr) {
  std::vector<std::string> out;
  const Json& arr = as_array(j, ptr);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_string(arr[i], ptr + "/" + std::to_string(i)));
  }
  return out;
}

Rational as_rational(const Json& j, const std::string& ptr) {
  if (!j.is_string()) {
    throw ParseError(ptr, "probabilities and coefficients must be \"num/den\" strings");
  }
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(ptr, e.detail());
  }
}

std::vector<Rational> as_rationals(const Json& j, const std::string& ptr) {
  std::vector<Rational> out;
  const Json& arr = as_array(j, ptr);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_rational(arr[i], ptr + "/" + std::to_string(i)));
  }
  return out;
}

Json rationals_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_fraction_string(x));
  return out;
}

// Runs `build`, relabelling validation failures with a location.
template <typename F>
auto located(const std::string& ptr, F&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(ptr, e.what());
  }
}

Scenario scenario_from(const Json& j, const std::string& ptr) {
  std::vector<std::vector<std::string>> contexts;
  const Json& ctx = as_array(field(j, "contexts", ptr), ptr + "/contexts");
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    contexts.push_back(as_strings(ctx[i], ptr + "/contexts/" + std::to_string(i)));
  }
  std::optional<std::vector<std::vector<std::string>>> partition;
  if (const Json* bp = optional_field(j, "bell_partition")) {
    partition.emplace();
    const Json& arr = as_array(*bp, ptr + "/bell_partition");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      partition->push_back(as_strings(arr[i], ptr + "/bell_partition/" + std::to_string(i)));
    }
  }
  auto measurements = as_strings(field(j, "measurements", ptr), ptr + "/measurements");
  auto outcomes = as_strings(field(j, "outcomes", ptr), ptr + "/outcomes");
  return located(ptr, [&] {
    return Scenario(std::move(measurements), std::move(outcomes), std::move(contexts),
                    std::move(partition));
  });
}

Json scenario_json(const Scenario& s) {
  Json out;
  out["measurements"] = s.measurements();
  out["outcomes"] = s.outcomes();
  Json contexts = Json::array();
  for (const auto& ctx : s.contexts()) {
    Json c = Json::array();
    for (int m : ctx) c.push_back(s.measurements()[m]);
    contexts.push_back(c);
  }
  out["contexts"] = contexts;
  if (s.bell_partition()) {
    Json parts = Json::array();
    for (const auto& part : *s.bell_partition()) {
      Json p = Json::array();
      for (int m : part) p.push_back(s.measurements()[m]);
      parts.push_back(p);
    }
    out["bell_partition"] = parts;
  }
  return out;
}

// Measurement indices of a listed context and the context they form.
std::pair<std::vector<int>, int> context_from(const Scenario& s, const Json& j,
                                              const std::string& ptr) {
  std::vector<int> ms;
  for (const auto& id : as_strings(j, ptr)) {
    ms.push_back(located(ptr, [&] { return s.measurement_index(id); }));
  }
  auto c = s.find_context(ms);
  if (!c) throw ParseError(ptr, "not a context of the scenario");
  return {ms, *c};
}

Phenomenon phenomenon_from(const Json& j) {
  const Scenario base = scenario_from(field(j, "scenario", ""), "/scenario");
  const PaddedScenario padded = located("/scenario", [&] { return pad_scenario(base); });
  const std::size_t o = base.outcomes().size();
  std::vector<std::optional<std::vector<Rational>>> rows(base.contexts().size());
  const Json& table = as_array(field(j, "table", ""), "/table");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string ptr = "/table/" + std::to_string(i);
    auto [listed, c] = context_from(base, field(table[i], "context", ptr), ptr + "/context");
    if (rows[c]) throw ParseError(ptr, "context listed twice");
    auto p = as_rationals(field(table[i], "p", ptr), ptr + "/p");
    std::size_t expected = 1;
    for (std::size_t k = 0; k < listed.size(); ++k) expected *= o;
    if (p.size() != expected) {
      throw ParseError(ptr + "/p", "expected " + std::to_string(expected) + " entries, got " +
                                       std::to_string(p.size()));
    }
    // Re-lay the row over the scenario's declared order of this context.
    const auto& declared = base.contexts()[c];
    std::vector<Rational> row(expected);
    std::vector<int> digits(listed.size());
    for (std::size_t k = 0; k < expected; ++k) {
      std::size_t rest = k;
      for (int d = static_cast<int>(listed.size()) - 1; d >= 0; --d) {
        digits[d] = static_cast<int>(rest % o);
        rest /= o;
      }
      std::size_t target = 0;
      for (int m : declared) {
        const auto pos = std::find(listed.begin(), listed.end(), m) - listed.begin();
        target = target * o + digits[pos];
      }
      row[target] = p[k];
    }
    rows[c] = std::move(row);
  }
  std::vector<std::vector<Rational>> declared_rows;
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (!rows[c]) throw ParseError("/table", "context " + std::to_string(c + 1) + " has no row");
    declared_rows.push_back(std::move(*rows[c]));
  }
  std::optional<std::vector<Rational>> weights;
  if (const Json* w = optional_field(j, "context_weights")) {
    std::vector<std::optional<Rational>> slots(base.contexts().size());
    const Json& arr = as_array(*w, "/context_weights");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ptr = "/context_weights/" + std::to_string(i);
      auto [listed, c] = context_from(base, field(arr[i], "context", ptr), ptr + "/context");
      if (slots[c]) throw ParseError(ptr, "context listed twice");
      slots[c] = as_rational(field(arr[i], "w", ptr), ptr + "/w");
    }
    weights.emplace();
    for (auto& s : slots) {
      if (!s) throw ParseError("/context_weights", "every context needs a weight");
      weights->push_back(std::move(*s));
    }
  }
  return located("/table", [&] {
    return Phenomenon::from_context_rows(padded, declared_rows, std::move(weights));
  });
}

Json context_json(const Scenario& s, int c) {
  Json out = Json::array();
  for (int m : s.contexts()[c]) out.push_back(s.measurements()[m]);
  return out;
}

Json phenomenon_json(const Phenomenon& p) {
  const Scenario& s = p.scenario().base();
  Json out;
  out["scenario"] = scenario_json(s);
  Json table = Json::array();
  for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
    Json row;
    row["context"] = context_json(s, c);
    row["p"] = rationals_json(p.context_row(c));
    table.push_back(row);
  }
  out["table"] = table;
  if (p.context_weights()) {
    Json weights = Json::array();
    for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
      Json w;
      w["context"] = context_json(s, c);
      w["w"] = to_fraction_string((*p.context_weights())[c]);
      weights.push_back(w);
    }
    out["context_weights"] = weights;
  }
  return out;
}

NodeRole role_from(const std::string& name, const std::string& ptr) {
  if (name == "setting") return NodeRole::kSetting;
  if (name == "outcome") return NodeRole::kOutcome;
  if (name == "latent") return NodeRole::kLatent;
  throw ParseError(ptr, "unknown role '" + name + "'");
}

Dag graph_from(const Json& j) {
  std::vector<Node> nodes;
  const Json& arr = as_array(field(j, "nodes", ""), "/nodes");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ptr = "/nodes/" + std::to_string(i);
    Node node;
    node.id = as_string(field(arr[i], "id", ptr), ptr + "/id");
    if (const Json* r = optional_field(arr[i], "role")) node.role = role_from(as_string(*r, ptr + "/role"), ptr + "/role");
    if (const Json* s = optional_field(arr[i], "slot")) {
      node.slot = as_int(*s, ptr + "/slot") - 1;
      if (node.slot < 0) throw ParseError(ptr + "/slot", "slots are numbered from 1");
    }
    if (node.role != NodeRole::kLatent && node.slot < 0) {
      throw ParseError(ptr, "setting and outcome nodes need a slot");
    }
    if (const Json* c = optional_field(arr[i], "cardinality")) {
      node.cardinality = as_int(*c, ptr + "/cardinality");
    } else if (node.role != NodeRole::kLatent) {
      node.cardinality = 2;
    }
    nodes.push_back(std::move(node));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (const Json* e = optional_field(j, "edges")) {
    const Json& earr = as_array(*e, "/edges");
    for (std::size_t i = 0; i < earr.size(); ++i) {
      const std::string ptr = "/edges/" + std::to_string(i);
      auto pair = as_strings(earr[i], ptr);
      if (pair.size() != 2) throw ParseError(ptr, "an edge is a [from, to] pair");
      edges.emplace_back(pair[0], pair[1]);
    }
  }
  return located("/edges", [&] { return Dag(std::move(nodes), edges); });
}

Json graph_json(const Dag& g, bool observed_cardinalities) {
  Json out;
  Json nodes = Json::array();
  for (const auto& node : g.nodes()) {
    Json n;
    n["id"] = node.id;
    n["role"] = std::string(role_name(node.role));
    if (node.role != NodeRole::kLatent) n["slot"] = node.slot + 1;
    if (observed_cardinalities || node.role == NodeRole::kLatent) n["cardinality"] = node.cardinality;
    nodes.push_back(n);
  }
  out["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({g.node(u).id, g.node(v).id});
  out["edges"] = edges;
  return out;
}

ModelDocument model_from(const Json& j) {
  const Scenario base = scenario_from(field(j, "scenario", ""), "/scenario");
  const PaddedScenario padded = located("/scenario", [&] { return pad_scenario(base); });
  const Dag declared = graph_from(j);
  const Dag g = located("/nodes", [&] { return bind_to_scenario(declared, padded); });
  const Json& arr = field(j, "nodes", "");
  for (int v = 0; v < g.size(); ++v) {
    if (g.node(v).role == NodeRole::kLatent) continue;
    if (const Json* c = optional_field(arr[v], "cardinality")) {
      if (c->get<int>() != g.node(v).cardinality) {
        throw ParseError("/nodes/" + std::to_string(v) + "/cardinality",
                         "does not match the scenario (" + std::to_string(g.node(v).cardinality) +
                             ")");
      }
    }
  }
  const Json* cpts = optional_field(j, "cpts");
  if (cpts && !cpts->is_object()) throw ParseError("/cpts", "expected an object");
  std::vector<Cpt> tables;
  for (int v = 0; v < g.size(); ++v) {
    const Node& node = g.node(v);
    const std::string ptr = "/cpts/" + node.id;
    const Json* entry = cpts ? optional_field(*cpts, node.id) : nullptr;
    if (!entry) {
      if (node.role == NodeRole::kSetting && g.parents(v) == 0) {
        tables.push_back({{}, {std::vector<Rational>(node.cardinality, Rational(1, node.cardinality))}});
        continue;
      }
      throw ParseError("/cpts", "missing CPT for '" + node.id + "'");
    }
    Cpt cpt;
    if (const Json* ps = optional_field(*entry, "parents")) {
      for (const auto& id : as_strings(*ps, ptr + "/parents")) {
        cpt.parents.push_back(located(ptr + "/parents", [&] { return g.index_of(id); }));
      }
    }
    const Json& rows = as_array(field(*entry, "rows", ptr), ptr + "/rows");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      cpt.rows.push_back(as_rationals(rows[r], ptr + "/rows/" + std::to_string(r)));
    }
    tables.push_back(std::move(cpt));
  }
  if (cpts) {
    for (auto it = cpts->begin(); it != cpts->end(); ++it) {
      if (!g.find(it.key())) throw ParseError("/cpts/" + it.key(), "no such node");
    }
  }
  return {padded, located("/cpts", [&] { return CausalModel(g, std::move(tables)); })};
}

Json model_json(const ModelDocument& doc) {
  const Dag& g = doc.model.graph();
  Json out;
  out["scenario"] = scenario_json(doc.scenario.base());
  Json graph = graph_json(g, false);
  out["nodes"] = graph["nodes"];
  out["edges"] = graph["edges"];
  Json cpts = Json::object();
  for (int v = 0; v < g.size(); ++v) {
    const Cpt& cpt = doc.model.cpt(v);
    Json entry;
    Json parents = Json::array();
    for (int p : cpt.parents) parents.push_back(g.node(p).id);
    entry["parents"] = parents;
    Json rows = Json::array();
    for (const auto& row : cpt.rows) rows.push_back(rationals_json(row));
    entry["rows"] = rows;
    cpts[g.node(v).id] = entry;
  }
  out["cpts"] = cpts;
  return out;
}

FunctionalDocument functional_from(const Json& j) {
  Scenario s = scenario_from(field(j, "scenario", ""), "/scenario");
  InequalityFunctional f;
  f.name = as_string(field(j, "name", ""), "/name");
  const std::string sense = optional_field(j, "sense") ? as_string(j["sense"], "/sense") : "upper";
  if (sense == "upper") {
    f.sense = BoundSense::kUpper;
  } else if (sense == "lower") {
    f.sense = BoundSense::kLower;
  } else {
    throw ParseError("/sense", "sense must be 'upper' or 'lower'");
  }
  const Json& terms = as_array(field(j, "terms", ""), "/terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string ptr = "/terms/" + std::to_string(i);
    FunctionalTerm t;
    t.measurements = context_from(s, field(terms[i], "context", ptr), ptr + "/context").first;
    for (const auto& label : as_strings(field(terms[i], "outcomes", ptr), ptr + "/outcomes")) {
      t.outcomes.push_back(located(ptr + "/outcomes", [&] { return s.outcome_index(label); }));
    }
    if (t.outcomes.size() != t.measurements.size()) {
      throw ParseError(ptr + "/outcomes", "one outcome per measurement of the context");
    }
    t.coefficient = as_rational(field(terms[i], "coefficient", ptr), ptr + "/coefficient");
    f.terms.push_back(std::move(t));
  }
  // A "bound" field, if present, is ignored: bounds are always recomputed.
  f = located("/terms", [&] { return with_classical_bound(s, std::move(f)); });
  return {std::move(s), std::move(f)};
}

Json functional_json(const FunctionalDocument& doc) {
  const Scenario& s = doc.scenario;
  Json out;
  out["name"] = doc.functional.name;
  out["sense"] = doc.functional.sense == BoundSense::kUpper ? "upper" : "lower";
  out["scenario"] = scenario_json(s);
  Json terms = Json::array();
  for (const auto& t : doc.functional.terms) {
    Json term;
    Json ctx = Json::array(), outs = Json::array();
    for (int m : t.measurements) ctx.push_back(s.measurements()[m]);
    for (int o : t.outcomes) outs.push_back(s.outcomes()[o]);
    term["context"] = ctx;
    term["outcomes"] = outs;
    term["coefficient"] = to_fraction_string(t.coefficient);
    terms.push_back(term);
  }
  out["terms"] = terms;
  out["bound"] = to_fraction_string(doc.functional.bound);
  return out;
}

CISet ci_set_from(const Json& j) {
  CISet out = located("/universe", [&] { return CISet(as_strings(field(j, "universe", ""), "/universe")); });
  std::set<std::string> seen;
  for (const auto& v : out.universe()) {
    if (!seen.insert(v).second) throw ParseError("/universe", "duplicate variable '" + v + "'");
  }
  const Json& arr = as_array(field(j, "statements", ""), "/statements");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ptr = "/statements/" + std::to_string(i);
    CIStatement s;
    located(ptr, [&] {
      s.x = out.names_to_set(as_strings(field(arr[i], "x", ptr), ptr + "/x"));
      s.y = out.names_to_set(as_strings(field(arr[i], "y", ptr), ptr + "/y"));
      s.z = optional_field(arr[i], "z") ? out.names_to_set(as_strings(arr[i]["z"], ptr + "/z")) : 0;
      return 0;
    });
    Derivation d;
    if (const Json* a = optional_field(arr[i], "axiom")) {
      d.axiom = located(ptr + "/axiom", [&] { return parse_axiom(as_string(*a, ptr + "/axiom")); });
    }
    if (const Json* ps = optional_field(arr[i], "premises")) {
      const Json& parr = as_array(*ps, ptr + "/premises");
      for (std::size_t k = 0; k < parr.size(); ++k) {
        const int idx = as_int(parr[k], ptr + "/premises/" + std::to_string(k));
        if (idx < 0 || static_cast<std::size_t>(idx) >= i) {
          throw ParseError(ptr + "/premises/" + std::to_string(k), "premise must precede the statement");
        }
        d.premises.push_back(static_cast<std::size_t>(idx));
      }
    }
    const bool inserted = located(ptr, [&] { return out.insert(s, std::move(d)); });
    if (!inserted) throw ParseError(ptr, "duplicate statement");
  }
  return out;
}

Json ci_set_json(const CISet& set) {
  Json out;
  out["universe"] = set.universe();
  Json statements = Json::array();
  auto names = [&](VarSet s) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < set.universe().size(); ++i) {
      if ((s >> i) & 1u) arr.push_back(set.universe()[i]);
    }
    return arr;
  };
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& s = set.statement(i);
    Json st;
    st["x"] = names(s.x);
    st["y"] = names(s.y);
    st["z"] = names(s.z);
    st["axiom"] = std::string(axiom_name(set.derivation(i).axiom));
    st["premises"] = set.derivation(i).premises;
    statements.push_back(st);
  }
  out["statements"] = statements;
  return out;
}

DocumentKind kind_from(const std::string& name) {
  for (DocumentKind k : {DocumentKind::kScenario, DocumentKind::kPhenomenon, DocumentKind::kGraph,
                         DocumentKind::kModel, DocumentKind::kFunctional, DocumentKind::kCiSet}) {
    if (kind_name(k) == name) return k;
  }
  throw ParseError("/kind", "unknown document kind '" + name + "'");
}

}  // namespace

std::string_view kind_name(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::kScenario:
      return "scenario";
    case DocumentKind::kPhenomenon:
      return "phenomenon";
    case DocumentKind::kGraph:
      return "graph";
    case DocumentKind::kModel:
      return "model";
    case DocumentKind::kFunctional:
      return "functional";
    case DocumentKind::kCiSet:
      return "ci-set";
  }
  return "scenario";
}

DocumentKind kind_of(const Document& doc) {
  return static_cast<DocumentKind>(doc.index());
}

Document parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!j.is_object()) throw ParseError("", "document must be a JSON object");
  if (as_string(field(j, "format", ""), "/format") != "ftcausal") {
    throw ParseError("/format", "not an ftcausal document");
  }
  const int version = as_int(field(j, "version", ""), "/version");
  if (version != kDocumentVersion) {
    throw ParseError("/version", "unsupported version " + std::to_string(version));
  }
  switch (kind_from(as_string(field(j, "kind", ""), "/kind"))) {
    case DocumentKind::kScenario:
      return scenario_from(j, "");
    case DocumentKind::kPhenomenon:
      return phenomenon_from(j);
    case DocumentKind::kGraph:
      return graph_from(j);
    case DocumentKind::kModel:
      return model_from(j);
    case DocumentKind::kFunctional:
      return functional_from(j);
    case DocumentKind::kCiSet:
      return ci_set_from(j);
  }
  throw ParseError("/kind", "unknown document kind");
}

std::string serialize(const Document& doc) {
  Json out;
  out["format"] = "ftcausal";
  out["version"] = kDocumentVersion;
  out["kind"] = std::string(kind_name(kind_of(doc)));
  Json body = std::visit(
      [](const auto& d) -> Json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Scenario>) return scenario_json(d);
        if constexpr (std::is_same_v<T, Phenomenon>) return phenomenon_json(d);
        if constexpr (std::is_same_v<T, Dag>) return graph_json(d, true);
        if constexpr (std::is_same_v<T, ModelDocument>) return model_json(d);
        if constexpr (std::is_same_v<T, FunctionalDocument>) return functional_json(d);
        if constexpr (std::is_same_v<T, CISet>) return ci_set_json(d);
      },
      doc);
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document load_document(const std::string& path) { return parse_document(read_file(path)); }

}  // namespace ftcausal
