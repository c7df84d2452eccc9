#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "ftcausal/causal_model.hpp"
#include "ftcausal/ci.hpp"
#include "ftcausal/dag.hpp"
#include "ftcausal/factorisability.hpp"
#include "ftcausal/scenario.hpp"

namespace ftcausal {

inline constexpr int kDocumentVersion = 1;

enum class DocumentKind { kScenario, kPhenomenon, kGraph, kModel, kFunctional, kCiSet };

std::string_view kind_name(DocumentKind kind);

// A model is only meaningful against a scenario: observed cardinalities and
// setting values come from it.
struct ModelDocument {
  PaddedScenario scenario;
  CausalModel model;

  bool operator==(const ModelDocument&) const = default;
};

struct FunctionalDocument {
  Scenario scenario;
  InequalityFunctional functional;  // bound recomputed on load

  bool operator==(const FunctionalDocument&) const = default;
};

using Document =
    std::variant<Scenario, Phenomenon, Dag, ModelDocument, FunctionalDocument, CISet>;

DocumentKind kind_of(const Document& doc);

// JSON text with {"format": "ftcausal", "version": 1, "kind": ...}.
// Throws ParseError; the location is a byte offset for syntax errors and a
// JSON pointer for everything else.
Document parse_document(std::string_view text);
std::string serialize(const Document& doc);

std::string read_file(const std::string& path);
Document load_document(const std::string& path);

// Parses and checks the kind.
template <typename T>
T parse_as(std::string_view text, DocumentKind expected) {
  Document doc = parse_document(text);
  if (kind_of(doc) != expected) {
    throw ParseError("/kind", "expected a " + std::string(kind_name(expected)) + " document, got " +
                                  std::string(kind_name(kind_of(doc))));
  }
  return std::get<T>(std::move(doc));
}

}  // namespace ftcausal
