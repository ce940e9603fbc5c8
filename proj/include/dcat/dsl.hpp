#pragma once

#include <variant>

#include "dcat/theory.hpp"

namespace dcat {

// ---------------------------------------------------------------------------
// JSON subset: objects, arrays, strings, nonnegative integers, booleans.
// Objects preserve member order; canonical printing uses two-space indents
// and LF newlines.

struct Json;
using JsonArray = std::vector<Json>;
using JsonMembers = std::vector<std::pair<std::string, Json>>;

struct Json {
  std::variant<bool, long long, std::string, JsonArray, JsonMembers> value;

  Json() : value(JsonMembers{}) {}
  Json(bool b) : value(b) {}
  Json(long long n) : value(n) {}
  Json(int n) : value(static_cast<long long>(n)) {}
  Json(std::string s) : value(std::move(s)) {}
  Json(const char* s) : value(std::string(s)) {}
  Json(JsonArray a) : value(std::move(a)) {}
  Json(JsonMembers m) : value(std::move(m)) {}

  bool is_object() const { return std::holds_alternative<JsonMembers>(value); }
  bool is_array() const { return std::holds_alternative<JsonArray>(value); }
  bool is_string() const { return std::holds_alternative<std::string>(value); }
  bool is_number() const { return std::holds_alternative<long long>(value); }
  const JsonMembers& members() const;
  const JsonArray& array() const;
  const std::string& str() const;
  long long num() const;
  /// Object member lookup; SchemaError when absent.
  const Json& at(const std::string& key) const;
  const Json* find(const std::string& key) const;

  bool operator==(const Json&) const = default;
};

/// Parses the JSON subset; SyntaxError diagnostics carry line, column, and
/// the expected-token set.
Json parse_json(const std::string& text);
/// Canonical printing: 2-space indentation, LF newlines, members in stored
/// order. print/parse is the identity on parsed values.
std::string print_json(const Json& v);

// ---------------------------------------------------------------------------
// Documents: named, typed entries with by-name cross references.

struct FinSetEntry {
  std::vector<std::string> elements;
};
struct FunctionEntry {
  std::string dom, cod;
  std::map<std::string, std::string> table;
};
struct SpanEntry {
  std::string left, right;  // function entry names sharing a domain
};
struct FamilyObjectEntry {
  std::string indexing;                        // finset entry
  std::map<std::string, std::string> assignment;  // index label -> finset entry
};
struct FamilyProarrowEntry {
  std::string src, dst;   // family-object entries
  std::string span;       // span entry (indexing span)
  std::map<std::string, std::string> components;  // apex label -> span entry
};
struct TheoryEntry {
  TheoryPresentation presentation;
  bool operator==(const TheoryEntry& o) const;
};
struct ModelEntry {
  std::string theory;  // theory entry name
  std::map<std::string, std::string> objects;  // generator -> finset entry
  std::map<std::string, std::string> atomics;  // atomic key -> span entry
  std::map<std::string, std::map<std::string, std::string>> cells;
  std::vector<std::tuple<std::string, std::string, std::map<std::string, std::string>>>
      laxators;  // (atomic key, atomic key, table)
  std::map<std::string, std::map<std::string, std::string>> unitors;
  // Overrides at product-word pairs, words as JSON.
  std::vector<std::tuple<Json, Json, std::map<std::string, std::string>>> overrides;
};
struct TransformationEntry {
  std::string source, target;  // model entries
  std::map<std::string, std::map<std::string, std::string>> components;
  std::map<std::string, std::map<std::string, std::string>> naturality;
};
struct ReportEntry {
  std::string verdict;  // "pass" | "fail"
  long long cases = 0;
  std::vector<std::string> failures;
};

using EntryValue =
    std::variant<FinSetEntry, FunctionEntry, SpanEntry, FamilyObjectEntry,
                 FamilyProarrowEntry, TheoryEntry, ModelEntry, TransformationEntry,
                 ReportEntry>;

struct Document {
  std::string version = "1";
  std::vector<std::pair<std::string, EntryValue>> entries;  // kept sorted by name

  const EntryValue& entry(const std::string& name) const;
  void add(const std::string& name, EntryValue value);  // keeps order, unique names
};

/// Parses a document; diagnostics are SyntaxError (position, expected set),
/// ReferenceError (name), or SchemaError (entry, field).
Document parse_document(const std::string& text);
/// Canonical printing: sorted entry names, fixed key order, 2-space
/// indentation, LF newlines. parse ∘ print is the identity.
std::string print_document(const Document& d);

// Resolution of typed values out of a document.
FinSet doc_finset(const Document& d, const std::string& name);
FinFunction doc_function(const Document& d, const std::string& name);
SetSpan doc_span(const Document& d, const std::string& name);
FamObject doc_family_object(const Document& d, const std::string& name);
FamProarrow doc_family_proarrow(const Document& d, const std::string& name);
TheoryPresentation doc_theory(const Document& d, const std::string& name);
ModelData doc_model(const Document& d, const std::string& name);
TransformationData doc_transformation(const Document& d, const std::string& name);

// Document builders for the concrete types (used by the CLI to emit results).
void put_finset(Document& d, const std::string& name, const FinSet& s);
void put_function(Document& d, const std::string& name, const FinFunction& f,
                  const std::string& dom_name, const std::string& cod_name);
/// Emits the span plus its legs and carrier sets under derived names.
void put_span(Document& d, const std::string& name, const SetSpan& s);
void put_family_object(Document& d, const std::string& name, const FamObject& x);
void put_family_proarrow(Document& d, const std::string& name, const FamProarrow& m);
/// Variant referencing already-present family-object entries, so several
/// proarrows can share endpoints.
void put_family_proarrow_between(Document& d, const std::string& name,
                                 const FamProarrow& m, const std::string& src_name,
                                 const std::string& dst_name);
void put_theory(Document& d, const std::string& name, const TheoryPresentation& t);
void put_model(Document& d, const std::string& name, const ModelData& m,
               const std::string& theory_name);
void put_transformation(Document& d, const std::string& name,
                        const TransformationData& t, const std::string& source_name,
                        const std::string& target_name);
void put_report(Document& d, const std::string& name, const ReportEntry& r);

ReportEntry report_from_universal(const UniversalCheckReport& rep);
ReportEntry report_from_theory(const TheoryCheckReport& rep);

// Word <-> JSON (used inside theory entries and overrides).
Json pro_word_to_json(const ProWordPtr& w);
ProWordPtr pro_word_from_json(const Json& j);
Json cell_word_to_json(const CellWordPtr& w);
CellWordPtr cell_word_from_json(const Json& j);

}  // namespace dcat
