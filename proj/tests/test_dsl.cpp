#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/dsl.hpp"

using namespace dcat;

namespace {

Document random_document(SplitMix64& rng) {
  Document d;
  int nsets = 1 + static_cast<int>(rng.below(3));
  std::vector<std::string> set_names;
  std::vector<FinSet> sets;
  for (int i = 0; i < nsets; ++i) {
    int sz = static_cast<int>(rng.below(4));
    std::vector<std::string> elems;
    for (int e = 0; e < sz; ++e) elems.push_back("e" + std::to_string(e));
    std::string nm = "set" + std::to_string(i);
    sets.push_back(FinSet(nm, elems));
    set_names.push_back(nm);
    put_finset(d, nm, sets.back());
  }
  // A few functions between the sets where possible.
  int nfn = 0;
  for (int i = 0; i < 3; ++i) {
    const FinSet& a = sets[rng.below(sets.size())];
    const FinSet& b = sets[rng.below(sets.size())];
    if (a.size() > 0 && b.size() == 0) continue;
    std::vector<int> t(a.size());
    for (auto& v : t) v = static_cast<int>(rng.below(std::max(1, b.size())));
    put_function(d, "fn" + std::to_string(nfn++), FinFunction(a, b, t), a.name(),
                 b.name());
  }
  // Occasionally a span and a report.
  if (rng.below(2)) {
    FinSet apex = canonical_set(static_cast<int>(rng.below(3)));
    const FinSet& l = sets[0];
    if (l.size() > 0 || apex.size() == 0) {
      std::vector<int> lt(apex.size(), 0), rt(apex.size(), 0);
      put_span(d, "sp",
               SetSpan(FinFunction(apex, l, lt), FinFunction(apex, l, rt)));
    }
  }
  if (rng.below(2)) {
    ReportEntry r;
    r.verdict = rng.below(2) ? "pass" : "fail";
    r.cases = static_cast<long long>(rng.below(100));
    if (r.verdict == "fail") r.failures.push_back("witness " + std::to_string(rng.below(10)));
    put_report(d, "report", r);
  }
  return d;
}

}  // namespace

TEST_CASE("json parser handles the strict subset") {
  Json v = parse_json("{\"a\": [1, 2, 3], \"b\": \"x\\ny\", \"c\": true}");
  CHECK(v.at("a").array().size() == 3);
  CHECK(v.at("b").str() == "x\ny");
  CHECK(print_json(parse_json(print_json(v))) == print_json(v));
  CHECK_THROWS_AS(parse_json("{"), Error);
  CHECK_THROWS_AS(parse_json("[1,]"), Error);
  CHECK_THROWS_AS(parse_json("{\"a\" 1}"), Error);
  try {
    parse_json("{\n  \"a\": !\n}");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::syntax_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("empty and small documents round trip") {
  Document empty = parse_document("{\"version\":\"1\",\"entries\":{}}");
  CHECK(empty.entries.empty());
  std::string printed = print_document(empty);
  CHECK(print_document(parse_document(printed)) == printed);

  Document d = parse_document(
      "{\"version\":\"1\",\"entries\":{\"s\":{\"kind\":\"finset\",\"elements\":"
      "[\"a\",\"b\"]}}}");
  CHECK(doc_finset(d, "s").size() == 2);
  CHECK(print_document(parse_document(print_document(d))) == print_document(d));
}

TEST_CASE("reference errors name the missing entry") {
  std::string text =
      "{\"version\":\"1\",\"entries\":{"
      "\"sp\":{\"kind\":\"span\",\"left\":\"missing\",\"right\":\"missing\"}}}";
  try {
    parse_document(text);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::reference_error);
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
}

TEST_CASE("randomized documents round trip byte-exactly") {
  SplitMix64 rng(2024);
  for (int rep = 0; rep < 1000; ++rep) {
    Document d = random_document(rng);
    std::string printed = print_document(d);
    Document back = parse_document(printed);
    CHECK(print_document(back) == printed);
  }
}

TEST_CASE("typed values survive document round trips") {
  // Span: structure preserved under print/parse (names become entry-derived).
  FinSet x = canonical_set(2);
  FinSet apex("s", {"s0", "s1", "s2"});
  SetSpan sp(FinFunction(apex, x, {0, 1, 1}), FinFunction(apex, x, {1, 0, 1}));
  Document d;
  put_span(d, "m", sp);
  Document back = parse_document(print_document(d));
  SetSpan sp2 = doc_span(back, "m");
  CHECK(sp2.apex.elements() == sp.apex.elements());
  CHECK(sp2.left.table == sp.left.table);
  CHECK(sp2.right.table == sp.right.table);

  // Family proarrow.
  FamObject fx{canonical_index_set(2),
               {SpanDouble::ob(canonical_set(1)), SpanDouble::ob(canonical_set(2))}};
  FamProarrow fam{fx, fx, SetSpan::identity(fx.indexing), {}};
  fam.components.push_back(SpanDouble::pro(SetSpan::identity(canonical_set(1))));
  fam.components.push_back(SpanDouble::pro(SetSpan::identity(canonical_set(2))));
  Document d2;
  put_family_proarrow(d2, "fam", fam);
  Document back2 = parse_document(print_document(d2));
  FamProarrow fam2 = doc_family_proarrow(back2, "fam");
  CHECK(fam2.indexing_span.apex.elements() == fam.indexing_span.apex.elements());
  CHECK(fam2.components.size() == fam.components.size());

  // Model: the Boolean model passes after a round trip.
  Document d3;
  put_theory(d3, "lcmon", builtin_lcmon_theory());
  put_model(d3, "bool", boolean_lcmon_model(), "lcmon");
  Document back3 = parse_document(print_document(d3));
  ModelData m = doc_model(back3, "bool");
  CHECK(check_model(m).pass());

  // Transformation.
  Document d4;
  put_theory(d4, "lcmon", builtin_lcmon_theory());
  put_model(d4, "bool", boolean_lcmon_model(), "lcmon");
  put_transformation(d4, "idt", identity_transformation(boolean_lcmon_model()),
                     "bool", "bool");
  Document back4 = parse_document(print_document(d4));
  TransformationData t = doc_transformation(back4, "idt");
  CHECK(check_transformation(t).pass());
}

TEST_CASE("canonical printing is stable under key reordering") {
  std::string a =
      "{\"entries\":{\"s\":{\"elements\":[\"a\"],\"kind\":\"finset\"}},"
      "\"version\":\"1\"}";
  std::string b =
      "{\"version\":\"1\",\"entries\":{\"s\":{\"kind\":\"finset\",\"elements\":"
      "[\"a\"]}}}";
  CHECK(print_document(parse_document(a)) == print_document(parse_document(b)));
}
