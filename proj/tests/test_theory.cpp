#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/theory.hpp"

using namespace dcat;

namespace {

bool has_violation(const TheoryCheckReport& rep, const std::string& axiom_prefix) {
  for (const auto& v : rep.violations)
    if (v.axiom.rfind(axiom_prefix, 0) == 0) return true;
  return false;
}

// Boolean-carrier CMon category: one object, hom {0,1} with OR, composition
// AND, identity 1.
CMonCategory boolean_cmon() {
  CMonCategory c;
  c.objects = FinSet("pt", {"*"});
  c.homs = {FinSet("bool", {"0", "1"})};
  c.add = {{0, 1, 1, 1}};
  c.zero = {0};
  c.identity = {1};
  c.compose = {{0, 0, 0, 1}};
  return c;
}

}  // namespace

TEST_CASE("the builtin theory has the expected generators and equations") {
  TheoryPresentation t = builtin_lcmon_theory();
  CHECK(t.object_generators.size() == 1);
  CHECK(t.proarrow_generators.empty());
  CHECK(t.cell_generators.size() == 2);
  std::set<std::string> families;
  for (const auto& eq : t.equations) families.insert(eq.family);
  CHECK(families.size() == 3);
}

TEST_CASE("word evaluation in the Boolean model") {
  ModelData m = boolean_lcmon_model();
  ModelEval ev(m);
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  SetSpan mid = ev.eval_pro(idx);
  CHECK(mid.apex.size() == 2);
  CHECK(mid.left_foot.size() == 1);
  SetSpan wedge = ev.eval_pro(word_local_prod(x, x, {idx, idx}));
  CHECK(wedge.apex.size() == 4);
  SetSpan top = ev.eval_pro(word_local_prod(x, x, {}));
  CHECK(top.apex.size() == 1);
  // Composite words evaluate through span composition.
  SetSpan sq = ev.eval_pro(word_comp(idx, idx));
  CHECK(sq.apex.size() == 4);
}

TEST_CASE("the Boolean model passes and the trivial model passes") {
  TheoryCheckReport rep = check_model(boolean_lcmon_model());
  for (const auto& v : rep.violations)
    MESSAGE(v.axiom, " at ", v.instance);
  CHECK(rep.pass());
  CHECK(rep.checks > 0);
  CHECK(check_model(trivial_lcmon_model()).pass());
}

TEST_CASE("pinned mutants fail with the pinpointed axiom ids") {
  // Broken associativity: composition NAND.
  {
    ModelData m = boolean_lcmon_model();
    FinFunction lax = m.laxators[{"id:x", "id:x"}];
    m.laxators[{"id:x", "id:x"}] = FinFunction(lax.dom, lax.cod, {1, 1, 1, 0});
    TheoryCheckReport rep = check_model(m);
    CHECK_FALSE(rep.pass());
    CHECK(has_violation(rep, "laxator-associativity"));
  }
  // Broken unit: the unitor picks the absorbing element.
  {
    ModelData m = boolean_lcmon_model();
    m.unitors["x"] = FinFunction(m.on_objects["x"], m.laxators[{"id:x", "id:x"}].cod,
                                 {0});
    TheoryCheckReport rep = check_model(m);
    CHECK_FALSE(rep.pass());
    CHECK(has_violation(rep, "unit-left"));
  }
  // Broken laxator naturality: composition XOR distributes over nothing the
  // multiplication OR provides.
  {
    ModelData m = boolean_lcmon_model();
    FinFunction lax = m.laxators[{"id:x", "id:x"}];
    m.laxators[{"id:x", "id:x"}] = FinFunction(lax.dom, lax.cod, {0, 1, 1, 0});
    m.unitors["x"] = FinFunction(m.on_objects["x"], lax.cod, {0});
    TheoryCheckReport rep = check_model(m);
    CHECK_FALSE(rep.pass());
    CHECK(has_violation(rep, "laxator-naturality"));
    CHECK_FALSE(has_violation(rep, "laxator-associativity"));
    CHECK_FALSE(has_violation(rep, "unit-left"));
    CHECK_FALSE(has_violation(rep, "unit-right"));
  }
  // Broken product preservation: a laxator override at a product-word pair
  // that is not the uniquely determined cell.
  {
    ModelData m = boolean_lcmon_model();
    ObjectWord x{{"x"}};
    ProWordPtr idx = word_id(x);
    ProWordPtr wedge = word_local_prod(x, x, {idx, idx});
    ModelEval ev(m);
    SpanCell derived = ev.laxator(wedge, wedge);
    std::vector<int> t = derived.apex_map.table;
    REQUIRE(t.size() > 1);
    size_t other = 0;
    for (size_t i = 1; i < t.size(); ++i)
      if (t[i] != t[0]) other = i;
    REQUIRE(other > 0);
    std::swap(t[0], t[other]);
    m.laxator_overrides.push_back(
        {wedge, wedge, FinFunction(derived.apex_map.dom, derived.apex_map.cod, t)});
    TheoryCheckReport rep = check_model(m);
    CHECK_FALSE(rep.pass());
    CHECK(has_violation(rep, "product-preservation"));
  }
  // Broken equation: a non-commutative multiplication (first projection).
  {
    ModelData m = boolean_lcmon_model();
    FinFunction mu = m.on_cells["mu"];
    m.on_cells["mu"] = FinFunction(mu.dom, mu.cod, {0, 0, 1, 1});
    TheoryCheckReport rep = check_model(m);
    CHECK_FALSE(rep.pass());
    CHECK(has_violation(rep, "equation:comm"));
  }
}

TEST_CASE("derived laxators satisfy the product law") {
  ModelData m = boolean_lcmon_model();
  ModelEval ev(m);
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  ProWordPtr wedge = word_local_prod(x, x, {idx, idx});
  ProWordPtr top = word_local_prod(x, x, {});
  std::vector<ProWordPtr> words = {idx, wedge, top};
  for (const auto& a : words)
    for (const auto& b : words) {
      if (a->kind != ProWord::Kind::prod && b->kind != ProWord::Kind::prod) continue;
      SpanCell direct = ev.laxator(a, b);
      SpanCell via = ev.laxator_via_product_law(a, b);
      CHECK(direct == via);
    }
  // Replayability: re-evaluating an equation's sides reproduces the tables.
  const auto& eq = m.theory.equations[0];
  SpanCell l1 = ev.eval_cell(eq.lhs);
  SpanCell l2 = ev.eval_cell(eq.lhs);
  CHECK(l1 == l2);
}

TEST_CASE("structure companion words evaluate and satisfy binding shapes") {
  ModelData m = boolean_lcmon_model();
  ModelEval ev(m);
  ObjectWord x{{"x"}};
  FinFunction diag(canonical_index_set(2), canonical_index_set(1), {0, 0});
  SpanCell unit = ev.eval_cell(cell_comp_unit(diag, {x}));
  SpanCell counit = ev.eval_cell(cell_comp_counit(diag, {x}));
  CHECK(!span_double().check_cell(SpanDouble::cell(unit)));
  CHECK(!span_double().check_cell(SpanDouble::cell(counit)));
  CHECK(unit.bottom == counit.top);
}

TEST_CASE("CMon categories round trip through models") {
  CMonCategory c = boolean_cmon();
  REQUIRE(!validate_cmon(c));
  ModelData m = cmon_to_model(c);
  TheoryCheckReport rep = check_model(m);
  for (const auto& v : rep.violations) MESSAGE(v.axiom, " @ ", v.instance);
  CHECK(rep.pass());
  CMonCategory back = model_to_cmon(m);
  CHECK(back.signature() == c.signature());
  // Model-side round trip up to canonical relabeling.
  ModelData m2 = cmon_to_model(back);
  CHECK(lcmon_model_signature(m2) == lcmon_model_signature(m));
  // The Boolean hand-built model is the same enriched category.
  CHECK(lcmon_model_signature(boolean_lcmon_model()) == c.signature());

  // A two-object CMon category (matrix-like composition over Z2).
  CMonCategory d;
  d.objects = FinSet("obs", {"a", "b"});
  auto z2 = FinSet("z2", {"0", "1"});
  d.homs = {z2, z2, z2, z2};
  d.add.assign(4, {0, 1, 1, 0});  // XOR addition: Z/2
  d.zero = {0, 0, 0, 0};
  d.identity = {1, 1};
  d.compose.assign(8, {0, 0, 0, 1});  // multiplication in Z/2
  REQUIRE(!validate_cmon(d));
  ModelData md = cmon_to_model(d);
  CHECK(check_model(md).pass());
  CHECK(model_to_cmon(md).signature() == d.signature());

  // NotBiadditive: break distributivity.
  CMonCategory bad = boolean_cmon();
  bad.compose = {{0, 1, 1, 1}};  // OR as composition: 1 is no longer a unit? it is.
  // (f+g);k vs f;k + g;k with OR/OR is fine; break the zero law instead:
  bad.compose = {{1, 1, 1, 1}};
  CHECK(validate_cmon(bad).has_value());
  CHECK_THROWS_AS(cmon_to_model(bad), Error);
}

TEST_CASE("transformations: identities, homomorphisms, and a broken square") {
  ModelData m = boolean_lcmon_model();
  TransformationData id = identity_transformation(m);
  CHECK(check_transformation(id).pass());

  // A monoid-map-induced transformation between one-object models: the
  // Boolean model embeds in the min/max model over {0,1,2} via 0 -> 0, 1 -> 2.
  CMonCategory mm;
  mm.objects = FinSet("pt", {"*"});
  mm.homs = {FinSet("three", {"0", "1", "2"})};
  mm.add = {{0, 1, 2, 1, 1, 2, 2, 2, 2}};      // max
  mm.zero = {0};
  mm.identity = {2};
  mm.compose = {{0, 0, 0, 0, 1, 1, 0, 1, 2}};  // min
  REQUIRE(!validate_cmon(mm));
  ModelData mmodel = cmon_to_model(mm);
  REQUIRE(check_model(mmodel).pass());
  TransformationData emb{m, mmodel, {}, {}};
  emb.components["x"] = FinFunction(m.on_objects["x"], mmodel.on_objects["x"], {0});
  // Hom action 0 -> 0, 1 -> 2 preserves zero, identity, max and min.
  emb.naturality["id:x"] = FinFunction(
      m.on_atomic["id:x"].apex, mmodel.on_atomic["id:x"].apex, {0, 2});
  TheoryCheckReport rep = check_transformation(emb);
  for (const auto& v : rep.violations) MESSAGE(v.axiom, " @ ", v.instance);
  CHECK(rep.pass());

  // Composites of passing transformations pass.
  TransformationData comp = compose_transformations(id, id);
  CHECK(check_transformation(comp).pass());

  // Mutate the hom action so a square fails.
  TransformationData bad = identity_transformation(m);
  bad.naturality["id:x"] =
      FinFunction(m.on_atomic["id:x"].apex, m.on_atomic["id:x"].apex, {1, 0});
  TheoryCheckReport brep = check_transformation(bad);
  CHECK_FALSE(brep.pass());
}
