#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/finset.hpp"

using namespace dcat;

static FinSet mk(const std::string& name, std::vector<std::string> elems) {
  return FinSet(name, std::move(elems));
}

TEST_CASE("compose_fn evaluates tables pointwise") {
  FinSet two = mk("2", {"0", "1"});
  CHECK(compose_fn(FinFunction::identity(two), FinFunction::identity(two)) ==
        FinFunction::identity(two));

  FinSet ab = mk("ab", {"a", "b"});
  FinSet z = mk("z", {"z"});
  FinFunction f = FinFunction::from_labels(ab, two, {{"a", "0"}, {"b", "1"}});
  FinFunction g = FinFunction::from_labels(two, z, {{"0", "z"}, {"1", "z"}});
  FinFunction fg = compose_fn(f, g);
  CHECK(fg.apply_label("a") == "z");
  CHECK(fg.apply_label("b") == "z");

  // f:{a,b}->{0,1} (a,b -> 0), g: 0 -> q, 1 -> p, expect a,b -> q.
  FinSet pq = mk("pq", {"p", "q"});
  FinFunction f2 = FinFunction::from_labels(ab, two, {{"a", "0"}, {"b", "0"}});
  FinFunction g2 = FinFunction::from_labels(two, pq, {{"0", "q"}, {"1", "p"}});
  FinFunction h = compose_fn(f2, g2);
  CHECK(h.apply_label("a") == "q");
  CHECK(h.apply_label("b") == "q");

  CHECK_THROWS_AS(compose_fn(g, f), Error);
}

TEST_CASE("pullback computes matching pairs with canonical labels") {
  FinSet c = mk("c", {"x", "y"});
  PullbackSets diag = pullback(FinFunction::identity(c), FinFunction::identity(c));
  CHECK(diag.apex.elements() == std::vector<std::string>{"pair(x,x)", "pair(y,y)"});
  CHECK(is_bijection(diag.p1));
  CHECK(is_bijection(diag.p2));

  FinSet ab = mk("ab", {"a", "b"});
  FinSet cd = mk("cd", {"c", "d"});
  FinSet two = mk("2", {"0", "1"});
  FinFunction f = FinFunction::from_labels(ab, two, {{"a", "0"}, {"b", "1"}});
  FinFunction g = FinFunction::from_labels(cd, two, {{"c", "0"}, {"d", "0"}});
  PullbackSets pb = pullback(f, g);
  CHECK(pb.apex.elements() == std::vector<std::string>{"pair(a,c)", "pair(a,d)"});

  FinSet empty = mk("e", {});
  FinFunction ge(empty, two, {});
  CHECK(pullback(f, ge).apex.size() == 0);

  CHECK_THROWS_AS(pullback(f, FinFunction::identity(ab)), Error);
}

TEST_CASE("pullback universal property, exhaustively over small cones") {
  // For every test cone (q1, q2) over sets of size <= 3 there is exactly one
  // mediating function into the pullback.
  FinSet a = mk("a", {"a0", "a1"});
  FinSet b = mk("b", {"b0", "b1", "b2"});
  FinSet c = mk("c", {"c0", "c1"});
  FinFunction f = FinFunction::from_labels(a, c, {{"a0", "c0"}, {"a1", "c1"}});
  FinFunction g = FinFunction::from_labels(
      b, c, {{"b0", "c0"}, {"b1", "c0"}, {"b2", "c1"}});
  PullbackSets pb = pullback(f, g);
  for (int k = 0; k <= 3; ++k) {
    FinSet t = canonical_set(k);
    for (const auto& q1 : all_functions(t, a))
      for (const auto& q2 : all_functions(t, b)) {
        if (compose_fn(q1, f) != compose_fn(q2, g)) continue;
        int count = 0;
        for (const auto& h : all_functions(t, pb.apex)) {
          if (compose_fn(h, pb.p1) == q1 && compose_fn(h, pb.p2) == q2) ++count;
        }
        CHECK(count == 1);
      }
  }
}

TEST_CASE("coproduct and product of sets") {
  CHECK(coproduct_sets({}).sum.size() == 0);
  FinSet a = mk("a", {"a"});
  FinSet uv = mk("uv", {"u", "v"});
  CoproductSets cp = coproduct_sets({a, uv});
  CHECK(cp.sum.size() == 3);
  CHECK(cp.sum.elements()[0] == "inj(0,a)");
  CHECK(cp.sum.elements()[2] == "inj(1,v)");

  CoproductSets single = coproduct_sets({uv});
  CHECK(single.sum.size() == 2);
  CHECK(is_bijection(single.injections[0]));

  ProductSets empty = product_sets({});
  CHECK(empty.prod.elements() == std::vector<std::string>{"tup()"});
  FinSet ab = mk("ab", {"a", "b"});
  FinSet uvw = mk("uvw", {"u", "v", "w"});
  ProductSets pr = product_sets({ab, uvw});
  CHECK(pr.prod.size() == 6);
  CHECK(pr.prod.elements()[0] == "tup(a,u)");
  CHECK(pr.prod.elements()[5] == "tup(b,w)");
  CHECK(product_sets({uvw}).prod.size() == 3);
}

TEST_CASE("copair and pair mediate uniquely on small carriers") {
  FinSet z = mk("z", {"z"});
  FinSet a = mk("a", {"a0"});
  FinSet b = mk("b", {"b0", "b1"});
  CoproductSets cp = coproduct_sets({a, b});
  FinFunction fa(a, z, {0});
  FinFunction fb(b, z, {0, 0});
  FinFunction h = copair_fns(cp, {fa, fb});
  CHECK(compose_fn(cp.injections[0], h) == fa);
  CHECK(compose_fn(cp.injections[1], h) == fb);
  // Uniqueness among all functions.
  int count = 0;
  for (const auto& cand : all_functions(cp.sum, z))
    if (compose_fn(cp.injections[0], cand) == fa &&
        compose_fn(cp.injections[1], cand) == fb)
      ++count;
  CHECK(count == 1);

  ProductSets pr = product_sets({a, b});
  FinSet t = mk("t", {"t0", "t1"});
  FinFunction ga(t, a, {0, 0});
  FinFunction gb(t, b, {1, 0});
  FinFunction p = pair_fns(pr, t, {ga, gb});
  CHECK(compose_fn(p, pr.projections[0]) == ga);
  CHECK(compose_fn(p, pr.projections[1]) == gb);
  count = 0;
  for (const auto& cand : all_functions(t, pr.prod))
    if (compose_fn(cand, pr.projections[0]) == ga &&
        compose_fn(cand, pr.projections[1]) == gb)
      ++count;
  CHECK(count == 1);

  // Terminal map: pair of no functions.
  FinFunction bang = pair_fns(product_sets({}), t, {});
  CHECK(bang.cod.elements() == std::vector<std::string>{"tup()"});
}

TEST_CASE("is_bijection") {
  FinSet two = mk("2", {"0", "1"});
  FinSet one = mk("1", {"*"});
  CHECK(is_bijection(FinFunction::identity(two)));
  CHECK_FALSE(is_bijection(FinFunction(two, one, {0, 0})));
  CHECK(is_bijection(FinFunction(two, two, {1, 0})));
}

TEST_CASE("limit of a discrete diagram is the product") {
  FinSet ab = mk("ab", {"a", "b"});
  FinSet uv = mk("uv", {"u", "v"});
  DiagramShape shape;
  shape.objects = mk("objs", {"X", "Y"});
  SetDiagram d{shape, {ab, uv}, {}};
  d.validate();
  LimitResult lim = limit_of_diagram(d);
  CHECK(lim.apex.size() == 4);
  CHECK(lim.apex.elements()[0] == "tup(a,u)");
}

TEST_CASE("limit over a cospan shape agrees with the pullback") {
  FinSet a = mk("a", {"a0", "a1"});
  FinSet b = mk("b", {"b0", "b1"});
  FinSet c = mk("c", {"c0", "c1"});
  FinFunction f = FinFunction::from_labels(a, c, {{"a0", "c0"}, {"a1", "c0"}});
  FinFunction g = FinFunction::from_labels(b, c, {{"b0", "c0"}, {"b1", "c1"}});
  DiagramShape shape;
  shape.objects = mk("objs", {"A", "B", "C"});
  shape.generators.push_back({"f", "A", "C"});
  shape.generators.push_back({"g", "B", "C"});
  SetDiagram d{shape, {a, b, c}, {f, g}};
  d.validate();
  LimitResult lim = limit_of_diagram(d);
  PullbackSets pb = pullback(f, g);
  REQUIRE(lim.apex.size() == pb.apex.size());
  // The canonical bijection matches tup(a,b,f(a)) with pair(a,b).
  for (int k = 0; k < lim.apex.size(); ++k) {
    int ai = lim.legs[0].table[k];
    int bi = lim.legs[1].table[k];
    int pk = pb.index_of_pair(ai, bi);
    CHECK(pk >= 0);
    CHECK(pb.p1.table[pk] == ai);
    CHECK(pb.p2.table[pk] == bi);
  }
}

TEST_CASE("limit universal property on a cospan shape") {
  FinSet a = mk("a", {"a0", "a1"});
  FinSet c = mk("c", {"c0"});
  FinFunction f(a, c, {0, 0});
  FinFunction g = FinFunction::identity(c);
  DiagramShape shape;
  shape.objects = mk("objs", {"A", "C2", "C"});
  shape.generators.push_back({"f", "A", "C"});
  shape.generators.push_back({"g", "C2", "C"});
  SetDiagram d{shape, {a, c, c}, {f, g}};
  LimitResult lim = limit_of_diagram(d);
  for (int k = 0; k <= 2; ++k) {
    FinSet t = canonical_set(k);
    for (const auto& qa : all_functions(t, a))
      for (const auto& qc : all_functions(t, c)) {
        FinFunction qC = compose_fn(qa, f);
        if (compose_fn(qc, g) != qC) continue;
        int count = 0;
        for (const auto& h : all_functions(t, lim.apex))
          if (compose_fn(h, lim.legs[0]) == qa && compose_fn(h, lim.legs[1]) == qc &&
              compose_fn(h, lim.legs[2]) == qC)
            ++count;
        CHECK(count == 1);
      }
  }
}

TEST_CASE("elements of a span copresheaf") {
  FinSet one = mk("x", {"x0"});
  SetSpan s1(FinFunction(mk("s", {"s0"}), one, {0}),
             FinFunction(mk("s", {"s0"}), one, {0}));
  DiagramShape sh1 = elements_of_span_copresheaf(s1);
  CHECK(sh1.objects.size() == 3);
  CHECK(sh1.generators.size() == 2);

  SetSpan s2(FinFunction(mk("e", {}), one, {}), FinFunction(mk("e", {}), one, {}));
  DiagramShape sh2 = elements_of_span_copresheaf(s2);
  CHECK(sh2.objects.size() == 2);
  CHECK(sh2.generators.empty());

  FinSet s = mk("s", {"s0", "s1"});
  SetSpan s3(FinFunction(s, one, {0, 0}), FinFunction(s, one, {0, 0}));
  DiagramShape sh3 = elements_of_span_copresheaf(s3);
  CHECK(sh3.objects.size() == 4);
  CHECK(sh3.generators.size() == 4);
}

TEST_CASE("constructed sets are deterministic") {
  FinSet ab = mk("ab", {"a", "b"});
  FinSet uv = mk("uv", {"u", "v"});
  CHECK(product_sets({ab, uv}).prod == product_sets({ab, uv}).prod);
  CHECK(coproduct_sets({ab, uv}).sum == coproduct_sets({ab, uv}).sum);
  FinFunction f(ab, uv, {0, 1});
  CHECK(pullback(f, f).apex == pullback(f, f).apex);
}

TEST_CASE("labels with commas stay unambiguous") {
  FinSet odd = mk("odd", {"a,b", "c"});
  FinSet plain = mk("p", {"a", "b"});
  ProductSets pr = product_sets({odd, plain});
  CHECK(pr.prod.size() == 4);
  // No collisions between tup(a\,b, a) and any other tuple.
  CHECK(pr.prod.elements()[0] != pr.prod.elements()[2]);
}
