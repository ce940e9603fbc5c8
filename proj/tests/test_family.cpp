#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/family.hpp"

using namespace dcat;

namespace {

const SpanDouble& S = span_double();

FamObject fam_ob(const std::vector<int>& sizes) {
  FamObject x{canonical_index_set(static_cast<int>(sizes.size())), {}};
  for (int s : sizes) x.assignment.push_back(SpanDouble::ob(canonical_set(s)));
  return x;
}

FamProarrow fam_pro(const FamObject& x, const FamObject& y, const SetSpan& ix_span,
                    SplitMix64& rng, int apex_bound = 3) {
  FamProarrow m{x, y, ix_span, {}};
  for (int a = 0; a < ix_span.apex.size(); ++a) {
    const FinSet& xf = SpanDouble::ob_of(x.assignment[ix_span.left.table[a]]);
    const FinSet& yf = SpanDouble::ob_of(y.assignment[ix_span.right.table[a]]);
    FinSet apex = canonical_set(static_cast<int>(rng.below(apex_bound + 1)));
    if (xf.size() == 0 || yf.size() == 0) apex = canonical_set(0);
    std::vector<int> l(apex.size()), r(apex.size());
    for (auto& v : l) v = static_cast<int>(rng.below(xf.size()));
    for (auto& v : r) v = static_cast<int>(rng.below(yf.size()));
    m.components.push_back(
        SpanDouble::pro(SetSpan(FinFunction(apex, xf, l), FinFunction(apex, yf, r))));
  }
  return m;
}

SetSpan rand_index_span(const FinSet& i, const FinSet& j, SplitMix64& rng, int bound = 2) {
  FinSet apex = canonical_index_set(static_cast<int>(rng.below(bound + 1)));
  if (i.size() == 0 || j.size() == 0) apex = canonical_index_set(0);
  std::vector<int> l(apex.size()), r(apex.size());
  for (auto& v : l) v = static_cast<int>(rng.below(i.size()));
  for (auto& v : r) v = static_cast<int>(rng.below(j.size()));
  return SetSpan(FinFunction(apex, i, l), FinFunction(apex, j, r));
}

}  // namespace

TEST_CASE("famComposePro composes indexing spans and components") {
  FamDouble fam(S, Variance::covariant);
  SplitMix64 rng(3);
  FamObject x = fam_ob({2, 1});
  FamObject y = fam_ob({1, 2});
  FamObject z = fam_ob({2});
  SetSpan a = rand_index_span(x.indexing, y.indexing, rng);
  SetSpan b = rand_index_span(y.indexing, z.indexing, rng);
  FamProarrow M = fam_pro(x, y, a, rng);
  FamProarrow N = fam_pro(y, z, b, rng);
  Pro mn = fam.compose_pro(FamDouble::pro(M), FamDouble::pro(N));
  const FamProarrow& c = FamDouble::pro_of(mn);
  PullbackSets pb = pullback(a.right, b.left);
  CHECK(c.indexing_span.apex == pb.apex);
  for (int k = 0; k < pb.apex.size(); ++k) {
    Pro expect = S.compose_pro(M.components[pb.p1.table[k]], N.components[pb.p2.table[k]]);
    CHECK(c.components[k] == expect);
  }

  Cell rho = fam.right_unitor(FamDouble::pro(M));
  CHECK(fam.cell_is_iso(rho));
  CHECK(!fam.check_cell(rho));

  FamProarrow empty{y, z,
                    SetSpan(FinFunction(canonical_index_set(0), y.indexing, {}),
                            FinFunction(canonical_index_set(0), z.indexing, {})),
                    {}};
  Pro me = fam.compose_pro(FamDouble::pro(M), FamDouble::pro(empty));
  CHECK(FamDouble::pro_of(me).components.empty());
}

TEST_CASE("DblFam laws over terminal and Span at bound 2") {
  for (int which = 0; which < 2; ++which) {
    const DoubleCategory& base =
        which ? static_cast<const DoubleCategory&>(span_double())
              : static_cast<const DoubleCategory&>(terminal_double());
    FamDouble fam(base, Variance::covariant);
    SplitMix64 rng(17 + which);
    std::vector<Ob> obs = fam.objects(which ? 1 : 2);
    for (int rep = 0; rep < 25; ++rep) {
      const Ob& x = obs[rng.below(obs.size())];
      const Ob& y = obs[rng.below(obs.size())];
      const Ob& z = obs[rng.below(obs.size())];
      const Ob& w = obs[rng.below(obs.size())];
      auto ms = fam.proarrows_between(x, y, 1);
      auto ns = fam.proarrows_between(y, z, 1);
      auto ps = fam.proarrows_between(z, w, 1);
      if (ms.empty() || ns.empty() || ps.empty()) continue;
      const Pro& m = ms[rng.below(ms.size())];
      const Pro& n = ns[rng.below(ns.size())];
      const Pro& p = ps[rng.below(ps.size())];
      Cell tri_lhs = fam.compose_cells_ext(fam.right_unitor(m), fam.id_cell_on_pro(n));
      Cell tri_rhs = fam.compose_cells_vert(
          fam.associator(m, fam.id_pro(y), n),
          fam.compose_cells_ext(fam.id_cell_on_pro(m), fam.left_unitor(n)));
      CHECK(tri_lhs == tri_rhs);
      Cell assoc = fam.associator(m, n, p);
      CHECK(fam.cell_is_iso(assoc));
      CHECK(!fam.check_cell(assoc));
    }
    int tried = 0;
    for (int rep = 0; rep < 60 && tried < 8; ++rep) {
      const Ob& x = obs[rng.below(obs.size())];
      const Ob& y = obs[rng.below(obs.size())];
      auto ms = fam.proarrows_between(x, y, 1);
      if (ms.empty()) continue;
      const Pro& m = ms[rng.below(ms.size())];
      const Pro& n = ms[rng.below(ms.size())];
      auto fs = fam.arrows_between(x, x);
      auto gs = fam.arrows_between(y, y);
      if (fs.empty() || gs.empty()) continue;
      const Arr& f = fs[rng.below(fs.size())];
      const Arr& g = gs[rng.below(gs.size())];
      auto cells = fam.cells_in_frame(m, n, f, g);
      if (cells.empty()) continue;
      const Cell& alpha = cells[rng.below(cells.size())];
      Cell idm = fam.id_cell_on_pro(m);
      CHECK(fam.compose_cells_vert(idm, alpha) == alpha);
      ++tried;
    }
    CHECK(tried > 0);
  }
}

TEST_CASE("delta embedding is pseudo with singleton indexing") {
  FamDouble fam(S, Variance::covariant);
  DeltaFunctor delta(S, fam);
  Ob x = SpanDouble::ob(canonical_set(2));
  Ob dx = delta.on_ob(x);
  CHECK(FamDouble::ob_of(dx).indexing == unit_index_set());
  CHECK(delta.on_pro(S.id_pro(x)) == fam.id_pro(dx));
  FinSet a = canonical_set(2), b = canonical_set(2), s = canonical_set(2);
  Pro m = SpanDouble::pro(SetSpan(FinFunction(s, a, {0, 1}), FinFunction(s, b, {1, 1})));
  Pro n = SpanDouble::pro(SetSpan(FinFunction(s, b, {1, 0}), FinFunction(s, a, {0, 1})));
  Cell lax = delta.laxator(m, n);
  CHECK(fam.cell_is_iso(lax));
  CHECK(!fam.check_cell(lax));
}

TEST_CASE("family companions and conjoints satisfy the binding equations") {
  FamDouble fam(S, Variance::covariant);
  FamObject x = fam_ob({1, 1});
  FamArrow f{Variance::covariant, x, x, FinFunction::identity(x.indexing), {}};
  for (const auto& o : x.assignment) f.components.push_back(S.id_arrow(o));
  auto cp = fam.companion(FamDouble::arr(f));
  REQUIRE(cp);
  CHECK(companion_equations_hold(fam, *cp));

  FamObject src = fam_ob({2, 1});
  FamObject dst{canonical_index_set(1), {SpanDouble::ob(canonical_set(2))}};
  FinFunction f0(src.indexing, dst.indexing, {0, 0});
  FamArrow g{Variance::covariant, src, dst, f0, {}};
  g.components.push_back(
      SpanDouble::arr(FinFunction(canonical_set(2), canonical_set(2), {1, 0})));
  g.components.push_back(
      SpanDouble::arr(FinFunction(canonical_set(1), canonical_set(2), {0})));
  auto cg = fam.companion(FamDouble::arr(g));
  REQUIRE(cg);
  CHECK(FamDouble::pro_of(cg->proarrow).indexing_span.apex.size() == 2);
  CHECK(companion_equations_hold(fam, *cg));
  auto jg = fam.conjoint(FamDouble::arr(g));
  REQUIRE(jg);
  CHECK(conjoint_equations_hold(fam, *jg));

  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      FamObject xx = fam_ob(std::vector<int>(a, 1));
      FamObject yy = fam_ob(std::vector<int>(b, 1));
      for (const auto& h0 : all_functions(xx.indexing, yy.indexing)) {
        FamArrow h{Variance::covariant, xx, yy, h0, {}};
        for (int i = 0; i < a; ++i)
          h.components.push_back(S.id_arrow(SpanDouble::ob(canonical_set(1))));
        auto ch = fam.companion(FamDouble::arr(h));
        auto jh = fam.conjoint(FamDouble::arr(h));
        CHECK(companion_equations_hold(fam, *ch));
        CHECK(conjoint_equations_hold(fam, *jh));
      }
    }
}

TEST_CASE("family extension assembles opcartesian cells over Span") {
  FamDouble fam(S, Variance::covariant);
  SplitMix64 rng(53);
  FamObject x = fam_ob({2, 1});
  FamObject y = fam_ob({1, 2});
  FamObject w = fam_ob({2});
  FamObject z = fam_ob({2});
  SetSpan ix = rand_index_span(x.indexing, y.indexing, rng, 2);
  FamProarrow m = fam_pro(x, y, ix, rng, 2);
  FinFunction f0(x.indexing, w.indexing, {0, 0});
  FamArrow f{Variance::covariant, x, w, f0, {}};
  f.components.push_back(
      SpanDouble::arr(FinFunction(canonical_set(2), canonical_set(2), {0, 1})));
  f.components.push_back(
      SpanDouble::arr(FinFunction(canonical_set(1), canonical_set(2), {1})));
  FinFunction g0(y.indexing, z.indexing, {0, 0});
  FamArrow g{Variance::covariant, y, z, g0, {}};
  g.components.push_back(
      SpanDouble::arr(FinFunction(canonical_set(1), canonical_set(2), {0})));
  g.components.push_back(
      SpanDouble::arr(FinFunction(canonical_set(2), canonical_set(2), {1, 1})));
  FamCell ext = fam_extension_span(m, f, g);
  CHECK(!fam.check_cell(FamDouble::cell(ext)));
  FamArrow idx = FamDouble::arr_of(fam.id_arrow(FamDouble::ob(x)));
  FamArrow idy = FamDouble::arr_of(fam.id_arrow(FamDouble::ob(y)));
  FamCell trivial = fam_extension_span(m, idx, idy);
  CHECK(FamDouble::cell(trivial) == fam.id_cell_on_pro(FamDouble::pro(m)));
}

TEST_CASE("families of families coproduct merges indexing data") {
  FamDouble fam(S, Variance::covariant);
  FamObject u0{canonical_index_set(1), {SpanDouble::ob(canonical_set(1))}};
  FamObject u1{canonical_index_set(1), {SpanDouble::ob(canonical_set(2))}};
  OuterFamilyObject outer{canonical_index_set(2), {u0, u1}};
  FamObjectCoproduct oc = fam_fam_coproduct_objects(S, outer);
  CHECK(oc.summit.indexing.size() == 2);
  CHECK(oc.coprojections.size() == 2);

  OuterFamilyObject single{canonical_index_set(1), {u1}};
  FamObjectCoproduct sc = fam_fam_coproduct_objects(S, single);
  CHECK(sc.summit.assignment == u1.assignment);

  SplitMix64 rng(67);
  FamProarrow m0 = fam_pro(u0, u1, rand_index_span(u0.indexing, u1.indexing, rng, 2), rng, 2);
  FamProarrow m1 = fam_pro(u1, u0, rand_index_span(u1.indexing, u0.indexing, rng, 2), rng, 2);
  OuterFamilyObject osrc{canonical_index_set(2), {u0, u1}};
  OuterFamilyObject odst{canonical_index_set(2), {u1, u0}};
  SetSpan ospan = SetSpan::identity(canonical_index_set(2));
  OuterFamilyProarrow op{osrc, odst, ospan, {m0, m1}};
  FamProCoproduct pc = fam_fam_coproduct(S, op);
  CHECK(pc.summit.indexing_span.apex.size() ==
        m0.indexing_span.apex.size() + m1.indexing_span.apex.size());
  for (const auto& iota : pc.coprojections)
    CHECK(!fam.check_cell(FamDouble::cell(iota)));

  FamDouble famop(S, Variance::contravariant);
  FamProProduct pp = fam_fam_product(S, op);
  for (const auto& pi : pp.projections)
    CHECK(!famop.check_cell(FamDouble::cell(pi)));
}

TEST_CASE("DblFam(1) dictionary preserves all four compositions bit-exactly") {
  FamDouble fam(terminal_double(), Variance::covariant);
  FinSet I = canonical_index_set(2);
  FamObject x = span_to_fam_ob(I);
  CHECK(fam_to_span_pro(FamDouble::pro_of(fam.id_pro(FamDouble::ob(x)))) ==
        SetSpan::identity(I));
  SplitMix64 rng(71);
  for (int rep = 0; rep < 40; ++rep) {
    FinSet a = canonical_index_set(1 + rng.below(2));
    FinSet b = canonical_index_set(1 + rng.below(2));
    FinSet c = canonical_index_set(1 + rng.below(2));
    SetSpan s1 = rand_index_span(a, b, rng);
    SetSpan s2 = rand_index_span(b, c, rng);
    Pro m = FamDouble::pro(span_to_fam_pro(s1));
    Pro n = FamDouble::pro(span_to_fam_pro(s2));
    CHECK(fam_to_span_pro(FamDouble::pro_of(fam.compose_pro(m, n))) ==
          span_compose(s1, s2));
  }
  const SpanDouble& SD = span_double();
  SplitMix64 rng2(73);
  for (int rep = 0; rep < 20; ++rep) {
    FinSet a = canonical_index_set(1 + rng2.below(2));
    FinSet b = canonical_index_set(1 + rng2.below(2));
    SetSpan top = rand_index_span(a, b, rng2);
    SetSpan mid = rand_index_span(a, b, rng2);
    SetSpan bot = rand_index_span(a, b, rng2);
    auto c1s = SD.cells_in_frame(SpanDouble::pro(top), SpanDouble::pro(mid),
                                 SD.id_arrow(SpanDouble::ob(a)),
                                 SD.id_arrow(SpanDouble::ob(b)));
    auto c2s = SD.cells_in_frame(SpanDouble::pro(mid), SpanDouble::pro(bot),
                                 SD.id_arrow(SpanDouble::ob(a)),
                                 SD.id_arrow(SpanDouble::ob(b)));
    if (c1s.empty() || c2s.empty()) continue;
    const SpanCell& c1 = SpanDouble::cell_of(c1s[rng2.below(c1s.size())]);
    const SpanCell& c2 = SpanDouble::cell_of(c2s[rng2.below(c2s.size())]);
    Cell f1 = FamDouble::cell(span_to_fam_cell(c1));
    Cell f2 = FamDouble::cell(span_to_fam_cell(c2));
    SpanCell vert = SpanDouble::cell_of(
        SD.compose_cells_vert(SpanDouble::cell(c1), SpanDouble::cell(c2)));
    CHECK(fam_to_span_cell(FamDouble::cell_of(fam.compose_cells_vert(f1, f2))) == vert);
  }
}

TEST_CASE("fam lift of span-to-mat commutes with composition up to iso") {
  FamDouble fam_span(S, Variance::covariant);
  FamDouble fam_mat(mat_double(), Variance::covariant);
  SpanToMatFunctor F;
  FamLiftFunctor lift(F, fam_span, fam_mat);
  SplitMix64 rng(79);
  FamObject x = fam_ob({1, 2});
  FamObject y = fam_ob({2});
  FamObject z = fam_ob({1});
  FamProarrow m = fam_pro(x, y, rand_index_span(x.indexing, y.indexing, rng, 2), rng, 2);
  FamProarrow n = fam_pro(y, z, rand_index_span(y.indexing, z.indexing, rng, 2), rng, 2);
  Cell lax = lift.laxator(FamDouble::pro(m), FamDouble::pro(n));
  CHECK(fam_mat.cell_is_iso(lax));
  CHECK(!fam_mat.check_cell(lax));
  IdentityFunctor id(S);
  FamLiftFunctor idlift(id, fam_span, fam_span);
  CHECK(idlift.on_pro(FamDouble::pro(m)) == FamDouble::pro(m));
}
