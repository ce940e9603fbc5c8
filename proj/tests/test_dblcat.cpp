#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcat/dblcat.hpp"

using namespace dcat;

namespace {

const SpanDouble& S = span_double();
const MatDouble& M = mat_double();

SetSpan mkspan(const FinSet& x, const FinSet& apex, const FinSet& y,
               std::vector<int> l, std::vector<int> r) {
  return SetSpan(FinFunction(apex, x, std::move(l)), FinFunction(apex, y, std::move(r)));
}

}  // namespace

TEST_CASE("span composition via pullback") {
  FinSet one = canonical_set(1);
  FinSet two = canonical_set(2);
  FinSet sm("sm", {"s0", "s1"});
  FinSet tn("tn", {"t0", "t1"});
  SetSpan m = mkspan(one, sm, two, {0, 0}, {0, 1});
  SetSpan n = mkspan(two, tn, one, {0, 1}, {0, 0});
  SetSpan mn = span_compose(m, n);
  CHECK(mn.apex.elements() == std::vector<std::string>{"pair(s0,t0)", "pair(s1,t1)"});

  SetSpan mid = span_compose(m, SetSpan::identity(two));
  CHECK(mid.apex.size() == m.apex.size());
  CHECK(mid.apex.elements()[0] == "pair(s0,u0)");

  SetSpan empty = mkspan(two, FinSet("e", {}), one, {}, {});
  CHECK(span_compose(m, empty).apex.size() == 0);
}

TEST_CASE("external and vertical cell composition on identities") {
  FinSet two = canonical_set(2);
  Pro id2 = S.id_pro(SpanDouble::ob(two));
  Cell idc = S.id_cell_on_pro(id2);
  CHECK(S.compose_cells_vert(idc, idc) == idc);
  Cell ide = S.compose_cells_ext(idc, idc);
  CHECK(S.cell_top(ide) == S.compose_pro(id2, id2));
  CHECK(S.cell_is_iso(ide));
}

TEST_CASE("interchange in Span on a sampled grid universe") {
  SplitMix64 rng(7);
  auto rand_fn = [&](const FinSet& a, const FinSet& b) {
    std::vector<int> t(a.size());
    for (auto& v : t) v = static_cast<int>(rng.below(b.size()));
    return FinFunction(a, b, t);
  };
  // Spans whose fibers all have two elements, so cells always exist.
  auto thick_span = [&](const FinSet& a, const FinSet& b) {
    FinSet apex = canonical_set(2 * a.size() * b.size());
    std::vector<int> l(apex.size()), r(apex.size());
    for (int k = 0; k < apex.size(); ++k) {
      l[k] = (k / 2) / b.size();
      r[k] = (k / 2) % b.size();
    }
    return SetSpan(FinFunction(apex, a, l), FinFunction(apex, b, r));
  };
  int tried = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<FinSet> obs;
    for (int i = 0; i < 9; ++i) obs.push_back(canonical_set(1 + rng.below(2)));
    FinSet at = canonical_set(1 + rng.below(3));
    FinSet bt = canonical_set(1 + rng.below(3));
    SetSpan m = SetSpan(rand_fn(at, obs[0]), rand_fn(at, obs[1]));
    SetSpan n = SetSpan(rand_fn(bt, obs[1]), rand_fn(bt, obs[2]));
    SetSpan m1 = thick_span(obs[3], obs[4]);
    SetSpan n1 = thick_span(obs[4], obs[5]);
    SetSpan m2 = thick_span(obs[6], obs[7]);
    SetSpan n2 = thick_span(obs[7], obs[8]);
    FinFunction f0 = rand_fn(obs[0], obs[3]), f1 = rand_fn(obs[1], obs[4]),
                f2 = rand_fn(obs[2], obs[5]);
    FinFunction g0 = rand_fn(obs[3], obs[6]), g1 = rand_fn(obs[4], obs[7]),
                g2 = rand_fn(obs[5], obs[8]);
    auto alphas = S.cells_in_frame(SpanDouble::pro(m), SpanDouble::pro(m1),
                                   SpanDouble::arr(f0), SpanDouble::arr(f1));
    auto betas = S.cells_in_frame(SpanDouble::pro(n), SpanDouble::pro(n1),
                                  SpanDouble::arr(f1), SpanDouble::arr(f2));
    auto gammas = S.cells_in_frame(SpanDouble::pro(m1), SpanDouble::pro(m2),
                                   SpanDouble::arr(g0), SpanDouble::arr(g1));
    auto deltas = S.cells_in_frame(SpanDouble::pro(n1), SpanDouble::pro(n2),
                                   SpanDouble::arr(g1), SpanDouble::arr(g2));
    if (alphas.empty() || betas.empty() || gammas.empty() || deltas.empty()) continue;
    const Cell& a = alphas[rng.below(alphas.size())];
    const Cell& b = betas[rng.below(betas.size())];
    const Cell& g = gammas[rng.below(gammas.size())];
    const Cell& d = deltas[rng.below(deltas.size())];
    Cell lhs = S.compose_cells_ext(S.compose_cells_vert(a, g), S.compose_cells_vert(b, d));
    Cell rhs = S.compose_cells_vert(S.compose_cells_ext(a, b), S.compose_cells_ext(g, d));
    CHECK(lhs == rhs);
    ++tried;
  }
  CHECK(tried > 50);
}

TEST_CASE("pentagon and triangle for spans") {
  SplitMix64 rng(11);
  auto rand_fn = [&](const FinSet& a, const FinSet& b) {
    std::vector<int> t(a.size());
    for (auto& v : t) v = static_cast<int>(rng.below(b.size()));
    return FinFunction(a, b, t);
  };
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<FinSet> obs;
    for (int i = 0; i < 5; ++i) obs.push_back(canonical_set(1 + rng.below(3)));
    std::vector<Pro> chain;
    for (int i = 0; i < 4; ++i) {
      FinSet apex = canonical_set(rng.below(4));
      chain.push_back(SpanDouble::pro(
          SetSpan(rand_fn(apex, obs[i]), rand_fn(apex, obs[i + 1]))));
    }
    const Pro &m = chain[0], &n = chain[1], &p = chain[2], &q = chain[3];
    Cell r1 = S.compose_cells_vert(
        S.associator(S.compose_pro(m, n), p, q),
        S.associator(m, n, S.compose_pro(p, q)));
    Cell r2a = S.compose_cells_ext(S.associator(m, n, p), S.id_cell_on_pro(q));
    Cell r2b = S.associator(m, S.compose_pro(n, p), q);
    Cell r2c = S.compose_cells_ext(S.id_cell_on_pro(m), S.associator(n, p, q));
    Cell r2 = S.compose_cells_vert(S.compose_cells_vert(r2a, r2b), r2c);
    CHECK(r1 == r2);
    Ob mid = S.pro_dst(m);
    Cell tri_lhs = S.compose_cells_ext(S.right_unitor(m), S.id_cell_on_pro(n));
    Cell tri_rhs = S.compose_cells_vert(
        S.associator(m, S.id_pro(mid), n),
        S.compose_cells_ext(S.id_cell_on_pro(m), S.left_unitor(n)));
    CHECK(tri_lhs == tri_rhs);
  }
}

TEST_CASE("companions and conjoints in Span satisfy the binding equations") {
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      Ob x = SpanDouble::ob(canonical_set(a));
      Ob y = SpanDouble::ob(canonical_set(b));
      for (const auto& f : S.arrows_between(x, y)) {
        auto comp = S.companion(f);
        REQUIRE(comp);
        CHECK(companion_equations_hold(S, *comp));
        auto conj = S.conjoint(f);
        REQUIRE(conj);
        CHECK(conjoint_equations_hold(S, *conj));
      }
    }

  Ob x = SpanDouble::ob(canonical_set(2));
  auto comp = S.companion(S.id_arrow(x));
  CHECK(comp->proarrow == S.id_pro(x));
  FinFunction bang(canonical_set(2), canonical_set(1), {0, 0});
  auto c2 = S.companion(SpanDouble::arr(bang));
  CHECK(SpanDouble::pro_of(c2->proarrow).apex == canonical_set(2));
  CHECK(SpanDouble::cell_of(c2->counit).apex_map == bang);
}

TEST_CASE("conjoints transport through op") {
  OpDouble op(S);
  FinFunction f(canonical_set(2), canonical_set(3), {1, 2});
  Arr fh = SpanDouble::arr(f);
  auto conj = S.conjoint(fh);
  auto comp_in_op = op.companion(fh);
  REQUIRE(conj);
  REQUIRE(comp_in_op);
  CHECK(comp_in_op->proarrow == conj->proarrow);
  CHECK(companion_equations_hold(op, *comp_in_op));
}

TEST_CASE("restriction in Span computes the limit triples") {
  FinSet two = canonical_set(2);
  FinSet one = canonical_set(1);
  SetSpan n = SetSpan::identity(two);
  FinFunction f(one, two, {0});
  FinFunction g(one, two, {0});
  SpanRestriction r = restrict_span(n, f, g);
  CHECK(r.restricted.apex.size() == 1);
  CHECK(!S.check_cell(SpanDouble::cell(r.cartesian)));

  SpanRestriction rid =
      restrict_span(n, FinFunction::identity(two), FinFunction::identity(two));
  CHECK(rid.restricted.apex.size() == n.apex.size());

  FinSet apex("s", {"s0", "s1", "s2"});
  SetSpan m = mkspan(two, apex, two, {0, 0, 1}, {0, 1, 1});
  FinFunction f2(two, two, {0, 0});
  FinFunction g2(two, two, {1, 1});
  SpanRestriction r2 = restrict_span(m, f2, g2);
  int count = 0;
  for (int x2 = 0; x2 < 2; ++x2)
    for (int s = 0; s < 3; ++s)
      for (int y = 0; y < 2; ++y)
        if (f2.table[x2] == m.left.table[s] && m.right.table[s] == g2.table[y]) ++count;
  CHECK(r2.restricted.apex.size() == count);
}

TEST_CASE("matrix composition counts sums of products") {
  FinSet one = canonical_set(1);
  MatProarrow m{one, one, {canonical_set(2)}};
  MatProarrow n{one, one, {canonical_set(3)}};
  MatProarrow mn = mat_compose(m, n);
  CHECK(mn.entry(0, 0).size() == 6);
  CHECK(mn.entry(0, 0).elements()[0] == "inj(u0,tup(u0,u0))");

  MatProarrow idm = mat_identity(canonical_set(2));
  MatProarrow m2{canonical_set(2), canonical_set(2),
                 {canonical_set(1), canonical_set(2), canonical_set(0), canonical_set(1)}};
  MatProarrow m2id = mat_compose(m2, idm);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(m2id.entry(r, c).size() == m2.entry(r, c).size());

  MatProarrow zero{one, one, {canonical_set(0)}};
  CHECK(mat_compose(m, zero).entry(0, 0).size() == 0);
}

TEST_CASE("Mat coherence and companions") {
  SplitMix64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    FinSet x = canonical_set(1 + rng.below(2));
    FinSet y = canonical_set(1 + rng.below(2));
    FinSet z = canonical_set(1 + rng.below(2));
    FinSet w = canonical_set(1 + rng.below(2));
    auto rand_mat = [&](const FinSet& a, const FinSet& b) {
      MatProarrow mm{a, b, {}};
      for (int i = 0; i < a.size() * b.size(); ++i)
        mm.entries.push_back(canonical_set(rng.below(3)));
      return MatDouble::pro(mm);
    };
    Pro m = rand_mat(x, y), n = rand_mat(y, z), p = rand_mat(z, w);
    Cell assoc = M.associator(m, n, p);
    CHECK(M.cell_is_iso(assoc));
    CHECK(!M.check_cell(assoc));
    CHECK(!M.check_cell(M.left_unitor(m)));
    CHECK(!M.check_cell(M.right_unitor(m)));
    Cell tri_lhs = M.compose_cells_ext(M.right_unitor(m), M.id_cell_on_pro(n));
    Cell tri_rhs = M.compose_cells_vert(
        M.associator(m, M.id_pro(MatDouble::ob(y)), n),
        M.compose_cells_ext(M.id_cell_on_pro(m), M.left_unitor(n)));
    CHECK(tri_lhs == tri_rhs);
  }
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (const auto& f : M.arrows_between(MatDouble::ob(canonical_set(a)),
                                            MatDouble::ob(canonical_set(b)))) {
        CHECK(companion_equations_hold(M, *M.companion(f)));
        CHECK(conjoint_equations_hold(M, *M.conjoint(f)));
      }
}

TEST_CASE("span/mat dictionary") {
  FinSet two = canonical_set(2);
  MatProarrow idm = span_to_mat(SetSpan::identity(two));
  CHECK(idm.entry(0, 0).size() == 1);
  CHECK(idm.entry(0, 1).size() == 0);

  FinSet apex("s", {"s0", "s1"});
  FinSet one = canonical_set(1);
  SetSpan m = mkspan(one, apex, one, {0, 0}, {0, 0});
  CHECK(span_to_mat(m).entry(0, 0).size() == 2);

  SplitMix64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    FinSet x = canonical_set(1 + rng.below(3));
    FinSet y = canonical_set(1 + rng.below(3));
    FinSet s = canonical_set(rng.below(4));
    std::vector<int> lt(s.size()), rt(s.size());
    for (auto& v : lt) v = static_cast<int>(rng.below(x.size()));
    for (auto& v : rt) v = static_cast<int>(rng.below(y.size()));
    SetSpan sp(FinFunction(s, x, lt), FinFunction(s, y, rt));
    SpanCell iso = span_roundtrip_iso(sp);
    CHECK(S.cell_is_iso(SpanDouble::cell(iso)));
    CHECK(!S.check_cell(SpanDouble::cell(iso)));
    MatCell miso = mat_roundtrip_iso(span_to_mat(sp));
    CHECK(M.cell_is_iso(MatDouble::cell(miso)));
    CHECK(!M.check_cell(MatDouble::cell(miso)));
  }

  SpanToMatFunctor F;
  SplitMix64 rng2(9);
  for (int rep = 0; rep < 20; ++rep) {
    FinSet x = canonical_set(1 + rng2.below(2));
    FinSet y = canonical_set(1 + rng2.below(2));
    FinSet z = canonical_set(1 + rng2.below(2));
    FinSet s = canonical_set(rng2.below(3));
    FinSet t = canonical_set(rng2.below(3));
    std::vector<int> a(s.size()), b(s.size()), c(t.size()), d(t.size());
    for (auto& v : a) v = static_cast<int>(rng2.below(x.size()));
    for (auto& v : b) v = static_cast<int>(rng2.below(y.size()));
    for (auto& v : c) v = static_cast<int>(rng2.below(y.size()));
    for (auto& v : d) v = static_cast<int>(rng2.below(z.size()));
    Pro m2 = SpanDouble::pro(SetSpan(FinFunction(s, x, a), FinFunction(s, y, b)));
    Pro n2 = SpanDouble::pro(SetSpan(FinFunction(t, y, c), FinFunction(t, z, d)));
    Cell lax = F.laxator(m2, n2);
    CHECK(M.cell_is_iso(lax));
    CHECK(!M.check_cell(lax));
    CHECK(M.cell_top(lax) == M.compose_pro(F.on_pro(m2), F.on_pro(n2)));
    CHECK(M.cell_bottom(lax) == F.on_pro(S.compose_pro(m2, n2)));
  }

  MatToSpanFunctor G;
  SplitMix64 rng3(13);
  for (int rep = 0; rep < 20; ++rep) {
    FinSet x = canonical_set(1 + rng3.below(2));
    FinSet y = canonical_set(1 + rng3.below(2));
    FinSet z = canonical_set(1 + rng3.below(2));
    auto rand_mat = [&](const FinSet& aa, const FinSet& bb) {
      MatProarrow mm{aa, bb, {}};
      for (int i = 0; i < aa.size() * bb.size(); ++i)
        mm.entries.push_back(canonical_set(rng3.below(3)));
      return MatDouble::pro(mm);
    };
    Pro m2 = rand_mat(x, y), n2 = rand_mat(y, z);
    Cell lax = G.laxator(m2, n2);
    CHECK(S.cell_is_iso(lax));
    CHECK(!S.check_cell(lax));
  }
}

TEST_CASE("terminal and op double categories") {
  OpDouble op(S);
  OpDouble opop(op);
  FinSet two = canonical_set(2);
  Pro m = S.id_pro(SpanDouble::ob(two));
  CHECK(opop.compose_pro(m, m) == S.compose_pro(m, m));
  CHECK(opop.arr_src(S.id_arrow(SpanDouble::ob(two))) ==
        S.arr_src(S.id_arrow(SpanDouble::ob(two))));
  CHECK(terminal_double().objects(3).size() == 1);
  Cell lam = op.left_unitor(m);
  CHECK(op.cell_is_iso(lam));
}

TEST_CASE("extensions in Span are opcartesian relabelings") {
  FinSet two = canonical_set(2);
  FinSet three = canonical_set(3);
  FinSet apex("s", {"s0", "s1"});
  SetSpan m = mkspan(two, apex, two, {0, 1}, {1, 0});
  FinFunction f(two, three, {0, 2});
  FinFunction g(two, three, {1, 1});
  SpanExtension e = extend_span(m, f, g);
  CHECK(e.extended.apex == m.apex);
  CHECK(!S.check_cell(SpanDouble::cell(e.opcartesian)));
  CHECK(e.extended.left.table == compose_fn(m.left, f).table);
}
