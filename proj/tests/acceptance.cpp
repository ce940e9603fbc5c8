// Acceptance suite: one pass/fail line per criterion. Exits nonzero when any
// criterion fails.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dcat/dsl.hpp"

using namespace dcat;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail = "") {
  std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " — "
            << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

const SpanDouble& S = span_double();
const SpanProducts span_prod;
const SpanCoproducts span_coprod;
const MatProducts mat_prod;
const MatCoproducts mat_coprod;

std::vector<SetSpan> all_spans_between(const FinSet& a, const FinSet& b, int bound) {
  std::vector<SetSpan> out;
  for (int k = 0; k <= bound; ++k) {
    FinSet apex = canonical_set(k);
    for (const auto& l : all_functions(apex, a))
      for (const auto& r : all_functions(apex, b)) out.push_back(SetSpan(l, r));
  }
  return out;
}

SetSpan random_span(SplitMix64& rng, const FinSet& a, const FinSet& b, int max_apex) {
  int k = static_cast<int>(rng.below(max_apex + 1));
  if (a.size() == 0 || b.size() == 0) k = 0;
  FinSet apex = canonical_set(k);
  std::vector<int> l(k), r(k);
  for (auto& v : l) v = static_cast<int>(rng.below(a.size()));
  for (auto& v : r) v = static_cast<int>(rng.below(b.size()));
  return SetSpan(FinFunction(apex, a, l), FinFunction(apex, b, r));
}

// ---------------------------------------------------------------------------
// Criterion 1: coherence (interchange, pentagon, triangle)

bool pentagon_holds(const SetSpan& m, const SetSpan& n, const SetSpan& p,
                    const SetSpan& q) {
  SpanCell r1 = span_cell_vert(span_cell_assoc(span_compose(m, n), p, q),
                               span_cell_assoc(m, n, span_compose(p, q)));
  SpanCell r2 = span_cell_vert(
      span_cell_vert(span_cell_ext(span_cell_assoc(m, n, p), span_cell_id(q)),
                     span_cell_assoc(m, span_compose(n, p), q)),
      span_cell_ext(span_cell_id(m), span_cell_assoc(n, p, q)));
  return r1 == r2;
}

bool triangle_holds(const SetSpan& m, const SetSpan& n) {
  SpanCell lhs = span_cell_ext(span_cell_runitor(m), span_cell_id(n));
  SpanCell rhs =
      span_cell_vert(span_cell_assoc(m, SetSpan::identity(m.right_foot), n),
                     span_cell_ext(span_cell_id(m), span_cell_lunitor(n)));
  return lhs == rhs;
}

bool interchange_holds(const SpanCell& a, const SpanCell& b, const SpanCell& g,
                       const SpanCell& d) {
  SpanCell lhs = span_cell_ext(span_cell_vert(a, g), span_cell_vert(b, d));
  SpanCell rhs = span_cell_vert(span_cell_ext(a, b), span_cell_ext(g, d));
  return lhs == rhs;
}

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  long long pent = 0, tri = 0, inter = 0, bad = 0;

  // Exhaustive pentagon and triangle over feet and apex sizes <= 2.
  std::vector<FinSet> obs = {canonical_set(0), canonical_set(1), canonical_set(2)};
  for (const auto& x0 : obs)
    for (const auto& x1 : obs) {
      std::vector<SetSpan> s01 = all_spans_between(x0, x1, 2);
      for (const auto& x2 : obs) {
        std::vector<SetSpan> s12 = all_spans_between(x1, x2, 2);
        for (const auto& m : s01)
          for (const auto& n : s12) {
            ++tri;
            if (!triangle_holds(m, n)) ++bad;
          }
        for (const auto& x3 : obs) {
          std::vector<SetSpan> s23 = all_spans_between(x2, x3, 2);
          for (const auto& x4 : obs) {
            std::vector<SetSpan> s34 = all_spans_between(x3, x4, 2);
            for (const auto& m : s01)
              for (const auto& n : s12)
                for (const auto& p : s23)
                  for (const auto& q : s34) {
                    ++pent;
                    if (!pentagon_holds(m, n, p, q)) ++bad;
                  }
          }
        }
      }
    }

  // Exhaustive interchange over all grids built from feet and apex sizes <= 1.
  std::vector<FinSet> small = {canonical_set(0), canonical_set(1)};
  for (const auto& a0 : small)
    for (const auto& a1 : small)
      for (const auto& a2 : small)
        for (const auto& b0 : small)
          for (const auto& b1 : small)
            for (const auto& b2 : small)
              for (const auto& c0 : small)
                for (const auto& c1 : small)
                  for (const auto& c2 : small)
                    for (const auto& m : all_spans_between(a0, a1, 1))
                      for (const auto& n : all_spans_between(a1, a2, 1))
                        for (const auto& m1 : all_spans_between(b0, b1, 1))
                          for (const auto& n1 : all_spans_between(b1, b2, 1))
                            for (const auto& m2 : all_spans_between(c0, c1, 1))
                              for (const auto& n2 : all_spans_between(c1, c2, 1))
                                for (const auto& f0 : all_functions(a0, b0))
                                  for (const auto& f1 : all_functions(a1, b1))
                                    for (const auto& f2 : all_functions(a2, b2))
                                      for (const auto& g0 : all_functions(b0, c0))
                                        for (const auto& g1 : all_functions(b1, c1))
                                          for (const auto& g2 :
                                               all_functions(b2, c2))
                                            for (const auto& ac : S.cells_in_frame(
                                                     SpanDouble::pro(m),
                                                     SpanDouble::pro(m1),
                                                     SpanDouble::arr(f0),
                                                     SpanDouble::arr(f1)))
                                              for (const auto& bc :
                                                   S.cells_in_frame(
                                                       SpanDouble::pro(n),
                                                       SpanDouble::pro(n1),
                                                       SpanDouble::arr(f1),
                                                       SpanDouble::arr(f2)))
                                                for (const auto& gc :
                                                     S.cells_in_frame(
                                                         SpanDouble::pro(m1),
                                                         SpanDouble::pro(m2),
                                                         SpanDouble::arr(g0),
                                                         SpanDouble::arr(g1)))
                                                  for (const auto& dc :
                                                       S.cells_in_frame(
                                                           SpanDouble::pro(n1),
                                                           SpanDouble::pro(n2),
                                                           SpanDouble::arr(g1),
                                                           SpanDouble::arr(g2))) {
                                                    ++inter;
                                                    if (!interchange_holds(
                                                            SpanDouble::cell_of(ac),
                                                            SpanDouble::cell_of(bc),
                                                            SpanDouble::cell_of(gc),
                                                            SpanDouble::cell_of(dc)))
                                                      ++bad;
                                                  }

  // 200-case sampled suite at sizes <= 3 (fixed seed) for all three laws.
  SplitMix64 rng(1001);
  auto rand_fn = [&](const FinSet& a, const FinSet& b) {
    std::vector<int> t(a.size());
    for (auto& v : t) v = static_cast<int>(rng.below(b.size()));
    return FinFunction(a, b, t);
  };
  auto thick = [&](const FinSet& a, const FinSet& b) {
    FinSet apex = canonical_set(2 * a.size() * b.size());
    std::vector<int> l(apex.size()), r(apex.size());
    for (int k = 0; k < apex.size(); ++k) {
      l[k] = (k / 2) / b.size();
      r[k] = (k / 2) % b.size();
    }
    return SetSpan(FinFunction(apex, a, l), FinFunction(apex, b, r));
  };
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<FinSet> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(canonical_set(1 + rng.below(3)));
    SetSpan m = random_span(rng, xs[0], xs[1], 3);
    SetSpan n = random_span(rng, xs[1], xs[2], 3);
    SetSpan p = random_span(rng, xs[2], xs[3], 3);
    SetSpan q = random_span(rng, xs[3], xs[4], 3);
    ++pent;
    if (!pentagon_holds(m, n, p, q)) ++bad;
    ++tri;
    if (!triangle_holds(m, n)) ++bad;
    // Interchange grid over thick middle and bottom rows.
    std::vector<FinSet> ys, zs;
    for (int i = 0; i < 3; ++i) ys.push_back(canonical_set(1 + rng.below(2)));
    for (int i = 0; i < 3; ++i) zs.push_back(canonical_set(1 + rng.below(2)));
    SetSpan m1 = thick(ys[0], ys[1]);
    SetSpan n1 = thick(ys[1], ys[2]);
    SetSpan m2 = thick(zs[0], zs[1]);
    SetSpan n2 = thick(zs[1], zs[2]);
    FinFunction f0 = rand_fn(xs[0], ys[0]), f1 = rand_fn(xs[1], ys[1]),
                f2 = rand_fn(xs[2], ys[2]);
    FinFunction g0 = rand_fn(ys[0], zs[0]), g1 = rand_fn(ys[1], zs[1]),
                g2 = rand_fn(ys[2], zs[2]);
    auto as = S.cells_in_frame(SpanDouble::pro(m), SpanDouble::pro(m1),
                               SpanDouble::arr(f0), SpanDouble::arr(f1));
    auto bs = S.cells_in_frame(SpanDouble::pro(n), SpanDouble::pro(n1),
                               SpanDouble::arr(f1), SpanDouble::arr(f2));
    auto gs = S.cells_in_frame(SpanDouble::pro(m1), SpanDouble::pro(m2),
                               SpanDouble::arr(g0), SpanDouble::arr(g1));
    auto ds = S.cells_in_frame(SpanDouble::pro(n1), SpanDouble::pro(n2),
                               SpanDouble::arr(g1), SpanDouble::arr(g2));
    if (as.empty() || bs.empty() || gs.empty() || ds.empty()) continue;
    ++inter;
    if (!interchange_holds(SpanDouble::cell_of(as[rng.below(as.size())]),
                           SpanDouble::cell_of(bs[rng.below(bs.size())]),
                           SpanDouble::cell_of(gs[rng.below(gs.size())]),
                           SpanDouble::cell_of(ds[rng.below(ds.size())])))
      ++bad;
  }

  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << pent << " pentagon, " << tri << " triangle, " << inter
         << " interchange cases, " << secs << "s";
  report(1, bad == 0 && secs < 60.0, "span coherence suite", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 2: strength of coproducts

void criterion_2() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(2002);
  int iso = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto [m, n] = sample_span_composable_pair(rng, 3, false);
    ComparisonCell c = coproduct_composition_comparison(span_coprod, m, n);
    ComparisonCell cx = coproduct_identity_comparison(span_coprod, m.src);
    ++total;
    if (c.is_iso && c.equations_hold && cx.is_iso) ++iso;
  }
  SplitMix64 rng2(2003);
  for (int rep = 0; rep < 200; ++rep) {
    auto [m, n] = sample_mat_composable_pair(rng2, 2, false);
    ComparisonCell c = coproduct_composition_comparison(mat_coprod, m, n);
    ComparisonCell cx = coproduct_identity_comparison(mat_coprod, m.src);
    ++total;
    if (c.is_iso && c.equations_hold && cx.is_iso) ++iso;
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << iso << "/" << total << " iso, " << secs << "s";
  report(2, iso == total && secs < 60.0, "coproduct strength in Span and Mat",
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 3: the pinned laxity counterexample

void criterion_3() {
  std::ifstream in("tests/golden/counterexample.dcat.json", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  bool ok = false;
  std::ostringstream detail;
  try {
    Document d = parse_document(ss.str());
    FamProarrow m = doc_family_proarrow(d, "m");
    FamProarrow n = doc_family_proarrow(d, "n");
    IsoStrongVerdict v = check_iso_strong(span_prod, m, n);
    const SpanCell& cell = SpanDouble::cell_of(v.comparison.cell);
    ok = cell.top.apex.size() == 2 && cell.bottom.apex.size() == 4 &&
         !v.comparison.is_iso && !v.adjacent_legs_bijective &&
         v.comparison.equations_hold;
    detail << "source apex " << cell.top.apex.size() << ", target apex "
           << cell.bottom.apex.size() << ", iso=" << v.comparison.is_iso;
  } catch (const Error& e) {
    detail << e.what();
  }
  report(3, ok, "genuine laxity witness", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 4: the iso-strong law

void criterion_4() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(4004);
  int iso = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto [m, n] = sample_span_composable_pair(rng, 3, true);
    IsoStrongVerdict v = check_iso_strong(span_prod, m, n);
    ComparisonCell px = product_identity_comparison(span_prod, m.src);
    ++total;
    if (v.adjacent_legs_bijective && v.comparison.is_iso && px.is_iso) ++iso;
  }
  SplitMix64 rng2(4005);
  for (int rep = 0; rep < 200; ++rep) {
    auto [m, n] = sample_mat_composable_pair(rng2, 2, true);
    IsoStrongVerdict v = check_iso_strong(mat_prod, m, n);
    ComparisonCell px = product_identity_comparison(mat_prod, m.src);
    ++total;
    if (v.adjacent_legs_bijective && v.comparison.is_iso && px.is_iso) ++iso;
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << iso << "/" << total << " iso, " << secs << "s";
  report(4, iso == total, "iso-strong law in Span and Mat", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 5: universal-property verification with mutants

void criterion_5() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(5005);
  CheckOptions opt{3, 60000};
  int pass = 0, total = 0;
  long long cases = 0;
  for (int rep = 0; rep < 50; ++rep) {
    FamObject x = sample_span_fam_object(rng, 3, 3);
    FamObject y = sample_span_fam_object(rng, 3, 3);
    FamProarrow fam = sample_span_fam_pro(rng, x, y, 3, 3);
    UniversalCheckReport pr = check_universal_product(S, span_prod.product_pro(fam), opt);
    UniversalCheckReport cr = check_universal_coproduct(S, span_coprod.sum_pro(fam), opt);
    cases += pr.cases_tried + cr.cases_tried;
    total += 2;
    if (pr.ok()) ++pass;
    if (cr.ok()) ++pass;
  }

  // Mutation suite: a dropped limit constraint, a duplicated limit point, and
  // a redirected coprojection must each produce at least one failure.
  int mutants_caught = 0;
  {
    FamObject v2{canonical_index_set(1), {SpanDouble::ob(canonical_set(2))}};
    FinSet t2 = canonical_set(2);
    Pro c0 = SpanDouble::pro(
        SetSpan(FinFunction(t2, t2, {0, 1}), FinFunction(t2, t2, {0, 1})));
    Pro c1 = SpanDouble::pro(
        SetSpan(FinFunction(t2, t2, {0, 0}), FinFunction(t2, t2, {0, 1})));
    FamProarrow fam{v2, v2,
                    SetSpan(FinFunction(canonical_index_set(2), v2.indexing, {0, 0}),
                            FinFunction(canonical_index_set(2), v2.indexing, {0, 0})),
                    {c0, c1}};
    ProProduct good = span_prod.product_pro(fam);
    // Dropped constraint.
    {
      DiagramShape shape = elements_of_span_copresheaf(fam.indexing_span);
      SetDiagram diagram;
      diagram.shape = shape;
      diagram.shape.generators.erase(diagram.shape.generators.begin());
      diagram.on_objects.push_back(t2);
      for (const auto& c : fam.components)
        diagram.on_objects.push_back(SpanDouble::pro_of(c).apex);
      diagram.on_objects.push_back(t2);
      bool first = true;
      for (const auto& c : fam.components) {
        if (!first) diagram.on_generators.push_back(SpanDouble::pro_of(c).left);
        first = false;
        diagram.on_generators.push_back(SpanDouble::pro_of(c).right);
      }
      LimitResult lim = limit_of_diagram(diagram);
      FinFunction left = pair_fns(std::any_cast<const ProductSets&>(good.src.witness),
                                  lim.apex, {lim.legs[0]});
      FinFunction right = pair_fns(std::any_cast<const ProductSets&>(good.dst.witness),
                                   lim.apex, {lim.legs.back()});
      ProProduct dropped = good;
      SetSpan base(left, right);
      dropped.base = SpanDouble::pro(base);
      dropped.projections.clear();
      for (size_t a = 0; a < fam.components.size(); ++a)
        dropped.projections.push_back(SpanDouble::cell(
            SpanCell{base, SpanDouble::pro_of(fam.components[a]),
                     SpanDouble::arr_of(good.src.projections[0]),
                     SpanDouble::arr_of(good.dst.projections[0]), lim.legs[1 + a]}));
      if (!check_universal_product(S, dropped, CheckOptions{1, 50000}).ok())
        ++mutants_caught;
    }
    // Duplicated limit point.
    {
      const SetSpan& base = SpanDouble::pro_of(good.base);
      std::vector<std::string> elems = base.apex.elements();
      elems.push_back("dup");
      FinSet apex2("dupapex", elems);
      auto extend = [&](const FinFunction& f) {
        std::vector<int> t = f.table;
        t.push_back(f.table[0]);
        return FinFunction(apex2, f.cod, t);
      };
      ProProduct dup = good;
      SetSpan base2(extend(base.left), extend(base.right));
      dup.base = SpanDouble::pro(base2);
      dup.projections.clear();
      for (const auto& pc : good.projections) {
        const SpanCell& pa = SpanDouble::cell_of(pc);
        dup.projections.push_back(SpanDouble::cell(
            SpanCell{base2, pa.bottom, pa.left, pa.right, extend(pa.apex_map)}));
      }
      if (!check_universal_product(S, dup, CheckOptions{1, 200000}).ok())
        ++mutants_caught;
    }
    // Redirected coprojection.
    {
      FamObject one{canonical_index_set(1), {SpanDouble::ob(canonical_set(1))}};
      FinSet apex1 = canonical_set(1);
      Pro u = SpanDouble::pro(
          SetSpan(FinFunction(apex1, canonical_set(1), {0}),
                  FinFunction(apex1, canonical_set(1), {0})));
      FamProarrow cfam{one, one,
                       SetSpan(FinFunction(canonical_index_set(2), one.indexing, {0, 0}),
                               FinFunction(canonical_index_set(2), one.indexing, {0, 0})),
                       {u, u}};
      ProCoproduct cbad = span_coprod.sum_pro(cfam);
      const SpanCell& i1 = SpanDouble::cell_of(cbad.coprojections[1]);
      SpanCell redirected = i1;
      redirected.apex_map = FinFunction(i1.apex_map.dom, i1.apex_map.cod, {0});
      cbad.coprojections[1] = SpanDouble::cell(redirected);
      if (!check_universal_coproduct(S, cbad, CheckOptions{2, 400000}).ok())
        ++mutants_caught;
    }
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << pass << "/" << total << " checks pass over " << cases
         << " test data, 3/" << 3 << " mutants caught: " << mutants_caught
         << "/3, " << secs << "s";
  report(5, pass == total && mutants_caught == 3 && secs < 300.0,
         "bounded universal-property verification", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 6: the dictionary DblFam(1) = Span

void criterion_6() {
  FamSpanDictionaryReport rep = check_fam_terminal_iso_span(2);
  std::ostringstream detail;
  detail << rep.objects << " objects, " << rep.arrows << " arrows, "
         << rep.proarrows << " proarrows, " << rep.cells << " cells, "
         << rep.composition_checks << " composition checks";
  report(6, rep.ok(), "families over the terminal double category are spans",
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 7: companions, conjoints, structure arrows, diagonals

void criterion_7() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  long long checks = 0;
  // Base level: all functions between carriers of size <= 3.
  for (int a = 0; a <= 3 && ok; ++a)
    for (int b = 0; b <= 3 && ok; ++b) {
      Ob x = SpanDouble::ob(canonical_set(a));
      Ob y = SpanDouble::ob(canonical_set(b));
      for (const auto& f : S.arrows_between(x, y)) {
        ++checks;
        if (!companion_equations_hold(S, *S.companion(f)) ||
            !conjoint_equations_hold(S, *S.conjoint(f))) {
          ok = false;
          break;
        }
      }
    }
  // Family level: all index maps between index sets of size <= 3.
  FamDouble fam(S, Variance::covariant);
  for (int a = 0; a <= 3 && ok; ++a)
    for (int b = 0; b <= 3 && ok; ++b) {
      FamObject xx{canonical_index_set(a), {}};
      FamObject yy{canonical_index_set(b), {}};
      for (int i = 0; i < a; ++i)
        xx.assignment.push_back(SpanDouble::ob(canonical_set(2)));
      for (int j = 0; j < b; ++j)
        yy.assignment.push_back(SpanDouble::ob(canonical_set(2)));
      for (const auto& f0 : all_functions(xx.indexing, yy.indexing)) {
        FamArrow f{Variance::covariant, xx, yy, f0, {}};
        for (int i = 0; i < a; ++i)
          f.components.push_back(SpanDouble::arr(
              FinFunction(canonical_set(2), canonical_set(2), {1, 0})));
        ++checks;
        if (!companion_equations_hold(fam, *fam.companion(FamDouble::arr(f))) ||
            !conjoint_equations_hold(fam, *fam.conjoint(FamDouble::arr(f)))) {
          ok = false;
          break;
        }
      }
    }
  // Structure arrows: all reindexings f0 between index sets of size <= 3.
  for (int a = 1; a <= 3 && ok; ++a)
    for (int b = 0; b <= 3 && ok; ++b) {
      FamObject xx{canonical_index_set(a), {}};
      for (int i = 0; i < a; ++i)
        xx.assignment.push_back(SpanDouble::ob(canonical_set(2)));
      FinSet J = canonical_index_set(b);
      for (const auto& f0 : all_functions(J, xx.indexing)) {
        ++checks;
        StructureProarrow comp = structure_companion(span_prod, f0, xx);
        StructureProarrow conj = structure_conjoint(span_prod, f0, xx);
        if (!companion_equations_hold(S, comp.pair) ||
            !conjoint_equations_hold(S, conj.pair)) {
          ok = false;
          break;
        }
      }
    }
  // Diagonal proarrows for carriers of size <= 3.
  for (int sz = 0; sz <= 3 && ok; ++sz) {
    ++checks;
    DiagonalProarrow d = diagonal_proarrow(span_prod, SpanDouble::ob(canonical_set(sz)));
    if (!diagonal_equations_hold(span_prod, d) ||
        !companion_equations_hold(S, d.pair))
      ok = false;
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << checks << " binding-equation checks, " << secs << "s";
  report(7, ok, "companions, conjoints, structure arrows, diagonals", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 8: the characterization via restrictions

void criterion_8() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(8008);
  int good = 0, total = 0;
  for (int rep = 0; rep < 100; ++rep) {
    FamObject x = sample_span_fam_object(rng, 3, 3);
    FamObject y = sample_span_fam_object(rng, 3, 3);
    FamProarrow fam = sample_span_fam_pro(rng, x, y, 3, 3);
    ProductViaRestriction pvr = product_via_restriction(span_prod, fam);
    ProProduct direct = span_prod.product_pro(fam);
    bool this_ok = pvr.witness_is_iso;
    for (size_t a = 0; a < direct.projections.size() && this_ok; ++a)
      this_ok = S.compose_cells_vert(pvr.witness, direct.projections[a]) ==
                pvr.product.projections[a];
    ++total;
    if (this_ok) ++good;
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << good << "/" << total << " witnessed isos, " << secs << "s";
  report(8, good == total, "products via restrictions of parallel products",
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 9: duality between product and coproduct checks

void criterion_9() {
  auto start = std::chrono::steady_clock::now();
  OpDouble op(S);
  SplitMix64 rng(9009);
  int agree = 0, total = 0;
  CheckOptions opt{2, 20000};
  for (int rep = 0; rep < 50; ++rep) {
    FamObject x = sample_span_fam_object(rng, 2, 2);
    FamObject y = sample_span_fam_object(rng, 2, 2);
    FamProarrow fam = sample_span_fam_pro(rng, x, y, 2, 2);
    ProProduct p = span_prod.product_pro(fam);
    // Every fifth case is mutated so both checkers must also agree on fail.
    if (rep % 5 == 4 && SpanDouble::pro_of(p.base).apex.size() > 0) {
      const SetSpan& base = SpanDouble::pro_of(p.base);
      std::vector<std::string> elems = base.apex.elements();
      elems.push_back("dup");
      FinSet apex2("dupapex", elems);
      auto extend = [&](const FinFunction& f) {
        std::vector<int> t = f.table;
        t.push_back(f.table[0]);
        return FinFunction(apex2, f.cod, t);
      };
      SetSpan base2(extend(base.left), extend(base.right));
      p.base = SpanDouble::pro(base2);
      std::vector<Cell> projs;
      for (const auto& pc : p.projections) {
        const SpanCell& pa = SpanDouble::cell_of(pc);
        projs.push_back(SpanDouble::cell(
            SpanCell{base2, pa.bottom, pa.left, pa.right, extend(pa.apex_map)}));
      }
      p.projections = projs;
    }
    UniversalCheckReport direct = check_universal_product(S, p, opt);
    UniversalCheckReport dual =
        check_universal_coproduct(op, op_transport_product(p), opt);
    ++total;
    if (direct.ok() == dual.ok() && direct.cases_tried == dual.cases_tried &&
        direct.failures.size() == dual.failures.size())
      ++agree;
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << agree << "/" << total << " verdicts agree, " << secs << "s";
  report(9, agree == total, "op-duality of the universal checkers", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 10: the theory layer

std::vector<CMonCategory> cmon_corpus() {
  std::vector<CMonCategory> out;
  // Exhaustive one-object enrichments with hom size <= 2.
  for (int hsize = 1; hsize <= 2; ++hsize) {
    FinSet hom = canonical_set(hsize);
    std::vector<std::vector<int>> tables;
    std::vector<int> t(hsize * hsize, 0);
    while (true) {
      tables.push_back(t);
      int k = hsize * hsize - 1;
      while (k >= 0 && ++t[k] == hsize) t[k--] = 0;
      if (k < 0) break;
    }
    for (const auto& add : tables)
      for (int zero = 0; zero < hsize; ++zero)
        for (const auto& comp : tables)
          for (int ident = 0; ident < hsize; ++ident) {
            CMonCategory c;
            c.objects = FinSet("pt", {"*"});
            c.homs = {hom};
            c.add = {add};
            c.zero = {zero};
            c.identity = {ident};
            c.compose = {comp};
            if (!validate_cmon(c)) out.push_back(c);
          }
  }
  // Structured size-3 one-object enrichments.
  {
    CMonCategory z3;  // addition and multiplication mod 3
    z3.objects = FinSet("pt", {"*"});
    z3.homs = {FinSet("z3", {"0", "1", "2"})};
    z3.add = {{0, 1, 2, 1, 2, 0, 2, 0, 1}};
    z3.zero = {0};
    z3.identity = {1};
    z3.compose = {{0, 0, 0, 0, 1, 2, 0, 2, 1}};
    if (!validate_cmon(z3)) out.push_back(z3);
    CMonCategory mm;  // the min/max chain on three elements
    mm.objects = FinSet("pt", {"*"});
    mm.homs = {FinSet("chain", {"0", "1", "2"})};
    mm.add = {{0, 1, 2, 1, 1, 2, 2, 2, 2}};
    mm.zero = {0};
    mm.identity = {2};
    mm.compose = {{0, 0, 0, 0, 1, 1, 0, 1, 2}};
    if (!validate_cmon(mm)) out.push_back(mm);
  }
  // Two-object enrichments: all homs a shared monoid with bilinear
  // composition, plus a triangular variant with a trivial corner.
  {
    CMonCategory d;
    d.objects = FinSet("obs", {"a", "b"});
    FinSet z2("z2", {"0", "1"});
    d.homs = {z2, z2, z2, z2};
    d.add.assign(4, {0, 1, 1, 0});
    d.zero = {0, 0, 0, 0};
    d.identity = {1, 1};
    d.compose.assign(8, {0, 0, 0, 1});
    if (!validate_cmon(d)) out.push_back(d);
    CMonCategory e;
    e.objects = FinSet("obs", {"a", "b"});
    FinSet bol("bool", {"0", "1"});
    FinSet triv("one", {"0"});
    e.homs = {bol, bol, triv, bol};  // no maps b -> a beyond zero
    e.add = {{0, 1, 1, 1}, {0, 1, 1, 1}, {0}, {0, 1, 1, 1}};
    e.zero = {0, 0, 0, 0};
    e.identity = {1, 1};
    // compose[(a,b,c)] for (f: a->b, g: b->c): AND where defined.
    e.compose.assign(8, {});
    auto hom_index = [&](int a, int b) { return a * 2 + b; };
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          int hab = e.homs[hom_index(a, b)].size();
          int hbc = e.homs[hom_index(b, c)].size();
          int hac = e.homs[hom_index(a, c)].size();
          std::vector<int> table(hab * hbc, 0);
          for (int f = 0; f < hab; ++f)
            for (int g = 0; g < hbc; ++g) {
              int v = (hac == 1) ? 0 : ((f != 0 && g != 0) ? 1 : 0);
              table[f * hbc + g] = v;
            }
          e.compose[(a * 2 + b) * 2 + c] = table;
        }
    if (!validate_cmon(e)) out.push_back(e);
  }
  return out;
}

void criterion_10() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;

  TheoryCheckReport boolean_rep = check_model(boolean_lcmon_model());
  if (!boolean_rep.pass()) {
    ok = false;
    detail << "boolean model failed; ";
  }
  if (!check_model(trivial_lcmon_model()).pass()) {
    ok = false;
    detail << "trivial model failed; ";
  }

  auto has = [](const TheoryCheckReport& rep, const std::string& axiom) {
    for (const auto& v : rep.violations)
      if (v.axiom.rfind(axiom, 0) == 0) return true;
    return false;
  };
  int mutants = 0;
  {  // broken associativity: NAND composition
    ModelData m = boolean_lcmon_model();
    FinFunction lax = m.laxators[{"id:x", "id:x"}];
    m.laxators[{"id:x", "id:x"}] = FinFunction(lax.dom, lax.cod, {1, 1, 1, 0});
    TheoryCheckReport rep = check_model(m);
    if (!rep.pass() && has(rep, "laxator-associativity")) ++mutants;
  }
  {  // broken unit: the unitor picks the absorbing element
    ModelData m = boolean_lcmon_model();
    m.unitors["x"] =
        FinFunction(m.on_objects["x"], m.laxators[{"id:x", "id:x"}].cod, {0});
    TheoryCheckReport rep = check_model(m);
    if (!rep.pass() && has(rep, "unit-left")) ++mutants;
  }
  {  // broken laxator naturality: XOR composition against OR addition
    ModelData m = boolean_lcmon_model();
    FinFunction lax = m.laxators[{"id:x", "id:x"}];
    m.laxators[{"id:x", "id:x"}] = FinFunction(lax.dom, lax.cod, {0, 1, 1, 0});
    m.unitors["x"] = FinFunction(m.on_objects["x"], lax.cod, {0});
    TheoryCheckReport rep = check_model(m);
    if (!rep.pass() && has(rep, "laxator-naturality") &&
        !has(rep, "laxator-associativity") && !has(rep, "unit-"))
      ++mutants;
  }
  {  // broken product preservation: an override off the determined cell
    ModelData m = boolean_lcmon_model();
    ObjectWord x{{"x"}};
    ProWordPtr idx = word_id(x);
    ProWordPtr wedge = word_local_prod(x, x, {idx, idx});
    ModelEval ev(m);
    SpanCell derived = ev.laxator(wedge, wedge);
    std::vector<int> t = derived.apex_map.table;
    size_t other = 0;
    for (size_t i = 1; i < t.size(); ++i)
      if (t[i] != t[0]) other = i;
    std::swap(t[0], t[other]);
    m.laxator_overrides.push_back(
        {wedge, wedge, FinFunction(derived.apex_map.dom, derived.apex_map.cod, t)});
    TheoryCheckReport rep = check_model(m);
    if (!rep.pass() && has(rep, "product-preservation")) ++mutants;
  }
  {  // broken equation: first-projection multiplication breaks commutativity
    ModelData m = boolean_lcmon_model();
    FinFunction mu = m.on_cells["mu"];
    m.on_cells["mu"] = FinFunction(mu.dom, mu.cod, {0, 0, 1, 1});
    TheoryCheckReport rep = check_model(m);
    if (!rep.pass() && has(rep, "equation:comm")) ++mutants;
  }
  if (mutants != 5) {
    ok = false;
    detail << "only " << mutants << "/5 mutants pinpointed; ";
  }

  // Round trip over the generated corpus of enriched categories.
  std::vector<CMonCategory> corpus = cmon_corpus();
  int rt = 0;
  for (const auto& c : corpus) {
    ModelData m = cmon_to_model(c);
    if (!check_model(m).pass()) continue;
    if (model_to_cmon(m).signature() == c.signature() &&
        lcmon_model_signature(cmon_to_model(model_to_cmon(m))) ==
            lcmon_model_signature(m))
      ++rt;
  }
  if (rt != static_cast<int>(corpus.size())) {
    ok = false;
    detail << "round trips " << rt << "/" << corpus.size() << "; ";
  }
  double secs = seconds_since(start);
  detail << "5/5 mutants, " << corpus.size() << " enriched categories round trip, "
         << secs << "s";
  report(10, ok && secs < 60.0, "theory layer: Boolean model, mutants, round trip",
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 11: laxators at products are the determined cells

void criterion_11() {
  auto start = std::chrono::steady_clock::now();
  std::vector<ModelData> models = {boolean_lcmon_model(), trivial_lcmon_model()};
  for (const auto& c : cmon_corpus()) models.push_back(cmon_to_model(c));
  bool ok = true;
  long long checks = 0;
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  ProWordPtr wedge = word_local_prod(x, x, {idx, idx});
  ProWordPtr top = word_local_prod(x, x, {});
  std::vector<ProWordPtr> words = {idx, wedge, top};
  long long skipped = 0;
  for (const auto& m : models) {
    if (!check_model(m).pass()) continue;
    ModelEval ev(m);
    for (const auto& a : words)
      for (const auto& b : words) {
        if (a->kind != ProWord::Kind::prod && b->kind != ProWord::Kind::prod)
          continue;
        if (ev.laxator_product_size_estimate(a, b) > 300000) {
          ++skipped;
          continue;
        }
        ++checks;
        if (!(ev.laxator(a, b) == ev.laxator_via_product_law(a, b))) ok = false;
      }
  }
  double secs = seconds_since(start);
  std::ostringstream detail;
  detail << checks << " recomputations over " << models.size() << " models ("
         << skipped << " above the size cap), " << secs << "s";
  report(11, ok && checks > 0, "laxator-product law holds exactly", detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 12: DSL round trips and golden files

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_12() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  // 1000 randomized documents round trip byte-exactly.
  SplitMix64 rng(121212);
  int rt = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    Document d;
    int nsets = 1 + static_cast<int>(rng.below(3));
    std::vector<FinSet> sets;
    for (int i = 0; i < nsets; ++i) {
      int sz = static_cast<int>(rng.below(4));
      std::vector<std::string> elems;
      for (int e = 0; e < sz; ++e) elems.push_back("e" + std::to_string(e));
      sets.push_back(FinSet("set" + std::to_string(i), elems));
      put_finset(d, sets.back().name(), sets.back());
    }
    for (int i = 0; i < 2; ++i) {
      const FinSet& a = sets[rng.below(sets.size())];
      const FinSet& b = sets[rng.below(sets.size())];
      if (a.size() > 0 && b.size() == 0) continue;
      std::vector<int> t(a.size());
      for (auto& v : t) v = static_cast<int>(rng.below(std::max(1, b.size())));
      put_function(d, "fn" + std::to_string(i), FinFunction(a, b, t), a.name(),
                   b.name());
    }
    std::string printed = print_document(d);
    if (print_document(parse_document(printed)) == printed) ++rt;
  }
  if (rt != 1000) {
    ok = false;
    detail << "round trips " << rt << "/1000; ";
  }

  // Golden files are byte-stable: regenerate in memory and compare.
  auto check_golden = [&](const std::string& path, const std::string& regenerated) {
    std::string ondisk = slurp(path);
    if (ondisk != regenerated) {
      ok = false;
      detail << path << " not byte-stable; ";
    }
    // Reprinting the parsed file is the identity.
    if (print_document(parse_document(ondisk)) != ondisk) {
      ok = false;
      detail << path << " not a printing fixpoint; ";
    }
  };
  {
    FamObject one{canonical_index_set(1), {SpanDouble::ob(canonical_set(1))}};
    auto span11 = [&](int apex_size) {
      FinSet onec = canonical_set(1);
      FinSet apex = canonical_set(apex_size);
      std::vector<int> l(apex_size, 0), r(apex_size, 0);
      return SpanDouble::pro(
          SetSpan(FinFunction(apex, onec, l), FinFunction(apex, onec, r)));
    };
    auto local = [&](std::vector<Pro> comps) {
      int k = static_cast<int>(comps.size());
      FinSet apex = canonical_index_set(k);
      return FamProarrow{one, one,
                         SetSpan(FinFunction(apex, one.indexing, std::vector<int>(k, 0)),
                                 FinFunction(apex, one.indexing, std::vector<int>(k, 0))),
                         comps};
    };
    Document d;
    put_family_object(d, "onefam", one);
    put_family_proarrow_between(d, "m", local({span11(1), span11(1)}), "onefam",
                                "onefam");
    put_family_proarrow_between(d, "n", local({span11(2)}), "onefam", "onefam");
    check_golden("tests/golden/counterexample.dcat.json", print_document(d));
  }
  {
    Document d;
    put_theory(d, "lcmon", builtin_lcmon_theory());
    put_model(d, "boolean", boolean_lcmon_model(), "lcmon");
    check_golden("tests/golden/boolean_lcmon.dcat.json", print_document(d));
  }
  {
    ModelData m = boolean_lcmon_model();
    FinFunction mu = m.on_cells["mu"];
    m.on_cells["mu"] = FinFunction(mu.dom, mu.cod, {0, 0, 1, 1});
    Document d;
    put_report(d, "report", report_from_theory(check_model(m)));
    check_golden("tests/golden/failure_report.dcat.json", print_document(d));
  }
  {
    Document d;
    check_golden("tests/golden/empty.dcat.json", print_document(d));
  }
  double secs = seconds_since(start);
  detail << rt << "/1000 random docs, 4 golden files, " << secs << "s";
  report(12, ok, "DSL round trips and golden byte-stability", detail.str());
}

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << " in "
            << seconds_since(start) << "s\n";
  return g_failures == 0 ? 0 : 1;
}
