#include "dcat/universal.hpp"

#include <algorithm>
#include <map>

namespace dcat {

namespace {

const SpanDouble& SD = span_double();
const MatDouble& MD = mat_double();

// Iterates the cartesian product of the choice lists in mixed-radix order;
// fn returns false to stop the whole iteration.
template <typename T, typename Fn>
bool for_each_tuple(const std::vector<std::vector<T>>& choices, Fn&& fn) {
  for (const auto& c : choices)
    if (c.empty()) return true;  // no tuples at all
  std::vector<int> pick(choices.size(), 0);
  while (true) {
    std::vector<const T*> tup(choices.size());
    for (size_t k = 0; k < choices.size(); ++k) tup[k] = &choices[k][pick[k]];
    if (!fn(tup)) return false;
    int k = static_cast<int>(choices.size()) - 1;
    while (k >= 0 && ++pick[k] == static_cast<int>(choices[k].size())) pick[k--] = 0;
    if (k < 0) return true;
  }
}

struct SpanPiWitness {
  bool unitary = false;
  LimitResult lim;
  ProductSets src_ps, dst_ps;
  int num_left = 0, num_apex = 0, num_right = 0;
};

struct SpanSigmaWitness {
  CoproductSets apex_cp;
};

struct MatPiWitness {
  bool unitary = false;
  ProductSets src_ps, dst_ps;
  std::vector<ProductSets> entry_ps;  // row-major over (Πrows × Πcols)
};

struct MatSigmaWitness {
  CoproductSets row_cp, col_cp;
  std::vector<std::vector<int>> entry_sources;  // component indices per entry
  std::vector<CoproductSets> entry_cp;
};

std::vector<FinSet> span_sets_of(const FamObject& fam) {
  std::vector<FinSet> out;
  for (const auto& o : fam.assignment) out.push_back(SpanDouble::ob_of(o));
  return out;
}

bool is_identity_family(const DoubleCategory& d, const FamProarrow& fam) {
  if (!(fam.src == fam.dst)) return false;
  if (!(fam.indexing_span == SetSpan::identity(fam.src.indexing))) return false;
  for (size_t i = 0; i < fam.components.size(); ++i)
    if (fam.components[i] != d.id_pro(fam.src.assignment[i])) return false;
  return true;
}

}  // namespace

FamProarrow compose_families(const DoubleCategory& d, const FamProarrow& m,
                             const FamProarrow& n) {
  require(m.dst == n.src, Errc::not_composable, "families not composable");
  PullbackSets pb = pullback(m.indexing_span.right, n.indexing_span.left);
  FamProarrow out{m.src, n.dst,
                  SetSpan(compose_fn(pb.p1, m.indexing_span.left),
                          compose_fn(pb.p2, n.indexing_span.right)),
                  {}};
  for (int k = 0; k < pb.apex.size(); ++k)
    out.components.push_back(
        d.compose_pro(m.components[pb.p1.table[k]], n.components[pb.p2.table[k]]));
  return out;
}

FamProarrow identity_family(const DoubleCategory& d, const FamObject& x) {
  FamProarrow out{x, x, SetSpan::identity(x.indexing), {}};
  for (const auto& o : x.assignment) out.components.push_back(d.id_pro(o));
  return out;
}

// ---------------------------------------------------------------------------
// Span products (unitary choice)

ObjectProduct SpanProducts::product_objects(const FamObject& fam) const {
  ProductSets ps = product_sets(span_sets_of(fam));
  ObjectProduct out{fam, SpanDouble::ob(ps.prod), {}, ps};
  for (const auto& p : ps.projections) out.projections.push_back(SpanDouble::arr(p));
  return out;
}

ProProduct SpanProducts::product_pro(const FamProarrow& fam) const {
  ProProduct out;
  out.family = fam;
  out.src = product_objects(fam.src);
  out.dst = product_objects(fam.dst);
  SpanPiWitness w;
  w.src_ps = std::any_cast<ProductSets>(out.src.witness);
  w.dst_ps = std::any_cast<ProductSets>(out.dst.witness);
  w.num_left = fam.src.indexing.size();
  w.num_apex = fam.indexing_span.apex.size();
  w.num_right = fam.dst.indexing.size();
  if (is_identity_family(SD, fam)) {
    w.unitary = true;
    out.base = SD.id_pro(out.src.base);
    for (int i = 0; i < w.num_apex; ++i) {
      const FinFunction& pi = SpanDouble::arr_of(out.src.projections[i]);
      out.projections.push_back(SpanDouble::cell(
          SpanCell{SetSpan::identity(pi.dom), SetSpan::identity(pi.cod), pi, pi, pi}));
    }
    out.witness = w;
    return out;
  }
  DiagramShape shape = elements_of_span_copresheaf(fam.indexing_span);
  SetDiagram diagram;
  diagram.shape = shape;
  for (const auto& s : span_sets_of(fam.src)) diagram.on_objects.push_back(s);
  for (const auto& c : fam.components)
    diagram.on_objects.push_back(SpanDouble::pro_of(c).apex);
  for (const auto& s : span_sets_of(fam.dst)) diagram.on_objects.push_back(s);
  for (int a = 0; a < w.num_apex; ++a) {
    diagram.on_generators.push_back(SpanDouble::pro_of(fam.components[a]).left);
    diagram.on_generators.push_back(SpanDouble::pro_of(fam.components[a]).right);
  }
  diagram.validate();
  w.lim = limit_of_diagram(diagram);
  std::vector<FinFunction> left_legs(w.lim.legs.begin(), w.lim.legs.begin() + w.num_left);
  std::vector<FinFunction> right_legs(w.lim.legs.begin() + w.num_left + w.num_apex,
                                      w.lim.legs.end());
  FinFunction left = pair_fns(w.src_ps, w.lim.apex, left_legs);
  FinFunction right = pair_fns(w.dst_ps, w.lim.apex, right_legs);
  SetSpan base(left, right);
  out.base = SpanDouble::pro(base);
  for (int a = 0; a < w.num_apex; ++a) {
    out.projections.push_back(SpanDouble::cell(SpanCell{
        base, SpanDouble::pro_of(fam.components[a]),
        SpanDouble::arr_of(out.src.projections[fam.indexing_span.left.table[a]]),
        SpanDouble::arr_of(out.dst.projections[fam.indexing_span.right.table[a]]),
        w.lim.legs[w.num_left + a]}));
  }
  out.witness = w;
  return out;
}

Arr SpanProducts::pair_arrows(const ObjectProduct& p, const Ob& wo,
                              const std::vector<Arr>& legs) const {
  const ProductSets& ps = std::any_cast<const ProductSets&>(p.witness);
  std::vector<FinFunction> fns;
  for (const auto& l : legs) fns.push_back(SpanDouble::arr_of(l));
  return SpanDouble::arr(pair_fns(ps, SpanDouble::ob_of(wo), fns));
}

Cell SpanProducts::pair_cells(const ProProduct& p, const Pro& nh, const Arr& lefth,
                              const Arr& righth, const std::vector<Cell>& alphas) const {
  const SpanPiWitness& w = std::any_cast<const SpanPiWitness&>(p.witness);
  const SetSpan& n = SpanDouble::pro_of(nh);
  const FinFunction& left = SpanDouble::arr_of(lefth);
  const FinFunction& right = SpanDouble::arr_of(righth);
  require(static_cast<int>(alphas.size()) == w.num_apex, Errc::frame_mismatch,
          "pairing needs one cell per apex element");
  const SetSpan& base = SpanDouble::pro_of(p.base);
  if (w.unitary) {
    FinFunction apex = compose_fn(n.left, left);
    require(apex == compose_fn(n.right, right), Errc::frame_mismatch,
            "cone does not commute for the unitary product");
    return SpanDouble::cell(SpanCell{n, base, left, right, apex});
  }
  std::vector<int> t(n.apex.size());
  for (int e = 0; e < n.apex.size(); ++e) {
    std::vector<int> comps(w.num_left + w.num_apex + w.num_right);
    int lval = left.table[n.left.table[e]];
    int rval = right.table[n.right.table[e]];
    for (int i = 0; i < w.num_left; ++i)
      comps[i] = w.src_ps.projections[i].table[lval];
    for (int a = 0; a < w.num_apex; ++a)
      comps[w.num_left + a] = SpanDouble::cell_of(alphas[a]).apex_map.table[e];
    for (int j = 0; j < w.num_right; ++j)
      comps[w.num_left + w.num_apex + j] = w.dst_ps.projections[j].table[rval];
    int idx = w.lim.index_of(comps);
    require(idx >= 0, Errc::frame_mismatch, "cone does not factor through the limit");
    t[e] = idx;
  }
  return SpanDouble::cell(
      SpanCell{n, base, left, right, FinFunction(n.apex, base.apex, std::move(t))});
}

// ---------------------------------------------------------------------------
// Span coproducts

ObjectCoproduct SpanCoproducts::sum_objects(const FamObject& fam) const {
  CoproductSets cp = coproduct_sets(span_sets_of(fam));
  ObjectCoproduct out{fam, SpanDouble::ob(cp.sum), {}, cp};
  for (const auto& i : cp.injections) out.coprojections.push_back(SpanDouble::arr(i));
  return out;
}

ProCoproduct SpanCoproducts::sum_pro(const FamProarrow& fam) const {
  ProCoproduct out;
  out.family = fam;
  out.src = sum_objects(fam.src);
  out.dst = sum_objects(fam.dst);
  std::vector<FinSet> apexes;
  for (const auto& c : fam.components) apexes.push_back(SpanDouble::pro_of(c).apex);
  SpanSigmaWitness w{coproduct_sets(apexes)};
  std::vector<FinFunction> lefts, rights;
  for (size_t a = 0; a < fam.components.size(); ++a) {
    const SetSpan& comp = SpanDouble::pro_of(fam.components[a]);
    lefts.push_back(compose_fn(
        comp.left,
        SpanDouble::arr_of(out.src.coprojections[fam.indexing_span.left.table[a]])));
    rights.push_back(compose_fn(
        comp.right,
        SpanDouble::arr_of(out.dst.coprojections[fam.indexing_span.right.table[a]])));
  }
  FinFunction sleft = fam.components.empty()
                          ? FinFunction(w.apex_cp.sum, SpanDouble::ob_of(out.src.summit), {})
                          : copair_fns(w.apex_cp, lefts);
  FinFunction sright = fam.components.empty()
                           ? FinFunction(w.apex_cp.sum, SpanDouble::ob_of(out.dst.summit), {})
                           : copair_fns(w.apex_cp, rights);
  SetSpan summit(sleft, sright);
  out.summit = SpanDouble::pro(summit);
  for (size_t a = 0; a < fam.components.size(); ++a) {
    out.coprojections.push_back(SpanDouble::cell(SpanCell{
        SpanDouble::pro_of(fam.components[a]), summit,
        SpanDouble::arr_of(out.src.coprojections[fam.indexing_span.left.table[a]]),
        SpanDouble::arr_of(out.dst.coprojections[fam.indexing_span.right.table[a]]),
        w.apex_cp.injections[a]}));
  }
  out.witness = w;
  return out;
}

Arr SpanCoproducts::copair_arrows(const ObjectCoproduct& c, const Ob& wo,
                                  const std::vector<Arr>& legs) const {
  const CoproductSets& cp = std::any_cast<const CoproductSets&>(c.witness);
  std::vector<FinFunction> fns;
  for (const auto& l : legs) fns.push_back(SpanDouble::arr_of(l));
  if (fns.empty())
    return SpanDouble::arr(FinFunction(cp.sum, SpanDouble::ob_of(wo), {}));
  return SpanDouble::arr(copair_fns(cp, fns));
}

Cell SpanCoproducts::copair_cells(const ProCoproduct& c, const Pro& nh, const Arr& lefth,
                                  const Arr& righth,
                                  const std::vector<Cell>& alphas) const {
  const SetSpan& n = SpanDouble::pro_of(nh);
  const SetSpan& summit = SpanDouble::pro_of(c.summit);
  require(alphas.size() == c.coprojections.size(), Errc::frame_mismatch,
          "copairing needs one cell per apex element");
  std::vector<int> t;
  t.reserve(summit.apex.elements().size());
  for (size_t a = 0; a < alphas.size(); ++a) {
    const SpanCell& cell = SpanDouble::cell_of(alphas[a]);
    for (int v : cell.apex_map.table) t.push_back(v);
  }
  return SpanDouble::cell(SpanCell{summit, n, SpanDouble::arr_of(lefth),
                                   SpanDouble::arr_of(righth),
                                   FinFunction(summit.apex, n.apex, std::move(t))});
}

// ---------------------------------------------------------------------------
// Mat products and coproducts

ObjectProduct MatProducts::product_objects(const FamObject& fam) const {
  std::vector<FinSet> sets;
  for (const auto& o : fam.assignment) sets.push_back(MatDouble::ob_of(o));
  ProductSets ps = product_sets(sets);
  ObjectProduct out{fam, MatDouble::ob(ps.prod), {}, ps};
  for (const auto& p : ps.projections) out.projections.push_back(MatDouble::arr(p));
  return out;
}

ProProduct MatProducts::product_pro(const FamProarrow& fam) const {
  ProProduct out;
  out.family = fam;
  out.src = product_objects(fam.src);
  out.dst = product_objects(fam.dst);
  MatPiWitness w;
  w.src_ps = std::any_cast<ProductSets>(out.src.witness);
  w.dst_ps = std::any_cast<ProductSets>(out.dst.witness);
  int na = fam.indexing_span.apex.size();
  const FinSet& rows = MatDouble::ob_of(out.src.base);
  const FinSet& cols = MatDouble::ob_of(out.dst.base);
  if (is_identity_family(MD, fam)) {
    w.unitary = true;
    out.base = MD.id_pro(out.src.base);
    const MatProarrow& base = MatDouble::pro_of(out.base);
    for (int i = 0; i < na; ++i) {
      const FinFunction& pi = MatDouble::arr_of(out.src.projections[i]);
      MatProarrow bottom = mat_identity(pi.cod);
      MatCell cell{base, bottom, pi, pi, {}};
      for (int r = 0; r < rows.size(); ++r)
        for (int q = 0; q < rows.size(); ++q) {
          const FinSet& e = base.entry(r, q);
          const FinSet& tgt = bottom.entry(pi.table[r], pi.table[q]);
          cell.entry_maps.push_back(FinFunction(e, tgt, std::vector<int>(e.size(), 0)));
        }
      out.projections.push_back(MatDouble::cell(cell));
    }
    out.witness = w;
    return out;
  }
  MatProarrow base;
  base.src = rows;
  base.dst = cols;
  for (int r = 0; r < rows.size(); ++r)
    for (int q = 0; q < cols.size(); ++q) {
      std::vector<FinSet> factors;
      for (int a = 0; a < na; ++a) {
        const MatProarrow& comp = MatDouble::pro_of(fam.components[a]);
        int xi = w.src_ps.projections[fam.indexing_span.left.table[a]].table[r];
        int yj = w.dst_ps.projections[fam.indexing_span.right.table[a]].table[q];
        factors.push_back(comp.entry(xi, yj));
      }
      ProductSets ps = product_sets(factors);
      w.entry_ps.push_back(ps);
      base.entries.push_back(ps.prod);
    }
  out.base = MatDouble::pro(base);
  for (int a = 0; a < na; ++a) {
    const MatProarrow& comp = MatDouble::pro_of(fam.components[a]);
    const FinFunction& pr =
        MatDouble::arr_of(out.src.projections[fam.indexing_span.left.table[a]]);
    const FinFunction& pc =
        MatDouble::arr_of(out.dst.projections[fam.indexing_span.right.table[a]]);
    MatCell cell{base, comp, pr, pc, {}};
    for (int r = 0; r < rows.size(); ++r)
      for (int q = 0; q < cols.size(); ++q)
        cell.entry_maps.push_back(w.entry_ps[r * cols.size() + q].projections[a]);
    out.projections.push_back(MatDouble::cell(cell));
  }
  out.witness = w;
  return out;
}

Arr MatProducts::pair_arrows(const ObjectProduct& p, const Ob& wo,
                             const std::vector<Arr>& legs) const {
  const ProductSets& ps = std::any_cast<const ProductSets&>(p.witness);
  std::vector<FinFunction> fns;
  for (const auto& l : legs) fns.push_back(MatDouble::arr_of(l));
  return MatDouble::arr(pair_fns(ps, MatDouble::ob_of(wo), fns));
}

Cell MatProducts::pair_cells(const ProProduct& p, const Pro& nh, const Arr& lefth,
                             const Arr& righth, const std::vector<Cell>& alphas) const {
  const MatPiWitness& w = std::any_cast<const MatPiWitness&>(p.witness);
  const MatProarrow& n = MatDouble::pro_of(nh);
  const MatProarrow& base = MatDouble::pro_of(p.base);
  const FinFunction& left = MatDouble::arr_of(lefth);
  const FinFunction& right = MatDouble::arr_of(righth);
  MatCell out{n, base, left, right, {}};
  for (int r = 0; r < n.src.size(); ++r)
    for (int q = 0; q < n.dst.size(); ++q) {
      const FinSet& e = n.entry(r, q);
      int br = left.table[r], bq = right.table[q];
      const FinSet& tgt = base.entry(br, bq);
      std::vector<int> t(e.size());
      if (w.unitary) {
        require(e.size() == 0 || br == bq, Errc::frame_mismatch,
                "cone does not commute for the unitary product");
        std::fill(t.begin(), t.end(), 0);
      } else {
        const ProductSets& ps = w.entry_ps[br * base.dst.size() + bq];
        for (int k = 0; k < e.size(); ++k) {
          std::vector<int> comps(alphas.size());
          for (size_t a = 0; a < alphas.size(); ++a)
            comps[a] = MatDouble::cell_of(alphas[a]).entry_map(r, q).table[k];
          t[k] = ps.index_of_tuple(comps);
        }
      }
      out.entry_maps.push_back(FinFunction(e, tgt, std::move(t)));
    }
  return MatDouble::cell(out);
}

ObjectCoproduct MatCoproducts::sum_objects(const FamObject& fam) const {
  std::vector<FinSet> sets;
  for (const auto& o : fam.assignment) sets.push_back(MatDouble::ob_of(o));
  CoproductSets cp = coproduct_sets(sets);
  ObjectCoproduct out{fam, MatDouble::ob(cp.sum), {}, cp};
  for (const auto& i : cp.injections) out.coprojections.push_back(MatDouble::arr(i));
  return out;
}

ProCoproduct MatCoproducts::sum_pro(const FamProarrow& fam) const {
  ProCoproduct out;
  out.family = fam;
  out.src = sum_objects(fam.src);
  out.dst = sum_objects(fam.dst);
  MatSigmaWitness w;
  w.row_cp = std::any_cast<CoproductSets>(out.src.witness);
  w.col_cp = std::any_cast<CoproductSets>(out.dst.witness);
  const FinSet& rows = MatDouble::ob_of(out.src.summit);
  const FinSet& cols = MatDouble::ob_of(out.dst.summit);
  std::vector<std::pair<int, int>> row_dec, col_dec;
  for (size_t i = 0; i < fam.src.assignment.size(); ++i)
    for (int e = 0; e < MatDouble::ob_of(fam.src.assignment[i]).size(); ++e)
      row_dec.push_back({static_cast<int>(i), e});
  for (size_t j = 0; j < fam.dst.assignment.size(); ++j)
    for (int e = 0; e < MatDouble::ob_of(fam.dst.assignment[j]).size(); ++e)
      col_dec.push_back({static_cast<int>(j), e});
  MatProarrow summit;
  summit.src = rows;
  summit.dst = cols;
  int na = fam.indexing_span.apex.size();
  for (int r = 0; r < rows.size(); ++r)
    for (int q = 0; q < cols.size(); ++q) {
      auto [i, x] = row_dec[r];
      auto [j, y] = col_dec[q];
      std::vector<int> sources;
      std::vector<FinSet> summands;
      for (int a = 0; a < na; ++a)
        if (fam.indexing_span.left.table[a] == i &&
            fam.indexing_span.right.table[a] == j) {
          sources.push_back(a);
          summands.push_back(MatDouble::pro_of(fam.components[a]).entry(x, y));
        }
      CoproductSets cp = coproduct_sets(summands);
      w.entry_sources.push_back(sources);
      w.entry_cp.push_back(cp);
      summit.entries.push_back(cp.sum);
    }
  out.summit = MatDouble::pro(summit);
  for (int a = 0; a < na; ++a) {
    const MatProarrow& comp = MatDouble::pro_of(fam.components[a]);
    int i = fam.indexing_span.left.table[a];
    int j = fam.indexing_span.right.table[a];
    const FinFunction& ri = MatDouble::arr_of(out.src.coprojections[i]);
    const FinFunction& cj = MatDouble::arr_of(out.dst.coprojections[j]);
    MatCell cell{comp, summit, ri, cj, {}};
    for (int x = 0; x < comp.src.size(); ++x)
      for (int y = 0; y < comp.dst.size(); ++y) {
        int r = ri.table[x], q = cj.table[y];
        const auto& sources = w.entry_sources[r * cols.size() + q];
        int pos = static_cast<int>(
            std::find(sources.begin(), sources.end(), a) - sources.begin());
        cell.entry_maps.push_back(w.entry_cp[r * cols.size() + q].injections[pos]);
      }
    out.coprojections.push_back(MatDouble::cell(cell));
  }
  out.witness = w;
  return out;
}

Arr MatCoproducts::copair_arrows(const ObjectCoproduct& c, const Ob& wo,
                                 const std::vector<Arr>& legs) const {
  const CoproductSets& cp = std::any_cast<const CoproductSets&>(c.witness);
  std::vector<FinFunction> fns;
  for (const auto& l : legs) fns.push_back(MatDouble::arr_of(l));
  if (fns.empty()) return MatDouble::arr(FinFunction(cp.sum, MatDouble::ob_of(wo), {}));
  return MatDouble::arr(copair_fns(cp, fns));
}

Cell MatCoproducts::copair_cells(const ProCoproduct& c, const Pro& nh, const Arr& lefth,
                                 const Arr& righth,
                                 const std::vector<Cell>& alphas) const {
  const MatSigmaWitness& w = std::any_cast<const MatSigmaWitness&>(c.witness);
  const MatProarrow& n = MatDouble::pro_of(nh);
  const MatProarrow& summit = MatDouble::pro_of(c.summit);
  const FinFunction& left = MatDouble::arr_of(lefth);
  const FinFunction& right = MatDouble::arr_of(righth);
  MatCell out{summit, n, left, right, {}};
  for (int r = 0; r < summit.src.size(); ++r)
    for (int q = 0; q < summit.dst.size(); ++q) {
      const FinSet& e = summit.entry(r, q);
      const FinSet& tgt = n.entry(left.table[r], right.table[q]);
      const auto& sources = w.entry_sources[r * summit.dst.size() + q];
      std::vector<int> t;
      t.reserve(e.size());
      for (size_t pos = 0; pos < sources.size(); ++pos) {
        int a = sources[pos];
        const MatCell& ic = MatDouble::cell_of(c.coprojections[a]);
        const MatCell& ac = MatDouble::cell_of(alphas[a]);
        int x = -1, y = -1;
        for (int xx = 0; xx < ic.top.src.size() && x < 0; ++xx)
          if (ic.row_map.table[xx] == r) x = xx;
        for (int yy = 0; yy < ic.top.dst.size() && y < 0; ++yy)
          if (ic.col_map.table[yy] == q) y = yy;
        const FinFunction& am = ac.entry_map(x, y);
        for (int k = 0; k < am.dom.size(); ++k) t.push_back(am.table[k]);
      }
      out.entry_maps.push_back(FinFunction(e, tgt, std::move(t)));
    }
  return MatDouble::cell(out);
}

// ---------------------------------------------------------------------------
// DblFam coproducts and DblFamOp products

namespace {

OuterFamilyObject to_outer(const FamObject& fam) {
  OuterFamilyObject out{fam.indexing, {}};
  for (const auto& o : fam.assignment) out.families.push_back(FamDouble::ob_of(o));
  return out;
}

OuterFamilyProarrow to_outer_pro(const FamProarrow& fam) {
  OuterFamilyProarrow out{to_outer(fam.src), to_outer(fam.dst), fam.indexing_span, {}};
  for (const auto& p : fam.components) out.inner.push_back(FamDouble::pro_of(p));
  return out;
}

CoproductSets index_coproduct(const OuterFamilyObject& outer) {
  std::vector<FinSet> sets;
  for (const auto& f : outer.families) sets.push_back(f.indexing);
  return coproduct_sets(sets);
}

}  // namespace

ObjectCoproduct FamCoproducts::sum_objects(const FamObject& fam) const {
  OuterFamilyObject outer = to_outer(fam);
  FamObjectCoproduct oc = fam_fam_coproduct_objects(fam_.base(), outer);
  ObjectCoproduct out{fam, FamDouble::ob(oc.summit), {}, index_coproduct(outer)};
  for (const auto& i : oc.coprojections) out.coprojections.push_back(FamDouble::arr(i));
  return out;
}

ProCoproduct FamCoproducts::sum_pro(const FamProarrow& fam) const {
  OuterFamilyProarrow outer = to_outer_pro(fam);
  FamProCoproduct pc = fam_fam_coproduct(fam_.base(), outer);
  ProCoproduct out;
  out.family = fam;
  out.src = sum_objects(fam.src);
  out.dst = sum_objects(fam.dst);
  out.summit = FamDouble::pro(pc.summit);
  for (const auto& i : pc.coprojections) out.coprojections.push_back(FamDouble::cell(i));
  std::vector<FinSet> apexes;
  for (const auto& m : outer.inner) apexes.push_back(m.indexing_span.apex);
  out.witness = coproduct_sets(apexes);
  return out;
}

Arr FamCoproducts::copair_arrows(const ObjectCoproduct& c, const Ob& wo,
                                 const std::vector<Arr>& legs) const {
  const CoproductSets& cp = std::any_cast<const CoproductSets&>(c.witness);
  const FamObject& target = FamDouble::ob_of(wo);
  const FamObject& summit = FamDouble::ob_of(c.summit);
  std::vector<FinFunction> on_index;
  for (const auto& l : legs) on_index.push_back(FamDouble::arr_of(l).on_index);
  FamArrow out{Variance::covariant, summit, target,
               legs.empty() ? FinFunction(cp.sum, target.indexing, {})
                            : copair_fns(cp, on_index),
               {}};
  for (const auto& l : legs)
    for (const auto& comp : FamDouble::arr_of(l).components)
      out.components.push_back(comp);
  return FamDouble::arr(out);
}

Cell FamCoproducts::copair_cells(const ProCoproduct& c, const Pro& nh, const Arr& lefth,
                                 const Arr& righth,
                                 const std::vector<Cell>& alphas) const {
  const CoproductSets& cp = std::any_cast<const CoproductSets&>(c.witness);
  const FamProarrow& summit = FamDouble::pro_of(c.summit);
  const FamProarrow& n = FamDouble::pro_of(nh);
  const FamArrow& left = FamDouble::arr_of(lefth);
  const FamArrow& right = FamDouble::arr_of(righth);
  std::vector<FinFunction> apex_parts;
  std::vector<Cell> comps;
  for (const auto& a : alphas) {
    const FamCell& fc = FamDouble::cell_of(a);
    apex_parts.push_back(fc.on_spans.on_apex);
    for (const auto& cc : fc.components) comps.push_back(cc);
  }
  FinFunction on_apex = alphas.empty()
                            ? FinFunction(cp.sum, n.indexing_span.apex, {})
                            : copair_fns(cp, apex_parts);
  FamCell out{Variance::covariant, summit, n, left, right,
              SpanMorphism(summit.indexing_span, n.indexing_span, left.on_index,
                           on_apex, right.on_index),
              comps};
  return FamDouble::cell(out);
}

ObjectProduct FamOpProducts::product_objects(const FamObject& fam) const {
  OuterFamilyObject outer = to_outer(fam);
  FamObjectProduct oc = fam_fam_product_objects(fam_.base(), outer);
  ObjectProduct out{fam, FamDouble::ob(oc.base), {}, index_coproduct(outer)};
  for (const auto& i : oc.projections) out.projections.push_back(FamDouble::arr(i));
  return out;
}

ProProduct FamOpProducts::product_pro(const FamProarrow& fam) const {
  OuterFamilyProarrow outer = to_outer_pro(fam);
  FamProProduct pp = fam_fam_product(fam_.base(), outer);
  ProProduct out;
  out.family = fam;
  out.src = product_objects(fam.src);
  out.dst = product_objects(fam.dst);
  out.base = FamDouble::pro(pp.base);
  for (const auto& i : pp.projections) out.projections.push_back(FamDouble::cell(i));
  std::vector<FinSet> apexes;
  for (const auto& m : outer.inner) apexes.push_back(m.indexing_span.apex);
  out.witness = coproduct_sets(apexes);
  return out;
}

Arr FamOpProducts::pair_arrows(const ObjectProduct& p, const Ob& wo,
                               const std::vector<Arr>& legs) const {
  const CoproductSets& cp = std::any_cast<const CoproductSets&>(p.witness);
  const FamObject& w = FamDouble::ob_of(wo);
  const FamObject& base = FamDouble::ob_of(p.base);
  std::vector<FinFunction> on_index;
  for (const auto& l : legs) on_index.push_back(FamDouble::arr_of(l).on_index);
  FamArrow out{Variance::contravariant, w, base,
               legs.empty() ? FinFunction(cp.sum, w.indexing, {})
                            : copair_fns(cp, on_index),
               {}};
  for (const auto& l : legs)
    for (const auto& comp : FamDouble::arr_of(l).components)
      out.components.push_back(comp);
  return FamDouble::arr(out);
}

Cell FamOpProducts::pair_cells(const ProProduct& p, const Pro& nh, const Arr& lefth,
                               const Arr& righth,
                               const std::vector<Cell>& alphas) const {
  const CoproductSets& cp = std::any_cast<const CoproductSets&>(p.witness);
  const FamProarrow& base = FamDouble::pro_of(p.base);
  const FamProarrow& n = FamDouble::pro_of(nh);
  const FamArrow& left = FamDouble::arr_of(lefth);
  const FamArrow& right = FamDouble::arr_of(righth);
  std::vector<FinFunction> apex_parts;
  std::vector<Cell> comps;
  for (const auto& a : alphas) {
    const FamCell& fc = FamDouble::cell_of(a);
    apex_parts.push_back(fc.on_spans.on_apex);
    for (const auto& cc : fc.components) comps.push_back(cc);
  }
  FinFunction on_apex = alphas.empty()
                            ? FinFunction(cp.sum, n.indexing_span.apex, {})
                            : copair_fns(cp, apex_parts);
  FamCell out{Variance::contravariant, n, base, left, right,
              SpanMorphism(base.indexing_span, n.indexing_span, left.on_index,
                           on_apex, right.on_index),
              comps};
  return FamDouble::cell(out);
}

// ---------------------------------------------------------------------------
// Comparison cells

ComparisonCell product_composition_comparison(const ProductChoice& ch,
                                              const FamProarrow& m,
                                              const FamProarrow& n) {
  const DoubleCategory& d = ch.category();
  require(m.dst == n.src, Errc::not_composable, "families not composable");
  ProProduct pm = ch.product_pro(m);
  ProProduct pn = ch.product_pro(n);
  FamProarrow mn = compose_families(d, m, n);
  ProProduct pmn = ch.product_pro(mn);
  Pro source = d.compose_pro(pm.base, pn.base);
  PullbackSets pb = pullback(m.indexing_span.right, n.indexing_span.left);
  std::vector<Cell> alphas;
  for (int k = 0; k < pb.apex.size(); ++k)
    alphas.push_back(d.compose_cells_ext(pm.projections[pb.p1.table[k]],
                                         pn.projections[pb.p2.table[k]]));
  Arr idl = d.id_arrow(pm.src.base);
  Arr idr = d.id_arrow(pn.dst.base);
  ComparisonCell out{ComparisonKind::pi_comp,
                     ch.pair_cells(pmn, source, idl, idr, alphas), false, {}, true};
  for (size_t k = 0; k < alphas.size(); ++k)
    if (d.compose_cells_vert(out.cell, pmn.projections[k]) != alphas[k])
      out.equations_hold = false;
  out.is_iso = d.cell_is_iso(out.cell);
  if (out.is_iso) out.inverse = d.invert_cell(out.cell);
  return out;
}

ComparisonCell product_identity_comparison(const ProductChoice& ch, const FamObject& x) {
  const DoubleCategory& d = ch.category();
  ProProduct p = ch.product_pro(identity_family(d, x));
  ObjectProduct po = ch.product_objects(x);
  std::vector<Cell> alphas;
  for (const auto& pi : po.projections) alphas.push_back(d.id_cell_on_arrow(pi));
  Arr idl = d.id_arrow(po.base);
  ComparisonCell out{ComparisonKind::pi_id,
                     ch.pair_cells(p, d.id_pro(po.base), idl, idl, alphas), false, {},
                     true};
  for (size_t k = 0; k < alphas.size(); ++k)
    if (d.compose_cells_vert(out.cell, p.projections[k]) != alphas[k])
      out.equations_hold = false;
  out.is_iso = d.cell_is_iso(out.cell);
  if (out.is_iso) out.inverse = d.invert_cell(out.cell);
  return out;
}

ComparisonCell coproduct_composition_comparison(const CoproductChoice& ch,
                                                const FamProarrow& m,
                                                const FamProarrow& n) {
  const DoubleCategory& d = ch.category();
  require(m.dst == n.src, Errc::not_composable, "families not composable");
  ProCoproduct cm = ch.sum_pro(m);
  ProCoproduct cn = ch.sum_pro(n);
  FamProarrow mn = compose_families(d, m, n);
  ProCoproduct cmn = ch.sum_pro(mn);
  Pro target = d.compose_pro(cm.summit, cn.summit);
  PullbackSets pb = pullback(m.indexing_span.right, n.indexing_span.left);
  std::vector<Cell> alphas;
  for (int k = 0; k < pb.apex.size(); ++k)
    alphas.push_back(d.compose_cells_ext(cm.coprojections[pb.p1.table[k]],
                                         cn.coprojections[pb.p2.table[k]]));
  Arr idl = d.id_arrow(cm.src.summit);
  Arr idr = d.id_arrow(cn.dst.summit);
  ComparisonCell out{ComparisonKind::sigma_comp,
                     ch.copair_cells(cmn, target, idl, idr, alphas), false, {}, true};
  for (size_t k = 0; k < alphas.size(); ++k)
    if (d.compose_cells_vert(cmn.coprojections[k], out.cell) != alphas[k])
      out.equations_hold = false;
  out.is_iso = d.cell_is_iso(out.cell);
  if (out.is_iso) out.inverse = d.invert_cell(out.cell);
  return out;
}

ComparisonCell coproduct_identity_comparison(const CoproductChoice& ch,
                                             const FamObject& x) {
  const DoubleCategory& d = ch.category();
  ProCoproduct c = ch.sum_pro(identity_family(d, x));
  ObjectCoproduct co = ch.sum_objects(x);
  std::vector<Cell> alphas;
  for (const auto& i : co.coprojections) alphas.push_back(d.id_cell_on_arrow(i));
  Arr idl = d.id_arrow(co.summit);
  ComparisonCell out{ComparisonKind::sigma_id,
                     ch.copair_cells(c, d.id_pro(co.summit), idl, idl, alphas), false,
                     {}, true};
  for (size_t k = 0; k < alphas.size(); ++k)
    if (d.compose_cells_vert(c.coprojections[k], out.cell) != alphas[k])
      out.equations_hold = false;
  out.is_iso = d.cell_is_iso(out.cell);
  if (out.is_iso) out.inverse = d.invert_cell(out.cell);
  return out;
}

IsoStrongVerdict check_iso_strong(const ProductChoice& ch, const FamProarrow& m,
                                  const FamProarrow& n) {
  return IsoStrongVerdict{is_bijection(m.indexing_span.right) &&
                              is_bijection(n.indexing_span.left),
                          product_composition_comparison(ch, m, n)};
}

// ---------------------------------------------------------------------------
// Universal-property checkers

namespace {

struct Budget {
  long long left;
  bool exhausted = false;
  bool spend(long long n = 1) {
    if (exhausted) return false;
    left -= n;
    if (left < 0) exhausted = true;
    return !exhausted;
  }
};

std::string datum_desc(const char* what, const std::vector<const Arr*>& f,
                       const std::vector<const Arr*>& g, const Pro& n,
                       const std::vector<const Cell*>& alphas, long long count) {
  std::string s = std::string(what) + " count=" + std::to_string(count) + " n=" + n.enc;
  s += " f=[";
  for (size_t i = 0; i < f.size(); ++i) s += (i ? ";" : "") + f[i]->enc;
  s += "] g=[";
  for (size_t j = 0; j < g.size(); ++j) s += (j ? ";" : "") + g[j]->enc;
  s += "] alpha=[";
  for (size_t a = 0; a < alphas.size(); ++a) s += (a ? ";" : "") + alphas[a]->enc;
  s += "]";
  return s;
}

}  // namespace

UniversalCheckReport check_universal_product(const DoubleCategory& d,
                                             const ProProduct& cand,
                                             const CheckOptions& opt) {
  UniversalCheckReport rep;
  rep.property_kind = "product";
  rep.test_bound = opt.bound;
  const FamProarrow& fam = cand.family;
  size_t na = fam.components.size();
  if (cand.projections.size() != na)
    rep.failures.push_back("invalid-candidate: projection count mismatch");
  for (size_t i = 0; i < fam.src.assignment.size() && rep.failures.empty(); ++i) {
    const Arr& pi = cand.src.projections[i];
    if (d.arr_src(pi) != cand.src.base || d.arr_dst(pi) != fam.src.assignment[i])
      rep.failures.push_back("invalid-candidate: object projection " +
                             std::to_string(i) + " frame");
  }
  for (size_t a = 0; a < na && rep.failures.empty(); ++a) {
    const Cell& pa = cand.projections[a];
    if (d.cell_top(pa) != cand.base || d.cell_bottom(pa) != fam.components[a] ||
        d.cell_left(pa) != cand.src.projections[fam.indexing_span.left.table[a]] ||
        d.cell_right(pa) != cand.dst.projections[fam.indexing_span.right.table[a]]) {
      rep.failures.push_back("invalid-candidate: projection cell " +
                             std::to_string(a) + " frame");
      break;
    }
    if (auto diag = d.check_cell(pa)) {
      rep.failures.push_back("invalid-candidate: projection cell " +
                             std::to_string(a) + ": " + *diag);
      break;
    }
  }
  if (!rep.failures.empty()) return rep;

  Budget budget{opt.budget};
  std::vector<Ob> objs = d.objects(opt.bound);
  for (const Ob& w : objs) {
    std::vector<std::vector<Arr>> fch;
    for (const auto& xi : fam.src.assignment) fch.push_back(d.arrows_between(w, xi));
    bool keep_going = for_each_tuple(fch, [&](const std::vector<const Arr*>& f) {
      std::vector<Arr> hs;
      for (const Arr& h : d.arrows_between(w, cand.src.base)) {
        if (!budget.spend()) return false;
        bool ok = true;
        for (size_t i = 0; i < f.size() && ok; ++i)
          ok = d.compose_arrows(h, cand.src.projections[i]) == *f[i];
        if (ok) hs.push_back(h);
      }
      for (const Ob& z : objs) {
        std::vector<std::vector<Arr>> gch;
        for (const auto& yj : fam.dst.assignment)
          gch.push_back(d.arrows_between(z, yj));
        bool inner = for_each_tuple(gch, [&](const std::vector<const Arr*>& g) {
          std::vector<Arr> ks;
          for (const Arr& k : d.arrows_between(z, cand.dst.base)) {
            if (!budget.spend()) return false;
            bool ok = true;
            for (size_t j = 0; j < g.size() && ok; ++j)
              ok = d.compose_arrows(k, cand.dst.projections[j]) == *g[j];
            if (ok) ks.push_back(k);
          }
          for (const Pro& n : d.proarrows_between(w, z, opt.bound)) {
            std::map<std::string, long long> sig_count;
            for (const Arr& h : hs)
              for (const Arr& k : ks)
                for (const Cell& beta : d.cells_in_frame(n, cand.base, h, k)) {
                  if (!budget.spend()) return false;
                  std::string sig;
                  for (size_t a = 0; a < na; ++a)
                    sig += d.compose_cells_vert(beta, cand.projections[a]).enc + "|";
                  ++sig_count[sig];
                }
            std::vector<std::vector<Cell>> ach;
            for (size_t a = 0; a < na; ++a)
              ach.push_back(d.cells_in_frame(
                  n, fam.components[a], *f[fam.indexing_span.left.table[a]],
                  *g[fam.indexing_span.right.table[a]]));
            bool more = for_each_tuple(ach, [&](const std::vector<const Cell*>& al) {
              if (!budget.spend()) return false;
              ++rep.cases_tried;
              std::string sig;
              for (size_t a = 0; a < na; ++a) sig += al[a]->enc + "|";
              auto it = sig_count.find(sig);
              long long count = it == sig_count.end() ? 0 : it->second;
              if (count != 1)
                rep.failures.push_back(datum_desc("factorization", f, g, n, al, count));
              return true;
            });
            if (!more) return false;
          }
          return true;
        });
        if (!inner) return false;
      }
      return true;
    });
    if (!keep_going) break;
  }
  rep.partial = budget.exhausted;
  std::sort(rep.failures.begin(), rep.failures.end());
  return rep;
}

UniversalCheckReport check_universal_coproduct(const DoubleCategory& d,
                                               const ProCoproduct& cand,
                                               const CheckOptions& opt) {
  UniversalCheckReport rep;
  rep.property_kind = "coproduct";
  rep.test_bound = opt.bound;
  const FamProarrow& fam = cand.family;
  size_t na = fam.components.size();
  if (cand.coprojections.size() != na)
    rep.failures.push_back("invalid-candidate: coprojection count mismatch");
  for (size_t i = 0; i < fam.src.assignment.size() && rep.failures.empty(); ++i) {
    const Arr& ii = cand.src.coprojections[i];
    if (d.arr_src(ii) != fam.src.assignment[i] || d.arr_dst(ii) != cand.src.summit)
      rep.failures.push_back("invalid-candidate: object coprojection " +
                             std::to_string(i) + " frame");
  }
  for (size_t a = 0; a < na && rep.failures.empty(); ++a) {
    const Cell& ia = cand.coprojections[a];
    if (d.cell_bottom(ia) != cand.summit || d.cell_top(ia) != fam.components[a] ||
        d.cell_left(ia) != cand.src.coprojections[fam.indexing_span.left.table[a]] ||
        d.cell_right(ia) !=
            cand.dst.coprojections[fam.indexing_span.right.table[a]]) {
      rep.failures.push_back("invalid-candidate: coprojection cell " +
                             std::to_string(a) + " frame");
      break;
    }
    if (auto diag = d.check_cell(ia)) {
      rep.failures.push_back("invalid-candidate: coprojection cell " +
                             std::to_string(a) + ": " + *diag);
      break;
    }
  }
  if (!rep.failures.empty()) return rep;

  Budget budget{opt.budget};
  std::vector<Ob> objs = d.objects(opt.bound);
  for (const Ob& w : objs) {
    std::vector<std::vector<Arr>> fch;
    for (const auto& xi : fam.src.assignment) fch.push_back(d.arrows_between(xi, w));
    bool keep_going = for_each_tuple(fch, [&](const std::vector<const Arr*>& f) {
      std::vector<Arr> hs;
      for (const Arr& h : d.arrows_between(cand.src.summit, w)) {
        if (!budget.spend()) return false;
        bool ok = true;
        for (size_t i = 0; i < f.size() && ok; ++i)
          ok = d.compose_arrows(cand.src.coprojections[i], h) == *f[i];
        if (ok) hs.push_back(h);
      }
      for (const Ob& z : objs) {
        std::vector<std::vector<Arr>> gch;
        for (const auto& yj : fam.dst.assignment)
          gch.push_back(d.arrows_between(yj, z));
        bool inner = for_each_tuple(gch, [&](const std::vector<const Arr*>& g) {
          std::vector<Arr> ks;
          for (const Arr& k : d.arrows_between(cand.dst.summit, z)) {
            if (!budget.spend()) return false;
            bool ok = true;
            for (size_t j = 0; j < g.size() && ok; ++j)
              ok = d.compose_arrows(cand.dst.coprojections[j], k) == *g[j];
            if (ok) ks.push_back(k);
          }
          for (const Pro& n : d.proarrows_between(w, z, opt.bound)) {
            std::map<std::string, long long> sig_count;
            for (const Arr& h : hs)
              for (const Arr& k : ks)
                for (const Cell& beta : d.cells_in_frame(cand.summit, n, h, k)) {
                  if (!budget.spend()) return false;
                  std::string sig;
                  for (size_t a = 0; a < na; ++a)
                    sig +=
                        d.compose_cells_vert(cand.coprojections[a], beta).enc + "|";
                  ++sig_count[sig];
                }
            std::vector<std::vector<Cell>> ach;
            for (size_t a = 0; a < na; ++a)
              ach.push_back(d.cells_in_frame(
                  fam.components[a], n, *f[fam.indexing_span.left.table[a]],
                  *g[fam.indexing_span.right.table[a]]));
            bool more = for_each_tuple(ach, [&](const std::vector<const Cell*>& al) {
              if (!budget.spend()) return false;
              ++rep.cases_tried;
              std::string sig;
              for (size_t a = 0; a < na; ++a) sig += al[a]->enc + "|";
              auto it = sig_count.find(sig);
              long long count = it == sig_count.end() ? 0 : it->second;
              if (count != 1)
                rep.failures.push_back(
                    datum_desc("cofactorization", f, g, n, al, count));
              return true;
            });
            if (!more) return false;
          }
          return true;
        });
        if (!inner) return false;
      }
      return true;
    });
    if (!keep_going) break;
  }
  rep.partial = budget.exhausted;
  std::sort(rep.failures.begin(), rep.failures.end());
  return rep;
}

UniversalCheckReport check_cartesian(const DoubleCategory& d, const Cell& rho,
                                     const CheckOptions& opt) {
  UniversalCheckReport rep;
  rep.property_kind = "cartesian";
  rep.test_bound = opt.bound;
  if (auto diag = d.check_cell(rho)) {
    rep.failures.push_back("invalid-candidate: " + *diag);
    return rep;
  }
  Pro r = d.cell_top(rho);
  Pro n = d.cell_bottom(rho);
  Arr f = d.cell_left(rho);
  Arr g = d.cell_right(rho);
  Ob x = d.pro_src(r), y = d.pro_dst(r);
  Budget budget{opt.budget};
  std::vector<Ob> objs = d.objects(opt.bound);
  bool stop = false;
  for (const Ob& w : objs) {
    if (stop) break;
    for (const Arr& h : d.arrows_between(w, x)) {
      if (stop) break;
      Arr fh = d.compose_arrows(h, f);
      for (const Ob& z : objs) {
        if (stop) break;
        for (const Arr& k : d.arrows_between(z, y)) {
          if (stop) break;
          Arr gk = d.compose_arrows(k, g);
          for (const Pro& p : d.proarrows_between(w, z, opt.bound)) {
            if (stop) break;
            std::map<std::string, long long> sig_count;
            for (const Cell& beta : d.cells_in_frame(p, r, h, k)) {
              if (!budget.spend()) {
                stop = true;
                break;
              }
              ++sig_count[d.compose_cells_vert(beta, rho).enc];
            }
            if (stop) break;
            for (const Cell& gamma : d.cells_in_frame(p, n, fh, gk)) {
              if (!budget.spend()) {
                stop = true;
                break;
              }
              ++rep.cases_tried;
              auto it = sig_count.find(gamma.enc);
              long long count = it == sig_count.end() ? 0 : it->second;
              if (count != 1)
                rep.failures.push_back("restriction count=" + std::to_string(count) +
                                       " h=" + h.enc + " k=" + k.enc +
                                       " gamma=" + gamma.enc);
            }
          }
        }
      }
    }
  }
  rep.partial = budget.exhausted;
  std::sort(rep.failures.begin(), rep.failures.end());
  return rep;
}

UniversalCheckReport check_opcartesian(const DoubleCategory& d, const Cell& eps,
                                       const CheckOptions& opt) {
  UniversalCheckReport rep;
  rep.property_kind = "opcartesian";
  rep.test_bound = opt.bound;
  if (auto diag = d.check_cell(eps)) {
    rep.failures.push_back("invalid-candidate: " + *diag);
    return rep;
  }
  Pro m = d.cell_top(eps);
  Pro e = d.cell_bottom(eps);
  Arr f = d.cell_left(eps);
  Arr g = d.cell_right(eps);
  Ob w = d.pro_src(e), z = d.pro_dst(e);
  Budget budget{opt.budget};
  std::vector<Ob> objs = d.objects(opt.bound);
  bool stop = false;
  for (const Ob& w2 : objs) {
    if (stop) break;
    for (const Arr& h : d.arrows_between(w, w2)) {
      if (stop) break;
      Arr fh = d.compose_arrows(f, h);
      for (const Ob& z2 : objs) {
        if (stop) break;
        for (const Arr& k : d.arrows_between(z, z2)) {
          if (stop) break;
          Arr gk = d.compose_arrows(g, k);
          for (const Pro& p : d.proarrows_between(w2, z2, opt.bound)) {
            if (stop) break;
            std::map<std::string, long long> sig_count;
            for (const Cell& beta : d.cells_in_frame(e, p, h, k)) {
              if (!budget.spend()) {
                stop = true;
                break;
              }
              ++sig_count[d.compose_cells_vert(eps, beta).enc];
            }
            if (stop) break;
            for (const Cell& gamma : d.cells_in_frame(m, p, fh, gk)) {
              if (!budget.spend()) {
                stop = true;
                break;
              }
              ++rep.cases_tried;
              auto it = sig_count.find(gamma.enc);
              long long count = it == sig_count.end() ? 0 : it->second;
              if (count != 1)
                rep.failures.push_back("extension count=" + std::to_string(count) +
                                       " h=" + h.enc + " k=" + k.enc +
                                       " gamma=" + gamma.enc);
            }
          }
        }
      }
    }
  }
  rep.partial = budget.exhausted;
  std::sort(rep.failures.begin(), rep.failures.end());
  return rep;
}

ProCoproduct op_transport_product(const ProProduct& p) {
  ProCoproduct out;
  out.family = p.family;
  out.src = ObjectCoproduct{p.src.family, p.src.base, p.src.projections, {}};
  out.dst = ObjectCoproduct{p.dst.family, p.dst.base, p.dst.projections, {}};
  out.summit = p.base;
  out.coprojections = p.projections;
  return out;
}

// ---------------------------------------------------------------------------
// Structure arrows, diagonals, restriction characterization

Arr product_arrow(const ProductChoice& ch, const ObjectProduct& src,
                  const ObjectProduct& dst, const FamArrow& f) {
  require(f.variance == Variance::contravariant, Errc::frame_mismatch,
          "product arrows come from contravariant arrow families");
  const DoubleCategory& d = ch.category();
  std::vector<Arr> legs;
  for (size_t k = 0; k < f.components.size(); ++k)
    legs.push_back(
        d.compose_arrows(src.projections[f.on_index.table[k]], f.components[k]));
  return ch.pair_arrows(dst, src.base, legs);
}

StructureArrow structure_arrow(const ProductChoice& ch, const FinFunction& f0,
                               const FamObject& x) {
  require(f0.cod == x.indexing, Errc::assignment_mismatch, "f0 must reindex the family");
  const DoubleCategory& d = ch.category();
  FamObject y{f0.dom, {}};
  for (int j = 0; j < f0.dom.size(); ++j)
    y.assignment.push_back(x.assignment[f0.table[j]]);
  FamArrow f{Variance::contravariant, x, y, f0, {}};
  for (int j = 0; j < f0.dom.size(); ++j)
    f.components.push_back(d.id_arrow(y.assignment[j]));
  StructureArrow out{ch.product_objects(x), ch.product_objects(y), Arr{}};
  out.arrow = product_arrow(ch, out.src, out.dst, f);
  return out;
}

StructureProarrow structure_companion(const ProductChoice& ch, const FinFunction& f0,
                                      const FamObject& x) {
  const DoubleCategory& d = ch.category();
  StructureArrow sa = structure_arrow(ch, f0, x);
  const FamObject& y = sa.dst.family;
  FamProarrow fampro{x, y, SetSpan(f0, FinFunction::identity(f0.dom)), {}};
  for (int j = 0; j < f0.dom.size(); ++j)
    fampro.components.push_back(d.id_pro(y.assignment[j]));
  ProProduct prod = ch.product_pro(fampro);
  std::vector<Cell> unit_alphas;
  for (int j = 0; j < f0.dom.size(); ++j)
    unit_alphas.push_back(d.id_cell_on_arrow(sa.src.projections[f0.table[j]]));
  Cell unit = ch.pair_cells(prod, d.id_pro(sa.src.base), d.id_arrow(sa.src.base),
                            sa.arrow, unit_alphas);
  ProProduct unit_prod = ch.product_pro(identity_family(d, y));
  Cell counit = ch.pair_cells(unit_prod, prod.base, sa.arrow, d.id_arrow(sa.dst.base),
                              prod.projections);
  return StructureProarrow{sa, prod, CompanionPair{sa.arrow, prod.base, unit, counit}};
}

StructureProarrow structure_conjoint(const ProductChoice& ch, const FinFunction& f0,
                                     const FamObject& x) {
  const DoubleCategory& d = ch.category();
  StructureArrow sa = structure_arrow(ch, f0, x);
  const FamObject& y = sa.dst.family;
  FamProarrow fampro{y, x, SetSpan(FinFunction::identity(f0.dom), f0), {}};
  for (int j = 0; j < f0.dom.size(); ++j)
    fampro.components.push_back(d.id_pro(y.assignment[j]));
  ProProduct prod = ch.product_pro(fampro);
  std::vector<Cell> unit_alphas;
  for (int j = 0; j < f0.dom.size(); ++j)
    unit_alphas.push_back(d.id_cell_on_arrow(sa.src.projections[f0.table[j]]));
  Cell unit = ch.pair_cells(prod, d.id_pro(sa.src.base), sa.arrow,
                            d.id_arrow(sa.src.base), unit_alphas);
  ProProduct unit_prod = ch.product_pro(identity_family(d, y));
  Cell counit = ch.pair_cells(unit_prod, prod.base, d.id_arrow(sa.dst.base), sa.arrow,
                              prod.projections);
  return StructureProarrow{sa, prod, CompanionPair{sa.arrow, prod.base, unit, counit}};
}

DiagonalProarrow diagonal_proarrow(const ProductChoice& ch, const Ob& x) {
  FamObject fx{canonical_index_set(1), {x}};
  FinFunction bang(canonical_index_set(2), canonical_index_set(1), {0, 0});
  StructureProarrow sp = structure_companion(ch, bang, fx);
  return DiagonalProarrow{sp.product, sp.pair, sp.product.projections};
}

bool diagonal_equations_hold(const ProductChoice& ch, const DiagonalProarrow& diag) {
  const DoubleCategory& d = ch.category();
  const ObjectProduct& src = diag.product.src;
  for (const auto& pa : diag.projections) {
    Cell lhs = d.compose_cells_vert(diag.pair.unit, pa);
    if (lhs != d.id_cell_on_arrow(src.projections[0])) return false;
  }
  ProProduct unit_prod = ch.product_pro(identity_family(d, diag.product.dst.family));
  for (size_t a = 0; a < diag.projections.size(); ++a) {
    Cell lhs = d.compose_cells_vert(diag.pair.counit, unit_prod.projections[a]);
    if (lhs != diag.projections[a]) return false;
  }
  return true;
}

RestrictionOfProducts restriction_of_products(const ProductChoice& ch,
                                              const FamProarrow& n, const FamArrow& f,
                                              const FamArrow& g) {
  const DoubleCategory& d = ch.category();
  require(&d == static_cast<const DoubleCategory*>(&span_double()),
          Errc::missing_restriction,
          "componentwise restrictions are computed in Span");
  require(f.variance == Variance::contravariant &&
              g.variance == Variance::contravariant,
          Errc::frame_mismatch, "niche arrows are contravariant families");
  require(f.dst == n.src && g.dst == n.dst, Errc::frame_mismatch,
          "niche does not match the family");
  const SetSpan& bspan = n.indexing_span;
  FamProarrow restricted{f.src, g.src,
                         SetSpan(compose_fn(bspan.left, f.on_index),
                                 compose_fn(bspan.right, g.on_index)),
                         {}};
  std::vector<Cell> res_cells;
  for (int b = 0; b < bspan.apex.size(); ++b) {
    const SetSpan& nb = SpanDouble::pro_of(n.components[b]);
    const FinFunction& fk = SpanDouble::arr_of(f.components[bspan.left.table[b]]);
    const FinFunction& gl = SpanDouble::arr_of(g.components[bspan.right.table[b]]);
    SpanRestriction r = restrict_span(nb, fk, gl);
    restricted.components.push_back(SpanDouble::pro(r.restricted));
    res_cells.push_back(SpanDouble::cell(r.cartesian));
  }
  ProProduct rp = ch.product_pro(restricted);
  ProProduct np = ch.product_pro(n);
  Arr pf = product_arrow(ch, rp.src, np.src, f);
  Arr pg = product_arrow(ch, rp.dst, np.dst, g);
  std::vector<Cell> alphas;
  for (int b = 0; b < bspan.apex.size(); ++b)
    alphas.push_back(d.compose_cells_vert(rp.projections[b], res_cells[b]));
  Cell restriction = ch.pair_cells(np, rp.base, pf, pg, alphas);
  return RestrictionOfProducts{rp, restriction};
}

ProductViaRestriction product_via_restriction(const ProductChoice& ch,
                                              const FamProarrow& m) {
  const DoubleCategory& d = ch.category();
  require(&d == static_cast<const DoubleCategory*>(&span_double()),
          Errc::missing_restriction, "the characterization is computed in Span");
  const SetSpan& ix = m.indexing_span;
  const FinSet& A = ix.apex;
  FamObject src_par{A, {}}, dst_par{A, {}};
  for (int a = 0; a < A.size(); ++a) {
    src_par.assignment.push_back(m.src.assignment[ix.left.table[a]]);
    dst_par.assignment.push_back(m.dst.assignment[ix.right.table[a]]);
  }
  FamProarrow par{src_par, dst_par, SetSpan::identity(A), m.components};
  ProProduct parp = ch.product_pro(par);
  StructureArrow sl = structure_arrow(ch, ix.left, m.src);
  StructureArrow sr = structure_arrow(ch, ix.right, m.dst);
  SpanRestriction r =
      restrict_span(SpanDouble::pro_of(parp.base), SpanDouble::arr_of(sl.arrow),
                    SpanDouble::arr_of(sr.arrow));
  ProProduct assembled;
  assembled.family = m;
  assembled.src = sl.src;
  assembled.dst = sr.src;
  assembled.base = SpanDouble::pro(r.restricted);
  Cell cart = SpanDouble::cell(r.cartesian);
  for (int a = 0; a < A.size(); ++a)
    assembled.projections.push_back(d.compose_cells_vert(cart, parp.projections[a]));
  ProProduct direct = ch.product_pro(m);
  Cell witness = ch.pair_cells(direct, assembled.base, d.id_arrow(assembled.src.base),
                               d.id_arrow(assembled.dst.base), assembled.projections);
  return ProductViaRestriction{assembled, witness, d.cell_is_iso(witness)};
}

// ---------------------------------------------------------------------------
// Preservation comparisons

namespace {

FamObject map_fam_object(const DoubleFunctor& F, const FamObject& x) {
  FamObject out{x.indexing, {}};
  for (const auto& o : x.assignment) out.assignment.push_back(F.on_ob(o));
  return out;
}

FamProarrow map_family(const DoubleFunctor& F, const FamProarrow& m) {
  FamProarrow out{map_fam_object(F, m.src), map_fam_object(F, m.dst), m.indexing_span, {}};
  for (const auto& c : m.components) out.components.push_back(F.on_pro(c));
  return out;
}

}  // namespace

ArrowComparison coproduct_preservation_objects(const DoubleFunctor& F,
                                               const CoproductChoice& dom_ch,
                                               const CoproductChoice& cod_ch,
                                               const FamObject& x) {
  ObjectCoproduct dom = dom_ch.sum_objects(x);
  ObjectCoproduct cod = cod_ch.sum_objects(map_fam_object(F, x));
  std::vector<Arr> legs;
  for (const auto& i : dom.coprojections) legs.push_back(F.on_arr(i));
  Arr phi = cod_ch.copair_arrows(cod, F.on_ob(dom.summit), legs);
  return ArrowComparison{ComparisonKind::phi_ob, phi,
                         cod_ch.category().arrow_is_iso(phi)};
}

ComparisonCell coproduct_preservation_pro(const DoubleFunctor& F,
                                          const CoproductChoice& dom_ch,
                                          const CoproductChoice& cod_ch,
                                          const FamProarrow& m) {
  const DoubleCategory& e = cod_ch.category();
  ProCoproduct dom = dom_ch.sum_pro(m);
  ProCoproduct cod = cod_ch.sum_pro(map_family(F, m));
  ArrowComparison phix = coproduct_preservation_objects(F, dom_ch, cod_ch, m.src);
  ArrowComparison phiy = coproduct_preservation_objects(F, dom_ch, cod_ch, m.dst);
  std::vector<Cell> alphas;
  for (const auto& i : dom.coprojections) alphas.push_back(F.on_cell(i));
  ComparisonCell out{ComparisonKind::phi_pro,
                     cod_ch.copair_cells(cod, F.on_pro(dom.summit), phix.arrow,
                                         phiy.arrow, alphas),
                     false,
                     {},
                     true};
  for (size_t a = 0; a < alphas.size(); ++a)
    if (e.compose_cells_vert(cod.coprojections[a], out.cell) != alphas[a])
      out.equations_hold = false;
  out.is_iso = e.cell_is_iso(out.cell);
  if (out.is_iso) out.inverse = e.invert_cell(out.cell);
  return out;
}

ArrowComparison product_preservation_objects(const DoubleFunctor& F,
                                             const ProductChoice& dom_ch,
                                             const ProductChoice& cod_ch,
                                             const FamObject& x) {
  ObjectProduct dom = dom_ch.product_objects(x);
  ObjectProduct cod = cod_ch.product_objects(map_fam_object(F, x));
  std::vector<Arr> legs;
  for (const auto& p : dom.projections) legs.push_back(F.on_arr(p));
  Arr psi = cod_ch.pair_arrows(cod, F.on_ob(dom.base), legs);
  return ArrowComparison{ComparisonKind::psi_ob, psi,
                         cod_ch.category().arrow_is_iso(psi)};
}

ComparisonCell product_preservation_pro(const DoubleFunctor& F,
                                        const ProductChoice& dom_ch,
                                        const ProductChoice& cod_ch,
                                        const FamProarrow& m) {
  const DoubleCategory& e = cod_ch.category();
  ProProduct dom = dom_ch.product_pro(m);
  ProProduct cod = cod_ch.product_pro(map_family(F, m));
  ArrowComparison psix = product_preservation_objects(F, dom_ch, cod_ch, m.src);
  ArrowComparison psiy = product_preservation_objects(F, dom_ch, cod_ch, m.dst);
  std::vector<Cell> alphas;
  for (const auto& p : dom.projections) alphas.push_back(F.on_cell(p));
  ComparisonCell out{ComparisonKind::psi_pro,
                     cod_ch.pair_cells(cod, F.on_pro(dom.base), psix.arrow, psiy.arrow,
                                       alphas),
                     false,
                     {},
                     true};
  for (size_t a = 0; a < alphas.size(); ++a)
    if (e.compose_cells_vert(out.cell, cod.projections[a]) != alphas[a])
      out.equations_hold = false;
  out.is_iso = e.cell_is_iso(out.cell);
  if (out.is_iso) out.inverse = e.invert_cell(out.cell);
  return out;
}

// ---------------------------------------------------------------------------
// Samplers

FamObject sample_span_fam_object(SplitMix64& rng, int max_index, int max_carrier) {
  int k = static_cast<int>(rng.below(max_index + 1));
  FamObject out{canonical_index_set(k), {}};
  for (int i = 0; i < k; ++i)
    out.assignment.push_back(
        SpanDouble::ob(canonical_set(static_cast<int>(rng.below(max_carrier + 1)))));
  return out;
}

FamProarrow sample_span_fam_pro(SplitMix64& rng, const FamObject& x, const FamObject& y,
                                int max_index_apex, int max_span_apex) {
  int k = static_cast<int>(rng.below(max_index_apex + 1));
  if (x.indexing.size() == 0 || y.indexing.size() == 0) k = 0;
  FinSet apex = canonical_index_set(k);
  std::vector<int> l(k), r(k);
  for (auto& v : l) v = static_cast<int>(rng.below(x.indexing.size()));
  for (auto& v : r) v = static_cast<int>(rng.below(y.indexing.size()));
  FamProarrow out{x, y,
                  SetSpan(FinFunction(apex, x.indexing, l),
                          FinFunction(apex, y.indexing, r)),
                  {}};
  for (int a = 0; a < k; ++a) {
    const FinSet& xs = SpanDouble::ob_of(x.assignment[out.indexing_span.left.table[a]]);
    const FinSet& ys = SpanDouble::ob_of(y.assignment[out.indexing_span.right.table[a]]);
    int sz = static_cast<int>(rng.below(max_span_apex + 1));
    if (xs.size() == 0 || ys.size() == 0) sz = 0;
    FinSet sapex = canonical_set(sz);
    std::vector<int> sl(sz), sr(sz);
    for (auto& v : sl) v = static_cast<int>(rng.below(xs.size()));
    for (auto& v : sr) v = static_cast<int>(rng.below(ys.size()));
    out.components.push_back(SpanDouble::pro(
        SetSpan(FinFunction(sapex, xs, sl), FinFunction(sapex, ys, sr))));
  }
  return out;
}

namespace {

FinFunction random_permutation(SplitMix64& rng, const FinSet& a, const FinSet& b) {
  std::vector<int> t(a.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = static_cast<int>(i);
  for (size_t i = t.size(); i > 1; --i) std::swap(t[i - 1], t[rng.below(i)]);
  return FinFunction(a, b, t);
}

SetSpan empty_index_span(const FinSet& i, const FinSet& j) {
  return SetSpan(FinFunction(canonical_index_set(0), i, {}),
                 FinFunction(canonical_index_set(0), j, {}));
}

Pro random_span_component(SplitMix64& rng, const FinSet& xs, const FinSet& ys,
                          int max_apex) {
  int sz = static_cast<int>(rng.below(max_apex + 1));
  if (xs.size() == 0 || ys.size() == 0) sz = 0;
  FinSet sapex = canonical_set(sz);
  std::vector<int> sl(sz), sr(sz);
  for (auto& v : sl) v = static_cast<int>(rng.below(xs.size()));
  for (auto& v : sr) v = static_cast<int>(rng.below(ys.size()));
  return SpanDouble::pro(SetSpan(FinFunction(sapex, xs, sl), FinFunction(sapex, ys, sr)));
}

}  // namespace

std::pair<FamProarrow, FamProarrow> sample_span_composable_pair(SplitMix64& rng,
                                                                int max_size,
                                                                bool bijective_adjacent) {
  FamObject x = sample_span_fam_object(rng, max_size, max_size);
  FamObject y = sample_span_fam_object(rng, max_size, max_size);
  FamObject z = sample_span_fam_object(rng, max_size, max_size);
  if (!bijective_adjacent) {
    FamProarrow m = sample_span_fam_pro(rng, x, y, max_size, max_size);
    FamProarrow n = sample_span_fam_pro(rng, y, z, max_size, max_size);
    return {m, n};
  }
  // Adjacent legs A -> J, J <- B bijections; outer legs arbitrary. When an
  // outer index set is empty the middle one must be empty too, otherwise no
  // outer leg exists.
  if (x.indexing.size() == 0 || z.indexing.size() == 0) {
    y = FamObject{canonical_index_set(0), {}};
    FamProarrow m{x, y, empty_index_span(x.indexing, y.indexing), {}};
    FamProarrow n{y, z, empty_index_span(y.indexing, z.indexing), {}};
    return {m, n};
  }
  FinSet a = canonical_index_set(y.indexing.size());
  FinSet b = FinSet("jx" + std::to_string(y.indexing.size()), [&] {
    std::vector<std::string> e;
    for (int i = 0; i < y.indexing.size(); ++i) e.push_back("j" + std::to_string(i));
    return e;
  }());
  std::vector<int> ml(a.size()), nr(b.size());
  for (auto& v : ml) v = static_cast<int>(rng.below(x.indexing.size()));
  for (auto& v : nr) v = static_cast<int>(rng.below(z.indexing.size()));
  SetSpan ms(FinFunction(a, x.indexing, ml), random_permutation(rng, a, y.indexing));
  SetSpan ns(random_permutation(rng, b, y.indexing), FinFunction(b, z.indexing, nr));
  FamProarrow m{x, y, ms, {}};
  for (int i = 0; i < a.size(); ++i)
    m.components.push_back(random_span_component(
        rng, SpanDouble::ob_of(x.assignment[ms.left.table[i]]),
        SpanDouble::ob_of(y.assignment[ms.right.table[i]]), max_size));
  FamProarrow n{y, z, ns, {}};
  for (int i = 0; i < b.size(); ++i)
    n.components.push_back(random_span_component(
        rng, SpanDouble::ob_of(y.assignment[ns.left.table[i]]),
        SpanDouble::ob_of(z.assignment[ns.right.table[i]]), max_size));
  return {m, n};
}

FamObject sample_mat_fam_object(SplitMix64& rng, int max_index, int max_carrier) {
  int k = static_cast<int>(rng.below(max_index + 1));
  FamObject out{canonical_index_set(k), {}};
  for (int i = 0; i < k; ++i)
    out.assignment.push_back(
        MatDouble::ob(canonical_set(static_cast<int>(rng.below(max_carrier + 1)))));
  return out;
}

std::pair<FamProarrow, FamProarrow> sample_mat_composable_pair(SplitMix64& rng,
                                                               int max_size,
                                                               bool bijective_adjacent) {
  FamObject x = sample_mat_fam_object(rng, max_size, 2);
  FamObject y = sample_mat_fam_object(rng, max_size, 2);
  FamObject z = sample_mat_fam_object(rng, max_size, 2);
  auto mk_components = [&](FamProarrow& fam) {
    for (int a = 0; a < fam.indexing_span.apex.size(); ++a) {
      const FinSet& xs =
          MatDouble::ob_of(fam.src.assignment[fam.indexing_span.left.table[a]]);
      const FinSet& ys =
          MatDouble::ob_of(fam.dst.assignment[fam.indexing_span.right.table[a]]);
      MatProarrow mm{xs, ys, {}};
      for (int i = 0; i < xs.size() * ys.size(); ++i)
        mm.entries.push_back(canonical_set(static_cast<int>(rng.below(3))));
      fam.components.push_back(MatDouble::pro(mm));
    }
  };
  auto mk_random_span = [&](const FinSet& i, const FinSet& j) {
    int k = static_cast<int>(rng.below(max_size + 1));
    if (i.size() == 0 || j.size() == 0) k = 0;
    FinSet apex = canonical_index_set(k);
    std::vector<int> l(k), r(k);
    for (auto& v : l) v = static_cast<int>(rng.below(i.size()));
    for (auto& v : r) v = static_cast<int>(rng.below(j.size()));
    return SetSpan(FinFunction(apex, i, l), FinFunction(apex, j, r));
  };
  if (!bijective_adjacent) {
    FamProarrow m{x, y, mk_random_span(x.indexing, y.indexing), {}};
    mk_components(m);
    FamProarrow n{y, z, mk_random_span(y.indexing, z.indexing), {}};
    mk_components(n);
    return {m, n};
  }
  if (x.indexing.size() == 0 || z.indexing.size() == 0) {
    y = FamObject{canonical_index_set(0), {}};
    FamProarrow m{x, y, empty_index_span(x.indexing, y.indexing), {}};
    FamProarrow n{y, z, empty_index_span(y.indexing, z.indexing), {}};
    return {m, n};
  }
  FinSet a = canonical_index_set(y.indexing.size());
  FinSet b = FinSet("jx" + std::to_string(y.indexing.size()), [&] {
    std::vector<std::string> e;
    for (int i = 0; i < y.indexing.size(); ++i) e.push_back("j" + std::to_string(i));
    return e;
  }());
  std::vector<int> ml(a.size()), nr(b.size());
  for (auto& v : ml) v = static_cast<int>(rng.below(x.indexing.size()));
  for (auto& v : nr) v = static_cast<int>(rng.below(z.indexing.size()));
  FamProarrow m{x, y,
                SetSpan(FinFunction(a, x.indexing, ml),
                        random_permutation(rng, a, y.indexing)),
                {}};
  mk_components(m);
  FamProarrow n{y, z,
                SetSpan(random_permutation(rng, b, y.indexing),
                        FinFunction(b, z.indexing, nr)),
                {}};
  mk_components(n);
  return {m, n};
}

}  // namespace dcat
