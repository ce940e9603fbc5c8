#include "dcat/family.hpp"

#include <array>
#include <set>

namespace dcat {

std::string FamObject::enc() const {
  std::string s = "fob{" + indexing.enc();
  for (const auto& o : assignment) s += ";" + o.enc;
  return s + "}";
}

std::string FamArrow::enc() const {
  std::string s = variance == Variance::covariant ? "farr{" : "farr-op{";
  s += src.enc() + ";" + dst.enc() + ";" + on_index.enc();
  for (const auto& a : components) s += ";" + a.enc;
  return s + "}";
}

std::string FamProarrow::enc() const {
  std::string s = "fpro{" + src.enc() + ";" + dst.enc() + ";" + indexing_span.enc();
  for (const auto& m : components) s += ";" + m.enc;
  return s + "}";
}

std::string FamCell::enc() const {
  std::string s = variance == Variance::covariant ? "fcell{" : "fcell-op{";
  s += top.enc() + ";" + bottom.enc() + ";" + left.enc() + ";" + right.enc() + ";" +
       on_spans.enc();
  for (const auto& c : components) s += ";" + c.enc;
  return s + "}";
}

Ob FamDouble::ob(const FamObject& x) { return Ob{x.enc(), x}; }
Arr FamDouble::arr(const FamArrow& f) { return Arr{f.enc(), f}; }
Pro FamDouble::pro(const FamProarrow& m) { return Pro{m.enc(), m}; }
Cell FamDouble::cell(const FamCell& c) { return Cell{c.enc(), c}; }
const FamObject& FamDouble::ob_of(const Ob& o) {
  return std::any_cast<const FamObject&>(o.data);
}
const FamArrow& FamDouble::arr_of(const Arr& a) {
  return std::any_cast<const FamArrow&>(a.data);
}
const FamProarrow& FamDouble::pro_of(const Pro& p) {
  return std::any_cast<const FamProarrow&>(p.data);
}
const FamCell& FamDouble::cell_of(const Cell& c) {
  return std::any_cast<const FamCell&>(c.data);
}

Ob FamDouble::arr_src(const Arr& f) const { return ob(arr_of(f).src); }
Ob FamDouble::arr_dst(const Arr& f) const { return ob(arr_of(f).dst); }
Ob FamDouble::pro_src(const Pro& m) const { return ob(pro_of(m).src); }
Ob FamDouble::pro_dst(const Pro& m) const { return ob(pro_of(m).dst); }
Pro FamDouble::cell_top(const Cell& a) const { return pro(cell_of(a).top); }
Pro FamDouble::cell_bottom(const Cell& a) const { return pro(cell_of(a).bottom); }
Arr FamDouble::cell_left(const Cell& a) const { return arr(cell_of(a).left); }
Arr FamDouble::cell_right(const Cell& a) const { return arr(cell_of(a).right); }

Arr FamDouble::id_arrow(const Ob& xh) const {
  const FamObject& x = ob_of(xh);
  FamArrow f{variance_, x, x, FinFunction::identity(x.indexing), {}};
  for (const auto& o : x.assignment) f.components.push_back(base_.id_arrow(o));
  return arr(f);
}

Arr FamDouble::compose_arrows(const Arr& fh, const Arr& gh) const {
  const FamArrow& f = arr_of(fh);
  const FamArrow& g = arr_of(gh);
  require(f.variance == variance_ && g.variance == variance_, Errc::frame_mismatch,
          "arrow variance mismatch");
  require(f.dst == g.src, Errc::endpoint_mismatch, "arrows not composable");
  FamArrow out{variance_, f.src, g.dst, FinFunction(), {}};
  if (variance_ == Variance::covariant) {
    out.on_index = compose_fn(f.on_index, g.on_index);
    for (size_t i = 0; i < f.components.size(); ++i)
      out.components.push_back(
          base_.compose_arrows(f.components[i], g.components[f.on_index.table[i]]));
  } else {
    out.on_index = compose_fn(g.on_index, f.on_index);
    for (size_t k = 0; k < g.components.size(); ++k)
      out.components.push_back(
          base_.compose_arrows(f.components[g.on_index.table[k]], g.components[k]));
  }
  return arr(out);
}

Pro FamDouble::id_pro(const Ob& xh) const {
  const FamObject& x = ob_of(xh);
  FamProarrow m{x, x, SetSpan::identity(x.indexing), {}};
  for (const auto& o : x.assignment) m.components.push_back(base_.id_pro(o));
  return pro(m);
}

Pro FamDouble::compose_pro(const Pro& mh, const Pro& nh) const {
  const FamProarrow& m = pro_of(mh);
  const FamProarrow& n = pro_of(nh);
  require(m.dst == n.src, Errc::endpoint_mismatch, "family proarrows not composable");
  PullbackSets pb = pullback(m.indexing_span.right, n.indexing_span.left);
  FamProarrow out{m.src, n.dst,
                  SetSpan(compose_fn(pb.p1, m.indexing_span.left),
                          compose_fn(pb.p2, n.indexing_span.right)),
                  {}};
  for (int k = 0; k < pb.apex.size(); ++k)
    out.components.push_back(
        base_.compose_pro(m.components[pb.p1.table[k]], n.components[pb.p2.table[k]]));
  return pro(out);
}

Cell FamDouble::id_cell_on_pro(const Pro& mh) const {
  const FamProarrow& m = pro_of(mh);
  FamArrow l = arr_of(id_arrow(ob(m.src)));
  FamArrow r = arr_of(id_arrow(ob(m.dst)));
  FamCell c{variance_, m, m, l, r, SpanMorphism::identity(m.indexing_span), {}};
  for (const auto& comp : m.components) c.components.push_back(base_.id_cell_on_pro(comp));
  return cell(c);
}

Cell FamDouble::id_cell_on_arrow(const Arr& fh) const {
  const FamArrow& f = arr_of(fh);
  require(f.variance == variance_, Errc::frame_mismatch, "arrow variance mismatch");
  FamProarrow top = pro_of(id_pro(ob(f.src)));
  FamProarrow bottom = pro_of(id_pro(ob(f.dst)));
  SpanMorphism sm =
      variance_ == Variance::covariant
          ? SpanMorphism(top.indexing_span, bottom.indexing_span, f.on_index,
                         f.on_index, f.on_index)
          : SpanMorphism(bottom.indexing_span, top.indexing_span, f.on_index,
                         f.on_index, f.on_index);
  FamCell c{variance_, top, bottom, f, f, sm, {}};
  for (const auto& comp : f.components)
    c.components.push_back(base_.id_cell_on_arrow(comp));
  return cell(c);
}

Cell FamDouble::compose_cells_vert(const Cell& ah, const Cell& bh) const {
  const FamCell& a = cell_of(ah);
  const FamCell& b = cell_of(bh);
  require(a.variance == variance_ && b.variance == variance_, Errc::frame_mismatch,
          "cell variance mismatch");
  require(a.bottom == b.top, Errc::frame_mismatch, "vertical composite frames");
  FamArrow l = arr_of(compose_arrows(arr(a.left), arr(b.left)));
  FamArrow r = arr_of(compose_arrows(arr(a.right), arr(b.right)));
  FamCell out{variance_, a.top, b.bottom, l, r, SpanMorphism(), {}};
  if (variance_ == Variance::covariant) {
    out.on_spans = SpanMorphism(
        a.top.indexing_span, b.bottom.indexing_span,
        compose_fn(a.on_spans.on_left, b.on_spans.on_left),
        compose_fn(a.on_spans.on_apex, b.on_spans.on_apex),
        compose_fn(a.on_spans.on_right, b.on_spans.on_right));
    for (size_t k = 0; k < a.components.size(); ++k)
      out.components.push_back(base_.compose_cells_vert(
          a.components[k], b.components[a.on_spans.on_apex.table[k]]));
  } else {
    out.on_spans = SpanMorphism(
        b.bottom.indexing_span, a.top.indexing_span,
        compose_fn(b.on_spans.on_left, a.on_spans.on_left),
        compose_fn(b.on_spans.on_apex, a.on_spans.on_apex),
        compose_fn(b.on_spans.on_right, a.on_spans.on_right));
    for (size_t k = 0; k < b.components.size(); ++k)
      out.components.push_back(base_.compose_cells_vert(
          a.components[b.on_spans.on_apex.table[k]], b.components[k]));
  }
  return cell(out);
}

Cell FamDouble::compose_cells_ext(const Cell& ah, const Cell& bh) const {
  const FamCell& a = cell_of(ah);
  const FamCell& b = cell_of(bh);
  require(a.variance == variance_ && b.variance == variance_, Errc::frame_mismatch,
          "cell variance mismatch");
  require(a.right == b.left, Errc::frame_mismatch, "external composite frames");
  FamProarrow top = pro_of(compose_pro(pro(a.top), pro(b.top)));
  FamProarrow bottom = pro_of(compose_pro(pro(a.bottom), pro(b.bottom)));
  PullbackSets ptop = pullback(a.top.indexing_span.right, b.top.indexing_span.left);
  PullbackSets pbot =
      pullback(a.bottom.indexing_span.right, b.bottom.indexing_span.left);
  FamCell out{variance_, top, bottom, a.left, b.right, SpanMorphism(), {}};
  if (variance_ == Variance::covariant) {
    std::vector<int> t(ptop.apex.size());
    for (int k = 0; k < ptop.apex.size(); ++k)
      t[k] = pbot.index_of_pair(a.on_spans.on_apex.table[ptop.p1.table[k]],
                                b.on_spans.on_apex.table[ptop.p2.table[k]]);
    out.on_spans = SpanMorphism(top.indexing_span, bottom.indexing_span,
                                a.on_spans.on_left,
                                FinFunction(ptop.apex, pbot.apex, std::move(t)),
                                b.on_spans.on_right);
    for (int k = 0; k < ptop.apex.size(); ++k)
      out.components.push_back(base_.compose_cells_ext(
          a.components[ptop.p1.table[k]], b.components[ptop.p2.table[k]]));
  } else {
    std::vector<int> t(pbot.apex.size());
    for (int k = 0; k < pbot.apex.size(); ++k)
      t[k] = ptop.index_of_pair(a.on_spans.on_apex.table[pbot.p1.table[k]],
                                b.on_spans.on_apex.table[pbot.p2.table[k]]);
    out.on_spans = SpanMorphism(bottom.indexing_span, top.indexing_span,
                                a.on_spans.on_left,
                                FinFunction(pbot.apex, ptop.apex, std::move(t)),
                                b.on_spans.on_right);
    for (int k = 0; k < pbot.apex.size(); ++k)
      out.components.push_back(base_.compose_cells_ext(
          a.components[pbot.p1.table[k]], b.components[pbot.p2.table[k]]));
  }
  return cell(out);
}

Cell FamDouble::associator(const Pro& mh, const Pro& nh, const Pro& ph) const {
  const FamProarrow& m = pro_of(mh);
  const FamProarrow& n = pro_of(nh);
  const FamProarrow& p = pro_of(ph);
  FamProarrow lhs = pro_of(compose_pro(compose_pro(mh, nh), ph));
  FamProarrow rhs = pro_of(compose_pro(mh, compose_pro(nh, ph)));
  const SetSpan& A = m.indexing_span;
  const SetSpan& B = n.indexing_span;
  const SetSpan& C = p.indexing_span;
  SetSpan AB = span_compose(A, B);
  SetSpan BC = span_compose(B, C);
  PullbackSets p_ab = pullback(A.right, B.left);
  PullbackSets p_ab_c = pullback(AB.right, C.left);
  PullbackSets p_bc = pullback(B.right, C.left);
  PullbackSets p_a_bc = pullback(A.right, BC.left);
  int lhs_size = lhs.indexing_span.apex.size();
  std::vector<int> fwd(lhs_size);
  std::vector<std::array<int, 3>> lhs_parts(lhs_size);
  for (int k = 0; k < lhs_size; ++k) {
    int st = p_ab_c.p1.table[k];
    int c = p_ab_c.p2.table[k];
    int a = p_ab.p1.table[st];
    int b = p_ab.p2.table[st];
    lhs_parts[k] = {a, b, c};
    fwd[k] = p_a_bc.index_of_pair(a, p_bc.index_of_pair(b, c));
  }
  FinFunction apex_fwd(lhs.indexing_span.apex, rhs.indexing_span.apex, fwd);
  FamArrow l = arr_of(id_arrow(ob(m.src)));
  FamArrow r = arr_of(id_arrow(ob(p.dst)));
  FamCell out{variance_, lhs, rhs, l, r, SpanMorphism(), {}};
  if (variance_ == Variance::covariant) {
    out.on_spans = SpanMorphism(lhs.indexing_span, rhs.indexing_span,
                                FinFunction::identity(lhs.indexing_span.left_foot),
                                apex_fwd,
                                FinFunction::identity(lhs.indexing_span.right_foot));
    for (int k = 0; k < lhs_size; ++k) {
      auto [a, b, c] = lhs_parts[k];
      out.components.push_back(
          base_.associator(m.components[a], n.components[b], p.components[c]));
    }
  } else {
    FinFunction apex_bwd = invert_bijection(apex_fwd);
    out.on_spans = SpanMorphism(rhs.indexing_span, lhs.indexing_span,
                                FinFunction::identity(rhs.indexing_span.left_foot),
                                apex_bwd,
                                FinFunction::identity(rhs.indexing_span.right_foot));
    for (int k = 0; k < rhs.indexing_span.apex.size(); ++k) {
      auto [a, b, c] = lhs_parts[apex_bwd.table[k]];
      out.components.push_back(
          base_.associator(m.components[a], n.components[b], p.components[c]));
    }
  }
  return cell(out);
}

Cell FamDouble::left_unitor(const Pro& mh) const {
  const FamProarrow& m = pro_of(mh);
  FamProarrow lhs = pro_of(compose_pro(id_pro(ob(m.src)), pro(m)));
  SetSpan id_span = SetSpan::identity(m.src.indexing);
  PullbackSets pb = pullback(id_span.right, m.indexing_span.left);
  std::vector<int> fwd(pb.apex.size());
  for (int k = 0; k < pb.apex.size(); ++k) fwd[k] = pb.p2.table[k];
  FinFunction apex_fwd(lhs.indexing_span.apex, m.indexing_span.apex, fwd);
  FamArrow l = arr_of(id_arrow(ob(m.src)));
  FamArrow r = arr_of(id_arrow(ob(m.dst)));
  FamCell out{variance_, lhs, m, l, r, SpanMorphism(), {}};
  if (variance_ == Variance::covariant) {
    out.on_spans = SpanMorphism(lhs.indexing_span, m.indexing_span,
                                FinFunction::identity(m.src.indexing), apex_fwd,
                                FinFunction::identity(m.dst.indexing));
    for (int k = 0; k < pb.apex.size(); ++k)
      out.components.push_back(base_.left_unitor(m.components[pb.p2.table[k]]));
  } else {
    FinFunction apex_bwd = invert_bijection(apex_fwd);
    out.on_spans = SpanMorphism(m.indexing_span, lhs.indexing_span,
                                FinFunction::identity(m.src.indexing), apex_bwd,
                                FinFunction::identity(m.dst.indexing));
    for (size_t a = 0; a < m.components.size(); ++a)
      out.components.push_back(base_.left_unitor(m.components[a]));
  }
  return cell(out);
}

Cell FamDouble::right_unitor(const Pro& mh) const {
  const FamProarrow& m = pro_of(mh);
  FamProarrow lhs = pro_of(compose_pro(pro(m), id_pro(ob(m.dst))));
  SetSpan id_span = SetSpan::identity(m.dst.indexing);
  PullbackSets pb = pullback(m.indexing_span.right, id_span.left);
  std::vector<int> fwd(pb.apex.size());
  for (int k = 0; k < pb.apex.size(); ++k) fwd[k] = pb.p1.table[k];
  FinFunction apex_fwd(lhs.indexing_span.apex, m.indexing_span.apex, fwd);
  FamArrow l = arr_of(id_arrow(ob(m.src)));
  FamArrow r = arr_of(id_arrow(ob(m.dst)));
  FamCell out{variance_, lhs, m, l, r, SpanMorphism(), {}};
  if (variance_ == Variance::covariant) {
    out.on_spans = SpanMorphism(lhs.indexing_span, m.indexing_span,
                                FinFunction::identity(m.src.indexing), apex_fwd,
                                FinFunction::identity(m.dst.indexing));
    for (int k = 0; k < pb.apex.size(); ++k)
      out.components.push_back(base_.right_unitor(m.components[pb.p1.table[k]]));
  } else {
    FinFunction apex_bwd = invert_bijection(apex_fwd);
    out.on_spans = SpanMorphism(m.indexing_span, lhs.indexing_span,
                                FinFunction::identity(m.src.indexing), apex_bwd,
                                FinFunction::identity(m.dst.indexing));
    for (size_t a = 0; a < m.components.size(); ++a)
      out.components.push_back(base_.right_unitor(m.components[a]));
  }
  return cell(out);
}

bool FamDouble::arrow_is_iso(const Arr& fh) const {
  const FamArrow& f = arr_of(fh);
  if (!is_bijection(f.on_index)) return false;
  for (const auto& c : f.components)
    if (!base_.arrow_is_iso(c)) return false;
  return true;
}

bool FamDouble::cell_is_iso(const Cell& ah) const {
  const FamCell& a = cell_of(ah);
  if (!is_bijection(a.on_spans.on_left) || !is_bijection(a.on_spans.on_apex) ||
      !is_bijection(a.on_spans.on_right))
    return false;
  if (!arrow_is_iso(arr(a.left)) || !arrow_is_iso(arr(a.right))) return false;
  for (const auto& c : a.components)
    if (!base_.cell_is_iso(c)) return false;
  return true;
}

Arr FamDouble::invert_arrow(const Arr& fh) const {
  require(arrow_is_iso(fh), Errc::invalid_argument, "invert_arrow: not invertible");
  const FamArrow& f = arr_of(fh);
  FamArrow inv{variance_, f.dst, f.src, invert_bijection(f.on_index), {}};
  if (variance_ == Variance::covariant) {
    // Components of the inverse are indexed by f.dst; pull each back along
    // the inverse reindexing.
    for (int j = 0; j < f.dst.indexing.size(); ++j)
      inv.components.push_back(base_.invert_arrow(f.components[inv.on_index.table[j]]));
  } else {
    for (int i = 0; i < f.src.indexing.size(); ++i)
      inv.components.push_back(base_.invert_arrow(f.components[inv.on_index.table[i]]));
  }
  return arr(inv);
}

Cell FamDouble::invert_cell(const Cell& ah) const {
  require(cell_is_iso(ah), Errc::invalid_argument, "invert_cell: not invertible");
  const FamCell& a = cell_of(ah);
  auto invert_fam_arrow = [&](const FamArrow& f) {
    return arr_of(invert_arrow(arr(f)));
  };
  FamArrow l_inv = invert_fam_arrow(a.left);
  FamArrow r_inv = invert_fam_arrow(a.right);
  SpanMorphism sm_inv(a.on_spans.dst, a.on_spans.src,
                      invert_bijection(a.on_spans.on_left),
                      invert_bijection(a.on_spans.on_apex),
                      invert_bijection(a.on_spans.on_right));
  FamCell out{variance_, a.bottom, a.top, l_inv, r_inv, sm_inv, {}};
  if (variance_ == Variance::covariant) {
    for (int k = 0; k < a.bottom.indexing_span.apex.size(); ++k)
      out.components.push_back(
          base_.invert_cell(a.components[sm_inv.on_apex.table[k]]));
  } else {
    for (int k = 0; k < a.top.indexing_span.apex.size(); ++k)
      out.components.push_back(
          base_.invert_cell(a.components[sm_inv.on_apex.table[k]]));
  }
  return cell(out);
}

std::optional<std::string> FamDouble::check_cell(const Cell& ah) const {
  const FamCell& a = cell_of(ah);
  if (a.variance != variance_) return "cell variance mismatch";
  const SetSpan& ts = a.top.indexing_span;
  const SetSpan& bs = a.bottom.indexing_span;
  bool cov = variance_ == Variance::covariant;
  if (a.on_spans.src != (cov ? ts : bs) || a.on_spans.dst != (cov ? bs : ts))
    return "indexing span morphism frame mismatch";
  if (a.on_spans.on_left != a.left.on_index || a.on_spans.on_right != a.right.on_index)
    return "span morphism feet do not match side arrows";
  size_t n = cov ? a.top.components.size() : a.bottom.components.size();
  if (a.components.size() != n) return "component count mismatch";
  for (size_t k = 0; k < n; ++k) {
    const Cell& c = a.components[k];
    int other = a.on_spans.on_apex.table[k];
    const Pro& want_top = cov ? a.top.components[k] : a.top.components[other];
    const Pro& want_bot = cov ? a.bottom.components[other] : a.bottom.components[k];
    if (base_.cell_top(c) != want_top || base_.cell_bottom(c) != want_bot)
      return "component " + std::to_string(k) + " has wrong frame";
    int li = cov ? ts.left.table[k] : bs.left.table[k];
    int ri = cov ? ts.right.table[k] : bs.right.table[k];
    if (base_.cell_left(c) != a.left.components[li] ||
        base_.cell_right(c) != a.right.components[ri])
      return "component " + std::to_string(k) + " has wrong side arrows";
    if (auto diag = base_.check_cell(c)) return "component: " + *diag;
  }
  return {};
}

std::vector<Ob> FamDouble::objects(int bound) const {
  std::vector<Ob> out;
  std::vector<Ob> base_obs = base_.objects(bound);
  for (int k = 0; k <= bound; ++k) {
    FinSet ix = canonical_index_set(k);
    if (k == 0) {
      out.push_back(ob(FamObject{ix, {}}));
      continue;
    }
    std::vector<int> pick(k, 0);
    while (true) {
      FamObject x{ix, {}};
      for (int i = 0; i < k; ++i) x.assignment.push_back(base_obs[pick[i]]);
      out.push_back(ob(x));
      int i = k - 1;
      while (i >= 0 && ++pick[i] == static_cast<int>(base_obs.size())) pick[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

std::vector<Arr> FamDouble::arrows_between(const Ob& xh, const Ob& yh) const {
  const FamObject& x = ob_of(xh);
  const FamObject& y = ob_of(yh);
  std::vector<Arr> out;
  bool cov = variance_ == Variance::covariant;
  const FinSet& dom_ix = cov ? x.indexing : y.indexing;
  const FinSet& cod_ix = cov ? y.indexing : x.indexing;
  for (const auto& f0 : all_functions(dom_ix, cod_ix)) {
    std::vector<std::vector<Arr>> choices;
    bool possible = true;
    for (int k = 0; k < dom_ix.size() && possible; ++k) {
      const Ob& s = cov ? x.assignment[k] : x.assignment[f0.table[k]];
      const Ob& t = cov ? y.assignment[f0.table[k]] : y.assignment[k];
      choices.push_back(base_.arrows_between(s, t));
      if (choices.back().empty()) possible = false;
    }
    if (!possible) continue;
    std::vector<int> pick(choices.size(), 0);
    while (true) {
      FamArrow f{variance_, x, y, f0, {}};
      for (size_t k = 0; k < choices.size(); ++k)
        f.components.push_back(choices[k][pick[k]]);
      out.push_back(arr(f));
      int k = static_cast<int>(choices.size()) - 1;
      while (k >= 0 && ++pick[k] == static_cast<int>(choices[k].size())) pick[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

std::vector<Pro> FamDouble::proarrows_between(const Ob& xh, const Ob& yh,
                                              int bound) const {
  const FamObject& x = ob_of(xh);
  const FamObject& y = ob_of(yh);
  std::vector<Pro> out;
  for (int k = 0; k <= bound; ++k) {
    FinSet apex = canonical_index_set(k);
    for (const auto& l : all_functions(apex, x.indexing))
      for (const auto& r : all_functions(apex, y.indexing)) {
        SetSpan span(l, r);
        std::vector<std::vector<Pro>> choices;
        bool possible = true;
        for (int a = 0; a < k && possible; ++a) {
          choices.push_back(base_.proarrows_between(x.assignment[l.table[a]],
                                                    y.assignment[r.table[a]], bound));
          if (choices.back().empty()) possible = false;
        }
        if (!possible) continue;
        std::vector<int> pick(choices.size(), 0);
        while (true) {
          FamProarrow m{x, y, span, {}};
          for (size_t a = 0; a < choices.size(); ++a)
            m.components.push_back(choices[a][pick[a]]);
          out.push_back(pro(m));
          int a = static_cast<int>(choices.size()) - 1;
          while (a >= 0 && ++pick[a] == static_cast<int>(choices[a].size()))
            pick[a--] = 0;
          if (a < 0) break;
        }
      }
  }
  return out;
}

std::vector<Cell> FamDouble::cells_in_frame(const Pro& toph, const Pro& bottomh,
                                            const Arr& lefth, const Arr& righth) const {
  const FamProarrow& top = pro_of(toph);
  const FamProarrow& bottom = pro_of(bottomh);
  const FamArrow& left = arr_of(lefth);
  const FamArrow& right = arr_of(righth);
  bool cov = variance_ == Variance::covariant;
  const SetSpan& dom_span = cov ? top.indexing_span : bottom.indexing_span;
  const SetSpan& cod_span = cov ? bottom.indexing_span : top.indexing_span;
  std::vector<std::vector<int>> allowed(dom_span.apex.size());
  for (int a = 0; a < dom_span.apex.size(); ++a) {
    int want_l = left.on_index.table[dom_span.left.table[a]];
    int want_r = right.on_index.table[dom_span.right.table[a]];
    for (int b = 0; b < cod_span.apex.size(); ++b)
      if (cod_span.left.table[b] == want_l && cod_span.right.table[b] == want_r)
        allowed[a].push_back(b);
    if (allowed[a].empty()) return {};
  }
  std::vector<Cell> out;
  std::vector<int> pick(dom_span.apex.size(), 0);
  while (true) {
    std::vector<int> t(dom_span.apex.size());
    for (size_t a = 0; a < t.size(); ++a) t[a] = allowed[a][pick[a]];
    FinFunction on_apex(dom_span.apex, cod_span.apex, t);
    SpanMorphism sm(dom_span, cod_span, left.on_index, on_apex, right.on_index);
    std::vector<std::vector<Cell>> choices;
    bool possible = true;
    for (int a = 0; a < dom_span.apex.size() && possible; ++a) {
      const Pro& ct = cov ? top.components[a] : top.components[on_apex.table[a]];
      const Pro& cb = cov ? bottom.components[on_apex.table[a]] : bottom.components[a];
      const Arr& cl = left.components[dom_span.left.table[a]];
      const Arr& cr = right.components[dom_span.right.table[a]];
      choices.push_back(base_.cells_in_frame(ct, cb, cl, cr));
      if (choices.back().empty()) possible = false;
    }
    if (possible) {
      std::vector<int> cpick(choices.size(), 0);
      while (true) {
        FamCell c{variance_, top, bottom, left, right, sm, {}};
        for (size_t a = 0; a < choices.size(); ++a)
          c.components.push_back(choices[a][cpick[a]]);
        out.push_back(cell(c));
        int a = static_cast<int>(choices.size()) - 1;
        while (a >= 0 && ++cpick[a] == static_cast<int>(choices[a].size()))
          cpick[a--] = 0;
        if (a < 0) break;
      }
    }
    if (dom_span.apex.size() == 0) break;
    int a = static_cast<int>(allowed.size()) - 1;
    while (a >= 0 && ++pick[a] == static_cast<int>(allowed[a].size())) pick[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

std::optional<CompanionPair> FamDouble::companion(const Arr& fh) const {
  if (variance_ != Variance::covariant) return {};
  const FamArrow& f = arr_of(fh);
  std::vector<CompanionPair> base_pairs;
  for (const auto& c : f.components) {
    auto p = base_.companion(c);
    if (!p) fail(Errc::missing_base_companion, "a component has no base companion");
    base_pairs.push_back(*p);
  }
  const FinSet& I = f.src.indexing;
  SetSpan comp_span(FinFunction::identity(I), f.on_index);
  FamProarrow comp{f.src, f.dst, comp_span, {}};
  for (const auto& p : base_pairs) comp.components.push_back(p.proarrow);
  FamProarrow id_src = pro_of(id_pro(ob(f.src)));
  FamProarrow id_dst = pro_of(id_pro(ob(f.dst)));
  FamCell unit{variance_, id_src, comp, arr_of(id_arrow(ob(f.src))), f,
               SpanMorphism(id_src.indexing_span, comp_span, FinFunction::identity(I),
                            FinFunction::identity(I), f.on_index),
               {}};
  for (const auto& p : base_pairs) unit.components.push_back(p.unit);
  FamCell counit{variance_, comp, id_dst, f, arr_of(id_arrow(ob(f.dst))),
                 SpanMorphism(comp_span, id_dst.indexing_span, f.on_index, f.on_index,
                              FinFunction::identity(f.dst.indexing)),
                 {}};
  for (const auto& p : base_pairs) counit.components.push_back(p.counit);
  return CompanionPair{fh, pro(comp), cell(unit), cell(counit)};
}

std::optional<CompanionPair> FamDouble::conjoint(const Arr& fh) const {
  if (variance_ != Variance::covariant) return {};
  const FamArrow& f = arr_of(fh);
  std::vector<CompanionPair> base_pairs;
  for (const auto& c : f.components) {
    auto p = base_.conjoint(c);
    if (!p) fail(Errc::missing_base_companion, "a component has no base conjoint");
    base_pairs.push_back(*p);
  }
  const FinSet& I = f.src.indexing;
  SetSpan conj_span(f.on_index, FinFunction::identity(I));
  FamProarrow conj{f.dst, f.src, conj_span, {}};
  for (const auto& p : base_pairs) conj.components.push_back(p.proarrow);
  FamProarrow id_src = pro_of(id_pro(ob(f.src)));
  FamProarrow id_dst = pro_of(id_pro(ob(f.dst)));
  FamCell unit{variance_, id_src, conj, f, arr_of(id_arrow(ob(f.src))),
               SpanMorphism(id_src.indexing_span, conj_span, f.on_index,
                            FinFunction::identity(I), FinFunction::identity(I)),
               {}};
  for (const auto& p : base_pairs) unit.components.push_back(p.unit);
  FamCell counit{variance_, conj, id_dst, arr_of(id_arrow(ob(f.dst))), f,
                 SpanMorphism(conj_span, id_dst.indexing_span,
                              FinFunction::identity(f.dst.indexing), f.on_index,
                              f.on_index),
                 {}};
  for (const auto& p : base_pairs) counit.components.push_back(p.counit);
  return CompanionPair{fh, pro(conj), cell(unit), cell(counit)};
}

const FinSet& unit_index_set() {
  static FinSet s("1", {"*"});
  return s;
}

FamObject delta_embed(const DoubleCategory& base, const Ob& x) {
  (void)base;
  return FamObject{unit_index_set(), {x}};
}

FamProarrow delta_embed_pro(const DoubleCategory& base, const Pro& m) {
  return FamProarrow{delta_embed(base, base.pro_src(m)),
                     delta_embed(base, base.pro_dst(m)),
                     SetSpan::identity(unit_index_set()),
                     {m}};
}

Ob DeltaFunctor::on_ob(const Ob& x) const {
  return FamDouble::ob(delta_embed(base_, x));
}

Arr DeltaFunctor::on_arr(const Arr& f) const {
  FamArrow out{fam_.variance(), delta_embed(base_, base_.arr_src(f)),
               delta_embed(base_, base_.arr_dst(f)),
               FinFunction::identity(unit_index_set()),
               {f}};
  return FamDouble::arr(out);
}

Pro DeltaFunctor::on_pro(const Pro& m) const {
  return FamDouble::pro(delta_embed_pro(base_, m));
}

Cell DeltaFunctor::on_cell(const Cell& a) const {
  FamCell out{fam_.variance(),
              delta_embed_pro(base_, base_.cell_top(a)),
              delta_embed_pro(base_, base_.cell_bottom(a)),
              FamDouble::arr_of(on_arr(base_.cell_left(a))),
              FamDouble::arr_of(on_arr(base_.cell_right(a))),
              SpanMorphism::identity(SetSpan::identity(unit_index_set())),
              {a}};
  return FamDouble::cell(out);
}

Cell DeltaFunctor::laxator(const Pro& m, const Pro& n) const {
  Pro lhs = fam_.compose_pro(on_pro(m), on_pro(n));
  Pro rhs = on_pro(base_.compose_pro(m, n));
  const FamProarrow& lf = FamDouble::pro_of(lhs);
  const FamProarrow& rf = FamDouble::pro_of(rhs);
  FamArrow l{fam_.variance(), lf.src, lf.src, FinFunction::identity(lf.src.indexing),
             {base_.id_arrow(base_.pro_src(m))}};
  FamArrow r{fam_.variance(), lf.dst, lf.dst, FinFunction::identity(lf.dst.indexing),
             {base_.id_arrow(base_.pro_dst(n))}};
  FamCell out{fam_.variance(), lf, rf, l, r, SpanMorphism(), {}};
  if (fam_.variance() == Variance::covariant)
    out.on_spans = SpanMorphism(lf.indexing_span, rf.indexing_span,
                                FinFunction::identity(unit_index_set()),
                                FinFunction(lf.indexing_span.apex,
                                            rf.indexing_span.apex, {0}),
                                FinFunction::identity(unit_index_set()));
  else
    out.on_spans = SpanMorphism(rf.indexing_span, lf.indexing_span,
                                FinFunction::identity(unit_index_set()),
                                FinFunction(rf.indexing_span.apex,
                                            lf.indexing_span.apex, {0}),
                                FinFunction::identity(unit_index_set()));
  out.components.push_back(base_.id_cell_on_pro(base_.compose_pro(m, n)));
  return FamDouble::cell(out);
}

Cell DeltaFunctor::unitor(const Ob& x) const {
  return fam_.id_cell_on_pro(fam_.id_pro(on_ob(x)));
}

FamLiftFunctor::FamLiftFunctor(const DoubleFunctor& f, const FamDouble& dom,
                               const FamDouble& cod)
    : f_(f), dom_(dom), cod_(cod) {
  require(dom.variance() == cod.variance(), Errc::invalid_argument,
          "lifted functor variance mismatch");
}

Ob FamLiftFunctor::on_ob(const Ob& xh) const {
  FamObject x = FamDouble::ob_of(xh);
  for (auto& o : x.assignment) o = f_.on_ob(o);
  return FamDouble::ob(x);
}

Arr FamLiftFunctor::on_arr(const Arr& fh) const {
  FamArrow f = FamDouble::arr_of(fh);
  for (auto& o : f.src.assignment) o = f_.on_ob(o);
  for (auto& o : f.dst.assignment) o = f_.on_ob(o);
  for (auto& c : f.components) c = f_.on_arr(c);
  return FamDouble::arr(f);
}

Pro FamLiftFunctor::on_pro(const Pro& mh) const {
  FamProarrow m = FamDouble::pro_of(mh);
  for (auto& o : m.src.assignment) o = f_.on_ob(o);
  for (auto& o : m.dst.assignment) o = f_.on_ob(o);
  for (auto& c : m.components) c = f_.on_pro(c);
  return FamDouble::pro(m);
}

Cell FamLiftFunctor::on_cell(const Cell& ah) const {
  FamCell a = FamDouble::cell_of(ah);
  a.top = FamDouble::pro_of(on_pro(FamDouble::pro(a.top)));
  a.bottom = FamDouble::pro_of(on_pro(FamDouble::pro(a.bottom)));
  a.left = FamDouble::arr_of(on_arr(FamDouble::arr(a.left)));
  a.right = FamDouble::arr_of(on_arr(FamDouble::arr(a.right)));
  for (auto& c : a.components) c = f_.on_cell(c);
  return FamDouble::cell(a);
}

Cell FamLiftFunctor::laxator(const Pro& mh, const Pro& nh) const {
  const FamProarrow& m = FamDouble::pro_of(mh);
  const FamProarrow& n = FamDouble::pro_of(nh);
  Pro fm = on_pro(mh);
  Pro fn = on_pro(nh);
  bool lax = f_.functoriality() != Functoriality::colax;
  Pro lhs = lax ? cod_.compose_pro(fm, fn) : on_pro(dom_.compose_pro(mh, nh));
  Pro rhs = lax ? on_pro(dom_.compose_pro(mh, nh)) : cod_.compose_pro(fm, fn);
  const FamProarrow& lf = FamDouble::pro_of(lhs);
  const FamProarrow& rf = FamDouble::pro_of(rhs);
  PullbackSets pb = pullback(m.indexing_span.right, n.indexing_span.left);
  FamArrow l{cod_.variance(), lf.src, lf.src, FinFunction::identity(lf.src.indexing), {}};
  for (const auto& o : lf.src.assignment) l.components.push_back(cod_.base().id_arrow(o));
  FamArrow r{cod_.variance(), lf.dst, lf.dst, FinFunction::identity(lf.dst.indexing), {}};
  for (const auto& o : lf.dst.assignment) r.components.push_back(cod_.base().id_arrow(o));
  FamCell out{cod_.variance(), lf, rf, l, r,
              SpanMorphism::identity(lf.indexing_span), {}};
  for (int k = 0; k < pb.apex.size(); ++k)
    out.components.push_back(
        f_.laxator(m.components[pb.p1.table[k]], n.components[pb.p2.table[k]]));
  return FamDouble::cell(out);
}

Cell FamLiftFunctor::unitor(const Ob& xh) const {
  const FamObject& x = FamDouble::ob_of(xh);
  bool lax = f_.functoriality() != Functoriality::colax;
  Pro id_fx = cod_.id_pro(on_ob(xh));
  Pro f_idx = on_pro(dom_.id_pro(xh));
  Pro lhs = lax ? id_fx : f_idx;
  Pro rhs = lax ? f_idx : id_fx;
  const FamProarrow& lf = FamDouble::pro_of(lhs);
  const FamProarrow& rf = FamDouble::pro_of(rhs);
  (void)rf;
  FamArrow l{cod_.variance(), lf.src, lf.src, FinFunction::identity(lf.src.indexing), {}};
  for (const auto& o : lf.src.assignment) l.components.push_back(cod_.base().id_arrow(o));
  FamCell out{cod_.variance(), lf, FamDouble::pro_of(rhs), l, l,
              SpanMorphism::identity(lf.indexing_span), {}};
  for (int i = 0; i < x.indexing.size(); ++i)
    out.components.push_back(f_.unitor(x.assignment[i]));
  return FamDouble::cell(out);
}

FamCell fam_extension(const DoubleCategory& base, const FamProarrow& m,
                      const FamArrow& f, const FamArrow& g,
                      const std::vector<Cell>& base_extensions) {
  require(f.variance == Variance::covariant && g.variance == Variance::covariant,
          Errc::frame_mismatch, "extensions assemble in the covariant construction");
  require(f.src == m.src && g.src == m.dst, Errc::frame_mismatch,
          "arrows must start at the feet of m");
  require(base_extensions.size() == m.components.size(), Errc::frame_mismatch,
          "one base extension per component required");
  SetSpan ext_span(compose_fn(m.indexing_span.left, f.on_index),
                   compose_fn(m.indexing_span.right, g.on_index));
  FamProarrow bottom{f.dst, g.dst, ext_span, {}};
  for (const auto& e : base_extensions) bottom.components.push_back(base.cell_bottom(e));
  return FamCell{Variance::covariant, m, bottom, f, g,
                 SpanMorphism(m.indexing_span, ext_span, f.on_index,
                              FinFunction::identity(m.indexing_span.apex), g.on_index),
                 base_extensions};
}

FamCell fam_extension_span(const FamProarrow& m, const FamArrow& f, const FamArrow& g) {
  std::vector<Cell> exts;
  for (size_t a = 0; a < m.components.size(); ++a) {
    const SetSpan& comp = SpanDouble::pro_of(m.components[a]);
    const FinFunction& fa =
        SpanDouble::arr_of(f.components[m.indexing_span.left.table[a]]);
    const FinFunction& ga =
        SpanDouble::arr_of(g.components[m.indexing_span.right.table[a]]);
    exts.push_back(SpanDouble::cell(extend_span(comp, fa, ga).opcartesian));
  }
  return fam_extension(span_double(), m, f, g, exts);
}

FamObjectCoproduct fam_fam_coproduct_objects(const DoubleCategory& base,
                                             const OuterFamilyObject& outer) {
  std::vector<FinSet> index_sets;
  for (const auto& fam : outer.families) index_sets.push_back(fam.indexing);
  CoproductSets cp = coproduct_sets(index_sets);
  FamObject summit{cp.sum, {}};
  for (const auto& fam : outer.families)
    for (const auto& o : fam.assignment) summit.assignment.push_back(o);
  FamObjectCoproduct out{summit, {}};
  for (size_t i = 0; i < outer.families.size(); ++i) {
    FamArrow iota{Variance::covariant, outer.families[i], summit, cp.injections[i], {}};
    for (const auto& o : outer.families[i].assignment)
      iota.components.push_back(base.id_arrow(o));
    out.coprojections.push_back(iota);
  }
  return out;
}

FamProCoproduct fam_fam_coproduct(const DoubleCategory& base,
                                  const OuterFamilyProarrow& outer) {
  require(outer.inner.size() == outer.indexing_span.apex.elements().size(),
          Errc::shape_mismatch, "inner family misaligned with outer span");
  FamProCoproduct out;
  out.src = fam_fam_coproduct_objects(base, outer.src);
  out.dst = fam_fam_coproduct_objects(base, outer.dst);
  std::vector<FinSet> apexes;
  for (const auto& m : outer.inner) apexes.push_back(m.indexing_span.apex);
  CoproductSets cp = coproduct_sets(apexes);
  std::vector<FinFunction> lefts, rights;
  for (size_t a = 0; a < outer.inner.size(); ++a) {
    int li = outer.indexing_span.left.table[a];
    int ri = outer.indexing_span.right.table[a];
    require(outer.inner[a].src == outer.src.families[li] &&
                outer.inner[a].dst == outer.dst.families[ri],
            Errc::shape_mismatch, "inner proarrow endpoints do not match outer span");
    lefts.push_back(compose_fn(outer.inner[a].indexing_span.left,
                               out.src.coprojections[li].on_index));
    rights.push_back(compose_fn(outer.inner[a].indexing_span.right,
                                out.dst.coprojections[ri].on_index));
  }
  SetSpan summit_span(copair_fns(cp, lefts), copair_fns(cp, rights));
  FamProarrow summit{out.src.summit, out.dst.summit, summit_span, {}};
  for (const auto& m : outer.inner)
    for (const auto& c : m.components) summit.components.push_back(c);
  out.summit = summit;
  for (size_t a = 0; a < outer.inner.size(); ++a) {
    int li = outer.indexing_span.left.table[a];
    int ri = outer.indexing_span.right.table[a];
    FamCell iota{Variance::covariant, outer.inner[a], summit,
                 out.src.coprojections[li], out.dst.coprojections[ri],
                 SpanMorphism(outer.inner[a].indexing_span, summit_span,
                              out.src.coprojections[li].on_index, cp.injections[a],
                              out.dst.coprojections[ri].on_index),
                 {}};
    for (const auto& c : outer.inner[a].components)
      iota.components.push_back(base.id_cell_on_pro(c));
    out.coprojections.push_back(iota);
  }
  return out;
}

FamObjectProduct fam_fam_product_objects(const DoubleCategory& base,
                                         const OuterFamilyObject& outer) {
  FamObjectCoproduct cp = fam_fam_coproduct_objects(base, outer);
  FamObjectProduct out{cp.summit, {}};
  for (size_t i = 0; i < outer.families.size(); ++i) {
    FamArrow pi{Variance::contravariant, cp.summit, outer.families[i],
                cp.coprojections[i].on_index, {}};
    for (const auto& o : outer.families[i].assignment)
      pi.components.push_back(base.id_arrow(o));
    out.projections.push_back(pi);
  }
  return out;
}

FamProProduct fam_fam_product(const DoubleCategory& base,
                              const OuterFamilyProarrow& outer) {
  FamProCoproduct cp = fam_fam_coproduct(base, outer);
  FamProProduct out;
  out.src = fam_fam_product_objects(base, outer.src);
  out.dst = fam_fam_product_objects(base, outer.dst);
  out.base = cp.summit;
  for (size_t a = 0; a < outer.inner.size(); ++a) {
    const FamCell& iota = cp.coprojections[a];
    int li = outer.indexing_span.left.table[a];
    int ri = outer.indexing_span.right.table[a];
    FamCell pi{Variance::contravariant, cp.summit, outer.inner[a],
               out.src.projections[li], out.dst.projections[ri], iota.on_spans,
               iota.components};
    out.projections.push_back(pi);
  }
  return out;
}

FinSet fam_to_span_ob(const FamObject& x) { return x.indexing; }
FinFunction fam_to_span_arr(const FamArrow& f) { return f.on_index; }
SetSpan fam_to_span_pro(const FamProarrow& m) { return m.indexing_span; }
SpanCell fam_to_span_cell(const FamCell& a) {
  return SpanCell{a.top.indexing_span, a.bottom.indexing_span, a.left.on_index,
                  a.right.on_index, a.on_spans.on_apex};
}

FamObject span_to_fam_ob(const FinSet& x) {
  FamObject out{x, {}};
  for (int i = 0; i < x.size(); ++i) out.assignment.push_back(TerminalDouble::the_ob());
  return out;
}

FamArrow span_to_fam_arr(const FinFunction& f) {
  FamArrow out{Variance::covariant, span_to_fam_ob(f.dom), span_to_fam_ob(f.cod), f, {}};
  for (int i = 0; i < f.dom.size(); ++i)
    out.components.push_back(TerminalDouble::the_arr());
  return out;
}

FamProarrow span_to_fam_pro(const SetSpan& m) {
  FamProarrow out{span_to_fam_ob(m.left_foot), span_to_fam_ob(m.right_foot), m, {}};
  for (int i = 0; i < m.apex.size(); ++i)
    out.components.push_back(TerminalDouble::the_pro());
  return out;
}

FamCell span_to_fam_cell(const SpanCell& a) {
  FamCell out{Variance::covariant, span_to_fam_pro(a.top), span_to_fam_pro(a.bottom),
              span_to_fam_arr(a.left), span_to_fam_arr(a.right),
              SpanMorphism(a.top, a.bottom, a.left, a.apex_map, a.right),
              {}};
  for (int i = 0; i < a.top.apex.size(); ++i)
    out.components.push_back(TerminalDouble::the_cell());
  return out;
}


FamSpanDictionaryReport check_fam_terminal_iso_span(int bound) {
  FamSpanDictionaryReport rep;
  FamDouble fam(terminal_double(), Variance::covariant);
  auto bad = [&](const std::string& what) { rep.failures.push_back(what); };

  // Objects: the dictionary matches the canonical index universe both ways.
  std::vector<Ob> fam_obs = fam.objects(bound);
  std::vector<FinSet> span_obs;
  for (int k = 0; k <= bound; ++k) span_obs.push_back(canonical_index_set(k));
  if (fam_obs.size() != span_obs.size()) bad("object universe sizes differ");
  for (size_t i = 0; i < fam_obs.size() && i < span_obs.size(); ++i) {
    ++rep.objects;
    const FamObject& fo = FamDouble::ob_of(fam_obs[i]);
    if (fam_to_span_ob(fo) != span_obs[i]) bad("object dictionary mismatch");
    if (!(span_to_fam_ob(span_obs[i]) == fo)) bad("object inverse mismatch");
  }

  for (const FinSet& a : span_obs)
    for (const FinSet& b : span_obs) {
      Ob fa = FamDouble::ob(span_to_fam_ob(a));
      Ob fb = FamDouble::ob(span_to_fam_ob(b));
      // Arrows: enumerations correspond and composition transports.
      std::vector<Arr> fam_arrows = fam.arrows_between(fa, fb);
      std::vector<FinFunction> span_arrows = all_functions(a, b);
      if (fam_arrows.size() != span_arrows.size())
        bad("arrow universe sizes differ at " + a.name() + "->" + b.name());
      std::set<std::string> dict_arrows, direct_arrows;
      for (const auto& f : fam_arrows)
        dict_arrows.insert(fam_to_span_arr(FamDouble::arr_of(f)).enc());
      for (const auto& f : span_arrows) direct_arrows.insert(f.enc());
      if (dict_arrows != direct_arrows)
        bad("arrow dictionary not bijective at " + a.name() + "->" + b.name());
      rep.arrows += static_cast<long long>(fam_arrows.size());
      // Proarrows likewise.
      std::vector<Pro> fam_pros = fam.proarrows_between(fa, fb, bound);
      std::set<std::string> dict_pros, direct_pros;
      long long direct_count = 0;
      for (int k = 0; k <= bound; ++k) {
        FinSet apex = canonical_index_set(k);
        for (const auto& l : all_functions(apex, a))
          for (const auto& r : all_functions(apex, b)) {
            direct_pros.insert(SetSpan(l, r).enc());
            ++direct_count;
          }
      }
      for (const auto& m : fam_pros)
        dict_pros.insert(fam_to_span_pro(FamDouble::pro_of(m)).enc());
      if (static_cast<long long>(fam_pros.size()) != direct_count ||
          dict_pros != direct_pros)
        bad("proarrow dictionary not bijective at " + a.name() + "->" + b.name());
      rep.proarrows += direct_count;
      // Composition of arrows is preserved bit-exactly.
      for (const FinSet& c : span_obs) {
        Ob fc = FamDouble::ob(span_to_fam_ob(c));
        for (const auto& f : fam.arrows_between(fa, fb))
          for (const auto& g : fam.arrows_between(fb, fc)) {
            ++rep.composition_checks;
            FinFunction lhs =
                fam_to_span_arr(FamDouble::arr_of(fam.compose_arrows(f, g)));
            FinFunction rhs = compose_fn(fam_to_span_arr(FamDouble::arr_of(f)),
                                         fam_to_span_arr(FamDouble::arr_of(g)));
            if (lhs != rhs) bad("arrow composition not preserved");
          }
        for (const auto& m : fam.proarrows_between(fa, fb, bound))
          for (const auto& n : fam.proarrows_between(fb, fc, bound)) {
            ++rep.composition_checks;
            SetSpan lhs = fam_to_span_pro(FamDouble::pro_of(fam.compose_pro(m, n)));
            SetSpan rhs = span_compose(fam_to_span_pro(FamDouble::pro_of(m)),
                                       fam_to_span_pro(FamDouble::pro_of(n)));
            if (!(lhs == rhs)) bad("proarrow composition not preserved");
          }
      }
    }

  // Cells on a bounded set of frames, with vertical and external composition.
  const SpanDouble& sd = span_double();
  for (const FinSet& a : span_obs)
    for (const FinSet& b : span_obs) {
      Ob fa = FamDouble::ob(span_to_fam_ob(a));
      Ob fb = FamDouble::ob(span_to_fam_ob(b));
      std::vector<Pro> pros = fam.proarrows_between(fa, fb, bound);
      for (const auto& top : pros)
        for (const auto& bottom : pros)
          for (const auto& f : fam.arrows_between(fa, fa))
            for (const auto& g : fam.arrows_between(fb, fb)) {
              std::vector<Cell> fam_cells = fam.cells_in_frame(top, bottom, f, g);
              std::vector<Cell> span_cells = sd.cells_in_frame(
                  SpanDouble::pro(fam_to_span_pro(FamDouble::pro_of(top))),
                  SpanDouble::pro(fam_to_span_pro(FamDouble::pro_of(bottom))),
                  SpanDouble::arr(fam_to_span_arr(FamDouble::arr_of(f))),
                  SpanDouble::arr(fam_to_span_arr(FamDouble::arr_of(g))));
              if (fam_cells.size() != span_cells.size()) {
                bad("cell universe sizes differ");
                continue;
              }
              std::set<std::string> dict_cells, direct_cells;
              for (const auto& cc : fam_cells)
                dict_cells.insert(
                    SpanDouble::cell(fam_to_span_cell(FamDouble::cell_of(cc))).enc);
              for (const auto& cc : span_cells) direct_cells.insert(cc.enc);
              if (dict_cells != direct_cells) bad("cell dictionary not bijective");
              rep.cells += static_cast<long long>(fam_cells.size());
              // Vertical composition through the dictionary.
              for (size_t i = 0; i < fam_cells.size() && i < 2; ++i)
                for (const auto& lower : fam.cells_in_frame(
                         bottom, bottom, fam.id_arrow(fa), fam.id_arrow(fb))) {
                  ++rep.composition_checks;
                  SpanCell lhs = fam_to_span_cell(FamDouble::cell_of(
                      fam.compose_cells_vert(fam_cells[i], lower)));
                  SpanCell rhs = span_cell_vert(
                      fam_to_span_cell(FamDouble::cell_of(fam_cells[i])),
                      fam_to_span_cell(FamDouble::cell_of(lower)));
                  if (!(lhs == rhs)) bad("vertical composition not preserved");
                  break;
                }
            }
      // External composition on a composable sample.
      for (const auto& m : pros) {
        for (const auto& n : fam.proarrows_between(fb, fb, bound)) {
          auto alphas = fam.cells_in_frame(m, m, fam.id_arrow(fa), fam.id_arrow(fb));
          auto betas = fam.cells_in_frame(n, n, fam.id_arrow(fb), fam.id_arrow(fb));
          if (alphas.empty() || betas.empty()) continue;
          ++rep.composition_checks;
          SpanCell lhs = fam_to_span_cell(
              FamDouble::cell_of(fam.compose_cells_ext(alphas[0], betas[0])));
          SpanCell rhs =
              span_cell_ext(fam_to_span_cell(FamDouble::cell_of(alphas[0])),
                            fam_to_span_cell(FamDouble::cell_of(betas[0])));
          if (!(lhs == rhs)) bad("external composition not preserved");
          break;
        }
        break;
      }
    }
  return rep;
}

}  // namespace dcat
