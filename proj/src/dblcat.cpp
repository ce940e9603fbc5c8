#include "dcat/dblcat.hpp"

#include <algorithm>
#include <array>

namespace dcat {

bool companion_equations_hold(const DoubleCategory& d, const CompanionPair& c) {
  Cell vert = d.compose_cells_vert(c.unit, c.counit);
  if (vert != d.id_cell_on_arrow(c.arrow)) return false;
  Cell ext = d.compose_cells_ext(c.unit, c.counit);
  return d.compose_cells_vert(ext, d.right_unitor(c.proarrow)) ==
         d.left_unitor(c.proarrow);
}

bool conjoint_equations_hold(const DoubleCategory& d, const CompanionPair& c) {
  Cell vert = d.compose_cells_vert(c.unit, c.counit);
  if (vert != d.id_cell_on_arrow(c.arrow)) return false;
  Cell ext = d.compose_cells_ext(c.counit, c.unit);
  return d.compose_cells_vert(ext, d.left_unitor(c.proarrow)) ==
         d.right_unitor(c.proarrow);
}

// ---------------------------------------------------------------------------
// Span(FinSet)

static std::string span_cell_enc(const SpanCell& c) {
  return "cell{" + c.top.enc() + ";" + c.bottom.enc() + ";" + c.left.enc() + ";" +
         c.right.enc() + ";" + c.apex_map.enc() + "}";
}

Ob SpanDouble::ob(const FinSet& s) { return Ob{s.enc(), s}; }
Arr SpanDouble::arr(const FinFunction& f) { return Arr{f.enc(), f}; }
Pro SpanDouble::pro(const SetSpan& s) { return Pro{s.enc(), s}; }
Cell SpanDouble::cell(const SpanCell& c) { return Cell{span_cell_enc(c), c}; }

const FinSet& SpanDouble::ob_of(const Ob& o) { return std::any_cast<const FinSet&>(o.data); }
const FinFunction& SpanDouble::arr_of(const Arr& a) {
  return std::any_cast<const FinFunction&>(a.data);
}
const SetSpan& SpanDouble::pro_of(const Pro& p) {
  return std::any_cast<const SetSpan&>(p.data);
}
const SpanCell& SpanDouble::cell_of(const Cell& c) {
  return std::any_cast<const SpanCell&>(c.data);
}

Ob SpanDouble::arr_src(const Arr& f) const { return ob(arr_of(f).dom); }
Ob SpanDouble::arr_dst(const Arr& f) const { return ob(arr_of(f).cod); }
Ob SpanDouble::pro_src(const Pro& m) const { return ob(pro_of(m).left_foot); }
Ob SpanDouble::pro_dst(const Pro& m) const { return ob(pro_of(m).right_foot); }
Pro SpanDouble::cell_top(const Cell& a) const { return pro(cell_of(a).top); }
Pro SpanDouble::cell_bottom(const Cell& a) const { return pro(cell_of(a).bottom); }
Arr SpanDouble::cell_left(const Cell& a) const { return arr(cell_of(a).left); }
Arr SpanDouble::cell_right(const Cell& a) const { return arr(cell_of(a).right); }

Arr SpanDouble::id_arrow(const Ob& x) const {
  return arr(FinFunction::identity(ob_of(x)));
}
Arr SpanDouble::compose_arrows(const Arr& f, const Arr& g) const {
  return arr(compose_fn(arr_of(f), arr_of(g)));
}
Pro SpanDouble::id_pro(const Ob& x) const { return pro(SetSpan::identity(ob_of(x))); }

SetSpan span_compose(const SetSpan& m, const SetSpan& n) {
  require(m.right_foot == n.left_foot, Errc::endpoint_mismatch,
          "span_compose: feet do not match");
  PullbackSets pb = pullback(m.right, n.left);
  return SetSpan(compose_fn(pb.p1, m.left), compose_fn(pb.p2, n.right));
}

Pro SpanDouble::compose_pro(const Pro& m, const Pro& n) const {
  return pro(span_compose(pro_of(m), pro_of(n)));
}

SpanCell span_cell_id(const SetSpan& s) {
  return SpanCell{s, s, FinFunction::identity(s.left_foot),
                  FinFunction::identity(s.right_foot), FinFunction::identity(s.apex)};
}

SpanCell span_cell_id_arrow(const FinFunction& fn) {
  return SpanCell{SetSpan::identity(fn.dom), SetSpan::identity(fn.cod), fn, fn, fn};
}

SpanCell span_cell_vert(const SpanCell& ca, const SpanCell& cb) {
  require(ca.bottom == cb.top, Errc::frame_mismatch, "vertical composite frames");
  return SpanCell{ca.top, cb.bottom, compose_fn(ca.left, cb.left),
                  compose_fn(ca.right, cb.right),
                  compose_fn(ca.apex_map, cb.apex_map)};
}

SpanCell span_cell_ext(const SpanCell& ca, const SpanCell& cb) {
  require(ca.top.right_foot == cb.top.left_foot &&
              ca.bottom.right_foot == cb.bottom.left_foot && ca.right == cb.left,
          Errc::frame_mismatch, "external composite frames");
  SetSpan top = span_compose(ca.top, cb.top);
  SetSpan bottom = span_compose(ca.bottom, cb.bottom);
  PullbackSets ptop = pullback(ca.top.right, cb.top.left);
  PullbackSets pbot = pullback(ca.bottom.right, cb.bottom.left);
  std::vector<int> t(top.apex.size());
  for (int k = 0; k < top.apex.size(); ++k) {
    int s = ptop.p1.table[k], u = ptop.p2.table[k];
    t[k] = pbot.index_of_pair(ca.apex_map.table[s], cb.apex_map.table[u]);
  }
  return SpanCell{top, bottom, ca.left, cb.right,
                  FinFunction(top.apex, bottom.apex, std::move(t))};
}

SpanCell span_cell_assoc(const SetSpan& m, const SetSpan& n, const SetSpan& p) {
  SetSpan mn = span_compose(m, n);
  SetSpan np = span_compose(n, p);
  SetSpan lhs = span_compose(mn, p);
  SetSpan rhs = span_compose(m, np);
  PullbackSets p_mn = pullback(m.right, n.left);
  PullbackSets p_mn_p = pullback(mn.right, p.left);
  PullbackSets p_np = pullback(n.right, p.left);
  PullbackSets p_m_np = pullback(m.right, np.left);
  std::vector<int> t(lhs.apex.size());
  for (int k = 0; k < lhs.apex.size(); ++k) {
    int st = p_mn_p.p1.table[k];
    int u = p_mn_p.p2.table[k];
    int s = p_mn.p1.table[st];
    int tt = p_mn.p2.table[st];
    t[k] = p_m_np.index_of_pair(s, p_np.index_of_pair(tt, u));
  }
  return SpanCell{lhs, rhs, FinFunction::identity(m.left_foot),
                  FinFunction::identity(p.right_foot),
                  FinFunction(lhs.apex, rhs.apex, std::move(t))};
}

SpanCell span_cell_lunitor(const SetSpan& m) {
  SetSpan idm = span_compose(SetSpan::identity(m.left_foot), m);
  PullbackSets pb = pullback(FinFunction::identity(m.left_foot), m.left);
  std::vector<int> t(idm.apex.size());
  for (int k = 0; k < idm.apex.size(); ++k) t[k] = pb.p2.table[k];
  return SpanCell{idm, m, FinFunction::identity(m.left_foot),
                  FinFunction::identity(m.right_foot),
                  FinFunction(idm.apex, m.apex, std::move(t))};
}

SpanCell span_cell_runitor(const SetSpan& m) {
  SetSpan mid = span_compose(m, SetSpan::identity(m.right_foot));
  PullbackSets pb = pullback(m.right, FinFunction::identity(m.right_foot));
  std::vector<int> t(mid.apex.size());
  for (int k = 0; k < mid.apex.size(); ++k) t[k] = pb.p1.table[k];
  return SpanCell{mid, m, FinFunction::identity(m.left_foot),
                  FinFunction::identity(m.right_foot),
                  FinFunction(mid.apex, m.apex, std::move(t))};
}

Cell SpanDouble::id_cell_on_pro(const Pro& m) const {
  return cell(span_cell_id(pro_of(m)));
}

Cell SpanDouble::id_cell_on_arrow(const Arr& f) const {
  return cell(span_cell_id_arrow(arr_of(f)));
}

Cell SpanDouble::compose_cells_vert(const Cell& a, const Cell& b) const {
  return cell(span_cell_vert(cell_of(a), cell_of(b)));
}

Cell SpanDouble::compose_cells_ext(const Cell& a, const Cell& b) const {
  return cell(span_cell_ext(cell_of(a), cell_of(b)));
}

Cell SpanDouble::associator(const Pro& mh, const Pro& nh, const Pro& ph) const {
  return cell(span_cell_assoc(pro_of(mh), pro_of(nh), pro_of(ph)));
}

Cell SpanDouble::left_unitor(const Pro& mh) const {
  return cell(span_cell_lunitor(pro_of(mh)));
}

Cell SpanDouble::right_unitor(const Pro& mh) const {
  return cell(span_cell_runitor(pro_of(mh)));
}

bool SpanDouble::arrow_is_iso(const Arr& f) const { return is_bijection(arr_of(f)); }

Arr SpanDouble::invert_arrow(const Arr& f) const {
  return arr(invert_bijection(arr_of(f)));
}

bool SpanDouble::cell_is_iso(const Cell& a) const {
  const SpanCell& c = cell_of(a);
  return is_bijection(c.left) && is_bijection(c.right) && is_bijection(c.apex_map);
}

Cell SpanDouble::invert_cell(const Cell& a) const {
  const SpanCell& c = cell_of(a);
  require(cell_is_iso(a), Errc::invalid_argument, "invert_cell: not invertible");
  return cell(SpanCell{c.bottom, c.top, invert_bijection(c.left),
                       invert_bijection(c.right), invert_bijection(c.apex_map)});
}

std::optional<std::string> SpanDouble::check_cell(const Cell& a) const {
  const SpanCell& c = cell_of(a);
  if (c.left.dom != c.top.left_foot || c.left.cod != c.bottom.left_foot)
    return "left arrow frame mismatch";
  if (c.right.dom != c.top.right_foot || c.right.cod != c.bottom.right_foot)
    return "right arrow frame mismatch";
  if (c.apex_map.dom != c.top.apex || c.apex_map.cod != c.bottom.apex)
    return "apex map frame mismatch";
  if (compose_fn(c.apex_map, c.bottom.left) != compose_fn(c.top.left, c.left))
    return "left square does not commute";
  if (compose_fn(c.apex_map, c.bottom.right) != compose_fn(c.top.right, c.right))
    return "right square does not commute";
  return {};
}

std::vector<Ob> SpanDouble::objects(int bound) const {
  std::vector<Ob> out;
  for (int k = 0; k <= bound; ++k) out.push_back(ob(canonical_set(k)));
  return out;
}

std::vector<Arr> SpanDouble::arrows_between(const Ob& x, const Ob& y) const {
  std::vector<Arr> out;
  for (auto& f : all_functions(ob_of(x), ob_of(y))) out.push_back(arr(f));
  return out;
}

std::vector<Pro> SpanDouble::proarrows_between(const Ob& x, const Ob& y,
                                               int bound) const {
  std::vector<Pro> out;
  for (int k = 0; k <= bound; ++k) {
    FinSet apex = canonical_set(k);
    for (auto& l : all_functions(apex, ob_of(x)))
      for (auto& r : all_functions(apex, ob_of(y))) out.push_back(pro(SetSpan(l, r)));
  }
  return out;
}

std::vector<Cell> SpanDouble::cells_in_frame(const Pro& toph, const Pro& bottomh,
                                             const Arr& lefth, const Arr& righth) const {
  const SetSpan& top = pro_of(toph);
  const SetSpan& bottom = pro_of(bottomh);
  const FinFunction& left = arr_of(lefth);
  const FinFunction& right = arr_of(righth);
  require(left.dom == top.left_foot && left.cod == bottom.left_foot &&
              right.dom == top.right_foot && right.cod == bottom.right_foot,
          Errc::frame_mismatch, "cells_in_frame: frame mismatch");
  // Allowed images per apex element of the top span.
  std::vector<std::vector<int>> allowed(top.apex.size());
  for (int s = 0; s < top.apex.size(); ++s) {
    int want_l = left.table[top.left.table[s]];
    int want_r = right.table[top.right.table[s]];
    for (int t = 0; t < bottom.apex.size(); ++t)
      if (bottom.left.table[t] == want_l && bottom.right.table[t] == want_r)
        allowed[s].push_back(t);
  }
  std::vector<Cell> out;
  for (const auto& a : allowed)
    if (a.empty() && top.apex.size() > 0) return out;
  std::vector<int> pick(top.apex.size(), 0);
  while (true) {
    std::vector<int> t(top.apex.size());
    for (int s = 0; s < top.apex.size(); ++s) t[s] = allowed[s][pick[s]];
    out.push_back(cell(SpanCell{top, bottom, left, right,
                                FinFunction(top.apex, bottom.apex, std::move(t))}));
    int k = top.apex.size() - 1;
    while (k >= 0 && ++pick[k] == static_cast<int>(allowed[k].size())) pick[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::optional<CompanionPair> SpanDouble::companion(const Arr& fh) const {
  const FinFunction& f = arr_of(fh);
  SetSpan comp(FinFunction::identity(f.dom), f);
  SpanCell unit{SetSpan::identity(f.dom), comp, FinFunction::identity(f.dom), f,
                FinFunction::identity(f.dom)};
  SpanCell counit{comp, SetSpan::identity(f.cod), f, FinFunction::identity(f.cod), f};
  return CompanionPair{fh, pro(comp), cell(unit), cell(counit)};
}

std::optional<CompanionPair> SpanDouble::conjoint(const Arr& fh) const {
  const FinFunction& f = arr_of(fh);
  SetSpan conj(f, FinFunction::identity(f.dom));
  SpanCell unit{SetSpan::identity(f.dom), conj, f, FinFunction::identity(f.dom),
                FinFunction::identity(f.dom)};
  SpanCell counit{conj, SetSpan::identity(f.cod), FinFunction::identity(f.cod), f, f};
  return CompanionPair{fh, pro(conj), cell(unit), cell(counit)};
}

const SpanDouble& span_double() {
  static SpanDouble d;
  return d;
}

SpanRestriction restrict_span(const SetSpan& n, const FinFunction& f,
                              const FinFunction& g) {
  require(f.cod == n.left_foot && g.cod == n.right_foot, Errc::endpoint_mismatch,
          "restrict_span: arrows must land in the feet of n");
  SetSpan fcomp(FinFunction::identity(f.dom), f);
  SetSpan gconj(g, FinFunction::identity(g.dom));
  SetSpan left_part = span_compose(fcomp, n);
  SetSpan whole = span_compose(left_part, gconj);
  PullbackSets pb1 = pullback(f, n.left);
  PullbackSets pb2 = pullback(left_part.right, g);
  std::vector<int> t(whole.apex.size());
  for (int k = 0; k < whole.apex.size(); ++k)
    t[k] = pb1.p2.table[pb2.p1.table[k]];
  SpanCell cartesian{whole, n, f, g, FinFunction(whole.apex, n.apex, std::move(t))};
  return SpanRestriction{whole, cartesian};
}

// ---------------------------------------------------------------------------
// Mat(FinSet)

static std::string mat_enc(const MatProarrow& m) {
  std::string s = "mat{" + m.src.enc() + ";" + m.dst.enc();
  for (const auto& e : m.entries) s += ";" + e.enc();
  return s + "}";
}

static std::string mat_cell_enc(const MatCell& c) {
  std::string s = "mcell{" + mat_enc(c.top) + ";" + mat_enc(c.bottom) + ";" +
                  c.row_map.enc() + ";" + c.col_map.enc();
  for (const auto& e : c.entry_maps) s += ";" + e.enc();
  return s + "}";
}

Ob MatDouble::ob(const FinSet& s) { return Ob{s.enc(), s}; }
Arr MatDouble::arr(const FinFunction& f) { return Arr{f.enc(), f}; }
Pro MatDouble::pro(const MatProarrow& m) { return Pro{mat_enc(m), m}; }
Cell MatDouble::cell(const MatCell& c) { return Cell{mat_cell_enc(c), c}; }

const FinSet& MatDouble::ob_of(const Ob& o) { return std::any_cast<const FinSet&>(o.data); }
const FinFunction& MatDouble::arr_of(const Arr& a) {
  return std::any_cast<const FinFunction&>(a.data);
}
const MatProarrow& MatDouble::pro_of(const Pro& p) {
  return std::any_cast<const MatProarrow&>(p.data);
}
const MatCell& MatDouble::cell_of(const Cell& c) {
  return std::any_cast<const MatCell&>(c.data);
}

Ob MatDouble::arr_src(const Arr& f) const { return ob(arr_of(f).dom); }
Ob MatDouble::arr_dst(const Arr& f) const { return ob(arr_of(f).cod); }
Ob MatDouble::pro_src(const Pro& m) const { return ob(pro_of(m).src); }
Ob MatDouble::pro_dst(const Pro& m) const { return ob(pro_of(m).dst); }
Pro MatDouble::cell_top(const Cell& a) const { return pro(cell_of(a).top); }
Pro MatDouble::cell_bottom(const Cell& a) const { return pro(cell_of(a).bottom); }
Arr MatDouble::cell_left(const Cell& a) const { return arr(cell_of(a).row_map); }
Arr MatDouble::cell_right(const Cell& a) const { return arr(cell_of(a).col_map); }

Arr MatDouble::id_arrow(const Ob& x) const {
  return arr(FinFunction::identity(ob_of(x)));
}
Arr MatDouble::compose_arrows(const Arr& f, const Arr& g) const {
  return arr(compose_fn(arr_of(f), arr_of(g)));
}

MatProarrow mat_identity(const FinSet& x) {
  MatProarrow m;
  m.src = m.dst = x;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      if (i == j)
        m.entries.push_back(
            FinSet("d(" + escape_label(x.elements()[i]) + ")", {x.elements()[i]}));
      else
        m.entries.push_back(FinSet("0", {}));
    }
  return m;
}

Pro MatDouble::id_pro(const Ob& x) const { return pro(mat_identity(ob_of(x))); }

namespace {

// One composite entry element per (middle index, element of m, element of n).
struct MatCompositeEntry {
  FinSet set;
  std::vector<std::array<int, 3>> parts;  // (y, i, j)
  int index_of(int y, int i, int j) const {
    for (size_t k = 0; k < parts.size(); ++k)
      if (parts[k][0] == y && parts[k][1] == i && parts[k][2] == j)
        return static_cast<int>(k);
    return -1;
  }
};

MatCompositeEntry mat_composite_entry(const MatProarrow& m, const MatProarrow& n,
                                      int r, int c) {
  MatCompositeEntry out;
  std::vector<std::string> elems;
  for (int y = 0; y < m.dst.size(); ++y) {
    const FinSet& me = m.entry(r, y);
    const FinSet& ne = n.entry(y, c);
    for (int i = 0; i < me.size(); ++i)
      for (int j = 0; j < ne.size(); ++j) {
        elems.push_back("inj(" + escape_label(m.dst.elements()[y]) + ",tup(" +
                        join_escaped({escape_label(me.elements()[i]),
                                      escape_label(ne.elements()[j])}) +
                        "))");
        out.parts.push_back({y, i, j});
      }
  }
  out.set = FinSet("ce(" + escape_label(m.src.elements()[r]) + "," +
                       escape_label(n.dst.elements()[c]) + ")",
                   std::move(elems));
  return out;
}

}  // namespace

MatProarrow mat_compose(const MatProarrow& m, const MatProarrow& n) {
  require(m.dst == n.src, Errc::endpoint_mismatch, "mat_compose: endpoints");
  MatProarrow out;
  out.src = m.src;
  out.dst = n.dst;
  for (int r = 0; r < m.src.size(); ++r)
    for (int c = 0; c < n.dst.size(); ++c)
      out.entries.push_back(mat_composite_entry(m, n, r, c).set);
  return out;
}

Pro MatDouble::compose_pro(const Pro& m, const Pro& n) const {
  return pro(mat_compose(pro_of(m), pro_of(n)));
}

Cell MatDouble::id_cell_on_pro(const Pro& mh) const {
  const MatProarrow& m = pro_of(mh);
  MatCell c{m, m, FinFunction::identity(m.src), FinFunction::identity(m.dst), {}};
  for (const auto& e : m.entries) c.entry_maps.push_back(FinFunction::identity(e));
  return cell(c);
}

Cell MatDouble::id_cell_on_arrow(const Arr& fh) const {
  const FinFunction& f = arr_of(fh);
  MatProarrow top = mat_identity(f.dom);
  MatProarrow bottom = mat_identity(f.cod);
  MatCell c{top, bottom, f, f, {}};
  for (int i = 0; i < f.dom.size(); ++i)
    for (int j = 0; j < f.dom.size(); ++j) {
      const FinSet& e = top.entry(i, j);
      const FinSet& target = bottom.entry(f.table[i], f.table[j]);
      std::vector<int> t(e.size(), 0);  // at most one element
      c.entry_maps.push_back(FinFunction(e, target, std::move(t)));
    }
  return cell(c);
}

Cell MatDouble::compose_cells_vert(const Cell& a, const Cell& b) const {
  const MatCell& ca = cell_of(a);
  const MatCell& cb = cell_of(b);
  require(ca.bottom == cb.top, Errc::frame_mismatch, "vertical composite frames");
  MatCell out{ca.top, cb.bottom, compose_fn(ca.row_map, cb.row_map),
              compose_fn(ca.col_map, cb.col_map), {}};
  for (int r = 0; r < ca.top.src.size(); ++r)
    for (int c = 0; c < ca.top.dst.size(); ++c) {
      const FinFunction& first = ca.entry_map(r, c);
      const FinFunction& second =
          cb.entry_map(ca.row_map.table[r], ca.col_map.table[c]);
      out.entry_maps.push_back(compose_fn(first, second));
    }
  return cell(out);
}

Cell MatDouble::compose_cells_ext(const Cell& a, const Cell& b) const {
  const MatCell& ca = cell_of(a);
  const MatCell& cb = cell_of(b);
  require(ca.top.dst == cb.top.src && ca.bottom.dst == cb.bottom.src &&
              ca.col_map == cb.row_map,
          Errc::frame_mismatch, "external composite frames");
  MatProarrow top = mat_compose(ca.top, cb.top);
  MatProarrow bottom = mat_compose(ca.bottom, cb.bottom);
  MatCell out{top, bottom, ca.row_map, cb.col_map, {}};
  for (int r = 0; r < top.src.size(); ++r)
    for (int c = 0; c < top.dst.size(); ++c) {
      MatCompositeEntry te = mat_composite_entry(ca.top, cb.top, r, c);
      MatCompositeEntry be =
          mat_composite_entry(ca.bottom, cb.bottom, ca.row_map.table[r],
                              cb.col_map.table[c]);
      std::vector<int> t(te.set.size());
      for (size_t k = 0; k < te.parts.size(); ++k) {
        auto [y, i, j] = te.parts[k];
        int y2 = ca.col_map.table[y];
        int i2 = ca.entry_map(r, y).table[i];
        int j2 = cb.entry_map(y, c).table[j];
        t[k] = be.index_of(y2, i2, j2);
      }
      out.entry_maps.push_back(FinFunction(te.set, be.set, std::move(t)));
    }
  return cell(out);
}

Cell MatDouble::associator(const Pro& mh, const Pro& nh, const Pro& ph) const {
  const MatProarrow &m = pro_of(mh), &n = pro_of(nh), &p = pro_of(ph);
  MatProarrow mn = mat_compose(m, n);
  MatProarrow np = mat_compose(n, p);
  MatProarrow lhs = mat_compose(mn, p);
  MatProarrow rhs = mat_compose(m, np);
  MatCell out{lhs, rhs, FinFunction::identity(lhs.src), FinFunction::identity(lhs.dst), {}};
  for (int r = 0; r < lhs.src.size(); ++r)
    for (int c = 0; c < lhs.dst.size(); ++c) {
      MatCompositeEntry le = mat_composite_entry(mn, p, r, c);
      MatCompositeEntry re = mat_composite_entry(m, np, r, c);
      std::vector<int> t(le.set.size());
      for (size_t k = 0; k < le.parts.size(); ++k) {
        auto [z, mn_idx, p_idx] = le.parts[k];
        MatCompositeEntry inner = mat_composite_entry(m, n, r, z);
        auto [y, m_idx, n_idx] = inner.parts[mn_idx];
        MatCompositeEntry target_inner = mat_composite_entry(n, p, y, c);
        int np_idx = target_inner.index_of(z, n_idx, p_idx);
        t[k] = re.index_of(y, m_idx, np_idx);
      }
      out.entry_maps.push_back(FinFunction(le.set, re.set, std::move(t)));
    }
  return cell(out);
}

Cell MatDouble::left_unitor(const Pro& mh) const {
  const MatProarrow& m = pro_of(mh);
  MatProarrow idm = mat_identity(m.src);
  MatProarrow lhs = mat_compose(idm, m);
  MatCell out{lhs, m, FinFunction::identity(m.src), FinFunction::identity(m.dst), {}};
  for (int r = 0; r < m.src.size(); ++r)
    for (int c = 0; c < m.dst.size(); ++c) {
      MatCompositeEntry le = mat_composite_entry(idm, m, r, c);
      std::vector<int> t(le.set.size());
      for (size_t k = 0; k < le.parts.size(); ++k) t[k] = le.parts[k][2];
      out.entry_maps.push_back(FinFunction(le.set, m.entry(r, c), std::move(t)));
    }
  return cell(out);
}

Cell MatDouble::right_unitor(const Pro& mh) const {
  const MatProarrow& m = pro_of(mh);
  MatProarrow idm = mat_identity(m.dst);
  MatProarrow lhs = mat_compose(m, idm);
  MatCell out{lhs, m, FinFunction::identity(m.src), FinFunction::identity(m.dst), {}};
  for (int r = 0; r < m.src.size(); ++r)
    for (int c = 0; c < m.dst.size(); ++c) {
      MatCompositeEntry le = mat_composite_entry(m, idm, r, c);
      std::vector<int> t(le.set.size());
      for (size_t k = 0; k < le.parts.size(); ++k) t[k] = le.parts[k][1];
      out.entry_maps.push_back(FinFunction(le.set, m.entry(r, c), std::move(t)));
    }
  return cell(out);
}

bool MatDouble::arrow_is_iso(const Arr& f) const { return is_bijection(arr_of(f)); }

Arr MatDouble::invert_arrow(const Arr& f) const {
  return arr(invert_bijection(arr_of(f)));
}

bool MatDouble::cell_is_iso(const Cell& a) const {
  const MatCell& c = cell_of(a);
  if (!is_bijection(c.row_map) || !is_bijection(c.col_map)) return false;
  for (const auto& e : c.entry_maps)
    if (!is_bijection(e)) return false;
  return true;
}

Cell MatDouble::invert_cell(const Cell& a) const {
  require(cell_is_iso(a), Errc::invalid_argument, "invert_cell: not invertible");
  const MatCell& c = cell_of(a);
  FinFunction row_inv = invert_bijection(c.row_map);
  FinFunction col_inv = invert_bijection(c.col_map);
  MatCell out{c.bottom, c.top, row_inv, col_inv, {}};
  for (int r = 0; r < c.bottom.src.size(); ++r)
    for (int cc = 0; cc < c.bottom.dst.size(); ++cc)
      out.entry_maps.push_back(
          invert_bijection(c.entry_map(row_inv.table[r], col_inv.table[cc])));
  return cell(out);
}

std::optional<std::string> MatDouble::check_cell(const Cell& a) const {
  const MatCell& c = cell_of(a);
  if (c.row_map.dom != c.top.src || c.row_map.cod != c.bottom.src)
    return "row map frame mismatch";
  if (c.col_map.dom != c.top.dst || c.col_map.cod != c.bottom.dst)
    return "column map frame mismatch";
  if (c.entry_maps.size() != c.top.entries.size()) return "entry maps not total";
  for (int r = 0; r < c.top.src.size(); ++r)
    for (int cc = 0; cc < c.top.dst.size(); ++cc) {
      const FinFunction& e = c.entry_map(r, cc);
      if (e.dom != c.top.entry(r, cc) ||
          e.cod != c.bottom.entry(c.row_map.table[r], c.col_map.table[cc]))
        return "entry map frame mismatch";
    }
  return {};
}

std::vector<Ob> MatDouble::objects(int bound) const {
  std::vector<Ob> out;
  for (int k = 0; k <= bound; ++k) out.push_back(ob(canonical_set(k)));
  return out;
}

std::vector<Arr> MatDouble::arrows_between(const Ob& x, const Ob& y) const {
  std::vector<Arr> out;
  for (auto& f : all_functions(ob_of(x), ob_of(y))) out.push_back(arr(f));
  return out;
}

std::vector<Pro> MatDouble::proarrows_between(const Ob& x, const Ob& y,
                                              int bound) const {
  const FinSet& sx = ob_of(x);
  const FinSet& sy = ob_of(y);
  int cells = sx.size() * sy.size();
  std::vector<Pro> out;
  std::vector<int> sizes(cells, 0);
  while (true) {
    MatProarrow m;
    m.src = sx;
    m.dst = sy;
    for (int k = 0; k < cells; ++k) m.entries.push_back(canonical_set(sizes[k]));
    out.push_back(pro(m));
    int k = cells - 1;
    while (k >= 0 && ++sizes[k] > bound) sizes[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<Cell> MatDouble::cells_in_frame(const Pro& toph, const Pro& bottomh,
                                            const Arr& lefth, const Arr& righth) const {
  const MatProarrow& top = pro_of(toph);
  const MatProarrow& bottom = pro_of(bottomh);
  const FinFunction& f = arr_of(lefth);
  const FinFunction& g = arr_of(righth);
  require(f.dom == top.src && f.cod == bottom.src && g.dom == top.dst &&
              g.cod == bottom.dst,
          Errc::frame_mismatch, "cells_in_frame: frame mismatch");
  std::vector<std::vector<FinFunction>> choices;
  for (int r = 0; r < top.src.size(); ++r)
    for (int c = 0; c < top.dst.size(); ++c) {
      choices.push_back(
          all_functions(top.entry(r, c), bottom.entry(f.table[r], g.table[c])));
      if (choices.back().empty()) return {};
    }
  std::vector<Cell> out;
  std::vector<int> pick(choices.size(), 0);
  while (true) {
    MatCell c{top, bottom, f, g, {}};
    for (size_t k = 0; k < choices.size(); ++k)
      c.entry_maps.push_back(choices[k][pick[k]]);
    out.push_back(cell(c));
    int k = static_cast<int>(choices.size()) - 1;
    while (k >= 0 && ++pick[k] == static_cast<int>(choices[k].size())) pick[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::optional<CompanionPair> MatDouble::companion(const Arr& fh) const {
  const FinFunction& f = arr_of(fh);
  MatProarrow comp;
  comp.src = f.dom;
  comp.dst = f.cod;
  for (int i = 0; i < f.dom.size(); ++i)
    for (int j = 0; j < f.cod.size(); ++j) {
      if (f.table[i] == j)
        comp.entries.push_back(
            FinSet("d(" + escape_label(f.dom.elements()[i]) + ")", {f.dom.elements()[i]}));
      else
        comp.entries.push_back(FinSet("0", {}));
    }
  MatProarrow id_dom = mat_identity(f.dom);
  MatProarrow id_cod = mat_identity(f.cod);
  MatCell unit{id_dom, comp, FinFunction::identity(f.dom), f, {}};
  for (int i = 0; i < f.dom.size(); ++i)
    for (int j = 0; j < f.dom.size(); ++j) {
      const FinSet& e = id_dom.entry(i, j);
      const FinSet& tgt = comp.entry(i, f.table[j]);
      unit.entry_maps.push_back(FinFunction(e, tgt, std::vector<int>(e.size(), 0)));
    }
  MatCell counit{comp, id_cod, f, FinFunction::identity(f.cod), {}};
  for (int i = 0; i < f.dom.size(); ++i)
    for (int j = 0; j < f.cod.size(); ++j) {
      const FinSet& e = comp.entry(i, j);
      const FinSet& tgt = id_cod.entry(f.table[i], j);
      counit.entry_maps.push_back(FinFunction(e, tgt, std::vector<int>(e.size(), 0)));
    }
  return CompanionPair{fh, pro(comp), cell(unit), cell(counit)};
}

std::optional<CompanionPair> MatDouble::conjoint(const Arr& fh) const {
  const FinFunction& f = arr_of(fh);
  MatProarrow conj;
  conj.src = f.cod;
  conj.dst = f.dom;
  for (int j = 0; j < f.cod.size(); ++j)
    for (int i = 0; i < f.dom.size(); ++i) {
      if (f.table[i] == j)
        conj.entries.push_back(
            FinSet("d(" + escape_label(f.dom.elements()[i]) + ")", {f.dom.elements()[i]}));
      else
        conj.entries.push_back(FinSet("0", {}));
    }
  MatProarrow id_dom = mat_identity(f.dom);
  MatProarrow id_cod = mat_identity(f.cod);
  MatCell unit{id_dom, conj, f, FinFunction::identity(f.dom), {}};
  for (int i = 0; i < f.dom.size(); ++i)
    for (int j = 0; j < f.dom.size(); ++j) {
      const FinSet& e = id_dom.entry(i, j);
      const FinSet& tgt = conj.entry(f.table[i], j);
      unit.entry_maps.push_back(FinFunction(e, tgt, std::vector<int>(e.size(), 0)));
    }
  MatCell counit{conj, id_cod, FinFunction::identity(f.cod), f, {}};
  for (int j = 0; j < f.cod.size(); ++j)
    for (int i = 0; i < f.dom.size(); ++i) {
      const FinSet& e = conj.entry(j, i);
      const FinSet& tgt = id_cod.entry(j, f.table[i]);
      counit.entry_maps.push_back(FinFunction(e, tgt, std::vector<int>(e.size(), 0)));
    }
  return CompanionPair{fh, pro(conj), cell(unit), cell(counit)};
}

const MatDouble& mat_double() {
  static MatDouble d;
  return d;
}

MatProarrow span_to_mat(const SetSpan& m) {
  MatProarrow out;
  out.src = m.left_foot;
  out.dst = m.right_foot;
  for (int i = 0; i < m.left_foot.size(); ++i)
    for (int j = 0; j < m.right_foot.size(); ++j) {
      std::vector<std::string> elems;
      for (int s = 0; s < m.apex.size(); ++s)
        if (m.left.table[s] == i && m.right.table[s] == j)
          elems.push_back(m.apex.elements()[s]);
      out.entries.push_back(FinSet("fib(" + escape_label(m.left_foot.elements()[i]) +
                                       "," + escape_label(m.right_foot.elements()[j]) +
                                       ")",
                                   std::move(elems)));
    }
  return out;
}

SetSpan mat_to_span(const MatProarrow& m) {
  std::vector<std::string> elems;
  std::vector<int> lt, rt;
  for (int i = 0; i < m.src.size(); ++i)
    for (int j = 0; j < m.dst.size(); ++j)
      for (const auto& e : m.entry(i, j).elements()) {
        elems.push_back("at(" + join_escaped({escape_label(m.src.elements()[i]),
                                              escape_label(m.dst.elements()[j]),
                                              escape_label(e)}) +
                        ")");
        lt.push_back(i);
        rt.push_back(j);
      }
  FinSet apex("apx(" + escape_label(m.src.name()) + "," + escape_label(m.dst.name()) + ")",
              std::move(elems));
  return SetSpan(FinFunction(apex, m.src, std::move(lt)),
                 FinFunction(apex, m.dst, std::move(rt)));
}

MatCell span_cell_to_mat(const SpanCell& c) {
  MatProarrow top = span_to_mat(c.top);
  MatProarrow bottom = span_to_mat(c.bottom);
  MatCell out{top, bottom, c.left, c.right, {}};
  for (int i = 0; i < c.top.left_foot.size(); ++i)
    for (int j = 0; j < c.top.right_foot.size(); ++j) {
      const FinSet& e = top.entry(i, j);
      const FinSet& tgt = bottom.entry(c.left.table[i], c.right.table[j]);
      std::vector<int> t;
      for (const auto& lbl : e.elements()) {
        int s = c.top.apex.index_of(lbl);
        t.push_back(tgt.index_of(c.bottom.apex.elements()[c.apex_map.table[s]]));
      }
      out.entry_maps.push_back(FinFunction(e, tgt, std::move(t)));
    }
  return out;
}

SpanCell mat_cell_to_span(const MatCell& c) {
  SetSpan top = mat_to_span(c.top);
  SetSpan bottom = mat_to_span(c.bottom);
  std::vector<int> t;
  int k = 0;
  // Walk the tagged apex in construction order so indices line up.
  std::vector<std::vector<int>> offsets(c.bottom.src.size() * c.bottom.dst.size());
  {
    int pos = 0;
    for (int i = 0; i < c.bottom.src.size(); ++i)
      for (int j = 0; j < c.bottom.dst.size(); ++j) {
        auto& off = offsets[i * c.bottom.dst.size() + j];
        for (int e = 0; e < c.bottom.entry(i, j).size(); ++e) off.push_back(pos++);
      }
  }
  for (int i = 0; i < c.top.src.size(); ++i)
    for (int j = 0; j < c.top.dst.size(); ++j)
      for (int e = 0; e < c.top.entry(i, j).size(); ++e, ++k) {
        int i2 = c.row_map.table[i];
        int j2 = c.col_map.table[j];
        int e2 = c.entry_map(i, j).table[e];
        t.push_back(offsets[i2 * c.bottom.dst.size() + j2][e2]);
      }
  return SpanCell{top, bottom, c.row_map, c.col_map,
                  FinFunction(top.apex, bottom.apex, std::move(t))};
}

SpanCell span_roundtrip_iso(const SetSpan& m) {
  SetSpan back = mat_to_span(span_to_mat(m));
  // Element k of back is at(x,y,s); recover s by walking fibers in order.
  std::vector<int> t;
  for (int i = 0; i < m.left_foot.size(); ++i)
    for (int j = 0; j < m.right_foot.size(); ++j)
      for (int s = 0; s < m.apex.size(); ++s)
        if (m.left.table[s] == i && m.right.table[s] == j) t.push_back(s);
  return SpanCell{back, m, FinFunction::identity(m.left_foot),
                  FinFunction::identity(m.right_foot),
                  FinFunction(back.apex, m.apex, std::move(t))};
}

MatCell mat_roundtrip_iso(const MatProarrow& m) {
  MatProarrow back = span_to_mat(mat_to_span(m));
  MatCell out{back, m, FinFunction::identity(m.src), FinFunction::identity(m.dst), {}};
  for (int i = 0; i < m.src.size(); ++i)
    for (int j = 0; j < m.dst.size(); ++j) {
      const FinSet& e = back.entry(i, j);
      std::vector<int> t(e.size());
      for (int k = 0; k < e.size(); ++k) t[k] = k;  // fibers preserve entry order
      out.entry_maps.push_back(FinFunction(e, m.entry(i, j), std::move(t)));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Terminal and op

Ob TerminalDouble::the_ob() { return Ob{"*", std::string("*")}; }
Arr TerminalDouble::the_arr() { return Arr{"*", std::string("*")}; }
Pro TerminalDouble::the_pro() { return Pro{"*", std::string("*")}; }
Cell TerminalDouble::the_cell() { return Cell{"*", std::string("*")}; }

std::optional<CompanionPair> TerminalDouble::companion(const Arr&) const {
  return CompanionPair{the_arr(), the_pro(), the_cell(), the_cell()};
}
std::optional<CompanionPair> TerminalDouble::conjoint(const Arr&) const {
  return CompanionPair{the_arr(), the_pro(), the_cell(), the_cell()};
}

const TerminalDouble& terminal_double() {
  static TerminalDouble d;
  return d;
}

Cell SpanToMatFunctor::laxator(const Pro& mh, const Pro& nh) const {
  const SetSpan& m = SpanDouble::pro_of(mh);
  const SetSpan& n = SpanDouble::pro_of(nh);
  MatProarrow fm = span_to_mat(m);
  MatProarrow fn = span_to_mat(n);
  SetSpan mn = span_compose(m, n);
  MatProarrow lhs = mat_compose(fm, fn);
  MatProarrow rhs = span_to_mat(mn);
  PullbackSets pb = pullback(m.right, n.left);
  MatCell out{lhs, rhs, FinFunction::identity(lhs.src), FinFunction::identity(lhs.dst), {}};
  for (int r = 0; r < lhs.src.size(); ++r)
    for (int c = 0; c < lhs.dst.size(); ++c) {
      MatCompositeEntry le = mat_composite_entry(fm, fn, r, c);
      const FinSet& tgt = rhs.entry(r, c);
      std::vector<int> t(le.set.size());
      for (size_t k = 0; k < le.parts.size(); ++k) {
        auto [y, i, j] = le.parts[k];
        int s = m.apex.index_of(fm.entry(r, y).elements()[i]);
        int u = n.apex.index_of(fn.entry(y, c).elements()[j]);
        int p = pb.index_of_pair(s, u);
        t[k] = tgt.index_of(mn.apex.elements()[p]);
      }
      out.entry_maps.push_back(FinFunction(le.set, tgt, std::move(t)));
    }
  return MatDouble::cell(out);
}

Cell SpanToMatFunctor::unitor(const Ob& xh) const {
  const FinSet& x = SpanDouble::ob_of(xh);
  MatProarrow lhs = mat_identity(x);
  MatProarrow rhs = span_to_mat(SetSpan::identity(x));
  MatCell out{lhs, rhs, FinFunction::identity(x), FinFunction::identity(x), {}};
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      const FinSet& e = lhs.entry(i, j);
      out.entry_maps.push_back(
          FinFunction(e, rhs.entry(i, j), std::vector<int>(e.size(), 0)));
    }
  return MatDouble::cell(out);
}

Cell MatToSpanFunctor::laxator(const Pro& mh, const Pro& nh) const {
  const MatProarrow& m = MatDouble::pro_of(mh);
  const MatProarrow& n = MatDouble::pro_of(nh);
  SetSpan fm = mat_to_span(m);
  SetSpan fn = mat_to_span(n);
  MatProarrow mn = mat_compose(m, n);
  SetSpan lhs = span_compose(fm, fn);
  SetSpan rhs = mat_to_span(mn);
  PullbackSets pb = pullback(fm.right, fn.left);
  // Element offsets of each composite entry inside the tagged apex of rhs.
  std::vector<int> entry_offset(m.src.size() * n.dst.size(), 0);
  {
    int pos = 0;
    for (int r = 0; r < m.src.size(); ++r)
      for (int c = 0; c < n.dst.size(); ++c) {
        entry_offset[r * n.dst.size() + c] = pos;
        pos += mn.entry(r, c).size();
      }
  }
  std::vector<int> t(lhs.apex.size());
  for (int k = 0; k < lhs.apex.size(); ++k) {
    int a = pb.p1.table[k];  // index into fm.apex
    int b = pb.p2.table[k];  // index into fn.apex
    int r = fm.left.table[a];
    int y = fm.right.table[a];
    int c = fn.right.table[b];
    // Position of a within its fiber (r,y) and of b within (y,c).
    int i = 0, j = 0;
    for (int a2 = 0; a2 < a; ++a2)
      if (fm.left.table[a2] == r && fm.right.table[a2] == y) ++i;
    for (int b2 = 0; b2 < b; ++b2)
      if (fn.left.table[b2] == y && fn.right.table[b2] == c) ++j;
    MatCompositeEntry ce = mat_composite_entry(m, n, r, c);
    t[k] = entry_offset[r * n.dst.size() + c] + ce.index_of(y, i, j);
  }
  return SpanDouble::cell(SpanCell{lhs, rhs, FinFunction::identity(lhs.left_foot),
                                   FinFunction::identity(lhs.right_foot),
                                   FinFunction(lhs.apex, rhs.apex, std::move(t))});
}

Cell MatToSpanFunctor::unitor(const Ob& xh) const {
  const FinSet& x = MatDouble::ob_of(xh);
  SetSpan lhs = SetSpan::identity(x);
  SetSpan rhs = mat_to_span(mat_identity(x));
  std::vector<int> t(x.size());
  for (int i = 0; i < x.size(); ++i) t[i] = i;  // one apex element per diagonal entry
  return SpanDouble::cell(SpanCell{lhs, rhs, FinFunction::identity(x),
                                   FinFunction::identity(x),
                                   FinFunction(x, rhs.apex, std::move(t))});
}

SpanExtension extend_span(const SetSpan& m, const FinFunction& f,
                          const FinFunction& g) {
  require(f.dom == m.left_foot && g.dom == m.right_foot, Errc::endpoint_mismatch,
          "extend_span: arrows must start at the feet of m");
  SetSpan ext(compose_fn(m.left, f), compose_fn(m.right, g));
  SpanCell cell{m, ext, f, g, FinFunction::identity(m.apex)};
  return SpanExtension{ext, cell};
}

std::optional<CompanionPair> OpDouble::companion(const Arr& f) const {
  auto c = base_.conjoint(f);
  if (!c) return {};
  return CompanionPair{c->arrow, c->proarrow, c->counit, c->unit};
}

std::optional<CompanionPair> OpDouble::conjoint(const Arr& f) const {
  auto c = base_.companion(f);
  if (!c) return {};
  return CompanionPair{c->arrow, c->proarrow, c->counit, c->unit};
}

}  // namespace dcat
