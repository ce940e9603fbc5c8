#include "dcat/theory.hpp"

#include <algorithm>
#include <set>

namespace dcat {

namespace {
const SpanDouble& SD = span_double();
}

std::string ObjectWord::enc() const {
  std::vector<std::string> parts;
  for (const auto& f : factors) parts.push_back(escape_label(f));
  return "ob(" + join_escaped(parts) + ")";
}

ObjectWord ArrowWord::cod() const {
  ObjectWord out;
  for (int v : sigma.table) out.factors.push_back(dom.factors[v]);
  return out;
}

std::string ArrowWord::enc() const {
  return "arr(" + dom.enc() + ";" + sigma.enc() + ")";
}

std::string ProWord::enc() const {
  switch (kind) {
    case Kind::id:
      return "id(" + object.enc() + ")";
    case Kind::gen:
      return "gen(" + escape_label(name) + ")";
    case Kind::comp:
      return "comp(" + parts[0]->enc() + "," + parts[1]->enc() + ")";
    case Kind::prod: {
      std::string s = "prodw(" + indexing.enc() + ";[";
      for (size_t i = 0; i < src_family.size(); ++i)
        s += (i ? "," : "") + src_family[i].enc();
      s += "];[";
      for (size_t j = 0; j < dst_family.size(); ++j)
        s += (j ? "," : "") + dst_family[j].enc();
      s += "];[";
      for (size_t a = 0; a < parts.size(); ++a) s += (a ? "," : "") + parts[a]->enc();
      return s + "])";
    }
    case Kind::companion: {
      std::string s = "cmpn(" + sigma.enc() + ";[";
      for (size_t i = 0; i < src_family.size(); ++i)
        s += (i ? "," : "") + src_family[i].enc();
      return s + "])";
    }
  }
  return "";
}

ProWordPtr word_id(ObjectWord w) {
  auto out = std::make_shared<ProWord>();
  out->kind = ProWord::Kind::id;
  out->object = std::move(w);
  return out;
}

ProWordPtr word_gen(std::string name) {
  auto out = std::make_shared<ProWord>();
  out->kind = ProWord::Kind::gen;
  out->name = std::move(name);
  return out;
}

ProWordPtr word_comp(ProWordPtr a, ProWordPtr b) {
  auto out = std::make_shared<ProWord>();
  out->kind = ProWord::Kind::comp;
  out->parts = {std::move(a), std::move(b)};
  return out;
}

ProWordPtr word_prod(SetSpan indexing, std::vector<ObjectWord> src_family,
                     std::vector<ObjectWord> dst_family,
                     std::vector<ProWordPtr> parts) {
  auto out = std::make_shared<ProWord>();
  out->kind = ProWord::Kind::prod;
  out->indexing = std::move(indexing);
  out->src_family = std::move(src_family);
  out->dst_family = std::move(dst_family);
  out->parts = std::move(parts);
  return out;
}

ProWordPtr word_local_prod(ObjectWord src, ObjectWord dst,
                           std::vector<ProWordPtr> parts) {
  int k = static_cast<int>(parts.size());
  FinSet apex = canonical_index_set(k);
  FinSet one = canonical_index_set(1);
  return word_prod(SetSpan(FinFunction(apex, one, std::vector<int>(k, 0)),
                           FinFunction(apex, one, std::vector<int>(k, 0))),
                   {std::move(src)}, {std::move(dst)}, std::move(parts));
}

ProWordPtr word_companion(FinFunction sigma, std::vector<ObjectWord> src_family) {
  auto out = std::make_shared<ProWord>();
  out->kind = ProWord::Kind::companion;
  out->sigma = std::move(sigma);
  out->src_family = std::move(src_family);
  return out;
}

std::string CellWord::enc() const {
  switch (kind) {
    case Kind::gen:
      return "cgen(" + escape_label(name) + ")";
    case Kind::id_pro:
      return "cid(" + pro->enc() + ")";
    case Kind::vert:
      return "cvert(" + parts[0]->enc() + "," + parts[1]->enc() + ")";
    case Kind::ext:
      return "cext(" + parts[0]->enc() + "," + parts[1]->enc() + ")";
    case Kind::proj:
      return "cproj(" + pro->enc() + "," + std::to_string(index) + ")";
    case Kind::pair: {
      std::string s = "cpair(" + pro->enc() + ";" + (source ? source->enc() : "") + ";[";
      for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i]->enc();
      return s + "])";
    }
    case Kind::comp_unit:
    case Kind::comp_counit: {
      std::string s = kind == Kind::comp_unit ? "cunit(" : "ccounit(";
      s += sigma.enc() + ";[";
      for (size_t i = 0; i < src_family.size(); ++i)
        s += (i ? "," : "") + src_family[i].enc();
      return s + "])";
    }
  }
  return "";
}

CellWordPtr cell_gen(std::string name) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::gen;
  out->name = std::move(name);
  return out;
}
CellWordPtr cell_id(ProWordPtr pro) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::id_pro;
  out->pro = std::move(pro);
  return out;
}
CellWordPtr cell_vert(CellWordPtr a, CellWordPtr b) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::vert;
  out->parts = {std::move(a), std::move(b)};
  return out;
}
CellWordPtr cell_ext(CellWordPtr a, CellWordPtr b) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::ext;
  out->parts = {std::move(a), std::move(b)};
  return out;
}
CellWordPtr cell_proj(ProWordPtr prod, int index) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::proj;
  out->pro = std::move(prod);
  out->index = index;
  return out;
}
CellWordPtr cell_pair(ProWordPtr prod, ProWordPtr source,
                      std::vector<CellWordPtr> parts) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::pair;
  out->pro = std::move(prod);
  out->source = std::move(source);
  out->parts = std::move(parts);
  return out;
}
CellWordPtr cell_comp_unit(FinFunction sigma, std::vector<ObjectWord> src_family) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::comp_unit;
  out->sigma = std::move(sigma);
  out->src_family = std::move(src_family);
  return out;
}
CellWordPtr cell_comp_counit(FinFunction sigma, std::vector<ObjectWord> src_family) {
  auto out = std::make_shared<CellWord>();
  out->kind = CellWord::Kind::comp_counit;
  out->sigma = std::move(sigma);
  out->src_family = std::move(src_family);
  return out;
}

const TheoryPresentation::CellGen& TheoryPresentation::cell_generator(
    const std::string& name) const {
  for (const auto& g : cell_generators)
    if (g.name == name) return g;
  fail(Errc::ill_typed_word, "no cell generator named " + name);
}

TheoryPresentation builtin_lcmon_theory() {
  TheoryPresentation t;
  t.object_generators = {"x"};
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  ProWordPtr wedge = word_local_prod(x, x, {idx, idx});
  ProWordPtr wedge3 = word_local_prod(x, x, {idx, idx, idx});
  ProWordPtr top = word_local_prod(x, x, {});
  t.cell_generators.push_back({"mu", wedge, idx});
  t.cell_generators.push_back({"eta", top, idx});
  CellWordPtr mu = cell_gen("mu");
  CellWordPtr eta = cell_gen("eta");
  CellWordPtr one = cell_id(idx);
  CellWordPtr mu01 = cell_vert(
      cell_pair(wedge, wedge3, {cell_proj(wedge3, 0), cell_proj(wedge3, 1)}), mu);
  CellWordPtr mu12 = cell_vert(
      cell_pair(wedge, wedge3, {cell_proj(wedge3, 1), cell_proj(wedge3, 2)}), mu);
  t.equations.push_back(
      {"assoc", "assoc",
       cell_vert(cell_pair(wedge, wedge3, {mu01, cell_proj(wedge3, 2)}), mu),
       cell_vert(cell_pair(wedge, wedge3, {cell_proj(wedge3, 0), mu12}), mu)});
  CellWordPtr zero = cell_vert(cell_pair(top, idx, {}), eta);
  t.equations.push_back({"unit", "unit.l",
                         cell_vert(cell_pair(wedge, idx, {zero, one}), mu), one});
  t.equations.push_back({"unit", "unit.r",
                         cell_vert(cell_pair(wedge, idx, {one, zero}), mu), one});
  t.equations.push_back(
      {"comm", "comm",
       cell_vert(cell_pair(wedge, wedge, {cell_proj(wedge, 1), cell_proj(wedge, 0)}), mu),
       mu});
  return t;
}

std::string atomic_key(const ProWordPtr& w) {
  if (w->kind == ProWord::Kind::id && w->object.factors.size() == 1)
    return "id:" + w->object.factors[0];
  if (w->kind == ProWord::Kind::gen) return "gen:" + w->name;
  fail(Errc::ill_typed_word, "not an atomic proarrow word: " + w->enc());
}

ModelData boolean_lcmon_model() {
  ModelData m;
  m.theory = builtin_lcmon_theory();
  FinSet pt("pt", {"*"});
  FinSet bools("bool", {"0", "1"});
  m.on_objects["x"] = pt;
  m.on_atomic["id:x"] = SetSpan(FinFunction(bools, pt, {0, 0}),
                                FinFunction(bools, pt, {0, 0}));
  // Composition is AND on pair(a,b) in lexicographic order.
  m.laxators[{"id:x", "id:x"}] =
      FinFunction(pullback(m.on_atomic["id:x"].right, m.on_atomic["id:x"].left).apex,
                  bools, {0, 0, 0, 1});
  m.unitors["x"] = FinFunction(pt, bools, {1});
  // mu: OR on the local-product tuples (a-major order), eta picks 0.
  // Table domains are the evaluated product apexes; filled below via eval.
  ModelEval ev(m);
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  SetSpan wedge = ev.eval_pro(word_local_prod(x, x, {idx, idx}));
  SetSpan top = ev.eval_pro(word_local_prod(x, x, {}));
  m.on_cells["mu"] = FinFunction(wedge.apex, bools, {0, 1, 1, 1});
  m.on_cells["eta"] = FinFunction(top.apex, bools, {0});
  return m;
}

ModelData trivial_lcmon_model() {
  ModelData m;
  m.theory = builtin_lcmon_theory();
  FinSet pt("pt", {"*"});
  FinSet one("one", {"0"});
  m.on_objects["x"] = pt;
  m.on_atomic["id:x"] =
      SetSpan(FinFunction(one, pt, {0}), FinFunction(one, pt, {0}));
  m.laxators[{"id:x", "id:x"}] =
      FinFunction(pullback(m.on_atomic["id:x"].right, m.on_atomic["id:x"].left).apex,
                  one, {0});
  m.unitors["x"] = FinFunction(pt, one, {0});
  ModelEval ev(m);
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  SetSpan wedge = ev.eval_pro(word_local_prod(x, x, {idx, idx}));
  SetSpan top = ev.eval_pro(word_local_prod(x, x, {}));
  m.on_cells["mu"] = FinFunction(wedge.apex, one, {0});
  m.on_cells["eta"] = FinFunction(top.apex, one, {0});
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation

FinSet ModelEval::eval_object(const ObjectWord& w) const {
  if (w.factors.size() == 1) {
    auto it = model_.on_objects.find(w.factors[0]);
    require(it != model_.on_objects.end(), Errc::missing_table_entry,
            "no object assignment for " + w.factors[0]);
    return it->second;
  }
  std::vector<FinSet> sets;
  for (const auto& f : w.factors) sets.push_back(eval_object(ObjectWord{{f}}));
  return product_sets(sets).prod;
}

FinFunction ModelEval::object_projection(const ObjectWord& w, int index) const {
  if (w.factors.size() == 1) {
    require(index == 0, Errc::ill_typed_word, "projection index out of range");
    return FinFunction::identity(eval_object(w));
  }
  std::vector<FinSet> sets;
  for (const auto& f : w.factors) sets.push_back(eval_object(ObjectWord{{f}}));
  return product_sets(sets).projections[index];
}

FinFunction ModelEval::eval_arrow(const ArrowWord& w) const {
  FinSet dom = eval_object(w.dom);
  ObjectWord cw = w.cod();
  FinSet cod = eval_object(cw);
  std::vector<FinFunction> legs;
  for (size_t j = 0; j < w.sigma.table.size(); ++j)
    legs.push_back(object_projection(w.dom, w.sigma.table[j]));
  if (cw.factors.size() == 1) return legs.empty() ? FinFunction(dom, cod, {}) : legs[0];
  std::vector<FinSet> sets;
  for (const auto& f : cw.factors) sets.push_back(eval_object(ObjectWord{{f}}));
  return pair_fns(product_sets(sets), dom, legs);
}

namespace {

// Desugars x^σ_! to a product word over the conjoint span of σ.
ProWordPtr companion_as_product(const ProWord& w) {
  std::vector<ObjectWord> dst;
  for (int v : w.sigma.table) dst.push_back(w.src_family[v]);
  std::vector<ProWordPtr> parts;
  for (const auto& o : dst) parts.push_back(word_id(o));
  return word_prod(SetSpan(w.sigma, FinFunction::identity(w.sigma.dom)),
                   w.src_family, dst, parts);
}

}  // namespace

SetSpan ModelEval::eval_pro(const ProWordPtr& w) const {
  switch (w->kind) {
    case ProWord::Kind::id: {
      if (w->object.factors.size() == 1) {
        auto it = model_.on_atomic.find("id:" + w->object.factors[0]);
        require(it != model_.on_atomic.end(), Errc::missing_table_entry,
                "no identity assignment for " + w->object.factors[0]);
        return it->second;
      }
      // Parallel product of the factor identities.
      int k = static_cast<int>(w->object.factors.size());
      std::vector<ObjectWord> fam;
      std::vector<ProWordPtr> parts;
      for (const auto& f : w->object.factors) {
        fam.push_back(ObjectWord{{f}});
        parts.push_back(word_id(ObjectWord{{f}}));
      }
      FinSet ix = canonical_index_set(k);
      return eval_product(word_prod(SetSpan::identity(ix), fam, fam, parts)).base;
    }
    case ProWord::Kind::gen: {
      auto it = model_.on_atomic.find("gen:" + w->name);
      require(it != model_.on_atomic.end(), Errc::missing_table_entry,
              "no proarrow assignment for " + w->name);
      return it->second;
    }
    case ProWord::Kind::comp:
      return span_compose(eval_pro(w->parts[0]), eval_pro(w->parts[1]));
    case ProWord::Kind::prod:
      return eval_product(w).base;
    case ProWord::Kind::companion:
      return eval_product(companion_as_product(*w)).base;
  }
  fail(Errc::ill_typed_word, "unreachable");
}

const ModelEval::ThProduct& ModelEval::eval_product_cached(const ProWordPtr& w) const {
  std::string key = w->enc();
  auto it = pro_cache_->prod.find(key);
  if (it == pro_cache_->prod.end()) {
    it = pro_cache_->prod
             .emplace(key, std::make_shared<const ThProduct>(eval_product(w)))
             .first;
  }
  return *it->second;
}

ModelEval::ThProduct ModelEval::eval_product(const ProWordPtr& w) const {
  require(w->kind == ProWord::Kind::prod, Errc::ill_typed_word,
          "eval_product needs a product word");
  const SetSpan& ix = w->indexing;
  int ni = ix.left_foot.size(), na = ix.apex.size(), nj = ix.right_foot.size();
  require(static_cast<int>(w->parts.size()) == na, Errc::ill_typed_word,
          "product word component count");
  require(static_cast<int>(w->src_family.size()) == ni &&
              static_cast<int>(w->dst_family.size()) == nj,
          Errc::ill_typed_word, "product word family sizes");
  if (ni != 1)
    for (const auto& f : w->src_family)
      require(f.factors.size() == 1, Errc::ill_typed_word,
              "non-local products need single-generator feet");
  if (nj != 1)
    for (const auto& f : w->dst_family)
      require(f.factors.size() == 1, Errc::ill_typed_word,
              "non-local products need single-generator feet");
  std::vector<SetSpan> comps;
  for (const auto& p : w->parts) comps.push_back(eval_pro(p));
  DiagramShape shape = elements_of_span_copresheaf(ix);
  SetDiagram diagram;
  diagram.shape = shape;
  std::vector<FinSet> src_sets, dst_sets;
  for (const auto& f : w->src_family) src_sets.push_back(eval_object(f));
  for (const auto& f : w->dst_family) dst_sets.push_back(eval_object(f));
  for (const auto& s : src_sets) diagram.on_objects.push_back(s);
  for (const auto& c : comps) diagram.on_objects.push_back(c.apex);
  for (const auto& s : dst_sets) diagram.on_objects.push_back(s);
  for (const auto& c : comps) {
    diagram.on_generators.push_back(c.left);
    diagram.on_generators.push_back(c.right);
  }
  diagram.validate();
  ThProduct out;
  out.lim = limit_of_diagram(diagram);
  out.num_left = ni;
  out.num_apex = na;
  out.num_right = nj;
  // Feet: the concatenated object word on each side; a single entry stays
  // the entry itself (products in the theory are strict).
  auto foot = [&](const std::vector<ObjectWord>& fams, int offset,
                  int count) -> FinFunction {
    if (count == 1) return out.lim.legs[offset];
    std::vector<std::string> factors;
    for (const auto& f : fams) factors.push_back(f.factors[0]);
    std::vector<FinSet> sets;
    for (const auto& f : factors) sets.push_back(eval_object(ObjectWord{{f}}));
    ProductSets ps = product_sets(sets);
    std::vector<FinFunction> legs(out.lim.legs.begin() + offset,
                                  out.lim.legs.begin() + offset + count);
    if (count == 0) return FinFunction(out.lim.apex, ps.prod,
                                       std::vector<int>(out.lim.apex.size(), 0));
    return pair_fns(ps, out.lim.apex, legs);
  };
  FinFunction left = foot(w->src_family, 0, ni);
  FinFunction right = foot(w->dst_family, ni + na, nj);
  out.base = SetSpan(left, right);
  auto foot_projections = [&](const std::vector<FinSet>& sets, const FinSet& foot_set) {
    std::vector<FinFunction> out_proj;
    if (sets.size() == 1) {
      out_proj.push_back(FinFunction::identity(sets[0]));
    } else {
      ProductSets ps = product_sets(sets);
      out_proj = ps.projections;
    }
    (void)foot_set;
    return out_proj;
  };
  out.src_proj = foot_projections(src_sets, left.cod);
  out.dst_proj = foot_projections(dst_sets, right.cod);
  for (int a = 0; a < na; ++a) {
    out.projections.push_back(SpanCell{out.base, comps[a],
                                       out.src_proj[ix.left.table[a]],
                                       out.dst_proj[ix.right.table[a]],
                                       out.lim.legs[ni + a]});
  }
  return out;
}

SpanCell ModelEval::th_pair_cells(const ThProduct& p, const SetSpan& n,
                                  const FinFunction& left, const FinFunction& right,
                                  const std::vector<SpanCell>& alphas) const {
  require(static_cast<int>(alphas.size()) == p.num_apex, Errc::frame_mismatch,
          "pairing needs one cell per component");
  std::vector<int> t(n.apex.size());
  for (int e = 0; e < n.apex.size(); ++e) {
    std::vector<int> comps(p.num_left + p.num_apex + p.num_right);
    int lval = left.table[n.left.table[e]];
    int rval = right.table[n.right.table[e]];
    for (int i = 0; i < p.num_left; ++i) comps[i] = p.src_proj[i].table[lval];
    for (int a = 0; a < p.num_apex; ++a)
      comps[p.num_left + a] = alphas[a].apex_map.table[e];
    for (int j = 0; j < p.num_right; ++j)
      comps[p.num_left + p.num_apex + j] = p.dst_proj[j].table[rval];
    int idx = p.lim.index_of(comps);
    require(idx >= 0, Errc::frame_mismatch, "cone does not factor through the limit");
    t[e] = idx;
  }
  return SpanCell{n, p.base, left, right, FinFunction(n.apex, p.base.apex, t)};
}

namespace {

bool is_atomic(const ProWordPtr& w) {
  return w->kind == ProWord::Kind::gen ||
         (w->kind == ProWord::Kind::id && w->object.factors.size() == 1);
}

// Composite of two atomic words with the strict unit laws applied.
ProWordPtr canon_atomic_composite(const ProWordPtr& a, const ProWordPtr& b) {
  bool aid = a->kind == ProWord::Kind::id;
  bool bid = b->kind == ProWord::Kind::id;
  if (aid && bid) return a;  // id ⊙ id = id
  if (aid) return b;
  if (bid) return a;
  return word_comp(a, b);
}

}  // namespace

SpanCell ModelEval::atomic_laxator_cell(const ProWordPtr& a, const ProWordPtr& b) const {
  SetSpan ma = eval_pro(a);
  SetSpan mb = eval_pro(b);
  SetSpan comp = span_compose(ma, mb);
  bool aid = a->kind == ProWord::Kind::id;
  bool bid = b->kind == ProWord::Kind::id;
  if (!aid && !bid)  // no collapse: the laxator is the identity
    return span_cell_id(comp);
  auto it = model_.laxators.find({atomic_key(a), atomic_key(b)});
  require(it != model_.laxators.end(), Errc::missing_table_entry,
          "no laxator entry for (" + atomic_key(a) + ", " + atomic_key(b) + ")");
  SetSpan target = eval_pro(canon_atomic_composite(a, b));
  return SpanCell{comp, target, FinFunction::identity(comp.left_foot),
                  FinFunction::identity(comp.right_foot), it->second};
}

namespace {

// A uniform product view of a word: atomic words are singleton families.
struct ProdView {
  SetSpan indexing;
  std::vector<ProWordPtr> parts;
  std::vector<ObjectWord> src_family, dst_family;
};

ProdView prod_view(const ModelEval& ev, const TheoryPresentation& th,
                   const ProWordPtr& w) {
  (void)ev;
  if (w->kind == ProWord::Kind::prod)
    return ProdView{w->indexing, w->parts, w->src_family, w->dst_family};
  require(is_atomic(w), Errc::ill_typed_word,
          "laxators are derived for atomic and product words only");
  ObjectWord src, dst;
  if (w->kind == ProWord::Kind::id) {
    src = dst = w->object;
  } else {
    for (const auto& g : th.proarrow_generators)
      if (g.name == w->name) {
        src = g.src;
        dst = g.dst;
      }
  }
  FinSet one = canonical_index_set(1);
  return ProdView{SetSpan::identity(one), {w}, {src}, {dst}};
}

}  // namespace

SpanCell ModelEval::laxator(const ProWordPtr& a, const ProWordPtr& b) const {
  if (is_atomic(a) && is_atomic(b)) return atomic_laxator_cell(a, b);
  ProdView va = prod_view(*this, model_.theory, a);
  ProdView vb = prod_view(*this, model_.theory, b);
  PullbackSets pb = pullback(va.indexing.right, vb.indexing.left);
  std::vector<ProWordPtr> comp_parts;
  for (int k = 0; k < pb.apex.size(); ++k)
    comp_parts.push_back(canon_atomic_composite(va.parts[pb.p1.table[k]],
                                                vb.parts[pb.p2.table[k]]));
  ProWordPtr target_word =
      word_prod(SetSpan(compose_fn(pb.p1, va.indexing.left),
                        compose_fn(pb.p2, vb.indexing.right)),
                va.src_family, vb.dst_family, comp_parts);
  const ThProduct& target = eval_product_cached(target_word);
  std::vector<SpanCell> proj_a, proj_b;
  if (a->kind == ProWord::Kind::prod) {
    proj_a = eval_product_cached(a).projections;
  } else {
    proj_a = {span_cell_id(eval_pro(a))};
  }
  if (b->kind == ProWord::Kind::prod) {
    proj_b = eval_product_cached(b).projections;
  } else {
    proj_b = {span_cell_id(eval_pro(b))};
  }
  SetSpan source = span_compose(eval_pro(a), eval_pro(b));
  std::vector<SpanCell> alphas;
  for (int k = 0; k < pb.apex.size(); ++k) {
    int ia = pb.p1.table[k], ib = pb.p2.table[k];
    SpanCell extc = span_cell_ext(proj_a[ia], proj_b[ib]);
    alphas.push_back(
        span_cell_vert(extc, atomic_laxator_cell(va.parts[ia], vb.parts[ib])));
  }
  return th_pair_cells(target, source, FinFunction::identity(source.left_foot),
                       FinFunction::identity(source.right_foot), alphas);
}

SpanCell ModelEval::laxator_via_product_law(const ProWordPtr& a,
                                            const ProWordPtr& b) const {
  if (is_atomic(a) && is_atomic(b)) return atomic_laxator_cell(a, b);
  ProdView va = prod_view(*this, model_.theory, a);
  ProdView vb = prod_view(*this, model_.theory, b);
  PullbackSets pb = pullback(va.indexing.right, vb.indexing.left);
  SetSpan comp_span(compose_fn(pb.p1, va.indexing.left),
                    compose_fn(pb.p2, vb.indexing.right));
  // Middle: the product of the structural composites.
  std::vector<ProWordPtr> mid_parts, canon_parts;
  for (int k = 0; k < pb.apex.size(); ++k) {
    mid_parts.push_back(
        word_comp(va.parts[pb.p1.table[k]], vb.parts[pb.p2.table[k]]));
    canon_parts.push_back(canon_atomic_composite(va.parts[pb.p1.table[k]],
                                                 vb.parts[pb.p2.table[k]]));
  }
  const ThProduct& mid = eval_product_cached(
      word_prod(comp_span, va.src_family, vb.dst_family, mid_parts));
  const ThProduct& target = eval_product_cached(
      word_prod(comp_span, va.src_family, vb.dst_family, canon_parts));
  std::vector<SpanCell> proj_a, proj_b;
  if (a->kind == ProWord::Kind::prod)
    proj_a = eval_product_cached(a).projections;
  else
    proj_a = {span_cell_id(eval_pro(a))};
  if (b->kind == ProWord::Kind::prod)
    proj_b = eval_product_cached(b).projections;
  else
    proj_b = {span_cell_id(eval_pro(b))};
  SetSpan source = span_compose(eval_pro(a), eval_pro(b));
  std::vector<SpanCell> c1_alphas;
  for (int k = 0; k < pb.apex.size(); ++k)
    c1_alphas.push_back(
        span_cell_ext(proj_a[pb.p1.table[k]], proj_b[pb.p2.table[k]]));
  SpanCell c1 = th_pair_cells(mid, source, FinFunction::identity(source.left_foot),
                              FinFunction::identity(source.right_foot), c1_alphas);
  std::vector<SpanCell> lax_alphas;
  for (int k = 0; k < pb.apex.size(); ++k)
    lax_alphas.push_back(span_cell_vert(
        mid.projections[k], atomic_laxator_cell(va.parts[pb.p1.table[k]],
                                                vb.parts[pb.p2.table[k]])));
  SpanCell pif =
      th_pair_cells(target, mid.base, FinFunction::identity(mid.base.left_foot),
                    FinFunction::identity(mid.base.right_foot), lax_alphas);
  return span_cell_vert(c1, pif);
}

long long ModelEval::laxator_product_size_estimate(const ProWordPtr& a,
                                                   const ProWordPtr& b) const {
  if (is_atomic(a) && is_atomic(b)) return 1;
  ProdView va = prod_view(*this, model_.theory, a);
  ProdView vb = prod_view(*this, model_.theory, b);
  PullbackSets pbk = pullback(va.indexing.right, vb.indexing.left);
  constexpr long long kClamp = 1LL << 40;
  long long estimate = static_cast<long long>(eval_pro(a).left_foot.size()) *
                       std::max(1, eval_pro(b).right_foot.size());
  estimate = std::max<long long>(1, estimate);
  for (int k = 0; k < pbk.apex.size() && estimate < kClamp; ++k) {
    long long ca = eval_pro(va.parts[pbk.p1.table[k]]).apex.size();
    long long cb = eval_pro(vb.parts[pbk.p2.table[k]]).apex.size();
    estimate *= std::max<long long>(1, ca * cb);
  }
  return std::min(estimate, kClamp);
}

SpanCell ModelEval::unitor(const ObjectWord& w) const {
  if (w.factors.size() == 1) {
    auto it = model_.unitors.find(w.factors[0]);
    require(it != model_.unitors.end(), Errc::missing_table_entry,
            "no unitor entry for " + w.factors[0]);
    FinSet obj = eval_object(w);
    SetSpan src = SetSpan::identity(obj);
    SetSpan dst = eval_pro(word_id(w));
    return SpanCell{src, dst, FinFunction::identity(obj), FinFunction::identity(obj),
                    it->second};
  }
  // Derived unitor at product objects: the pairing of the factor unitors.
  int k = static_cast<int>(w.factors.size());
  std::vector<ObjectWord> fam;
  std::vector<ProWordPtr> parts;
  for (const auto& f : w.factors) {
    fam.push_back(ObjectWord{{f}});
    parts.push_back(word_id(ObjectWord{{f}}));
  }
  FinSet ix = canonical_index_set(k);
  ThProduct p = eval_product(word_prod(SetSpan::identity(ix), fam, fam, parts));
  FinSet obj = eval_object(w);
  SetSpan src = SetSpan::identity(obj);
  std::vector<SpanCell> alphas;
  for (int i = 0; i < k; ++i) {
    FinFunction pi = object_projection(w, i);
    alphas.push_back(span_cell_vert(span_cell_id_arrow(pi),
                                    unitor(ObjectWord{{w.factors[i]}})));
  }
  return th_pair_cells(p, src, FinFunction::identity(obj), FinFunction::identity(obj),
                       alphas);
}

SpanCell ModelEval::eval_cell(const CellWordPtr& w) const {
  switch (w->kind) {
    case CellWord::Kind::gen: {
      const auto& g = model_.theory.cell_generator(w->name);
      auto it = model_.on_cells.find(w->name);
      require(it != model_.on_cells.end(), Errc::missing_table_entry,
              "no cell assignment for " + w->name);
      SetSpan src = eval_pro(g.src);
      SetSpan dst = eval_pro(g.dst);
      return SpanCell{src, dst, FinFunction::identity(src.left_foot),
                      FinFunction::identity(src.right_foot), it->second};
    }
    case CellWord::Kind::id_pro:
      return span_cell_id(eval_pro(w->pro));
    case CellWord::Kind::vert:
      return span_cell_vert(eval_cell(w->parts[0]), eval_cell(w->parts[1]));
    case CellWord::Kind::ext:
      return span_cell_ext(eval_cell(w->parts[0]), eval_cell(w->parts[1]));
    case CellWord::Kind::proj: {
      ThProduct p = eval_product(w->pro);
      require(w->index >= 0 && w->index < static_cast<int>(p.projections.size()),
              Errc::ill_typed_word, "projection index out of range");
      return p.projections[w->index];
    }
    case CellWord::Kind::pair: {
      ThProduct p = eval_product(w->pro);
      std::vector<SpanCell> alphas;
      for (const auto& part : w->parts) alphas.push_back(eval_cell(part));
      SetSpan n = alphas.empty() ? eval_pro(w->source) : alphas[0].top;
      return th_pair_cells(p, n, FinFunction::identity(n.left_foot),
                           FinFunction::identity(n.right_foot), alphas);
    }
    case CellWord::Kind::comp_unit:
    case CellWord::Kind::comp_counit: {
      for (const auto& f : w->src_family)
        require(f.factors.size() == 1, Errc::ill_typed_word,
                "structure companions need single-generator factors");
      ProWordPtr comp = word_companion(w->sigma, w->src_family);
      ThProduct p = eval_product(companion_as_product(*comp));
      ObjectWord src_word;
      for (const auto& f : w->src_family) src_word.factors.push_back(f.factors[0]);
      ObjectWord dst_word;
      for (int v : w->sigma.table) dst_word.factors.push_back(src_word.factors[v]);
      FinFunction pf = eval_arrow(ArrowWord{src_word, w->sigma});
      if (w->kind == CellWord::Kind::comp_unit) {
        // Unit: pairing of the source parallel product's projections,
        // reindexed along sigma.
        SetSpan n = eval_pro(word_id(src_word));
        std::vector<SpanCell> alphas;
        if (src_word.factors.size() == 1) {
          for (size_t j = 0; j < w->sigma.table.size(); ++j)
            alphas.push_back(span_cell_id(n));
        } else {
          std::vector<ObjectWord> fam;
          std::vector<ProWordPtr> parts;
          for (const auto& f : src_word.factors) {
            fam.push_back(ObjectWord{{f}});
            parts.push_back(word_id(ObjectWord{{f}}));
          }
          FinSet ixset = canonical_index_set(static_cast<int>(fam.size()));
          ThProduct tp =
              eval_product(word_prod(SetSpan::identity(ixset), fam, fam, parts));
          for (size_t j = 0; j < w->sigma.table.size(); ++j)
            alphas.push_back(tp.projections[w->sigma.table[j]]);
        }
        return th_pair_cells(p, n, FinFunction::identity(n.left_foot), pf, alphas);
      }
      // Counit: pairing of the companion's projections through the identity
      // parallel product on the reindexed family.
      if (dst_word.factors.size() == 1) {
        require(p.projections.size() == 1, Errc::ill_typed_word,
                "counit against a single reindexed factor");
        return p.projections[0];
      }
      std::vector<ObjectWord> fam;
      std::vector<ProWordPtr> parts;
      for (const auto& f : dst_word.factors) {
        fam.push_back(ObjectWord{{f}});
        parts.push_back(word_id(ObjectWord{{f}}));
      }
      FinSet ixset = canonical_index_set(static_cast<int>(fam.size()));
      ThProduct cp =
          eval_product(word_prod(SetSpan::identity(ixset), fam, fam, parts));
      return th_pair_cells(cp, p.base, pf,
                           FinFunction::identity(p.base.right_foot), p.projections);
    }
  }
  fail(Errc::ill_typed_word, "unreachable");
}

// ---------------------------------------------------------------------------
// Model checking

namespace {

void collect_pro_words(const CellWordPtr& w, std::map<std::string, ProWordPtr>& out);

void collect_from_pro(const ProWordPtr& w, std::map<std::string, ProWordPtr>& out) {
  if (!w) return;
  if (w->kind == ProWord::Kind::prod || is_atomic(w)) out.emplace(w->enc(), w);
  for (const auto& p : w->parts) collect_from_pro(p, out);
}

void collect_pro_words(const CellWordPtr& w, std::map<std::string, ProWordPtr>& out) {
  if (!w) return;
  collect_from_pro(w->pro, out);
  for (const auto& p : w->parts) collect_pro_words(p, out);
}

bool cells_equal(const SpanCell& a, const SpanCell& b) { return a == b; }

std::string cell_desc(const SpanCell& c) {
  return SpanDouble::cell(c).enc;
}

}  // namespace

TheoryCheckReport check_model(const ModelData& model) {
  TheoryCheckReport rep;
  ModelEval ev(model);
  auto violation = [&](const std::string& axiom, const std::string& instance,
                       const SpanCell& lhs, const SpanCell& rhs) {
    rep.violations.push_back({axiom, instance, cell_desc(lhs), cell_desc(rhs)});
  };
  auto check_eq = [&](const std::string& axiom, const std::string& instance,
                      const SpanCell& lhs, const SpanCell& rhs) {
    ++rep.checks;
    if (!cells_equal(lhs, rhs)) violation(axiom, instance, lhs, rhs);
  };

  // (a) lax functor axioms on the atomic level, per object generator.
  for (const auto& x : model.theory.object_generators) {
    ProWordPtr idx = word_id(ObjectWord{{x}});
    SetSpan mid = ev.eval_pro(idx);
    Pro midh = SpanDouble::pro(mid);
    Cell lax = SpanDouble::cell(ev.laxator(idx, idx));
    Cell unit = SpanDouble::cell(ev.unitor(ObjectWord{{x}}));
    Cell one = SD.id_cell_on_pro(midh);
    // Associativity coherence.
    Cell lhs = SD.compose_cells_vert(SD.compose_cells_ext(lax, one), lax);
    Cell rhs = SD.compose_cells_vert(
        SD.associator(midh, midh, midh),
        SD.compose_cells_vert(SD.compose_cells_ext(one, lax), lax));
    check_eq("laxator-associativity", "id:" + x, SpanDouble::cell_of(lhs),
             SpanDouble::cell_of(rhs));
    // Unit coherence on both sides.
    Cell ul = SD.compose_cells_vert(SD.compose_cells_ext(unit, one), lax);
    check_eq("unit-left", "id:" + x, SpanDouble::cell_of(ul),
             SpanDouble::cell_of(SD.left_unitor(midh)));
    Cell ur = SD.compose_cells_vert(SD.compose_cells_ext(one, unit), lax);
    check_eq("unit-right", "id:" + x, SpanDouble::cell_of(ur),
             SpanDouble::cell_of(SD.right_unitor(midh)));
  }

  // (a) naturality of laxators against the generator cells, paired with
  // identity cells on atomic identities.
  for (const auto& g : model.theory.cell_generators) {
    SpanCell mg = ev.eval_cell(cell_gen(g.name));
    for (const auto& x : model.theory.object_generators) {
      ProWordPtr idx = word_id(ObjectWord{{x}});
      SetSpan mid = ev.eval_pro(idx);
      if (mg.top.right_foot == mid.left_foot) {
        Cell one = SD.id_cell_on_pro(SpanDouble::pro(mid));
        Cell path1 = SD.compose_cells_vert(SpanDouble::cell(ev.laxator(g.src, idx)),
                                           SpanDouble::cell(mg));
        Cell path2 = SD.compose_cells_vert(
            SD.compose_cells_ext(SpanDouble::cell(mg), one),
            SpanDouble::cell(ev.laxator(g.dst, idx)));
        check_eq("laxator-naturality", g.name + " x 1(id:" + x + ")",
                 SpanDouble::cell_of(path1), SpanDouble::cell_of(path2));
      }
      if (mg.top.left_foot == mid.right_foot) {
        Cell one = SD.id_cell_on_pro(SpanDouble::pro(mid));
        Cell path1 = SD.compose_cells_vert(SpanDouble::cell(ev.laxator(idx, g.src)),
                                           SpanDouble::cell(mg));
        Cell path2 = SD.compose_cells_vert(
            SD.compose_cells_ext(one, SpanDouble::cell(mg)),
            SpanDouble::cell(ev.laxator(idx, g.dst)));
        check_eq("laxator-naturality", "1(id:" + x + ") x " + g.name,
                 SpanDouble::cell_of(path1), SpanDouble::cell_of(path2));
      }
    }
  }

  // Vocabulary of product words appearing in the presentation.
  std::map<std::string, ProWordPtr> vocab;
  for (const auto& g : model.theory.cell_generators) {
    collect_from_pro(g.src, vocab);
    collect_from_pro(g.dst, vocab);
  }
  for (const auto& eq : model.theory.equations) {
    collect_pro_words(eq.lhs, vocab);
    collect_pro_words(eq.rhs, vocab);
  }

  // (b) product preservation: comparisons at product words are isomorphisms,
  // and supplied overrides at product words must match the derived laxators.
  for (const auto& [enc, w] : vocab) {
    if (w->kind != ProWord::Kind::prod) continue;
    ModelEval::ThProduct p = ev.eval_product(w);
    SpanCell phi = ev.th_pair_cells(p, p.base, FinFunction::identity(p.base.left_foot),
                                    FinFunction::identity(p.base.right_foot),
                                    p.projections);
    ++rep.checks;
    if (!is_bijection(phi.apex_map))
      rep.violations.push_back({"product-preservation", "phi at " + enc,
                                cell_desc(phi), cell_desc(phi)});
  }
  for (const auto& ov : model.laxator_overrides) {
    SpanCell derived = ev.laxator(ov.lhs, ov.rhs);
    ++rep.checks;
    if (ov.table != derived.apex_map) {
      SpanCell supplied = derived;
      supplied.apex_map = ov.table;
      rep.violations.push_back({"product-preservation",
                                "laxator override at (" + ov.lhs->enc() + ", " +
                                    ov.rhs->enc() + ")",
                                cell_desc(supplied), cell_desc(derived)});
    }
  }

  // (c) the theory's equations on evaluated cells.
  for (const auto& eq : model.theory.equations) {
    SpanCell lhs = ev.eval_cell(eq.lhs);
    SpanCell rhs = ev.eval_cell(eq.rhs);
    check_eq("equation:" + eq.family + "." + eq.name, eq.name, lhs, rhs);
  }

  // (d) laxator-product law: the derived laxators at product-word pairs agree
  // with the independent pasting through the composition comparison. Pairs
  // whose middle limit would exceed the desk-scale cap are skipped.
  constexpr long long kLimitCap = 300000;
  for (const auto& [enc1, w1] : vocab)
    for (const auto& [enc2, w2] : vocab) {
      if (is_atomic(w1) && is_atomic(w2)) continue;
      SetSpan m1 = ev.eval_pro(w1);
      SetSpan m2 = ev.eval_pro(w2);
      if (!(m1.right_foot == m2.left_foot)) continue;
      if (ev.laxator_product_size_estimate(w1, w2) > kLimitCap) continue;
      SpanCell direct = ev.laxator(w1, w2);
      SpanCell via = ev.laxator_via_product_law(w1, w2);
      check_eq("laxator-product", "(" + enc1 + ", " + enc2 + ")", direct, via);
    }

  return rep;
}

// ---------------------------------------------------------------------------
// Transformations

TheoryCheckReport check_transformation(const TransformationData& t) {
  TheoryCheckReport rep;
  ModelEval mf(t.source);
  ModelEval mg(t.target);
  auto check_eq = [&](const std::string& axiom, const std::string& instance,
                      const SpanCell& lhs, const SpanCell& rhs) {
    ++rep.checks;
    if (!(lhs == rhs))
      rep.violations.push_back({axiom, instance, cell_desc(lhs), cell_desc(rhs)});
  };

  // The component cell of the transformation at any atomic or product word:
  // supplied on atomics, derived at products by pairing.
  std::function<SpanCell(const ProWordPtr&)> alpha_at = [&](const ProWordPtr& w)
      -> SpanCell {
    if (is_atomic(w)) {
      auto it = t.naturality.find(atomic_key(w));
      require(it != t.naturality.end(), Errc::missing_table_entry,
              "no naturality cell for " + atomic_key(w));
      SetSpan src = mf.eval_pro(w);
      SetSpan dst = mg.eval_pro(w);
      // Object components at the feet.
      ObjectWord sw, dw;
      if (w->kind == ProWord::Kind::id) sw = dw = w->object;
      else
        for (const auto& g : t.source.theory.proarrow_generators)
          if (g.name == w->name) {
            sw = g.src;
            dw = g.dst;
          }
      FinFunction lcomp = t.components.at(sw.factors[0]);
      FinFunction rcomp = t.components.at(dw.factors[0]);
      return SpanCell{src, dst, lcomp, rcomp, it->second};
    }
    require(w->kind == ProWord::Kind::prod, Errc::ill_typed_word,
            "transformation components exist at atomic and product words");
    ModelEval::ThProduct pf = mf.eval_product(w);
    ModelEval::ThProduct pg = mg.eval_product(w);
    std::vector<SpanCell> alphas;
    for (size_t a = 0; a < w->parts.size(); ++a) {
      Cell glued = SD.compose_cells_vert(SpanDouble::cell(pf.projections[a]),
                                         SpanDouble::cell(alpha_at(w->parts[a])));
      alphas.push_back(SpanDouble::cell_of(glued));
    }
    // Feet components: for local products the object component itself; for
    // parallel products the product of components.
    auto foot_comp = [&](const std::vector<ObjectWord>& fams,
                         const FinSet& src_foot, const FinSet& dst_foot) {
      if (fams.size() == 1 && fams[0].factors.size() == 1)
        return t.components.at(fams[0].factors[0]);
      std::vector<FinFunction> legs;
      std::vector<FinSet> dst_sets;
      for (size_t i = 0; i < fams.size(); ++i) {
        FinFunction pi = mf.object_projection(
            [&] {
              ObjectWord ww;
              for (const auto& f : fams) ww.factors.push_back(f.factors[0]);
              return ww;
            }(),
            static_cast<int>(i));
        legs.push_back(compose_fn(pi, t.components.at(fams[i].factors[0])));
        dst_sets.push_back(legs.back().cod);
      }
      (void)src_foot;
      (void)dst_foot;
      return pair_fns(product_sets(dst_sets), legs.empty() ? src_foot : legs[0].dom,
                      legs);
    };
    FinFunction lc = foot_comp(w->src_family, pf.base.left_foot, pg.base.left_foot);
    FinFunction rc = foot_comp(w->dst_family, pf.base.right_foot, pg.base.right_foot);
    return mg.th_pair_cells(pg, pf.base, lc, rc, alphas);
  };

  // Strict naturality with projections (the product-word components paste
  // with projections on both sides identically).
  std::map<std::string, ProWordPtr> vocab;
  for (const auto& g : t.source.theory.cell_generators) {
    collect_from_pro(g.src, vocab);
    collect_from_pro(g.dst, vocab);
  }
  for (const auto& [enc, w] : vocab) {
    if (w->kind != ProWord::Kind::prod) continue;
    ModelEval::ThProduct pf = mf.eval_product(w);
    ModelEval::ThProduct pg = mg.eval_product(w);
    SpanCell aw = alpha_at(w);
    for (size_t a = 0; a < w->parts.size(); ++a) {
      Cell lhs = SD.compose_cells_vert(SpanDouble::cell(aw),
                                       SpanDouble::cell(pg.projections[a]));
      Cell rhs = SD.compose_cells_vert(SpanDouble::cell(pf.projections[a]),
                                       SpanDouble::cell(alpha_at(w->parts[a])));
      check_eq("naturality-comparison-product", enc + "#" + std::to_string(a),
               SpanDouble::cell_of(lhs), SpanDouble::cell_of(rhs));
    }
  }

  // Unit axiom per object generator.
  for (const auto& x : t.source.theory.object_generators) {
    ProWordPtr idx = word_id(ObjectWord{{x}});
    SpanCell fu = mf.unitor(ObjectWord{{x}});
    SpanCell gu = mg.unitor(ObjectWord{{x}});
    const FinFunction& ax = t.components.at(x);
    Cell lhs = SD.compose_cells_vert(SpanDouble::cell(fu),
                                     SpanDouble::cell(alpha_at(idx)));
    Cell rhs = SD.compose_cells_vert(SD.id_cell_on_arrow(SpanDouble::arr(ax)),
                                     SpanDouble::cell(gu));
    check_eq("transformation-unit", "id:" + x, SpanDouble::cell_of(lhs),
             SpanDouble::cell_of(rhs));
    // Laxator axiom at the composable atomic pair.
    SpanCell aid = alpha_at(idx);
    Cell lax_lhs = SD.compose_cells_vert(
        SD.compose_cells_ext(SpanDouble::cell(aid), SpanDouble::cell(aid)),
        SpanDouble::cell(mg.laxator(idx, idx)));
    Cell lax_rhs = SD.compose_cells_vert(SpanDouble::cell(mf.laxator(idx, idx)),
                                         SpanDouble::cell(aid));
    check_eq("transformation-laxator", "(id:" + x + ", id:" + x + ")",
             SpanDouble::cell_of(lax_lhs), SpanDouble::cell_of(lax_rhs));
  }

  // Naturality against generator cells.
  for (const auto& g : t.source.theory.cell_generators) {
    SpanCell mfc = mf.eval_cell(cell_gen(g.name));
    SpanCell mgc = mg.eval_cell(cell_gen(g.name));
    Cell lhs = SD.compose_cells_vert(SpanDouble::cell(mfc),
                                     SpanDouble::cell(alpha_at(g.dst)));
    Cell rhs = SD.compose_cells_vert(SpanDouble::cell(alpha_at(g.src)),
                                     SpanDouble::cell(mgc));
    check_eq("transformation-naturality", g.name, SpanDouble::cell_of(lhs),
             SpanDouble::cell_of(rhs));
  }

  return rep;
}

TransformationData identity_transformation(const ModelData& m) {
  TransformationData t{m, m, {}, {}};
  for (const auto& [x, set] : m.on_objects)
    t.components[x] = FinFunction::identity(set);
  for (const auto& [key, span] : m.on_atomic)
    t.naturality[key] = FinFunction::identity(span.apex);
  return t;
}

TransformationData compose_transformations(const TransformationData& s,
                                           const TransformationData& t) {
  TransformationData out{s.source, t.target, {}, {}};
  for (const auto& [x, f] : s.components)
    out.components[x] = compose_fn(f, t.components.at(x));
  for (const auto& [k, f] : s.naturality)
    out.naturality[k] = compose_fn(f, t.naturality.at(k));
  return out;
}

// ---------------------------------------------------------------------------
// Categories enriched in commutative monoids

int CMonCategory::add_at(int a, int b, int f, int g) const {
  int n = objects.size();
  const auto& tab = add[a * n + b];
  int h = hom(a, b).size();
  return tab[f * h + g];
}

int CMonCategory::compose_at(int a, int b, int c, int f, int g) const {
  int n = objects.size();
  const auto& tab = compose[(a * n + b) * n + c];
  int hbc = hom(b, c).size();
  return tab[f * hbc + g];
}

std::string CMonCategory::signature() const {
  std::string s = "cmon{" + std::to_string(objects.size());
  int n = objects.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      s += ";h" + std::to_string(hom(a, b).size());
      s += ";z" + std::to_string(zero[a * n + b]);
      s += ";a[";
      for (int v : add[a * n + b]) s += std::to_string(v) + ",";
      s += "]";
    }
  for (int a = 0; a < n; ++a) s += ";e" + std::to_string(identity[a]);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        s += ";c[";
        for (int v : compose[(a * n + b) * n + c]) s += std::to_string(v) + ",";
        s += "]";
      }
  return s + "}";
}

std::optional<std::string> validate_cmon(const CMonCategory& cat) {
  int n = cat.objects.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int h = cat.hom(a, b).size();
      if (h == 0) return "hom(" + std::to_string(a) + "," + std::to_string(b) +
                         ") is empty; a commutative monoid needs a zero";
      int z = cat.zero[a * n + b];
      for (int f = 0; f < h; ++f) {
        if (cat.add_at(a, b, z, f) != f || cat.add_at(a, b, f, z) != f)
          return "zero law fails in hom(" + std::to_string(a) + "," +
                 std::to_string(b) + ")";
        for (int g = 0; g < h; ++g) {
          if (cat.add_at(a, b, f, g) != cat.add_at(a, b, g, f))
            return "commutativity fails in hom(" + std::to_string(a) + "," +
                   std::to_string(b) + ")";
          for (int k = 0; k < h; ++k)
            if (cat.add_at(a, b, cat.add_at(a, b, f, g), k) !=
                cat.add_at(a, b, f, cat.add_at(a, b, g, k)))
              return "additive associativity fails in hom(" + std::to_string(a) +
                     "," + std::to_string(b) + ")";
        }
      }
    }
  // Category laws.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int f = 0; f < cat.hom(a, b).size(); ++f) {
        if (cat.compose_at(a, a, b, cat.identity[a], f) != f)
          return "left identity law fails";
        if (cat.compose_at(a, b, b, f, cat.identity[b]) != f)
          return "right identity law fails";
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int f = 0; f < cat.hom(a, b).size(); ++f)
            for (int g = 0; g < cat.hom(b, c).size(); ++g)
              for (int k = 0; k < cat.hom(c, d).size(); ++k)
                if (cat.compose_at(a, c, d, cat.compose_at(a, b, c, f, g), k) !=
                    cat.compose_at(a, b, d, f, cat.compose_at(b, c, d, g, k)))
                  return "composition associativity fails";
  // Biadditivity and zero absorption.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        for (int f = 0; f < cat.hom(a, b).size(); ++f) {
          if (cat.compose_at(a, b, c, f, cat.zero[b * n + c]) != cat.zero[a * n + c])
            return "NotBiadditive: zero absorption fails at (" + std::to_string(a) +
                   "," + std::to_string(b) + "," + std::to_string(c) +
                   ", f=" + std::to_string(f) + ")";
          for (int g = 0; g < cat.hom(b, c).size(); ++g)
            for (int g2 = 0; g2 < cat.hom(b, c).size(); ++g2)
              if (cat.compose_at(a, b, c, f, cat.add_at(b, c, g, g2)) !=
                  cat.add_at(a, c, cat.compose_at(a, b, c, f, g),
                             cat.compose_at(a, b, c, f, g2)))
                return "NotBiadditive: right distributivity fails at (" +
                       std::to_string(a) + "," + std::to_string(b) + "," +
                       std::to_string(c) + ", f=" + std::to_string(f) +
                       ", g=" + std::to_string(g) + ", g'=" + std::to_string(g2) + ")";
        }
        for (int g = 0; g < cat.hom(b, c).size(); ++g) {
          if (cat.compose_at(a, b, c, cat.zero[a * n + b], g) != cat.zero[a * n + c])
            return "NotBiadditive: zero absorption fails at (" + std::to_string(a) +
                   "," + std::to_string(b) + "," + std::to_string(c) +
                   ", g=" + std::to_string(g) + ")";
          for (int f = 0; f < cat.hom(a, b).size(); ++f)
            for (int f2 = 0; f2 < cat.hom(a, b).size(); ++f2)
              if (cat.compose_at(a, b, c, cat.add_at(a, b, f, f2), g) !=
                  cat.add_at(a, c, cat.compose_at(a, b, c, f, g),
                             cat.compose_at(a, b, c, f2, g)))
                return "NotBiadditive: left distributivity fails at (" +
                       std::to_string(a) + "," + std::to_string(b) + "," +
                       std::to_string(c) + ", f=" + std::to_string(f) +
                       ", f'=" + std::to_string(f2) + ", g=" + std::to_string(g) + ")";
        }
      }
  return {};
}

ModelData cmon_to_model(const CMonCategory& cat) {
  if (auto diag = validate_cmon(cat)) fail(Errc::not_biadditive, *diag);
  int n = cat.objects.size();
  ModelData m;
  m.theory = builtin_lcmon_theory();
  m.on_objects["x"] = cat.objects;
  CoproductSets mor = coproduct_sets(cat.homs);
  // Source and target of each morphism by its hom block.
  std::vector<int> srct, tgtt;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int f = 0; f < cat.hom(a, b).size(); ++f) {
        srct.push_back(a);
        tgtt.push_back(b);
      }
  SetSpan id_span(FinFunction(mor.sum, cat.objects, srct),
                  FinFunction(mor.sum, cat.objects, tgtt));
  m.on_atomic["id:x"] = id_span;
  std::vector<int> unit_t(n);
  for (int a = 0; a < n; ++a)
    unit_t[a] = mor.injections[a * n + a].table[cat.identity[a]];
  m.unitors["x"] = FinFunction(cat.objects, mor.sum, unit_t);
  // Composition on the composable-pairs pullback.
  PullbackSets pairs = pullback(id_span.right, id_span.left);
  std::vector<int> comp_t(pairs.apex.size());
  for (int k = 0; k < pairs.apex.size(); ++k) {
    int fpos = pairs.p1.table[k];
    int gpos = pairs.p2.table[k];
    int a = srct[fpos], b = tgtt[fpos], c = tgtt[gpos];
    // positions within their hom blocks
    int f = fpos - mor.injections[a * n + b].table[0];
    int g = gpos - mor.injections[b * n + c].table[0];
    comp_t[k] =
        mor.injections[a * n + c].table[cat.compose_at(a, b, c, f, g)];
  }
  m.laxators[{"id:x", "id:x"}] = FinFunction(pairs.apex, mor.sum, comp_t);
  // mu and eta act on the evaluated local products.
  ModelEval ev(m);
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  ModelEval::ThProduct wedge = ev.eval_product(word_local_prod(x, x, {idx, idx}));
  std::vector<int> mu_t(wedge.base.apex.size());
  for (int k = 0; k < wedge.base.apex.size(); ++k) {
    int a = wedge.lim.legs[0].table[k];
    int fpos = wedge.lim.legs[1].table[k];
    int gpos = wedge.lim.legs[2].table[k];
    int b = wedge.lim.legs[3].table[k];
    int f = fpos - mor.injections[a * n + b].table[0];
    int g = gpos - mor.injections[a * n + b].table[0];
    mu_t[k] = mor.injections[a * n + b].table[cat.add_at(a, b, f, g)];
  }
  m.on_cells["mu"] = FinFunction(wedge.base.apex, mor.sum, mu_t);
  ModelEval::ThProduct top = ev.eval_product(word_local_prod(x, x, {}));
  std::vector<int> eta_t(top.base.apex.size());
  for (int k = 0; k < top.base.apex.size(); ++k) {
    int a = top.lim.legs[0].table[k];
    int b = top.lim.legs[1].table[k];
    eta_t[k] = mor.injections[a * n + b].table[cat.zero[a * n + b]];
  }
  m.on_cells["eta"] = FinFunction(top.base.apex, mor.sum, eta_t);
  return m;
}

CMonCategory model_to_cmon(const ModelData& m) {
  ModelEval ev(m);
  CMonCategory cat;
  cat.objects = m.on_objects.at("x");
  int n = cat.objects.size();
  const SetSpan& id_span = m.on_atomic.at("id:x");
  // Fibers of the identity proarrow, in apex order.
  std::vector<std::vector<int>> fiber(n * n);  // apex positions per hom
  std::vector<int> block_of(id_span.apex.size()), pos_in_block(id_span.apex.size());
  for (int s = 0; s < id_span.apex.size(); ++s) {
    int a = id_span.left.table[s];
    int b = id_span.right.table[s];
    block_of[s] = a * n + b;
    pos_in_block[s] = static_cast<int>(fiber[a * n + b].size());
    fiber[a * n + b].push_back(s);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<std::string> elems;
      for (int s : fiber[a * n + b]) elems.push_back(id_span.apex.elements()[s]);
      cat.homs.push_back(FinSet("hom(" + escape_label(cat.objects.elements()[a]) + "," +
                                    escape_label(cat.objects.elements()[b]) + ")",
                                elems));
    }
  // Identities from the unitor.
  const FinFunction& unit = m.unitors.at("x");
  for (int a = 0; a < n; ++a) {
    int s = unit.table[a];
    require(block_of[s] == a * n + a, Errc::schema_error,
            "unitor does not pick an endomorphism");
    cat.identity.push_back(pos_in_block[s]);
  }
  // Addition and zero from mu and eta.
  ObjectWord x{{"x"}};
  ProWordPtr idx = word_id(x);
  ModelEval::ThProduct wedge = ev.eval_product(word_local_prod(x, x, {idx, idx}));
  const FinFunction& mu = m.on_cells.at("mu");
  cat.add.assign(n * n, {});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      cat.add[a * n + b].assign(fiber[a * n + b].size() * fiber[a * n + b].size(), 0);
  for (int k = 0; k < wedge.base.apex.size(); ++k) {
    int fpos = wedge.lim.legs[1].table[k];
    int gpos = wedge.lim.legs[2].table[k];
    int blk = block_of[fpos];
    int h = static_cast<int>(fiber[blk].size());
    int out = mu.table[k];
    require(block_of[out] == blk, Errc::schema_error, "mu leaves its hom");
    cat.add[blk][pos_in_block[fpos] * h + pos_in_block[gpos]] = pos_in_block[out];
  }
  ModelEval::ThProduct top = ev.eval_product(word_local_prod(x, x, {}));
  const FinFunction& eta = m.on_cells.at("eta");
  cat.zero.assign(n * n, 0);
  for (int k = 0; k < top.base.apex.size(); ++k) {
    int a = top.lim.legs[0].table[k];
    int b = top.lim.legs[1].table[k];
    int out = eta.table[k];
    require(block_of[out] == a * n + b, Errc::schema_error, "eta leaves its hom");
    cat.zero[a * n + b] = pos_in_block[out];
  }
  // Composition from the laxator.
  const FinFunction& lax = m.laxators.at({"id:x", "id:x"});
  PullbackSets pairs = pullback(id_span.right, id_span.left);
  cat.compose.assign(n * n * n, {});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        cat.compose[(a * n + b) * n + c].assign(
            fiber[a * n + b].size() * fiber[b * n + c].size(), 0);
  for (int k = 0; k < pairs.apex.size(); ++k) {
    int fpos = pairs.p1.table[k];
    int gpos = pairs.p2.table[k];
    int a = id_span.left.table[fpos];
    int b = id_span.right.table[fpos];
    int c = id_span.right.table[gpos];
    int out = lax.table[k];
    require(block_of[out] == a * n + c, Errc::schema_error,
            "composition leaves its hom");
    int hbc = static_cast<int>(fiber[b * n + c].size());
    cat.compose[(a * n + b) * n + c][pos_in_block[fpos] * hbc + pos_in_block[gpos]] =
        pos_in_block[out];
  }
  return cat;
}

std::string lcmon_model_signature(const ModelData& m) {
  return model_to_cmon(m).signature();
}

}  // namespace dcat
