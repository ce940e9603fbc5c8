#include "dcat/finset.hpp"

#include <algorithm>
#include <set>

namespace dcat {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::cod_dom_mismatch: return "CodDomMismatch";
    case Errc::cod_mismatch: return "CodMismatch";
    case Errc::frame_mismatch: return "FrameMismatch";
    case Errc::endpoint_mismatch: return "EndpointMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::assignment_mismatch: return "AssignmentMismatch";
    case Errc::missing_base_companion: return "MissingBaseCompanion";
    case Errc::missing_restriction: return "MissingRestriction";
    case Errc::missing_chosen_products: return "MissingChosenProducts";
    case Errc::not_composable: return "NotComposable";
    case Errc::not_biadditive: return "NotBiadditive";
    case Errc::ill_typed_word: return "IllTypedWord";
    case Errc::missing_table_entry: return "MissingTableEntry";
    case Errc::reference_error: return "ReferenceError";
    case Errc::schema_error: return "SchemaError";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& msg)
    : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

std::string escape_label(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == ',' || c == '(' || c == ')' || c == '[' || c == ']')
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string join_escaped(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(',');
    out += parts[i];
  }
  return out;
}

FinSet::FinSet() : FinSet("", {}) {}

FinSet::FinSet(std::string name_, std::vector<std::string> elements_) {
  auto data = std::make_shared<Data>();
  data->name = std::move(name_);
  data->elements = std::move(elements_);
  for (size_t i = 0; i < data->elements.size(); ++i) {
    bool fresh =
        data->index.emplace(data->elements[i], static_cast<int>(i)).second;
    require(fresh, Errc::invalid_argument,
            "duplicate element label '" + data->elements[i] + "' in set " +
                data->name);
  }
  data_ = std::move(data);
}

int FinSet::index_of(const std::string& label) const {
  auto it = data_->index.find(label);
  return it == data_->index.end() ? -1 : it->second;
}

std::string FinSet::enc() const {
  std::vector<std::string> parts;
  parts.reserve(elements().size());
  for (const auto& e : elements()) parts.push_back(escape_label(e));
  return escape_label(name()) + "[" + join_escaped(parts) + "]";
}

FinFunction::FinFunction(FinSet dom_, FinSet cod_, std::vector<int> table_)
    : dom(std::move(dom_)), cod(std::move(cod_)), table(std::move(table_)) {
  require(table.size() == dom.elements().size(), Errc::invalid_argument,
          "function table not total on " + dom.name());
  for (int v : table)
    require(v >= 0 && v < cod.size(), Errc::invalid_argument,
            "function value out of range into " + cod.name());
}

FinFunction FinFunction::identity(const FinSet& s) {
  std::vector<int> t(s.elements().size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = static_cast<int>(i);
  return FinFunction(s, s, std::move(t));
}

FinFunction FinFunction::from_labels(const FinSet& dom, const FinSet& cod,
                                     const std::map<std::string, std::string>& m) {
  std::vector<int> t;
  t.reserve(dom.elements().size());
  for (const auto& e : dom.elements()) {
    auto it = m.find(e);
    require(it != m.end(), Errc::invalid_argument,
            "table missing entry for '" + e + "'");
    int j = cod.index_of(it->second);
    require(j >= 0, Errc::invalid_argument,
            "table value '" + it->second + "' not in " + cod.name());
    t.push_back(j);
  }
  return FinFunction(dom, cod, std::move(t));
}

const std::string& FinFunction::apply_label(const std::string& label) const {
  int i = dom.index_of(label);
  require(i >= 0, Errc::invalid_argument, "'" + label + "' not in " + dom.name());
  return cod.elements()[table[i]];
}

std::string FinFunction::enc() const {
  std::vector<std::string> vals;
  vals.reserve(table.size());
  for (int v : table) vals.push_back(std::to_string(v));
  return "fn{" + dom.enc() + "->" + cod.enc() + ";" + join_escaped(vals) + "}";
}

FinFunction compose_fn(const FinFunction& f, const FinFunction& g) {
  require(f.cod == g.dom, Errc::cod_dom_mismatch,
          "compose_fn: cod of first is " + f.cod.name() + ", dom of second is " + g.dom.name());
  std::vector<int> t;
  t.reserve(f.table.size());
  for (int v : f.table) t.push_back(g.table[v]);
  return FinFunction(f.dom, g.cod, std::move(t));
}

bool is_bijection(const FinFunction& f) {
  if (f.dom.size() != f.cod.size()) return false;
  std::vector<bool> hit(f.cod.size(), false);
  for (int v : f.table) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

FinFunction invert_bijection(const FinFunction& f) {
  require(is_bijection(f), Errc::invalid_argument, "invert_bijection: not a bijection");
  std::vector<int> t(f.cod.size());
  for (size_t i = 0; i < f.table.size(); ++i) t[f.table[i]] = static_cast<int>(i);
  return FinFunction(f.cod, f.dom, std::move(t));
}

SetSpan::SetSpan(FinFunction left_, FinFunction right_)
    : left_foot(left_.cod), apex(left_.dom), right_foot(right_.cod),
      left(std::move(left_)), right(std::move(right_)) {
  require(left.dom == right.dom, Errc::invalid_argument,
          "span legs must share their domain");
}

SetSpan SetSpan::identity(const FinSet& s) {
  return SetSpan(FinFunction::identity(s), FinFunction::identity(s));
}

std::string SetSpan::enc() const {
  return "span{" + left.enc() + ";" + right.enc() + "}";
}

SpanMorphism::SpanMorphism(SetSpan src_, SetSpan dst_, FinFunction on_left_,
                           FinFunction on_apex_, FinFunction on_right_)
    : src(std::move(src_)), dst(std::move(dst_)), on_left(std::move(on_left_)),
      on_apex(std::move(on_apex_)), on_right(std::move(on_right_)) {
  require(on_left.dom == src.left_foot && on_left.cod == dst.left_foot &&
              on_apex.dom == src.apex && on_apex.cod == dst.apex &&
              on_right.dom == src.right_foot && on_right.cod == dst.right_foot,
          Errc::frame_mismatch, "span morphism endpoints");
  require(compose_fn(on_apex, dst.left) == compose_fn(src.left, on_left),
          Errc::frame_mismatch, "span morphism: left square does not commute");
  require(compose_fn(on_apex, dst.right) == compose_fn(src.right, on_right),
          Errc::frame_mismatch, "span morphism: right square does not commute");
}

SpanMorphism SpanMorphism::identity(const SetSpan& s) {
  return SpanMorphism(s, s, FinFunction::identity(s.left_foot),
                      FinFunction::identity(s.apex),
                      FinFunction::identity(s.right_foot));
}

std::string SpanMorphism::enc() const {
  return "spanmor{" + on_left.enc() + ";" + on_apex.enc() + ";" + on_right.enc() + "}";
}

int PullbackSets::index_of_pair(int a_index, int b_index) const {
  auto it = lookup_.find({a_index, b_index});
  return it == lookup_.end() ? -1 : it->second;
}

PullbackSets pullback(const FinFunction& f, const FinFunction& g) {
  require(f.cod == g.cod, Errc::cod_mismatch, "pullback: codomains differ");
  PullbackSets out;
  std::vector<std::string> elems;
  std::vector<int> t1, t2;
  for (size_t i = 0; i < f.table.size(); ++i) {
    for (size_t j = 0; j < g.table.size(); ++j) {
      if (f.table[i] != g.table[j]) continue;
      out.lookup_[{static_cast<int>(i), static_cast<int>(j)}] =
          static_cast<int>(elems.size());
      elems.push_back(pair_label(f.dom.elements()[i], g.dom.elements()[j]));
      t1.push_back(static_cast<int>(i));
      t2.push_back(static_cast<int>(j));
    }
  }
  out.apex = FinSet("pb(" + escape_label(f.dom.name()) + "," + escape_label(g.dom.name()) + ")",
                    std::move(elems));
  out.p1 = FinFunction(out.apex, f.dom, std::move(t1));
  out.p2 = FinFunction(out.apex, g.dom, std::move(t2));
  return out;
}

CoproductSets coproduct_sets(const std::vector<FinSet>& family) {
  std::vector<std::string> names, elems;
  for (const auto& s : family) names.push_back(escape_label(s.name()));
  for (size_t i = 0; i < family.size(); ++i)
    for (const auto& e : family[i].elements())
      elems.push_back("inj(" + std::to_string(i) + "," + escape_label(e) + ")");
  CoproductSets out;
  out.sum = FinSet("sum(" + join_escaped(names) + ")", std::move(elems));
  int offset = 0;
  for (const auto& s : family) {
    std::vector<int> t(s.elements().size());
    for (size_t k = 0; k < t.size(); ++k) t[k] = offset + static_cast<int>(k);
    out.injections.emplace_back(s, out.sum, std::move(t));
    offset += s.size();
  }
  return out;
}

int ProductSets::index_of_tuple(const std::vector<int>& comps) const {
  require(comps.size() == strides_.size(), Errc::invalid_argument,
          "tuple arity mismatch");
  int idx = 0;
  for (size_t k = 0; k < comps.size(); ++k) idx += comps[k] * strides_[k];
  return idx;
}

ProductSets product_sets(const std::vector<FinSet>& family) {
  std::vector<std::string> names;
  for (const auto& s : family) names.push_back(escape_label(s.name()));
  ProductSets out;
  out.strides_.assign(family.size(), 0);
  long long total = 1;
  for (size_t k = family.size(); k-- > 0;) {
    out.strides_[k] = static_cast<int>(total);
    total *= family[k].size();
  }
  require(total <= 2'000'000, Errc::invalid_argument, "product too large");
  std::vector<std::string> elems;
  std::vector<std::vector<int>> proj_tables(family.size());
  std::vector<int> counter(family.size(), 0);
  for (long long n = 0; n < total; ++n) {
    std::vector<std::string> comps;
    comps.reserve(family.size());
    for (size_t k = 0; k < family.size(); ++k) {
      comps.push_back(escape_label(family[k].elements()[counter[k]]));
      proj_tables[k].push_back(counter[k]);
    }
    elems.push_back("tup(" + join_escaped(comps) + ")");
    for (size_t k = family.size(); k-- > 0;) {
      if (++counter[k] < family[k].size()) break;
      counter[k] = 0;
    }
  }
  out.prod = FinSet("prod(" + join_escaped(names) + ")", std::move(elems));
  for (size_t k = 0; k < family.size(); ++k)
    out.projections.emplace_back(out.prod, family[k], std::move(proj_tables[k]));
  return out;
}

FinFunction copair_fns(const CoproductSets& cp, const std::vector<FinFunction>& fns) {
  require(fns.size() == cp.injections.size(), Errc::frame_mismatch,
          "copair: wrong number of functions");
  for (size_t i = 0; i < fns.size(); ++i) {
    require(fns[i].dom == cp.injections[i].dom, Errc::frame_mismatch,
            "copair: domain is not the expected summand");
    require(fns.empty() || fns[i].cod == fns[0].cod, Errc::frame_mismatch,
            "copair: codomains differ");
  }
  FinSet cod = fns.empty() ? FinSet("prod()", {"tup()"}) : fns[0].cod;
  std::vector<int> t;
  t.reserve(cp.sum.elements().size());
  for (const auto& f : fns)
    for (int v : f.table) t.push_back(v);
  if (fns.empty()) {
    require(cp.sum.size() == 0, Errc::frame_mismatch, "copair: nothing to map");
    return FinFunction(cp.sum, product_sets({}).prod, {});
  }
  return FinFunction(cp.sum, cod, std::move(t));
}

FinFunction copair_fns(const std::vector<FinFunction>& fns) {
  std::vector<FinSet> doms;
  for (const auto& f : fns) doms.push_back(f.dom);
  return copair_fns(coproduct_sets(doms), fns);
}

FinFunction pair_fns(const ProductSets& pr, const FinSet& dom,
                     const std::vector<FinFunction>& fns) {
  require(fns.size() == pr.projections.size(), Errc::frame_mismatch,
          "pair: wrong number of functions");
  for (const auto& f : fns)
    require(f.dom == dom, Errc::frame_mismatch, "pair: domains differ");
  for (size_t k = 0; k < fns.size(); ++k)
    require(fns[k].cod == pr.projections[k].cod, Errc::frame_mismatch,
            "pair: codomain is not the expected factor");
  std::vector<int> t;
  t.reserve(dom.elements().size());
  for (size_t i = 0; i < dom.elements().size(); ++i) {
    std::vector<int> comps;
    comps.reserve(fns.size());
    for (const auto& f : fns) comps.push_back(f.table[i]);
    t.push_back(pr.index_of_tuple(comps));
  }
  return FinFunction(dom, pr.prod, std::move(t));
}

FinFunction pair_fns(const FinSet& dom, const std::vector<FinFunction>& fns) {
  std::vector<FinSet> cods;
  for (const auto& f : fns) cods.push_back(f.cod);
  return pair_fns(product_sets(cods), dom, fns);
}

const DiagramShape::Generator& DiagramShape::generator(const std::string& name) const {
  for (const auto& g : generators)
    if (g.name == name) return g;
  fail(Errc::invalid_argument, "no generator named " + name);
}

void DiagramShape::validate() const {
  for (const auto& g : generators) {
    require(objects.contains(g.src) && objects.contains(g.dst), Errc::shape_mismatch,
            "generator " + g.name + " endpoints not in objects");
  }
  for (const auto& [lhs, rhs] : relations) {
    auto ends = [&](const Path& p) -> std::pair<std::string, std::string> {
      require(!p.empty(), Errc::shape_mismatch, "empty relation path");
      std::string cur = generator(p.front()).src;
      std::string start = cur;
      for (const auto& gname : p) {
        const auto& g = generator(gname);
        require(g.src == cur, Errc::shape_mismatch, "relation path not composable");
        cur = g.dst;
      }
      return {start, cur};
    };
    auto [ls, ld] = ends(lhs);
    auto [rs, rd] = ends(rhs);
    require(ls == rs && ld == rd, Errc::shape_mismatch, "relation paths not parallel");
  }
}

const FinSet& SetDiagram::object_set(const std::string& obj) const {
  int i = shape.objects.index_of(obj);
  require(i >= 0, Errc::invalid_argument, "no diagram object " + obj);
  return on_objects[i];
}

const FinFunction& SetDiagram::generator_fn(const std::string& name) const {
  for (size_t i = 0; i < shape.generators.size(); ++i)
    if (shape.generators[i].name == name) return on_generators[i];
  fail(Errc::invalid_argument, "no diagram generator " + name);
}

static FinFunction eval_path(const SetDiagram& d, const DiagramShape::Path& p) {
  FinFunction acc = d.generator_fn(p.front());
  for (size_t k = 1; k < p.size(); ++k) acc = compose_fn(acc, d.generator_fn(p[k]));
  return acc;
}

void SetDiagram::validate() const {
  shape.validate();
  require(on_objects.size() == shape.objects.elements().size() &&
              on_generators.size() == shape.generators.size(),
          Errc::shape_mismatch, "diagram data misaligned with shape");
  for (size_t i = 0; i < shape.generators.size(); ++i) {
    const auto& g = shape.generators[i];
    require(on_generators[i].dom == object_set(g.src) &&
                on_generators[i].cod == object_set(g.dst),
            Errc::shape_mismatch, "diagram generator " + g.name + " has wrong frame");
  }
  for (const auto& [lhs, rhs] : shape.relations) {
    require(eval_path(*this, lhs) == eval_path(*this, rhs), Errc::shape_mismatch,
            "diagram relation fails");
  }
}

int LimitResult::index_of(const std::vector<int>& comps) const {
  auto it = lookup_.find(comps);
  return it == lookup_.end() ? -1 : it->second;
}

LimitResult limit_of_diagram(const SetDiagram& d) {
  const auto& objs = d.shape.objects.elements();
  std::vector<int> sizes;
  sizes.reserve(objs.size());
  long long total = 1;
  for (const auto& s : d.on_objects) {
    sizes.push_back(s.size());
    total *= s.size();
    require(total <= 2'000'000, Errc::invalid_argument, "limit carrier too large");
  }
  // Resolve generator endpoints to positions once.
  struct Edge { int src, dst; const FinFunction* fn; };
  std::vector<Edge> edges;
  for (size_t k = 0; k < d.shape.generators.size(); ++k) {
    const auto& g = d.shape.generators[k];
    edges.push_back({d.shape.objects.index_of(g.src), d.shape.objects.index_of(g.dst),
                     &d.on_generators[k]});
  }
  LimitResult out;
  std::vector<std::string> elems;
  std::vector<std::vector<int>> leg_tables(objs.size());
  std::vector<int> counter(objs.size(), 0);
  for (long long n = 0; n < total; ++n) {
    bool ok = true;
    for (const auto& e : edges) {
      if (e.fn->table[counter[e.src]] != counter[e.dst]) { ok = false; break; }
    }
    if (ok) {
      std::vector<std::string> comps;
      comps.reserve(objs.size());
      for (size_t k = 0; k < objs.size(); ++k) {
        comps.push_back(escape_label(d.on_objects[k].elements()[counter[k]]));
        leg_tables[k].push_back(counter[k]);
      }
      out.lookup_[counter] = static_cast<int>(elems.size());
      elems.push_back("tup(" + join_escaped(comps) + ")");
    }
    for (size_t k = objs.size(); k-- > 0;) {
      if (++counter[k] < sizes[k]) break;
      counter[k] = 0;
    }
  }
  std::vector<std::string> names;
  for (const auto& s : d.on_objects) names.push_back(escape_label(s.name()));
  out.apex = FinSet("lim(" + join_escaped(names) + ")", std::move(elems));
  for (size_t k = 0; k < objs.size(); ++k)
    out.legs.emplace_back(out.apex, d.on_objects[k], std::move(leg_tables[k]));
  return out;
}

static std::string el_label(int pos, const std::string& e) {
  return "el(" + std::to_string(pos) + "," + escape_label(e) + ")";
}

DiagramShape elements_of_span_copresheaf(const SetSpan& span) {
  DiagramShape shape;
  std::vector<std::string> objs;
  for (const auto& e : span.left_foot.elements()) objs.push_back(el_label(0, e));
  for (const auto& e : span.apex.elements()) objs.push_back(el_label(1, e));
  for (const auto& e : span.right_foot.elements()) objs.push_back(el_label(2, e));
  shape.objects = FinSet("els(" + escape_label(span.apex.name()) + ")", std::move(objs));
  for (size_t a = 0; a < span.apex.elements().size(); ++a) {
    const auto& ea = span.apex.elements()[a];
    shape.generators.push_back({"l(" + escape_label(ea) + ")", el_label(1, ea),
                                el_label(0, span.left_foot.elements()[span.left.table[a]])});
    shape.generators.push_back({"r(" + escape_label(ea) + ")", el_label(1, ea),
                                el_label(2, span.right_foot.elements()[span.right.table[a]])});
  }
  return shape;
}

DiagramShape elements_of_span_copresheaf(const SetSpan& first, const SetSpan& second) {
  require(first.right_foot == second.left_foot, Errc::endpoint_mismatch,
          "spans not composable");
  DiagramShape shape;
  std::vector<std::string> objs;
  const FinSet* sets[5] = {&first.left_foot, &first.apex, &first.right_foot,
                           &second.apex, &second.right_foot};
  int pos_of[5] = {0, 1, 2, 3, 4};
  for (int p = 0; p < 5; ++p)
    for (const auto& e : sets[p]->elements()) objs.push_back(el_label(pos_of[p], e));
  shape.objects = FinSet("els(" + escape_label(first.apex.name()) + "," +
                             escape_label(second.apex.name()) + ")",
                         std::move(objs));
  for (size_t a = 0; a < first.apex.elements().size(); ++a) {
    const auto& ea = first.apex.elements()[a];
    shape.generators.push_back({"l1(" + escape_label(ea) + ")", el_label(1, ea),
                                el_label(0, first.left_foot.elements()[first.left.table[a]])});
    shape.generators.push_back({"r1(" + escape_label(ea) + ")", el_label(1, ea),
                                el_label(2, first.right_foot.elements()[first.right.table[a]])});
  }
  for (size_t b = 0; b < second.apex.elements().size(); ++b) {
    const auto& eb = second.apex.elements()[b];
    shape.generators.push_back({"l2(" + escape_label(eb) + ")", el_label(3, eb),
                                el_label(2, second.left_foot.elements()[second.left.table[b]])});
    shape.generators.push_back({"r2(" + escape_label(eb) + ")", el_label(3, eb),
                                el_label(4, second.right_foot.elements()[second.right.table[b]])});
  }
  return shape;
}

FinSet canonical_set(int size) {
  std::vector<std::string> elems;
  for (int i = 0; i < size; ++i) elems.push_back("u" + std::to_string(i));
  return FinSet("t" + std::to_string(size), std::move(elems));
}

FinSet canonical_index_set(int size) {
  std::vector<std::string> elems;
  for (int i = 0; i < size; ++i) elems.push_back("i" + std::to_string(i));
  return FinSet("ix" + std::to_string(size), std::move(elems));
}

std::vector<FinFunction> all_functions(const FinSet& dom, const FinSet& cod) {
  std::vector<FinFunction> out;
  if (dom.size() == 0) {
    out.push_back(FinFunction(dom, cod, {}));
    return out;
  }
  if (cod.size() == 0) return out;  // no functions from nonempty to empty
  std::vector<int> t(dom.size(), 0);
  while (true) {
    out.push_back(FinFunction(dom, cod, t));
    int k = dom.size() - 1;
    while (k >= 0 && ++t[k] == cod.size()) t[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace dcat
