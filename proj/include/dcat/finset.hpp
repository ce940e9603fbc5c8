#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <memory>
#include "dcat/util.hpp"

namespace dcat {

/// A named finite set with an ordered list of distinct element labels.
/// The order is part of the value; constructed sets use canonical labels
/// (pair/inj/tup) so rebuilding a construction yields an identical value.
/// Copies share the underlying data.
class FinSet {
 public:
  FinSet();
  FinSet(std::string name, std::vector<std::string> elements);

  const std::string& name() const { return data_->name; }
  const std::vector<std::string>& elements() const { return data_->elements; }
  int size() const { return static_cast<int>(data_->elements.size()); }
  bool contains(const std::string& label) const { return index_of(label) >= 0; }
  int index_of(const std::string& label) const;

  std::string enc() const;
  bool operator==(const FinSet& o) const {
    return data_ == o.data_ ||
           (data_->name == o.data_->name && data_->elements == o.data_->elements);
  }
  bool operator!=(const FinSet& o) const { return !(*this == o); }

 private:
  struct Data {
    std::string name;
    std::vector<std::string> elements;
    std::map<std::string, int> index;
  };
  std::shared_ptr<const Data> data_;
};

/// Total function between finite sets; the table stores, for each dom
/// element (in order), the index of its image in cod.
struct FinFunction {
  FinSet dom, cod;
  std::vector<int> table;

  FinFunction() = default;
  FinFunction(FinSet dom, FinSet cod, std::vector<int> table);

  static FinFunction identity(const FinSet& s);
  /// Builds a function from a label-to-label map (must be total on dom).
  static FinFunction from_labels(const FinSet& dom, const FinSet& cod,
                                 const std::map<std::string, std::string>& m);

  int apply(int dom_index) const { return table.at(dom_index); }
  const std::string& apply_label(const std::string& label) const;

  std::string enc() const;
  bool operator==(const FinFunction&) const = default;
};

/// Pointwise composition f then g (diagrammatic order).
FinFunction compose_fn(const FinFunction& f, const FinFunction& g);

bool is_bijection(const FinFunction& f);
FinFunction invert_bijection(const FinFunction& f);

struct SetSpan {
  FinSet left_foot, apex, right_foot;
  FinFunction left, right;  // apex -> left_foot, apex -> right_foot

  SetSpan() = default;
  SetSpan(FinFunction left, FinFunction right);

  static SetSpan identity(const FinSet& s);

  std::string enc() const;
  bool operator==(const SetSpan&) const = default;
};

/// A map of spans (onLeft, onApex, onRight) with both squares commuting.
struct SpanMorphism {
  SetSpan src, dst;
  FinFunction on_left, on_apex, on_right;

  SpanMorphism() = default;
  SpanMorphism(SetSpan src, SetSpan dst, FinFunction on_left,
               FinFunction on_apex, FinFunction on_right);

  static SpanMorphism identity(const SetSpan& s);

  std::string enc() const;
  bool operator==(const SpanMorphism&) const = default;
};

struct PullbackSets {
  FinSet apex;          // elements pair(a,b), a-major order
  FinFunction p1, p2;   // projections to f.dom and g.dom
  /// Index of pair(a,b) by (dom-index of a, dom-index of b).
  int index_of_pair(int a_index, int b_index) const;

 private:
  friend PullbackSets pullback(const FinFunction&, const FinFunction&);
  std::map<std::pair<int, int>, int> lookup_;
};

/// Pullback of f: A -> C and g: B -> C: all pairs (a,b) with f(a) = g(b),
/// labeled pair(a,b) in lexicographic (a,b) order.
PullbackSets pullback(const FinFunction& f, const FinFunction& g);

struct CoproductSets {
  FinSet sum;  // elements inj(i,e), summand-major order
  std::vector<FinFunction> injections;
};

/// Tagged disjoint union; an empty family yields the empty set.
CoproductSets coproduct_sets(const std::vector<FinSet>& family);

struct ProductSets {
  FinSet prod;  // elements tup(e1,...,ek), first factor slowest
  std::vector<FinFunction> projections;
  /// Index of the tuple with the given component indices.
  int index_of_tuple(const std::vector<int>& component_indices) const;

 private:
  friend ProductSets product_sets(const std::vector<FinSet>&);
  std::vector<int> strides_;
};

/// Cartesian product; an empty family yields the singleton {tup()}.
ProductSets product_sets(const std::vector<FinSet>& family);

/// The unique mediating function out of a coproduct.
FinFunction copair_fns(const CoproductSets& cp, const std::vector<FinFunction>& fns);
/// Convenience overload recomputing the coproduct of the domains.
FinFunction copair_fns(const std::vector<FinFunction>& fns);

/// The unique mediating function into a product.
FinFunction pair_fns(const ProductSets& pr, const FinSet& dom,
                     const std::vector<FinFunction>& fns);
FinFunction pair_fns(const FinSet& dom, const std::vector<FinFunction>& fns);

/// A free category presentation: objects, generating arrows, and (rarely
/// needed here) pairs of parallel generator paths that must agree.
struct DiagramShape {
  struct Generator {
    std::string name, src, dst;
  };
  using Path = std::vector<std::string>;  // generator names, diagrammatic order

  FinSet objects;
  std::vector<Generator> generators;
  std::vector<std::pair<Path, Path>> relations;

  const Generator& generator(const std::string& name) const;
  void validate() const;
};

struct SetDiagram {
  DiagramShape shape;
  std::vector<FinSet> on_objects;        // aligned with shape.objects
  std::vector<FinFunction> on_generators;  // aligned with shape.generators

  const FinSet& object_set(const std::string& obj) const;
  const FinFunction& generator_fn(const std::string& name) const;
  void validate() const;
};

struct LimitResult {
  FinSet apex;                    // surviving product tuples, product order
  std::vector<FinFunction> legs;  // aligned with shape.objects
  /// Index of the surviving tuple with the given component indices,
  /// or -1 when that tuple was cut by the constraints.
  int index_of(const std::vector<int>& component_indices) const;

 private:
  friend LimitResult limit_of_diagram(const SetDiagram&);
  std::map<std::vector<int>, int> lookup_;
};

/// Limit computed as the subset of the product of all object sets whose
/// tuples satisfy g(component at src) = component at dst for each generator.
LimitResult limit_of_diagram(const SetDiagram& d);

/// Category of elements of the copresheaf on the walking span given by a
/// span of sets: objects el(k,e) for the feet (k=0,2) and the apex (k=1),
/// arrows l(a), r(a) from each apex element toward its leg images.
DiagramShape elements_of_span_copresheaf(const SetSpan& span);

/// Same for a composable pair of spans, positions 0..4.
DiagramShape elements_of_span_copresheaf(const SetSpan& first, const SetSpan& second);

/// Canonical test carriers t0, t1, ... with elements u0, u1, ....
FinSet canonical_set(int size);
/// Canonical index sets i0-based; distinct family so indexing sets are
/// visually separate from carriers in encodings.
FinSet canonical_index_set(int size);

/// All functions dom -> cod in canonical (mixed-radix) order.
std::vector<FinFunction> all_functions(const FinSet& dom, const FinSet& cod);

inline std::string pair_label(const std::string& a, const std::string& b) {
  return "pair(" + join_escaped({escape_label(a), escape_label(b)}) + ")";
}

}  // namespace dcat
