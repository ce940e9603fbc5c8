#pragma once

#include "dcat/dblcat.hpp"

namespace dcat {

enum class Variance { covariant, contravariant };

/// Set-indexed family of objects of a base double category.
struct FamObject {
  FinSet indexing;
  std::vector<Ob> assignment;  // aligned with indexing.elements()

  std::string enc() const;
  bool operator==(const FamObject& o) const { return enc() == o.enc(); }
};

/// Covariant: on_index: src.I -> dst.J with components f_i: x_i -> y_{f0(i)}
/// indexed by src. Contravariant: on_index: dst.J -> src.I with components
/// f_j: x_{f0(j)} -> y_j indexed by dst.
struct FamArrow {
  Variance variance = Variance::covariant;
  FamObject src, dst;
  FinFunction on_index;
  std::vector<Arr> components;

  std::string enc() const;
  bool operator==(const FamArrow& o) const { return enc() == o.enc(); }
};

struct FamProarrow {
  FamObject src, dst;
  SetSpan indexing_span;
  std::vector<Pro> components;  // aligned with indexing_span.apex

  std::string enc() const;
  bool operator==(const FamProarrow& o) const { return enc() == o.enc(); }
};

/// Covariant: on_spans maps the top indexing span to the bottom one and the
/// components are indexed by the top apex. Contravariant: on_spans maps the
/// bottom indexing span to the top one and the components are indexed by the
/// bottom apex.
struct FamCell {
  Variance variance = Variance::covariant;
  FamProarrow top, bottom;
  FamArrow left, right;
  SpanMorphism on_spans;
  std::vector<Cell> components;

  std::string enc() const;
  bool operator==(const FamCell& o) const { return enc() == o.enc(); }
};

/// DblFam(D) (covariant) or DblFamOp(D) (contravariant) over any base
/// handle. The two constructions share representation; the variance is a
/// runtime tag carried by arrows and cells.
class FamDouble final : public DoubleCategory {
 public:
  FamDouble(const DoubleCategory& base, Variance variance)
      : base_(base), variance_(variance) {}
  std::string name() const override {
    return (variance_ == Variance::covariant ? "DblFam(" : "DblFamOp(") +
           base_.name() + ")";
  }
  const DoubleCategory& base() const { return base_; }
  Variance variance() const { return variance_; }

  static Ob ob(const FamObject&);
  static Arr arr(const FamArrow&);
  static Pro pro(const FamProarrow&);
  static Cell cell(const FamCell&);
  static const FamObject& ob_of(const Ob&);
  static const FamArrow& arr_of(const Arr&);
  static const FamProarrow& pro_of(const Pro&);
  static const FamCell& cell_of(const Cell&);

  Ob arr_src(const Arr&) const override;
  Ob arr_dst(const Arr&) const override;
  Ob pro_src(const Pro&) const override;
  Ob pro_dst(const Pro&) const override;
  Pro cell_top(const Cell&) const override;
  Pro cell_bottom(const Cell&) const override;
  Arr cell_left(const Cell&) const override;
  Arr cell_right(const Cell&) const override;

  Arr id_arrow(const Ob&) const override;
  Arr compose_arrows(const Arr&, const Arr&) const override;
  Pro id_pro(const Ob&) const override;
  Pro compose_pro(const Pro&, const Pro&) const override;
  Cell id_cell_on_pro(const Pro&) const override;
  Cell id_cell_on_arrow(const Arr&) const override;
  Cell compose_cells_vert(const Cell&, const Cell&) const override;
  Cell compose_cells_ext(const Cell&, const Cell&) const override;
  Cell associator(const Pro&, const Pro&, const Pro&) const override;
  Cell left_unitor(const Pro&) const override;
  Cell right_unitor(const Pro&) const override;
  bool arrow_is_iso(const Arr&) const override;
  bool cell_is_iso(const Cell&) const override;
  Arr invert_arrow(const Arr&) const override;
  Cell invert_cell(const Cell&) const override;
  std::optional<std::string> check_cell(const Cell&) const override;
  std::vector<Ob> objects(int bound) const override;
  std::vector<Arr> arrows_between(const Ob&, const Ob&) const override;
  std::vector<Pro> proarrows_between(const Ob&, const Ob&, int bound) const override;
  std::vector<Cell> cells_in_frame(const Pro&, const Pro&, const Arr&,
                                   const Arr&) const override;
  std::optional<CompanionPair> companion(const Arr&) const override;
  std::optional<CompanionPair> conjoint(const Arr&) const override;

 private:
  const DoubleCategory& base_;
  Variance variance_;
};

/// Singleton indexing set used by the Δ embedding.
const FinSet& unit_index_set();

FamObject delta_embed(const DoubleCategory& base, const Ob& x);
FamProarrow delta_embed_pro(const DoubleCategory& base, const Pro& m);

/// The singleton-family embedding Δ: D -> DblFam(D) (covariant) or
/// Δ: D -> DblFamOp(D) (contravariant); pseudo either way.
class DeltaFunctor final : public DoubleFunctor {
 public:
  DeltaFunctor(const DoubleCategory& base, const FamDouble& fam)
      : base_(base), fam_(fam) {}
  const DoubleCategory& dom() const override { return base_; }
  const DoubleCategory& cod() const override { return fam_; }
  Functoriality functoriality() const override { return Functoriality::pseudo; }
  Ob on_ob(const Ob& x) const override;
  Arr on_arr(const Arr& f) const override;
  Pro on_pro(const Pro& m) const override;
  Cell on_cell(const Cell& a) const override;
  Cell laxator(const Pro& m, const Pro& n) const override;
  Cell unitor(const Ob& x) const override;

 private:
  const DoubleCategory& base_;
  const FamDouble& fam_;
};

/// Elementwise action DblFam(F) of a double functor on families.
class FamLiftFunctor final : public DoubleFunctor {
 public:
  FamLiftFunctor(const DoubleFunctor& f, const FamDouble& dom, const FamDouble& cod);
  const DoubleCategory& dom() const override { return dom_; }
  const DoubleCategory& cod() const override { return cod_; }
  Functoriality functoriality() const override { return f_.functoriality(); }
  Ob on_ob(const Ob& x) const override;
  Arr on_arr(const Arr& f) const override;
  Pro on_pro(const Pro& m) const override;
  Cell on_cell(const Cell& a) const override;
  Cell laxator(const Pro& m, const Pro& n) const override;
  Cell unitor(const Ob& x) const override;

 private:
  const DoubleFunctor& f_;
  const FamDouble& dom_;
  const FamDouble& cod_;
};

/// Family extension cell assembled from base extension cells filling each
/// constituent co-niche; indexed by the same span with relabeled legs.
FamCell fam_extension(const DoubleCategory& base, const FamProarrow& m,
                      const FamArrow& f, const FamArrow& g,
                      const std::vector<Cell>& base_extensions);

/// Extension over Span computed from the concrete base extensions.
FamCell fam_extension_span(const FamProarrow& m, const FamArrow& f, const FamArrow& g);

// Families of families, presented concretely.
struct OuterFamilyObject {
  FinSet indexing;
  std::vector<FamObject> families;
};
struct OuterFamilyProarrow {
  OuterFamilyObject src, dst;
  SetSpan indexing_span;
  std::vector<FamProarrow> inner;
};

struct FamObjectCoproduct {
  FamObject summit;
  std::vector<FamArrow> coprojections;
};
struct FamProCoproduct {
  FamObjectCoproduct src, dst;
  FamProarrow summit;
  std::vector<FamCell> coprojections;
};

/// Chosen coproducts of DblFam(D): disjoint unions of indexing data with
/// copaired legs; coprojection cells have identity base components.
FamObjectCoproduct fam_fam_coproduct_objects(const DoubleCategory& base,
                                             const OuterFamilyObject& outer);
FamProCoproduct fam_fam_coproduct(const DoubleCategory& base,
                                  const OuterFamilyProarrow& outer);

struct FamObjectProduct {
  FamObject base;
  std::vector<FamArrow> projections;  // contravariant
};
struct FamProProduct {
  FamObjectProduct src, dst;
  FamProarrow base;
  std::vector<FamCell> projections;  // contravariant
};

/// Chosen products of DblFamOp(D); the same indexing-level construction
/// with contravariant (co)projections.
FamObjectProduct fam_fam_product_objects(const DoubleCategory& base,
                                         const OuterFamilyObject& outer);
FamProProduct fam_fam_product(const DoubleCategory& base,
                              const OuterFamilyProarrow& outer);

/// Exhaustive check that the dictionary DblFam(1) <-> Span is bijective on
/// all four sorts over the bounded universe and preserves the four
/// compositions bit-exactly.
struct FamSpanDictionaryReport {
  long long objects = 0, arrows = 0, proarrows = 0, cells = 0;
  long long composition_checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
FamSpanDictionaryReport check_fam_terminal_iso_span(int bound);

// The structure-preserving dictionary DblFam(1) <-> Span.
FinSet fam_to_span_ob(const FamObject& x);
FinFunction fam_to_span_arr(const FamArrow& f);
SetSpan fam_to_span_pro(const FamProarrow& m);
SpanCell fam_to_span_cell(const FamCell& a);
FamObject span_to_fam_ob(const FinSet& x);
FamArrow span_to_fam_arr(const FinFunction& f);
FamProarrow span_to_fam_pro(const SetSpan& m);
FamCell span_to_fam_cell(const SpanCell& a);

}  // namespace dcat
