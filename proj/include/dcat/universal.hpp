#pragma once

#include "dcat/family.hpp"

namespace dcat {

// ---------------------------------------------------------------------------
// Chosen (co)products

struct ObjectProduct {
  FamObject family;
  Ob base;                      // Πx
  std::vector<Arr> projections;  // π_i: Πx -> x_i
  std::any witness;
};

struct ProProduct {
  FamProarrow family;
  ObjectProduct src, dst;
  Pro base;                      // Πm
  std::vector<Cell> projections;  // π_a: Πm -> m_a over (π_i, π_j)
  std::any witness;
};

struct ObjectCoproduct {
  FamObject family;
  Ob summit;                       // Σx
  std::vector<Arr> coprojections;  // ι_i: x_i -> Σx
  std::any witness;
};

struct ProCoproduct {
  FamProarrow family;
  ObjectCoproduct src, dst;
  Pro summit;                       // Σm
  std::vector<Cell> coprojections;  // ι_a: m_a -> Σm over (ι_i, ι_j)
  std::any witness;
};

/// Chosen lax products of a double category, together with the exact
/// mediating (pairing) constructions of the universal property.
class ProductChoice {
 public:
  virtual ~ProductChoice() = default;
  virtual const DoubleCategory& category() const = 0;
  virtual ObjectProduct product_objects(const FamObject& fam) const = 0;
  virtual ProProduct product_pro(const FamProarrow& fam) const = 0;
  /// The unique h: w -> Πx with h;π_i = legs[i].
  virtual Arr pair_arrows(const ObjectProduct& p, const Ob& w,
                          const std::vector<Arr>& legs) const = 0;
  /// The unique β: n -> Πm over (left, right) with β;π_a = alphas[a]; the
  /// alphas must sit over (left;π_{l(a)}, right;π_{r(a)}).
  virtual Cell pair_cells(const ProProduct& p, const Pro& n, const Arr& left,
                          const Arr& right, const std::vector<Cell>& alphas) const = 0;
};

class CoproductChoice {
 public:
  virtual ~CoproductChoice() = default;
  virtual const DoubleCategory& category() const = 0;
  virtual ObjectCoproduct sum_objects(const FamObject& fam) const = 0;
  virtual ProCoproduct sum_pro(const FamProarrow& fam) const = 0;
  virtual Arr copair_arrows(const ObjectCoproduct& c, const Ob& w,
                            const std::vector<Arr>& legs) const = 0;
  virtual Cell copair_cells(const ProCoproduct& c, const Pro& n, const Arr& left,
                            const Arr& right, const std::vector<Cell>& alphas) const = 0;
};

/// Unitary lax products of Span: products of identity families over identity
/// spans are chosen to be identity proarrows on the nose.
class SpanProducts final : public ProductChoice {
 public:
  const DoubleCategory& category() const override { return span_double(); }
  ObjectProduct product_objects(const FamObject& fam) const override;
  ProProduct product_pro(const FamProarrow& fam) const override;
  Arr pair_arrows(const ObjectProduct& p, const Ob& w,
                  const std::vector<Arr>& legs) const override;
  Cell pair_cells(const ProProduct& p, const Pro& n, const Arr& left,
                  const Arr& right, const std::vector<Cell>& alphas) const override;
};

class SpanCoproducts final : public CoproductChoice {
 public:
  const DoubleCategory& category() const override { return span_double(); }
  ObjectCoproduct sum_objects(const FamObject& fam) const override;
  ProCoproduct sum_pro(const FamProarrow& fam) const override;
  Arr copair_arrows(const ObjectCoproduct& c, const Ob& w,
                    const std::vector<Arr>& legs) const override;
  Cell copair_cells(const ProCoproduct& c, const Pro& n, const Arr& left,
                    const Arr& right, const std::vector<Cell>& alphas) const override;
};

class MatProducts final : public ProductChoice {
 public:
  const DoubleCategory& category() const override { return mat_double(); }
  ObjectProduct product_objects(const FamObject& fam) const override;
  ProProduct product_pro(const FamProarrow& fam) const override;
  Arr pair_arrows(const ObjectProduct& p, const Ob& w,
                  const std::vector<Arr>& legs) const override;
  Cell pair_cells(const ProProduct& p, const Pro& n, const Arr& left,
                  const Arr& right, const std::vector<Cell>& alphas) const override;
};

class MatCoproducts final : public CoproductChoice {
 public:
  const DoubleCategory& category() const override { return mat_double(); }
  ObjectCoproduct sum_objects(const FamObject& fam) const override;
  ProCoproduct sum_pro(const FamProarrow& fam) const override;
  Arr copair_arrows(const ObjectCoproduct& c, const Ob& w,
                    const std::vector<Arr>& legs) const override;
  Cell copair_cells(const ProCoproduct& c, const Pro& n, const Arr& left,
                    const Arr& right, const std::vector<Cell>& alphas) const override;
};

/// Chosen strong coproducts of DblFam(D) via the families-of-families
/// construction.
class FamCoproducts final : public CoproductChoice {
 public:
  explicit FamCoproducts(const FamDouble& fam) : fam_(fam) {}
  const DoubleCategory& category() const override { return fam_; }
  ObjectCoproduct sum_objects(const FamObject& fam) const override;
  ProCoproduct sum_pro(const FamProarrow& fam) const override;
  Arr copair_arrows(const ObjectCoproduct& c, const Ob& w,
                    const std::vector<Arr>& legs) const override;
  Cell copair_cells(const ProCoproduct& c, const Pro& n, const Arr& left,
                    const Arr& right, const std::vector<Cell>& alphas) const override;

 private:
  const FamDouble& fam_;
};

/// Chosen strong products of DblFamOp(D), dually.
class FamOpProducts final : public ProductChoice {
 public:
  explicit FamOpProducts(const FamDouble& fam) : fam_(fam) {}
  const DoubleCategory& category() const override { return fam_; }
  ObjectProduct product_objects(const FamObject& fam) const override;
  ProProduct product_pro(const FamProarrow& fam) const override;
  Arr pair_arrows(const ObjectProduct& p, const Ob& w,
                  const std::vector<Arr>& legs) const override;
  Cell pair_cells(const ProProduct& p, const Pro& n, const Arr& left,
                  const Arr& right, const std::vector<Cell>& alphas) const override;

 private:
  const FamDouble& fam_;
};

/// The composite family m ⊙ n indexed by the pullback of the indexing spans.
FamProarrow compose_families(const DoubleCategory& d, const FamProarrow& m,
                             const FamProarrow& n);
/// The identity family over the identity indexing span.
FamProarrow identity_family(const DoubleCategory& d, const FamObject& x);

// ---------------------------------------------------------------------------
// Comparison cells

enum class ComparisonKind {
  sigma_comp,  // Σ_{m,n}: Σ(m⊙n) -> Σm ⊙ Σn
  sigma_id,    // Σ_x: Σ(id_x) -> id_{Σx}
  pi_comp,     // Π_{m,n}: Πm ⊙ Πn -> Π(m⊙n)
  pi_id,       // Π_x: id_{Πx} -> Π(id_x)
  phi_ob,      // Φ_x: Σ F x -> F Σ x
  phi_pro,     // Φ_m: Σ F m -> F Σ m
  psi_ob,      // Ψ_x: F Π x -> Π F x
  psi_pro,     // Ψ_m: F Π m -> Π F m
};

struct ComparisonCell {
  ComparisonKind kind;
  Cell cell;
  bool is_iso = false;
  std::optional<Cell> inverse;
  bool equations_hold = true;  // defining equations against the (co)projections
};

struct ArrowComparison {
  ComparisonKind kind;
  Arr arrow;
  bool is_iso = false;
};

ComparisonCell product_composition_comparison(const ProductChoice& ch,
                                              const FamProarrow& m,
                                              const FamProarrow& n);
ComparisonCell product_identity_comparison(const ProductChoice& ch, const FamObject& x);
ComparisonCell coproduct_composition_comparison(const CoproductChoice& ch,
                                                const FamProarrow& m,
                                                const FamProarrow& n);
ComparisonCell coproduct_identity_comparison(const CoproductChoice& ch,
                                             const FamObject& x);

struct IsoStrongVerdict {
  bool adjacent_legs_bijective = false;
  ComparisonCell comparison;  // Π_{m,n}
};
IsoStrongVerdict check_iso_strong(const ProductChoice& ch, const FamProarrow& m,
                                  const FamProarrow& n);

// ---------------------------------------------------------------------------
// Bounded brute-force universal-property verification

struct CheckOptions {
  int bound = 3;
  long long budget = 1'000'000;
};

struct UniversalCheckReport {
  std::string property_kind;
  int test_bound = 0;
  long long cases_tried = 0;
  bool partial = false;  // enumeration stopped at the budget
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

UniversalCheckReport check_universal_product(const DoubleCategory& d,
                                             const ProProduct& cand,
                                             const CheckOptions& opt);
UniversalCheckReport check_universal_coproduct(const DoubleCategory& d,
                                               const ProCoproduct& cand,
                                               const CheckOptions& opt);
/// Restriction (cartesian cell) check: rho must be a cell r -> n over (f, g).
UniversalCheckReport check_cartesian(const DoubleCategory& d, const Cell& rho,
                                     const CheckOptions& opt);
/// Extension (opcartesian cell) check: eps must be a cell m -> e over (f, g).
UniversalCheckReport check_opcartesian(const DoubleCategory& d, const Cell& eps,
                                       const CheckOptions& opt);

/// Reads a chosen product in D as a chosen coproduct in op(D).
ProCoproduct op_transport_product(const ProProduct& p);

// ---------------------------------------------------------------------------
// Restrictions along structure arrows, diagonals, characterization

/// The product arrow Π(f0,f): Πx -> Πy of a contravariant family of arrows.
Arr product_arrow(const ProductChoice& ch, const ObjectProduct& src,
                  const ObjectProduct& dst, const FamArrow& f);

struct StructureArrow {
  ObjectProduct src, dst;
  Arr arrow;  // Π(f0): Πx -> Π(f0* x)
};
/// f0: J -> I reindexing against the I-indexed family x.
StructureArrow structure_arrow(const ProductChoice& ch, const FinFunction& f0,
                               const FamObject& x);

struct StructureProarrow {
  StructureArrow arrow;
  ProProduct product;  // the product computing the (co)companion
  CompanionPair pair;  // arrow = Π(f0), proarrow = product.base
};
StructureProarrow structure_companion(const ProductChoice& ch, const FinFunction& f0,
                                      const FamObject& x);
StructureProarrow structure_conjoint(const ProductChoice& ch, const FinFunction& f0,
                                     const FamObject& x);

struct DiagonalProarrow {
  ProProduct product;        // δ_x as a product of two identity proarrows
  CompanionPair pair;        // (Δ_x, δ_x) with unit and counit
  std::vector<Cell> projections;  // the two projection cells of δ_x
};
DiagonalProarrow diagonal_proarrow(const ProductChoice& ch, const Ob& x);

/// Defining equations of the diagonal's unit and counit cells: η pasted with
/// each projection is the identity cell on the unary projection, and ε pasted
/// with each projection of id_{Πx²} recovers the projections of δ.
bool diagonal_equations_hold(const ProductChoice& ch, const DiagonalProarrow& d);

struct RestrictionOfProducts {
  ProProduct restricted_product;  // Π(n(f,g))
  Cell restriction;               // cartesian cell into Πn over the product arrows
};
/// Niche data per the product-restriction rule: contravariant arrow families
/// f: (I,x) -> (K,w) and g: (J,y) -> (L,z), with n a (K,L)-indexed family.
RestrictionOfProducts restriction_of_products(const ProductChoice& ch,
                                              const FamProarrow& n, const FamArrow& f,
                                              const FamArrow& g);

struct ProductViaRestriction {
  ProProduct product;   // assembled from the parallel product and a restriction
  Cell witness;         // globular iso to the directly chosen product
  bool witness_is_iso = false;
};
ProductViaRestriction product_via_restriction(const ProductChoice& ch,
                                              const FamProarrow& m);

// Preservation comparisons for a (co)lax functor between categories with
// chosen (co)products.
ArrowComparison coproduct_preservation_objects(const DoubleFunctor& F,
                                               const CoproductChoice& dom_ch,
                                               const CoproductChoice& cod_ch,
                                               const FamObject& x);
ComparisonCell coproduct_preservation_pro(const DoubleFunctor& F,
                                          const CoproductChoice& dom_ch,
                                          const CoproductChoice& cod_ch,
                                          const FamProarrow& m);
ArrowComparison product_preservation_objects(const DoubleFunctor& F,
                                             const ProductChoice& dom_ch,
                                             const ProductChoice& cod_ch,
                                             const FamObject& x);
ComparisonCell product_preservation_pro(const DoubleFunctor& F,
                                        const ProductChoice& dom_ch,
                                        const ProductChoice& cod_ch,
                                        const FamProarrow& m);

// ---------------------------------------------------------------------------
// Deterministic samplers (see SplitMix64 for the seed-to-case mapping)

FamObject sample_span_fam_object(SplitMix64& rng, int max_index, int max_carrier);
FamProarrow sample_span_fam_pro(SplitMix64& rng, const FamObject& x, const FamObject& y,
                                int max_index_apex, int max_span_apex);
/// Composable pair over Span; bijective_adjacent forces the legs A -> J and
/// J <- B to be bijections (the iso-strong hypothesis).
std::pair<FamProarrow, FamProarrow> sample_span_composable_pair(SplitMix64& rng,
                                                                int max_size,
                                                                bool bijective_adjacent);
FamObject sample_mat_fam_object(SplitMix64& rng, int max_index, int max_carrier);
std::pair<FamProarrow, FamProarrow> sample_mat_composable_pair(SplitMix64& rng,
                                                               int max_size,
                                                               bool bijective_adjacent);

}  // namespace dcat
