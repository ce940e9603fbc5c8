#pragma once

#include <memory>

#include "dcat/universal.hpp"

namespace dcat {

// ---------------------------------------------------------------------------
// Words over a finite-product double theory presentation.

/// Formal finite product of object generators; a single factor is the
/// generator itself (products in the theory are strict).
struct ObjectWord {
  std::vector<std::string> factors;
  std::string enc() const;
  bool operator==(const ObjectWord&) const = default;
};

struct ProWord;
using ProWordPtr = std::shared_ptr<const ProWord>;

/// Structure arrow Π(σ): Πx -> Π(σ*x) between products of object generators.
struct ArrowWord {
  ObjectWord dom;      // the I-indexed factors
  FinFunction sigma;   // J -> I reindexing (formal index sets)
  ObjectWord cod() const;
  std::string enc() const;
};

struct ProWord {
  enum class Kind { id, gen, comp, prod, companion };
  Kind kind = Kind::id;
  ObjectWord object;                  // id: id_{object}
  std::string name;                   // gen
  std::vector<ProWordPtr> parts;      // comp (exactly 2), prod components
  // prod: explicit indexing span over formal index sets, plus the object
  // families at the feet.
  SetSpan indexing;
  std::vector<ObjectWord> src_family, dst_family;
  // companion: x^σ_! for σ against the object family src_family.
  FinFunction sigma;

  std::string enc() const;
};

ProWordPtr word_id(ObjectWord w);
ProWordPtr word_gen(std::string name);
ProWordPtr word_comp(ProWordPtr a, ProWordPtr b);
ProWordPtr word_prod(SetSpan indexing, std::vector<ObjectWord> src_family,
                     std::vector<ObjectWord> dst_family, std::vector<ProWordPtr> parts);
/// Local product over the span 1 <- k -> 1.
ProWordPtr word_local_prod(ObjectWord src, ObjectWord dst, std::vector<ProWordPtr> parts);
ProWordPtr word_companion(FinFunction sigma, std::vector<ObjectWord> src_family);

struct CellWord;
using CellWordPtr = std::shared_ptr<const CellWord>;

struct CellWord {
  enum class Kind { gen, id_pro, vert, ext, proj, pair, comp_unit, comp_counit };
  Kind kind = Kind::gen;
  std::string name;                 // gen
  ProWordPtr pro;                   // id_pro / proj / pair target product word
  ProWordPtr source;                // pair: source word (needed for empty pairings)
  int index = -1;                   // proj component
  std::vector<CellWordPtr> parts;   // vert, ext (2), pair (one per component)
  FinFunction sigma;                // comp_unit/comp_counit
  std::vector<ObjectWord> src_family;

  std::string enc() const;
};

CellWordPtr cell_gen(std::string name);
CellWordPtr cell_id(ProWordPtr pro);
CellWordPtr cell_vert(CellWordPtr a, CellWordPtr b);
CellWordPtr cell_ext(CellWordPtr a, CellWordPtr b);
CellWordPtr cell_proj(ProWordPtr prod, int index);
/// Pairing into a product word; `source` names the common source of the legs
/// and is required when there are none.
CellWordPtr cell_pair(ProWordPtr prod, ProWordPtr source,
                      std::vector<CellWordPtr> parts);
CellWordPtr cell_comp_unit(FinFunction sigma, std::vector<ObjectWord> src_family);
CellWordPtr cell_comp_counit(FinFunction sigma, std::vector<ObjectWord> src_family);

// ---------------------------------------------------------------------------
// Presentations and models

struct TheoryPresentation {
  struct ProGen {
    std::string name;
    ObjectWord src, dst;
  };
  struct CellGen {
    std::string name;
    ProWordPtr src, dst;  // globular frames
  };
  struct Equation {
    std::string family, name;
    CellWordPtr lhs, rhs;
  };
  std::vector<std::string> object_generators;
  std::vector<ProGen> proarrow_generators;
  std::vector<CellGen> cell_generators;
  std::vector<Equation> equations;

  const CellGen& cell_generator(const std::string& name) const;
};

/// The theory of local commutative monoids: one object, local multiplication
/// and unit, with associativity, unitality, and commutativity equations.
TheoryPresentation builtin_lcmon_theory();

/// Key for atomic proarrow words: id_x or a proarrow generator.
std::string atomic_key(const ProWordPtr& w);

struct LaxatorOverride {
  ProWordPtr lhs, rhs;
  FinFunction table;  // apex of M(lhs)⊙M(rhs) -> apex of the derived target
};

struct ModelData {
  TheoryPresentation theory;
  std::map<std::string, FinSet> on_objects;          // object generator
  std::map<std::string, SetSpan> on_atomic;          // "id:x" and "gen:m"
  std::map<std::string, FinFunction> on_cells;       // cell generator apex maps
  // Laxators on composable atomic pairs whose composite collapses in the
  // strict theory; keyed by (atomic key, atomic key).
  std::map<std::pair<std::string, std::string>, FinFunction> laxators;
  std::map<std::string, FinFunction> unitors;        // object generator
  std::vector<LaxatorOverride> laxator_overrides;
};

/// The one-object Boolean model: hom set {0,1}, composition AND,
/// multiplication OR, unit 1, zero 0.
ModelData boolean_lcmon_model();
/// The terminal model: everything forced by a singleton hom.
ModelData trivial_lcmon_model();

// ---------------------------------------------------------------------------
// Evaluation

class ModelEval {
 public:
  explicit ModelEval(const ModelData& model)
      : model_(model), pro_cache_(std::make_shared<Cache>()) {}
  const ModelData& model() const { return model_; }

  FinSet eval_object(const ObjectWord& w) const;
  FinFunction eval_arrow(const ArrowWord& w) const;
  /// Object-level projection from the evaluated word onto one factor.
  FinFunction object_projection(const ObjectWord& w, int index) const;
  SetSpan eval_pro(const ProWordPtr& w) const;
  SpanCell eval_cell(const CellWordPtr& w) const;

  /// Product-word evaluation with its projection cells and limit witness.
  struct ThProduct {
    SetSpan base;
    std::vector<SpanCell> projections;
    LimitResult lim;
    int num_left = 0, num_apex = 0, num_right = 0;
    // Object-level projections from each foot onto the cone positions.
    std::vector<FinFunction> src_proj, dst_proj;
  };
  ThProduct eval_product(const ProWordPtr& w) const;
  SpanCell th_pair_cells(const ThProduct& p, const SetSpan& n, const FinFunction& left,
                         const FinFunction& right,
                         const std::vector<SpanCell>& alphas) const;

  /// Laxator at a composable pair of words: atomic pairs come from the
  /// model's tables; product-word pairs are derived by pairing the atomic
  /// laxators (the unique cells of the laxator-product law).
  SpanCell laxator(const ProWordPtr& a, const ProWordPtr& b) const;
  /// Independent recomputation: paste the semantic composition comparison
  /// with the product of atomic laxator cells.
  SpanCell laxator_via_product_law(const ProWordPtr& a, const ProWordPtr& b) const;
  /// Unitor cell at an object word (derived at products).
  SpanCell unitor(const ObjectWord& w) const;
  /// Clamped size estimate for the middle limit of the laxator-product law;
  /// pairs above the desk-scale cap are skipped by the checkers.
  long long laxator_product_size_estimate(const ProWordPtr& a,
                                          const ProWordPtr& b) const;

 private:
  struct Cache {
    std::map<std::string, SetSpan> pro;
    std::map<std::string, std::shared_ptr<const ThProduct>> prod;
  };
  const ModelData& model_;
  std::shared_ptr<Cache> pro_cache_;
  SpanCell atomic_laxator_cell(const ProWordPtr& a, const ProWordPtr& b) const;
  const ThProduct& eval_product_cached(const ProWordPtr& w) const;
};

// ---------------------------------------------------------------------------
// Checking

struct TheoryCheckReport {
  struct Violation {
    std::string axiom;     // pinpointed axiom id
    std::string instance;  // which instantiation failed
    std::string lhs, rhs;  // the two evaluated cell encodings (replayable)
  };
  std::vector<Violation> violations;
  long long checks = 0;
  bool pass() const { return violations.empty(); }
};

TheoryCheckReport check_model(const ModelData& model);

struct TransformationData {
  ModelData source, target;
  std::map<std::string, FinFunction> components;   // object generator
  std::map<std::string, FinFunction> naturality;   // atomic key -> apex map
};

TheoryCheckReport check_transformation(const TransformationData& t);

/// Composite and identity transformations (used by the sanity facts behind
/// the virtual double category of models).
TransformationData identity_transformation(const ModelData& m);
TransformationData compose_transformations(const TransformationData& s,
                                           const TransformationData& t);

// ---------------------------------------------------------------------------
// Categories enriched in commutative monoids

struct CMonCategory {
  FinSet objects;
  std::vector<FinSet> homs;                   // row-major over objects²
  std::vector<std::vector<int>> add;          // per hom: (i, j) -> k, row-major
  std::vector<int> zero;                      // per hom
  std::vector<int> identity;                  // per object: index into hom(a,a)
  std::vector<std::vector<int>> compose;      // per (a,b,c): (f, g) -> h row-major
                                              // with f in hom(a,b), g in hom(b,c)
  const FinSet& hom(int a, int b) const { return homs[a * objects.size() + b]; }
  int add_at(int a, int b, int f, int g) const;
  int compose_at(int a, int b, int c, int f, int g) const;
  /// Relabeling-invariant structural signature.
  std::string signature() const;
};

/// Validates the commutative-monoid and biadditivity laws; the diagnostic
/// carries a witness tuple when composition fails to distribute.
std::optional<std::string> validate_cmon(const CMonCategory& c);

ModelData cmon_to_model(const CMonCategory& c);
CMonCategory model_to_cmon(const ModelData& m);

/// Relabeling-invariant structural signature of a model of the lcMon theory.
std::string lcmon_model_signature(const ModelData& m);

}  // namespace dcat
