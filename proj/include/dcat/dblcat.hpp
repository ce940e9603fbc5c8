#pragma once

#include <any>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcat/finset.hpp"

namespace dcat {

/// Type-erased handles for the four sorts of a double category. Equality is
/// bit-exact equality of the canonical encoding; the payload carries the
/// instance-specific value.
struct Ob {
  std::string enc;
  std::any data;
  bool operator==(const Ob& o) const { return enc == o.enc; }
  bool operator!=(const Ob& o) const { return enc != o.enc; }
};
struct Arr {
  std::string enc;
  std::any data;
  bool operator==(const Arr& o) const { return enc == o.enc; }
  bool operator!=(const Arr& o) const { return enc != o.enc; }
};
struct Pro {
  std::string enc;
  std::any data;
  bool operator==(const Pro& o) const { return enc == o.enc; }
  bool operator!=(const Pro& o) const { return enc != o.enc; }
};
struct Cell {
  std::string enc;
  std::any data;
  bool operator==(const Cell& o) const { return enc == o.enc; }
  bool operator!=(const Cell& o) const { return enc != o.enc; }
};

struct CompanionPair {
  Arr arrow;
  Pro proarrow;
  Cell unit, counit;
};

/// Uniform interface over concrete double categories. External composition
/// is written in diagrammatic order; the instances are pseudo, with chosen
/// composites plus explicit associator and unitor cells.
class DoubleCategory {
 public:
  virtual ~DoubleCategory() = default;
  virtual std::string name() const = 0;

  virtual Ob arr_src(const Arr&) const = 0;
  virtual Ob arr_dst(const Arr&) const = 0;
  virtual Ob pro_src(const Pro&) const = 0;
  virtual Ob pro_dst(const Pro&) const = 0;
  virtual Pro cell_top(const Cell&) const = 0;
  virtual Pro cell_bottom(const Cell&) const = 0;
  virtual Arr cell_left(const Cell&) const = 0;
  virtual Arr cell_right(const Cell&) const = 0;

  virtual Arr id_arrow(const Ob&) const = 0;
  virtual Arr compose_arrows(const Arr&, const Arr&) const = 0;
  virtual Pro id_pro(const Ob&) const = 0;
  virtual Pro compose_pro(const Pro&, const Pro&) const = 0;
  virtual Cell id_cell_on_pro(const Pro&) const = 0;
  virtual Cell id_cell_on_arrow(const Arr&) const = 0;
  virtual Cell compose_cells_vert(const Cell&, const Cell&) const = 0;
  virtual Cell compose_cells_ext(const Cell&, const Cell&) const = 0;

  /// Globular isomorphism (m ⊙ n) ⊙ p → m ⊙ (n ⊙ p).
  virtual Cell associator(const Pro&, const Pro&, const Pro&) const = 0;
  /// Globular isomorphism id ⊙ m → m.
  virtual Cell left_unitor(const Pro&) const = 0;
  /// Globular isomorphism m ⊙ id → m.
  virtual Cell right_unitor(const Pro&) const = 0;

  virtual bool arrow_is_iso(const Arr&) const = 0;
  virtual bool cell_is_iso(const Cell&) const = 0;
  virtual Arr invert_arrow(const Arr&) const = 0;
  /// Vertical inverse of an invertible cell.
  virtual Cell invert_cell(const Cell&) const = 0;

  /// Structural well-formedness of a cell value (frames and commuting
  /// squares); used by checkers on caller-supplied candidates.
  virtual std::optional<std::string> check_cell(const Cell&) const = 0;

  /// Canonical test universe of objects with carriers up to the bound.
  virtual std::vector<Ob> objects(int bound) const = 0;
  virtual std::vector<Arr> arrows_between(const Ob&, const Ob&) const = 0;
  virtual std::vector<Pro> proarrows_between(const Ob&, const Ob&, int bound) const = 0;
  virtual std::vector<Cell> cells_in_frame(const Pro& top, const Pro& bottom,
                                           const Arr& left, const Arr& right) const = 0;

  /// Companion and conjoint of an arrow, when the instance provides them.
  virtual std::optional<CompanionPair> companion(const Arr&) const { return {}; }
  virtual std::optional<CompanionPair> conjoint(const Arr&) const { return {}; }
};

enum class Functoriality { lax, colax, pseudo };

/// A (co)lax double functor between two handles. The comparison cells run
/// F m ⊙ F n → F(m ⊙ n) for lax and pseudo functors and the other way for
/// colax ones; pseudo functors have invertible comparisons.
class DoubleFunctor {
 public:
  virtual ~DoubleFunctor() = default;
  virtual const DoubleCategory& dom() const = 0;
  virtual const DoubleCategory& cod() const = 0;
  virtual Functoriality functoriality() const = 0;
  virtual Ob on_ob(const Ob&) const = 0;
  virtual Arr on_arr(const Arr&) const = 0;
  virtual Pro on_pro(const Pro&) const = 0;
  virtual Cell on_cell(const Cell&) const = 0;
  virtual Cell laxator(const Pro& m, const Pro& n) const = 0;
  virtual Cell unitor(const Ob& x) const = 0;
};

class IdentityFunctor final : public DoubleFunctor {
 public:
  explicit IdentityFunctor(const DoubleCategory& d) : d_(d) {}
  const DoubleCategory& dom() const override { return d_; }
  const DoubleCategory& cod() const override { return d_; }
  Functoriality functoriality() const override { return Functoriality::pseudo; }
  Ob on_ob(const Ob& x) const override { return x; }
  Arr on_arr(const Arr& f) const override { return f; }
  Pro on_pro(const Pro& m) const override { return m; }
  Cell on_cell(const Cell& a) const override { return a; }
  Cell laxator(const Pro& m, const Pro& n) const override {
    return d_.id_cell_on_pro(d_.compose_pro(m, n));
  }
  Cell unitor(const Ob& x) const override { return d_.id_cell_on_pro(d_.id_pro(x)); }

 private:
  const DoubleCategory& d_;
};

/// Checks the two binding equations of a companion pair:
/// counit·unit = identity cell on the arrow, and the unit⊙counit pasting
/// equals the identity on the proarrow modulo unitors.
bool companion_equations_hold(const DoubleCategory& d, const CompanionPair& c);
bool conjoint_equations_hold(const DoubleCategory& d, const CompanionPair& c);

// ---------------------------------------------------------------------------
// Span(FinSet)

/// Cell of the double category of spans: a span morphism whose foot
/// components are the cell's side arrows.
struct SpanCell {
  SetSpan top, bottom;
  FinFunction left, right, apex_map;
  bool operator==(const SpanCell&) const = default;
};

class SpanDouble final : public DoubleCategory {
 public:
  std::string name() const override { return "Span"; }

  static Ob ob(const FinSet& s);
  static Arr arr(const FinFunction& f);
  static Pro pro(const SetSpan& s);
  static Cell cell(const SpanCell& c);

  static const FinSet& ob_of(const Ob&);
  static const FinFunction& arr_of(const Arr&);
  static const SetSpan& pro_of(const Pro&);
  static const SpanCell& cell_of(const Cell&);

  Ob arr_src(const Arr& f) const override;
  Ob arr_dst(const Arr& f) const override;
  Ob pro_src(const Pro& m) const override;
  Ob pro_dst(const Pro& m) const override;
  Pro cell_top(const Cell& a) const override;
  Pro cell_bottom(const Cell& a) const override;
  Arr cell_left(const Cell& a) const override;
  Arr cell_right(const Cell& a) const override;

  Arr id_arrow(const Ob& x) const override;
  Arr compose_arrows(const Arr& f, const Arr& g) const override;
  Pro id_pro(const Ob& x) const override;
  Pro compose_pro(const Pro& m, const Pro& n) const override;
  Cell id_cell_on_pro(const Pro& m) const override;
  Cell id_cell_on_arrow(const Arr& f) const override;
  Cell compose_cells_vert(const Cell& a, const Cell& b) const override;
  Cell compose_cells_ext(const Cell& a, const Cell& b) const override;
  Cell associator(const Pro& m, const Pro& n, const Pro& p) const override;
  Cell left_unitor(const Pro& m) const override;
  Cell right_unitor(const Pro& m) const override;
  bool arrow_is_iso(const Arr& f) const override;
  bool cell_is_iso(const Cell& a) const override;
  Arr invert_arrow(const Arr& f) const override;
  Cell invert_cell(const Cell& a) const override;
  std::optional<std::string> check_cell(const Cell& a) const override;
  std::vector<Ob> objects(int bound) const override;
  std::vector<Arr> arrows_between(const Ob& x, const Ob& y) const override;
  std::vector<Pro> proarrows_between(const Ob& x, const Ob& y, int bound) const override;
  std::vector<Cell> cells_in_frame(const Pro& top, const Pro& bottom,
                                   const Arr& left, const Arr& right) const override;
  std::optional<CompanionPair> companion(const Arr& f) const override;
  std::optional<CompanionPair> conjoint(const Arr& f) const override;
};

const SpanDouble& span_double();

/// Composite span via pullback of the adjacent legs; apex labels pair(s,t).
SetSpan span_compose(const SetSpan& m, const SetSpan& n);

// Handle-free cell algebra on SpanCell values (no encodings computed).
SpanCell span_cell_id(const SetSpan& m);
SpanCell span_cell_id_arrow(const FinFunction& f);
SpanCell span_cell_vert(const SpanCell& a, const SpanCell& b);
SpanCell span_cell_ext(const SpanCell& a, const SpanCell& b);
SpanCell span_cell_assoc(const SetSpan& m, const SetSpan& n, const SetSpan& p);
SpanCell span_cell_lunitor(const SetSpan& m);
SpanCell span_cell_runitor(const SetSpan& m);

/// Restriction n(f,g) computed as f_! ⊙ n ⊙ g^* (left associated), returned
/// with its cartesian cell into n.
struct SpanRestriction {
  SetSpan restricted;
  SpanCell cartesian;
};
SpanRestriction restrict_span(const SetSpan& n, const FinFunction& f,
                              const FinFunction& g);

// ---------------------------------------------------------------------------
// Mat(FinSet)

/// Set-valued matrix: a finite set for every (row, column) pair, stored
/// row-major and aligned with src.elements() × dst.elements().
struct MatProarrow {
  FinSet src, dst;
  std::vector<FinSet> entries;  // row-major

  const FinSet& entry(int r, int c) const { return entries[r * dst.size() + c]; }
  bool operator==(const MatProarrow&) const = default;
};

struct MatCell {
  MatProarrow top, bottom;
  FinFunction row_map, col_map;
  std::vector<FinFunction> entry_maps;  // aligned with top entries, row-major

  const FinFunction& entry_map(int r, int c) const {
    return entry_maps[r * top.dst.size() + c];
  }
  bool operator==(const MatCell&) const = default;
};

class MatDouble final : public DoubleCategory {
 public:
  std::string name() const override { return "Mat"; }

  static Ob ob(const FinSet& s);
  static Arr arr(const FinFunction& f);
  static Pro pro(const MatProarrow& m);
  static Cell cell(const MatCell& c);

  static const FinSet& ob_of(const Ob&);
  static const FinFunction& arr_of(const Arr&);
  static const MatProarrow& pro_of(const Pro&);
  static const MatCell& cell_of(const Cell&);

  Ob arr_src(const Arr& f) const override;
  Ob arr_dst(const Arr& f) const override;
  Ob pro_src(const Pro& m) const override;
  Ob pro_dst(const Pro& m) const override;
  Pro cell_top(const Cell& a) const override;
  Pro cell_bottom(const Cell& a) const override;
  Arr cell_left(const Cell& a) const override;
  Arr cell_right(const Cell& a) const override;

  Arr id_arrow(const Ob& x) const override;
  Arr compose_arrows(const Arr& f, const Arr& g) const override;
  Pro id_pro(const Ob& x) const override;
  Pro compose_pro(const Pro& m, const Pro& n) const override;
  Cell id_cell_on_pro(const Pro& m) const override;
  Cell id_cell_on_arrow(const Arr& f) const override;
  Cell compose_cells_vert(const Cell& a, const Cell& b) const override;
  Cell compose_cells_ext(const Cell& a, const Cell& b) const override;
  Cell associator(const Pro& m, const Pro& n, const Pro& p) const override;
  Cell left_unitor(const Pro& m) const override;
  Cell right_unitor(const Pro& m) const override;
  bool arrow_is_iso(const Arr& f) const override;
  bool cell_is_iso(const Cell& a) const override;
  Arr invert_arrow(const Arr& f) const override;
  Cell invert_cell(const Cell& a) const override;
  std::optional<std::string> check_cell(const Cell& a) const override;
  std::vector<Ob> objects(int bound) const override;
  std::vector<Arr> arrows_between(const Ob& x, const Ob& y) const override;
  std::vector<Pro> proarrows_between(const Ob& x, const Ob& y, int bound) const override;
  std::vector<Cell> cells_in_frame(const Pro& top, const Pro& bottom,
                                   const Arr& left, const Arr& right) const override;
  std::optional<CompanionPair> companion(const Arr& f) const override;
  std::optional<CompanionPair> conjoint(const Arr& f) const override;
};

const MatDouble& mat_double();

MatProarrow mat_identity(const FinSet& x);
/// Entries of the composite are tagged unions over the middle index with
/// labels inj(y, tup(m,n)).
MatProarrow mat_compose(const MatProarrow& m, const MatProarrow& n);

/// Span ↔ matrix dictionary: fibers of the apex one way, a tagged apex
/// (labels at(x,y,e)) the other way.
MatProarrow span_to_mat(const SetSpan& m);
SetSpan mat_to_span(const MatProarrow& m);
MatCell span_cell_to_mat(const SpanCell& c);
SpanCell mat_cell_to_span(const MatCell& c);

/// Globular isomorphism matToSpan(spanToMat(m)) → m.
SpanCell span_roundtrip_iso(const SetSpan& m);
/// Globular isomorphism spanToMat(matToSpan(M)) → M.
MatCell mat_roundtrip_iso(const MatProarrow& m);

// ---------------------------------------------------------------------------
// Terminal double category and opposites

class TerminalDouble final : public DoubleCategory {
 public:
  std::string name() const override { return "1"; }
  static Ob the_ob();
  static Arr the_arr();
  static Pro the_pro();
  static Cell the_cell();

  Ob arr_src(const Arr&) const override { return the_ob(); }
  Ob arr_dst(const Arr&) const override { return the_ob(); }
  Ob pro_src(const Pro&) const override { return the_ob(); }
  Ob pro_dst(const Pro&) const override { return the_ob(); }
  Pro cell_top(const Cell&) const override { return the_pro(); }
  Pro cell_bottom(const Cell&) const override { return the_pro(); }
  Arr cell_left(const Cell&) const override { return the_arr(); }
  Arr cell_right(const Cell&) const override { return the_arr(); }
  Arr id_arrow(const Ob&) const override { return the_arr(); }
  Arr compose_arrows(const Arr&, const Arr&) const override { return the_arr(); }
  Pro id_pro(const Ob&) const override { return the_pro(); }
  Pro compose_pro(const Pro&, const Pro&) const override { return the_pro(); }
  Cell id_cell_on_pro(const Pro&) const override { return the_cell(); }
  Cell id_cell_on_arrow(const Arr&) const override { return the_cell(); }
  Cell compose_cells_vert(const Cell&, const Cell&) const override { return the_cell(); }
  Cell compose_cells_ext(const Cell&, const Cell&) const override { return the_cell(); }
  Cell associator(const Pro&, const Pro&, const Pro&) const override { return the_cell(); }
  Cell left_unitor(const Pro&) const override { return the_cell(); }
  Cell right_unitor(const Pro&) const override { return the_cell(); }
  bool arrow_is_iso(const Arr&) const override { return true; }
  bool cell_is_iso(const Cell&) const override { return true; }
  Arr invert_arrow(const Arr&) const override { return the_arr(); }
  Cell invert_cell(const Cell&) const override { return the_cell(); }
  std::optional<std::string> check_cell(const Cell&) const override { return {}; }
  std::vector<Ob> objects(int) const override { return {the_ob()}; }
  std::vector<Arr> arrows_between(const Ob&, const Ob&) const override { return {the_arr()}; }
  std::vector<Pro> proarrows_between(const Ob&, const Ob&, int) const override {
    return {the_pro()};
  }
  std::vector<Cell> cells_in_frame(const Pro&, const Pro&, const Arr&,
                                   const Arr&) const override {
    return {the_cell()};
  }
  std::optional<CompanionPair> companion(const Arr&) const override;
  std::optional<CompanionPair> conjoint(const Arr&) const override;
};

const TerminalDouble& terminal_double();

/// Opposite double category: arrows and cells are reversed vertically,
/// proarrows kept, external order preserved. Handles share the base's
/// payloads and encodings.
class OpDouble final : public DoubleCategory {
 public:
  explicit OpDouble(const DoubleCategory& base) : base_(base) {}
  std::string name() const override { return "op(" + base_.name() + ")"; }
  const DoubleCategory& base() const { return base_; }

  Ob arr_src(const Arr& f) const override { return base_.arr_dst(f); }
  Ob arr_dst(const Arr& f) const override { return base_.arr_src(f); }
  Ob pro_src(const Pro& m) const override { return base_.pro_src(m); }
  Ob pro_dst(const Pro& m) const override { return base_.pro_dst(m); }
  Pro cell_top(const Cell& a) const override { return base_.cell_bottom(a); }
  Pro cell_bottom(const Cell& a) const override { return base_.cell_top(a); }
  Arr cell_left(const Cell& a) const override { return base_.cell_left(a); }
  Arr cell_right(const Cell& a) const override { return base_.cell_right(a); }
  Arr id_arrow(const Ob& x) const override { return base_.id_arrow(x); }
  Arr compose_arrows(const Arr& f, const Arr& g) const override {
    return base_.compose_arrows(g, f);
  }
  Pro id_pro(const Ob& x) const override { return base_.id_pro(x); }
  Pro compose_pro(const Pro& m, const Pro& n) const override {
    return base_.compose_pro(m, n);
  }
  Cell id_cell_on_pro(const Pro& m) const override { return base_.id_cell_on_pro(m); }
  Cell id_cell_on_arrow(const Arr& f) const override { return base_.id_cell_on_arrow(f); }
  Cell compose_cells_vert(const Cell& a, const Cell& b) const override {
    return base_.compose_cells_vert(b, a);
  }
  Cell compose_cells_ext(const Cell& a, const Cell& b) const override {
    return base_.compose_cells_ext(a, b);
  }
  Cell associator(const Pro& m, const Pro& n, const Pro& p) const override {
    return base_.invert_cell(base_.associator(m, n, p));
  }
  Cell left_unitor(const Pro& m) const override {
    return base_.invert_cell(base_.left_unitor(m));
  }
  Cell right_unitor(const Pro& m) const override {
    return base_.invert_cell(base_.right_unitor(m));
  }
  bool arrow_is_iso(const Arr& f) const override { return base_.arrow_is_iso(f); }
  bool cell_is_iso(const Cell& a) const override { return base_.cell_is_iso(a); }
  Arr invert_arrow(const Arr& f) const override { return base_.invert_arrow(f); }
  Cell invert_cell(const Cell& a) const override { return base_.invert_cell(a); }
  std::optional<std::string> check_cell(const Cell& a) const override {
    return base_.check_cell(a);
  }
  std::vector<Ob> objects(int bound) const override { return base_.objects(bound); }
  std::vector<Arr> arrows_between(const Ob& x, const Ob& y) const override {
    return base_.arrows_between(y, x);
  }
  std::vector<Pro> proarrows_between(const Ob& x, const Ob& y, int bound) const override {
    return base_.proarrows_between(x, y, bound);
  }
  std::vector<Cell> cells_in_frame(const Pro& top, const Pro& bottom, const Arr& left,
                                   const Arr& right) const override {
    return base_.cells_in_frame(bottom, top, left, right);
  }
  std::optional<CompanionPair> companion(const Arr& f) const override;
  std::optional<CompanionPair> conjoint(const Arr& f) const override;

 private:
  const DoubleCategory& base_;
};

/// Pointwise span-to-matrix direction of the equivalence Mat ≃ Span.
class SpanToMatFunctor final : public DoubleFunctor {
 public:
  const DoubleCategory& dom() const override { return span_double(); }
  const DoubleCategory& cod() const override { return mat_double(); }
  Functoriality functoriality() const override { return Functoriality::pseudo; }
  Ob on_ob(const Ob& x) const override { return MatDouble::ob(SpanDouble::ob_of(x)); }
  Arr on_arr(const Arr& f) const override { return MatDouble::arr(SpanDouble::arr_of(f)); }
  Pro on_pro(const Pro& m) const override {
    return MatDouble::pro(span_to_mat(SpanDouble::pro_of(m)));
  }
  Cell on_cell(const Cell& a) const override {
    return MatDouble::cell(span_cell_to_mat(SpanDouble::cell_of(a)));
  }
  Cell laxator(const Pro& m, const Pro& n) const override;
  Cell unitor(const Ob& x) const override;
};

class MatToSpanFunctor final : public DoubleFunctor {
 public:
  const DoubleCategory& dom() const override { return mat_double(); }
  const DoubleCategory& cod() const override { return span_double(); }
  Functoriality functoriality() const override { return Functoriality::pseudo; }
  Ob on_ob(const Ob& x) const override { return SpanDouble::ob(MatDouble::ob_of(x)); }
  Arr on_arr(const Arr& f) const override { return SpanDouble::arr(MatDouble::arr_of(f)); }
  Pro on_pro(const Pro& m) const override {
    return SpanDouble::pro(mat_to_span(MatDouble::pro_of(m)));
  }
  Cell on_cell(const Cell& a) const override {
    return SpanDouble::cell(mat_cell_to_span(MatDouble::cell_of(a)));
  }
  Cell laxator(const Pro& m, const Pro& n) const override;
  Cell unitor(const Ob& x) const override;
};

/// Extension cell in Span along (f, g): relabel the legs; the cell has the
/// identity apex map and is opcartesian.
struct SpanExtension {
  SetSpan extended;
  SpanCell opcartesian;
};
SpanExtension extend_span(const SetSpan& m, const FinFunction& f, const FinFunction& g);

}  // namespace dcat
