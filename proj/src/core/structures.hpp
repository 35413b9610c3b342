#pragma once

// The eight geometry kinds as data: validation on a grid, characteristic
// distributions, Frobenius checks and Reeb systems.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exterior.hpp"
#include "grid.hpp"
#include "pointwise.hpp"

namespace coiso {

struct GeometrySpec {
  Family family = Family::Symplectic;
  bool nondegenerate = false;  // "contact" rather than "precontact"
  ChartPtr chart;
  std::optional<Form> xi;     // cocontact only
  std::vector<Form> etas;     // cosymplectic, contact, cocontact, k-cosymplectic, k-contact
  std::vector<Form> omegas;   // symplectic kinds; the single top form for multisymplectic

  int k() const;
};

// "presymplectic", "k-precontact", "multisymplectic", ...
std::string kind_name(Family f, bool nondegenerate);
std::string kind_name(const GeometrySpec& s);
// Accepts the names above with or without hyphens.
std::optional<std::pair<Family, bool>> parse_kind(std::string name);

// Degrees and counts per kind; throws BadDegree or InvalidInput.
void check_spec(const GeometrySpec& s);

bool has_reeb(Family f);

// Names of the defining forms, e.g. {"eta", "omega"} or {"omega1", "omega2"}.
std::vector<std::pair<std::string, const Form*>> named_forms(const GeometrySpec& s);

// Evaluations at one point, with d(eta) precomputed for the contact kinds.
class PreparedSpec {
 public:
  explicit PreparedSpec(GeometrySpec spec);

  const GeometrySpec& spec() const { return spec_; }
  const std::vector<Form>& d_etas() const { return d_etas_; }

  PointStructure at(std::span<const Rational> x) const;
  Subspace characteristic(std::span<const Rational> x) const;
  Subspace characteristic(const PointStructure& ps) const;

 private:
  GeometrySpec spec_;
  std::vector<Form> d_etas_;
};

Subspace characteristic_distribution(const GeometrySpec& spec, const Point& pt);

struct PointProfile {
  std::size_t index;
  std::vector<std::pair<std::string, int>> ranks;  // flat-map rank per form, plus "V"
  int dim_v;
  std::vector<std::pair<std::string, bool>> axioms;
};

struct Verdict {
  std::string name;
  bool certified;  // exact symbolic check rather than a grid sample
  bool ok;
  std::vector<std::size_t> failing_points;
  std::string detail;
};

struct StructureReport {
  std::vector<Verdict> closedness;
  std::vector<PointProfile> profile;
  bool constant_rank = true;
  std::vector<std::size_t> degenerate_points;
  std::vector<Verdict> axioms;

  bool ok() const;
};

StructureReport validate(const GeometrySpec& spec, const SampleGrid& grid);

// Per-point standing assumptions (volume conditions, and V = 0 for the
// nondegenerate kinds) from an already evaluated structure.
std::vector<std::pair<std::string, bool>> point_axioms(const PreparedSpec& ps, std::span<const Rational> x,
                                                       const Subspace& v);

// Polynomial frame of the characteristic distribution from a fraction-free
// symbolic elimination; nullopt when the elimination gets out of hand.
std::optional<std::vector<VectorField>> characteristic_frame(const GeometrySpec& spec);

// Polynomial null space of a matrix of Scalars, by fraction-free elimination.
std::optional<std::vector<VectorField>> symbolic_nullspace(std::vector<std::vector<Scalar>> rows,
                                                           const ChartPtr& chart);

struct InvolutivityResult {
  bool involutive = true;
  std::size_t point_index = 0;
  int i = -1;
  int j = -1;
  Vec bracket;  // value of [X_i, X_j] outside the span
};

// Throws DependentFrame when the frame is dependent at a grid point.
InvolutivityResult involutivity_check(const std::vector<VectorField>& frame, const SampleGrid& grid);

struct ReebFamily {
  std::string label;  // "R", "R_xi", "R_eta", "R1", ...
  Vec particular;     // free variables set to 0
  std::vector<Vec> kernel;
};

// Throws NoReebAtPoint when a system is inconsistent.
std::vector<ReebFamily> reeb_solve(const GeometrySpec& spec, const Point& pt);
std::vector<ReebFamily> reeb_solve(const PreparedSpec& ps, std::span<const Rational> x);

}  // namespace coiso
