#pragma once

// Thickened charts, the tautological form and the thickened structures of
// all eight kinds, with their pointwise verification.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aps.hpp"
#include "grid.hpp"
#include "structures.hpp"

namespace coiso {

struct ThickenedChart {
  ChartPtr base;
  ChartPtr total;  // base coordinates followed by one mu per label
  std::vector<int> vertical;
  int label_degree = 1;
  // Strictly increasing tuples of base coordinate indices; a vertical index
  // stands for the covector P^A, a horizontal one for dx^a.
  std::vector<IndexTuple> labels;

  int base_dim() const { return base->dim(); }
  int fiber_dim() const { return static_cast<int>(labels.size()); }
  std::vector<int> fiber_indices() const;
  std::string label_name(std::size_t i) const;  // "P^z1", "dx1^P^z"
  // tau: one image per base coordinate, on the total chart.
  std::vector<Scalar> projection() const;
  // Zero section: one image per total coordinate, on the base chart.
  std::vector<Scalar> zero_section() const;
};

// Tuples of `degree` coframe symbols with at least one vertical entry (and
// containing `required`, when given), lexicographic.
std::vector<IndexTuple> transversal_coframe(const ProjectorField& P, int degree,
                                            std::optional<int> required = std::nullopt);

ThickenedChart make_thickened_chart(const ProjectorField& P, int degree, std::optional<int> required = std::nullopt);

Form tautological_form(const ThickenedChart& tc, const ProjectorField& P);

struct ThickeningResult {
  GeometrySpec spec_in;
  ThickenedChart chart;
  Form theta;
  GeometrySpec spec_out;
};

// Throws VerticalMismatch if Im P differs from the characteristic
// distribution at some grid point.
ThickeningResult thicken(const GeometrySpec& spec, const ProjectorField& P, const SampleGrid& grid,
                         std::optional<int> fiber_filter = std::nullopt);

// 1 for the classical kinds, k for the k-kinds, max(1, deg - 2) for a
// multisymplectic form of degree deg.
int default_ell(const GeometrySpec& spec);

struct NamedField {
  std::string label;
  VectorField field;
};

struct ThickeningReport {
  std::vector<Verdict> closedness;
  Verdict zero_section{"zero-section pullback reproduces the input", true, true, {}, ""};
  Verdict on_section{"nondegenerate on the zero section", false, true, {}, ""};
  Verdict off_section{"nondegenerate off the zero section", false, true, {}, ""};
  bool off_section_required = false;
  int ell = 1;
  Verdict coisotropic{"zero section is coisotropic", false, true, {}, ""};
  std::vector<Vec> witnesses;  // one per failing coisotropy point
  std::optional<Verdict> coisotropic_top_level;  // multisymplectic, ell = deg - 1
  // Thickened Reeb fields at the on-section points.
  std::vector<std::vector<ReebFamily>> reeb_on_section;
  std::optional<Verdict> reeb_extension;

  bool ok() const;
};

ThickeningReport verify_thickening(const ThickeningResult& res, const SampleGrid& on_section_grid,
                                   const SampleGrid& off_section_grid, bool nijenhuis_zero,
                                   const std::vector<NamedField>& user_reeb = {},
                                   std::optional<int> ell_override = std::nullopt);

// The P(R) = 0 projector: keeps `base` except at a horizontal coordinate a0
// where R^{a0} is a nonzero constant, where P^A_{a0} is solved for.
ProjectorField projector_for_reeb(const ProjectorField& base, const VectorField& R);

}  // namespace coiso
