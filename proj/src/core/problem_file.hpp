#pragma once

// Chart files: one "key = value" per line, '#' comments, values may span
// lines while a bracket is open.
//
//   chart (t, q, p, z1, z2)
//   kind = precosymplectic
//   eta = dt
//   omega = dq^dp
//   P = { z1: 0, z2: 0 }      # correction covector c^A, P^A = dz^A + c^A
//   reeb = dt + 3*dz1
//   grid = lattice(-1..1 : 3)

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aps.hpp"
#include "grid.hpp"
#include "structures.hpp"
#include "thicken.hpp"

namespace coiso {

struct ProblemFile {
  ChartPtr chart;
  std::optional<GeometrySpec> spec;  // absent without a kind line
  std::optional<ProjectorField> projector;
  std::vector<NamedField> reeb;
  std::optional<std::vector<VectorField>> frame;
  std::optional<SampleGrid> grid;
  std::optional<int> ell;
  Rational offsection_box = 1;
  int offsection_steps = 3;
  std::optional<std::vector<int>> fiber;
  std::optional<int> fiber_filter;

  // Grid from the file, or lattice(-1..1 : 3).
  SampleGrid grid_or_default() const;
  const GeometrySpec& require_spec() const;
  // Declared fiber coordinates, or every coordinate whose name starts with "mu".
  std::vector<int> fiber_or_default() const;
};

// Errors carry "line N" (and a column for syntax errors) in their message.
ProblemFile parse_problem(std::string_view text);

// Canonical text of a structure; parse_problem reads it back.
std::string write_problem(const GeometrySpec& spec, const std::string& grid_line,
                          const std::vector<std::string>& comments = {});

// The grid line for a thickened chart: lattices keep their ranges (fiber
// axes at 0), other grids are written out point by point.
std::string on_section_grid_line(const SampleGrid& base_grid, const ChartPtr& total);

// "1/10", "0.1", "3", "-2.5e-1" -> exact rational.
Rational parse_decimal(std::string_view text);

}  // namespace coiso
