#pragma once

// Finite point sets standing in for "every point of M".

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scalar.hpp"

namespace coiso {

struct AxisRange {
  int axis;
  Rational lo;
  Rational hi;
  int steps;
};

struct SampleGrid {
  enum class Provenance { Explicit, Lattice, Random };

  Provenance provenance = Provenance::Explicit;
  std::string description;  // canonical text, parseable by parse_grid
  std::vector<Point> points;
  std::vector<AxisRange> ranges;  // lattice only
};

SampleGrid explicit_grid(const ChartPtr& chart, std::vector<std::vector<Rational>> coords);

// Axes without a range are held at 0.
SampleGrid lattice_grid(const ChartPtr& chart, const std::vector<AxisRange>& ranges);
SampleGrid uniform_lattice(const ChartPtr& chart, const Rational& lo, const Rational& hi, int steps);

// Coordinates k * box / 64 with k uniform in [-64, 64], drawn from mt19937_64.
SampleGrid random_grid(const ChartPtr& chart, std::uint64_t seed, int count, const Rational& box);

// lattice(-1..1 : 3) | lattice(t:-1..1:3, q:0..1:2) | random(seed=7, count=50, box=1)
// | points((0, 1, 1/2), (1, 0, 0))
SampleGrid parse_grid(std::string_view text, const ChartPtr& chart);

// Points of `base` with the trailing fiber coordinates of `total` set to 0.
SampleGrid on_section(const SampleGrid& base, const ChartPtr& total);
// Points of `base` times a lattice of fiber values in [-box, box].
SampleGrid off_section(const SampleGrid& base, const ChartPtr& total, const Rational& box, int steps);

std::string point_to_string(const Point& p);

}  // namespace coiso
