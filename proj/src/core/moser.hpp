#pragma once

// Relative Poincare lemma by fiber scaling, Moser vector fields and a
// float-layer verifier of psi_1^* omega_2 = omega_1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exterior.hpp"
#include "grid.hpp"
#include "structures.hpp"

namespace coiso {

// K(term) = (1/m) i_Delta(term), Delta = sum_fiber mu d/dmu, m the joint fiber
// degree (mu exponents plus dmu factors). Terms without dmu map to 0.
Form homotopy_operator(const Form& omega, const std::vector<int>& fiber);

// Restriction to mu = 0 with every dmu term dropped.
Form base_part(const Form& omega, const std::vector<int>& fiber);

struct HomotopyPrimitive {
  Form theta;
  Form source;
};

// Throws NotClosed or NotVanishingOnSection.
HomotopyPrimitive fiber_homotopy_primitive(const Form& omega, const std::vector<int>& fiber);

struct MoserRun {
  Form omega1;
  Form omega2;
  std::vector<int> fiber;
  HomotopyPrimitive primitive;  // of omega2 - omega1
  std::vector<Point> samples;
  int steps = 1000;
  double tolerance = 1e-6;
  double box = 0.1;  // sample box; sets the finite-difference step
};

MoserRun make_moser_run(Form omega1, Form omega2, std::vector<int> fiber, std::vector<Point> samples, int steps,
                        double tolerance, double box);

// Exact solution of i_X omega_t = -theta, omega_t = omega1 + t (omega2 - omega1).
// Throws DegenerateAtPoint when omega_t has a kernel at pt.
Vec moser_vector_field_at(const MoserRun& run, const Point& pt, const Rational& t);

// Contact variant: X in ker eta_t with i_X d eta_t = eta'(R_t) eta_t - eta'.
Vec contact_moser_vector_field_at(const Form& eta1, const Form& eta2, const Point& pt, const Rational& t);

struct MoserSample {
  std::vector<double> point;
  double max_error = 0.0;
  bool pass = false;
  std::optional<double> aborted_at_t;
  std::string diagnostic;
};

struct MoserReport {
  std::vector<MoserSample> samples;
  double max_error = 0.0;
  bool pass = true;
};

MoserReport moser_flow_verify(const MoserRun& run);

struct ProportionalityReport {
  std::vector<bool> proportional;  // per grid point, all Reeb pairs
  std::optional<std::size_t> witness;
  std::string witness_label;
  bool all_proportional = true;
};

// Rank-1 test on the particular Reeb solutions, family by family.
ProportionalityReport reeb_proportionality_check(const GeometrySpec& a, const GeometrySpec& b,
                                                 const SampleGrid& grid);

}  // namespace coiso
