#pragma once

// Almost-product structures in foliated normal form:
//   P = (dz^A - P^A_a dx^a) (x) d/dz^A,   H_a = d/dx^a + P^A_a d/dz^A.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exterior.hpp"
#include "grid.hpp"

namespace coiso {

class ProjectorField {
 public:
  // corrections[A][a] = P^A_a, A over `vertical`, a over the complementary
  // coordinates in chart order.
  ProjectorField(ChartPtr chart, std::vector<int> vertical, std::vector<std::vector<Scalar>> corrections);

  static ProjectorField trivial(const ChartPtr& chart, std::vector<int> vertical);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<int>& vertical() const { return vertical_; }
  const std::vector<int>& horizontal() const { return horizontal_; }
  const Scalar& correction(std::size_t A, std::size_t a) const { return corr_[A][a]; }
  const std::vector<std::vector<Scalar>>& corrections() const { return corr_; }

  const TensorField11& tensor() const { return P_; }
  // H_a
  std::vector<VectorField> horizontal_frame() const;
  std::vector<VectorField> vertical_frame() const;
  // P^A = dz^A - P^A_a dx^a
  Form vertical_coframe(std::size_t A) const;

  bool is_constant() const;

 private:
  ChartPtr chart_;
  std::vector<int> vertical_;
  std::vector<int> horizontal_;
  std::vector<std::vector<Scalar>> corr_;
  TensorField11 P_;
};

// Vertical fields must be coordinate fields; the x-block of the horizontal
// frame must be a constant invertible matrix. Complementarity is checked at
// every grid point (NotComplementary).
ProjectorField projector_from_frames(const std::vector<VectorField>& vertical,
                                     const std::vector<VectorField>& horizontal, const SampleGrid& grid);

// Components in the coframe {dx^a} u {P^A}. Slot s < h is dx^{horizontal[s]},
// slot h + B is P^B. Stored for s < t; output index is a chart coordinate.
struct NijenhuisTensor {
  ChartPtr chart;
  std::vector<int> vertical;
  std::vector<int> horizontal;
  std::map<std::pair<int, int>, std::vector<Scalar>> components;

  bool is_zero() const;
  // C^A_{ab} = H_a(P^A_b) - H_b(P^A_a), antisymmetric in (a, b); a and b are
  // chart coordinates.
  Scalar display_coefficient(int A, int a, int b) const;
  std::string slot_name(int s) const;
};

// N(X,Y) = [PX,PY] - P([PX,Y] + [X,PY] - P[X,Y]) on the adapted frame.
NijenhuisTensor nijenhuis(const ProjectorField& P);

enum class SplitKind { ParallelP, PerpP, ParallelR, PerpR };

Form split_form(const Form& a, const ProjectorField& P, SplitKind which);

// Replaces every dx^i by the 1-form sum_j T_ij dx^j, i.e. a(T., ..., T.).
Form compose_with(const Form& a, const TensorField11& T);

struct ProjectorReport {
  bool idempotent = true;
  std::optional<std::pair<int, int>> offending_entry;
  bool image_ok = true;  // Im P = vertical span, ker P of the complementary dimension
  std::vector<std::size_t> image_failures;
  bool horizontal_involutive = true;
  std::optional<std::size_t> involutivity_witness;
};

// Checks an arbitrary (1,1)-tensor against the projector identities with the
// given vertical coordinates; the horizontal frame is taken from `P`.
ProjectorReport verify_projector(const TensorField11& T, const std::vector<int>& vertical,
                                 const std::vector<VectorField>& horizontal_frame, const SampleGrid& grid);
ProjectorReport verify_projector(const ProjectorField& P, const SampleGrid& grid);

}  // namespace coiso
