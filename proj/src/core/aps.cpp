#include "aps.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"
#include "parallel.hpp"
#include "structures.hpp"

namespace coiso {

ProjectorField::ProjectorField(ChartPtr chart, std::vector<int> vertical,
                               std::vector<std::vector<Scalar>> corrections)
    : chart_(std::move(chart)), P_(TensorField11::zero(chart_)) {
  const int n = chart_->dim();
  if (vertical.size() != corrections.size()) {
    fail(ErrorCode::DimensionMismatch, "one correction row per vertical direction");
  }
  // Sort the vertical directions, carrying their rows along.
  std::vector<std::size_t> order(vertical.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vertical[a] < vertical[b]; });
  for (std::size_t i : order) {
    int v = vertical[i];
    if (v < 0 || v >= n) fail(ErrorCode::IndexOutOfRange, "vertical index out of range");
    if (!vertical_.empty() && vertical_.back() == v) {
      fail(ErrorCode::InvalidInput, "vertical direction " + chart_->names[v] + " listed twice");
    }
    vertical_.push_back(v);
    corr_.push_back(std::move(corrections[i]));
  }
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(vertical_.begin(), vertical_.end(), i)) horizontal_.push_back(i);
  }
  for (std::size_t A = 0; A < vertical_.size(); ++A) {
    if (corr_[A].size() != horizontal_.size()) {
      fail(ErrorCode::DimensionMismatch, "correction row needs one entry per horizontal coordinate");
    }
    P_.m[vertical_[A]][vertical_[A]] = Scalar::constant(chart_, 1);
    for (std::size_t a = 0; a < horizontal_.size(); ++a) {
      require_same_chart(chart_, corr_[A][a].chart(), "projector coefficient");
      P_.m[vertical_[A]][horizontal_[a]] = -corr_[A][a];
    }
  }
}

ProjectorField ProjectorField::trivial(const ChartPtr& chart, std::vector<int> vertical) {
  const std::size_t h = chart->dim() - vertical.size();
  std::vector<std::vector<Scalar>> corr(vertical.size(), std::vector<Scalar>(h, Scalar(chart)));
  return ProjectorField(chart, std::move(vertical), std::move(corr));
}

std::vector<VectorField> ProjectorField::horizontal_frame() const {
  std::vector<VectorField> out;
  for (std::size_t a = 0; a < horizontal_.size(); ++a) {
    VectorField H = VectorField::coordinate(chart_, horizontal_[a]);
    for (std::size_t A = 0; A < vertical_.size(); ++A) H.components[vertical_[A]] = corr_[A][a];
    out.push_back(std::move(H));
  }
  return out;
}

std::vector<VectorField> ProjectorField::vertical_frame() const {
  std::vector<VectorField> out;
  for (int v : vertical_) out.push_back(VectorField::coordinate(chart_, v));
  return out;
}

Form ProjectorField::vertical_coframe(std::size_t A) const {
  Form f = Form::differential(chart_, vertical_.at(A));
  for (std::size_t a = 0; a < horizontal_.size(); ++a) f.add({horizontal_[a]}, -corr_[A][a]);
  return f;
}

bool ProjectorField::is_constant() const {
  for (const auto& row : corr_) {
    for (const auto& c : row) {
      if (!c.constant_value()) return false;
    }
  }
  return true;
}

namespace {

std::optional<int> coordinate_field_index(const VectorField& X) {
  std::optional<int> idx;
  for (int i = 0; i < X.chart->dim(); ++i) {
    const Scalar& c = X.components[i];
    if (c.is_zero()) continue;
    auto v = c.constant_value();
    if (!v || *v != 1 || idx) return std::nullopt;
    idx = i;
  }
  return idx;
}

}  // namespace

ProjectorField projector_from_frames(const std::vector<VectorField>& vertical,
                                     const std::vector<VectorField>& horizontal, const SampleGrid& grid) {
  if (vertical.empty()) fail(ErrorCode::InvalidInput, "projector needs at least one vertical field");
  const ChartPtr& chart = vertical.front().chart;
  const int n = chart->dim();
  std::vector<int> vidx;
  for (const auto& V : vertical) {
    require_same_chart(chart, V.chart, "vertical frame");
    auto i = coordinate_field_index(V);
    if (!i) fail(ErrorCode::NotFoliatedForm, "vertical field " + V.to_string() + " is not a coordinate field");
    vidx.push_back(*i);
  }
  std::vector<int> sorted = vidx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::NotComplementary, "vertical frame repeats a direction");
  }
  if (static_cast<int>(horizontal.size() + vertical.size()) != n) {
    fail(ErrorCode::NotComplementary, "frames have " + std::to_string(horizontal.size() + vertical.size()) +
                                          " fields in dimension " + std::to_string(n));
  }
  std::vector<int> hidx;
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(sorted.begin(), sorted.end(), i)) hidx.push_back(i);
  }
  const int h = static_cast<int>(hidx.size());
  for (const auto& H : horizontal) require_same_chart(chart, H.chart, "horizontal frame");

  for (const auto& pt : grid.points) {
    Matrix m(0, n);
    for (const auto& V : vertical) m.append_row(V.evaluate(pt));
    for (const auto& H : horizontal) m.append_row(H.evaluate(pt));
    if (rank(m) != n) fail(ErrorCode::NotComplementary, "frames are not complementary at " + point_to_string(pt));
  }

  // x-block M[a][b] = dx^a(H_b), required constant.
  Matrix aug(h, 2 * h);
  for (int a = 0; a < h; ++a) {
    for (int b = 0; b < h; ++b) {
      auto c = horizontal[b].components[hidx[a]].constant_value();
      if (!c) fail(ErrorCode::NotFoliatedForm, "horizontal frame has a non-constant x-block");
      aug(a, b) = *c;
    }
    aug(a, h + a) = 1;
  }
  Echelon e = rref(aug);
  if (static_cast<int>(e.pivots.size()) < h || e.pivots[h - 1] >= h) {
    fail(ErrorCode::NotComplementary, "horizontal frame is not transverse to the vertical directions");
  }
  std::vector<std::vector<Scalar>> corr(vidx.size(), std::vector<Scalar>(h, Scalar(chart)));
  for (int c = 0; c < h; ++c) {
    // H'_c = sum_b H_b G[b][c] with G = M^{-1}.
    for (std::size_t A = 0; A < sorted.size(); ++A) {
      Scalar s(chart);
      for (int b = 0; b < h; ++b) {
        const Rational& g = e.reduced(b, h + c);
        if (g != 0) s += g * horizontal[b].components[sorted[A]];
      }
      corr[A][c] = std::move(s);
    }
  }
  return ProjectorField(chart, sorted, std::move(corr));
}

// ---------------------------------------------------------------------------

bool NijenhuisTensor::is_zero() const { return components.empty(); }

Scalar NijenhuisTensor::display_coefficient(int A, int a, int b) const {
  auto slot = [&](int coord) {
    auto it = std::find(horizontal.begin(), horizontal.end(), coord);
    if (it == horizontal.end()) fail(ErrorCode::IndexOutOfRange, "not a horizontal coordinate");
    return static_cast<int>(it - horizontal.begin());
  };
  if (std::find(vertical.begin(), vertical.end(), A) == vertical.end()) {
    fail(ErrorCode::IndexOutOfRange, "not a vertical coordinate");
  }
  int sa = slot(a);
  int sb = slot(b);
  if (sa == sb) return Scalar(chart);
  bool flip = sa > sb;
  auto it = components.find({std::min(sa, sb), std::max(sa, sb)});
  if (it == components.end()) return Scalar(chart);
  return flip ? -it->second[A] : it->second[A];
}

std::string NijenhuisTensor::slot_name(int s) const {
  const int h = static_cast<int>(horizontal.size());
  if (s < h) return "d" + chart->names[horizontal[s]];
  return "P^" + chart->names[vertical[s - h]];
}

NijenhuisTensor nijenhuis(const ProjectorField& P) {
  const ChartPtr& chart = P.chart();
  NijenhuisTensor N{chart, P.vertical(), P.horizontal(), {}};
  std::vector<VectorField> frame = P.horizontal_frame();
  for (auto& V : P.vertical_frame()) frame.push_back(std::move(V));
  const TensorField11& T = P.tensor();
  std::vector<VectorField> images;
  for (const auto& X : frame) images.push_back(T.apply(X));
  for (std::size_t s = 0; s < frame.size(); ++s) {
    for (std::size_t t = s + 1; t < frame.size(); ++t) {
      const VectorField& X = frame[s];
      const VectorField& Y = frame[t];
      const VectorField& PX = images[s];
      const VectorField& PY = images[t];
      VectorField inner = lie_bracket(PX, Y) + lie_bracket(X, PY) - T.apply(lie_bracket(X, Y));
      VectorField value = lie_bracket(PX, PY) - T.apply(inner);
      if (!value.is_zero()) N.components.emplace(std::make_pair(int(s), int(t)), value.components);
    }
  }
  return N;
}

Form compose_with(const Form& a, const TensorField11& T) {
  require_same_chart(a.chart(), T.chart, "form composed with tensor");
  const ChartPtr& chart = a.chart();
  const int n = chart->dim();
  std::vector<Form> rows;
  for (int i = 0; i < n; ++i) {
    Form r(chart, 1);
    for (int j = 0; j < n; ++j) r.add({j}, T.m[i][j]);
    rows.push_back(std::move(r));
  }
  Form out(chart, a.degree());
  for (const auto& [idx, c] : a.coeffs()) {
    Form term = Form::from_scalar(c);
    for (int i : idx) term = wedge(term, rows[i]);
    if (!term.is_zero()) out += term;
  }
  return out;
}

Form split_form(const Form& a, const ProjectorField& P, SplitKind which) {
  switch (which) {
    case SplitKind::ParallelP:
      return compose_with(a, P.tensor());
    case SplitKind::PerpP:
      return a - compose_with(a, P.tensor());
    case SplitKind::ParallelR:
      return compose_with(a, TensorField11::identity(P.chart()) - P.tensor());
    case SplitKind::PerpR:
      return a - compose_with(a, TensorField11::identity(P.chart()) - P.tensor());
  }
  fail(ErrorCode::InvalidInput, "unknown split");
}

ProjectorReport verify_projector(const TensorField11& T, const std::vector<int>& vertical,
                                 const std::vector<VectorField>& horizontal_frame, const SampleGrid& grid) {
  ProjectorReport r;
  const int n = T.dim();
  TensorField11 sq = T * T;
  for (int i = 0; i < n && r.idempotent; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(sq.m[i][j] == T.m[i][j])) {
        r.idempotent = false;
        r.offending_entry = std::make_pair(i, j);
        break;
      }
    }
  }
  std::vector<bool> is_vertical(n, false);
  for (int v : vertical) is_vertical.at(v) = true;
  auto ok = parallel_map(grid.points.size(), [&](std::size_t p) {
    Matrix m = T.evaluate(grid.points[p]);
    for (int i = 0; i < n; ++i) {
      if (is_vertical[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (m(i, j) != 0) return false;
      }
    }
    return rank(m) == static_cast<int>(vertical.size());
  });
  for (std::size_t p = 0; p < ok.size(); ++p) {
    if (!ok[p]) {
      r.image_ok = false;
      r.image_failures.push_back(p);
    }
  }
  try {
    InvolutivityResult inv = involutivity_check(horizontal_frame, grid);
    r.horizontal_involutive = inv.involutive;
    if (!inv.involutive) r.involutivity_witness = inv.point_index;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DependentFrame) throw;
    r.horizontal_involutive = false;
    r.image_ok = false;
  }
  return r;
}

ProjectorReport verify_projector(const ProjectorField& P, const SampleGrid& grid) {
  return verify_projector(P.tensor(), P.vertical(), P.horizontal_frame(), grid);
}

}  // namespace coiso
