#include "grid.hpp"

#include <cctype>
#include <random>

#include "errors.hpp"

namespace coiso {

namespace {

std::string range_text(const Rational& lo, const Rational& hi, int steps) {
  return to_string(lo) + ".." + to_string(hi) + ":" + std::to_string(steps);
}

std::vector<Rational> axis_values(const Rational& lo, const Rational& hi, int steps) {
  if (steps < 1) fail(ErrorCode::InvalidInput, "lattice needs at least one step per axis");
  if (hi < lo) fail(ErrorCode::InvalidInput, "lattice range is reversed");
  std::vector<Rational> v;
  if (steps == 1) {
    v.push_back(lo);
    return v;
  }
  Rational width = (hi - lo) / (steps - 1);
  for (int i = 0; i < steps; ++i) v.push_back(Rational(lo + width * i));
  return v;
}

std::vector<std::vector<Rational>> cartesian(const std::vector<std::vector<Rational>>& axes) {
  std::vector<std::vector<Rational>> out{{}};
  for (const auto& values : axes) {
    std::vector<std::vector<Rational>> next;
    next.reserve(out.size() * values.size());
    for (const auto& prefix : out) {
      for (const auto& v : values) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

SampleGrid explicit_grid(const ChartPtr& chart, std::vector<std::vector<Rational>> coords) {
  SampleGrid g;
  g.provenance = SampleGrid::Provenance::Explicit;
  g.description = "points(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    Point p(chart, std::move(coords[i]));
    if (i) g.description += ", ";
    g.description += point_to_string(p);
    g.points.push_back(std::move(p));
  }
  g.description += ")";
  return g;
}

SampleGrid lattice_grid(const ChartPtr& chart, const std::vector<AxisRange>& ranges) {
  std::vector<std::vector<Rational>> axes(chart->dim(), std::vector<Rational>{Rational(0)});
  std::vector<bool> seen(chart->dim(), false);
  SampleGrid g;
  g.provenance = SampleGrid::Provenance::Lattice;
  g.description = "lattice(";
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto& r = ranges[i];
    if (r.axis < 0 || r.axis >= chart->dim()) fail(ErrorCode::IndexOutOfRange, "lattice axis");
    if (seen[r.axis]) fail(ErrorCode::InvalidInput, "lattice axis " + chart->names[r.axis] + " given twice");
    seen[r.axis] = true;
    axes[r.axis] = axis_values(r.lo, r.hi, r.steps);
    if (i) g.description += ", ";
    g.description += chart->names[r.axis] + ":" + range_text(r.lo, r.hi, r.steps);
  }
  g.description += ")";
  g.ranges = ranges;
  for (auto& c : cartesian(axes)) g.points.emplace_back(chart, std::move(c));
  return g;
}

SampleGrid uniform_lattice(const ChartPtr& chart, const Rational& lo, const Rational& hi, int steps) {
  std::vector<AxisRange> ranges;
  for (int i = 0; i < chart->dim(); ++i) ranges.push_back({i, lo, hi, steps});
  SampleGrid g = lattice_grid(chart, ranges);
  g.description = "lattice(" + range_text(lo, hi, steps) + ")";
  return g;
}

SampleGrid random_grid(const ChartPtr& chart, std::uint64_t seed, int count, const Rational& box) {
  if (count < 1) fail(ErrorCode::InvalidInput, "random grid needs count >= 1");
  if (box <= 0) fail(ErrorCode::InvalidInput, "random grid needs box > 0");
  std::mt19937_64 rng(seed);
  SampleGrid g;
  g.provenance = SampleGrid::Provenance::Random;
  g.description = "random(seed=" + std::to_string(seed) + ", count=" + std::to_string(count) +
                  ", box=" + to_string(box) + ")";
  for (int i = 0; i < count; ++i) {
    std::vector<Rational> c;
    for (int j = 0; j < chart->dim(); ++j) {
      long k = static_cast<long>(rng() % 129) - 64;
      c.push_back(Rational(box * k / 64));
    }
    g.points.emplace_back(chart, std::move(c));
  }
  return g;
}

namespace {

class GridLexer {
 public:
  explicit GridLexer(std::string_view s) : s_(s) {}

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("'") + c + "'");
  }
  bool accept_dots() {
    skip();
    if (s_.substr(i_, 2) == "..") {
      i_ += 2;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) error("identifier");
    return std::string(s_.substr(start, i_ - start));
  }
  Rational rational() {
    skip();
    std::size_t start = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ < s_.size() && s_[i_] == '/') {
      ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    if (start == i_) error("rational number");
    std::string text(s_.substr(start, i_ - start));
    if (text[0] == '+') text.erase(0, 1);
    return parse_rational(text);
  }
  long integer() {
    Rational r = rational();
    if (r.get_den() != 1) error("integer");
    return r.get_num().get_si();
  }
  bool at_end() {
    skip();
    return i_ >= s_.size();
  }
  [[noreturn]] void error(const std::string& expected) {
    skip();
    std::string found = i_ < s_.size() ? std::string(1, s_[i_]) : "end of input";
    throw SyntaxError(i_, {expected}, found);
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

SampleGrid parse_grid(std::string_view text, const ChartPtr& chart) {
  GridLexer lx(text);
  std::string head = lx.ident();
  lx.expect('(');
  SampleGrid g;
  if (head == "lattice") {
    // Either a single range for all axes, or axis:range pairs.
    bool per_axis = [&] {
      GridLexer probe = lx;
      try {
        probe.ident();
        return probe.peek(':');
      } catch (const SyntaxError&) {
        return false;
      }
    }();
    if (!per_axis) {
      Rational lo = lx.rational();
      if (!lx.accept_dots()) lx.error("'..'");
      Rational hi = lx.rational();
      lx.expect(':');
      long steps = lx.integer();
      lx.expect(')');
      g = uniform_lattice(chart, lo, hi, static_cast<int>(steps));
    } else {
      std::vector<AxisRange> ranges;
      do {
        std::string name = lx.ident();
        auto idx = chart->index_of(name);
        if (!idx) fail(ErrorCode::UnknownCoordinate, name);
        lx.expect(':');
        Rational lo = lx.rational();
        if (!lx.accept_dots()) lx.error("'..'");
        Rational hi = lx.rational();
        lx.expect(':');
        long steps = lx.integer();
        ranges.push_back({*idx, lo, hi, static_cast<int>(steps)});
      } while (lx.accept(','));
      lx.expect(')');
      g = lattice_grid(chart, ranges);
    }
  } else if (head == "random") {
    std::uint64_t seed = 0;
    long count = 0;
    Rational box = 1;
    bool have_seed = false, have_count = false;
    do {
      std::string key = lx.ident();
      lx.expect('=');
      if (key == "seed") {
        seed = static_cast<std::uint64_t>(lx.integer());
        have_seed = true;
      } else if (key == "count") {
        count = lx.integer();
        have_count = true;
      } else if (key == "box") {
        box = lx.rational();
      } else {
        fail(ErrorCode::InvalidInput, "unknown random() key '" + key + "'");
      }
    } while (lx.accept(','));
    lx.expect(')');
    if (!have_seed || !have_count) fail(ErrorCode::InvalidInput, "random() needs seed and count");
    g = random_grid(chart, seed, static_cast<int>(count), box);
  } else if (head == "points") {
    std::vector<std::vector<Rational>> coords;
    do {
      lx.expect('(');
      std::vector<Rational> c;
      do {
        c.push_back(lx.rational());
      } while (lx.accept(','));
      lx.expect(')');
      if (static_cast<int>(c.size()) != chart->dim()) {
        fail(ErrorCode::DimensionMismatch, "grid point has " + std::to_string(c.size()) +
                                               " coordinates, chart has " + std::to_string(chart->dim()));
      }
      coords.push_back(std::move(c));
    } while (lx.accept(','));
    lx.expect(')');
    g = explicit_grid(chart, std::move(coords));
  } else {
    fail(ErrorCode::InvalidInput, "unknown grid kind '" + head + "' (lattice, random, points)");
  }
  if (!lx.at_end()) lx.error("end of grid");
  return g;
}

SampleGrid on_section(const SampleGrid& base, const ChartPtr& total) {
  SampleGrid g;
  g.provenance = base.provenance;
  g.description = base.description + " x {mu = 0}";
  for (const auto& p : base.points) {
    std::vector<Rational> c = p.coords;
    c.resize(total->dim(), Rational(0));
    g.points.emplace_back(total, std::move(c));
  }
  return g;
}

SampleGrid off_section(const SampleGrid& base, const ChartPtr& total, const Rational& box, int steps) {
  if (base.points.empty()) return SampleGrid{base.provenance, base.description, {}, {}};
  const int fiber = total->dim() - base.points.front().chart->dim();
  std::vector<std::vector<Rational>> axes(fiber, axis_values(-box, box, steps));
  auto fiber_points = cartesian(axes);
  SampleGrid g;
  g.provenance = base.provenance;
  g.description = base.description + " x {mu in lattice(" + range_text(-box, box, steps) + ")}";
  for (const auto& p : base.points) {
    for (const auto& f : fiber_points) {
      std::vector<Rational> c = p.coords;
      c.insert(c.end(), f.begin(), f.end());
      g.points.emplace_back(total, std::move(c));
    }
  }
  return g;
}

std::string point_to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) s += ", ";
    s += to_string(p.coords[i]);
  }
  return s + ")";
}

}  // namespace coiso
