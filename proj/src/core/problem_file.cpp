#include "problem_file.hpp"

#include <algorithm>
#include <cctype>

#include "errors.hpp"
#include "expr_parser.hpp"

namespace coiso {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Entry {
  std::string key;
  std::string value;
  int line;
  std::size_t column;  // 1-based column of the value's first character
};

int bracket_balance(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
  }
  return depth;
}

std::vector<Entry> split_entries(std::string_view text) {
  std::vector<Entry> out;
  std::size_t pos = 0;
  int line_no = 0;
  std::optional<Entry> open;
  int depth = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    if (open) {
      open->value += " " + std::string(line);
      depth += bracket_balance(line);
      if (depth <= 0) {
        open->value = trim(open->value);
        out.push_back(std::move(*open));
        open.reset();
      }
      continue;
    }
    std::string t = trim(line);
    if (t.empty()) continue;
    Entry e;
    e.line = line_no;
    if (t.rfind("chart", 0) == 0 && (t.size() == 5 || !std::isalnum(static_cast<unsigned char>(t[5])) )) {
      std::string rest = trim(std::string_view(t).substr(5));
      if (!rest.empty() && rest[0] == '=') rest = trim(std::string_view(rest).substr(1));
      e.key = "chart";
      e.value = rest;
      e.column = line.find("chart") + 6;
    } else {
      std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        fail(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      e.key = trim(line.substr(0, eq));
      std::size_t vstart = eq + 1;
      while (vstart < line.size() && std::isspace(static_cast<unsigned char>(line[vstart]))) ++vstart;
      e.column = vstart + 1;
      e.value = trim(line.substr(eq + 1));
      if (e.key.empty()) fail(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": missing key");
    }
    depth = bracket_balance(e.value);
    if (depth > 0) {
      open = std::move(e);
      continue;
    }
    out.push_back(std::move(e));
  }
  if (open) {
    fail(ErrorCode::SyntaxError, "line " + std::to_string(open->line) + ": unclosed bracket in '" + open->key + "'");
  }
  return out;
}

// Splits on commas outside brackets.
std::vector<std::string> split_top(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  std::string last = trim(s.substr(start));
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

std::string strip_brackets(const std::string& v, char open, char close, const std::string& what) {
  if (v.size() < 2 || v.front() != open || v.back() != close) {
    fail(ErrorCode::SyntaxError, what + " must be written " + std::string(1, open) + " ... " + std::string(1, close));
  }
  return v.substr(1, v.size() - 2);
}

std::vector<std::string> parse_name_list(const std::string& value, const std::string& what) {
  std::vector<std::string> names;
  for (auto& n : split_top(strip_brackets(value, '(', ')', what))) {
    if (!is_identifier(n)) fail(ErrorCode::SyntaxError, what + ": '" + n + "' is not an identifier");
    names.push_back(n);
  }
  return names;
}

int parse_int(const std::string& v, const std::string& what) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(ErrorCode::SyntaxError, what + " must be an integer, got '" + v + "'");
  }
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  std::string s = trim(text);
  if (s.find('/') != std::string::npos) return parse_rational(s);
  std::size_t epos = s.find_first_of("eE");
  long exponent = 0;
  std::string mant = s.substr(0, epos);
  if (epos != std::string::npos) {
    try {
      exponent = std::stol(s.substr(epos + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::SyntaxError, "malformed number '" + s + "'");
    }
  }
  std::size_t dot = mant.find('.');
  if (dot != std::string::npos) {
    exponent -= static_cast<long>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  if (mant.empty() || mant == "-" || mant == "+") fail(ErrorCode::SyntaxError, "malformed number '" + s + "'");
  if (mant[0] == '+') mant.erase(0, 1);
  Rational r = parse_rational(mant);
  mpz_class ten = 10;
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    r *= Rational(scale);
  } else {
    r /= Rational(scale);
  }
  return r;
}

SampleGrid ProblemFile::grid_or_default() const {
  if (grid) return *grid;
  return uniform_lattice(chart, -1, 1, 3);
}

const GeometrySpec& ProblemFile::require_spec() const {
  if (!spec) fail(ErrorCode::InvalidInput, "file has no 'kind' line");
  return *spec;
}

std::vector<int> ProblemFile::fiber_or_default() const {
  if (fiber) return *fiber;
  std::vector<int> out;
  for (int i = 0; i < chart->dim(); ++i) {
    if (chart->names[i].rfind("mu", 0) == 0) out.push_back(i);
  }
  return out;
}

ProblemFile parse_problem(std::string_view text) {
  std::vector<Entry> entries = split_entries(text);
  std::map<std::string, const Entry*> by_key;
  const Entry* chart_entry = nullptr;
  for (const auto& e : entries) {
    if (e.key == "chart") {
      if (chart_entry) {
        fail(ErrorCode::InvalidInput, "line " + std::to_string(e.line) +
                                          ": second chart declaration; multi-chart atlases are not supported, "
                                          "files describe a single chart");
      }
      chart_entry = &e;
      continue;
    }
    if (by_key.count(e.key)) {
      fail(ErrorCode::InvalidInput, "line " + std::to_string(e.line) + ": duplicate key '" + e.key + "'");
    }
    by_key[e.key] = &e;
  }
  if (!chart_entry) fail(ErrorCode::InvalidInput, "missing 'chart (...)' line");

  ProblemFile pf;
  const Entry* current = chart_entry;
  try {
    pf.chart = make_chart("chart", parse_name_list(chart_entry->value, "chart"));
    const ChartPtr& chart = pf.chart;

    auto take = [&](const std::string& key) -> const Entry* {
      auto it = by_key.find(key);
      if (it == by_key.end()) return nullptr;
      current = it->second;
      const Entry* e = it->second;
      by_key.erase(it);
      return e;
    };

    if (const Entry* e = take("kind")) {
      auto kind = parse_kind(e->value);
      if (!kind) fail(ErrorCode::InvalidInput, "unknown kind '" + e->value + "'");
      GeometrySpec s;
      s.family = kind->first;
      s.nondegenerate = kind->second;
      s.chart = chart;
      const bool indexed = s.family == Family::KSymplectic || s.family == Family::KCosymplectic ||
                           s.family == Family::KContact;
      auto form = [&](const std::string& key, std::optional<int> degree) -> std::optional<Form> {
        const Entry* fe = take(key);
        if (!fe) return std::nullopt;
        Form f = parse_form(fe->value, chart, degree);
        if (!degree && f.is_zero()) fail(ErrorCode::BadDegree, key + " is zero; its degree is undetermined");
        return f;
      };
      if (auto f = form("xi", 1)) s.xi = std::move(*f);
      const std::optional<int> omega_degree =
          s.family == Family::Multisymplectic ? std::nullopt : std::optional<int>(2);
      if (indexed) {
        for (int j = 1;; ++j) {
          auto e1 = form("eta" + std::to_string(j), 1);
          auto w = form("omega" + std::to_string(j), omega_degree);
          if (!e1 && !w) break;
          if (e1) s.etas.push_back(std::move(*e1));
          if (w) s.omegas.push_back(std::move(*w));
        }
      } else {
        if (auto f = form("eta", 1)) s.etas.push_back(std::move(*f));
        if (auto f = form("omega", omega_degree)) s.omegas.push_back(std::move(*f));
      }
      current = e;
      check_spec(s);
      pf.spec = std::move(s);
    }

    if (const Entry* e = take("P")) {
      std::vector<int> vertical;
      std::vector<Form> covectors;
      for (const auto& item : split_top(strip_brackets(e->value, '{', '}', "P"))) {
        std::size_t colon = item.find(':');
        if (colon == std::string::npos) fail(ErrorCode::SyntaxError, "P entries are 'coordinate: covector'");
        std::string name = trim(std::string_view(item).substr(0, colon));
        auto idx = chart->index_of(name);
        if (!idx) fail(ErrorCode::UnknownCoordinate, name);
        vertical.push_back(*idx);
        covectors.push_back(parse_form(std::string_view(item).substr(colon + 1), chart, 1));
      }
      std::vector<int> sorted = vertical;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::vector<Scalar>> corr;
      for (std::size_t A = 0; A < vertical.size(); ++A) {
        std::vector<Scalar> row;
        for (int i = 0; i < chart->dim(); ++i) {
          Scalar c = covectors[A].coefficient({i});
          if (std::binary_search(sorted.begin(), sorted.end(), i)) {
            if (!c.is_zero()) {
              fail(ErrorCode::NotFoliatedForm, "P entry " + chart->names[vertical[A]] + " has a d" + chart->names[i] +
                                                   " component; corrections use horizontal covectors only");
            }
            continue;
          }
          row.push_back(-c);
        }
        corr.push_back(std::move(row));
      }
      pf.projector = ProjectorField(chart, vertical, std::move(corr));
    }

    const bool cocontact = pf.spec && pf.spec->family == Family::Cocontact;
    if (const Entry* e = take("reeb")) pf.reeb.push_back({"R", parse_vector_field(e->value, chart)});
    if (const Entry* e = take("reeb_xi")) pf.reeb.push_back({"R_xi", parse_vector_field(e->value, chart)});
    if (const Entry* e = take("reeb_eta")) pf.reeb.push_back({"R_eta", parse_vector_field(e->value, chart)});
    for (int j = 1;; ++j) {
      const Entry* e = take("reeb" + std::to_string(j));
      if (!e) break;
      std::string label = cocontact ? (j == 1 ? "R_xi" : "R_eta") : "R" + std::to_string(j);
      pf.reeb.push_back({label, parse_vector_field(e->value, chart)});
    }

    if (const Entry* e = take("frame")) {
      std::vector<VectorField> frame;
      for (const auto& item : split_top(strip_brackets(e->value, '[', ']', "frame"))) {
        frame.push_back(parse_vector_field(item, chart));
      }
      pf.frame = std::move(frame);
    }
    if (const Entry* e = take("grid")) pf.grid = parse_grid(e->value, chart);
    if (const Entry* e = take("ell")) pf.ell = parse_int(e->value, "ell");
    if (const Entry* e = take("offsection_box")) {
      pf.offsection_box = parse_decimal(e->value);
      if (pf.offsection_box <= 0) fail(ErrorCode::InvalidInput, "offsection_box must be positive");
    }
    if (const Entry* e = take("offsection_steps")) {
      pf.offsection_steps = parse_int(e->value, "offsection_steps");
      if (pf.offsection_steps < 1) fail(ErrorCode::InvalidInput, "offsection_steps must be >= 1");
    }
    if (const Entry* e = take("fiber")) {
      std::vector<int> idx;
      for (const auto& n : parse_name_list(e->value, "fiber")) {
        auto i = chart->index_of(n);
        if (!i) fail(ErrorCode::UnknownCoordinate, n);
        idx.push_back(*i);
      }
      pf.fiber = std::move(idx);
    }
    if (const Entry* e = take("fiber_filter")) {
      auto i = chart->index_of(e->value);
      if (!i) fail(ErrorCode::UnknownCoordinate, e->value);
      pf.fiber_filter = *i;
    }
    if (!by_key.empty()) {
      current = by_key.begin()->second;
      fail(ErrorCode::InvalidInput, "unknown key '" + current->key + "'");
    }
  } catch (const SyntaxError& e) {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(current->line) + ", column " +
                                            std::to_string(current->column + e.offset()) + ": " + e.what());
  } catch (const Error& e) {
    std::string msg = e.what();
    if (msg.rfind("line ", 0) == 0) throw;
    throw Error(e.code(), "line " + std::to_string(current->line) + " (" + current->key + "): " + msg);
  }
  return pf;
}

std::string write_problem(const GeometrySpec& spec, const std::string& grid_line,
                          const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "chart (";
  for (int i = 0; i < spec.chart->dim(); ++i) out += (i ? ", " : "") + spec.chart->names[i];
  out += ")\n";
  out += "kind = " + kind_name(spec) + "\n";
  for (const auto& [name, f] : named_forms(spec)) out += name + " = " + f->to_string() + "\n";
  if (!grid_line.empty()) out += "grid = " + grid_line + "\n";
  return out;
}

std::string on_section_grid_line(const SampleGrid& base_grid, const ChartPtr& total) {
  if (base_grid.provenance == SampleGrid::Provenance::Lattice && !base_grid.ranges.empty()) {
    std::string s = "lattice(";
    for (std::size_t i = 0; i < base_grid.ranges.size(); ++i) {
      const auto& r = base_grid.ranges[i];
      if (i) s += ", ";
      s += total->names[r.axis] + ":" + to_string(r.lo) + ".." + to_string(r.hi) + ":" + std::to_string(r.steps);
    }
    return s + ")";
  }
  std::string s = "points(";
  for (std::size_t i = 0; i < base_grid.points.size(); ++i) {
    if (i) s += ", ";
    std::vector<Rational> c = base_grid.points[i].coords;
    c.resize(total->dim(), Rational(0));
    s += point_to_string(Point(total, c));
  }
  return s + ")";
}

}  // namespace coiso
