#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#include "aps.hpp"
#include "errors.hpp"
#include "moser.hpp"
#include "parallel.hpp"
#include "problem_file.hpp"
#include "structures.hpp"
#include "thicken.hpp"

namespace coiso {

using nlohmann::json;

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json header(const std::string& command, const std::string& digest) {
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = "coiso";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["input_digest"] = "fnv1a64:" + digest;
  return j;
}

std::vector<std::string> point_list(const SampleGrid& grid, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(point_to_string(grid.points[i]));
  return out;
}

json verdict_json(const Verdict& v, const SampleGrid* grid) {
  json j;
  j["name"] = v.name;
  j["certified"] = v.certified;
  j["ok"] = v.ok;
  if (!v.failing_points.empty()) {
    j["failing_points"] = grid ? json(point_list(*grid, v.failing_points)) : json(v.failing_points);
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

std::vector<std::string> vecs_to_strings(const std::vector<Vec>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(vec_to_string(v));
  return out;
}

// Collects verdicts and derives the exit code from them.
struct Verdicts {
  json list = json::array();
  bool all_ok = true;

  void add(const Verdict& v, const SampleGrid* grid) {
    list.push_back(verdict_json(v, grid));
    all_ok = all_ok && v.ok;
  }
  // Informational verdicts are reported without affecting the exit code.
  void add_info(const Verdict& v, const SampleGrid* grid) {
    json j = verdict_json(v, grid);
    j["informational"] = true;
    list.push_back(std::move(j));
  }
};

CommandResult run(const std::string& command, const std::string& digest_input, const CommandOptions& opts,
                  const std::function<CommandResult(json&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult res;
  json rep = header(command, fnv1a_hex(digest_input));
  try {
    res = body(rep);
    res.report = std::move(rep);
  } catch (const Error& e) {
    res = error_result(command, error_code_name(e.code()), e.what());
    res.report["input_digest"] = "fnv1a64:" + fnv1a_hex(digest_input);
  }
  if (opts.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    res.report["timing_ms"] = ms;
  }
  return res;
}

CommandResult finish(json& rep, Verdicts& v, std::string artifact = {}) {
  rep["verdicts"] = std::move(v.list);
  rep["ok"] = v.all_ok;
  CommandResult r;
  r.exit_code = v.all_ok ? 0 : 1;
  r.artifact = std::move(artifact);
  return r;
}

std::string digest_text(const std::string& command, std::initializer_list<std::string_view> parts,
                        const std::string& flags = {}) {
  std::string s = command;
  for (auto p : parts) {
    s.push_back('\0');
    s.append(p);
  }
  s.push_back('\0');
  s += flags;
  return s;
}

json forms_json(const GeometrySpec& spec) {
  json j = json::object();
  for (const auto& [name, f] : named_forms(spec)) j[name] = f->to_string();
  return j;
}

// Coordinate directions spanning V at the first grid point, for a default
// trivial projector.
std::vector<int> coordinate_vertical(const GeometrySpec& spec, const SampleGrid& grid) {
  const Subspace v = characteristic_distribution(spec, grid.points.front());
  std::vector<int> idx;
  const int n = spec.chart->dim();
  for (int i = 0; i < n; ++i) {
    if (v.contains(unit_vector(n, i))) idx.push_back(i);
  }
  if (static_cast<int>(idx.size()) != v.dim()) {
    fail(ErrorCode::NotFoliatedForm, "characteristic distribution " + v.to_string() +
                                         " is not spanned by coordinate fields; give a P block");
  }
  return idx;
}

std::string projector_text(const ProjectorField& P) {
  const ChartPtr& chart = P.chart();
  std::string s = "{ ";
  for (std::size_t A = 0; A < P.vertical().size(); ++A) {
    Form c(chart, 1);
    for (std::size_t a = 0; a < P.horizontal().size(); ++a) {
      c.add({P.horizontal()[a]}, -P.correction(A, a));
    }
    if (A) s += ", ";
    s += chart->names[P.vertical()[A]] + ": " + c.to_string();
  }
  return s + " }";
}

}  // namespace

CommandResult error_result(const std::string& command, const std::string& code, const std::string& message) {
  CommandResult r;
  r.report = header(command, fnv1a_hex(""));
  r.report["ok"] = false;
  r.report["error"] = {{"code", code}, {"message", message}};
  r.exit_code = 2;
  return r;
}

CommandResult cmd_check(std::string_view text, const CommandOptions& opts) {
  return run("check", digest_text("check", {text}), opts, [&](json& rep) {
    ProblemFile pf = parse_problem(text);
    const GeometrySpec& spec = pf.require_spec();
    const SampleGrid grid = pf.grid_or_default();
    const StructureReport sr = validate(spec, grid);

    Verdicts v;
    for (const auto& c : sr.closedness) v.add(c, &grid);
    Verdict cr{"constant rank on the grid", false, sr.constant_rank, sr.degenerate_points, ""};
    v.add(cr, &grid);
    for (const auto& a : sr.axioms) v.add(a, &grid);

    rep["kind"] = kind_name(spec);
    rep["chart"] = spec.chart->names;
    rep["forms"] = forms_json(spec);
    rep["grid"] = {{"description", grid.description}, {"points", grid.points.size()}};

    // Generic profile: the one with the smallest V.
    const PointProfile* generic = &sr.profile.front();
    for (const auto& p : sr.profile) {
      if (p.dim_v < generic->dim_v) generic = &p;
    }
    json ranks = json::object();
    for (const auto& [name, r] : generic->ranks) ranks[name] = r;
    rep["ranks"] = ranks;
    rep["dim_v"] = generic->dim_v;
    rep["constant_rank"] = sr.constant_rank;
    rep["degenerate_points"] = point_list(grid, sr.degenerate_points);
    const Subspace vfirst = characteristic_distribution(spec, grid.points[generic->index]);
    rep["characteristic"] = {{"at", point_to_string(grid.points[generic->index])},
                             {"basis", vecs_to_strings(vfirst.basis())}};

    std::optional<std::vector<VectorField>> frame = pf.frame;
    const bool user_frame = frame.has_value();
    if (!frame) frame = characteristic_frame(spec);
    json inv;
    if (!frame) {
      inv["status"] = "skipped";
      inv["detail"] = "symbolic frame of V grew too large; give a 'frame' line";
    } else {
      std::vector<std::string> names;
      for (const auto& f : *frame) names.push_back(f.to_string());
      inv["frame"] = names;
      inv["frame_source"] = user_frame ? "file" : "symbolic";
      if (user_frame) {
        Verdict spans{"frame spans the characteristic distribution", false, true, {}, ""};
        for (std::size_t i = 0; i < grid.points.size(); ++i) {
          const Subspace vi = characteristic_distribution(spec, grid.points[i]);
          std::vector<Vec> vals;
          for (const auto& f : *frame) vals.push_back(f.evaluate(grid.points[i]));
          if (!(Subspace::span(vi.ambient(), vals) == vi)) {
            spans.ok = false;
            spans.failing_points.push_back(i);
          }
        }
        v.add(spans, &grid);
      }
      Verdict iv{"characteristic distribution is involutive", false, true, {}, ""};
      try {
        InvolutivityResult r = involutivity_check(*frame, grid);
        iv.ok = r.involutive;
        if (!r.involutive) {
          iv.failing_points.push_back(r.point_index);
          iv.detail = "[X" + std::to_string(r.i) + ", X" + std::to_string(r.j) + "] = " + vec_to_string(r.bracket) +
                      " leaves the span";
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DependentFrame) throw;
        iv.ok = false;
        iv.detail = e.what();
      }
      v.add(iv, &grid);
    }
    rep["involutivity"] = inv;
    return finish(rep, v);
  });
}

CommandResult cmd_thicken(std::string_view text, const CommandOptions& opts) {
  return run("thicken", digest_text("thicken", {text}), opts, [&](json& rep) {
    ProblemFile pf = parse_problem(text);
    const GeometrySpec& spec = pf.require_spec();
    const SampleGrid grid = pf.grid_or_default();
    const ProjectorField P =
        pf.projector ? *pf.projector : ProjectorField::trivial(spec.chart, coordinate_vertical(spec, grid));
    const ThickeningResult res = thicken(spec, P, grid, pf.fiber_filter);
    const ChartPtr& total = res.chart.total;
    const SampleGrid on = on_section(grid, total);
    const SampleGrid off = off_section(grid, total, pf.offsection_box, pf.offsection_steps);
    const bool nz = nijenhuis(P).is_zero();
    const ThickeningReport tr = verify_thickening(res, on, off, nz, pf.reeb, pf.ell);

    Verdicts v;
    for (const auto& c : tr.closedness) v.add(c, &on);
    v.add(tr.zero_section, &on);
    v.add(tr.on_section, &on);
    if (tr.off_section_required) {
      v.add(tr.off_section, &off);
    } else {
      v.add_info(tr.off_section, &off);
    }
    v.add(tr.coisotropic, &on);
    if (tr.coisotropic_top_level) v.add(*tr.coisotropic_top_level, &on);
    if (tr.reeb_extension) v.add(*tr.reeb_extension, &on);

    rep["kind_in"] = kind_name(spec);
    rep["kind_out"] = kind_name(res.spec_out);
    rep["dimension"] = {{"base", res.chart.base_dim()}, {"total", total->dim()}};
    json labels = json::array();
    const auto fib = res.chart.fiber_indices();
    for (std::size_t i = 0; i < res.chart.labels.size(); ++i) {
      labels.push_back({{"coordinate", total->names[fib[i]]}, {"label", res.chart.label_name(i)}});
    }
    rep["fiber_labels"] = labels;
    rep["projector"] = projector_text(P);
    rep["nijenhuis_zero"] = nz;
    rep["theta"] = res.theta.to_string();
    rep["forms_out"] = forms_json(res.spec_out);
    rep["ell"] = tr.ell;
    if (!tr.witnesses.empty()) rep["coisotropy_witnesses"] = vecs_to_strings(tr.witnesses);
    json reeb = json::array();
    for (std::size_t i = 0; i < tr.reeb_on_section.size(); ++i) {
      json fams = json::array();
      for (const auto& f : tr.reeb_on_section[i]) {
        fams.push_back({{"label", f.label}, {"particular", vec_to_string(f.particular)},
                        {"kernel", vecs_to_strings(f.kernel)}});
      }
      reeb.push_back({{"point", point_to_string(on.points[i])}, {"families", fams}});
    }
    if (!reeb.empty()) rep["reeb_on_section"] = reeb;
    rep["grids"] = {{"on_section", on.points.size()}, {"off_section", off.points.size()}};

    std::vector<std::string> comments = {"thickening of a " + kind_name(spec) + " chart"};
    for (std::size_t i = 0; i < res.chart.labels.size(); ++i) {
      comments.push_back(total->names[fib[i]] + " pairs with " + res.chart.label_name(i));
    }
    std::string artifact = write_problem(res.spec_out, on_section_grid_line(grid, total), comments);
    return finish(rep, v, std::move(artifact));
  });
}

CommandResult cmd_nijenhuis(std::string_view text, const CommandOptions& opts) {
  return run("nijenhuis", digest_text("nijenhuis", {text}), opts, [&](json& rep) {
    ProblemFile pf = parse_problem(text);
    if (!pf.projector) fail(ErrorCode::InvalidInput, "no 'P = { ... }' block; nothing to analyse");
    const ProjectorField& P = *pf.projector;
    const SampleGrid grid = pf.grid_or_default();
    const NijenhuisTensor N = nijenhuis(P);
    const ChartPtr& chart = P.chart();

    json comps = json::array();
    for (const auto& [slots, out] : N.components) {
      json c = json::object();
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out[i].is_zero()) c[chart->names[i]] = out[i].to_string();
      }
      if (c.empty()) continue;
      comps.push_back({{"slots", {N.slot_name(slots.first), N.slot_name(slots.second)}}, {"value", c}});
    }
    json coeff = json::array();
    for (int A : P.vertical()) {
      for (std::size_t a = 0; a < P.horizontal().size(); ++a) {
        for (std::size_t b = a + 1; b < P.horizontal().size(); ++b) {
          const int ia = P.horizontal()[a];
          const int ib = P.horizontal()[b];
          Scalar c = N.display_coefficient(A, ia, ib);
          if (c.is_zero()) continue;
          coeff.push_back({{"vertical", chart->names[A]},
                           {"a", chart->names[ia]},
                           {"b", chart->names[ib]},
                           {"value", c.to_string()}});
        }
      }
    }
    rep["projector"] = projector_text(P);
    rep["components"] = comps;
    rep["coefficients"] = coeff;

    const ProjectorReport pr = verify_projector(P, grid);
    Verdicts v;
    v.add(Verdict{"P is idempotent", true, pr.idempotent, {}, ""}, nullptr);
    v.add(Verdict{"image of P is the vertical span", false, pr.image_ok, pr.image_failures, ""}, &grid);
    v.add(Verdict{"Nijenhuis tensor vanishes", true, N.is_zero(), {}, ""}, nullptr);
    Verdict hv{"horizontal frame brackets close", false, pr.horizontal_involutive, {}, ""};
    if (pr.involutivity_witness) hv.failing_points.push_back(*pr.involutivity_witness);
    v.add_info(hv, &grid);
    v.add(Verdict{"Nijenhuis verdict agrees with the bracket test", false, N.is_zero() == pr.horizontal_involutive,
                  {}, ""},
          nullptr);
    return finish(rep, v);
  });
}

CommandResult cmd_reeb(std::string_view text, const CommandOptions& opts) {
  return run("reeb", digest_text("reeb", {text}), opts, [&](json& rep) {
    ProblemFile pf = parse_problem(text);
    const GeometrySpec& spec = pf.require_spec();
    if (!has_reeb(spec.family)) fail(ErrorCode::InvalidInput, kind_name(spec) + " structures have no Reeb fields");
    const SampleGrid grid = pf.grid_or_default();
    const PreparedSpec prep(spec);

    struct PointResult {
      std::optional<std::vector<ReebFamily>> families;
      std::string error;
    };
    auto results = parallel_map(grid.points.size(), [&](std::size_t i) {
      PointResult r;
      try {
        r.families = reeb_solve(prep, grid.points[i].coords);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoReebAtPoint) throw;
        r.error = e.what();
      }
      return r;
    });

    Verdicts v;
    Verdict solv{"Reeb system solvable", true, true, {}, ""};
    json pts = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      json p = {{"point", point_to_string(grid.points[i])}};
      if (!results[i].families) {
        solv.ok = false;
        solv.failing_points.push_back(i);
        if (solv.detail.empty()) solv.detail = results[i].error;
        p["error"] = results[i].error;
      } else {
        json fams = json::array();
        for (const auto& f : *results[i].families) {
          fams.push_back({{"label", f.label}, {"particular", vec_to_string(f.particular)},
                          {"kernel", vecs_to_strings(f.kernel)}, {"free_functions", f.kernel.size()}});
        }
        p["families"] = fams;
      }
      pts.push_back(std::move(p));
    }
    solv.certified = false;
    v.add(solv, &grid);
    rep["kind"] = kind_name(spec);
    rep["points"] = pts;

    if (!pf.reeb.empty()) {
      for (const auto& user : pf.reeb) {
        Verdict mem{user.label + " = " + user.field.to_string() + " lies in the Reeb family", false, true, {}, ""};
        bool label_found = true;
        for (std::size_t i = 0; i < results.size(); ++i) {
          if (!results[i].families) continue;
          const ReebFamily* fam = nullptr;
          for (const auto& f : *results[i].families) {
            if (f.label == user.label) fam = &f;
          }
          if (!fam) {
            label_found = false;
            break;
          }
          Vec d = user.field.evaluate(grid.points[i]);
          for (std::size_t c = 0; c < d.size(); ++c) d[c] -= fam->particular[c];
          if (!Subspace::span(static_cast<int>(d.size()), fam->kernel).contains(d)) {
            mem.ok = false;
            mem.failing_points.push_back(i);
          }
        }
        if (!label_found) fail(ErrorCode::InvalidInput, "no Reeb family labelled " + user.label + " for this kind");
        v.add(mem, &grid);
      }

      ProjectorField P = pf.projector ? *pf.projector
                                      : ProjectorField::trivial(spec.chart, coordinate_vertical(spec, grid));
      for (const auto& user : pf.reeb) P = projector_for_reeb(P, user.field);
      Verdict kills{"P(R) = 0 for the given Reeb fields", true, true, {}, ""};
      for (const auto& user : pf.reeb) {
        if (!P.tensor().apply(user.field).is_zero()) {
          kills.ok = false;
          kills.detail += (kills.detail.empty() ? "" : "; ") + user.label + " is not horizontal";
        }
      }
      v.add(kills, nullptr);
      rep["reeb_projector"] = "P = " + projector_text(P);
    }
    return finish(rep, v);
  });
}

CommandResult cmd_moser(std::string_view text1, std::string_view text2, const CommandOptions& opts) {
  const std::string flags = "steps=" + std::to_string(opts.steps) + ";tol=" + json(opts.tolerance).dump() +
                            ";box=" + to_string(opts.box) + ";samples=" + std::to_string(opts.samples) +
                            ";seed=" + std::to_string(opts.seed);
  return run("moser-verify", digest_text("moser-verify", {text1, text2}, flags), opts, [&](json& rep) {
    ProblemFile pf1 = parse_problem(text1);
    ProblemFile pf2 = parse_problem(text2);
    if (!same_chart(pf1.chart, pf2.chart)) {
      fail(ErrorCode::ChartMismatch, "the two files declare different charts");
    }
    // Re-home the second file's forms on the first chart.
    const GeometrySpec& s1 = pf1.require_spec();
    GeometrySpec s2 = pf2.require_spec();
    if (s1.family != s2.family || s1.nondegenerate != s2.nondegenerate) {
      fail(ErrorCode::InvalidInput, "the two files declare different kinds");
    }
    s2.chart = s1.chart;
    auto rehome = [&](Form& f) { f = f.lift(s1.chart); };
    if (s2.xi) rehome(*s2.xi);
    for (auto& f : s2.etas) rehome(f);
    for (auto& f : s2.omegas) rehome(f);

    rep["kind"] = kind_name(s1);
    rep["options"] = {{"steps", opts.steps}, {"tolerance", opts.tolerance}, {"box", to_string(opts.box)},
                      {"samples", opts.samples}, {"seed", opts.seed}};
    Verdicts v;
    const std::vector<int> fiber = pf1.fiber_or_default();
    const bool two_forms = s1.etas.empty() && !s1.xi && s1.omegas.size() == 1 && s1.omegas[0].degree() == 2;

    if (two_forms && !fiber.empty()) {
      const Form& w1 = s1.omegas[0];
      const Form& w2 = s2.omegas[0];
      const SampleGrid samples = random_grid(s1.chart, opts.seed, opts.samples, opts.box);
      MoserRun run = make_moser_run(w1, w2, fiber, samples.points, opts.steps, opts.tolerance, to_double(opts.box));
      json fib = json::array();
      for (int i : fiber) fib.push_back(s1.chart->names[i]);
      rep["fiber"] = fib;
      rep["primitive"] = run.primitive.theta.to_string();
      v.add(Verdict{"d(primitive) = omega2 - omega1", true,
                    exterior_derivative(run.primitive.theta) == run.primitive.source, {}, ""},
            nullptr);

      // X_t vanishes where theta does: check exactly at the samples pushed to mu = 0.
      Verdict fixed{"Moser field vanishes on the zero section", true, true, {}, ""};
      for (std::size_t i = 0; i < samples.points.size(); ++i) {
        std::vector<Rational> x = samples.points[i].coords;
        for (int f : fiber) x[f] = 0;
        const Point p(s1.chart, x);
        for (const Rational& t : {Rational(0), Rational(1, 2), Rational(1)}) {
          Vec X;
          try {
            X = moser_vector_field_at(run, p, t);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateAtPoint) throw;
            fixed.ok = false;
            fixed.detail = e.what();
            break;
          }
          if (!is_zero(X)) {
            fixed.ok = false;
            fixed.failing_points.push_back(i);
            break;
          }
        }
      }
      fixed.certified = true;
      v.add(fixed, nullptr);

      const MoserReport mr = moser_flow_verify(run);
      json sj = json::array();
      for (const auto& s : mr.samples) {
        json e = {{"point", s.point}, {"max_error", s.max_error}, {"pass", s.pass}};
        e["aborted_at_t"] = s.aborted_at_t ? json(*s.aborted_at_t) : json(nullptr);
        if (!s.diagnostic.empty()) e["diagnostic"] = s.diagnostic;
        sj.push_back(std::move(e));
      }
      rep["samples"] = sj;
      rep["max_error"] = mr.max_error;
      v.add(Verdict{"pullback of omega2 by the time-1 flow matches omega1", false, mr.pass, {},
                    "max error " + json(mr.max_error).dump() + " against tolerance " + json(opts.tolerance).dump()},
            nullptr);
    } else {
      rep["flow"] = "not run: the flow verifier handles pairs of 2-forms with fiber coordinates";
    }

    if (has_reeb(s1.family)) {
      const SampleGrid grid = pf1.grid_or_default();
      const ProportionalityReport pr = reeb_proportionality_check(s1, s2, grid);
      Verdict pv{"Reeb fields proportional", false, pr.all_proportional, {}, ""};
      for (std::size_t i = 0; i < pr.proportional.size(); ++i) {
        if (!pr.proportional[i]) pv.failing_points.push_back(i);
      }
      json prop = {{"all_proportional", pr.all_proportional}};
      if (pr.witness) {
        prop["witness"] = point_to_string(grid.points[*pr.witness]);
        prop["witness_family"] = pr.witness_label;
      }
      rep["reeb_proportionality"] = prop;
      v.add(pv, &grid);
    }
    return finish(rep, v);
  });
}

}  // namespace coiso
