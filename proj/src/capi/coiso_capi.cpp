#include <coiso/coiso.h>

#include <new>
#include <string>

#include "commands.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "problem_file.hpp"

struct coiso_problem {
  std::string text;
};

struct coiso_report {
  std::string json;
  std::string artifact;
  int exit_code;
};

namespace {

thread_local std::string last_error;

coiso_status set_error(coiso_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
coiso_status run_command(coiso_report** out, const coiso_options* opts, F&& f) {
  if (!out) return set_error(COISO_INVALID_ARGUMENT, "null output pointer");
  *out = nullptr;
  coiso::CommandOptions o;
  try {
    if (opts) {
      o.timing = opts->timing != 0;
      o.steps = opts->steps;
      o.tolerance = opts->tolerance;
      if (opts->box) o.box = coiso::parse_decimal(opts->box);
      o.samples = opts->samples;
      o.seed = opts->seed;
    }
  } catch (const std::exception& e) {
    return set_error(COISO_INVALID_ARGUMENT, std::string("box: ") + e.what());
  }
  try {
    coiso::CommandResult r = f(o);
    *out = new coiso_report{r.report.dump(2) + "\n", std::move(r.artifact), r.exit_code};
    last_error.clear();
    return COISO_OK;
  } catch (const std::bad_alloc&) {
    return set_error(COISO_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(COISO_INTERNAL_ERROR, e.what());
  }
}

}  // namespace

extern "C" {

void coiso_options_init(coiso_options* opts) {
  if (!opts) return;
  opts->timing = 0;
  opts->steps = 1000;
  opts->tolerance = 1e-6;
  opts->box = nullptr;
  opts->samples = 20;
  opts->seed = 1;
}

coiso_status coiso_problem_new(const char* text, coiso_problem** out) {
  if (!text || !out) return set_error(COISO_INVALID_ARGUMENT, "null argument");
  try {
    *out = new coiso_problem{text};
  } catch (const std::bad_alloc&) {
    return set_error(COISO_OUT_OF_MEMORY, "out of memory");
  }
  return COISO_OK;
}

coiso_status coiso_problem_validate(const coiso_problem* problem) {
  if (!problem) return set_error(COISO_INVALID_ARGUMENT, "null problem");
  try {
    coiso::parse_problem(problem->text);
  } catch (const coiso::Error& e) {
    return set_error(COISO_PARSE_ERROR, std::string(coiso::error_code_name(e.code())) + ": " + e.what());
  } catch (const std::exception& e) {
    return set_error(COISO_INTERNAL_ERROR, e.what());
  }
  return COISO_OK;
}

void coiso_problem_free(coiso_problem* problem) { delete problem; }

#define COISO_SINGLE_COMMAND(name, fn)                                                             \
  coiso_status name(const coiso_problem* p, const coiso_options* opts, coiso_report** out) {      \
    if (!p) return set_error(COISO_INVALID_ARGUMENT, "null problem");                            \
    return run_command(out, opts, [&](const coiso::CommandOptions& o) { return fn(p->text, o); }); \
  }

COISO_SINGLE_COMMAND(coiso_check, coiso::cmd_check)
COISO_SINGLE_COMMAND(coiso_thicken, coiso::cmd_thicken)
COISO_SINGLE_COMMAND(coiso_nijenhuis, coiso::cmd_nijenhuis)
COISO_SINGLE_COMMAND(coiso_reeb, coiso::cmd_reeb)

#undef COISO_SINGLE_COMMAND

coiso_status coiso_moser_verify(const coiso_problem* p1, const coiso_problem* p2, const coiso_options* opts,
                                coiso_report** out) {
  if (!p1 || !p2) return set_error(COISO_INVALID_ARGUMENT, "null problem");
  return run_command(out, opts,
                     [&](const coiso::CommandOptions& o) { return coiso::cmd_moser(p1->text, p2->text, o); });
}

const char* coiso_report_json(const coiso_report* r) { return r ? r->json.c_str() : ""; }
const char* coiso_report_artifact(const coiso_report* r) { return r ? r->artifact.c_str() : ""; }
int coiso_report_exit_code(const coiso_report* r) { return r ? r->exit_code : 2; }
void coiso_report_free(coiso_report* r) { delete r; }

void coiso_set_threads(int n) { coiso::set_thread_override(n); }

const char* coiso_last_error(void) { return last_error.c_str(); }
const char* coiso_version(void) { return coiso::kToolVersion; }

}  // extern "C"
