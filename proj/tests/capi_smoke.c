/* Exercises the public header from plain C. */
#include <coiso/coiso.h>

#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                        \
  do {                                                      \
    if (!(cond)) {                                          \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                           \
    }                                                       \
  } while (0)

int main(void) {
  coiso_options opts;
  coiso_problem* p = NULL;
  coiso_problem* bad = NULL;
  coiso_problem* g1 = NULL;
  coiso_report* r = NULL;

  coiso_options_init(&opts);
  EXPECT(strcmp(coiso_version(), "0.1.0") == 0);
  EXPECT(coiso_problem_new(NULL, &p) == COISO_INVALID_ARGUMENT);
  EXPECT(strlen(coiso_last_error()) > 0);

  EXPECT(coiso_problem_new("chart (q, p, z)\nkind = presymplectic\nomega = dq^dp\n", &p) == COISO_OK);
  EXPECT(coiso_problem_validate(p) == COISO_OK);
  EXPECT(coiso_check(p, &opts, &r) == COISO_OK);
  EXPECT(coiso_report_exit_code(r) == 0);
  EXPECT(strstr(coiso_report_json(r), "\"coiso-report/1\"") != NULL);
  EXPECT(strcmp(coiso_report_artifact(r), "") == 0);
  coiso_report_free(r);

  EXPECT(coiso_thicken(p, NULL, &r) == COISO_OK);
  EXPECT(coiso_report_exit_code(r) == 0);
  EXPECT(strstr(coiso_report_artifact(r), "kind = symplectic") != NULL);
  coiso_report_free(r);

  EXPECT(coiso_nijenhuis(p, NULL, &r) == COISO_OK);
  EXPECT(coiso_report_exit_code(r) == 2);
  coiso_report_free(r);

  EXPECT(coiso_problem_new("chart (q, p)\nomega = dq^^dp\n", &bad) == COISO_OK);
  EXPECT(coiso_problem_validate(bad) == COISO_PARSE_ERROR);
  EXPECT(strstr(coiso_last_error(), "line 2") != NULL);
  EXPECT(coiso_check(bad, NULL, NULL) == COISO_INVALID_ARGUMENT);

  EXPECT(coiso_problem_new("chart (q, p, z, mu)\nkind = symplectic\nomega = dq^dp + dmu^dz\n", &g1) == COISO_OK);
  opts.samples = 2;
  opts.steps = 10;
  opts.box = "0.1";
  EXPECT(coiso_moser_verify(g1, g1, &opts, &r) == COISO_OK);
  EXPECT(coiso_report_exit_code(r) == 0);
  coiso_report_free(r);
  opts.box = "nonsense";
  EXPECT(coiso_moser_verify(g1, g1, &opts, &r) == COISO_INVALID_ARGUMENT);
  EXPECT(r == NULL);

  coiso_set_threads(2);
  EXPECT(coiso_reeb(p, NULL, &r) == COISO_OK);
  EXPECT(coiso_report_exit_code(r) == 2);
  coiso_report_free(r);
  coiso_set_threads(0);

  coiso_problem_free(p);
  coiso_problem_free(bad);
  coiso_problem_free(g1);
  coiso_report_free(NULL);
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
