#include <math.h>
#include <stdio.h>
#include <string.h>

#include "ladderlab.h"

static int fails = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "line %d: %s\n", __LINE__, #cond);         \
      fails++;                                                   \
    }                                                            \
  } while (0)

int main(void) {
  double z = 1.0;
  EXPECT(ll_hardy_z(14.134725141734695, &z) == LL_STATUS_OK);
  EXPECT(fabs(z) < 1e-6);

  EXPECT(ll_hardy_z(-1.0, &z) == LL_STATUS_DOMAIN);
  EXPECT(ll_last_error_message() != NULL);

  EXPECT(ll_theta(100.0, NULL) == LL_STATUS_NULL_POINTER);

  LlLadder *ladder = NULL;
  EXPECT(ll_ladder_new(NULL, &ladder) == LL_STATUS_OK);
  double pts[3];
  EXPECT(ll_ladder_chain(ladder, 1e4, 3, LL_REVERSE_METHOD_MAINTERM_INVERT, pts, 3) == LL_STATUS_OK);
  EXPECT(pts[0] > 1e4 && pts[1] > pts[0] && pts[2] > pts[1]);
  double back = 0.0;
  EXPECT(ll_ladder_phi1(ladder, pts[0], &back) == LL_STATUS_OK);
  EXPECT(fabs(back - 1e4) < 1e-3);
  ll_ladder_free(ladder);

  double q = 0.0;
  EXPECT(ll_fermat_rational(1, 1, 1, 3, &q) == LL_STATUS_OK && q == 2.0);

  EXPECT(strlen(ll_version()) > 0);
  if (fails == 0) puts("ok");
  return fails == 0 ? 0 : 1;
}
